//! Single-qubit gate folding (`U3`) and three-level readout correction.

use num_complex::Complex64;

use crate::dense::solve3;
use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

/// `U3(theta, phi, lambda)`, the canonical single-qubit rotation
/// `e^{-i phi/2 Z} e^{-i theta/2 Y} e^{-i lambda/2 Z}` written with a real,
/// nonnegative top-left entry:
///
/// ```text
/// [ cos(t/2)              -e^{i lambda} sin(t/2)        ]
/// [ e^{i phi} sin(t/2)     e^{i (phi+lambda)} cos(t/2)  ]
/// ```
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let eip = Complex64::from_polar(1.0, phi);
    let eil = Complex64::from_polar(1.0, lambda);
    [
        [Complex64::new(c, 0.0), -eil * s],
        [eip * s, eip * eil * c],
    ]
}

/// Decomposes a 2x2 unitary as `e^{i alpha} U3(theta, phi, lambda)`.
///
/// Returns `(theta, phi, lambda, alpha)`. At `theta = 0` or `pi` the pair
/// `(phi, lambda)` is gauge-fixed by `lambda = 0`.
pub fn u3_decompose(u: &Mat2) -> Result<(f64, f64, f64, f64)> {
    let tol = 1e-12;
    // unitarity sanity
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    if (det.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Numeric(format!(
            "u3_decompose: matrix not unitary (|det| = {})",
            det.norm()
        )));
    }
    let c = u[0][0].norm();
    let s = u[1][0].norm();
    let theta = 2.0 * s.atan2(c);
    if s < tol {
        // diagonal: U = e^{i alpha} diag(1, e^{i phi})
        let alpha = u[0][0].arg();
        let phi = (u[1][1] / u[0][0]).arg();
        return Ok((0.0, phi, 0.0, alpha));
    }
    if c < tol {
        // anti-diagonal: U = e^{i alpha} [[0, -1], [e^{i phi}, 0]] with lambda = 0
        let alpha = (-u[0][1]).arg();
        let phi = u[1][0].arg() - alpha;
        return Ok((std::f64::consts::PI, wrap_angle(phi), 0.0, alpha));
    }
    let alpha = u[0][0].arg();
    let phi = u[1][0].arg() - alpha;
    let lambda = (-u[0][1]).arg() - alpha;
    Ok((theta, wrap_angle(phi), wrap_angle(lambda), alpha))
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = a % two_pi;
    if a > std::f64::consts::PI {
        a -= two_pi;
    } else if a <= -std::f64::consts::PI {
        a += two_pi;
    }
    a
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Folds a run of single-qubit unitaries (applied left to right in time) into
/// one `U3` plus a global phase: `product = e^{i alpha} U3(theta, phi, lambda)`.
pub fn fold_single_qubit(gates: &[Mat2]) -> Result<(f64, f64, f64, f64)> {
    let id = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let total = gates.iter().fold(id, |acc, g| mat2_mul(g, &acc));
    u3_decompose(&total)
}

/// Corrects a measured three-level probability vector with the readout
/// matrix `C` (columns: prepared state, rows: measured state), discards the
/// `|2>` population, renormalizes the qubit block, and returns `p0 - p1`.
pub fn readout_correct(p_exp: &[f64; 3], c: &[[f64; 3]; 3]) -> Result<f64> {
    let total: f64 = p_exp.iter().sum();
    if p_exp.iter().any(|p| *p < -1e-9) || (total - 1.0).abs() > 1e-6 {
        return Err(Error::Precondition(format!(
            "probabilities must be nonnegative and sum to 1 (sum = {total})"
        )));
    }
    let corrected = solve3(c, p_exp)?;
    let p0 = corrected[0].max(0.0);
    let p1 = corrected[1].max(0.0);
    let block = p0 + p1;
    if block <= 0.0 {
        return Err(Error::Numeric(
            "corrected qubit-block probability vanished".into(),
        ));
    }
    Ok((p0 - p1) / block)
}
