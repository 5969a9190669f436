//! Small dense complex-matrix helpers shared by the oracles and the
//! exact-evolution backend. Everything here is `2^N x 2^N` with `N <= 14`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type DMat = DMatrix<Complex64>;
pub type DVec = nalgebra::DVector<Complex64>;

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMat, b: &DMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of `a - b`.
pub fn frobenius_diff(a: &DMat, b: &DMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest absolute entry of the anti-Hermitian residual `a - a^dag`.
pub fn anti_hermitian_residual(a: &DMat) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `exp(-i t H)` for Hermitian `H`, by scaling-and-squaring with a Taylor
/// core.
///
/// Eigendecomposition is avoided on purpose: the cluster Hamiltonians have
/// highly degenerate spectra on which pure-Rust Hermitian eigensolvers lose
/// several digits in the eigenvectors. With the argument scaled below 1/2,
/// twenty Taylor terms leave a remainder under 1e-19, and the squaring chain
/// is short for every matrix this crate feeds in.
pub fn expm_hermitian(h: &DMat, t: f64) -> Result<DMat> {
    let dim = h.nrows();
    if dim != h.ncols() {
        return Err(Error::Numeric("expm of a non-square matrix".into()));
    }
    // 1-norm of A = -i t H
    let mut norm1: f64 = 0.0;
    for c in 0..dim {
        let col: f64 = (0..dim).map(|r| h[(r, c)].norm()).sum();
        norm1 = norm1.max(col * t.abs());
    }
    let s = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let factor = Complex64::new(0.0, -t / (1u64 << s) as f64);
    let b = h.map(|x| x * factor);
    let mut acc = DMat::identity(dim, dim);
    let mut term = DMat::identity(dim, dim);
    for k in 1..=20u32 {
        term = &term * &b;
        term.scale_mut(1.0 / k as f64);
        acc += &term;
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    Ok(acc)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DMat) -> Vec<f64> {
    let eig = h.clone().symmetric_eigen();
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Global phase `p` (unit modulus) minimizing `|a - p b|` in the sense of
/// aligning the largest-magnitude entry of `b`.
pub fn align_phase(a: &DMat, b: &DMat) -> Complex64 {
    let mut best = (0usize, 0usize);
    let mut mag = -1.0;
    for r in 0..b.nrows() {
        for c in 0..b.ncols() {
            if b[(r, c)].norm() > mag {
                mag = b[(r, c)].norm();
                best = (r, c);
            }
        }
    }
    let p = a[best] / b[best];
    if p.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        p / p.norm()
    }
}

/// `max_abs_diff(a, p*b)` after aligning the global phase `p`.
pub fn max_abs_diff_up_to_phase(a: &DMat, b: &DMat) -> f64 {
    let p = align_phase(a, b);
    let mut worst: f64 = 0.0;
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            worst = worst.max((a[(r, c)] - p * b[(r, c)]).norm());
        }
    }
    worst
}

/// Checks `U U^dag = 1` to `tol`.
pub fn unitarity_residual(u: &DMat) -> f64 {
    let prod = u * u.adjoint();
    let id = DMat::identity(u.nrows(), u.ncols());
    max_abs_diff(&prod, &id)
}

/// Solves the 3x3 system `C x = p`. Fails when `C` is numerically singular.
pub fn solve3(c: &[[f64; 3]; 3], p: &[f64; 3]) -> Result<[f64; 3]> {
    let m = nalgebra::Matrix3::new(
        c[0][0], c[0][1], c[0][2], c[1][0], c[1][1], c[1][2], c[2][0], c[2][1], c[2][2],
    );
    let v = nalgebra::Vector3::new(p[0], p[1], p[2]);
    let lu = m.lu();
    match lu.solve(&v) {
        Some(x) if x.iter().all(|e| e.is_finite()) => Ok([x[0], x[1], x[2]]),
        _ => Err(Error::Numeric("singular readout-correction matrix".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_pauli_z() {
        // exp(-i t Z) = diag(e^{-it}, e^{it})
        let mut z = DMat::zeros(2, 2);
        z[(0, 0)] = Complex64::new(1.0, 0.0);
        z[(1, 1)] = Complex64::new(-1.0, 0.0);
        let u = expm_hermitian(&z, 0.7).unwrap();
        assert!((u[(0, 0)] - Complex64::new(0.7f64.cos(), -(0.7f64.sin()))).norm() < 1e-13);
        assert!((u[(1, 1)] - Complex64::new(0.7f64.cos(), 0.7f64.sin())).norm() < 1e-13);
        assert!(unitarity_residual(&u) < 1e-13);
    }

    #[test]
    fn phase_alignment() {
        let a = DMat::identity(2, 2) * Complex64::new(0.0, 1.0);
        let b = DMat::identity(2, 2);
        let p = align_phase(&a, &b);
        assert!((p - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(max_abs_diff_up_to_phase(&a, &b) < 1e-14);
    }

    #[test]
    fn solve3_roundtrip() {
        let c = [[0.9, 0.05, 0.02], [0.08, 0.9, 0.08], [0.02, 0.05, 0.9]];
        let p = [0.6, 0.3, 0.1];
        let x = solve3(&c, &p).unwrap();
        for r in 0..3 {
            let back: f64 = (0..3).map(|k| c[r][k] * x[k]).sum();
            assert!((back - p[r]).abs() < 1e-12);
        }
    }
}
