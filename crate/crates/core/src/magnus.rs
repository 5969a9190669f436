//! Floquet-Magnus effective Hamiltonian of the Trotter drive.
//!
//! The drive is piecewise constant over one period `dt`: `2 H0` on the first
//! half, `2 H1` on the second, so `U(dt) = exp(-i H1 dt) exp(-i H0 dt)`. The
//! zeroth-order term is `H0 + H1`; the first-order double integral collapses
//! analytically to `(1/2i) [H1, H0]` (the two same-segment regions vanish and
//! the cross region has area `dt^2/4` with integrand `4 [H1, H0]`), so no
//! quadrature is involved.

use serde::Serialize;

use crate::dense;
use crate::error::Result;
use crate::model::{self, ModelParams};
use crate::pauli::PauliSum;

/// `Omega_0 = H0 + H1`.
pub fn omega0(p: &ModelParams) -> Result<PauliSum> {
    model::build_hamiltonian(p)
}

/// `Omega_1 = (1/2i) [H1, H0]`, exact in Pauli-sum form.
pub fn omega1(p: &ModelParams) -> Result<PauliSum> {
    let h0 = model::build_h0(p)?;
    let h1 = model::build_h1(p)?;
    h1.commutator(&h0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BchResidualRow {
    pub dt: f64,
    /// `||U(dt) - exp(-i dt Omega_0)||_F`
    pub residual_omega0: f64,
    /// `||U(dt) - exp(-i dt (Omega_0 + dt Omega_1))||_F`
    pub residual_omega01: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MagnusResult {
    pub residual_table: Vec<BchResidualRow>,
    /// Fitted log-log slopes of the two residual columns.
    pub slope_omega0: f64,
    pub slope_omega01: f64,
}

/// Dense BCH residual scan over the given step durations (`N <= 8`).
pub fn bch_residual_scan(p: &ModelParams, dts: &[f64]) -> Result<MagnusResult> {
    let h0d = model::build_h0(p)?.to_dense()?;
    let h1d = model::build_h1(p)?.to_dense()?;
    let om0 = omega0(p)?;
    let om1 = omega1(p)?;
    let mut table = Vec::with_capacity(dts.len());
    for &dt in dts {
        let u = dense::expm_hermitian(&h1d, dt)? * dense::expm_hermitian(&h0d, dt)?;
        let e0 = dense::frobenius_diff(&u, &dense::expm_hermitian(&om0.to_dense()?, dt)?);
        let mut heff = om0.clone();
        heff.axpy(dt, &om1)?;
        let e1 = dense::frobenius_diff(&u, &dense::expm_hermitian(&heff.to_dense()?, dt)?);
        table.push(BchResidualRow {
            dt,
            residual_omega0: e0,
            residual_omega01: e1,
        });
    }
    let slope = |pick: fn(&BchResidualRow) -> f64| -> f64 {
        let pts: Vec<(f64, f64)> = table
            .iter()
            .filter(|r| pick(r) > 0.0)
            .map(|r| (r.dt.ln(), pick(r).ln()))
            .collect();
        crate::observables::linear_fit(&pts).0
    };
    Ok(MagnusResult {
        slope_omega0: slope(|r| r.residual_omega0),
        slope_omega01: slope(|r| r.residual_omega01),
        residual_table: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    #[test]
    fn omega0_is_term_union_of_h0_and_h1() {
        let p = ModelParams::main_experiment(6, 2.0);
        let om0 = omega0(&p).unwrap();
        let h0 = model::build_h0(&p).unwrap();
        let h1 = model::build_h1(&p).unwrap();
        assert_eq!(om0.len(), h0.len() + h1.len());
        for (&(x, z), &c) in h0.iter() {
            assert!((om0.coefficient(x, z) - c).abs() < 1e-15);
        }
        for (&(x, z), &c) in h1.iter() {
            assert!((om0.coefficient(x, z) - c).abs() < 1e-15);
        }
        // dense spectra agree by construction
        let ev_a = dense::hermitian_eigenvalues(&om0.to_dense().unwrap());
        let mut sum = h0.clone();
        sum.add_assign(&h1).unwrap();
        let ev_b = dense::hermitian_eigenvalues(&sum.to_dense().unwrap());
        for (a, b) in ev_a.iter().zip(ev_b.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn omega1_vanishes_when_h1_does() {
        let mut p = ModelParams::main_experiment(6, 2.0);
        p.h_x = 0.0;
        p.v_xx = 0.0;
        assert!(omega1(&p).unwrap().is_empty());
    }

    #[test]
    fn omega1_field_only_has_three_site_families_only() {
        let mut p = ModelParams::main_experiment(8, 3.17);
        p.v_xx = 0.0;
        let om1 = omega1(&p).unwrap();
        assert!(!om1.is_empty());
        for (&(x, z), _) in om1.iter() {
            let weight = (x | z).count_ones();
            assert_eq!(weight, 3, "field-only Omega_1 terms span three sites");
        }
        // spot-check one J_e h_x coefficient
        assert!(
            (om1.coefficient_of(&[(1, Axis::Y), (2, Axis::X), (3, Axis::Z)])
                .unwrap()
                - p.j_e * p.h_x)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn omega1_matches_dense_commutator_integral() {
        let p = ModelParams::main_experiment(6, 3.17);
        let om1 = omega1(&p).unwrap();
        let h0d = model::build_h0(&p).unwrap().to_dense().unwrap();
        let h1d = model::build_h1(&p).unwrap().to_dense().unwrap();
        let comm = (&h1d * &h0d - &h0d * &h1d) * num_complex::Complex64::new(0.0, -0.5);
        assert!(dense::max_abs_diff(&om1.to_dense().unwrap(), &comm) < 1e-12);
    }

    #[test]
    fn omega1_preserves_parities_and_locality() {
        let p = ModelParams::main_experiment(10, 2.0);
        let om1 = omega1(&p).unwrap();
        let gens = model::symmetry_generators(&p).unwrap();
        for g in [&gens.g_e, &gens.g_o] {
            let gs = PauliSum::from_string(g, 1.0).unwrap();
            assert!(om1.commutator(&gs).unwrap().is_empty());
        }
        // every term lives on at most 4 contiguous sites
        for (&(x, z), _) in om1.iter() {
            let support = x | z;
            let lo = support.trailing_zeros();
            let hi = 128 - support.leading_zeros();
            assert!(hi - lo <= 4, "term spans more than 4 contiguous sites");
        }
    }

    #[test]
    fn commuting_drive_has_zero_residuals() {
        let mut p = ModelParams::main_experiment(6, 2.0);
        p.h_x = 0.0;
        p.v_xx = 0.0;
        let result = bch_residual_scan(&p, &[0.5, 0.25]).unwrap();
        for row in &result.residual_table {
            assert!(row.residual_omega0 < 1e-12);
            assert!(row.residual_omega01 < 1e-12);
        }
    }

    #[test]
    fn residual_orders_at_n6() {
        let p = ModelParams::main_experiment(6, 3.17);
        let result = bch_residual_scan(&p, &[0.5, 0.25, 0.125]).unwrap();
        assert!(
            (result.slope_omega0 - 2.0).abs() < 0.3,
            "Omega_0 slope {}",
            result.slope_omega0
        );
        assert!(
            (result.slope_omega01 - 3.0).abs() < 0.3,
            "Omega_0+Omega_1 slope {}",
            result.slope_omega01
        );
        // halving dt cuts the corrected residual by roughly 8x
        let r = &result.residual_table;
        let ratio = r[1].residual_omega01 / r[2].residual_omega01;
        assert!(ratio > 5.0 && ratio < 11.0, "ratio {ratio}");
    }
}
