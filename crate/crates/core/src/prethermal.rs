//! First-order prethermal strong zero modes (PSZMs) and their diagnostics.
//!
//! The left-edge operators are dressed versions of `Z_L` and `X_L` whose
//! first-order coefficients carry the resonance denominators
//! `J_o^2 - J_e^2` (both flavors) and `J_o^2 - 4 J_e^2` (flavor X). At the
//! resonances `J_o = J_e` and `J_o = 2 J_e` the construction diverges and is
//! refused. Right-edge modes follow from the mirror map `i -> N + 1 - i`
//! with `J_e <-> J_o` (stabilizer parities swap under reflection).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{self, ModelParams};
use crate::pauli::{reverse_mask, Axis, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Z,
    X,
}

/// Relative guard for the first-order denominators: a denominator is
/// resonant when `|d| < 0.05 * max(J_e^2, J_o^2)`.
pub const RESONANCE_GUARD: f64 = 0.05;

fn guard_scale(p: &ModelParams) -> f64 {
    (p.j_e * p.j_e).max(p.j_o * p.j_o)
}

fn check_denominator(p: &ModelParams, d: f64, name: &'static str) -> Result<()> {
    if d.abs() < RESONANCE_GUARD * guard_scale(p) {
        return Err(Error::Resonant {
            denominator: name,
            detail: format!("value {d:.6} at J_o/J_e = {:.4}", p.ratio()),
        });
    }
    Ok(())
}

fn term(n: u32, factors: &[(u32, Axis)]) -> Result<PauliString> {
    PauliString::from_factors(n, factors)
}

/// Left-edge first-order PSZM, flavor Z:
/// `Z_L - (h_x/J_e) X1 X2 Z3
///      + V/(J_o^2 - J_e^2) (J_e X1 Z3 + J_o Y1 Y2 X3 Z4)`.
fn psi_z_left(p: &ModelParams) -> Result<PauliSum> {
    let n = p.n_sites;
    let d1 = p.j_o * p.j_o - p.j_e * p.j_e;
    let has_first_order = p.h_x != 0.0 || p.v_xx != 0.0;
    if p.v_xx != 0.0 {
        check_denominator(p, d1, "J_o = J_e")?;
    }
    let mut psi = PauliSum::new(n);
    psi.add_string(&term(n, &[(1, Axis::Z)])?, 1.0)?;
    if !has_first_order {
        return Ok(psi);
    }
    if p.h_x != 0.0 {
        psi.add_string(
            &term(n, &[(1, Axis::X), (2, Axis::X), (3, Axis::Z)])?,
            -p.h_x / p.j_e,
        )?;
    }
    if p.v_xx != 0.0 {
        let pref = p.v_xx / d1;
        psi.add_string(&term(n, &[(1, Axis::X), (3, Axis::Z)])?, pref * p.j_e)?;
        psi.add_string(
            &term(n, &[(1, Axis::Y), (2, Axis::Y), (3, Axis::X), (4, Axis::Z)])?,
            pref * p.j_o,
        )?;
    }
    Ok(psi)
}

/// Left-edge first-order PSZM, flavor X:
/// `X_L - (h_x/J_o) X1 X2 X3 Z4
///      - V/(J_o^2 - J_e^2) (J_o X2 X3 Z4 + J_e Z1 Z2 Z3)
///      + V J_e/(J_o^2 - 4 J_e^2) [ Y1 Z2 Y3
///                                  + (2J_e/J_o - J_o/J_e) X1 X2 Z4
///                                  - X1 Y2 Y3 X4 Z5
///                                  - (2J_e/J_o) Y1 Y4 Z5 ]`.
fn psi_x_left(p: &ModelParams) -> Result<PauliSum> {
    let n = p.n_sites;
    if n < 6 {
        return Err(Error::InvalidParams(
            "flavor-X zero mode spans five sites; need n >= 6".into(),
        ));
    }
    let d1 = p.j_o * p.j_o - p.j_e * p.j_e;
    let d2 = p.j_o * p.j_o - 4.0 * p.j_e * p.j_e;
    if p.v_xx != 0.0 {
        check_denominator(p, d1, "J_o = J_e")?;
        check_denominator(p, d2, "J_o = 2 J_e")?;
    }
    let mut psi = PauliSum::new(n);
    psi.add_string(&term(n, &[(1, Axis::X), (2, Axis::Z)])?, 1.0)?;
    if p.h_x != 0.0 {
        psi.add_string(
            &term(n, &[(1, Axis::X), (2, Axis::X), (3, Axis::X), (4, Axis::Z)])?,
            -p.h_x / p.j_o,
        )?;
    }
    if p.v_xx != 0.0 {
        let pref1 = -p.v_xx / d1;
        psi.add_string(
            &term(n, &[(2, Axis::X), (3, Axis::X), (4, Axis::Z)])?,
            pref1 * p.j_o,
        )?;
        psi.add_string(
            &term(n, &[(1, Axis::Z), (2, Axis::Z), (3, Axis::Z)])?,
            pref1 * p.j_e,
        )?;
        let pref2 = p.v_xx * p.j_e / d2;
        psi.add_string(&term(n, &[(1, Axis::Y), (2, Axis::Z), (3, Axis::Y)])?, pref2)?;
        psi.add_string(
            &term(n, &[(1, Axis::X), (2, Axis::X), (4, Axis::Z)])?,
            pref2 * (2.0 * p.j_e / p.j_o - p.j_o / p.j_e),
        )?;
        psi.add_string(
            &term(
                n,
                &[(1, Axis::X), (2, Axis::Y), (3, Axis::Y), (4, Axis::X), (5, Axis::Z)],
            )?,
            -pref2,
        )?;
        psi.add_string(
            &term(n, &[(1, Axis::Y), (4, Axis::Y), (5, Axis::Z)])?,
            -pref2 * 2.0 * p.j_e / p.j_o,
        )?;
    }
    Ok(psi)
}

/// Reflects every term through the chain center (`site i -> N + 1 - i`).
fn mirror_sum(sum: &PauliSum) -> PauliSum {
    let n = sum.n_sites();
    let mut out = PauliSum::new(n);
    for (&(x, z), &c) in sum.iter() {
        out.add_term(reverse_mask(x, n), reverse_mask(z, n), c);
    }
    out
}

/// Constructs the first-order PSZM for the requested edge and flavor.
/// Resonant parameter choices return [`Error::Resonant`] naming the
/// vanishing denominator.
pub fn pszm_first_order(p: &ModelParams, edge: Edge, flavor: Flavor) -> Result<PauliSum> {
    p.validate()?;
    match edge {
        Edge::Left => match flavor {
            Flavor::Z => psi_z_left(p),
            Flavor::X => psi_x_left(p),
        },
        Edge::Right => {
            let swapped = ModelParams {
                j_e: p.j_o,
                j_o: p.j_e,
                ..*p
            };
            let left = match flavor {
                Flavor::Z => psi_z_left(&swapped),
                Flavor::X => psi_x_left(&swapped),
            }
            .map_err(|e| match e {
                // rename the denominators back into the unswapped frame
                Error::Resonant { denominator, detail } => Error::Resonant {
                    denominator: match denominator {
                        "J_o = 2 J_e" => "J_e = 2 J_o",
                        other => other,
                    },
                    detail,
                },
                other => other,
            })?;
            Ok(mirror_sum(&left))
        }
    }
}

/// Diagnostics of the three PSZM defining conditions.
#[derive(Clone, Debug, Serialize)]
pub struct PszmReport {
    /// `|| (1/2i) [psi, H] ||_F` (normalized Frobenius norm).
    pub commutator_norm: f64,
    /// `|| psi^2 - 1 ||_F`.
    pub square_deviation: f64,
    pub commutes_with_g_e: bool,
    pub commutes_with_g_o: bool,
    pub anticommutes_with_g_e: bool,
    pub anticommutes_with_g_o: bool,
    /// Denominators currently inside the resonance guard.
    pub resonant_denominators: Vec<&'static str>,
}

/// Evaluates the PSZM conditions for an operator against `H0 + H1` using
/// exact Pauli algebra (no dense matrices).
pub fn verify_pszm(psi: &PauliSum, p: &ModelParams) -> Result<PszmReport> {
    let h = model::build_hamiltonian(p)?;
    let comm = psi.commutator(&h)?;
    let mut sq = psi.square();
    sq.add_term(0, 0, -1.0);
    let gens = model::symmetry_generators(p)?;
    Ok(PszmReport {
        commutator_norm: comm.frobenius_norm(),
        square_deviation: sq.frobenius_norm(),
        commutes_with_g_e: psi.commutes_with_string(&gens.g_e),
        commutes_with_g_o: psi.commutes_with_string(&gens.g_o),
        anticommutes_with_g_e: psi.anticommutes_with_string(&gens.g_e),
        anticommutes_with_g_o: psi.anticommutes_with_string(&gens.g_o),
        resonant_denominators: resonant_denominators(p),
    })
}

fn resonant_denominators(p: &ModelParams) -> Vec<&'static str> {
    let scale = RESONANCE_GUARD * guard_scale(p);
    let mut out = Vec::new();
    if (p.j_o * p.j_o - p.j_e * p.j_e).abs() < scale {
        out.push("J_o = J_e");
    }
    if (p.j_o * p.j_o - 4.0 * p.j_e * p.j_e).abs() < scale {
        out.push("J_o = 2 J_e");
    }
    if (p.j_e * p.j_e - 4.0 * p.j_o * p.j_o).abs() < scale {
        out.push("J_e = 2 J_o");
    }
    out
}

/// One row of the resonance scan: the three first-order denominators and
/// which constructions they block.
#[derive(Clone, Debug, Serialize)]
pub struct ResonanceRow {
    pub ratio: f64,
    pub res_z: bool,
    pub res_x_left: bool,
    pub res_x_right: bool,
    /// `J_o^2 - J_e^2`
    pub d1: f64,
    /// `J_o^2 - 4 J_e^2`
    pub d2: f64,
    /// `J_e^2 - 4 J_o^2`
    pub d3: f64,
}

/// Scans coupling ratios for first-order resonances.
pub fn resonance_scan(p: &ModelParams, ratios: &[f64]) -> Vec<ResonanceRow> {
    ratios
        .iter()
        .map(|&ratio| {
            let q = ModelParams {
                j_o: ratio * p.j_e,
                ..*p
            };
            let scale = RESONANCE_GUARD * guard_scale(&q);
            let d1 = q.j_o * q.j_o - q.j_e * q.j_e;
            let d2 = q.j_o * q.j_o - 4.0 * q.j_e * q.j_e;
            let d3 = q.j_e * q.j_e - 4.0 * q.j_o * q.j_o;
            ResonanceRow {
                ratio,
                res_z: d1.abs() < scale,
                res_x_left: d1.abs() < scale || d2.abs() < scale,
                res_x_right: d1.abs() < scale || d3.abs() < scale,
                d1,
                d2,
                d3,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::logical_operators;

    fn params_at(n: u32, ratio: f64) -> ModelParams {
        ModelParams::main_experiment(n, ratio)
    }

    #[test]
    fn zeroth_order_limit_is_bare_logical() {
        let mut p = params_at(8, 3.17);
        p.h_x = 0.0;
        p.v_xx = 0.0;
        let ops = logical_operators(&p).unwrap();
        for (flavor, bare) in [(Flavor::Z, &ops.z_l), (Flavor::X, &ops.x_l)] {
            let psi = pszm_first_order(&p, Edge::Left, flavor).unwrap();
            assert_eq!(psi.len(), 1);
            let want = PauliSum::from_string(bare, 1.0).unwrap();
            assert_eq!(psi, want);
            let report = verify_pszm(&psi, &p).unwrap();
            assert!(report.commutator_norm < 1e-14);
            assert!(report.square_deviation < 1e-14);
        }
    }

    #[test]
    fn psi_z_term_content_at_off_resonant_point() {
        let p = params_at(8, 3.17);
        let psi = pszm_first_order(&p, Edge::Left, Flavor::Z).unwrap();
        assert_eq!(psi.len(), 4);
        let d1 = p.j_o * p.j_o - p.j_e * p.j_e;
        assert!((psi.coefficient_of(&[(1, Axis::Z)]).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (psi.coefficient_of(&[(1, Axis::X), (2, Axis::X), (3, Axis::Z)]).unwrap()
                + p.h_x / p.j_e)
                .abs()
                < 1e-15
        );
        assert!(
            (psi.coefficient_of(&[(1, Axis::X), (3, Axis::Z)]).unwrap() - p.v_xx * p.j_e / d1)
                .abs()
                < 1e-15
        );
        assert!(
            (psi.coefficient_of(&[(1, Axis::Y), (2, Axis::Y), (3, Axis::X), (4, Axis::Z)])
                .unwrap()
                - p.v_xx * p.j_o / d1)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn resonances_fire_where_the_denominators_vanish() {
        let at = |ratio: f64, flavor: Flavor| {
            pszm_first_order(&params_at(8, ratio), Edge::Left, flavor)
        };
        assert!(matches!(
            at(1.0, Flavor::Z),
            Err(Error::Resonant {
                denominator: "J_o = J_e",
                ..
            })
        ));
        assert!(matches!(at(1.0, Flavor::X), Err(Error::Resonant { .. })));
        assert!(at(2.0, Flavor::Z).is_ok());
        assert!(matches!(
            at(2.0, Flavor::X),
            Err(Error::Resonant {
                denominator: "J_o = 2 J_e",
                ..
            })
        ));
        assert!(at(3.17, Flavor::Z).is_ok());
        assert!(at(3.17, Flavor::X).is_ok());
        // right edge: flavor X breaks at J_e = 2 J_o instead
        assert!(matches!(
            pszm_first_order(&params_at(8, 0.5), Edge::Right, Flavor::X),
            Err(Error::Resonant {
                denominator: "J_e = 2 J_o",
                ..
            })
        ));
        assert!(pszm_first_order(&params_at(8, 0.5), Edge::Left, Flavor::X).is_ok());
    }

    #[test]
    fn symmetry_pairing_left_edge() {
        let p = params_at(8, 3.17);
        let z = pszm_first_order(&p, Edge::Left, Flavor::Z).unwrap();
        let rz = verify_pszm(&z, &p).unwrap();
        assert!(rz.anticommutes_with_g_o && rz.commutes_with_g_e);
        let x = pszm_first_order(&p, Edge::Left, Flavor::X).unwrap();
        let rx = verify_pszm(&x, &p).unwrap();
        assert!(rx.anticommutes_with_g_e && rx.commutes_with_g_o);
    }

    #[test]
    fn mirror_consistency() {
        let p = params_at(10, 3.17);
        let swapped = ModelParams {
            j_e: p.j_o,
            j_o: p.j_e,
            ..p
        };
        for flavor in [Flavor::Z, Flavor::X] {
            let right = pszm_first_order(&p, Edge::Right, flavor).unwrap();
            let left_of_swapped = pszm_first_order(&swapped, Edge::Left, flavor).unwrap();
            let r1 = verify_pszm(&right, &p).unwrap();
            let r2 = verify_pszm(&left_of_swapped, &swapped).unwrap();
            assert!((r1.commutator_norm - r2.commutator_norm).abs() < 1e-12);
            assert!((r1.square_deviation - r2.square_deviation).abs() < 1e-12);
        }
    }

    #[test]
    fn dressed_mode_commutes_better_than_bare() {
        let p = params_at(8, 3.17);
        let ops = logical_operators(&p).unwrap();
        for (flavor, bare) in [(Flavor::Z, &ops.z_l), (Flavor::X, &ops.x_l)] {
            let psi = pszm_first_order(&p, Edge::Left, flavor).unwrap();
            let dressed = verify_pszm(&psi, &p).unwrap().commutator_norm;
            let bare_norm = verify_pszm(&PauliSum::from_string(bare, 1.0).unwrap(), &p)
                .unwrap()
                .commutator_norm;
            assert!(
                dressed < bare_norm,
                "dressed {dressed} vs bare {bare_norm}"
            );
        }
    }

    #[test]
    fn commutator_scales_quadratically_in_perturbation() {
        let base = params_at(8, 3.17);
        let mut norms = Vec::new();
        for s in [1.0, 0.5, 0.25] {
            let p = ModelParams {
                h_x: base.h_x * s,
                v_xx: base.v_xx * s,
                ..base
            };
            let psi = pszm_first_order(&p, Edge::Left, Flavor::Z).unwrap();
            norms.push(verify_pszm(&psi, &p).unwrap().commutator_norm);
        }
        let slope1 = (norms[0] / norms[1]).ln() / 2f64.ln();
        let slope2 = (norms[1] / norms[2]).ln() / 2f64.ln();
        assert!((slope1 - 2.0).abs() < 0.2, "slope {slope1}");
        assert!((slope2 - 2.0).abs() < 0.2, "slope {slope2}");
    }

    #[test]
    fn scan_flags_match_known_resonances() {
        let p = params_at(8, 1.0);
        let rows = resonance_scan(&p, &[1.0, 2.0, 3.17, 0.5]);
        assert!(rows[0].res_z && rows[0].res_x_left && rows[0].res_x_right);
        assert!(!rows[1].res_z && rows[1].res_x_left && !rows[1].res_x_right);
        assert!(!rows[2].res_z && !rows[2].res_x_left && !rows[2].res_x_right);
        assert!(!rows[3].res_z && !rows[3].res_x_left && rows[3].res_x_right);
    }
}
