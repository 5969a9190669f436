//! Gates, layered circuits, and the Trotter-step circuit of the drive
//! `U(dt) = exp(-i H1 dt) exp(-i H0 dt)`.
//!
//! Conventions (fixed): `X(theta) = exp(-i theta/2 X)`,
//! `Z(phi) = exp(-i phi/2 Z)`, `CZ = diag(1,1,1,-1)`,
//! `CPhase(phi) = diag(1,1,1,e^{i phi})`. All other circuit angles follow
//! from requiring dense equality with the exponential product; the residual
//! bond phase is tracked in [`Circuit::global_phase`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardware::{self, Mat2};
use crate::model::CouplingProfile;

pub const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    U3 { theta: f64, phi: f64, lambda: f64 },
    X(f64),
    Z(f64),
    Hadamard,
    Cz,
    CPhase(f64),
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cz | Gate::CPhase(_))
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::U3 { theta, phi, lambda } => Gate::U3 {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            Gate::X(t) => Gate::X(-t),
            Gate::Z(t) => Gate::Z(-t),
            Gate::Hadamard => Gate::Hadamard,
            Gate::Cz => Gate::Cz,
            Gate::CPhase(p) => Gate::CPhase(-p),
        }
    }

    /// 2x2 matrix of a single-qubit gate.
    pub fn matrix(&self) -> Mat2 {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Gate::U3 { theta, phi, lambda } => hardware::u3_matrix(theta, phi, lambda),
            Gate::X(t) => {
                let (s, c) = ((t / 2.0).sin(), (t / 2.0).cos());
                [
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ]
            }
            Gate::Z(t) => [
                [Complex64::from_polar(1.0, -t / 2.0), zero],
                [zero, Complex64::from_polar(1.0, t / 2.0)],
            ],
            Gate::Hadamard => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::Cz | Gate::CPhase(_) => panic!("two-qubit gate has no 2x2 matrix"),
        }
    }

    /// Phase applied to the `|11>` component of the two targets.
    pub fn controlled_phase(&self) -> Complex64 {
        match *self {
            Gate::Cz => Complex64::new(-1.0, 0.0),
            Gate::CPhase(p) => Complex64::from_polar(1.0, p),
            _ => panic!("not a controlled-phase gate"),
        }
    }
}

/// A gate bound to its target site(s); two-qubit targets must be chain
/// neighbours.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub site: u32,
    pub site2: Option<u32>,
}

impl GateOp {
    pub fn single(gate: Gate, site: u32) -> Self {
        debug_assert!(!gate.is_two_qubit());
        GateOp {
            gate,
            site,
            site2: None,
        }
    }

    pub fn two(gate: Gate, a: u32, b: u32) -> Self {
        debug_assert!(gate.is_two_qubit());
        GateOp {
            gate,
            site: a,
            site2: Some(b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerKind {
    SingleQubit,
    TwoQubit,
}

/// One layer of gates acting on disjoint sites.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub kind: LayerKind,
    pub ops: Vec<GateOp>,
}

/// A layered gate sequence with a tracked scalar phase, so that the circuit
/// represents `e^{i global_phase} * (product of gate unitaries)` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_sites: u32,
    pub layers: Vec<Layer>,
    pub global_phase: f64,
}

impl Circuit {
    pub fn new(n_sites: u32) -> Self {
        Circuit {
            n_sites,
            layers: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for layer in &self.layers {
            for op in &layer.ops {
                if op.site == 0 || op.site > self.n_sites {
                    return Err(Error::SiteOutOfRange {
                        index: op.site,
                        n_sites: self.n_sites,
                    });
                }
                match (op.gate.is_two_qubit(), op.site2) {
                    (true, Some(b)) => {
                        if b == 0 || b > self.n_sites {
                            return Err(Error::SiteOutOfRange {
                                index: b,
                                n_sites: self.n_sites,
                            });
                        }
                        if op.site.abs_diff(b) != 1 {
                            return Err(Error::InvalidSpec(format!(
                                "two-qubit gate on non-neighbours {} and {}",
                                op.site, b
                            )));
                        }
                    }
                    (false, None) => {}
                    _ => return Err(Error::InvalidSpec("gate arity mismatch".into())),
                }
            }
        }
        Ok(())
    }

    pub fn push_layer(&mut self, kind: LayerKind, ops: Vec<GateOp>) {
        if !ops.is_empty() {
            self.layers.push(Layer { kind, ops });
        }
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.ops.len()).sum()
    }

    pub fn two_qubit_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.kind == LayerKind::TwoQubit)
            .count()
    }

    pub fn single_qubit_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.kind == LayerKind::SingleQubit)
            .count()
    }

    /// Appends all layers of `other`.
    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n_sites, other.n_sites);
        self.layers.extend(other.layers.iter().cloned());
        self.global_phase += other.global_phase;
    }

    /// The inverse circuit: layers reversed, every gate inverted.
    pub fn inverse(&self) -> Circuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| Layer {
                kind: l.kind,
                ops: l
                    .ops
                    .iter()
                    .map(|op| GateOp {
                        gate: op.gate.inverse(),
                        ..*op
                    })
                    .collect(),
            })
            .collect();
        Circuit {
            n_sites: self.n_sites,
            layers,
            global_phase: -self.global_phase,
        }
    }

    /// Folds every run of consecutive single-qubit layers into one `U3`
    /// layer per site, as the hardware compiler would. Gate unitaries are
    /// preserved exactly; residual scalar phases accumulate in
    /// `global_phase`.
    pub fn fold_single_qubit_runs(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_sites);
        out.global_phase = self.global_phase;
        let mut pending: Vec<Vec<Mat2>> = vec![Vec::new(); self.n_sites as usize + 1];

        let flush =
            |out: &mut Circuit, pending: &mut Vec<Vec<Mat2>>| -> Result<()> {
                let mut ops = Vec::new();
                for site in 1..=out.n_sites {
                    let run = std::mem::take(&mut pending[site as usize]);
                    if run.is_empty() {
                        continue;
                    }
                    let (theta, phi, lambda, alpha) = hardware::fold_single_qubit(&run)?;
                    out.global_phase += alpha;
                    ops.push(GateOp::single(Gate::U3 { theta, phi, lambda }, site));
                }
                out.push_layer(LayerKind::SingleQubit, ops);
                Ok(())
            };

        for layer in &self.layers {
            match layer.kind {
                LayerKind::SingleQubit => {
                    for op in &layer.ops {
                        pending[op.site as usize].push(op.gate.matrix());
                    }
                }
                LayerKind::TwoQubit => {
                    flush(&mut out, &mut pending)?;
                    out.push_layer(LayerKind::TwoQubit, layer.ops.clone());
                }
            }
        }
        flush(&mut out, &mut pending)?;
        Ok(out)
    }
}

fn cz_layers(n: u32) -> (Vec<GateOp>, Vec<GateOp>) {
    let odd = (1..n)
        .step_by(2)
        .map(|i| GateOp::two(Gate::Cz, i, i + 1))
        .collect();
    let even = (2..n)
        .step_by(2)
        .map(|i| GateOp::two(Gate::Cz, i, i + 1))
        .collect();
    (odd, even)
}

/// Builds one Trotter step for the given coupling profile.
///
/// The `H0` factor is exact: a sandwich of the full CZ chain around one layer
/// of `X(-2 J_m dt)` rotations turns each on-site rotation into
/// `exp(+i J_m dt K_m)`. The `H1` factor is exact as well: `X(2 h_x dt)`
/// rotations for the field, and for every bond a Hadamard-conjugated
/// `Z(2 v dt) (x) Z(2 v dt) . CPhase(-4 v dt)` block equal to
/// `exp(-i v dt X X)` up to the phase `v dt` per bond, which is tracked in
/// `global_phase` so the circuit equals the exponential product exactly.
pub fn build_trotter_step(profile: &CouplingProfile) -> Result<Circuit> {
    let n = profile.n_sites;
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "n must be even and >= 4, got {n}"
        )));
    }
    let dt = profile.dt;
    let mut c = Circuit::new(n);
    let (cz_odd, cz_even) = cz_layers(n);

    // -- U0 = exp(-i H0 dt) --
    let k_rotations: Vec<GateOp> = (2..n)
        .filter(|m| profile.j_at_center(*m) != 0.0)
        .map(|m| GateOp::single(Gate::X(-2.0 * profile.j_at_center(m) * dt), m))
        .collect();
    if !k_rotations.is_empty() {
        c.push_layer(LayerKind::TwoQubit, cz_odd.clone());
        c.push_layer(LayerKind::TwoQubit, cz_even.clone());
        c.push_layer(LayerKind::SingleQubit, k_rotations);
        c.push_layer(LayerKind::TwoQubit, cz_even.clone());
        c.push_layer(LayerKind::TwoQubit, cz_odd.clone());
    }

    // -- U1 = exp(-i H1 dt); all factors commute --
    let field: Vec<GateOp> = (1..=n)
        .filter(|i| profile.h_x_at(*i) != 0.0)
        .map(|i| GateOp::single(Gate::X(2.0 * profile.h_x_at(i) * dt), i))
        .collect();
    c.push_layer(LayerKind::SingleQubit, field);

    if profile.v_xx != 0.0 {
        let v = profile.v_xx;
        let hadamards: Vec<GateOp> = (1..=n)
            .map(|i| GateOp::single(Gate::Hadamard, i))
            .collect();
        c.push_layer(LayerKind::SingleQubit, hadamards.clone());
        // Z rotations are diagonal and commute with the CPhase layers; each
        // interior site belongs to two bonds.
        let z_rot: Vec<GateOp> = (1..=n)
            .map(|i| {
                let bonds = if i == 1 || i == n { 1.0 } else { 2.0 };
                GateOp::single(Gate::Z(2.0 * v * dt * bonds), i)
            })
            .collect();
        c.push_layer(LayerKind::SingleQubit, z_rot);
        let cphase = |ops: &[GateOp]| -> Vec<GateOp> {
            ops.iter()
                .map(|op| GateOp::two(Gate::CPhase(-4.0 * v * dt), op.site, op.site2.unwrap()))
                .collect()
        };
        c.push_layer(LayerKind::TwoQubit, cphase(&cz_odd));
        c.push_layer(LayerKind::TwoQubit, cphase(&cz_even));
        c.push_layer(LayerKind::SingleQubit, hadamards);
        // exp(-i v dt XX) = e^{+i v dt} CPhase(-4 v dt) Z(2 v dt) Z(2 v dt)
        // in the X basis; one scalar phase per bond.
        c.global_phase += v * dt * (n - 1) as f64;
    }

    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    #[test]
    fn inverse_round_trip_shapes() {
        let p = ModelParams::main_experiment(6, 2.0);
        let c = build_trotter_step(&p.profile()).unwrap();
        let inv = c.inverse();
        assert_eq!(c.gate_count(), inv.gate_count());
        assert_eq!(c.global_phase, -inv.global_phase);
    }

    #[test]
    fn compiled_layer_counts_match_hardware() {
        // Six two-qubit layers and three single-qubit layers per step.
        let p = ModelParams::main_experiment(8, 1.0);
        let step = build_trotter_step(&p.profile()).unwrap();
        let folded = step.fold_single_qubit_runs().unwrap();
        assert_eq!(folded.two_qubit_layer_count(), 6);
        assert_eq!(folded.single_qubit_layer_count(), 3);
    }

    #[test]
    fn integrable_limit_skips_bond_machinery() {
        let p = ModelParams::spectroscopy(8, 1.0);
        let step = build_trotter_step(&p.profile()).unwrap();
        assert_eq!(step.two_qubit_layer_count(), 4); // CZ sandwich only
        assert_eq!(step.global_phase, 0.0);
    }

    #[test]
    fn neighbour_validation() {
        let mut c = Circuit::new(4);
        c.push_layer(
            LayerKind::TwoQubit,
            vec![GateOp::two(Gate::Cz, 1, 3)],
        );
        assert!(c.validate().is_err());
    }
}
