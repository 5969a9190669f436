//! Majorana single-particle backend for the integrable limit `v_xx = 0`.
//!
//! Gamma ordering is interleaved: `gamma_{2i-1} = alpha_i`,
//! `gamma_{2i} = beta_i` with `{gamma_a, gamma_b} = 2 delta_ab`. The
//! Jordan-Wigner images used throughout:
//!
//! ```text
//! X_i             = -i alpha_i beta_i
//! Z_i             = -(prod_{j<i} X_j) alpha_i
//! Y_i             =  (prod_{j<i} X_j) beta_i
//! K_m (bulk)      = -i beta_{m-1} alpha_{m+1}
//! Z_L = -alpha_1,  X_L = -alpha_2,  Z_R = -i G beta_N,  X_R = -i G beta_{N-1}
//! ```
//!
//! Each Trotter factor `exp(theta gamma_a gamma_b)` conjugates the gamma
//! vector as a planar rotation by `2 theta`, so one drive cycle is a real
//! orthogonal `2N x 2N` map `O` with `U^dag gamma_j U = sum_k O_jk gamma_k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{CouplingProfile, ModelParams};
use crate::pauli::{Axis, PauliString};
use crate::statevec::{InitialStateSpec, SiteState, StateKind};

/// Normal-ordered product of Majorana operators times `i^phase_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajoranaMonomial {
    n_sites: u32,
    phase_exp: u8,
    /// Strictly increasing gamma indices in `1..=2N`.
    indices: Vec<u32>,
}

impl MajoranaMonomial {
    pub fn identity(n_sites: u32) -> Self {
        MajoranaMonomial {
            n_sites,
            phase_exp: 0,
            indices: Vec::new(),
        }
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn phase(&self) -> Complex64 {
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][self.phase_exp as usize]
    }

    fn raw(n_sites: u32, phase_exp: u32, indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        MajoranaMonomial {
            n_sites,
            phase_exp: (phase_exp % 4) as u8,
            indices,
        }
    }

    /// Normal-ordered product: merges index lists, counting transpositions
    /// (`gamma_a gamma_b = -gamma_b gamma_a`) and cancelling `gamma^2 = 1`.
    ///
    /// Each element of `other` crosses every not-yet-consumed element of
    /// `self` that is strictly greater; an equal pair annihilates after
    /// crossing the tail behind it.
    pub fn multiply(&self, other: &MajoranaMonomial) -> Result<MajoranaMonomial> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        let a = &self.indices;
        let b = &other.indices;
        let mut out: Vec<u32> = Vec::with_capacity(a.len() + b.len());
        let mut swaps = 0usize;
        let mut i = 0usize;
        for &bv in b {
            while i < a.len() && a[i] < bv {
                out.push(a[i]);
                i += 1;
            }
            if i < a.len() && a[i] == bv {
                swaps += a.len() - i - 1;
                i += 1; // annihilated pair
            } else {
                swaps += a.len() - i;
                out.push(bv);
            }
        }
        out.extend_from_slice(&a[i..]);
        let phase = self.phase_exp as u32 + other.phase_exp as u32 + 2 * (swaps % 2) as u32;
        Ok(MajoranaMonomial::raw(self.n_sites, phase, out))
    }
}

fn gamma_alpha(i: u32) -> u32 {
    2 * i - 1
}

fn gamma_beta(i: u32) -> u32 {
    2 * i
}

/// Jordan-Wigner image of one site letter.
fn site_letter_monomial(n: u32, site: u32, axis: Axis) -> MajoranaMonomial {
    match axis {
        // X_i = -i alpha_i beta_i
        Axis::X => MajoranaMonomial::raw(n, 3, vec![gamma_alpha(site), gamma_beta(site)]),
        // Z_i = -(-i)^{i-1} gamma_1 ... gamma_{2i-1}
        Axis::Z => {
            let phase = 2 + 3 * (site - 1);
            MajoranaMonomial::raw(n, phase, (1..=2 * site - 1).collect())
        }
        // Y_i = (-i)^{i-1} gamma_1 ... gamma_{2i-2} gamma_{2i}
        Axis::Y => {
            let phase = 3 * (site - 1);
            let mut idx: Vec<u32> = (1..=2 * site - 2).collect();
            idx.push(gamma_beta(site));
            MajoranaMonomial::raw(n, phase, idx)
        }
    }
}

/// Exact Jordan-Wigner transform of a Pauli string.
pub fn jordan_wigner(s: &PauliString) -> Result<MajoranaMonomial> {
    let n = s.n_sites();
    let mut out = MajoranaMonomial::identity(n);
    let mut letter_phase: u32 = 0; // i^k relating the string to its letters
    for i in 1..=n {
        let bit = 1u128 << (i - 1);
        let axis = match (s.x_mask() & bit != 0, s.z_mask() & bit != 0) {
            (false, false) => continue,
            (true, false) => Axis::X,
            (false, true) => Axis::Z,
            (true, true) => {
                letter_phase += 3; // X Z = -i Y per site
                Axis::Y
            }
        };
        out = out.multiply(&site_letter_monomial(n, i, axis))?;
    }
    let total = out.phase_exp as u32 + letter_phase + s.phase_exp() as u32;
    Ok(MajoranaMonomial::raw(n, total, out.indices))
}

/// The total parity `G = prod_j X_j = (-i)^N gamma_1 ... gamma_2N`.
pub fn total_parity(n: u32) -> MajoranaMonomial {
    MajoranaMonomial::raw(n, 3 * n, (1..=2 * n).collect())
}

/// Pauli realization of a single Majorana operator:
/// `alpha_i = -(prod_{j<i} X_j) Z_i`, `beta_i = (prod_{j<i} X_j) Y_i`.
pub fn majorana_pauli(n: u32, gamma_index: u32) -> Result<PauliString> {
    if gamma_index == 0 || gamma_index > 2 * n {
        return Err(Error::SiteOutOfRange {
            index: gamma_index,
            n_sites: 2 * n,
        });
    }
    let site = gamma_index.div_ceil(2);
    let mut factors: Vec<(u32, Axis)> = (1..site).map(|j| (j, Axis::X)).collect();
    if gamma_index % 2 == 1 {
        factors.push((site, Axis::Z));
        Ok(PauliString::from_factors(n, &factors)?.with_extra_phase(2))
    } else {
        factors.push((site, Axis::Y));
        PauliString::from_factors(n, &factors)
    }
}

/// Single-particle Heisenberg map of one Trotter cycle, `v_xx = 0` only.
#[derive(Clone, Debug)]
pub struct MajoranaPropagator {
    pub n_sites: u32,
    pub dt: f64,
    /// `2N x 2N` real orthogonal matrix, rows = Heisenberg images.
    pub matrix: DMatrix<f64>,
}

/// Applies the planar rotation of `exp(theta gamma_a gamma_b)` (a rotation by
/// `2 theta` in the `(a, b)` plane) to the rows of `m`, i.e. left-multiplies
/// by the rotation. Indices are 1-based gamma labels.
fn rotate_rows(m: &mut DMatrix<f64>, a: u32, b: u32, two_theta: f64) {
    let (c, s) = (two_theta.cos(), two_theta.sin());
    let (ra, rb) = ((a - 1) as usize, (b - 1) as usize);
    for col in 0..m.ncols() {
        let va = m[(ra, col)];
        let vb = m[(rb, col)];
        m[(ra, col)] = c * va + s * vb;
        m[(rb, col)] = -s * va + c * vb;
    }
}

/// Builds the cycle propagator `O = R(U1) R(U0)` from planar rotations:
/// `exp(+i J_m dt K_m) = exp(J_m dt beta_{m-1} alpha_{m+1})` and
/// `exp(-i h_x dt X_i) = exp(-h_x dt alpha_i beta_i)`.
pub fn build_propagator(profile: &CouplingProfile) -> Result<MajoranaPropagator> {
    if profile.v_xx != 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "free-fermion backend requires v_xx = 0, got {}",
            profile.v_xx
        )));
    }
    let n = profile.n_sites;
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "n must be even and >= 4, got {n}"
        )));
    }
    let dt = profile.dt;
    let dim = (2 * n) as usize;
    let mut m = DMatrix::<f64>::identity(dim, dim);
    // U0 factors: disjoint planes, order free
    for center in 2..n {
        let j = profile.j_at_center(center);
        rotate_rows(
            &mut m,
            gamma_beta(center - 1),
            gamma_alpha(center + 1),
            2.0 * j * dt,
        );
    }
    // U1 field factors applied after U0: left-multiply
    for i in 1..=n {
        rotate_rows(
            &mut m,
            gamma_alpha(i),
            gamma_beta(i),
            -2.0 * profile.h_x_at(i) * dt,
        );
    }
    Ok(MajoranaPropagator {
        n_sites: n,
        dt,
        matrix: m,
    })
}

pub fn build_propagator_params(p: &ModelParams) -> Result<MajoranaPropagator> {
    p.validate()?;
    build_propagator(&p.profile())
}

impl MajoranaPropagator {
    /// `max |O^T O - 1|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let prod = self.matrix.transpose() * &self.matrix;
        let mut worst: f64 = 0.0;
        for r in 0..prod.nrows() {
            for c in 0..prod.ncols() {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((prod[(r, c)] - want).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    /// Largest matrix element coupling the two Kitaev chains (gamma indices
    /// belonging to odd vs even sites). Exactly zero at `v_xx = 0`.
    pub fn chain_mixing(&self) -> f64 {
        let n = self.n_sites;
        let site_of = |k: usize| -> u32 { (k as u32 + 2) / 2 };
        let mut worst: f64 = 0.0;
        for r in 0..(2 * n) as usize {
            for c in 0..(2 * n) as usize {
                if site_of(r) % 2 != site_of(c) % 2 {
                    worst = worst.max(self.matrix[(r, c)].abs());
                }
            }
        }
        worst
    }
}

/// Quasi-energies: eigenphases of the cycle map divided by `dt`, sorted
/// ascending in `(-pi/dt, pi/dt]`. They come in `+-` pairs.
pub fn quasi_energies(prop: &MajoranaPropagator) -> Vec<f64> {
    let eigs = prop.matrix.clone().complex_eigenvalues();
    let mut out: Vec<f64> = eigs.iter().map(|l| l.arg() / prop.dt).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// First moments of the gamma operators in a product state:
/// `m_k = <gamma_k>` and `g_k = <-i G gamma_k>` (both real).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    pub m: Vec<f64>,
    pub g: Vec<f64>,
}

fn product_sites(spec: &InitialStateSpec, n: u32) -> Result<Vec<SiteState>> {
    match spec.kind {
        StateKind::ProductZ => Ok(vec![SiteState::Zero; n as usize]),
        StateKind::ProductXEdges => {
            let mut v = vec![SiteState::Zero; n as usize];
            v[0] = SiteState::Plus;
            v[n as usize - 1] = SiteState::Plus;
            Ok(v)
        }
        _ => Err(Error::UnsupportedRegime(
            "free-fermion moments require a product initial state".into(),
        )),
    }
}

/// Site-by-site expectation of a Hermitian Pauli string in a product state.
pub fn product_state_expectation(s: &PauliString, sites: &[SiteState]) -> Result<f64> {
    let w = s.hermitian_weight()?;
    let mut value = w;
    for (idx, site) in sites.iter().enumerate() {
        let bit = 1u128 << idx;
        let letter = (s.x_mask() & bit != 0, s.z_mask() & bit != 0);
        let factor = match (letter, site) {
            ((false, false), _) => 1.0,
            ((true, false), SiteState::Plus) => 1.0,  // <+|X|+> = 1
            ((true, false), _) => 0.0,                // <0|X|0> = <1|X|1> = 0
            ((false, true), SiteState::Zero) => 1.0,  // <0|Z|0> = 1
            ((false, true), SiteState::One) => -1.0,
            ((false, true), SiteState::Plus) => 0.0,
            ((true, true), _) => 0.0,                 // <Y> = 0 in all three
        };
        if factor == 0.0 {
            return Ok(0.0);
        }
        value *= factor;
    }
    Ok(value)
}

/// Computes the moment vectors for a product initial state by expanding each
/// `gamma_k` and `-i G gamma_k` as a Pauli string.
pub fn initial_moments(spec: &InitialStateSpec, n: u32) -> Result<MomentVector> {
    if !spec.excitation_sites.is_empty() {
        return Err(Error::UnsupportedRegime(
            "excitation gates are not part of the product-state spectroscopy protocol".into(),
        ));
    }
    let sites = product_sites(spec, n)?;
    let g_parity = PauliString::from_factors(
        n,
        &(1..=n).map(|i| (i, Axis::X)).collect::<Vec<_>>(),
    )?;
    let mut m = Vec::with_capacity((2 * n) as usize);
    let mut g = Vec::with_capacity((2 * n) as usize);
    for k in 1..=2 * n {
        let gamma = majorana_pauli(n, k)?;
        m.push(product_state_expectation(&gamma, &sites)?);
        // -i G gamma_k, assembled with exact phase bookkeeping
        let minus_i_gg = g_parity.multiply(&gamma)?.with_extra_phase(3);
        g.push(product_state_expectation(&minus_i_gg, &sites)?);
    }
    Ok(MomentVector { m, g })
}

/// Heisenberg edge-operator time series over `cycles` Trotter steps.
#[derive(Clone, Debug)]
pub struct EdgeSeries {
    pub z_l: Vec<f64>,
    pub x_l: Vec<f64>,
    pub z_r: Vec<f64>,
    pub x_r: Vec<f64>,
}

/// `<Z_L(t)> = -(O^t m)_{gamma_1}`, `<X_L(t)> = -(O^t m)_{gamma_3}`,
/// `<Z_R(t)> = (O^t g)_{gamma_2N}`, `<X_R(t)> = (O^t g)_{gamma_2N-2}`.
/// Cost is `O(cycles N^2)`.
pub fn edge_time_series(
    prop: &MajoranaPropagator,
    moments: &MomentVector,
    cycles: u32,
) -> EdgeSeries {
    let n = prop.n_sites as usize;
    let dim = 2 * n;
    assert_eq!(moments.m.len(), dim);
    let mut vm = nalgebra::DVector::<f64>::from_vec(moments.m.clone());
    let mut vg = nalgebra::DVector::<f64>::from_vec(moments.g.clone());
    let mut out = EdgeSeries {
        z_l: Vec::with_capacity(cycles as usize + 1),
        x_l: Vec::with_capacity(cycles as usize + 1),
        z_r: Vec::with_capacity(cycles as usize + 1),
        x_r: Vec::with_capacity(cycles as usize + 1),
    };
    for _ in 0..=cycles {
        out.z_l.push(-vm[0]);
        out.x_l.push(-vm[2]);
        out.z_r.push(vg[dim - 1]);
        out.x_r.push(vg[dim - 3]);
        vm = &prop.matrix * vm;
        vg = &prop.matrix * vg;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, ModelParams};
    use crate::statevec::{self, InitialStateSpec, StateKind};

    #[test]
    fn jw_single_site_images() {
        // X_1 -> -i gamma_1 gamma_2
        let x1 = PauliString::single(4, 1, Axis::X).unwrap();
        let m = jordan_wigner(&x1).unwrap();
        assert_eq!(m.indices(), &[1, 2]);
        assert_eq!(m.phase_exp(), 3);
        // Z_1 -> -gamma_1
        let z1 = PauliString::single(4, 1, Axis::Z).unwrap();
        let m = jordan_wigner(&z1).unwrap();
        assert_eq!(m.indices(), &[1]);
        assert_eq!(m.phase_exp(), 2);
    }

    #[test]
    fn jw_bulk_stabilizer() {
        // K_3 = Z_2 X_3 Z_4 -> -i beta_2 alpha_4 = -i gamma_4 gamma_7
        let k3 =
            PauliString::from_factors(4, &[(2, Axis::Z), (3, Axis::X), (4, Axis::Z)]).unwrap();
        let m = jordan_wigner(&k3).unwrap();
        assert_eq!(m.indices(), &[4, 7]);
        assert_eq!(m.phase_exp(), 3);
    }

    #[test]
    fn jw_edge_logicals() {
        let n = 6u32;
        let p = ModelParams::main_experiment(n, 1.0);
        let ops = model::logical_operators(&p).unwrap();
        // X_L = -alpha_2 = -gamma_3
        let m = jordan_wigner(&ops.x_l).unwrap();
        assert_eq!(m.indices(), &[3]);
        assert_eq!(m.phase_exp(), 2);
        // Z_R = -i G beta_N: all gammas except gamma_2N, phase (-i)^{N+1}
        let m = jordan_wigner(&ops.z_r).unwrap();
        let want: Vec<u32> = (1..=2 * n - 1).collect();
        assert_eq!(m.indices(), &want[..]);
        let g = total_parity(n);
        let beta_n = MajoranaMonomial::raw(n, 0, vec![2 * n]);
        let gb = g.multiply(&beta_n).unwrap();
        let minus_i_gb = MajoranaMonomial::raw(n, gb.phase_exp() as u32 + 3, gb.indices().to_vec());
        assert_eq!(m, minus_i_gb);
        // X_X bond image: -alpha_i beta_i alpha_{i+1} beta_{i+1}
        let bond = PauliString::from_factors(n, &[(2, Axis::X), (3, Axis::X)]).unwrap();
        let m = jordan_wigner(&bond).unwrap();
        assert_eq!(m.indices(), &[3, 4, 5, 6]);
        assert_eq!(m.phase_exp(), 2);
    }

    #[test]
    fn majorana_pauli_round_trip() {
        let n = 5u32;
        for k in 1..=2 * n {
            let p = majorana_pauli(n, k).unwrap();
            let m = jordan_wigner(&p).unwrap();
            assert_eq!(m.indices(), &[k], "gamma_{k}");
            assert_eq!(m.phase_exp(), 0, "gamma_{k} phase");
        }
    }

    #[test]
    fn propagator_identity_without_couplings() {
        let p = ModelParams {
            n_sites: 6,
            j_e: 0.0,
            j_o: 0.0,
            h_x: 0.0,
            v_xx: 0.0,
            dt: 0.5,
        };
        let prop = build_propagator_params(&p).unwrap();
        assert!(prop.orthogonality_residual() < 1e-15);
        let id = DMatrix::<f64>::identity(12, 12);
        assert!((&prop.matrix - id).abs().max() < 1e-15);
    }

    #[test]
    fn field_only_propagator_is_block_rotations() {
        let p = ModelParams {
            n_sites: 4,
            j_e: 0.0,
            j_o: 0.0,
            h_x: 0.3,
            v_xx: 0.0,
            dt: 0.5,
        };
        let prop = build_propagator_params(&p).unwrap();
        let ang = 2.0 * p.h_x * p.dt;
        for i in 0..4usize {
            let (a, b) = (2 * i, 2 * i + 1);
            assert!((prop.matrix[(a, a)] - ang.cos()).abs() < 1e-14);
            assert!((prop.matrix[(a, b)] + ang.sin()).abs() < 1e-14);
            assert!((prop.matrix[(b, a)] - ang.sin()).abs() < 1e-14);
            assert!((prop.matrix[(b, b)] - ang.cos()).abs() < 1e-14);
        }
        // quasi-energies +-2 h_x, each N-fold degenerate
        let eps = quasi_energies(&prop);
        for e in &eps {
            assert!((e.abs() - 2.0 * p.h_x).abs() < 1e-12);
        }
        assert_eq!(eps.iter().filter(|e| **e > 0.0).count(), 4);
    }

    #[test]
    fn rejects_interacting_regime() {
        let p = ModelParams::main_experiment(6, 1.0); // v_xx = 0.2
        assert!(matches!(
            build_propagator_params(&p),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn propagator_orthogonal_and_special() {
        let p = ModelParams::spectroscopy(8, 1.2);
        let prop = build_propagator_params(&p).unwrap();
        assert!(prop.orthogonality_residual() < 1e-13);
        assert!((prop.determinant() - 1.0).abs() < 1e-10);
        assert!(prop.chain_mixing() < 1e-15);
    }

    #[test]
    fn orthogonality_survives_long_products() {
        let p = ModelParams::spectroscopy(8, 0.9);
        let prop = build_propagator_params(&p).unwrap();
        let mut acc = DMatrix::<f64>::identity(16, 16);
        for _ in 0..1000 {
            acc = &prop.matrix * acc;
        }
        let resid = (acc.transpose() * &acc - DMatrix::<f64>::identity(16, 16))
            .abs()
            .max();
        assert!(resid < 1e-10, "orthogonality residual {resid}");
    }

    #[test]
    fn quasi_energies_particle_hole_symmetric() {
        let p = ModelParams::spectroscopy(8, 1.1);
        let eps = quasi_energies(&build_propagator_params(&p).unwrap());
        let mut neg: Vec<f64> = eps.iter().map(|e| -e).collect();
        neg.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in eps.iter().zip(neg.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn moments_of_zero_product_state() {
        let n = 6u32;
        let spec = InitialStateSpec::bare(StateKind::ProductZ);
        let mv = initial_moments(&spec, n).unwrap();
        for (k, &v) in mv.m.iter().enumerate() {
            let want = if k == 0 { -1.0 } else { 0.0 };
            assert_eq!(v, want, "m[{k}]");
        }
        for (k, &v) in mv.g.iter().enumerate() {
            let want = if k == 2 * n as usize - 1 { 1.0 } else { 0.0 };
            assert_eq!(v, want, "g[{k}]");
        }
    }

    #[test]
    fn moments_match_dense_oracle() {
        // every m_k against a dense statevector expectation at N=6
        let n = 6u32;
        let spec = InitialStateSpec::bare(StateKind::ProductXEdges);
        let mv = initial_moments(&spec, n).unwrap();
        let p = ModelParams::main_experiment(n, 1.0);
        let state = statevec::prepare_initial(&p, &spec).unwrap();
        for k in 1..=2 * n {
            let gamma = majorana_pauli(n, k).unwrap();
            // gamma_k is Hermitian with a +-1 weight
            let got = mv.m[(k - 1) as usize];
            let want = state.expectation_string(&gamma).unwrap();
            assert!((got - want).abs() < 1e-12, "m[{k}]: {got} vs {want}");
        }
    }

    #[test]
    fn edge_series_at_time_zero() {
        let p = ModelParams::spectroscopy(8, 1.0);
        let prop = build_propagator_params(&p).unwrap();
        let mv = initial_moments(&InitialStateSpec::bare(StateKind::ProductZ), 8).unwrap();
        let series = edge_time_series(&prop, &mv, 10);
        assert!((series.z_l[0] - 1.0).abs() < 1e-14);
        assert!((series.z_r[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cross_backend_oracle_small_chain() {
        // The master sign-convention check: free-fermion vs statevector.
        for (n, ratio) in [(4u32, 1.0), (6, 1.5), (8, 0.8)] {
            let p = ModelParams::spectroscopy(n, ratio);
            let spec = InitialStateSpec::bare(StateKind::ProductZ);
            let prop = build_propagator_params(&p).unwrap();
            let mv = initial_moments(&spec, n).unwrap();
            let cycles = 40;
            let ff = edge_time_series(&prop, &mv, cycles);

            let ops = model::logical_operators(&p).unwrap();
            let s0 = statevec::prepare_initial(&p, &spec).unwrap();
            let sv = statevec::evolve_series(
                &s0,
                &p.profile(),
                cycles,
                &[ops.z_l, ops.x_l, ops.z_r, ops.x_r],
            )
            .unwrap();
            for t in 0..=cycles as usize {
                assert!((ff.z_l[t] - sv[t][0]).abs() < 1e-8, "z_l at t={t}");
                assert!((ff.x_l[t] - sv[t][1]).abs() < 1e-8, "x_l at t={t}");
                assert!((ff.z_r[t] - sv[t][2]).abs() < 1e-8, "z_r at t={t}");
                assert!((ff.x_r[t] - sv[t][3]).abs() < 1e-8, "x_r at t={t}");
            }
        }
    }

    #[test]
    fn left_edge_series_independent_of_j_o() {
        let n = 8u32;
        let spec = InitialStateSpec::bare(StateKind::ProductZ);
        let mv = initial_moments(&spec, n).unwrap();
        let base = edge_time_series(
            &build_propagator_params(&ModelParams::spectroscopy(n, 1.0)).unwrap(),
            &mv,
            60,
        );
        let other = edge_time_series(
            &build_propagator_params(&ModelParams::spectroscopy(n, 1.3)).unwrap(),
            &mv,
            60,
        );
        let mut z_r_differs = false;
        for t in 0..=60usize {
            assert!((base.z_l[t] - other.z_l[t]).abs() < 1e-12);
            if (base.z_r[t] - other.z_r[t]).abs() > 1e-3 {
                z_r_differs = true;
            }
        }
        assert!(z_r_differs, "Z_R must respond to J_o");
    }
}
