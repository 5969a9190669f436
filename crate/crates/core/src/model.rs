//! Model construction: `H0`, `H1`, stabilizers, edge logical operators,
//! symmetry generators, and disordered coupling tables.
//!
//! The chain has an even number of sites `N >= 4`. Stabilizers
//! `K_m = Z_{m-1} X_m Z_{m+1}` sit at bulk centers `m = 2..=N-1`; even centers
//! carry strength `j_e`, odd centers `j_o`. The two "edge stabilizers" `K_1`
//! and `K_N` are the logical operators `X_L = X_1 Z_2` and `X_R = Z_{N-1} X_N`
//! and do not enter `H0`.

use std::f64::consts::PI;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

/// Couplings of `H = H0 + H1` and the Trotter step duration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Chain length, even, `>= 4`.
    #[serde(rename = "n")]
    pub n_sites: u32,
    pub j_e: f64,
    pub j_o: f64,
    pub h_x: f64,
    pub v_xx: f64,
    pub dt: f64,
}

impl ModelParams {
    /// Main-experiment couplings: `dt = 0.5`, `j_e = pi/5`, `h_x = 0.11`,
    /// `v_xx = 0.2`, with `j_o = ratio * j_e`.
    pub fn main_experiment(n_sites: u32, ratio: f64) -> Self {
        let j_e = PI / 5.0;
        ModelParams {
            n_sites,
            j_e,
            j_o: ratio * j_e,
            h_x: 0.11,
            v_xx: 0.2,
            dt: 0.5,
        }
    }

    /// Spectroscopy couplings: `j_e = pi/2`, `h_x = 7pi/20`, `v_xx = 0`.
    pub fn spectroscopy(n_sites: u32, ratio: f64) -> Self {
        let j_e = PI / 2.0;
        ModelParams {
            n_sites,
            j_e,
            j_o: ratio * j_e,
            h_x: 7.0 * PI / 20.0,
            v_xx: 0.0,
            dt: 0.5,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.j_o / self.j_e
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 4 || self.n_sites % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "n must be even and >= 4, got {}",
                self.n_sites
            )));
        }
        if self.n_sites > crate::pauli::MAX_SITES {
            return Err(Error::InvalidParams(format!(
                "n = {} exceeds the {}-site mask width",
                self.n_sites,
                crate::pauli::MAX_SITES
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        for (name, v) in [
            ("j_e", self.j_e),
            ("j_o", self.j_o),
            ("h_x", self.h_x),
            ("v_xx", self.v_xx),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Uniform couplings expanded into the per-site table form.
    pub fn profile(&self) -> CouplingProfile {
        let n = self.n_sites;
        let j_by_center = (2..n)
            .map(|m| if m % 2 == 0 { self.j_e } else { self.j_o })
            .collect();
        CouplingProfile {
            n_sites: n,
            j_by_center,
            h_x_by_site: vec![self.h_x; n as usize],
            v_xx: self.v_xx,
            dt: self.dt,
        }
    }
}

/// Closed sampling intervals and the seed for the disordered (MBL-comparison)
/// scenario. Couplings stay stabilizer-diagonal; only magnitudes randomize.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    pub j_e_range: [f64; 2],
    pub j_o_range: [f64; 2],
    pub h_x_range: [f64; 2],
    pub seed: u64,
}

impl DisorderSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("j_e_range", self.j_e_range),
            ("j_o_range", self.j_o_range),
            ("h_x_range", self.h_x_range),
        ] {
            if !(r[0] <= r[1]) {
                return Err(Error::InvalidParams(format!(
                    "{name}: lower bound {} exceeds upper bound {}",
                    r[0], r[1]
                )));
            }
        }
        Ok(())
    }
}

/// Per-stabilizer and per-site couplings, the common currency of the circuit
/// and Hamiltonian builders. `j_by_center[k]` belongs to center `m = k + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingProfile {
    pub n_sites: u32,
    pub j_by_center: Vec<f64>,
    pub h_x_by_site: Vec<f64>,
    pub v_xx: f64,
    pub dt: f64,
}

impl CouplingProfile {
    pub fn j_at_center(&self, m: u32) -> f64 {
        self.j_by_center[(m - 2) as usize]
    }

    pub fn h_x_at(&self, site: u32) -> f64 {
        self.h_x_by_site[(site - 1) as usize]
    }
}

/// Bulk stabilizer `K_m = Z_{m-1} X_m Z_{m+1}` for `2 <= m <= N-1`; the edge
/// cases `m = 1` and `m = N` return the logical `X_L` and `X_R`.
pub fn stabilizer(p: &ModelParams, m: u32) -> Result<PauliString> {
    let n = p.n_sites;
    if m == 0 || m > n {
        return Err(Error::SiteOutOfRange {
            index: m,
            n_sites: n,
        });
    }
    if m == 1 {
        PauliString::from_factors(n, &[(1, Axis::X), (2, Axis::Z)])
    } else if m == n {
        PauliString::from_factors(n, &[(n - 1, Axis::Z), (n, Axis::X)])
    } else {
        PauliString::from_factors(n, &[(m - 1, Axis::Z), (m, Axis::X), (m + 1, Axis::Z)])
    }
}

/// `H0 = -sum_m J_m K_m` over bulk centers; exactly `N - 2` terms.
pub fn build_h0(p: &ModelParams) -> Result<PauliSum> {
    build_h0_profile(&p.profile())
}

pub fn build_h0_profile(profile: &CouplingProfile) -> Result<PauliSum> {
    let n = profile.n_sites;
    let mut h = PauliSum::new(n);
    for m in 2..n {
        let k = PauliString::from_factors(n, &[(m - 1, Axis::Z), (m, Axis::X), (m + 1, Axis::Z)])?;
        h.add_string(&k, -profile.j_at_center(m))?;
    }
    Ok(h)
}

/// `H1 = h_x sum_i X_i + v_xx sum_i X_i X_{i+1}`; `2N - 1` terms when both
/// couplings are nonzero.
pub fn build_h1(p: &ModelParams) -> Result<PauliSum> {
    build_h1_profile(&p.profile())
}

pub fn build_h1_profile(profile: &CouplingProfile) -> Result<PauliSum> {
    let n = profile.n_sites;
    let mut h = PauliSum::new(n);
    for i in 1..=n {
        let x = PauliString::single(n, i, Axis::X)?;
        h.add_string(&x, profile.h_x_at(i))?;
    }
    for i in 1..n {
        let xx = PauliString::from_factors(n, &[(i, Axis::X), (i + 1, Axis::X)])?;
        h.add_string(&xx, profile.v_xx)?;
    }
    Ok(h)
}

pub fn build_hamiltonian(p: &ModelParams) -> Result<PauliSum> {
    let mut h = build_h0(p)?;
    h.add_assign(&build_h1(p)?)?;
    Ok(h)
}

/// The four edge logical operators.
#[derive(Clone, Debug)]
pub struct LogicalOperators {
    pub z_l: PauliString,
    pub x_l: PauliString,
    pub z_r: PauliString,
    pub x_r: PauliString,
}

pub fn logical_operators(p: &ModelParams) -> Result<LogicalOperators> {
    let n = p.n_sites;
    Ok(LogicalOperators {
        z_l: PauliString::single(n, 1, Axis::Z)?,
        x_l: PauliString::from_factors(n, &[(1, Axis::X), (2, Axis::Z)])?,
        z_r: PauliString::single(n, n, Axis::Z)?,
        x_r: PauliString::from_factors(n, &[(n - 1, Axis::Z), (n, Axis::X)])?,
    })
}

/// The protecting Z2 x Z2 parity generators: products of `X` over even and
/// odd sites.
#[derive(Clone, Debug)]
pub struct SymmetryGenerators {
    pub g_e: PauliString,
    pub g_o: PauliString,
}

pub fn symmetry_generators(p: &ModelParams) -> Result<SymmetryGenerators> {
    let n = p.n_sites;
    let even: Vec<(u32, Axis)> = (1..=n / 2).map(|i| (2 * i, Axis::X)).collect();
    let odd: Vec<(u32, Axis)> = (1..=n / 2).map(|i| (2 * i - 1, Axis::X)).collect();
    Ok(SymmetryGenerators {
        g_e: PauliString::from_factors(n, &even)?,
        g_o: PauliString::from_factors(n, &odd)?,
    })
}

/// Draws a disordered coupling table, reproducible under the seed.
///
/// The generator is ChaCha12 keyed by `rand_core`'s SplitMix64 expansion of
/// the 64-bit seed; draws are `next_u64 / 2^64` scaled into each interval, in
/// a fixed order: stabilizer centers `m = 2..=N-1` ascending, then sites
/// `1..=N` ascending for `h_x`.
pub fn sample_disordered_params(base: &ModelParams, d: &DisorderSpec) -> Result<CouplingProfile> {
    base.validate()?;
    d.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(d.seed);
    let mut draw = |range: [f64; 2]| {
        let u = rng.next_u64() as f64 / (u64::MAX as f64 + 1.0);
        range[0] + u * (range[1] - range[0])
    };
    let n = base.n_sites;
    let j_by_center = (2..n)
        .map(|m| {
            if m % 2 == 0 {
                draw(d.j_e_range)
            } else {
                draw(d.j_o_range)
            }
        })
        .collect();
    let h_x_by_site = (1..=n).map(|_| draw(d.h_x_range)).collect();
    Ok(CouplingProfile {
        n_sites: n,
        j_by_center,
        h_x_by_site,
        v_xx: base.v_xx,
        dt: base.dt,
    })
}
