//! Bitmask algebra of N-qubit Pauli strings and Hermitian Pauli sums.
//!
//! A [`PauliString`] stores the operator `i^phase_exp * X^x * Z^z`, where the
//! bit `i-1` of each mask refers to site `i` (1-based externally). A site with
//! both bits set carries `X*Z`, so the literal letter `Y = i*X*Z` differs from
//! the bare mask pair by one factor of `i` kept in `phase_exp`.
//!
//! A [`PauliSum`] keys terms by `(x_mask, z_mask)` under the Hermitian
//! convention that each key denotes `i^{popcount(x & z)} X^x Z^z`, i.e. the
//! literal product of X/Y/Z site letters. All coefficients are real, which
//! makes Hermiticity a structural invariant of the type.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::dense::DMat;
use crate::error::{Error, Result};

/// Hard cap on chain length: masks are fixed 128-bit words.
pub const MAX_SITES: u32 = 128;

/// Dense realizations refuse more sites than this (memory guard).
pub const MAX_DENSE_SITES: u32 = 14;

/// Coefficients below this magnitude are pruned after arithmetic.
pub const PRUNE_EPS: f64 = 1e-14;

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A single Pauli-group element `i^phase_exp * X^x_mask * Z^z_mask`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n_sites: u32,
    x_mask: u128,
    z_mask: u128,
    phase_exp: u8,
}

fn site_bit(n_sites: u32, site: u32) -> Result<u128> {
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange {
            index: site,
            n_sites,
        });
    }
    Ok(1u128 << (site - 1))
}

impl PauliString {
    /// The identity on `n_sites` qubits.
    pub fn identity(n_sites: u32) -> Self {
        assert!(n_sites >= 1 && n_sites <= MAX_SITES);
        PauliString {
            n_sites,
            x_mask: 0,
            z_mask: 0,
            phase_exp: 0,
        }
    }

    /// A single-site letter at `site` (1-based).
    pub fn single(n_sites: u32, site: u32, axis: Axis) -> Result<Self> {
        let bit = site_bit(n_sites, site)?;
        let (x, z, p) = match axis {
            Axis::X => (bit, 0, 0),
            Axis::Y => (bit, bit, 1), // Y = i * X * Z
            Axis::Z => (0, bit, 0),
        };
        Ok(PauliString {
            n_sites,
            x_mask: x,
            z_mask: z,
            phase_exp: p,
        })
    }

    /// A product of site letters, e.g. `[(1, Z), (2, X), (3, Z)]`.
    ///
    /// Sites must be distinct; the result carries no sign beyond the `Y`
    /// bookkeeping, i.e. it is the literal Hermitian product of the letters.
    pub fn from_factors(n_sites: u32, factors: &[(u32, Axis)]) -> Result<Self> {
        let mut s = PauliString::identity(n_sites);
        let mut seen = 0u128;
        for &(site, axis) in factors {
            let bit = site_bit(n_sites, site)?;
            if seen & bit != 0 {
                return Err(Error::InvalidSpec(format!("duplicate site {site}")));
            }
            seen |= bit;
            s = s.multiply(&PauliString::single(n_sites, site, axis)?)?;
        }
        Ok(s)
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn x_mask(&self) -> u128 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u128 {
        self.z_mask
    }

    /// Exponent of the stored `i^k` prefactor, always in `{0,1,2,3}`.
    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0 && self.phase_exp == 0
    }

    /// Number of sites on which the string acts nontrivially.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// Exact group product `self * other`.
    ///
    /// Masks XOR; the phase picks up `(-1)^{|z_a & x_b|}` from commuting
    /// `Z^{z_a}` past `X^{x_b}`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        let swaps = (self.z_mask & other.x_mask).count_ones();
        let phase = (self.phase_exp as u32 + other.phase_exp as u32 + 2 * swaps) % 4;
        Ok(PauliString {
            n_sites: self.n_sites,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exp: phase as u8,
        })
    }

    /// True when the two strings commute (symplectic form vanishes).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let f = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        f % 2 == 0
    }

    /// The same string multiplied by `i^k`.
    pub fn with_extra_phase(&self, k: u8) -> PauliString {
        PauliString {
            phase_exp: ((self.phase_exp as u32 + k as u32) % 4) as u8,
            ..*self
        }
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliString {
        // (i^p X^x Z^z)^dag = i^{-p} Z^z X^x = i^{-p} (-1)^{|x&z|} X^x Z^z
        let y = (self.x_mask & self.z_mask).count_ones();
        let phase = ((4 - self.phase_exp as u32) + 2 * y) % 4;
        PauliString {
            phase_exp: phase as u8,
            ..*self
        }
    }

    /// Splits into a real weight and the Hermitian key operator
    /// `i^{|x&z|} X^x Z^z`, or an error when the string is not a real multiple
    /// of a Hermitian letter product.
    pub fn hermitian_weight(&self) -> Result<f64> {
        let y = (self.x_mask & self.z_mask).count_ones() % 4;
        let rel = (self.phase_exp as u32 + 4 - y) % 4;
        match rel {
            0 => Ok(1.0),
            2 => Ok(-1.0),
            _ => Err(Error::Numeric(format!(
                "string i^{} X^{:x} Z^{:x} is not Hermitian",
                self.phase_exp, self.x_mask, self.z_mask
            ))),
        }
    }

    /// Complex prefactor relative to the Hermitian key operator.
    #[cfg(test)]
    fn key_coefficient(&self) -> Complex64 {
        let y = (self.x_mask & self.z_mask).count_ones() % 4;
        let rel = (self.phase_exp as u32 + 4 - y) % 4;
        match rel {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Dense `2^n x 2^n` matrix. Site 1 is the most significant basis bit.
    pub fn to_dense(&self) -> Result<DMat> {
        dense_guard(self.n_sites)?;
        let n = self.n_sites;
        let dim = 1usize << n;
        let xr = reverse_mask(self.x_mask, n) as usize;
        let zr = reverse_mask(self.z_mask, n);
        let phase = I_POWERS[self.phase_exp as usize];
        let mut m = DMat::zeros(dim, dim);
        for col in 0..dim {
            let sign = if ((zr as usize & col).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(col ^ xr, col)] = phase * sign;
        }
        Ok(m)
    }
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Remaps site-indexed mask bits (bit `i-1` = site `i`) onto state bits
/// (bit `n-i` = site `i`).
pub(crate) fn reverse_mask(mask: u128, n_sites: u32) -> u128 {
    let mut out = 0u128;
    for i in 0..n_sites {
        if mask & (1u128 << i) != 0 {
            out |= 1u128 << (n_sites - 1 - i);
        }
    }
    out
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = ["+", "+i ", "-", "-i "][self.phase_exp as usize];
        write!(f, "{pre}")?;
        if self.x_mask == 0 && self.z_mask == 0 {
            return write!(f, "I");
        }
        let mut first = true;
        for i in 1..=self.n_sites {
            let bit = 1u128 << (i - 1);
            let letter = match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
                (false, false) => continue,
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'y', // bare X*Z, differs from Y by the stored phase
            };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{i}:{letter}")?;
            first = false;
        }
        Ok(())
    }
}

fn dense_guard(n_sites: u32) -> Result<()> {
    if n_sites > MAX_DENSE_SITES {
        return Err(Error::CapacityExceeded {
            n_sites,
            max: MAX_DENSE_SITES,
        });
    }
    Ok(())
}

/// A real-weighted sum of Hermitian Pauli letter products.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_sites: u32,
    terms: BTreeMap<(u128, u128), f64>,
}

impl PauliSum {
    pub fn new(n_sites: u32) -> Self {
        assert!(n_sites >= 1 && n_sites <= MAX_SITES);
        PauliSum {
            n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `((x_mask, z_mask), coefficient)` in deterministic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&(u128, u128), &f64)> {
        self.terms.iter()
    }

    /// Adds `coeff` times the Hermitian key `(x, z)`.
    pub fn add_term(&mut self, x_mask: u128, z_mask: u128, coeff: f64) {
        let entry = self.terms.entry((x_mask, z_mask)).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < PRUNE_EPS {
            self.terms.remove(&(x_mask, z_mask));
        }
    }

    /// Adds `weight` times a Hermitian Pauli string.
    pub fn add_string(&mut self, s: &PauliString, weight: f64) -> Result<()> {
        if s.n_sites != self.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: s.n_sites,
            });
        }
        let w = s.hermitian_weight()?;
        self.add_term(s.x_mask, s.z_mask, w * weight);
        Ok(())
    }

    /// Builds a one-term sum from a Hermitian string.
    pub fn from_string(s: &PauliString, weight: f64) -> Result<Self> {
        let mut sum = PauliSum::new(s.n_sites);
        sum.add_string(s, weight)?;
        Ok(sum)
    }

    /// Coefficient of the key `(x, z)`, zero when absent.
    pub fn coefficient(&self, x_mask: u128, z_mask: u128) -> f64 {
        self.terms.get(&(x_mask, z_mask)).copied().unwrap_or(0.0)
    }

    /// Coefficient of a Hermitian letter product given as factors.
    pub fn coefficient_of(&self, factors: &[(u32, Axis)]) -> Result<f64> {
        let s = PauliString::from_factors(self.n_sites, factors)?;
        let w = s.hermitian_weight()?;
        Ok(w * self.coefficient(s.x_mask, s.z_mask))
    }

    pub fn scale(&mut self, factor: f64) {
        self.terms.retain(|_, c| {
            *c *= factor;
            c.abs() >= PRUNE_EPS
        });
    }

    pub fn add_assign(&mut self, other: &PauliSum) -> Result<()> {
        self.axpy(1.0, other)
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &PauliSum) -> Result<()> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        for (&(x, z), &c) in &other.terms {
            self.add_term(x, z, factor * c);
        }
        Ok(())
    }

    /// The Hermitian commutator `(1/2i)[self, other]`, exact and untruncated.
    ///
    /// For Hermitian `a`, `b` the plain commutator is anti-Hermitian, so the
    /// `1/2i` normalization returns a Hermitian sum with real coefficients.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        let mut out = PauliSum::new(self.n_sites);
        for (&(xa, za), &ca) in &self.terms {
            let ya = (xa & za).count_ones();
            for (&(xb, zb), &cb) in &other.terms {
                // Commuting keys drop out of the commutator entirely.
                let sym = (xa & zb).count_ones() + (za & xb).count_ones();
                if sym % 2 == 0 {
                    continue;
                }
                let yb = (xb & zb).count_ones();
                let xr = xa ^ xb;
                let zr = za ^ zb;
                let yr = (xr & zr).count_ones();
                // K_a K_b = i^s K_r with s odd for anticommuting keys;
                // (1/2i) [K_a, K_b] = i^{s-1} K_r is then real.
                let s = (ya + yb + 2 * (za & xb).count_ones() + 4 * MAX_SITES - yr) % 4;
                debug_assert_eq!(s % 2, 1);
                let sign = if s == 1 { 1.0 } else { -1.0 };
                out.add_term(xr, zr, ca * cb * sign);
            }
        }
        Ok(out)
    }

    /// Full operator product with complex bookkeeping, returned as the pair
    /// (Hermitian part, anti-Hermitian part / i), both real-coefficient sums.
    pub fn product_parts(&self, other: &PauliSum) -> Result<(PauliSum, PauliSum)> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        let mut herm = PauliSum::new(self.n_sites);
        let mut anti = PauliSum::new(self.n_sites);
        for (&(xa, za), &ca) in &self.terms {
            let ya = (xa & za).count_ones();
            for (&(xb, zb), &cb) in &other.terms {
                let yb = (xb & zb).count_ones();
                let xr = xa ^ xb;
                let zr = za ^ zb;
                let yr = (xr & zr).count_ones();
                let s = (ya + yb + 2 * (za & xb).count_ones() + 4 * MAX_SITES - yr) % 4;
                match s {
                    0 => herm.add_term(xr, zr, ca * cb),
                    2 => herm.add_term(xr, zr, -ca * cb),
                    1 => anti.add_term(xr, zr, ca * cb),
                    _ => anti.add_term(xr, zr, -ca * cb),
                }
            }
        }
        Ok((herm, anti))
    }

    /// Operator square `self * self` (always Hermitian).
    pub fn square(&self) -> PauliSum {
        let (herm, anti) = self.product_parts(self).expect("same size");
        // The imaginary cross terms cancel pairwise for a * a.
        debug_assert!(anti.frobenius_norm() < 1e-12);
        herm
    }

    /// Normalized Frobenius norm `sqrt(Tr(A^dag A) / 2^N) = sqrt(sum c^2)`,
    /// exact by Pauli orthogonality.
    pub fn frobenius_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// True when every term commutes with `g`.
    pub fn commutes_with_string(&self, g: &PauliString) -> bool {
        self.terms.keys().all(|&(x, z)| {
            ((x & g.z_mask).count_ones() + (z & g.x_mask).count_ones()) % 2 == 0
        })
    }

    /// True when every term anticommutes with `g`.
    pub fn anticommutes_with_string(&self, g: &PauliString) -> bool {
        self.terms.keys().all(|&(x, z)| {
            ((x & g.z_mask).count_ones() + (z & g.x_mask).count_ones()) % 2 == 1
        })
    }

    /// Dense Hermitian matrix of the sum.
    pub fn to_dense(&self) -> Result<DMat> {
        dense_guard(self.n_sites)?;
        let n = self.n_sites;
        let dim = 1usize << n;
        let mut m = DMat::zeros(dim, dim);
        for (&(x, z), &c) in &self.terms {
            let y = (x & z).count_ones() % 4;
            let phase = I_POWERS[y as usize] * c;
            let xr = reverse_mask(x, n) as usize;
            let zr = reverse_mask(z, n) as usize;
            for col in 0..dim {
                let sign = if (zr & col).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                m[(col ^ xr, col)] += phase * sign;
            }
        }
        Ok(m)
    }

    /// Text export: one `"<coeff> <site:letter>..."` line per term, keys in
    /// deterministic order. The identity term is a bare coefficient line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&(x, z), &c) in &self.terms {
            out.push_str(&format!("{c}"));
            for i in 1..=self.n_sites {
                let bit = 1u128 << (i - 1);
                let letter = match (x & bit != 0, z & bit != 0) {
                    (false, false) => continue,
                    (true, false) => 'X',
                    (false, true) => 'Z',
                    (true, true) => 'Y',
                };
                out.push_str(&format!(" {i}:{letter}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`Self::to_text`] format. Blank lines and `#` comments are
    /// skipped.
    pub fn from_text(n_sites: u32, text: &str) -> Result<Self> {
        let mut sum = PauliSum::new(n_sites);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let coeff: f64 = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad coefficient: {e}", lineno + 1)))?;
            let mut factors = Vec::new();
            for tok in parts {
                let (site, letter) = tok.split_once(':').ok_or_else(|| {
                    Error::Config(format!("line {}: expected site:letter, got {tok}", lineno + 1))
                })?;
                let site: u32 = site
                    .parse()
                    .map_err(|e| Error::Config(format!("line {}: bad site: {e}", lineno + 1)))?;
                let axis = match letter {
                    "X" | "x" => Axis::X,
                    "Y" | "y" => Axis::Y,
                    "Z" | "z" => Axis::Z,
                    _ => {
                        return Err(Error::Config(format!(
                            "line {}: unknown letter {letter}",
                            lineno + 1
                        )))
                    }
                };
                factors.push((site, axis));
            }
            let s = PauliString::from_factors(n_sites, &factors)?;
            sum.add_string(&s, coeff)?;
        }
        Ok(sum)
    }
}
