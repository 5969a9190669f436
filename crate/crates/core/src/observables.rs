//! Derived quantities shared by both backends: excitation counting, edge-mode
//! lifetimes, and spectral gap fits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectroscopy::SpectrumResult;

/// Per-cycle bulk excitation numbers: total, even-site, odd-site.
#[derive(Clone, Debug, Serialize)]
pub struct ChargeSeries {
    pub n: Vec<f64>,
    pub n_e: Vec<f64>,
    pub n_o: Vec<f64>,
}

/// Counts excitations from bulk stabilizer rows: `n = sum_m (1 - <K_m>)/2`
/// over `m = 2..=N-1`, split by center parity. Each row must hold the bulk
/// values in center order.
pub fn excitation_counts(n_sites: u32, bulk_rows: &[Vec<f64>]) -> Result<ChargeSeries> {
    let bulk_len = (n_sites - 2) as usize;
    let mut out = ChargeSeries {
        n: Vec::with_capacity(bulk_rows.len()),
        n_e: Vec::with_capacity(bulk_rows.len()),
        n_o: Vec::with_capacity(bulk_rows.len()),
    };
    for (t, row) in bulk_rows.iter().enumerate() {
        if row.len() != bulk_len {
            return Err(Error::LengthMismatch(format!(
                "row {t}: expected {bulk_len} bulk stabilizers, got {}",
                row.len()
            )));
        }
        let mut n_e = 0.0;
        let mut n_o = 0.0;
        for (j, k) in row.iter().enumerate() {
            let center = j as u32 + 2;
            let x = (1.0 - k) / 2.0;
            if center % 2 == 0 {
                n_e += x;
            } else {
                n_o += x;
            }
        }
        out.n.push(n_e + n_o);
        out.n_e.push(n_e);
        out.n_o.push(n_o);
    }
    Ok(out)
}

/// First crossing of `|signal| < threshold`, linearly interpolated between
/// cycles; censored when the signal never crosses within the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LifetimeEstimate {
    pub t_half: Option<f64>,
    pub horizon: u32,
}

impl LifetimeEstimate {
    pub fn censored(&self) -> bool {
        self.t_half.is_none()
    }

    /// Value for ordering comparisons: censored series outlive the horizon.
    pub fn value_or_horizon(&self) -> f64 {
        self.t_half.unwrap_or(self.horizon as f64 + 1.0)
    }
}

pub fn lifetime(signal: &[f64], threshold: f64) -> Result<LifetimeEstimate> {
    if signal.is_empty() {
        return Err(Error::Precondition("empty signal".into()));
    }
    if signal[0].abs() < threshold {
        return Err(Error::Precondition(format!(
            "signal starts at |{}| < threshold {threshold}",
            signal[0]
        )));
    }
    let horizon = (signal.len() - 1) as u32;
    for t in 1..signal.len() {
        let prev = signal[t - 1].abs();
        let cur = signal[t].abs();
        if cur < threshold {
            // linear interpolation of |signal| between the two cycles
            let frac = if prev > cur {
                (prev - threshold) / (prev - cur)
            } else {
                1.0
            };
            return Ok(LifetimeEstimate {
                t_half: Some((t - 1) as f64 + frac),
                horizon,
            });
        }
    }
    Ok(LifetimeEstimate {
        t_half: None,
        horizon,
    })
}

/// Signed mean of the last `window` samples: the edge-mode amplitude
/// retained at the end of a run. Near first-order resonances the edge
/// operator is coherently rotated away from its initial value, which this
/// metric exposes even when a threshold crossing happens during the early
/// dressing transient at every ratio.
pub fn retained_amplitude(signal: &[f64], window: usize) -> Result<f64> {
    if signal.is_empty() || window == 0 {
        return Err(Error::Precondition("empty signal or window".into()));
    }
    let w = window.min(signal.len());
    Ok(signal[signal.len() - w..].iter().sum::<f64>() / w as f64)
}

/// Least-squares fit `y = a x + b`; returns `(a, b, r2)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (0.0, points.first().map(|p| p.1).unwrap_or(0.0), f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}

#[derive(Clone, Debug, Serialize)]
pub struct GapFit {
    /// Slope and R^2 of `zeta` against `|J_e - J_o|`.
    pub zeta_slope: f64,
    pub zeta_r2: f64,
    /// `delta(J_o)` non-increasing within one bin width.
    pub delta_monotone_decreasing: bool,
    pub delta_values: Vec<f64>,
    pub cap_delta_values: Vec<f64>,
}

/// Fits the gap trends of a spectroscopy sweep (rows must be ordered by
/// increasing ratio).
pub fn gap_fit(spectra: &SpectrumResult) -> Result<GapFit> {
    if spectra.rows.len() < 5 {
        return Err(Error::Precondition(format!(
            "gap fit needs at least 5 ratios, got {}",
            spectra.rows.len()
        )));
    }
    let pts: Vec<(f64, f64)> = spectra
        .rows
        .iter()
        .filter(|r| r.gaps.zeta.is_finite())
        .map(|r| {
            let j_e = r.j_o / r.ratio;
            ((j_e - r.j_o).abs(), r.gaps.zeta)
        })
        .collect();
    let (zeta_slope, _, zeta_r2) = linear_fit(&pts);
    let deltas: Vec<f64> = spectra.rows.iter().map(|r| r.gaps.delta).collect();
    let bin = spectra.bin_width;
    let delta_monotone_decreasing = deltas
        .windows(2)
        .all(|w| w[1] <= w[0] + bin + 1e-12);
    Ok(GapFit {
        zeta_slope,
        zeta_r2,
        delta_monotone_decreasing,
        delta_values: deltas,
        cap_delta_values: spectra.rows.iter().map(|r| r.gaps.cap_delta).collect(),
    })
}
