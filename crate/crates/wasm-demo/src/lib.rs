//! Browser bindings: three interactive views of the cluster-chain Floquet
//! dynamics, each returning a JSON payload for the static demo page in
//! `www/`. Errors come back as thrown JS strings.

use wasm_bindgen::prelude::wasm_bindgen;

use cluster_floquet::model::{self, ModelParams};
use cluster_floquet::observables::excitation_counts;
use cluster_floquet::spectroscopy::{spectroscopy_sweep, SpectrumOptions};
use cluster_floquet::statevec::{
    self, normalized_stabilizers, ExcitationGate, InitialStateSpec, StateKind,
};

const WASM_STATEVEC_MAX: u32 = 12;

fn check_chain(n: u32, max: u32) -> Result<(), String> {
    if n < 6 || n % 2 != 0 || n > max {
        return Err(format!("chain length must be even, 6..={max}, got {n}"));
    }
    Ok(())
}

fn default_excitations(n: u32) -> Vec<u32> {
    // one odd-centered flip pair near the left edge, one even-centered pair
    // near the right, mirroring the experiment's pattern
    vec![4, n - 3]
}

/// Edge-operator time series `<Z_L>, <X_L>, <Z_R>, <X_R>` under the Trotter
/// drive, optionally with bulk excitations.
#[wasm_bindgen]
pub fn edge_modes(n: u32, ratio: f64, cycles: u32, excited: bool) -> Result<String, String> {
    check_chain(n, WASM_STATEVEC_MAX)?;
    let cycles = cycles.clamp(1, 200);
    let p = ModelParams::main_experiment(n, ratio);
    let ops = model::logical_operators(&p).map_err(|e| e.to_string())?;
    let run = |kind: StateKind, observables: [&cluster_floquet::PauliString; 2]| {
        let spec = if excited {
            InitialStateSpec::with_excitations(kind, &default_excitations(n), ExcitationGate::XPi)
        } else {
            InitialStateSpec::bare(kind)
        };
        let s0 = statevec::prepare_initial(&p, &spec).map_err(|e| e.to_string())?;
        statevec::evolve_series(
            &s0,
            &p.profile(),
            cycles,
            &[*observables[0], *observables[1]],
        )
        .map_err(|e| e.to_string())
    };
    let z_rows = run(StateKind::ClusterZ, [&ops.z_l, &ops.z_r])?;
    let x_rows = run(StateKind::ClusterX, [&ops.x_l, &ops.x_r])?;
    let col = |rows: &[Vec<f64>], k: usize| -> Vec<f64> { rows.iter().map(|r| r[k]).collect() };
    let payload = serde_json::json!({
        "cycles": (0..=cycles).collect::<Vec<u32>>(),
        "z_l": col(&z_rows, 0),
        "z_r": col(&z_rows, 1),
        "x_l": col(&x_rows, 0),
        "x_r": col(&x_rows, 1),
    });
    Ok(payload.to_string())
}

/// Kicked-Kitaev spectroscopy at `v_xx = 0`: magnitude spectra of
/// `<Z_L(t)>` and `<Z_R(t)>`, extracted peaks, quasi-energies, and gaps.
#[wasm_bindgen]
pub fn spectroscopy(n: u32, ratio: f64, cycles: u32) -> Result<String, String> {
    check_chain(n, 64)?;
    let cycles = cycles.clamp(64, 1024);
    let base = ModelParams::spectroscopy(n, 1.0);
    let result = spectroscopy_sweep(&base, &[ratio], cycles, &SpectrumOptions::default())
        .map_err(|e| e.to_string())?;
    let row = &result.rows[0];
    let payload = serde_json::json!({
        "omega": row.spectrum_l.omega,
        "amp_l": row.spectrum_l.amplitude,
        "amp_r": row.spectrum_r.amplitude,
        "peaks_l": row.peaks_l,
        "peaks_r": row.peaks_r,
        "quasi_energies": row.quasi_energies,
        "delta": row.gaps.delta,
        "Delta": row.gaps.cap_delta,
        "zeta": row.gaps.zeta,
        "bin_width": row.gaps.bin_width,
    });
    Ok(payload.to_string())
}

/// Normalized stabilizer heatmap `K-bar_m(t)` (excited run over ground run)
/// plus the excitation-number series.
#[wasm_bindgen]
pub fn stabilizer_map(n: u32, ratio: f64, cycles: u32) -> Result<String, String> {
    check_chain(n, WASM_STATEVEC_MAX)?;
    let cycles = cycles.clamp(1, 200);
    let p = ModelParams::main_experiment(n, ratio);
    let stabs: Vec<_> = (1..=n)
        .map(|m| model::stabilizer(&p, m).unwrap())
        .collect();
    let run = |sites: &[u32]| {
        let spec = if sites.is_empty() {
            InitialStateSpec::bare(StateKind::ClusterX)
        } else {
            InitialStateSpec::with_excitations(StateKind::ClusterX, sites, ExcitationGate::XPi)
        };
        let s0 = statevec::prepare_initial(&p, &spec).map_err(|e| e.to_string())?;
        statevec::evolve_series(&s0, &p.profile(), cycles, &stabs).map_err(|e| e.to_string())
    };
    let excited = run(&default_excitations(n))?;
    let ground = run(&[])?;
    let table = normalized_stabilizers(&excited, &ground).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = table
        .iter()
        .map(|row| row.iter().map(|v| v.unwrap_or(f64::NAN)).collect())
        .collect();
    let bulk: Vec<Vec<f64>> = table
        .iter()
        .map(|row| {
            row[1..(n - 1) as usize]
                .iter()
                .map(|v| v.unwrap_or(0.0))
                .collect()
        })
        .collect();
    let charges = excitation_counts(n, &bulk).map_err(|e| e.to_string())?;
    let payload = serde_json::json!({
        "sites": (1..=n).collect::<Vec<u32>>(),
        "rows": rows,
        "n": charges.n,
        "n_e": charges.n_e,
        "n_o": charges.n_o,
    });
    Ok(payload.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_modes_payload_parses() {
        let json = edge_modes(8, 3.17, 20, true).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["cycles"].as_array().unwrap().len(), 21);
        assert_eq!(v["x_l"].as_array().unwrap().len(), 21);
        assert!((v["z_l"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectroscopy_payload_parses() {
        let json = spectroscopy(8, 1.1, 150).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["omega"].as_array().unwrap().len(), 151);
        assert!(v["zeta"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn stabilizer_map_payload_parses() {
        let json = stabilizer_map(8, 2.0, 10).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 11);
        // two X(pi) gates flip four stabilizers
        assert!((v["n"][0].as_f64().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn guards_reject_oversized_chains() {
        assert!(edge_modes(20, 1.0, 10, false).is_err());
        assert!(edge_modes(7, 1.0, 10, false).is_err());
        assert!(spectroscopy(128, 1.0, 150).is_err());
    }
}
