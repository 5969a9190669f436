//! Declarative experiment configs and the run pipeline: validation, sweep
//! expansion, a bounded worker pool, and deterministic CSV/JSON output.
//!
//! A run directory holds `meta.json` plus one CSV per observable family.
//! Re-running a config with the same seed and thread count reproduces every
//! CSV byte for byte (floats are printed with Rust's shortest round-trip
//! formatting and all iteration orders are fixed).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freefermion;
use crate::gates::build_trotter_step;
use crate::model::{self, CouplingProfile, DisorderSpec, ModelParams};
use crate::observables::{excitation_counts, ChargeSeries};
use crate::pauli::PauliString;
use crate::spectroscopy::{spectroscopy_sweep, SpectrumOptions, SpectrumResult};
use crate::statevec::{
    self, normalized_stabilizers, InitialStateSpec, LogicalDensityMatrix, Statevector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Statevec,
    Freefermion,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    EdgeOps,
    Stabilizers,
    Charges,
    BellFidelity,
    Tomography,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Ratio,
    JO,
    HX,
    VXX,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    pub j_e_range: [f64; 2],
    pub j_o_range: [f64; 2],
    pub h_x_range: [f64; 2],
    pub seed: u64,
    pub instances: u32,
}

impl DisorderConfig {
    fn spec_for_instance(&self, instance: u32, seed_override: Option<u64>) -> DisorderSpec {
        let base = seed_override.unwrap_or(self.seed);
        DisorderSpec {
            j_e_range: self.j_e_range,
            j_o_range: self.j_o_range,
            h_x_range: self.h_x_range,
            seed: base.wrapping_add(instance as u64),
        }
    }
}

/// A complete declarative experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub label: String,
    pub params: ModelParams,
    pub backend: Backend,
    pub initial: InitialStateSpec,
    pub cycles: u32,
    pub observables: Vec<ObservableKind>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub disorder: Option<DisorderConfig>,
    /// Fold single-qubit gate runs into U3 layers before running.
    #[serde(default)]
    pub compile_u3: bool,
}

/// Statevector memory guard (`2^22` amplitudes = 64 MiB).
const STATEVEC_MAX_SITES: u32 = 22;
const EXACT_MAX_SITES: u32 = 14;

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Fail-fast validation; no simulation state is touched.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.initial.validate(self.params.n_sites)?;
        if self.cycles < 1 {
            return Err(Error::Config("cycles must be >= 1".into()));
        }
        if self.observables.is_empty() {
            return Err(Error::Config("at least one observable required".into()));
        }
        match self.backend {
            Backend::Freefermion => {
                if self.params.v_xx != 0.0 {
                    return Err(Error::Config(
                        "freefermion backend requires v_xx = 0".into(),
                    ));
                }
                if matches!(
                    self.sweep,
                    Some(Sweep {
                        parameter: SweepParam::VXX,
                        ..
                    })
                ) {
                    return Err(Error::Config(
                        "freefermion backend cannot sweep v_xx".into(),
                    ));
                }
                if !self.initial.is_product() || !self.initial.excitation_sites.is_empty() {
                    return Err(Error::Config(
                        "freefermion backend requires a bare product initial state".into(),
                    ));
                }
                for obs in &self.observables {
                    if !matches!(obs, ObservableKind::EdgeOps) {
                        return Err(Error::Config(format!(
                            "freefermion backend only supports edge_ops, got {obs:?}"
                        )));
                    }
                }
                if self.disorder.is_some() {
                    return Err(Error::Config(
                        "disorder runs use the statevec or exact backend".into(),
                    ));
                }
            }
            Backend::Statevec => {
                if self.params.n_sites > STATEVEC_MAX_SITES {
                    return Err(Error::Config(format!(
                        "statevec backend capped at {STATEVEC_MAX_SITES} sites"
                    )));
                }
            }
            Backend::Exact => {
                if self.params.n_sites > EXACT_MAX_SITES {
                    return Err(Error::Config(format!(
                        "exact backend capped at {EXACT_MAX_SITES} sites"
                    )));
                }
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config("sweep.values must be non-empty".into()));
            }
            if sweep.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config("sweep.values must be finite".into()));
            }
        }
        if let Some(d) = &self.disorder {
            DisorderSpec {
                j_e_range: d.j_e_range,
                j_o_range: d.j_o_range,
                h_x_range: d.h_x_range,
                seed: d.seed,
            }
            .validate()?;
            if d.instances < 1 {
                return Err(Error::Config("disorder.instances must be >= 1".into()));
            }
        }
        if self.observables.contains(&ObservableKind::Tomography)
            || self.observables.contains(&ObservableKind::BellFidelity)
        {
            if self.backend == Backend::Freefermion {
                return Err(Error::Config(
                    "logical tomography requires a statevector backend".into(),
                ));
            }
        }
        Ok(())
    }

    fn params_with(&self, value: f64) -> ModelParams {
        let mut p = self.params;
        if let Some(sweep) = &self.sweep {
            match sweep.parameter {
                SweepParam::Ratio => p.j_o = value * p.j_e,
                SweepParam::JO => p.j_o = value,
                SweepParam::HX => p.h_x = value,
                SweepParam::VXX => p.v_xx = value,
            }
        }
        p
    }
}

/// One expanded work item of a scenario.
#[derive(Clone, Debug)]
struct RunPoint {
    index: usize,
    sweep_value: f64,
    instance: u32,
    params: ModelParams,
    profile: CouplingProfile,
}

fn expand_points(cfg: &ScenarioConfig, seed_override: Option<u64>) -> Result<Vec<RunPoint>> {
    let sweep_values = cfg
        .sweep
        .as_ref()
        .map(|s| s.values.clone())
        .unwrap_or_else(|| vec![f64::NAN]);
    let instances = cfg.disorder.as_ref().map(|d| d.instances).unwrap_or(1);
    let mut points = Vec::new();
    for &value in &sweep_values {
        let params = if value.is_nan() {
            cfg.params
        } else {
            cfg.params_with(value)
        };
        for instance in 0..instances {
            let profile = match &cfg.disorder {
                Some(d) => model::sample_disordered_params(
                    &params,
                    &d.spec_for_instance(instance, seed_override),
                )?,
                None => params.profile(),
            };
            points.push(RunPoint {
                index: points.len(),
                sweep_value: value,
                instance,
                params,
                profile,
            });
        }
    }
    Ok(points)
}

/// Everything produced by one run point.
#[derive(Clone, Debug)]
struct PointOutput {
    sweep_value: f64,
    instance: u32,
    edge_rows: Vec<(u32, [f64; 4])>,
    stab_rows: Vec<(u32, Vec<f64>)>,
    norm_stab_rows: Vec<(u32, Vec<Option<f64>>)>,
    charges: Option<ChargeSeries>,
    bell_rows: Vec<(u32, f64)>,
    tomography: Option<LogicalDensityMatrix>,
    parity_drift: f64,
    norm_drift: f64,
}

fn ground_companion(spec: &InitialStateSpec) -> InitialStateSpec {
    InitialStateSpec {
        excitation_sites: Vec::new(),
        ..spec.clone()
    }
}

struct StatevecRunRecord {
    edge_rows: Vec<(u32, [f64; 4])>,
    stab_rows: Vec<(u32, Vec<f64>)>,
    bell_rows: Vec<(u32, f64)>,
    final_state: Statevector,
    parity_drift: f64,
    norm_drift: f64,
}

fn run_statevector_point(
    cfg: &ScenarioConfig,
    point: &RunPoint,
    initial: &InitialStateSpec,
) -> Result<StatevecRunRecord> {
    let p = &point.params;
    let ops = model::logical_operators(p)?;
    let gens = model::symmetry_generators(p)?;
    let stabilizers: Vec<PauliString> = (1..=p.n_sites)
        .map(|m| model::stabilizer(p, m))
        .collect::<Result<_>>()?;
    let want_edges = cfg.observables.contains(&ObservableKind::EdgeOps);
    let want_stabs = cfg.observables.contains(&ObservableKind::Stabilizers)
        || cfg.observables.contains(&ObservableKind::Charges);
    let want_bell = cfg.observables.contains(&ObservableKind::BellFidelity);

    let mut state = statevec::prepare_initial(p, initial)?;
    let step = if cfg.backend == Backend::Exact {
        None
    } else {
        let c = build_trotter_step(&point.profile)?;
        Some(if cfg.compile_u3 {
            c.fold_single_qubit_runs()?
        } else {
            c
        })
    };
    let exact = if cfg.backend == Backend::Exact {
        Some(statevec::ExactEvolver::new(p)?)
    } else {
        None
    };

    let mut rec = StatevecRunRecord {
        edge_rows: Vec::new(),
        stab_rows: Vec::new(),
        bell_rows: Vec::new(),
        final_state: state.clone(),
        parity_drift: 0.0,
        norm_drift: 0.0,
    };
    let g_e0 = state.expectation_string(&gens.g_e)?;
    let g_o0 = state.expectation_string(&gens.g_o)?;

    for t in 0..=cfg.cycles {
        if t > 0 {
            match (&step, &exact) {
                (Some(c), _) => state.apply_circuit(c)?,
                (None, Some(ev)) => ev.advance(&mut state, p.dt)?,
                _ => unreachable!(),
            }
        }
        if want_edges {
            rec.edge_rows.push((
                t,
                [
                    state.expectation_string(&ops.z_l)?,
                    state.expectation_string(&ops.x_l)?,
                    state.expectation_string(&ops.z_r)?,
                    state.expectation_string(&ops.x_r)?,
                ],
            ));
        }
        if want_stabs {
            let row: Result<Vec<f64>> = stabilizers
                .iter()
                .map(|k| state.expectation_string(k))
                .collect();
            rec.stab_rows.push((t, row?));
        }
        if want_bell {
            rec.bell_rows.push((t, statevec::bell_fidelity(&state, p)?));
        }
        let drift = (state.expectation_string(&gens.g_e)? - g_e0)
            .abs()
            .max((state.expectation_string(&gens.g_o)? - g_o0).abs());
        rec.parity_drift = rec.parity_drift.max(drift);
        rec.norm_drift = rec.norm_drift.max((state.norm() - 1.0).abs());
    }
    rec.final_state = state;
    Ok(rec)
}

fn run_point(cfg: &ScenarioConfig, point: &RunPoint) -> Result<PointOutput> {
    match cfg.backend {
        Backend::Freefermion => {
            let prop = freefermion::build_propagator(&point.profile)?;
            let moments = freefermion::initial_moments(&cfg.initial, point.params.n_sites)?;
            let series = freefermion::edge_time_series(&prop, &moments, cfg.cycles);
            let edge_rows = (0..=cfg.cycles)
                .map(|t| {
                    let i = t as usize;
                    (
                        t,
                        [series.z_l[i], series.x_l[i], series.z_r[i], series.x_r[i]],
                    )
                })
                .collect();
            Ok(PointOutput {
                sweep_value: point.sweep_value,
                instance: point.instance,
                edge_rows,
                stab_rows: Vec::new(),
                norm_stab_rows: Vec::new(),
                charges: None,
                bell_rows: Vec::new(),
                tomography: None,
                parity_drift: 0.0,
                norm_drift: prop.orthogonality_residual(),
            })
        }
        Backend::Statevec | Backend::Exact => {
            let main = run_statevector_point(cfg, point, &cfg.initial)?;
            let mut out = PointOutput {
                sweep_value: point.sweep_value,
                instance: point.instance,
                edge_rows: main.edge_rows,
                stab_rows: main.stab_rows.clone(),
                norm_stab_rows: Vec::new(),
                charges: None,
                bell_rows: main.bell_rows,
                tomography: None,
                parity_drift: main.parity_drift,
                norm_drift: main.norm_drift,
            };
            if cfg.observables.contains(&ObservableKind::Charges) {
                // normalize the excited run by a companion ground run
                let ground =
                    run_statevector_point(cfg, point, &ground_companion(&cfg.initial))?;
                let excited_rows: Vec<Vec<f64>> =
                    main.stab_rows.iter().map(|(_, r)| r.clone()).collect();
                let ground_rows: Vec<Vec<f64>> =
                    ground.stab_rows.iter().map(|(_, r)| r.clone()).collect();
                let table = normalized_stabilizers(&excited_rows, &ground_rows)?;
                out.norm_stab_rows = table
                    .iter()
                    .enumerate()
                    .map(|(t, row)| (t as u32, row.clone()))
                    .collect();
                // masked entries enter the counts as fully excited ratio 0
                let n = point.params.n_sites;
                let bulk: Vec<Vec<f64>> = table
                    .iter()
                    .map(|row| {
                        row[1..(n - 1) as usize]
                            .iter()
                            .map(|v| v.unwrap_or(0.0))
                            .collect()
                    })
                    .collect();
                out.charges = Some(excitation_counts(n, &bulk)?);
                out.parity_drift = out.parity_drift.max(ground.parity_drift);
                out.norm_drift = out.norm_drift.max(ground.norm_drift);
            }
            if cfg.observables.contains(&ObservableKind::Tomography) {
                out.tomography = Some(statevec::logical_tomography(
                    &main.final_state,
                    &point.params,
                )?);
            }
            Ok(out)
        }
    }
}

/// Metadata echoed next to the CSVs.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub label: String,
    pub config: ScenarioConfig,
    pub seed_override: Option<u64>,
    pub threads: usize,
    pub points: usize,
    pub version: String,
    pub code: String,
    pub started_unix: u64,
}

/// Run artifacts: the output directory, written files, and self-check
/// results (drift beyond tolerance does not abort the run, it is reported).
#[derive(Clone, Debug)]
pub struct RunDataset {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub max_parity_drift: f64,
    pub max_norm_drift: f64,
    pub self_check_failures: Vec<String>,
}

pub const PARITY_DRIFT_TOL: f64 = 1e-10;
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// Executes a validated scenario on a bounded worker pool and writes the
/// dataset. `threads = 1` stays on the calling thread.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    out_dir: &Path,
    threads: usize,
    seed_override: Option<u64>,
) -> Result<RunDataset> {
    cfg.validate()?;
    let points = expand_points(cfg, seed_override)?;
    let threads = threads.max(1).min(points.len().max(1));

    let mut outputs: Vec<Option<PointOutput>> = vec![None; points.len()];
    if threads == 1 {
        for point in &points {
            outputs[point.index] = Some(run_point(cfg, point)?);
        }
    } else {
        let (tx, rx) = mpsc::channel::<(usize, Result<PointOutput>)>();
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                let tx = tx.clone();
                let next = &next;
                let points = &points;
                scope.spawn(move || loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= points.len() {
                        break;
                    }
                    let result = run_point(cfg, &points[i]);
                    if tx.send((i, result)).is_err() {
                        break;
                    }
                });
            }
        });
        drop(tx);
        for (i, result) in rx {
            outputs[i] = Some(result?);
        }
    }
    let outputs: Vec<PointOutput> = outputs.into_iter().map(|o| o.unwrap()).collect();

    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    let mut max_parity = 0.0f64;
    let mut max_norm = 0.0f64;
    for o in &outputs {
        max_parity = max_parity.max(o.parity_drift);
        max_norm = max_norm.max(o.norm_drift);
    }

    let value_label = |o: &PointOutput| -> String {
        if o.sweep_value.is_nan() {
            String::new()
        } else {
            format!("{}", o.sweep_value)
        }
    };

    let instances = cfg.disorder.as_ref().map(|d| d.instances).unwrap_or(1);

    if cfg.observables.contains(&ObservableKind::EdgeOps) {
        let mut csv = String::from("sweep_value,instance,cycle,observable,value\n");
        for o in &outputs {
            for (t, vals) in &o.edge_rows {
                for (name, v) in ["z_l", "x_l", "z_r", "x_r"].iter().zip(vals.iter()) {
                    writeln!(csv, "{},{},{},{},{}", value_label(o), o.instance, t, name, v)
                        .unwrap();
                }
            }
        }
        files.push(write_file(out_dir, "edge_ops.csv", &csv)?);

        // disorder runs also report the instance average, per-instance data
        // retained above
        if instances > 1 {
            let mut csv = String::from("sweep_value,cycle,observable,mean_value\n");
            for chunk in outputs.chunks(instances as usize) {
                for (row_idx, (t, _)) in chunk[0].edge_rows.iter().enumerate() {
                    for (k, name) in ["z_l", "x_l", "z_r", "x_r"].iter().enumerate() {
                        let mean: f64 = chunk
                            .iter()
                            .map(|o| o.edge_rows[row_idx].1[k])
                            .sum::<f64>()
                            / chunk.len() as f64;
                        writeln!(csv, "{},{},{},{}", value_label(&chunk[0]), t, name, mean)
                            .unwrap();
                    }
                }
            }
            files.push(write_file(out_dir, "edge_ops_mean.csv", &csv)?);
        }
    }
    if cfg.observables.contains(&ObservableKind::Stabilizers) {
        let mut csv = String::from("sweep_value,instance,cycle,site,value\n");
        for o in &outputs {
            for (t, row) in &o.stab_rows {
                for (site, v) in row.iter().enumerate() {
                    writeln!(
                        csv,
                        "{},{},{},{},{}",
                        value_label(o),
                        o.instance,
                        t,
                        site + 1,
                        v
                    )
                    .unwrap();
                }
            }
        }
        files.push(write_file(out_dir, "stabilizers.csv", &csv)?);
    }
    if cfg.observables.contains(&ObservableKind::Charges) {
        let mut csv = String::from("sweep_value,instance,cycle,n,n_e,n_o\n");
        for o in &outputs {
            if let Some(c) = &o.charges {
                for t in 0..c.n.len() {
                    writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        value_label(o),
                        o.instance,
                        t,
                        c.n[t],
                        c.n_e[t],
                        c.n_o[t]
                    )
                    .unwrap();
                }
            }
        }
        files.push(write_file(out_dir, "charges.csv", &csv)?);

        if instances > 1 {
            let mut csv = String::from("sweep_value,cycle,mean_n,mean_n_e,mean_n_o\n");
            for chunk in outputs.chunks(instances as usize) {
                if chunk.iter().any(|o| o.charges.is_none()) {
                    continue;
                }
                let len = chunk[0].charges.as_ref().unwrap().n.len();
                for t in 0..len {
                    let mean = |pick: fn(&ChargeSeries) -> &Vec<f64>| -> f64 {
                        chunk
                            .iter()
                            .map(|o| pick(o.charges.as_ref().unwrap())[t])
                            .sum::<f64>()
                            / chunk.len() as f64
                    };
                    writeln!(
                        csv,
                        "{},{},{},{},{}",
                        value_label(&chunk[0]),
                        t,
                        mean(|c| &c.n),
                        mean(|c| &c.n_e),
                        mean(|c| &c.n_o)
                    )
                    .unwrap();
                }
            }
            files.push(write_file(out_dir, "charges_mean.csv", &csv)?);
        }

        let mut csv = String::from("sweep_value,instance,cycle,site,value,masked\n");
        for o in &outputs {
            for (t, row) in &o.norm_stab_rows {
                for (site, v) in row.iter().enumerate() {
                    match v {
                        Some(v) => writeln!(
                            csv,
                            "{},{},{},{},{},0",
                            value_label(o),
                            o.instance,
                            t,
                            site + 1,
                            v
                        )
                        .unwrap(),
                        None => writeln!(
                            csv,
                            "{},{},{},{},,1",
                            value_label(o),
                            o.instance,
                            t,
                            site + 1
                        )
                        .unwrap(),
                    }
                }
            }
        }
        files.push(write_file(out_dir, "stabilizers_normalized.csv", &csv)?);
    }
    if cfg.observables.contains(&ObservableKind::BellFidelity) {
        let mut csv = String::from("sweep_value,instance,cycle,fidelity\n");
        for o in &outputs {
            for (t, f) in &o.bell_rows {
                writeln!(csv, "{},{},{},{}", value_label(o), o.instance, t, f).unwrap();
            }
        }
        files.push(write_file(out_dir, "bell_fidelity.csv", &csv)?);
    }
    if cfg.observables.contains(&ObservableKind::Tomography) {
        let mut csv = String::from("sweep_value,instance,row,col,re,im\n");
        for o in &outputs {
            if let Some(rho) = &o.tomography {
                for r in 0..4 {
                    for c in 0..4 {
                        writeln!(
                            csv,
                            "{},{},{},{},{},{}",
                            value_label(o),
                            o.instance,
                            r,
                            c,
                            rho.matrix[r][c].re,
                            rho.matrix[r][c].im
                        )
                        .unwrap();
                    }
                }
            }
        }
        files.push(write_file(out_dir, "tomography.csv", &csv)?);
    }

    let mut self_check_failures = Vec::new();
    if max_parity > PARITY_DRIFT_TOL {
        self_check_failures.push(format!(
            "parity drift {max_parity:e} exceeds {PARITY_DRIFT_TOL:e}"
        ));
    }
    if max_norm > NORM_DRIFT_TOL {
        self_check_failures.push(format!(
            "norm drift {max_norm:e} exceeds {NORM_DRIFT_TOL:e}"
        ));
    }

    let meta = RunMeta {
        label: cfg.label.clone(),
        config: cfg.clone(),
        seed_override,
        threads,
        points: points.len(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        code: option_env!("CLUSTER_FLOQUET_GIT").unwrap_or("unknown").to_string(),
        started_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let meta_json = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::Config(format!("meta serialization: {e}")))?;
    files.push(write_file(out_dir, "meta.json", &meta_json)?);

    Ok(RunDataset {
        out_dir: out_dir.to_path_buf(),
        files,
        max_parity_drift: max_parity,
        max_norm_drift: max_norm,
        self_check_failures,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<String> {
    std::fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

/// Writes a spectroscopy sweep as `spectrum_{l,r}.csv` (ratio, omega,
/// amplitude) plus `gaps.json` with one record per ratio.
pub fn write_spectroscopy(out_dir: &Path, result: &SpectrumResult) -> Result<Vec<String>> {
    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for (name, pick) in [
        ("spectrum_l.csv", true),
        ("spectrum_r.csv", false),
    ] {
        let mut csv = String::from("ratio,omega,amplitude\n");
        for row in &result.rows {
            let spec = if pick { &row.spectrum_l } else { &row.spectrum_r };
            for (w, a) in spec.omega.iter().zip(spec.amplitude.iter()) {
                writeln!(csv, "{},{},{}", row.ratio, w, a).unwrap();
            }
        }
        files.push(write_file(out_dir, name, &csv)?);
    }
    #[derive(Serialize)]
    struct GapRecord {
        ratio: f64,
        delta: f64,
        #[serde(rename = "Delta")]
        cap_delta: f64,
        zeta: f64,
        bin_width: f64,
    }
    let gaps: Vec<GapRecord> = result
        .rows
        .iter()
        .map(|r| GapRecord {
            ratio: r.ratio,
            delta: r.gaps.delta,
            cap_delta: r.gaps.cap_delta,
            zeta: r.gaps.zeta,
            bin_width: r.gaps.bin_width,
        })
        .collect();
    let json = serde_json::to_string_pretty(&gaps)
        .map_err(|e| Error::Config(format!("gaps serialization: {e}")))?;
    files.push(write_file(out_dir, "gaps.json", &json)?);
    Ok(files)
}

/// Convenience wrapper used by the `spectroscopy` subcommand.
pub fn run_spectroscopy_scenario(
    cfg: &ScenarioConfig,
    out_dir: &Path,
) -> Result<(SpectrumResult, Vec<String>)> {
    cfg.validate()?;
    if cfg.backend != Backend::Freefermion {
        return Err(Error::Config(
            "spectroscopy runs on the freefermion backend".into(),
        ));
    }
    let ratios: Vec<f64> = match &cfg.sweep {
        Some(Sweep {
            parameter: SweepParam::Ratio,
            values,
        }) => values.clone(),
        _ => {
            return Err(Error::Config(
                "spectroscopy needs a sweep over `ratio`".into(),
            ))
        }
    };
    let result = spectroscopy_sweep(
        &cfg.params,
        &ratios,
        cfg.cycles,
        &SpectrumOptions::default(),
    )?;
    let files = write_spectroscopy(out_dir, &result)?;
    Ok((result, files))
}
