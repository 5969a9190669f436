// One-time oracle calibration for the frozen acceptance bounds.
// Run: cargo run --release -p cluster-floquet --example calibrate
use cluster_floquet::model::{self, ModelParams};
use cluster_floquet::observables::{excitation_counts, lifetime, linear_fit};
use cluster_floquet::pauli::PauliString;
use cluster_floquet::statevec::{
    self, bell_fidelity, prepare_initial, ExactEvolver, ExcitationGate, InitialStateSpec,
    StateKind,
};

fn stab_series_trotter(p: &ModelParams, spec: &InitialStateSpec, cycles: u32) -> Vec<Vec<f64>> {
    let stabs: Vec<PauliString> = (2..p.n_sites)
        .map(|m| model::stabilizer(p, m).unwrap())
        .collect();
    let s0 = prepare_initial(p, spec).unwrap();
    statevec::evolve_series(&s0, &p.profile(), cycles, &stabs).unwrap()
}

fn stab_series_exact(p: &ModelParams, spec: &InitialStateSpec, cycles: u32) -> Vec<Vec<f64>> {
    let stabs: Vec<PauliString> = (2..p.n_sites)
        .map(|m| model::stabilizer(p, m).unwrap())
        .collect();
    let mut s = prepare_initial(p, spec).unwrap();
    let ev = ExactEvolver::new(p).unwrap();
    let mut rows = Vec::new();
    for t in 0..=cycles {
        if t > 0 {
            ev.advance(&mut s, p.dt).unwrap();
        }
        rows.push(
            stabs
                .iter()
                .map(|k| s.expectation_string(k).unwrap())
                .collect(),
        );
    }
    rows
}

fn charge_stats(n: u32, rows: &[Vec<f64>]) -> (f64, f64, f64, Vec<f64>, Vec<f64>, Vec<f64>) {
    let c = excitation_counts(n, rows).unwrap();
    let n_drift = c
        .n
        .iter()
        .map(|v| (v - c.n[0]).abs())
        .fold(0.0f64, f64::max);
    let ne_drift = c
        .n_e
        .iter()
        .map(|v| (v - c.n_e[0]).abs())
        .fold(0.0f64, f64::max);
    let no_drift = c
        .n_o
        .iter()
        .map(|v| (v - c.n_o[0]).abs())
        .fold(0.0f64, f64::max);
    (n_drift, ne_drift, no_drift, c.n, c.n_e, c.n_o)
}

fn main() {
    // ---- criterion 5: charge trends at N=12, 30 cycles ----
    let n = 12u32;
    let cycles = 30u32;
    let exc = InitialStateSpec::with_excitations(
        StateKind::ClusterX,
        &[4, 7, 10],
        ExcitationGate::XPi,
    );
    println!("=== charges N={n}, cycles={cycles}, X(pi) at 4,7,10 ===");
    for ratio in [1.0, 2.0, 3.17] {
        let p = ModelParams::main_experiment(n, ratio);
        let trotter = stab_series_trotter(&p, &exc, cycles);
        let (nd, ned, nod, n_series, ne_series, no_series) = charge_stats(n, &trotter);
        println!("ratio {ratio}: trotter n_drift={nd:.4} ne_drift={ned:.4} no_drift={nod:.4}");
        println!("   n(0)={} ne(0)={} no(0)={}", n_series[0], ne_series[0], no_series[0]);
        let gap: Vec<f64> = ne_series
            .iter()
            .zip(no_series.iter())
            .map(|(a, b)| (a - b).abs())
            .collect();
        let min_gap = gap.iter().cloned().fold(f64::INFINITY, f64::min);
        let last_gap = *gap.last().unwrap();
        println!("   |ne-no|: initial={} min={min_gap:.4} final={last_gap:.4}", gap[0]);
        // windowed slopes over the first 10 cycles
        for w in [8usize, 10, 15] {
            let pts_o: Vec<(f64, f64)> = (0..=w).map(|t| (t as f64, no_series[t])).collect();
            let pts_e: Vec<(f64, f64)> = (0..=w).map(|t| (t as f64, ne_series[t])).collect();
            println!(
                "   window {w}: dn_o/dt={:.4} dn_e/dt={:.4}",
                linear_fit(&pts_o).0,
                linear_fit(&pts_e).0
            );
        }
        if ratio == 1.0 {
            let exact = stab_series_exact(&p, &exc, cycles);
            let (nd_x, ned_x, nod_x, ..) = charge_stats(n, &exact);
            println!(
                "   exact oracle: n_drift={nd_x:.4} ne_drift={ned_x:.4} no_drift={nod_x:.4}"
            );
        }
    }

    // ---- criterion 4: lifetimes at N=14, 30 cycles ----
    // excitation pattern mirrors the experiment: odd-centered flips near the
    // left edge (site 4 -> K3, K5), even-centered near the right (site 11 ->
    // K10, K12)
    println!("\n=== lifetimes N=14, 30 cycles, X(pi) at 4,11 ===");
    let n = 14u32;
    for ratio in [1.0, 1.6, 2.0, 2.4, 3.17] {
        let p = ModelParams::main_experiment(n, ratio);
        let ops = model::logical_operators(&p).unwrap();
        let z_spec = InitialStateSpec::with_excitations(
            StateKind::ClusterZ,
            &[4, 11],
            ExcitationGate::XPi,
        );
        let x_spec = InitialStateSpec::with_excitations(
            StateKind::ClusterX,
            &[4, 11],
            ExcitationGate::XPi,
        );
        let sz = prepare_initial(&p, &z_spec).unwrap();
        let rows_z =
            statevec::evolve_series(&sz, &p.profile(), 30, &[ops.z_l, ops.z_r]).unwrap();
        let sx = prepare_initial(&p, &x_spec).unwrap();
        let rows_x =
            statevec::evolve_series(&sx, &p.profile(), 30, &[ops.x_l, ops.x_r]).unwrap();
        let col = |rows: &[Vec<f64>], k: usize| -> Vec<f64> { rows.iter().map(|r| r[k]).collect() };
        let lt = |series: &[f64]| lifetime(series, 0.5).unwrap().value_or_horizon();
        println!(
            "ratio {ratio}: t(Z_L)={:.2} t(X_L)={:.2} t(Z_R)={:.2} t(X_R)={:.2}",
            lt(&col(&rows_z, 0)),
            lt(&col(&rows_x, 0)),
            lt(&col(&rows_z, 1)),
            lt(&col(&rows_x, 1)),
        );
    }

    // ---- criterion 8: Bell fidelities at N=12 ----
    println!("\n=== bell N=12, X(pi) at 4,7,10 ===");
    let n = 12u32;
    for ratio in [1.0, 2.0, 3.17] {
        let p = ModelParams::main_experiment(n, ratio);
        let excited = InitialStateSpec::with_excitations(
            StateKind::LogicalBell,
            &[4, 7, 10],
            ExcitationGate::XPi,
        );
        let ground = InitialStateSpec::bare(StateKind::LogicalBell);
        let run = |spec: &InitialStateSpec, cycles: u32| -> Vec<f64> {
            let step = cluster_floquet::gates::build_trotter_step(&p.profile()).unwrap();
            let mut s = prepare_initial(&p, spec).unwrap();
            let mut out = Vec::new();
            for t in 0..=cycles {
                if t > 0 {
                    s.apply_circuit(&step).unwrap();
                }
                out.push(bell_fidelity(&s, &p).unwrap());
            }
            out
        };
        let fe = run(&excited, 30);
        let fg = run(&ground, 30);
        println!(
            "ratio {ratio}: F_e(10)={:.4} F_g(10)={:.4} F_e(30)={:.4} F_g(30)={:.4}",
            fe[10], fg[10], fe[30], fg[30]
        );
    }
}
