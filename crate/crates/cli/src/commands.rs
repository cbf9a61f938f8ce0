use std::path::Path;

use anyhow::Context;
use serde_json::json;
use spinphoton::cavity::{transmission_contrast, ContrastParams, InteractionModel};
use spinphoton::circuitdsl;
use spinphoton::measurement::{sample_distribution, shard_seed, Distribution, PhotonOutcome};
use spinphoton::protocols::{
    bsa, classify_outcome, cnot, ghz, photon_qubit, spin_qubit, BellState, SpinOutcome, StreamOptions,
};
use spinphoton::qstate::RegisterKind;
use spinphoton::Amp;

use crate::config::{usage, CommonArgs, RunConfig, Sampling};
use crate::report::{Cell, Report};

fn basis_amps(k: usize) -> [Amp<f64>; 2] {
    let mut a = [Amp::new(0.0, 0.0); 2];
    a[k] = Amp::new(1.0, 0.0);
    a
}

/// Empirical frequencies of `d` from `s.samples` draws.
fn empirical<K: Ord + Clone>(d: &Distribution<K, f64>, s: &Sampling, stream: u64) -> Vec<(K, u64)> {
    let counts = sample_distribution(d, s.samples, shard_seed(s.seed, stream));
    d.iter().map(|(k, _)| (k.clone(), counts.get(k).copied().unwrap_or(0))).collect()
}

/// Truth table of the CNOT circuit on the four computational inputs.
///
/// Columns: photon_in, spin_in, photon_out, spin_out, output_probability,
/// fidelity, success_probability. `*_out` is the most likely post-selected
/// output and `output_probability` its weight.
pub fn cnot_table(cfg: &RunConfig) -> anyhow::Result<Report> {
    cfg.reject_sampling("cnot-table")?;
    let mut report = Report::new(
        "cnot-table",
        ["photon_in", "spin_in", "photon_out", "spin_out", "output_probability", "fidelity", "success_probability"],
        cfg.model_meta.clone(),
        cfg.seed,
    );
    for (s, spin) in ["Up", "Down"].iter().enumerate() {
        for (p, pol) in ["R", "L"].iter().enumerate() {
            let [a, b] = basis_amps(p);
            let [g, d] = basis_amps(s);
            let r = cnot(&photon_qubit(a, b), &spin_qubit(g, d), &cfg.model)?;
            let out = &r.output_state;
            let (best, weight) = out
                .amplitudes()
                .iter()
                .map(|z| z.norm_sqr())
                .enumerate()
                .fold((0, -1.0), |acc, (k, w)| if w > acc.1 + 1e-15 { (k, w) } else { acc });
            let labels = out.labels(best);
            report.push(vec![
                (*pol).into(),
                (*spin).into(),
                labels[0].into(),
                labels[1].into(),
                weight.into(),
                r.fidelity.into(),
                r.success_probability.into(),
            ]);
        }
    }
    Ok(report)
}

fn photon_cells(p: &PhotonOutcome) -> [Cell; 2] {
    match p {
        PhotonOutcome::Detected { port, pol } => [pol.as_str().into(), port.as_str().into()],
        PhotonOutcome::Lost => ["-".into(), "lost".into()],
    }
}

fn spin_symbol(label: &str) -> &str {
    match label {
        "Plus" => "+",
        "Minus" => "-",
        other => other,
    }
}

/// Every nonzero analyzer outcome for each Bell input.
///
/// Columns: bell_state, photon1_pol, photon1_port, photon2_pol, photon2_port,
/// spin, probability, classified_as, success_probability,
/// identification_probability, then samples and empirical_probability when
/// sampling.
pub fn bsa_table(cfg: &RunConfig) -> anyhow::Result<Report> {
    let mut columns = vec![
        "bell_state",
        "photon1_pol",
        "photon1_port",
        "photon2_pol",
        "photon2_port",
        "spin",
        "probability",
        "classified_as",
        "success_probability",
        "identification_probability",
    ];
    if cfg.sampling.is_some() {
        columns.extend(["samples", "empirical_probability"]);
    }
    let mut report = Report::new("bsa-table", columns, cfg.model_meta.clone(), cfg.seed);
    for (b, bell) in BellState::ALL.iter().enumerate() {
        let res = bsa(&bell.state(), &cfg.model)?;
        let outcomes = res.outcomes.pruned(1e-12);
        let counts = cfg.sampling.as_ref().map(|s| empirical(&outcomes, s, b as u64));
        for (k, (rec, p)) in outcomes.iter().enumerate() {
            let [p1, q1] = photon_cells(&rec.photons[0]);
            let [p2, q2] = photon_cells(&rec.photons[1]);
            let mut row = vec![
                bell.name().into(),
                p1,
                q1,
                p2,
                q2,
                spin_symbol(&rec.spin).into(),
                p.into(),
                classify_outcome(rec).map_or("none", BellState::name).into(),
                res.success_probability.into(),
                res.posterior.get(bell).into(),
            ];
            if let (Some(c), Some(s)) = (&counts, &cfg.sampling) {
                let n = c[k].1;
                row.extend([n.into(), (n as f64 / s.samples as f64).into()]);
            }
            report.push(row);
        }
    }
    Ok(report)
}

/// Columns: n, spin, outcome_probability, fidelity, success_probability.
pub fn ghz_report(cfg: &RunConfig, n: usize, spin_phase: f64) -> anyhow::Result<Report> {
    cfg.reject_sampling("ghz")?;
    let mut report = Report::new(
        "ghz",
        ["n", "spin", "outcome_probability", "fidelity", "success_probability"],
        cfg.model_meta.clone(),
        cfg.seed,
    );
    let out = ghz(n, &cfg.model, &StreamOptions { spin_phase })?;
    for outcome in [SpinOutcome::Plus, SpinOutcome::Minus] {
        let (p, r) = &out[&outcome];
        report.push(vec![
            n.into(),
            outcome.to_string().into(),
            (*p).into(),
            r.fidelity.into(),
            r.success_probability.into(),
        ]);
    }
    Ok(report)
}

pub const OPERATING_POINT: (f64, f64) = (0.8, 6.0);

/// Mean post-selected CNOT fidelity and success probability over the four
/// computational-basis inputs.
pub fn cnot_figures(model: &InteractionModel<f64>) -> anyhow::Result<(f64, f64)> {
    let mut fid = 0.0;
    let mut succ = 0.0;
    for k in 0..4 {
        let [a, b] = basis_amps(k / 2);
        let [g, d] = basis_amps(k % 2);
        let r = cnot(&photon_qubit(a, b), &spin_qubit(g, d), model)?;
        fid += r.fidelity / 4.0;
        succ += r.success_probability / 4.0;
    }
    Ok((fid, succ))
}

/// Grid over `(Q/Q0)², F_P` with the lossy model built from each point.
///
/// Columns: q_ratio_sq, purcell, delta, cnot_fidelity, success_probability,
/// operating_point. The operating point (0.8, 6) is always included.
pub fn sweep_delta(common: &CommonArgs, q_values: &[f64], purcell_values: &[f64]) -> anyhow::Result<Report> {
    let fixed = common.model.is_some()
        || common.q_ratio_sq.is_some()
        || common.purcell.is_some()
        || common.alpha_m.is_some()
        || common.alpha_scat.is_some()
        || common.alpha_rad.is_some();
    if fixed {
        return Err(usage("sweep-delta builds its own lossy models; use --q-values and --purcell-values"));
    }
    if common.samples.is_some() {
        return Err(usage("sweep-delta is exact; --samples is not supported"));
    }
    let mut grid: Vec<(f64, f64)> = Vec::new();
    for &q in q_values {
        for &fp in purcell_values {
            grid.push((q, fp));
        }
    }
    if !grid.contains(&OPERATING_POINT) {
        grid.push(OPERATING_POINT);
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    grid.dedup();

    let mut params = Vec::with_capacity(grid.len());
    for &(q, fp) in &grid {
        params.push(ContrastParams::new(q, fp).map_err(|e| usage(e.to_string()))?);
    }
    let rows: Vec<anyhow::Result<Vec<Cell>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = params
            .iter()
            .map(|cp| {
                scope.spawn(move || -> anyhow::Result<Vec<Cell>> {
                    let (fid, succ) = cnot_figures(&InteractionModel::from_contrast(cp))?;
                    Ok(vec![
                        cp.q_ratio_sq().into(),
                        cp.purcell().into(),
                        transmission_contrast(cp).into(),
                        fid.into(),
                        succ.into(),
                        ((cp.q_ratio_sq(), cp.purcell()) == OPERATING_POINT).into(),
                    ])
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut report = Report::new(
        "sweep-delta",
        ["q_ratio_sq", "purcell", "delta", "cnot_fidelity", "success_probability", "operating_point"],
        json!({"mode": "lossy-sweep"}),
        common.seed,
    );
    for row in rows {
        report.push(row?);
    }
    Ok(report)
}

fn register_column(key: (RegisterKind, usize)) -> String {
    match key.0 {
        RegisterKind::Polarization => format!("pol{}", key.1),
        RegisterKind::Path => format!("port{}", key.1),
        RegisterKind::Spin => "spin".into(),
        RegisterKind::LossFlag => format!("loss{}", key.1),
    }
}

/// Parses, compiles and runs a circuit file, then reports the outcome
/// distribution of its measurement plan: one column per measured register,
/// then probability (and samples, empirical_probability when sampling).
pub fn run_circuit(cfg: &RunConfig, path: &Path) -> anyhow::Result<Report> {
    let src = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let circuit = circuitdsl::load::<f64>(&src).with_context(|| path.display().to_string())?;
    let circuit = if cfg.model.is_ideal() { circuit } else { circuit.with_model(cfg.model) };
    let state = circuit.run()?;
    let dist = circuit.measure(&state)?.pruned(1e-12);

    let mut columns: Vec<String> = circuit.measurement_plan().iter().map(|(k, _)| register_column(*k)).collect();
    columns.push("probability".into());
    if cfg.sampling.is_some() {
        columns.extend(["samples".into(), "empirical_probability".into()]);
    }
    let mut report = Report::new("run", columns, cfg.model_meta.clone(), cfg.seed);
    let counts = cfg.sampling.as_ref().map(|s| empirical(&dist, s, 0));
    for (k, (outcome, p)) in dist.iter().enumerate() {
        let mut row: Vec<Cell> = outcome.iter().map(|s| s.as_str().into()).collect();
        row.push(p.into());
        if let (Some(c), Some(s)) = (&counts, &cfg.sampling) {
            let n = c[k].1;
            row.extend([n.into(), (n as f64 / s.samples as f64).into()]);
        }
        report.push(row);
    }
    Ok(report)
}
