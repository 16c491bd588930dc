//! The three subcommands. Internally `T = 1`; written times are divided by
//! `t_coupling` and written energies multiplied by it.

use aqd_core::analysis::{
    detect_entanglement_period, horizon, linear_grid, max_over_period, scaling_product, spectrum_report, sweep,
    SweepConfig,
};
use aqd_core::model::build_hamiltonian;
use aqd_core::{Propagator, PureState, SystemParams};
use serde_json::{json, Map, Value};

use crate::config::{Command, RunConfig};
use crate::output::{emit, Cell, Table};
use crate::CliError;

/// Run the selected subcommand. Data are written before a failed period
/// search or sweep point is reported as an error.
pub fn run(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate(command)?;
    match command {
        Command::Evolve => evolve(cfg),
        Command::Sweep => run_sweep(cfg),
        Command::Spectrum => spectrum(cfg),
    }
}

fn sweep_config(cfg: &RunConfig) -> SweepConfig {
    SweepConfig {
        system: cfg.system,
        trace_out: cfg.trace_out,
        zero_tol: cfg.zero_tol,
        dt: cfg.dt,
        t_max: cfg.t_max,
        ..SweepConfig::default()
    }
}

fn params_comment(cfg: &RunConfig, n: Option<u32>) -> String {
    let n = n.map(|n| format!(" n={n}")).unwrap_or_default();
    format!(
        "system={}{n} U/T={} E/T={} T={}",
        cfg.system, cfg.u_over_t, cfg.e_over_t, cfg.t_coupling
    )
}

pub fn evolve(cfg: &RunConfig) -> Result<(), CliError> {
    let defaults = sweep_config(cfg);
    let params = SystemParams::<f64>::from_ratios(cfg.n, cfg.u_over_t, cfg.e_over_t)?;
    let h = build_hamiltonian(cfg.system, &params)?;
    let prop = Propagator::new(&h)?;
    let psi0 = PureState::basis(cfg.system.dim(), 0);
    let dt = cfg.dt.unwrap_or_else(|| prop.default_dt());
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => horizon(&prop.populated_levels(&psi0)?, defaults.min_horizon),
    };
    if t_max / dt > defaults.max_samples as f64 {
        return Err(CliError::Config(format!(
            "t_max/dt = {:.0} samples exceeds the limit of {}",
            t_max / dt,
            defaults.max_samples
        )));
    }

    let mut series = prop.sample(&psi0, t_max, dt)?;
    let measures = cfg.effective_measures();
    for &m in &measures {
        series.compute(m)?;
    }
    let primary = cfg.primary_measure();
    series.compute(primary)?;
    let period = detect_entanglement_period(&series, primary, cfg.zero_tol);

    let tc = cfg.t_coupling;
    let dim = cfg.system.dim();
    let mut columns = vec!["t".to_string()];
    for k in 1..=dim {
        columns.push(format!("re_c{k}"));
        columns.push(format!("im_c{k}"));
    }
    columns.extend(measures.iter().map(|m| m.name().to_string()));
    let mut table = Table {
        columns,
        ..Table::default()
    };
    table.comments = vec![
        params_comment(cfg, Some(cfg.n)),
        "t: time in units of 1/T; amplitudes and measures are dimensionless".into(),
    ];
    let columns: Vec<&[f64]> = measures.iter().map(|&m| series.measure(m).expect("computed")).collect();
    for (k, (&t, amps)) in series.times().iter().zip(series.amplitudes()).enumerate() {
        let mut row = Vec::with_capacity(table.columns.len());
        row.push(Cell::Num(t / tc));
        for a in amps {
            row.push(Cell::Num(a.re));
            row.push(Cell::Num(a.im));
        }
        row.extend(columns.iter().map(|c| Cell::Num(c[k])));
        table.push(row);
    }

    let mut maxima = Map::new();
    if let Ok(p) = &period {
        for &m in &measures {
            maxima.insert(m.name().into(), json!(max_over_period(&series, m, p)?));
        }
    }
    let summary = json!({
        "samples": series.len(),
        "dt": dt / tc,
        "t_max": t_max / tc,
        "primary_measure": primary.name(),
        "status": if period.is_ok() { "ok" } else { "period_not_found" },
        "t_ent": period.as_ref().ok().map(|p| p.t_ent / tc),
        "degenerate": period.as_ref().ok().map(|p| p.degenerate),
        "max_over_period": maxima,
    });
    emit(cfg, "evolve", &table, &summary)?;
    period.map(|_| ()).map_err(CliError::from)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let sc = sweep_config(cfg);
    let base = SystemParams::<f64>::from_ratios(1, 0.0, cfg.e_over_t)?;
    let grid = linear_grid(cfg.u_min, cfg.u_max, cfg.u_steps)?;
    let result = sweep(&base, &grid, &cfg.n_list, &sc)?;

    let tc = cfg.t_coupling;
    let mut table = Table::new(&[
        "n",
        "u_over_t",
        "t_ent",
        "c_max",
        "e_max",
        "n_max",
        "t_ent_times_u",
        "status",
    ]);
    table.comments = vec![
        format!(
            "system={} E/T={} T={} trace_out={}",
            cfg.system, cfg.e_over_t, tc, cfg.trace_out
        ),
        "t_ent: time in units of 1/T; u_over_t and t_ent_times_u are dimensionless".into(),
    ];
    for p in &result.points {
        table.push(vec![
            Cell::Int(p.n.into()),
            Cell::Num(p.u_over_t),
            p.t_ent.map(|t| t / tc).into(),
            p.c_max.into(),
            p.e_max.into(),
            p.n_max.into(),
            p.t_ent_times_u().into(),
            Cell::Text(p.status.label().into()),
        ]);
    }

    let scaling = scaling_product(&result);
    let failed: Vec<Value> = result
        .points
        .iter()
        .filter(|p| !p.status.is_ok())
        .map(|p| json!({ "n": p.n, "u_over_t": p.u_over_t, "status": p.status }))
        .collect();
    let spread: Map<String, Value> = scaling.spread.iter().map(|(n, s)| (n.to_string(), json!(s))).collect();
    let summary = json!({
        "points": result.points.len(),
        "failed": failed,
        "t_ent_times_u_spread": spread,
    });
    emit(cfg, "sweep", &table, &summary)?;
    if result.all_ok() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "{} of {} sweep points did not complete",
            failed.len(),
            result.points.len()
        )))
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let params = SystemParams::<f64>::from_ratios(cfg.n, cfg.u_over_t, cfg.e_over_t)?;
    let h = build_hamiltonian(cfg.system, &params)?;
    let report = spectrum_report(&h)?;
    let tc = cfg.t_coupling;

    let mut columns = vec!["n".to_string(), "u_over_t".into(), "e_over_t".into()];
    columns.extend((1..=report.eigenvalues.len()).map(|k| format!("lambda_{k}")));
    columns.extend(
        ["offset", "singlet_index", "singlet_gap", "ground_to_partner", "spread"]
            .iter()
            .map(|s| s.to_string()),
    );
    let mut table = Table {
        columns,
        ..Table::default()
    };
    table.comments = vec![
        params_comment(cfg, Some(cfg.n)),
        "energies in the units of T, measured from offset; singlet_index is 0-based".into(),
    ];
    let mut row = vec![
        Cell::Int(cfg.n.into()),
        Cell::Num(cfg.u_over_t),
        Cell::Num(cfg.e_over_t),
    ];
    row.extend(report.eigenvalues.iter().map(|l| Cell::Num(l * tc)));
    row.push(Cell::Num(report.offset * tc));
    row.push(report.singlet_index.map_or(Cell::Empty, |k| Cell::Int(k as u64)));
    row.push(report.singlet_gap.map(|g| g * tc).into());
    row.push(report.ground_to_partner.map(|g| g * tc).into());
    row.push(Cell::Num(report.spread * tc));
    table.push(row);

    let summary = json!({
        "dim": report.eigenvalues.len(),
        "singlet_residual": report.singlet_residual,
        "partner_index": report.partner_index,
    });
    emit(cfg, "spectrum", &table, &summary)
}
