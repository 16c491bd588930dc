//! Parameter sweeps over `U/T` and `n`.
//!
//! Everything here works in coupling units: the Hamiltonian is built with
//! `T = 1`, energies are ratios to `T` and times are in units of `1/T`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::period::{
    detect_entanglement_period_with, max_over_period, window_len, DetectionMode, PeriodEstimate, DEFAULT_ZERO_TOL,
};
use crate::dynamics::{Propagator, PureState, TrajectorySeries};
use crate::entanglement::{Measure, TraceOut};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, System, SystemParams};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub system: System,
    /// Which reduction feeds the `e_max` / `n_max` columns.
    pub trace_out: TraceOut,
    pub zero_tol: f64,
    /// Sampling step; defaults to `pi / (40 max|lambda|)` per point.
    pub dt: Option<f64>,
    /// Fixed horizon; defaults to the per-point policy of [`horizon`].
    pub t_max: Option<f64>,
    /// Lower bound of the horizon policy.
    pub min_horizon: f64,
    /// Points whose grid would exceed this many samples fail instead of running.
    pub max_samples: usize,
    pub detection: DetectionMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            system: System::Tripartite,
            trace_out: TraceOut::None,
            zero_tol: DEFAULT_ZERO_TOL,
            dt: None,
            t_max: None,
            min_horizon: 50.0,
            max_samples: 2_000_000,
            detection: DetectionMode::Auto,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol > 0.0 && self.zero_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "zero_tol must be positive, got {}",
                self.zero_tol
            )));
        }
        if self.system == System::Bipartite && self.trace_out != TraceOut::None {
            return Err(Error::InvalidParameter(
                "trace-out applies to the tripartite system only".into(),
            ));
        }
        for (name, v) in [("dt", self.dt), ("t_max", self.t_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if !(self.min_horizon > 0.0 && self.min_horizon.is_finite()) {
            return Err(Error::InvalidParameter("min_horizon must be positive".into()));
        }
        Ok(())
    }

    /// Measure whose zeros define the period and whose maximum is `c_max`.
    pub fn primary_measure(&self) -> Measure {
        match self.system {
            System::Bipartite => Measure::Concurrence,
            System::Tripartite => Measure::ConcurrenceTripartite,
        }
    }

    /// Measures behind the `e_max` and `n_max` columns.
    pub fn reduced_measures(&self) -> Option<(Measure, Measure)> {
        match self.trace_out {
            TraceOut::None => None,
            TraceOut::Pool => Some((Measure::EofTwoQubit, Measure::NegativityTwoQubit)),
            TraceOut::Qubit => Some((Measure::EofQubitQutrit, Measure::NegativityQubitQutrit)),
        }
    }
}

/// Outcome of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    PeriodNotFound { zeros: usize, observed_min: f64 },
    Failed { message: String },
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }

    /// Short tag for tabular output.
    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::PeriodNotFound { .. } => "period_not_found",
            PointStatus::Failed { .. } => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub n: u32,
    pub u_over_t: T,
    pub t_ent: Option<T>,
    pub c_max: Option<T>,
    pub e_max: Option<T>,
    pub n_max: Option<T>,
    /// Horizon and step actually used.
    pub t_max: T,
    pub dt: T,
    pub status: PointStatus,
}

impl<T: Real> SweepPoint<T> {
    /// `t_ent * U/T`, when the period is known.
    pub fn t_ent_times_u(&self) -> Option<T> {
        self.t_ent.map(|t| t * self.u_over_t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<T> {
    pub config: SweepConfig,
    /// `E/T` shared by all points.
    pub e_over_t: T,
    /// Ordered by `(n, U/T)`.
    pub points: Vec<SweepPoint<T>>,
}

impl<T: Real> SweepResult<T> {
    pub fn all_ok(&self) -> bool {
        self.points.iter().all(|p| p.status.is_ok())
    }

    pub fn for_n(&self, n: u32) -> impl Iterator<Item = &SweepPoint<T>> {
        self.points.iter().filter(move |p| p.n == n)
    }
}

/// Per-point horizon: `max(min_horizon, 5 pi / Omega_min)`.
///
/// `Omega_min` is the smallest nonzero frequency among the Bohr frequencies
/// of the populated levels and the beat frequencies between them.
pub fn horizon<T: Real>(levels: &[T], min_horizon: T) -> T {
    let scale = levels.iter().fold(T::one(), |a, l| a.max(l.abs()));
    let floor = T::tol(1e-9) * scale;
    let mut bohr = Vec::new();
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i + 1..] {
            let g = (*a - *b).abs();
            if g > floor {
                bohr.push(g);
            }
        }
    }
    let mut slowest = bohr.iter().copied().fold(T::infinity(), T::min);
    for (i, a) in bohr.iter().enumerate() {
        for b in &bohr[i + 1..] {
            let d = (*a - *b).abs();
            if d > floor {
                slowest = slowest.min(d);
            }
        }
    }
    if slowest.is_finite() {
        min_horizon.max(T::lit(5.0) * T::PI() / slowest)
    } else {
        min_horizon
    }
}

/// Everything produced for one point, including the trajectory.
pub struct PointRun<T> {
    pub point: SweepPoint<T>,
    pub series: Option<TrajectorySeries<T>>,
    pub period: Option<PeriodEstimate<T>>,
}

fn point_params<T: Real>(base: &SystemParams<T>, n: u32, u_over_t: T) -> Result<SystemParams<T>> {
    SystemParams::new(n, u_over_t, T::one(), base.e_b / base.t, base.delta / base.t)
}

/// Runs a single grid point and keeps the sampled series.
pub fn run_point<T: Real>(base: &SystemParams<T>, n: u32, u_over_t: T, config: &SweepConfig) -> PointRun<T> {
    let mut point = SweepPoint {
        n,
        u_over_t,
        t_ent: None,
        c_max: None,
        e_max: None,
        n_max: None,
        t_max: T::zero(),
        dt: T::zero(),
        status: PointStatus::Ok,
    };
    match run_point_inner(base, config, &mut point) {
        Ok((series, period)) => PointRun {
            point,
            series: Some(series),
            period: Some(period),
        },
        Err((err, series)) => {
            point.status = match err {
                Error::PeriodNotFound { zeros, observed_min } => PointStatus::PeriodNotFound { zeros, observed_min },
                other => PointStatus::Failed {
                    message: other.to_string(),
                },
            };
            PointRun {
                point,
                series,
                period: None,
            }
        }
    }
}

type PointError<T> = (Error, Option<TrajectorySeries<T>>);

#[allow(clippy::result_large_err)]
fn run_point_inner<T: Real>(
    base: &SystemParams<T>,
    config: &SweepConfig,
    point: &mut SweepPoint<T>,
) -> std::result::Result<(TrajectorySeries<T>, PeriodEstimate<T>), PointError<T>> {
    let bare = |e: Error| (e, None);
    config.validate().map_err(bare)?;
    let params = point_params(base, point.n, point.u_over_t).map_err(bare)?;
    let h = build_hamiltonian(config.system, &params).map_err(bare)?;
    let prop = Propagator::new(&h).map_err(bare)?;
    let psi0 = PureState::basis(config.system.dim(), 0);
    let dt = config.dt.map(T::lit).unwrap_or_else(|| prop.default_dt());
    let t_max = match config.t_max {
        Some(t) => T::lit(t),
        None => horizon(&prop.populated_levels(&psi0).map_err(bare)?, T::lit(config.min_horizon)),
    };
    point.dt = dt;
    point.t_max = t_max;
    let samples = (t_max / dt).to_f64_lossy();
    if samples > config.max_samples as f64 {
        return Err(bare(Error::InvalidParameter(format!(
            "horizon {t_max} needs {samples:.0} samples, above the limit of {}",
            config.max_samples
        ))));
    }

    let mut series = prop.sample(&psi0, t_max, dt).map_err(bare)?;
    let primary = config.primary_measure();
    let zero_tol = T::lit(config.zero_tol);
    let period = (|| {
        series.compute(primary)?;
        detect_entanglement_period_with(&series, primary, zero_tol, config.detection)
    })();
    let period = match period {
        Ok(p) => p,
        Err(e) => return Err((e, Some(series))),
    };
    let extras = (|| {
        point.t_ent = Some(period.t_ent);
        point.c_max = Some(max_over_period(&series, primary, &period)?);
        if let Some((eof, neg)) = config.reduced_measures() {
            // One extra sample lets the maximum refinement see past the window edge.
            let count = window_len(&series, period.t_ent) + 1;
            series.compute_prefix(eof, count)?;
            series.compute_prefix(neg, count)?;
            point.e_max = Some(max_over_period(&series, eof, &period)?);
            point.n_max = Some(max_over_period(&series, neg, &period)?);
        }
        Ok(())
    })();
    match extras {
        Ok(()) => Ok((series, period)),
        Err(e) => Err((e, Some(series))),
    }
}

/// Evaluates one grid point.
pub fn evaluate_point<T: Real>(base: &SystemParams<T>, n: u32, u_over_t: T, config: &SweepConfig) -> SweepPoint<T> {
    run_point(base, n, u_over_t, config).point
}

/// Evaluates every `(n, U/T)` combination in parallel.
///
/// `base` supplies `E_b/T` and `Delta/T`; its `n` and `U` are replaced by the
/// grid values. Per-point failures are recorded in the point status.
pub fn sweep<T: Real>(
    base: &SystemParams<T>,
    u_grid: &[T],
    n_list: &[u32],
    config: &SweepConfig,
) -> Result<SweepResult<T>> {
    config.validate()?;
    base.validate()?;
    if u_grid.is_empty() || n_list.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be nonempty".into()));
    }
    let mut us = u_grid.to_vec();
    us.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    if us.windows(2).any(|w| w[0] == w[1]) || ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("sweep grids must not repeat values".into()));
    }
    if let Some(bad) = us.iter().find(|u| !(u.is_finite() && **u >= T::zero())) {
        return Err(Error::InvalidParameter(format!("U/T must be non-negative, got {bad}")));
    }
    if ns.contains(&0) {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }

    let grid: Vec<(u32, T)> = ns.iter().flat_map(|&n| us.iter().map(move |&u| (n, u))).collect();
    let points = grid
        .par_iter()
        .map(|&(n, u)| evaluate_point(base, n, u, config))
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        e_over_t: base.e() / base.t,
        points,
    })
}

/// Even grid of `steps` values from `lo` to `hi` inclusive.
pub fn linear_grid<T: Real>(lo: T, hi: T, steps: usize) -> Result<Vec<T>> {
    match steps {
        0 => Err(Error::InvalidParameter("grid needs at least one step".into())),
        1 => Ok(vec![lo]),
        _ => {
            if !(hi > lo) {
                return Err(Error::InvalidParameter(format!("empty range [{lo}, {hi}]")));
            }
            let step = (hi - lo) / T::lit((steps - 1) as f64);
            Ok((0..steps)
                .map(|k| {
                    if k + 1 == steps {
                        hi
                    } else {
                        lo + T::lit(k as f64) * step
                    }
                })
                .collect())
        }
    }
}

/// Column of a sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    TEnt,
    CMax,
    EMax,
    NMax,
}

impl Observable {
    pub fn get<T: Real>(self, p: &SweepPoint<T>) -> Option<T> {
        match self {
            Observable::TEnt => p.t_ent,
            Observable::CMax => p.c_max,
            Observable::EMax => p.e_max,
            Observable::NMax => p.n_max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakEstimate<T> {
    pub n: u32,
    pub u_c: T,
    pub value: T,
    /// Coarse-grid argmax the refinement started from.
    pub coarse_u: T,
}

/// Locates the interior maximum of an observable over `U/T` for one `n`.
///
/// Starts from the coarse argmax in `coarse` and refines by golden-section
/// search on the neighbouring bracket down to `tol` in `U/T`.
pub fn locate_peak<T: Real>(
    base: &SystemParams<T>,
    coarse: &SweepResult<T>,
    n: u32,
    observable: Observable,
    tol: T,
) -> Result<PeakEstimate<T>> {
    let row: Vec<&SweepPoint<T>> = coarse.for_n(n).collect();
    let value = |p: &SweepPoint<T>| if p.status.is_ok() { observable.get(p) } else { None };
    let (k, best) = row
        .iter()
        .enumerate()
        .filter_map(|(i, p)| value(p).map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, T)>, (i, v)| match acc {
            Some((_, b)) if b >= v => acc,
            _ => Some((i, v)),
        })
        .ok_or(Error::EmptyWindow)?;
    if k == 0 || k + 1 == row.len() {
        return Err(Error::NoInteriorMaximum);
    }

    let f = |u: T| value(&evaluate_point(base, n, u, &coarse.config)).unwrap_or(T::neg_infinity());
    let (mut a, mut b) = (row[k - 1].u_over_t, row[k + 1].u_over_t);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let (mut best_u, mut best_v) = (row[k].u_over_t, best);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best_v {
                best_u = x;
                best_v = fx;
            }
        }
    }
    Ok(PeakEstimate {
        n,
        u_c: best_u,
        value: best_v,
        coarse_u: row[k].u_over_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParams<f64> {
        SystemParams::from_ratios(10, 0.0, 0.01).unwrap()
    }

    #[test]
    fn horizon_policy() {
        assert_eq!(horizon(&[-1.0f64, 1.0], 50.0), 50.0);
        // Gaps 1 and 1.01 beat at 0.01.
        let h = horizon(&[0.0f64, 1.0, 2.01], 50.0);
        assert!((h - 5.0 * std::f64::consts::PI / 0.01).abs() < 1e-6);
        assert_eq!(horizon::<f64>(&[], 50.0), 50.0);
    }

    #[test]
    fn linear_grid_endpoints() {
        let g = linear_grid(0.05f64, 1.0, 20).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[19], 1.0);
        assert_eq!(linear_grid(0.3f64, 0.3, 1).unwrap(), vec![0.3]);
        assert!(linear_grid(1.0f64, 0.0, 3).is_err());
        assert!(linear_grid(0.0f64, 1.0, 0).is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = SweepConfig {
            system: System::Bipartite,
            trace_out: TraceOut::Pool,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(sweep(&base(), &[], &[10], &SweepConfig::default()).is_err());
        assert!(sweep(&base(), &[0.1], &[], &SweepConfig::default()).is_err());
        assert!(sweep(&base(), &[0.1, 0.1], &[10], &SweepConfig::default()).is_err());
        assert!(sweep(&base(), &[-0.1], &[10], &SweepConfig::default()).is_err());
    }

    #[test]
    fn single_point_matches_direct_run() {
        let cfg = SweepConfig {
            system: System::Bipartite,
            ..Default::default()
        };
        let res = sweep(&base(), &[0.06], &[10], &cfg).unwrap();
        assert_eq!(res.points.len(), 1);
        assert_eq!(res.points[0], evaluate_point(&base(), 10, 0.06, &cfg));
        let expect = std::f64::consts::PI / (0.275f64.powi(2) + 10.0).sqrt();
        assert!((res.points[0].t_ent.unwrap() / expect - 1.0).abs() < 1e-3);
    }

    #[test]
    fn failures_stay_in_place() {
        let cfg = SweepConfig {
            system: System::Bipartite,
            t_max: Some(0.2),
            ..Default::default()
        };
        let res = sweep(&base(), &[0.0, 0.5], &[10], &cfg).unwrap();
        assert_eq!(res.points.len(), 2);
        assert!(res.points.iter().all(|p| !p.status.is_ok()));
        assert_eq!(res.points[0].status.label(), "period_not_found");
    }

    #[test]
    fn sample_cap_is_enforced() {
        let cfg = SweepConfig {
            system: System::Bipartite,
            max_samples: 10,
            ..Default::default()
        };
        let p = evaluate_point(&base(), 10, 0.0, &cfg);
        assert_eq!(p.status.label(), "error");
    }
}
