//! Entanglement period and per-period maxima of sampled measures.
//!
//! Two detectors are available. `Direct` treats every refined local minimum
//! below the tolerance as a zero instant; it suits single-frequency signals.
//! `Envelope` first reduces the minima of the fast oscillation to their lower
//! envelope and looks for the envelope's dips; it suits multi-frequency
//! signals whose fast minima only approach zero where the slow beat allows.

use serde::{Deserialize, Serialize};

use crate::dynamics::TrajectorySeries;
use crate::entanglement::Measure;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Zero-instant classification threshold used when none is given.
pub const DEFAULT_ZERO_TOL: f64 = 0.01;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionMode {
    /// `Direct` for at most two populated levels, `Envelope` otherwise.
    #[default]
    Auto,
    Direct,
    Envelope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate<T> {
    /// Spacing of the first two zero instants.
    pub t_ent: T,
    /// Refined zero instants after the first sample, ascending.
    pub zero_instants: Vec<T>,
    /// Time resolution of the refinement.
    pub method_tolerance: T,
    pub mode: DetectionMode,
    /// Set when the measure never leaves the zero band; `t_ent` is then `dt`.
    pub degenerate: bool,
}

/// Detects the entanglement period with automatic mode selection.
///
/// The measure must already be computed on the series.
pub fn detect_entanglement_period<T: Real>(
    series: &TrajectorySeries<T>,
    measure: Measure,
    zero_tol: T,
) -> Result<PeriodEstimate<T>> {
    detect_entanglement_period_with(series, measure, zero_tol, DetectionMode::Auto)
}

pub fn detect_entanglement_period_with<T: Real>(
    series: &TrajectorySeries<T>,
    measure: Measure,
    zero_tol: T,
    mode: DetectionMode,
) -> Result<PeriodEstimate<T>> {
    if !(zero_tol > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "zero_tol must be positive, got {zero_tol}"
        )));
    }
    let values = series
        .measure(measure)
        .ok_or_else(|| Error::MeasureUnavailable(measure.name().into()))?;
    if values.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let times = &series.times()[..values.len()];
    let dt = series.dt();

    if values.iter().all(|&v| v < zero_tol) {
        return Ok(PeriodEstimate {
            t_ent: dt,
            zero_instants: times.to_vec(),
            method_tolerance: dt,
            mode,
            degenerate: true,
        });
    }

    let levels = series.populated_levels();
    let mode = match mode {
        DetectionMode::Auto if levels.len() <= 2 => DetectionMode::Direct,
        DetectionMode::Auto => DetectionMode::Envelope,
        m => m,
    };
    let minima = refined_minima(times, values);
    let (zeros, tolerance) = match mode {
        DetectionMode::Envelope => {
            let period = fast_period(levels).ok_or_else(|| {
                Error::InvalidParameter("envelope detection needs at least two populated levels".into())
            })?;
            (envelope_zeros(&minima, period, zero_tol), period)
        }
        _ => (minima.iter().filter(|m| m.1 < zero_tol).map(|m| m.0).collect(), dt),
    };
    let zeros: Vec<T> = zeros.into_iter().filter(|&t| t > dt).collect();

    if zeros.len() < 2 {
        let observed_min = minima
            .iter()
            .filter(|m| m.0 > dt)
            .map(|m| m.1)
            .fold(T::infinity(), T::min);
        let observed_min = if observed_min.is_finite() {
            observed_min
        } else {
            values.iter().skip(2).copied().fold(T::infinity(), T::min)
        };
        return Err(Error::PeriodNotFound {
            zeros: zeros.len(),
            observed_min: observed_min.to_f64_lossy(),
        });
    }
    Ok(PeriodEstimate {
        t_ent: zeros[1] - zeros[0],
        zero_instants: zeros,
        method_tolerance: tolerance,
        mode,
        degenerate: false,
    })
}

/// Mean spacing of adjacent populated levels, as a period.
fn fast_period<T: Real>(levels: &[T]) -> Option<T> {
    if levels.len() < 2 {
        return None;
    }
    let mut sorted = levels.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
    let span = sorted[sorted.len() - 1] - sorted[0];
    let mean_gap = span / T::lit((sorted.len() - 1) as f64);
    (mean_gap > T::zero()).then(|| T::TAU() / mean_gap)
}

/// Local minima refined by a parabola through the squared values.
///
/// Squaring keeps a `|sin|`-type cusp smooth. Flat runs report their centre.
fn refined_minima<T: Real>(times: &[T], values: &[T]) -> Vec<(T, T)> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if !(values[i] < values[i - 1]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        if j + 1 < n && values[j + 1] > values[i] {
            if j == i {
                out.push(parabola_min(times, values, i));
            } else {
                out.push(((times[i] + times[j]) / T::lit(2.0), values[i]));
            }
        }
        i = j + 1;
    }
    out
}

fn parabola_min<T: Real>(times: &[T], values: &[T], i: usize) -> (T, T) {
    if i >= 2 && i + 2 < values.len() {
        if let Some(m) = quartic_min(times, values, i) {
            return m;
        }
    }
    let sq = |k: usize| values[k] * values[k];
    let (y0, y1, y2) = (sq(i - 1), sq(i), sq(i + 1));
    let den = y0 - T::lit(2.0) * y1 + y2;
    if !(den > T::zero()) {
        return (times[i], values[i]);
    }
    let half = T::lit(0.5);
    let off = (half * (y0 - y2) / den).max(-half).min(half);
    let dt = times[i + 1] - times[i];
    let v = (y1 - T::lit(0.25) * (y0 - y2) * off).max(T::zero()).sqrt();
    (times[i] + off * dt, v)
}

/// Minimum of the quartic through five squared samples centred on `i`.
///
/// The three-point parabola misses the quartic term of a Rabi dip by about
/// `(omega dt)^4`, enough to lift a shallow zero above the tolerance.
fn quartic_min<T: Real>(times: &[T], values: &[T], i: usize) -> Option<(T, T)> {
    let y: Vec<T> = (i - 2..=i + 2).map(|k| values[k] * values[k]).collect();
    let c = |x: f64| T::lit(x);
    let d1 = (y[0] - c(8.0) * y[1] + c(8.0) * y[3] - y[4]) / c(12.0);
    let d2 = (-y[0] + c(16.0) * y[1] - c(30.0) * y[2] + c(16.0) * y[3] - y[4]) / c(12.0);
    let d3 = (-y[0] + c(2.0) * y[1] - c(2.0) * y[3] + y[4]) / c(2.0);
    let d4 = y[0] - c(4.0) * y[1] + c(6.0) * y[2] - c(4.0) * y[3] + y[4];
    if !(d2 > T::zero()) {
        return None;
    }
    let poly = |u: T| y[2] + u * (d1 + u * (d2 / c(2.0) + u * (d3 / c(6.0) + u * d4 / c(24.0))));
    let slope = |u: T| d1 + u * (d2 + u * (d3 / c(2.0) + u * d4 / c(6.0)));
    let curve = |u: T| d2 + u * (d3 + u * d4 / c(2.0));
    let half = c(0.5);
    let mut u = (-d1 / d2).max(-half).min(half);
    for _ in 0..8 {
        let k = curve(u);
        if !(k > T::zero()) {
            return None;
        }
        u = (u - slope(u) / k).max(-half).min(half);
    }
    let dt = times[i + 1] - times[i];
    Some((times[i] + u * dt, poly(u).min(y[2]).max(T::zero()).sqrt()))
}

/// Zero instants from the lower envelope of the fast minima.
fn envelope_zeros<T: Real>(minima: &[(T, T)], period: T, zero_tol: T) -> Vec<T> {
    let reach = T::lit(0.75) * period;
    let env: Vec<(T, T)> = minima
        .iter()
        .enumerate()
        .filter(|&(j, &(t, v))| {
            let lo = j.saturating_sub(8);
            let hi = (j + 9).min(minima.len());
            !(lo..hi).any(|i| i != j && (minima[i].0 - t).abs() < reach && minima[i].1 < v)
        })
        .map(|(_, &m)| m)
        .collect();

    let mut zeros = Vec::new();
    for k in 1..env.len().saturating_sub(1) {
        if !(env[k].1 <= env[k - 1].1 && env[k].1 <= env[k + 1].1) {
            continue;
        }
        let (t, v) = if k >= 2 && k + 2 < env.len() {
            vertex(&env[k - 2..k + 3]).unwrap_or(env[k])
        } else {
            env[k]
        };
        if v < zero_tol {
            zeros.push(t);
        }
    }
    zeros
}

/// Symmetric V through the bottom point and its lower neighbour.
///
/// The slope is the steepest of the secants that do not straddle the vertex.
fn vertex<T: Real>(p: &[(T, T)]) -> Option<(T, T)> {
    let secant = |a: usize, b: usize| (p[a].1 - p[b].1) / (p[b].0 - p[a].0).abs();
    let (s, a, b) = if p[1].1 < p[3].1 {
        (secant(0, 1).max(secant(4, 3)).max(secant(3, 2)), 1, 2)
    } else {
        (secant(1, 2).max(secant(4, 3)).max(secant(0, 1)), 2, 3)
    };
    if !(s > T::zero()) {
        return None;
    }
    let (ta, ya) = p[a];
    let (tb, yb) = p[b];
    let tx = (ya - yb + s * (ta + tb)) / (T::lit(2.0) * s);
    if !(ta <= tx && tx <= tb) {
        return None;
    }
    Some((tx, (ya - s * (tx - ta)).max(T::zero())))
}

/// Maximum of a measure over `[0, t_ent]`, refined by a parabola at the
/// discrete argmax when it is interior to the samples and capped at the
/// measure's upper bound.
pub fn max_over_period<T: Real>(
    series: &TrajectorySeries<T>,
    measure: Measure,
    period: &PeriodEstimate<T>,
) -> Result<T> {
    let values = series
        .measure(measure)
        .ok_or_else(|| Error::MeasureUnavailable(measure.name().into()))?;
    let count = window_len(series, period.t_ent);
    if count == 0 {
        return Err(Error::EmptyWindow);
    }
    if values.len() < count.min(series.len()) {
        return Err(Error::MeasureUnavailable(format!(
            "{} computed on {} of {} window samples",
            measure.name(),
            values.len(),
            count
        )));
    }
    let window = &values[..count.min(values.len())];
    let (k, &best) = window
        .iter()
        .enumerate()
        .fold((0, &window[0]), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    if k == 0 || k + 1 >= values.len() {
        return Ok(best);
    }
    let (y0, y1, y2) = (values[k - 1], values[k], values[k + 1]);
    let den = y0 - T::lit(2.0) * y1 + y2;
    if !(den < T::zero()) {
        return Ok(best);
    }
    let half = T::lit(0.5);
    let off = (half * (y0 - y2) / den).max(-half).min(half);
    // The parabola can overshoot a sharp peak slightly; never past what the
    // measure can reach.
    let refined = (y1 - T::lit(0.25) * (y0 - y2) * off).min(measure.upper_bound());
    Ok(refined.max(best))
}

/// Number of samples with `t <= t_end`.
pub fn window_len<T: Real>(series: &TrajectorySeries<T>, t_end: T) -> usize {
    series.times().partition_point(|&t| t <= t_end)
}
