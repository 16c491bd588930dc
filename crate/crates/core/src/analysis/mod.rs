//! Observables extracted from trajectories: periods, maxima, sweeps, scaling
//! and spectra.

mod period;
mod scaling;
mod spectrum;
mod sweep;

pub use period::{
    detect_entanglement_period, detect_entanglement_period_with, max_over_period, window_len, DetectionMode,
    PeriodEstimate, DEFAULT_ZERO_TOL,
};
pub use scaling::{scaling_product, ScalingReport, ScalingRow};
pub use spectrum::{spectrum_report, SpectrumReport};
pub use sweep::{
    evaluate_point, horizon, linear_grid, locate_peak, run_point, sweep, Observable, PeakEstimate, PointRun,
    PointStatus, SweepConfig, SweepPoint, SweepResult,
};
