//! Exact diagonalization of one or two atomic quantum dots exchanging
//! particles with a bosonic pool, with the entanglement measures used to
//! characterise the resulting dynamics.
//!
//! The numeric code is generic over [`Real`] (`f32` or `f64`). The aliases at
//! the bottom of this file fix the precision for common use.
//!
//! ```
//! use aqd_core::{build_bipartite_hamiltonian, Measure, PureState, SystemParams64};
//! use aqd_core::{detect_entanglement_period, sample_trajectory};
//!
//! let params = SystemParams64::from_ratios(10, 0.0, 0.01).unwrap();
//! let h = build_bipartite_hamiltonian(&params).unwrap();
//! let dt = std::f64::consts::PI / (40.0 * 3.2);
//! let mut series = sample_trajectory(&h, &PureState::basis(2, 0), 5.0, dt).unwrap();
//! series.compute(Measure::Concurrence).unwrap();
//! let period = detect_entanglement_period(&series, Measure::Concurrence, 0.01).unwrap();
//! assert!((period.t_ent - 0.4967).abs() < 1e-3);
//! ```

// `!(x > 0)` is used on purpose throughout so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scalar;

pub use analysis::{
    detect_entanglement_period, locate_peak, max_over_period, scaling_product, spectrum_report, sweep, DetectionMode,
    Observable, PeriodEstimate, PointStatus, SpectrumReport, SweepConfig, SweepPoint, SweepResult,
};
pub use dynamics::{evolve, sample_trajectory, Propagator, PureState, TrajectorySeries};
pub use entanglement::{DensityMatrix, Measure, MeasureRecord, TraceOut};
pub use error::{Error, Result};
pub use linalg::{eigendecompose_hermitian, EigenDecomposition, HermitianMatrix, TensorSplit};
pub use model::{build_bipartite_hamiltonian, build_tripartite_hamiltonian, rabi_parameters, System, SystemParams};
pub use scalar::Real;

pub type SystemParams64 = SystemParams<f64>;
pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type EigenDecomposition64 = EigenDecomposition<f64>;
pub type PureState64 = PureState<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type TrajectorySeries64 = TrajectorySeries<f64>;
pub type SweepResult64 = SweepResult<f64>;

pub type SystemParams32 = SystemParams<f32>;
pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type EigenDecomposition32 = EigenDecomposition<f32>;
pub type PureState32 = PureState<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type TrajectorySeries32 = TrajectorySeries<f32>;
pub type SweepResult32 = SweepResult<f32>;
