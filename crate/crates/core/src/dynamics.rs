//! Spectral propagation of pure states and uniform-grid trajectory sampling.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::entanglement::Measure;
use crate::error::{Error, Result};
use crate::linalg::{eigendecompose_hermitian, inner, norm_sqr, EigenDecomposition, HermitianMatrix};
use crate::scalar::Real;

/// Normalized amplitude vector over a conserved-N basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Rejects vectors whose squared norm is off by more than `1e-12`.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let ns = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !((ns - T::one()).abs() <= T::tol(1e-12)) {
            return Err(Error::NotNormalized {
                norm_sqr: ns.to_f64_lossy(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on a zero or non-finite vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm.is_finite() && norm > T::zero()) {
            return Err(Error::NotNormalized {
                norm_sqr: (norm * norm).to_f64_lossy(),
            });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Basis vector `k` of a `dim`-dimensional space.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    pub fn with_global_phase(&self, phi: T) -> Self {
        let ph = Complex::new(phi.cos(), phi.sin());
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * ph).collect(),
        }
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }
}

/// `exp(-i H t)` evaluated through a cached eigendecomposition.
///
/// The Hamiltonian offset is ignored: it contributes only a global phase.
#[derive(Clone, Debug)]
pub struct Propagator<T> {
    eig: EigenDecomposition<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &HermitianMatrix<T>) -> Result<Self> {
        Ok(Self {
            eig: eigendecompose_hermitian(h)?,
        })
    }

    pub fn eigen(&self) -> &EigenDecomposition<T> {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    /// Overlaps `<v_k|psi>` of a state with the eigenvectors.
    pub fn project(&self, psi: &PureState<T>) -> Result<Vec<Complex<T>>> {
        self.check_dim(psi)?;
        Ok((0..self.dim())
            .map(|k| inner(&self.eig.vector(k), psi.amplitudes()))
            .collect())
    }

    pub fn evolve(&self, psi: &PureState<T>, t: T) -> Result<PureState<T>> {
        let coeffs = self.project(psi)?;
        Ok(PureState::from_raw(self.evolve_projected(&coeffs, t)))
    }

    fn evolve_projected(&self, coeffs: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        let n = self.dim();
        let v = self.eig.eigenvectors();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, (&lambda, &ck)) in self.eig.eigenvalues().iter().zip(coeffs).enumerate() {
            let phase = -lambda * t;
            let w = ck * Complex::new(phase.cos(), phase.sin());
            for (i, o) in out.iter_mut().enumerate() {
                *o += v[(i, k)] * w;
            }
        }
        out
    }

    fn check_dim(&self, psi: &PureState<T>) -> Result<()> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        let ns = psi.norm_sqr();
        if !((ns - T::one()).abs() <= T::tol(1e-12)) {
            return Err(Error::NotNormalized {
                norm_sqr: ns.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Eigenvalues whose eigenvectors carry more than `1e-12` of `psi`.
    pub fn populated_levels(&self, psi: &PureState<T>) -> Result<Vec<T>> {
        Ok(self.levels_of(&self.project(psi)?))
    }

    fn levels_of(&self, coeffs: &[Complex<T>]) -> Vec<T> {
        let weight_floor = T::tol(1e-12);
        self.eig
            .eigenvalues()
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| c.norm_sqr() > weight_floor)
            .map(|(&l, _)| l)
            .collect()
    }

    /// Largest step accepted by [`Propagator::sample`]: `pi / (20 max|lambda|)`.
    pub fn max_dt(&self) -> T {
        let r = self.eig.spectral_radius();
        if r == T::zero() {
            T::infinity()
        } else {
            T::PI() / (T::lit(20.0) * r)
        }
    }

    /// `pi / (40 max|lambda|)`, or 0.01 for the zero operator.
    pub fn default_dt(&self) -> T {
        let r = self.eig.spectral_radius();
        if r == T::zero() {
            T::lit(0.01)
        } else {
            T::PI() / (T::lit(40.0) * r)
        }
    }

    /// Samples `psi(k dt)` for `k dt <= t_max`, each from `psi0` directly.
    pub fn sample(&self, psi0: &PureState<T>, t_max: T, dt: T) -> Result<TrajectorySeries<T>> {
        if !(dt.is_finite() && dt > T::zero()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if !(t_max.is_finite() && t_max >= dt) {
            return Err(Error::InvalidParameter(format!(
                "t_max must be at least dt ({dt}), got {t_max}"
            )));
        }
        let bound = self.max_dt();
        if dt > bound {
            return Err(Error::StepTooCoarse {
                dt: dt.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
            });
        }
        let coeffs = self.project(psi0)?;
        // Guard against t_max/dt landing a hair below an integer.
        let steps = (t_max / dt + T::tol(1e-9))
            .floor()
            .to_usize()
            .ok_or_else(|| Error::InvalidParameter("too many samples requested".into()))?;
        let times: Vec<T> = (0..=steps).map(|k| T::lit(k as f64) * dt).collect();
        let amplitudes = times.iter().map(|&t| self.evolve_projected(&coeffs, t)).collect();

        let levels = self.levels_of(&coeffs);

        Ok(TrajectorySeries {
            times,
            dt,
            amplitudes,
            levels,
            measures: BTreeMap::new(),
        })
    }
}

/// One-shot `exp(-i H t) psi`.
pub fn evolve<T: Real>(h: &HermitianMatrix<T>, psi0: &PureState<T>, t: T) -> Result<PureState<T>> {
    Propagator::new(h)?.evolve(psi0, t)
}

/// Samples a trajectory on `t = 0, dt, 2 dt, ...` up to `t_max`.
///
/// Requires `dt <= pi / (20 max|lambda|)`.
pub fn sample_trajectory<T: Real>(
    h: &HermitianMatrix<T>,
    psi0: &PureState<T>,
    t_max: T,
    dt: T,
) -> Result<TrajectorySeries<T>> {
    Propagator::new(h)?.sample(psi0, t_max, dt)
}

/// Amplitudes on a uniform time grid plus any measures computed from them.
#[derive(Clone, Debug)]
pub struct TrajectorySeries<T> {
    times: Vec<T>,
    dt: T,
    amplitudes: Vec<Vec<Complex<T>>>,
    levels: Vec<T>,
    measures: BTreeMap<Measure, Vec<T>>,
}

impl<T: Real> TrajectorySeries<T> {
    /// Wraps precomputed measure values on a uniform grid starting at 0.
    ///
    /// Used for series that do not come from a propagator (no amplitudes, no
    /// level information).
    pub fn from_values(dt: T, measure: Measure, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let times = (0..values.len()).map(|k| T::lit(k as f64) * dt).collect();
        let mut measures = BTreeMap::new();
        measures.insert(measure, values);
        Ok(Self {
            times,
            dt,
            amplitudes: Vec::new(),
            levels: Vec::new(),
            measures,
        })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Per-sample amplitude vectors; empty for value-only series.
    pub fn amplitudes(&self) -> &[Vec<Complex<T>>] {
        &self.amplitudes
    }

    /// Eigenvalues whose eigenvectors overlap the initial state.
    pub fn populated_levels(&self) -> &[T] {
        &self.levels
    }

    pub fn state(&self, k: usize) -> PureState<T> {
        PureState::from_raw(self.amplitudes[k].clone())
    }

    /// Cached values of a measure, if computed.
    pub fn measure(&self, m: Measure) -> Option<&[T]> {
        self.measures.get(&m).map(Vec::as_slice)
    }

    /// Computes (once) and returns a measure over every sample.
    pub fn compute(&mut self, m: Measure) -> Result<&[T]> {
        self.compute_prefix(m, self.len())?;
        Ok(self.measure(m).expect("just computed"))
    }

    /// Computes a measure over the first `count` samples only, caching the
    /// prefix. Expensive measures on long horizons use this to stay within
    /// the window of interest.
    pub fn compute_prefix(&mut self, m: Measure, count: usize) -> Result<&[T]> {
        let count = count.min(self.len());
        let have = self.measures.get(&m).map_or(0, Vec::len);
        if have < count {
            if self.amplitudes.is_empty() {
                return Err(Error::MeasureUnavailable(m.name().into()));
            }
            let extra = self.amplitudes[have..count]
                .iter()
                .map(|a| m.evaluate(a))
                .collect::<Result<Vec<T>>>()?;
            self.measures.entry(m).or_default().extend(extra);
        }
        Ok(&self.measures[&m][..count])
    }

    /// Names of the measures currently cached, in a stable order.
    pub fn computed_measures(&self) -> Vec<Measure> {
        self.measures.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_bipartite_hamiltonian, build_tripartite_hamiltonian, rabi_parameters, SystemParams};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn normalization_is_checked() {
        assert!(PureState::new(vec![c(1.0, 0.0), c(0.1, 0.0)]).is_err());
        assert!(PureState::<f64>::new(vec![]).is_err());
        let s = PureState::normalized(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(PureState::normalized(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn evolve_checks_dimension() {
        let h = build_bipartite_hamiltonian(&SystemParams::<f64>::from_ratios(3, 0.0, 0.0).unwrap()).unwrap();
        let psi = PureState::basis(4, 0);
        assert!(matches!(evolve(&h, &psi, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn resonant_rabi_solution() {
        let p = SystemParams::<f64>::from_ratios(10, 0.0, 0.0).unwrap();
        let h = build_bipartite_hamiltonian(&p).unwrap();
        let w = 10f64.sqrt();
        let psi0 = PureState::basis(2, 0);
        for &t in &[0.0, 0.1, 0.37, 2.0, 13.5] {
            let a = evolve(&h, &psi0, t).unwrap();
            assert!((a.amplitudes()[0] - c((w * t).cos(), 0.0)).norm() < 1e-12);
            assert!((a.amplitudes()[1] - c(0.0, -(w * t).sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn detuned_rabi_population() {
        let p = SystemParams::<f64>::from_ratios(10, 0.06, 0.01).unwrap();
        let (w, d) = rabi_parameters(&p).unwrap();
        let om = (w * w + d * d).sqrt();
        assert!((om - 3.17421).abs() < 1e-5);
        let h = build_bipartite_hamiltonian(&p).unwrap();
        let psi0 = PureState::basis(2, 0);
        for &t in &[0.2, 0.9, 5.0] {
            let a = evolve(&h, &psi0, t).unwrap();
            let expect = w * w / (om * om) * (om * t).sin().powi(2);
            assert!((a.amplitudes()[1].norm_sqr() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_guards() {
        let h = build_tripartite_hamiltonian(&SystemParams::<f64>::from_ratios(10, 0.2, 0.01).unwrap()).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi0 = PureState::basis(4, 0);
        assert!(matches!(prop.sample(&psi0, 1.0, 0.5), Err(Error::StepTooCoarse { .. })));
        assert!(prop.sample(&psi0, 0.0, 0.01).is_err());
        assert!(prop.sample(&psi0, 1.0, -0.01).is_err());
        let s = prop.sample(&psi0, 1.0, prop.default_dt()).unwrap();
        assert_eq!(s.times()[0], 0.0);
        assert!(*s.times().last().unwrap() <= 1.0);
        assert!(*s.times().last().unwrap() + s.dt() > 1.0);
        assert!(s.amplitudes()[0][0] == c(1.0, 0.0) || (s.amplitudes()[0][0] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn grid_endpoint_is_inclusive() {
        let h = build_bipartite_hamiltonian(&SystemParams::<f64>::from_ratios(1, 0.0, 0.0).unwrap()).unwrap();
        let s = sample_trajectory(&h, &PureState::basis(2, 0), 1.0, 0.1).unwrap();
        assert_eq!(s.len(), 11);
    }

    #[test]
    fn populated_levels_skip_the_singlet() {
        let h = build_tripartite_hamiltonian(&SystemParams::<f64>::from_ratios(10, 0.2, 0.01).unwrap()).unwrap();
        let s = sample_trajectory(&h, &PureState::basis(4, 0), 0.1, 0.01).unwrap();
        assert_eq!(s.populated_levels().len(), 3);
        assert!(s.populated_levels().iter().all(|l| l.abs() > 1e-6));
    }
}
