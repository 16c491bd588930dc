//! Entanglement measures for the bipartite and tripartite blocks.
//!
//! Tripartite amplitudes `(c1, c2, c3, c4)` live on
//! `{|n+1,00>, |n,01>, |n,10>, |n-1,11>}`. Reductions embed the state into
//! the product space pool ⊗ left dot ⊗ right dot with the pool ordered
//! `{|n+1>, |n>, |n-1>}` and then trace out a factor.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dynamics::PureState;
use crate::error::{Error, Result};
use crate::linalg::{
    eigendecompose_hermitian, negative_eigenvalue_sum, partial_transpose, HermitianMatrix, TensorSplit,
};
use crate::model::System;
use crate::scalar::Real;

/// Validated reduced state: unit trace, Hermitian, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: HermitianMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks trace (1e-12), Hermiticity (1e-12) and minimal eigenvalue (>= -1e-10).
    pub fn new(matrix: HermitianMatrix<T>) -> Result<Self> {
        let tr = matrix.trace();
        if !((tr - T::one()).abs() <= T::tol(1e-12)) {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let asym = matrix.max_asymmetry();
        if !(asym <= T::tol(1e-12)) {
            return Err(Error::InvalidDensityMatrix(format!("asymmetry {asym}")));
        }
        let min = eigendecompose_hermitian(&matrix)?.eigenvalues()[0];
        if min < -T::tol(1e-10) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min}")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_reduction(matrix: HermitianMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix.get(i, j)
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> T {
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Which factor is traced out before a mixed-state measure is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceOut {
    #[default]
    None,
    Pool,
    Qubit,
}

impl fmt::Display for TraceOut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceOut::None => "none",
            TraceOut::Pool => "pool",
            TraceOut::Qubit => "qubit",
        })
    }
}

impl FromStr for TraceOut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TraceOut::None),
            "pool" => Ok(TraceOut::Pool),
            "qubit" => Ok(TraceOut::Qubit),
            other => Err(Error::InvalidParameter(format!("unknown trace-out target '{other}'"))),
        }
    }
}

/// Selector for a per-sample scalar measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `2|c1 c2|` of the bipartite state.
    Concurrence,
    /// `sqrt(3 - sum Tr rho_i^2)` of the tripartite state.
    ConcurrenceTripartite,
    /// Wootters entanglement of formation after tracing out the pool.
    EofTwoQubit,
    NegativityTwoQubit,
    /// Convex-decomposition entanglement of formation after tracing out one dot.
    EofQubitQutrit,
    NegativityQubitQutrit,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Concurrence,
        Measure::ConcurrenceTripartite,
        Measure::EofTwoQubit,
        Measure::NegativityTwoQubit,
        Measure::EofQubitQutrit,
        Measure::NegativityQubitQutrit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::ConcurrenceTripartite => "concurrence_tripartite",
            Measure::EofTwoQubit => "eof_two_qubit",
            Measure::NegativityTwoQubit => "negativity_two_qubit",
            Measure::EofQubitQutrit => "eof_qubit_qutrit",
            Measure::NegativityQubitQutrit => "negativity_qubit_qutrit",
        }
    }

    pub fn system(self) -> System {
        match self {
            Measure::Concurrence => System::Bipartite,
            _ => System::Tripartite,
        }
    }

    pub fn trace_out(self) -> TraceOut {
        match self {
            Measure::Concurrence | Measure::ConcurrenceTripartite => TraceOut::None,
            Measure::EofTwoQubit | Measure::NegativityTwoQubit => TraceOut::Pool,
            Measure::EofQubitQutrit | Measure::NegativityQubitQutrit => TraceOut::Qubit,
        }
    }

    /// Largest value the measure can take on any state of its system.
    pub fn upper_bound<T: Real>(self) -> T {
        match self {
            Measure::Concurrence | Measure::EofTwoQubit | Measure::EofQubitQutrit => T::one(),
            // Both qubit purities are at least 1/2 and the pool purity at least 1/3.
            Measure::ConcurrenceTripartite => T::lit(5.0 / 3.0).sqrt(),
            Measure::NegativityTwoQubit | Measure::NegativityQubitQutrit => T::lit(0.5),
        }
    }

    pub fn is_entanglement_of_formation(self) -> bool {
        matches!(self, Measure::EofTwoQubit | Measure::EofQubitQutrit)
    }

    pub fn is_negativity(self) -> bool {
        matches!(self, Measure::NegativityTwoQubit | Measure::NegativityQubitQutrit)
    }

    /// Evaluates on a raw amplitude vector assumed normalized.
    pub fn evaluate<T: Real>(self, amplitudes: &[Complex<T>]) -> Result<T> {
        let psi = PureState::from_raw(amplitudes.to_vec());
        match self {
            Measure::Concurrence => concurrence_pure_bipartite(&psi),
            Measure::ConcurrenceTripartite => concurrence_tripartite(&psi),
            Measure::EofTwoQubit => eof_from_concurrence(concurrence_mixed_two_qubit(&trace_out_pool(&psi)?)?),
            Measure::NegativityTwoQubit => negativity(&trace_out_pool(&psi)?, &TensorSplit::qubit_qubit()),
            Measure::EofQubitQutrit => eof_qubit_qutrit(&psi),
            Measure::NegativityQubitQutrit => negativity(&trace_out_qubit(&psi)?, &TensorSplit::qutrit_qubit()),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure '{s}'")))
    }
}

/// All measures of one state; entries not requested stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord<T> {
    pub concurrence_pure: Option<T>,
    pub concurrence_tripartite: Option<T>,
    pub eof_two_qubit: Option<T>,
    pub negativity_two_qubit: Option<T>,
    pub eof_qubit_qutrit: Option<T>,
    pub negativity_qubit_qutrit: Option<T>,
}

impl<T: Real> MeasureRecord<T> {
    pub fn evaluate(psi: &PureState<T>, measures: &[Measure]) -> Result<Self> {
        let mut rec = Self::default();
        for &m in measures {
            let v = Some(m.evaluate(psi.amplitudes())?);
            match m {
                Measure::Concurrence => rec.concurrence_pure = v,
                Measure::ConcurrenceTripartite => rec.concurrence_tripartite = v,
                Measure::EofTwoQubit => rec.eof_two_qubit = v,
                Measure::NegativityTwoQubit => rec.negativity_two_qubit = v,
                Measure::EofQubitQutrit => rec.eof_qubit_qutrit = v,
                Measure::NegativityQubitQutrit => rec.negativity_qubit_qutrit = v,
            }
        }
        Ok(rec)
    }

    pub fn get(&self, m: Measure) -> Option<T> {
        match m {
            Measure::Concurrence => self.concurrence_pure,
            Measure::ConcurrenceTripartite => self.concurrence_tripartite,
            Measure::EofTwoQubit => self.eof_two_qubit,
            Measure::NegativityTwoQubit => self.negativity_two_qubit,
            Measure::EofQubitQutrit => self.eof_qubit_qutrit,
            Measure::NegativityQubitQutrit => self.negativity_qubit_qutrit,
        }
    }
}

fn expect_dim<T: Real>(psi: &PureState<T>, dim: usize) -> Result<()> {
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: psi.dim(),
        });
    }
    Ok(())
}

/// `2|c1 c2|` for a two-amplitude state.
pub fn concurrence_pure_bipartite<T: Real>(psi: &PureState<T>) -> Result<T> {
    expect_dim(psi, 2)?;
    let a = psi.amplitudes();
    Ok((T::lit(2.0) * a[0].norm() * a[1].norm()).min(T::one()))
}

// Subsystem dimensions of the embedding: pool, left dot, right dot.
const FACTORS: [usize; 3] = [3, 2, 2];

fn embed<T: Real>(psi: &PureState<T>) -> Result<[Complex<T>; 12]> {
    expect_dim(psi, 4)?;
    let a = psi.amplitudes();
    let mut out = [Complex::new(T::zero(), T::zero()); 12];
    let idx = |p: usize, l: usize, r: usize| p * 4 + l * 2 + r;
    out[idx(0, 0, 0)] = a[0];
    out[idx(1, 0, 1)] = a[1];
    out[idx(1, 1, 0)] = a[2];
    out[idx(2, 1, 1)] = a[3];
    Ok(out)
}

/// Reduced state of the factors listed in `keep` (ascending).
fn reduce<T: Real>(psi: &PureState<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    let full = embed(psi)?;
    let digits = |mut idx: usize| {
        let mut d = [0usize; 3];
        for k in (0..3).rev() {
            d[k] = idx % FACTORS[k];
            idx /= FACTORS[k];
        }
        d
    };
    let kept_dim: usize = keep.iter().map(|&k| FACTORS[k]).product();
    let kept_index = |d: &[usize; 3]| keep.iter().fold(0, |acc, &k| acc * FACTORS[k] + d[k]);
    let traced_key = |d: &[usize; 3]| {
        (0..3)
            .filter(|k| !keep.contains(k))
            .fold(0, |acc, k| acc * FACTORS[k] + d[k])
    };

    let zero = Complex::new(T::zero(), T::zero());
    let mut rho = vec![zero; kept_dim * kept_dim];
    for (i, &ai) in full.iter().enumerate() {
        if ai == zero {
            continue;
        }
        let di = digits(i);
        for (j, &aj) in full.iter().enumerate() {
            if aj == zero {
                continue;
            }
            let dj = digits(j);
            if traced_key(&di) == traced_key(&dj) {
                rho[kept_index(&di) * kept_dim + kept_index(&dj)] += ai * aj.conj();
            }
        }
    }
    Ok(DensityMatrix::from_reduction(HermitianMatrix::from_raw(kept_dim, rho)))
}

/// Single-subsystem reductions of a tripartite state.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensityMatrices<T> {
    /// Pool on `{|n+1>, |n>, |n-1>}`.
    pub pool: DensityMatrix<T>,
    pub left: DensityMatrix<T>,
    pub right: DensityMatrix<T>,
}

pub fn reduced_density_matrices<T: Real>(psi: &PureState<T>) -> Result<ReducedDensityMatrices<T>> {
    Ok(ReducedDensityMatrices {
        pool: reduce(psi, &[0])?,
        left: reduce(psi, &[1])?,
        right: reduce(psi, &[2])?,
    })
}

/// `sqrt(3 - Tr rho_pool^2 - Tr rho_left^2 - Tr rho_right^2)`.
pub fn concurrence_tripartite<T: Real>(psi: &PureState<T>) -> Result<T> {
    let r = reduced_density_matrices(psi)?;
    let s = T::lit(3.0) - r.pool.purity() - r.left.purity() - r.right.purity();
    Ok(s.max(T::zero()).sqrt())
}

/// The same quantity written out in the amplitude moduli of a normalized state.
pub fn concurrence_tripartite_expanded<T: Real>(psi: &PureState<T>) -> Result<T> {
    expect_dim(psi, 4)?;
    let p: Vec<T> = psi.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let quartic: T = p.iter().map(|x| *x * *x).sum();
    let cross = p[1] * p[2] + p[1] * p[3] + p[0] * p[1] + p[0] * p[2] + p[2] * p[3];
    let s = T::lit(3.0) - T::lit(3.0) * quartic - T::lit(2.0) * cross;
    Ok(s.max(T::zero()).sqrt())
}

/// Two-dot state on `{|00>, |01>, |10>, |11>}`.
pub fn trace_out_pool<T: Real>(psi: &PureState<T>) -> Result<DensityMatrix<T>> {
    reduce(psi, &[1, 2])
}

/// Pool ⊗ right-dot state on `{|n+1>, |n>, |n-1>} ⊗ {|0>, |1>}`.
pub fn trace_out_qubit<T: Real>(psi: &PureState<T>) -> Result<DensityMatrix<T>> {
    reduce(psi, &[0, 2])
}

/// Square roots of the eigenvalues of `rho (sy⊗sy) rho* (sy⊗sy)`, descending.
///
/// Computed as the singular values of `W^T (sy⊗sy) W` with `rho = W W^dagger`,
/// which avoids the square root of nearly vanishing eigenvalues.
pub fn wootters_lambdas<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let eig = eigendecompose_hermitian(rho.matrix())?;
    let zero = Complex::new(T::zero(), T::zero());
    // Columns of W.
    let w: Vec<[Complex<T>; 4]> = (0..4)
        .map(|k| {
            let s = eig.eigenvalues()[k].max(T::zero()).sqrt();
            let v = eig.vector(k);
            [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
        })
        .collect();
    // sy⊗sy: |00> -> -|11>, |11> -> -|00>, |01> -> |10>, |10> -> |01>.
    let flip = |v: &[Complex<T>; 4]| [-v[3], v[2], v[1], -v[0]];
    let mut tau = [[zero; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let fj = flip(&w[j]);
            tau[i][j] = (0..4).fold(zero, |acc, k| acc + w[i][k] * fj[k]);
        }
    }
    let dilation = HermitianMatrix::from_upper(8, |r, c| if r < 4 && c >= 4 { tau[r][c - 4] } else { zero });
    let ev = eigendecompose_hermitian(&dilation)?;
    let vals = ev.eigenvalues();
    Ok([vals[7].abs(), vals[6].abs(), vals[5].abs(), vals[4].abs()])
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, clamped to 1.
pub fn concurrence_mixed_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one()))
}

/// Binary-entropy form `f((1 + sqrt(1 - C^2)) / 2)` with `0 log 0 = 0`.
pub fn eof_from_concurrence<T: Real>(c: T) -> Result<T> {
    let slack = T::tol(1e-12);
    if !(c >= -slack && c <= T::one() + slack) {
        return Err(Error::InvalidParameter(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.max(T::zero()).min(T::one());
    let root = (T::one() - c * c).sqrt();
    // Smaller branch written without cancellation.
    let y = c * c / (T::lit(2.0) * (T::one() + root));
    if y == T::zero() {
        return Ok(T::zero());
    }
    let x = T::one() - y;
    let h = -(x * (-y).ln_1p() + y * y.ln()) / T::LN_2();
    Ok(h.max(T::zero()).min(T::one()))
}

/// Absolute sum of negative eigenvalues of the partial transpose on the last factor.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, split: &TensorSplit) -> Result<T> {
    let last = split.dims().len() - 1;
    let pt = partial_transpose(rho.matrix(), split, last)?;
    negative_eigenvalue_sum(&pt)
}

/// Entanglement of formation of the pool ⊗ dot state from its unique
/// decomposition into fixed-particle-number pure states.
pub fn eof_qubit_qutrit<T: Real>(psi: &PureState<T>) -> Result<T> {
    expect_dim(psi, 4)?;
    let a = psi.amplitudes();
    let floor = T::lit(1e-14);
    let two = T::lit(2.0);
    let mut total = T::zero();
    for (x, y) in [(a[0], a[1]), (a[2], a[3])] {
        let w = x.norm_sqr() + y.norm_sqr();
        if w < floor {
            continue;
        }
        let c = (two * x.norm() * y.norm() / w).min(T::one());
        total += w * eof_from_concurrence(c)?;
    }
    Ok(total)
}
