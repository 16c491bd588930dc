use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dense::ComplexMatrix;
use crate::scalar::Real;

/// Dense complex Hermitian operator of small dimension.
///
/// `offset` carries a scalar multiple of the identity that is *not* folded
/// into `entries`. It shifts reported energies but never the dynamics of
/// observables, so builders park dropped diagonal constants there.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
    offset: T,
}

impl<T: Real> HermitianMatrix<T> {
    /// Largest dimension accepted. Six covers every physical operator here;
    /// eight leaves room for the Hermitian dilation of a 4x4 matrix.
    pub const MAX_DIM: usize = 8;

    /// Builds from the upper triangle; the lower triangle is its exact conjugate
    /// and only the real part of diagonal entries is kept.
    pub fn from_upper(dim: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        assert!((1..=Self::MAX_DIM).contains(&dim), "dimension {dim} out of range");
        let zero = Complex::new(T::zero(), T::zero());
        let mut entries = vec![zero; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(f(i, i).re, T::zero());
            for j in i + 1..dim {
                let z = f(i, j);
                entries[i * dim + j] = z;
                entries[j * dim + i] = z.conj();
            }
        }
        Self {
            dim,
            entries,
            offset: T::zero(),
        }
    }

    /// Builds from explicit rows, rejecting input that is not Hermitian to
    /// within `1e-12 * max(1, ||M||_F)`.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > Self::MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "matrix dimension {dim} outside 1..={}",
                Self::MAX_DIM
            )));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
        }
        let m = Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
            offset: T::zero(),
        };
        m.check_hermitian()?;
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self::from_upper(diag.len(), |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_real_diagonal(&vec![T::one(); dim])
    }

    /// Wraps already-Hermitian storage without checking.
    pub(crate) fn from_raw(dim: usize, entries: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self {
            dim,
            entries,
            offset: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn with_offset(mut self, offset: T) -> Self {
        self.offset = offset;
        self
    }

    /// Returns `self + shift * I` with the shift folded into the entries.
    pub fn shifted(&self, shift: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i].re += shift;
        }
        out
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| *z * factor).collect(),
            offset: self.offset * factor,
        }
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub(crate) fn check_hermitian(&self) -> Result<()> {
        let bound = T::tol(1e-12) * T::one().max(self.frobenius_norm());
        let asym = self.max_asymmetry();
        if asym > bound || asym.is_nan() {
            return Err(Error::NotHermitian {
                asymmetry: asym.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }

    /// `<v|M|v>`, real for Hermitian `M`. The offset is not included.
    pub fn expectation(&self, v: &[Complex<T>]) -> T {
        let mv = self.apply(v);
        v.iter()
            .zip(&mv)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b)
            .re
    }

    pub fn to_dense(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }
}

/// Ordered subsystem dimensions of a tensor-product space, most significant
/// factor first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorSplit {
    dims: Vec<usize>,
}

impl TensorSplit {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "tensor split needs positive dimensions, got {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    /// Qubit ⊗ qubit.
    pub fn qubit_qubit() -> Self {
        Self { dims: vec![2, 2] }
    }

    /// Qutrit ⊗ qubit.
    pub fn qutrit_qubit() -> Self {
        Self { dims: vec![3, 2] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn stride(&self, subsystem: usize) -> usize {
        self.dims[subsystem + 1..].iter().product()
    }
}

/// Transposes the indices of one subsystem.
///
/// `(PT)[(.., a, ..), (.., b, ..)] = M[(.., b, ..), (.., a, ..)]` on the
/// chosen factor; all other factors keep their row/column roles.
pub fn partial_transpose<T: Real>(
    m: &HermitianMatrix<T>,
    split: &TensorSplit,
    subsystem: usize,
) -> Result<HermitianMatrix<T>> {
    if split.total() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: split.total(),
            actual: m.dim(),
        });
    }
    if subsystem >= split.dims().len() {
        return Err(Error::InvalidParameter(format!(
            "subsystem {subsystem} out of range for {} factors",
            split.dims().len()
        )));
    }
    let dim = m.dim();
    let stride = split.stride(subsystem);
    let local = split.dims()[subsystem];
    let digit = |idx: usize| (idx / stride) % local;

    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            let (dr, dc) = (digit(r), digit(c));
            let src_r = r - dr * stride + dc * stride;
            let src_c = c - dc * stride + dr * stride;
            entries.push(m.get(src_r, src_c));
        }
    }
    Ok(HermitianMatrix::from_raw(dim, entries).with_offset(m.offset()))
}

/// Sum of the absolute values of the negative eigenvalues of `m`.
pub fn negative_eigenvalue_sum<T: Real>(m: &HermitianMatrix<T>) -> Result<T> {
    let eig = super::eigendecompose_hermitian(m)?;
    Ok(eig.eigenvalues().iter().filter(|&&l| l < T::zero()).map(|&l| -l).sum())
}

/// Trace norm `sum |lambda_k|`.
pub fn trace_norm<T: Real>(m: &HermitianMatrix<T>) -> Result<T> {
    let eig = super::eigendecompose_hermitian(m)?;
    Ok(eig.eigenvalues().iter().map(|l| l.abs()).sum())
}
