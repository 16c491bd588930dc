use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::dense::ComplexMatrix;
use crate::linalg::hermitian::HermitianMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
///
/// Each eigenvector is phase-fixed so that its first component with modulus
/// above `sqrt(eps)` is real and positive.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k]
            })
        })
    }

    /// `max |lambda|`, the spectral norm of the decomposed matrix.
    pub fn spectral_radius(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |acc, l| acc.max(l.abs()))
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// The `offset` of `m` is ignored. Iteration stops once the off-diagonal
/// Frobenius norm falls below `1e-14 * ||m||_F` (or the type's epsilon floor).
pub fn eigendecompose_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = m.dim();
    let mut a = m.to_dense();
    let mut v = ComplexMatrix::<T>::identity(n);
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }

    let scale = m.frobenius_norm();
    let threshold = T::tol(1e-14) * scale;
    let off = |a: &ComplexMatrix<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off(&a).to_f64_lossy(),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let small = T::epsilon().sqrt();
    let columns: Vec<Vec<Complex<T>>> = order
        .iter()
        .map(|&k| {
            let mut col = v.column(k);
            if let Some(lead) = col.iter().find(|z| z.norm() > small).copied() {
                let phase = lead.conj() / lead.norm();
                for z in &mut col {
                    *z *= phase;
                }
            }
            col
        })
        .collect();

    Ok(EigenDecomposition {
        eigenvalues: order.iter().map(|&k| diag[k]).collect(),
        eigenvectors: ComplexMatrix::from_columns(&columns),
    })
}

/// One unitary rotation in the (p, q) plane that annihilates `a[p][q]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let n = a.rows();
    let ph = apq.conj() / mag;
    let two = T::lit(2.0);
    let tau = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
    let t = if tau == T::zero() {
        T::one()
    } else {
        tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * c - akq * ph * s;
        let new_kq = akp * s + akq * ph * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = Complex::new(a[(p, p)].re - t * mag, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re + t * mag, T::zero());
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph * s;
        v[(k, q)] = vkp * s + vkq * ph * c;
    }
}
