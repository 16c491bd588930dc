//! Physical parameters and the two conserved-particle-number Hamiltonian blocks.
//!
//! Energies share one unit and time is measured in its inverse (hbar = 1).
//! The bipartite block acts on `{|n,0>, |n-1,1>}` (pool occupation, dot
//! occupation); the tripartite block on
//! `{|n+1,00>, |n,01>, |n,10>, |n-1,11>}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::scalar::Real;

/// Which conserved-N block is being simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// One dot and the pool, dimension 2.
    Bipartite,
    /// Two dots and the pool, dimension 4.
    Tripartite,
}

impl System {
    pub fn dim(self) -> usize {
        match self {
            System::Bipartite => 2,
            System::Tripartite => 4,
        }
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            System::Bipartite => "bipartite",
            System::Tripartite => "tripartite",
        })
    }
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" => Ok(System::Bipartite),
            "tripartite" => Ok(System::Tripartite),
            other => Err(Error::InvalidParameter(format!("unknown system '{other}'"))),
        }
    }
}

/// Model parameters. Construct through [`SystemParams::new`] to validate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T> {
    /// Reference pool occupation of the basis.
    pub n: u32,
    /// Boson-boson interaction energy.
    pub u: T,
    /// Dot-pool coupling.
    pub t: T,
    /// Pool single-particle energy.
    pub e_b: T,
    /// Detuning energy.
    pub delta: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(n: u32, u: T, t: T, e_b: T, delta: T) -> Result<Self> {
        let p = Self { n, u, t, e_b, delta };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in coupling units: `T = 1`, `E = e_over_t` carried as `E_b`.
    pub fn from_ratios(n: u32, u_over_t: T, e_over_t: T) -> Result<Self> {
        Self::new(n, u_over_t, T::one(), e_over_t, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.t.is_finite() && self.t > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "T must be positive and finite, got {}",
                self.t
            )));
        }
        if !(self.u.is_finite() && self.u >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "U must be non-negative and finite, got {}",
                self.u
            )));
        }
        if !self.e_b.is_finite() || !self.delta.is_finite() {
            return Err(Error::InvalidParameter("E_b and Delta must be finite".into()));
        }
        Ok(())
    }

    /// Energy difference between the traps, `E_b + Delta`.
    pub fn e(&self) -> T {
        self.e_b + self.delta
    }

    fn n_real(&self) -> T {
        T::lit(self.n as f64)
    }

    pub fn with_u(self, u: T) -> Self {
        Self { u, ..self }
    }

    pub fn with_n(self, n: u32) -> Self {
        Self { n, ..self }
    }
}

/// Rabi frequency and detuning of the bipartite block, `(omega_R, delta)`.
pub fn rabi_parameters<T: Real>(p: &SystemParams<T>) -> Result<(T, T)> {
    p.validate()?;
    let n = p.n_real();
    let omega_r = p.t * n.sqrt();
    let delta = -(p.e() + p.u * (n - T::one())) / T::lit(2.0);
    Ok((omega_r, delta))
}

/// `[[0, T sqrt n], [T sqrt n, -E - U(n-1)]]`.
///
/// The dropped diagonal `E_b n + U n(n-1)/2` is kept as the matrix offset.
pub fn build_bipartite_hamiltonian<T: Real>(p: &SystemParams<T>) -> Result<HermitianMatrix<T>> {
    p.validate()?;
    let n = p.n_real();
    let one = T::one();
    let coupling = p.t * n.sqrt();
    let bottom = -p.e() - p.u * (n - one);
    let h = HermitianMatrix::from_upper(2, |i, j| match (i, j) {
        (0, 1) => Complex::new(coupling, T::zero()),
        (1, 1) => Complex::new(bottom, T::zero()),
        _ => Complex::new(T::zero(), T::zero()),
    });
    Ok(h.with_offset(pool_offset(p)))
}

/// Four-state block with diagonal `(E + U n, 0, 0, -E + U(1 - n))`.
///
/// The dropped diagonal (the bipartite offset less `Delta`) is kept as the
/// matrix offset.
pub fn build_tripartite_hamiltonian<T: Real>(p: &SystemParams<T>) -> Result<HermitianMatrix<T>> {
    p.validate()?;
    let n = p.n_real();
    let one = T::one();
    let e = p.e();
    let up = p.t * (n + one).sqrt();
    let down = p.t * n.sqrt();
    let first = e + p.u * n;
    let last = -e + p.u * (one - n);
    let h = HermitianMatrix::from_upper(4, |i, j| {
        let v = match (i, j) {
            (0, 0) => first,
            (3, 3) => last,
            (0, 1) | (0, 2) => up,
            (1, 3) | (2, 3) => down,
            _ => T::zero(),
        };
        Complex::new(v, T::zero())
    });
    Ok(h.with_offset(pool_offset(p) - p.delta))
}

fn pool_offset<T: Real>(p: &SystemParams<T>) -> T {
    let n = p.n_real();
    p.e_b * n + p.u * n * (n - T::one()) / T::lit(2.0)
}

pub fn build_hamiltonian<T: Real>(system: System, p: &SystemParams<T>) -> Result<HermitianMatrix<T>> {
    match system {
        System::Bipartite => build_bipartite_hamiltonian(p),
        System::Tripartite => build_tripartite_hamiltonian(p),
    }
}

/// The antisymmetric dot state `(|n,01> - |n,10>)/sqrt 2`, a zero mode of the
/// tripartite block for every parameter choice.
pub fn singlet<T: Real>() -> [Complex<T>; 4] {
    let s = T::FRAC_1_SQRT_2();
    let z = T::zero();
    [
        Complex::new(z, z),
        Complex::new(s, z),
        Complex::new(-s, z),
        Complex::new(z, z),
    ]
}
