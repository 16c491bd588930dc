use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eigendecompose_hermitian, inner, norm_sqr, HermitianMatrix};
use crate::model::singlet;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport<T> {
    /// Ascending, without the offset.
    pub eigenvalues: Vec<T>,
    /// Dropped diagonal constant of the Hamiltonian.
    pub offset: T,
    /// Index of the zero-energy dot singlet (tripartite only).
    pub singlet_index: Option<usize>,
    /// `||H s||` for the singlet vector `s`.
    pub singlet_residual: Option<T>,
    /// Level closest to the singlet.
    pub partner_index: Option<usize>,
    /// `|lambda_partner - lambda_singlet|`.
    pub singlet_gap: Option<T>,
    /// `lambda_partner - lambda_0`.
    pub ground_to_partner: Option<T>,
    /// `lambda_max - lambda_min`.
    pub spread: T,
}

/// Sorted spectrum with the dot singlet and its nearest level identified.
///
/// For the 4x4 block the singlet is the eigenvector with the largest overlap
/// with `(0, 1, -1, 0)/sqrt 2` among eigenvalues within `1e-12 max(1, ||H||)`
/// of zero, so exactly one level is flagged even when zero is degenerate.
pub fn spectrum_report<T: Real>(h: &HermitianMatrix<T>) -> Result<SpectrumReport<T>> {
    let eig = eigendecompose_hermitian(h)?;
    let values = eig.eigenvalues().to_vec();
    let spread = values[values.len() - 1] - values[0];
    let mut report = SpectrumReport {
        eigenvalues: values.clone(),
        offset: h.offset(),
        singlet_index: None,
        singlet_residual: None,
        partner_index: None,
        singlet_gap: None,
        ground_to_partner: None,
        spread,
    };
    if h.dim() != 4 {
        return Ok(report);
    }
    let s = singlet::<T>();
    report.singlet_residual = Some(norm_sqr(&h.apply(&s)).sqrt());
    let zero_tol = T::tol(1e-12) * T::one().max(eig.spectral_radius());
    let singlet_index = (0..4).filter(|&k| values[k].abs() < zero_tol).max_by(|&a, &b| {
        let wa = inner(&eig.vector(a), &s).norm_sqr();
        let wb = inner(&eig.vector(b), &s).norm_sqr();
        wa.partial_cmp(&wb).expect("finite overlaps")
    });
    if let Some(k) = singlet_index {
        let partner = (0..4)
            .filter(|&j| j != k)
            .min_by(|&a, &b| {
                let da = (values[a] - values[k]).abs();
                let db = (values[b] - values[k]).abs();
                da.partial_cmp(&db).expect("finite eigenvalues")
            })
            .expect("three other levels");
        report.singlet_index = Some(k);
        report.partner_index = Some(partner);
        report.singlet_gap = Some((values[partner] - values[k]).abs());
        report.ground_to_partner = Some(values[partner] - values[0]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_bipartite_hamiltonian, build_tripartite_hamiltonian, SystemParams};

    #[test]
    fn resonant_spectrum() {
        let h = build_tripartite_hamiltonian(&SystemParams::<f64>::from_ratios(10, 0.0, 0.0).unwrap()).unwrap();
        let r = spectrum_report(&h).unwrap();
        let s = 42f64.sqrt();
        assert!((r.spread - 2.0 * s).abs() < 1e-12);
        assert!(r.eigenvalues[r.singlet_index.unwrap()].abs() < 1e-12);
        assert!(r.singlet_gap.unwrap() < 1e-12);
        assert!((r.ground_to_partner.unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn singlet_gap_shrinks_with_u() {
        let gap = |u: f64| {
            let h = build_tripartite_hamiltonian(&SystemParams::from_ratios(10, u, 0.01).unwrap()).unwrap();
            spectrum_report(&h).unwrap().singlet_gap.unwrap()
        };
        // Only the approach to U = 0 is monotone; near U ~ 1 the gap is flat.
        let gaps: Vec<f64> = [0.5, 0.2, 0.1, 0.05, 0.02, 0.005].iter().map(|&u| gap(u)).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn level_spacing_grows_as_sqrt_n() {
        let spacing = |n: u32| {
            let h = build_tripartite_hamiltonian(&SystemParams::<f64>::from_ratios(n, 0.0, 0.0).unwrap()).unwrap();
            spectrum_report(&h).unwrap().ground_to_partner.unwrap()
        };
        let slope = (spacing(10_000) / spacing(100)).ln() / 100f64.ln();
        assert!((slope - 0.5).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn bipartite_has_no_singlet() {
        let h = build_bipartite_hamiltonian(&SystemParams::<f64>::from_ratios(10, 0.06, 0.01).unwrap()).unwrap();
        let r = spectrum_report(&h).unwrap();
        assert!(r.singlet_index.is_none());
        assert!((r.eigenvalues[0] + 3.44921).abs() < 1e-5);
        assert!((r.eigenvalues[1] - 2.89921).abs() < 1e-5);
    }
}
