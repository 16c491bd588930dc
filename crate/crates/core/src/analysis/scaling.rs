use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::sweep::SweepResult;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow<T> {
    pub n: u32,
    pub u_over_t: T,
    pub product: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport<T> {
    pub rows: Vec<ScalingRow<T>>,
    /// Largest `|p - mean| / mean` over the rows of each `n`.
    pub spread: BTreeMap<u32, T>,
    /// Points without a period, as `(n, U/T)`.
    pub skipped: Vec<(u32, T)>,
}

impl<T: Real> ScalingReport<T> {
    pub fn spread_for(&self, n: u32) -> Option<T> {
        self.spread.get(&n).copied()
    }
}

/// `t_ent * U/T` per point and its relative spread per `n`.
pub fn scaling_product<T: Real>(sweep: &SweepResult<T>) -> ScalingReport<T> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for p in &sweep.points {
        match p.t_ent_times_u() {
            Some(product) if p.status.is_ok() => rows.push(ScalingRow {
                n: p.n,
                u_over_t: p.u_over_t,
                product,
            }),
            _ => skipped.push((p.n, p.u_over_t)),
        }
    }
    let mut by_n: BTreeMap<u32, Vec<T>> = BTreeMap::new();
    for r in &rows {
        by_n.entry(r.n).or_default().push(r.product);
    }
    let spread = by_n
        .into_iter()
        .map(|(n, ps)| {
            let mean = ps.iter().copied().sum::<T>() / T::lit(ps.len() as f64);
            let dev = if mean == T::zero() {
                T::zero()
            } else {
                ps.iter().fold(T::zero(), |acc, &p| acc.max(((p - mean) / mean).abs()))
            };
            (n, dev)
        })
        .collect();
    ScalingReport { rows, spread, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sweep::{PointStatus, SweepConfig, SweepPoint};

    fn point(n: u32, u: f64, t: Option<f64>) -> SweepPoint<f64> {
        SweepPoint {
            n,
            u_over_t: u,
            t_ent: t,
            c_max: None,
            e_max: None,
            n_max: None,
            t_max: 50.0,
            dt: 0.01,
            status: if t.is_some() {
                PointStatus::Ok
            } else {
                PointStatus::PeriodNotFound {
                    zeros: 0,
                    observed_min: 0.2,
                }
            },
        }
    }

    fn result(points: Vec<SweepPoint<f64>>) -> SweepResult<f64> {
        SweepResult {
            config: SweepConfig::default(),
            e_over_t: 0.01,
            points,
        }
    }

    #[test]
    fn single_point_has_zero_spread() {
        let r = scaling_product(&result(vec![point(30, 0.5, Some(12.0))]));
        assert_eq!(r.spread_for(30), Some(0.0));
        assert_eq!(r.rows[0].product, 6.0);
    }

    #[test]
    fn spread_and_skips() {
        let r = scaling_product(&result(vec![
            point(4, 0.5, Some(10.0)),
            point(4, 1.0, Some(6.0)),
            point(4, 2.0, None),
        ]));
        // Products 5 and 6, mean 5.5.
        assert!((r.spread_for(4).unwrap() - 0.5 / 5.5).abs() < 1e-15);
        assert_eq!(r.skipped, vec![(4, 2.0)]);
    }
}
