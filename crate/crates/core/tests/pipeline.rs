use aqd_core::analysis::{linear_grid, run_point, scaling_product, spectrum_report, sweep, PointStatus, SweepConfig};
use aqd_core::model::build_hamiltonian;
use aqd_core::{System, SystemParams, TraceOut};

#[test]
fn f32_and_f64_periods_agree() {
    let config = SweepConfig {
        system: System::Bipartite,
        ..SweepConfig::default()
    };
    let wide = run_point(
        &SystemParams::<f64>::from_ratios(10, 0.3, 0.01).unwrap(),
        10,
        0.3,
        &config,
    );
    let narrow = run_point(
        &SystemParams::<f32>::from_ratios(10, 0.3, 0.01).unwrap(),
        10,
        0.3,
        &config,
    );
    let (a, b) = (wide.point.t_ent.unwrap(), narrow.point.t_ent.unwrap() as f64);
    assert!((a - b).abs() / a < 1e-3, "{a} vs {b}");
}

#[test]
fn sweep_points_are_ordered_and_complete() {
    let base = SystemParams::<f64>::from_ratios(1, 0.0, 0.01).unwrap();
    let config = SweepConfig {
        trace_out: TraceOut::Qubit,
        ..SweepConfig::default()
    };
    let grid = linear_grid(0.3, 0.9, 4).unwrap();
    let result = sweep(&base, &grid, &[10, 4], &config).unwrap();
    let keys: Vec<(u32, f64)> = result.points.iter().map(|p| (p.n, p.u_over_t)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    for p in &result.points {
        assert_eq!(p.status, PointStatus::Ok);
        assert!(p.e_max.unwrap() > 0.0 && p.n_max.unwrap() > 0.0);
        assert!(p.c_max.unwrap() <= (5.0f64 / 3.0).sqrt() + 1e-9);
    }
    assert_eq!(scaling_product(&result).rows.len(), 8);
}

#[test]
fn sweep_is_deterministic() {
    let base = SystemParams::<f64>::from_ratios(1, 0.0, 0.01).unwrap();
    let grid = linear_grid(0.2, 1.0, 5).unwrap();
    let a = sweep(&base, &grid, &[4, 30], &SweepConfig::default()).unwrap();
    let b = sweep(&base, &grid, &[30, 4], &SweepConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spectrum_singlet_gap_closes_with_u() {
    let gap = |u: f64| {
        let p = SystemParams::<f64>::from_ratios(10, u, 0.01).unwrap();
        spectrum_report(&build_hamiltonian(System::Tripartite, &p).unwrap())
            .unwrap()
            .singlet_gap
            .unwrap()
    };
    assert!(gap(0.01) < gap(0.1));
    assert!(gap(0.1) < gap(0.5));
}

#[test]
fn shallow_resonant_dip_is_found_for_any_sample_phase() {
    use aqd_core::{detect_entanglement_period, sample_trajectory, Measure, Propagator, PureState};
    let p = SystemParams::<f64>::from_ratios(10, 0.0, 0.01).unwrap();
    let h = build_hamiltonian(System::Bipartite, &p).unwrap();
    let base_dt = Propagator::new(&h).unwrap().default_dt();
    let want = std::f64::consts::PI / (2.0 * 10f64.sqrt());
    for k in 0..40 {
        let dt = base_dt * (0.6 + 0.01 * k as f64);
        let mut series = sample_trajectory(&h, &PureState::basis(2, 0), 5.0, dt).unwrap();
        series.compute(Measure::Concurrence).unwrap();
        let t = detect_entanglement_period(&series, Measure::Concurrence, 0.01)
            .unwrap()
            .t_ent;
        assert!((t - want).abs() / want < 1e-3, "dt={dt}: {t}");
    }
}
