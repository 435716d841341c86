use vsbdf2::harness::{
    run_convergence_study, run_error_evolution, run_stability_sweep, stability_csv, ProblemKind,
    SchemeKind, StudyConfig,
};
use vsbdf2::stepper::StartScheme;

#[test]
fn ratio_grid_below_limit_is_bounded() {
    let cfg = StudyConfig {
        n_list: vec![50],
        ratios: vec![2.0, 2.2, 2.4],
        start: StartScheme::BackwardEuler,
        ..StudyConfig::default()
    };
    let series = run_stability_sweep(&cfg).unwrap();
    assert_eq!(series.len(), 3);
    for s in &series {
        assert!(s.bounded() && s.decays(), "{} growth {}", s.id, s.growth());
    }
}

#[test]
fn variable_steps_beat_constant_steps_for_most_n() {
    let base = StudyConfig {
        n_list: vec![50],
        start: StartScheme::BackwardEuler,
        ..StudyConfig::default()
    };
    let constant = run_error_evolution(&StudyConfig {
        scheme: SchemeKind::Csbdf2,
        ..base.clone()
    })
    .unwrap();
    let variable = run_error_evolution(&StudyConfig {
        ratio: Some(1.1),
        ..base
    })
    .unwrap();
    let (c, v) = (&constant[0].l2, &variable[0].l2);
    let below = (1..c.len()).filter(|&n| v[n] < c[n]).count();
    assert!(below * 2 > c.len() - 1, "{below} of {}", c.len() - 1);
}

#[test]
fn heat_order_column_at_default_parameters() {
    let study = run_convergence_study(&StudyConfig::default()).unwrap();
    let table = &study.tables()[0];
    let orders: Vec<f64> = table.rows.iter().filter_map(|r| r.order).collect();
    let expected = [1.9975, 1.9978, 2.0001, 2.0000];
    assert_eq!(orders.len(), 4);
    for (o, e) in orders.iter().zip(expected) {
        assert!((o - e).abs() < 5e-4, "{orders:?}");
    }
}

#[test]
fn studies_are_deterministic() {
    let cfg = StudyConfig {
        problem: ProblemKind::Semilinear2d,
        cells: Some(8),
        n_list: vec![10, 20, 40],
        ..StudyConfig::default()
    };
    let a = run_convergence_study(&cfg).unwrap();
    let b = run_convergence_study(&cfg).unwrap();
    assert_eq!(a.csv(), b.csv());
    let sweep = StudyConfig {
        n_list: vec![20, 30],
        ratios: vec![1.0, 2.4],
        ..StudyConfig::default()
    };
    assert_eq!(
        stability_csv(&run_stability_sweep(&sweep).unwrap()),
        stability_csv(&run_stability_sweep(&sweep).unwrap())
    );
}
