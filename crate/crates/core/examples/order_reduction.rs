//! Constant steps with a backward Euler start lose order in the V-type
//! functionals; the trapezoidal start or a graded mesh restores it.

use vsbdf2::harness::{run_convergence_study, SchemeKind, StudyConfig, FUNCTIONALS};
use vsbdf2::stepper::StartScheme;

fn main() -> vsbdf2::Result<()> {
    println!(
        "{:<12} {}",
        "scheme",
        FUNCTIONALS.map(|f| format!("{f:>10}")).join(" ")
    );
    for (scheme, start) in [
        (SchemeKind::Csbdf2, StartScheme::BackwardEuler),
        (SchemeKind::Csbdf2, StartScheme::Trapezoidal),
        (SchemeKind::Vsbdf2, StartScheme::BackwardEuler),
    ] {
        let cfg = StudyConfig {
            scheme,
            start,
            ..StudyConfig::default()
        };
        let study = run_convergence_study(&cfg)?;
        let orders = study.final_orders().expect("all runs succeed");
        println!(
            "{:<12} {}",
            cfg.label(),
            orders.map(|o| format!("{o:>10.4}")).join(" ")
        );
    }
    Ok(())
}
