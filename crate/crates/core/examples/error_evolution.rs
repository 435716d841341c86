//! Per-step errors on constant versus slowly growing steps, as CSV.

use vsbdf2::harness::{error_evolution_csv, run_error_evolution, SchemeKind, StudyConfig};
use vsbdf2::stepper::StartScheme;

fn main() -> vsbdf2::Result<()> {
    let base = StudyConfig {
        start: StartScheme::BackwardEuler,
        n_list: vec![50],
        ..StudyConfig::default()
    };
    let mut series = run_error_evolution(&StudyConfig {
        scheme: SchemeKind::Csbdf2,
        ..base.clone()
    })?;
    series.extend(run_error_evolution(&StudyConfig {
        ratio: Some(1.1),
        ..base
    })?);
    print!("{}", error_evolution_csv(&series));
    Ok(())
}
