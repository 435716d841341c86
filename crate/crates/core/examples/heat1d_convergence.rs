//! Second order of VSBDF2 on the graded mesh for the 1D heat problem.
//!
//! `cargo run --release --example heat1d_convergence`

use vsbdf2::harness::{run_convergence_study, StudyConfig};
use vsbdf2::stepper::StartScheme;

fn main() -> vsbdf2::Result<()> {
    for start in [StartScheme::Trapezoidal, StartScheme::BackwardEuler] {
        let cfg = StudyConfig {
            start,
            ..StudyConfig::default()
        };
        let study = run_convergence_study(&cfg)?;
        print!("{}", study.markdown());
    }
    Ok(())
}
