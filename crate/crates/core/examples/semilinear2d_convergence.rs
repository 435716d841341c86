//! Allen-Cahn type problem on the periodic square, pseudo-spectral in space.
//!
//! Pass a resolution to override the default 32, e.g. `-- 64`.

use vsbdf2::harness::{run_convergence_study, ProblemKind, SchemeKind, StudyConfig};
use vsbdf2::stepper::StartScheme;

fn main() -> vsbdf2::Result<()> {
    let cells = std::env::args()
        .nth(1)
        .map(|m| m.parse().expect("M must be an integer"));
    for (scheme, start) in [
        (SchemeKind::Vsbdf2, StartScheme::Trapezoidal),
        (SchemeKind::Csbdf2, StartScheme::BackwardEuler),
    ] {
        let cfg = StudyConfig {
            problem: ProblemKind::Semilinear2d,
            cells,
            scheme,
            start,
            ..StudyConfig::default()
        };
        let study = run_convergence_study(&cfg)?;
        print!("{}", study.markdown());
    }
    Ok(())
}
