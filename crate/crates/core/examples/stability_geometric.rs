//! |U^n| on geometric meshes with ratios up to and beyond 1 + √2.

use vsbdf2::harness::{run_stability_sweep, stability_summary, StudyConfig};
use vsbdf2::stepper::StartScheme;

fn main() -> vsbdf2::Result<()> {
    let cfg = StudyConfig {
        start: StartScheme::BackwardEuler,
        n_list: vec![50],
        ratios: vec![1.0, 2.0, 2.2, 2.4, 3.0],
        ..StudyConfig::default()
    };
    let series = run_stability_sweep(&cfg)?;
    print!("{}", stability_summary(&series));

    let s = series
        .iter()
        .find(|s| s.ratio == 2.4)
        .expect("r = 2.4 in the sweep");
    for (n, (t, v)) in s.times.iter().zip(&s.norms).enumerate().step_by(10) {
        println!("n={n:<3} t={t:.3e} |U|={v:.6}");
    }
    Ok(())
}
