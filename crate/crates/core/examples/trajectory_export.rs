//! Solver diagnostics and the binary state dump of one run.

use vsbdf2::mesh::TimeMesh;
use vsbdf2::problems::Semilinear2d;
use vsbdf2::stepper::{integrate, read_state_dump, Mode, SolverConfig, StartScheme};

fn main() -> vsbdf2::Result<()> {
    let problem = Semilinear2d::new(16, 0.01)?;
    let mesh = TimeMesh::graded(1.0, 12, 3.0)?;
    let traj = integrate(
        &problem,
        &mesh,
        StartScheme::Trapezoidal,
        Mode::Semilinear,
        &SolverConfig::default(),
    )?;
    print!("{}", traj.diagnostics_csv());

    let mut bytes = Vec::new();
    traj.write_state_dump(&mut bytes)?;
    let states = read_state_dump(bytes.as_slice())?;
    println!(
        "dump: {} bytes, {} states of length {}",
        bytes.len(),
        states.len(),
        states[0].len()
    );
    Ok(())
}
