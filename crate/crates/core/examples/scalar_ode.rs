//! `u' + λu = 0` on graded meshes: both starting steps and the observed order.

use vsbdf2::mesh::TimeMesh;
use vsbdf2::norms::observed_order;
use vsbdf2::problems::{ParabolicProblem, ScalarOde};
use vsbdf2::stepper::{integrate, Mode, SolverConfig, StartScheme};

fn main() -> vsbdf2::Result<()> {
    let lambda = 5.0;
    let problem = ScalarOde::new(lambda, 1.0).with_exact(move |t| (-lambda * t).exp());
    let exact = (-lambda).exp();

    for start in [StartScheme::BackwardEuler, StartScheme::Trapezoidal] {
        println!("start {}", start.label());
        let mut prev: Option<f64> = None;
        for n in [10, 20, 40, 80, 160] {
            let mesh = TimeMesh::graded(1.0, n, 2.0)?;
            let traj = integrate(
                &problem,
                &mesh,
                start,
                Mode::Linear,
                &SolverConfig::default(),
            )?;
            let err = (traj.final_state().value() - exact).abs();
            let order = match prev {
                Some(p) => format!("{:.4}", observed_order(p, err)?),
                None => "-".into(),
            };
            println!("  N={n:<4} |U^N - u(1)| = {err:.4e}  order {order}");
            prev = Some(err);
        }
    }

    // a state-dependent right-hand side switches to the fixed-point solver
    let logistic = ScalarOde::new(0.0, 0.1).with_nonlinear_forcing(|_, u| u * (1.0 - u));
    let mesh = TimeMesh::uniform(5.0, 100)?;
    let traj = integrate(
        &logistic,
        &mesh,
        StartScheme::Trapezoidal,
        Mode::Semilinear,
        &SolverConfig::default(),
    )?;
    let u = traj.final_state().value();
    let exact = 1.0 / (1.0 + 9.0 * (-5.0f64).exp());
    println!(
        "logistic u(5) = {u:.8} (exact {exact:.8}), |U| = {:.6}",
        logistic.h_norm(traj.final_state())
    );
    Ok(())
}
