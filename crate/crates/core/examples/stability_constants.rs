//! Ratio limits, step-size restrictions and the energy certificate of a run.

use vsbdf2::mesh::TimeMesh;
use vsbdf2::problems::{Heat1d, ParabolicProblem};
use vsbdf2::stability::{
    c3_constant, c_r_constant, check_ratio_bound, energy_sequence, gamma_max, kmax_bound_r0,
    stability_certificate, Certificate, RatioRegime, R0, R1,
};
use vsbdf2::stepper::{integrate, Mode, SolverConfig, StartScheme};

fn main() -> vsbdf2::Result<()> {
    println!("R0 = {R0:.6}, R1 = {R1:.6}");
    for r in [1.0, 1.5, 2.0, 2.4] {
        let c_r = if r > 1.0 {
            format!("{:.4}", c_r_constant(r)?)
        } else {
            "-".into()
        };
        println!("R = {r}: c_R = {c_r}, c3 = {:.4}", c3_constant(r)?);
    }

    let problem = Heat1d::new(100, 2.0)?;
    let mesh = TimeMesh::uniform(4.0, 40)?;
    let gamma = gamma_max(&problem, &mesh);
    println!(
        "heat1d b=2: gamma = {gamma:.4}, k_max allowed {:.4}, used {:.4}, ratios {:?}",
        kmax_bound_r0(gamma, 0.9)?,
        mesh.k_max(),
        check_ratio_bound(&mesh, RatioRegime::R0)
    );
    let traj = integrate(
        &problem,
        &mesh,
        StartScheme::Trapezoidal,
        Mode::Linear,
        &SolverConfig::default(),
    )?;
    match stability_certificate(&traj, &problem, 0.9)? {
        Certificate::Checked(c) => println!(
            "certificate {}: {:.4e} <= {:.4e} (constant {:.3e})",
            if c.holds { "holds" } else { "FAILS" },
            c.lhs,
            c.rhs,
            c.constant
        ),
        Certificate::NotApplicable(why) => println!("certificate not applicable: {why}"),
    }

    // unforced, B = 0: the weighted energy never grows
    let init: Vec<f64> = (1..50)
        .map(|i| if i % 7 < 3 { 1.0 } else { -0.5 })
        .collect();
    let free = Heat1d::homogeneous(50, 0.0, init)?;
    let mesh = TimeMesh::geometric(1.0, 30, 3.5)?;
    let traj = integrate(
        &free,
        &mesh,
        StartScheme::BackwardEuler,
        Mode::Linear,
        &SolverConfig::default(),
    )?;
    let energy = energy_sequence(&traj, &free, 3.5)?;
    let monotone = energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    println!(
        "r = 3.5: E^1 = {:.4e}, E^N = {:.4e}, nonincreasing {monotone}, |U^N| = {:.3e}",
        energy[0],
        energy[energy.len() - 1],
        free.h_norm(traj.final_state())
    );
    Ok(())
}
