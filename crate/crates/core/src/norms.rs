//! Discrete error functionals, consistency errors and observed orders.

use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::problems::ParabolicProblem;
use crate::state::StateVector;
use crate::stepper::{divided_difference, Bdf2Coefficients, Trajectory};

/// The four error functionals of one run plus the per-step error norms.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub scheme: String,
    pub n_steps: usize,
    /// `max_{1<=n<=N} |e^n|_V`
    pub linf_v: f64,
    /// `(Σ_{n=2}^N k_n s_n |(e^n - e^{n-1}) / k_n|²)^{1/2}`
    pub l2_hh: f64,
    /// `max_{1<=n<=N} |e^n|`
    pub linf_h: f64,
    /// `(Σ_{n=2}^N k_n |e^n|_V²)^{1/2}`
    pub l2_v: f64,
    /// `|e^n|` for `n = 0..=N`.
    pub h_errors: Vec<f64>,
    /// `|e^n|_V` for `n = 0..=N`.
    pub v_errors: Vec<f64>,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{:e},{:e},{:e}",
            self.scheme, self.n_steps, self.linf_v, self.l2_hh, self.linf_h, self.l2_v
        )
    }

    /// The functionals in the fixed order `[linf_v, l2_hh, linf_h, l2_v]`.
    pub fn functionals(&self) -> [f64; 4] {
        [self.linf_v, self.l2_hh, self.linf_h, self.l2_v]
    }
}

/// Error report against `problem.exact_state`.
pub fn error_report<P: ParabolicProblem + ?Sized>(
    trajectory: &Trajectory,
    problem: &P,
    scheme: &str,
) -> Result<ErrorReport> {
    if problem.exact_state(0.0).is_none() {
        return Err(Error::MissingExactSolution);
    }
    error_report_with(trajectory, problem, scheme, |t| {
        problem.exact_state(t).ok_or(Error::MissingExactSolution)
    })
}

/// Error report against an explicit exact solution.
pub fn error_report_with<P: ParabolicProblem + ?Sized>(
    trajectory: &Trajectory,
    problem: &P,
    scheme: &str,
    exact: impl Fn(f64) -> Result<StateVector>,
) -> Result<ErrorReport> {
    let mesh = &trajectory.mesh;
    let errors = trajectory
        .states
        .iter()
        .enumerate()
        .map(|(n, u)| u.sub(&exact(mesh.time(n))?))
        .collect::<Result<Vec<_>>>()?;
    report_from_errors(problem, mesh, &errors, scheme)
}

/// Functionals of an arbitrary error sequence `e^0 .. e^N`.
pub fn report_from_errors<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    errors: &[StateVector],
    scheme: &str,
) -> Result<ErrorReport> {
    let n_steps = mesh.n_steps();
    if errors.len() != n_steps + 1 {
        return Err(Error::ShapeMismatch {
            expected: format!("{} error vectors", n_steps + 1),
            found: format!("{}", errors.len()),
        });
    }
    let h_errors: Vec<f64> = errors.iter().map(|e| problem.h_norm(e)).collect();
    let v_errors: Vec<f64> = errors.iter().map(|e| problem.v_seminorm(e)).collect();
    let max_from_one = |v: &[f64]| v[1..].iter().copied().fold(0.0, f64::max);

    let mut hh = 0.0;
    let mut l2v = 0.0;
    for n in 2..=n_steps {
        let k = mesh.step(n);
        let d = problem.h_norm(&errors[n].sub(&errors[n - 1])?) / k;
        hh += k * mesh.weight(n) * d * d;
        l2v += k * v_errors[n] * v_errors[n];
    }
    Ok(ErrorReport {
        scheme: scheme.to_string(),
        n_steps,
        linf_v: max_from_one(&v_errors),
        l2_hh: hh.sqrt(),
        linf_h: max_from_one(&h_errors),
        l2_v: l2v.sqrt(),
        h_errors,
        v_errors,
    })
}

/// `(Σ_{j=first}^{last-1} k_j s_j |(U^j - U^{j-1}) / k_j|²)^{1/2}`, `first >= 2`.
pub fn hh_norm<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    states: &[StateVector],
    first: usize,
    last: usize,
) -> Result<f64> {
    if first < 2 || last > mesh.n_steps() + 1 || last > states.len() || first > last {
        return Err(Error::InvalidParameter(format!(
            "index range {first}..{last} invalid for {} steps",
            mesh.n_steps()
        )));
    }
    let mut sum = 0.0;
    for j in first..last {
        let k = mesh.step(j);
        let d = problem.h_norm(&states[j].sub(&states[j - 1])?) / k;
        sum += k * mesh.weight(j) * d * d;
    }
    Ok(sum.sqrt())
}

/// BDF2 difference of the exact samples minus `u'(t^n)`, `n >= 2`.
pub fn consistency_error_d2(
    u: impl Fn(f64) -> StateVector,
    du: impl Fn(f64) -> StateVector,
    mesh: &TimeMesh,
    n: usize,
) -> Result<StateVector> {
    if n < 2 || n > mesh.n_steps() {
        return Err(Error::InvalidParameter(format!(
            "d2 needs 2 <= n <= {}, got {n}",
            mesh.n_steps()
        )));
    }
    let c = Bdf2Coefficients::for_step(mesh, n);
    let diff = divided_difference(
        &c,
        &u(mesh.time(n)),
        &u(mesh.time(n - 1)),
        &u(mesh.time(n - 2)),
    )?;
    diff.sub(&du(mesh.time(n)))
}

/// `(u(t^n) - u(t^{n-1})) / k_n - u'(t^n)`, `n >= 1`.
pub fn consistency_error_d1(
    u: impl Fn(f64) -> StateVector,
    du: impl Fn(f64) -> StateVector,
    mesh: &TimeMesh,
    n: usize,
) -> Result<StateVector> {
    if n < 1 || n > mesh.n_steps() {
        return Err(Error::InvalidParameter(format!(
            "d1 needs 1 <= n <= {}, got {n}",
            mesh.n_steps()
        )));
    }
    let diff = u(mesh.time(n))
        .sub(&u(mesh.time(n - 1)))?
        .scaled(1.0 / mesh.step(n));
    diff.sub(&du(mesh.time(n)))
}

/// `log2(coarse / fine)`.
pub fn observed_order(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) || !coarse.is_finite() || !fine.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "orders need positive finite errors, got {coarse} and {fine}"
        )));
    }
    Ok((coarse / fine).log2())
}
