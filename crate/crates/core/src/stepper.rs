//! Variable step-size BDF2 stepping.
//!
//! For `n >= 2` the scheme reads
//!
//! ```text
//! a_n U^n - b_n U^{n-1} + c_n U^{n-2} + (A + B) U^n = f^n
//! a_n = (1 + s_n) / k_n,  b_n = (1 + r_n) / k_n,  c_n = r_n s_n / k_n
//! ```
//!
//! and `U^1` comes from one trapezoidal or backward Euler step. Every implicit
//! solve goes through [`ParabolicProblem::solve_shifted`]; semilinear steps
//! wrap it in a fixed-point iteration.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::problems::{apply_full_operator, ParabolicProblem};
use crate::state::StateVector;

/// Relative residual above which a linear step is reported as failed.
pub const LINEAR_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Version tag written into binary state dumps.
pub const STATE_DUMP_VERSION: u64 = 1;

/// How `U^1` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StartScheme {
    Trapezoidal,
    BackwardEuler,
}

impl StartScheme {
    pub fn label(self) -> &'static str {
        match self {
            StartScheme::Trapezoidal => "TF",
            StartScheme::BackwardEuler => "BE",
        }
    }
}

impl std::str::FromStr for StartScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tf" | "trapezoidal" => Ok(StartScheme::Trapezoidal),
            "be" | "backward_euler" | "backward-euler" => Ok(StartScheme::BackwardEuler),
            other => Err(Error::Parse(format!("unknown start scheme {other:?}"))),
        }
    }
}

/// Whether the forcing may depend on the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Linear,
    Semilinear,
}

/// Fixed-point iteration controls for semilinear steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance on the H-norm of successive iterate differences.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100,
        }
    }
}

/// Coefficients of the variable-step BDF2 difference, all in 1/time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bdf2Coefficients {
    pub lead: f64,
    pub mid: f64,
    pub tail: f64,
}

impl Bdf2Coefficients {
    /// Coefficients for step `k` and ratio `r`. `r = 0` gives backward Euler.
    pub fn new(step: f64, ratio: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size must be positive, got {step}"
            )));
        }
        if !(ratio.is_finite() && ratio >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step ratio must be nonnegative, got {ratio}"
            )));
        }
        let s = ratio / (1.0 + ratio);
        Ok(Self {
            lead: (1.0 + s) / step,
            mid: (1.0 + ratio) / step,
            tail: ratio * s / step,
        })
    }

    /// Coefficients at mesh step `n >= 2`, using the stored weight `s_n`.
    pub fn for_step(mesh: &TimeMesh, n: usize) -> Self {
        let k = mesh.step(n);
        let r = mesh.ratio(n);
        let s = mesh.weight(n);
        Self {
            lead: (1.0 + s) / k,
            mid: (1.0 + r) / k,
            tail: r * s / k,
        }
    }

    pub fn backward_euler(step: f64) -> Result<Self> {
        Self::new(step, 0.0)
    }
}

/// `a U^n - b U^{n-1} + c U^{n-2}`.
pub fn divided_difference(
    coeffs: &Bdf2Coefficients,
    current: &StateVector,
    prev: &StateVector,
    prev2: &StateVector,
) -> Result<StateVector> {
    let mut out = StateVector::lin_comb(coeffs.lead, current, -coeffs.mid, prev)?;
    out.axpy(coeffs.tail, prev2)?;
    Ok(out)
}

/// Norm of `BDF2 difference - (k_n s_n ∂̄²U^n + ∂̄U^n)`.
///
/// The two sides agree algebraically; the residual measures rounding only.
pub fn decomposition_residual(
    step: f64,
    ratio: f64,
    current: &StateVector,
    prev: &StateVector,
    prev2: &StateVector,
    norm: impl Fn(&StateVector) -> f64,
) -> Result<f64> {
    let coeffs = Bdf2Coefficients::new(step, ratio)?;
    let lhs = divided_difference(&coeffs, current, prev, prev2)?;
    let s = ratio / (1.0 + ratio);
    // ∂̄U^n and ∂̄U^{n-1} = (U^{n-1} - U^{n-2}) / k_{n-1} with k_{n-1} = k_n / r_n
    let d_cur = current.sub(prev)?.scaled(1.0 / step);
    let d_prev = prev.sub(prev2)?.scaled(ratio / step);
    // k_n s_n ∂̄²U^n = s_n (∂̄U^n - ∂̄U^{n-1})
    let mut rhs = StateVector::lin_comb(s, &d_cur, -s, &d_prev)?;
    rhs.axpy(1.0, &d_cur)?;
    Ok(norm(&lhs.sub(&rhs)?))
}

/// Per-step solver record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverDiagnostics {
    pub step: usize,
    /// Fixed-point iterations (1 for linear solves).
    pub iterations: usize,
    /// H-norm of the residual of the discrete equation.
    pub residual: f64,
    pub linear_solves: usize,
}

/// `U^0 .. U^N` with the mesh they live on and per-step diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub mesh: TimeMesh,
    pub states: Vec<StateVector>,
    /// Diagnostics for steps `1..=N`.
    pub diagnostics: Vec<SolverDiagnostics>,
    pub start: StartScheme,
    pub mode: Mode,
}

impl Trajectory {
    pub fn state(&self, n: usize) -> &StateVector {
        &self.states[n]
    }

    pub fn n_steps(&self) -> usize {
        self.mesh.n_steps()
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory holds U^0")
    }

    /// CSV with columns `n,t,diag_iters,diag_residual`; row `n = 0` has zeros.
    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::from("n,t,diag_iters,diag_residual\n");
        out.push_str(&format!("0,{},0,0\n", self.mesh.time(0)));
        for d in &self.diagnostics {
            out.push_str(&format!(
                "{},{},{},{:e}\n",
                d.step,
                self.mesh.time(d.step),
                d.iterations,
                d.residual
            ));
        }
        out
    }

    /// Binary dump: three little-endian `u64` (`N+1`, state length, version)
    /// followed by the states as row-major little-endian `f64`.
    pub fn write_state_dump(&self, mut w: impl Write) -> Result<()> {
        let len = self.states.first().map_or(0, |s| s.len());
        for header in [self.states.len() as u64, len as u64, STATE_DUMP_VERSION] {
            w.write_all(&header.to_le_bytes())?;
        }
        for s in &self.states {
            for v in s.as_slice() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Read a dump written by [`Trajectory::write_state_dump`]; returns one row per state.
pub fn read_state_dump(mut r: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut word = [0u8; 8];
    let mut header = [0u64; 3];
    for h in &mut header {
        r.read_exact(&mut word)?;
        *h = u64::from_le_bytes(word);
    }
    let [rows, len, version] = header;
    if version != STATE_DUMP_VERSION {
        return Err(Error::Parse(format!(
            "unsupported state dump version {version}"
        )));
    }
    let mut out = Vec::with_capacity(rows as usize);
    for _ in 0..rows {
        let mut row = Vec::with_capacity(len as usize);
        for _ in 0..len {
            r.read_exact(&mut word)?;
            row.push(f64::from_le_bytes(word));
        }
        out.push(row);
    }
    Ok(out)
}

fn check_mode<P: ParabolicProblem + ?Sized>(problem: &P, mode: Mode) -> Result<()> {
    if mode == Mode::Linear && problem.forcing_depends_on_state() {
        return Err(Error::ModeMismatch(
            "problem has state-dependent forcing; use semilinear mode".into(),
        ));
    }
    Ok(())
}

/// Iterate `x <- map(x)` until successive iterates differ by at most the
/// tolerance in H-norm. With `single` set the map is applied exactly once.
fn fixed_point<P: ParabolicProblem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    guess: StateVector,
    single: bool,
    mut map: impl FnMut(&StateVector) -> Result<StateVector>,
) -> Result<(StateVector, usize)> {
    let mut current = guess;
    let max_it = config.max_iterations.max(1);
    let mut last_update = f64::INFINITY;
    for it in 1..=max_it {
        let next = map(&current)?;
        if single {
            return Ok((next, 1));
        }
        last_update = problem.h_norm(&next.sub(&current)?);
        if !last_update.is_finite() {
            return Err(Error::NonConvergence {
                iterations: it,
                residual: last_update,
            });
        }
        current = next;
        if last_update <= config.tolerance {
            return Ok((current, it));
        }
    }
    Err(Error::NonConvergence {
        iterations: max_it,
        residual: last_update,
    })
}

fn relative_check(residual: f64, scale: f64) -> Result<()> {
    let rel = if scale > 0.0 {
        residual / scale
    } else {
        residual
    };
    if !(rel <= LINEAR_RESIDUAL_TOLERANCE) {
        return Err(Error::LinearSolve(format!(
            "relative residual {rel:.3e} exceeds {LINEAR_RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Solve `a U + (A + B) U = f(t, U) + b U^{n-1} - c U^{n-2}` for `U`.
///
/// This is the common kernel of the BDF2 steps and of the backward Euler
/// start (coefficients with `r = 0`). `predictor` seeds the fixed-point
/// iteration in semilinear mode.
#[allow(clippy::too_many_arguments)]
pub fn implicit_solve<P: ParabolicProblem + ?Sized>(
    problem: &P,
    coeffs: &Bdf2Coefficients,
    t: f64,
    prev: &StateVector,
    prev2: &StateVector,
    predictor: StateVector,
    mode: Mode,
    config: &SolverConfig,
) -> Result<(StateVector, usize)> {
    check_mode(problem, mode)?;
    prev.ensure_conformable(prev2)?;
    let mut history = prev.scaled(coeffs.mid);
    history.axpy(-coeffs.tail, prev2)?;
    let single = mode == Mode::Linear || !problem.forcing_depends_on_state();
    let guess = if single { prev.clone() } else { predictor };
    fixed_point(problem, config, guess, single, |u| {
        let mut rhs = problem.forcing(t, u);
        rhs.axpy(1.0, &history)?;
        problem.solve_shifted(coeffs.lead, 1.0, &rhs)
    })
}

fn bdf_residual<P: ParabolicProblem + ?Sized>(
    problem: &P,
    coeffs: &Bdf2Coefficients,
    t: f64,
    u: &StateVector,
    prev: &StateVector,
    prev2: &StateVector,
) -> Result<(f64, f64)> {
    let mut rhs = problem.forcing(t, u);
    rhs.axpy(coeffs.mid, prev)?;
    rhs.axpy(-coeffs.tail, prev2)?;
    let mut lhs = apply_full_operator(problem, u);
    lhs.axpy(coeffs.lead, u)?;
    Ok((problem.h_norm(&lhs.sub(&rhs)?), problem.h_norm(&rhs)))
}

fn bdf_step<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    n: usize,
    prev: &StateVector,
    prev2: &StateVector,
    mode: Mode,
    config: &SolverConfig,
) -> Result<(StateVector, SolverDiagnostics)> {
    if n < 2 || n > mesh.n_steps() {
        return Err(Error::InvalidParameter(format!(
            "BDF2 step index {n} outside 2..={}",
            mesh.n_steps()
        )));
    }
    let coeffs = Bdf2Coefficients::for_step(mesh, n);
    let r = mesh.ratio(n);
    let predictor = StateVector::lin_comb(1.0 + r, prev, -r, prev2)?;
    let t = mesh.time(n);
    let (u, iterations) =
        implicit_solve(problem, &coeffs, t, prev, prev2, predictor, mode, config)?;
    let (residual, scale) = bdf_residual(problem, &coeffs, t, &u, prev, prev2)?;
    if mode == Mode::Linear || !problem.forcing_depends_on_state() {
        relative_check(residual, scale)?;
    }
    Ok((
        u,
        SolverDiagnostics {
            step: n,
            iterations,
            residual,
            linear_solves: iterations,
        },
    ))
}

/// One linear BDF2 step: `(a_n I + A + B) U^n = f(t^n) + b_n U^{n-1} - c_n U^{n-2}`.
pub fn step_linear<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    n: usize,
    prev: &StateVector,
    prev2: &StateVector,
) -> Result<(StateVector, SolverDiagnostics)> {
    bdf_step(
        problem,
        mesh,
        n,
        prev,
        prev2,
        Mode::Linear,
        &SolverConfig::default(),
    )
    .map_err(|e| e.at_step(n))
}

/// One semilinear BDF2 step, solved by fixed-point iteration against
/// `(a_n I + A)^{-1}` from the extrapolated predictor
/// `(1 + r_n) U^{n-1} - r_n U^{n-2}`.
pub fn step_semilinear<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    n: usize,
    prev: &StateVector,
    prev2: &StateVector,
    config: &SolverConfig,
) -> Result<(StateVector, SolverDiagnostics)> {
    bdf_step(problem, mesh, n, prev, prev2, Mode::Semilinear, config).map_err(|e| e.at_step(n))
}

/// Backward Euler start: `(U^1 - U^0) / k_1 + (A + B) U^1 = f(t^1, U^1)`.
///
/// Runs through [`implicit_solve`] with the `r = 0` coefficients.
pub fn start_backward_euler<P: ParabolicProblem + ?Sized>(
    problem: &P,
    step: f64,
    initial: &StateVector,
    mode: Mode,
    config: &SolverConfig,
) -> Result<(StateVector, SolverDiagnostics)> {
    let run = || -> Result<(StateVector, SolverDiagnostics)> {
        let coeffs = Bdf2Coefficients::backward_euler(step)?;
        let (u, iterations) = implicit_solve(
            problem,
            &coeffs,
            step,
            initial,
            initial,
            initial.clone(),
            mode,
            config,
        )?;
        let (residual, scale) = bdf_residual(problem, &coeffs, step, &u, initial, initial)?;
        if mode == Mode::Linear || !problem.forcing_depends_on_state() {
            relative_check(residual, scale)?;
        }
        Ok((
            u,
            SolverDiagnostics {
                step: 1,
                iterations,
                residual,
                linear_solves: iterations,
            },
        ))
    };
    run().map_err(|e| e.at_step(1))
}

/// Trapezoidal start: `(U^1 - U^0) / k_1 + (A + B)(U^1 + U^0) / 2 = (f^0 + f^1) / 2`.
///
/// The forcing is averaged like the states, `f^0 = f(0, U^0)` and
/// `f^1 = f(t^1, U^1)`; in semilinear mode `U^1` is found by fixed-point
/// iteration.
pub fn start_trapezoidal<P: ParabolicProblem + ?Sized>(
    problem: &P,
    step: f64,
    initial: &StateVector,
    mode: Mode,
    config: &SolverConfig,
) -> Result<(StateVector, SolverDiagnostics)> {
    let run = || -> Result<(StateVector, SolverDiagnostics)> {
        check_mode(problem, mode)?;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size must be positive, got {step}"
            )));
        }
        let shift = 1.0 / step;
        let op_initial = apply_full_operator(problem, initial);
        // U^0 / k - (A + B) U^0 / 2 + f^0 / 2
        let mut history = StateVector::lin_comb(shift, initial, -0.5, &op_initial)?;
        history.axpy(0.5, &problem.forcing(0.0, initial))?;
        let single = mode == Mode::Linear || !problem.forcing_depends_on_state();
        let (u, iterations) = fixed_point(problem, config, initial.clone(), single, |u| {
            let mut rhs = problem.forcing(step, u).scaled(0.5);
            rhs.axpy(1.0, &history)?;
            problem.solve_shifted(shift, 0.5, &rhs)
        })?;
        // residual of the scheme itself
        let f_end = problem.forcing(step, &u);
        let f = StateVector::lin_comb(0.5, &problem.forcing(0.0, initial), 0.5, &f_end)?;
        let mut lhs = u.sub(initial)?.scaled(shift);
        let avg = StateVector::lin_comb(0.5, &u, 0.5, initial)?;
        lhs.axpy(1.0, &apply_full_operator(problem, &avg))?;
        let residual = problem.h_norm(&lhs.sub(&f)?);
        if single {
            let mut rhs = f_end.scaled(0.5);
            rhs.axpy(1.0, &history)?;
            relative_check(residual, problem.h_norm(&rhs))?;
        }
        Ok((
            u,
            SolverDiagnostics {
                step: 1,
                iterations,
                residual,
                linear_solves: iterations,
            },
        ))
    };
    run().map_err(|e| e.at_step(1))
}

/// Integrate from `U^0 = problem.initial_state()` over the whole mesh.
pub fn integrate<P: ParabolicProblem + ?Sized>(
    problem: &P,
    mesh: &TimeMesh,
    start: StartScheme,
    mode: Mode,
    config: &SolverConfig,
) -> Result<Trajectory> {
    check_mode(problem, mode)?;
    let u0 = problem.initial_state();
    if u0.grid() != problem.grid() {
        return Err(Error::ShapeMismatch {
            expected: problem.grid().to_string(),
            found: u0.grid().to_string(),
        });
    }
    let n_steps = mesh.n_steps();
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut diagnostics = Vec::with_capacity(n_steps);

    let k1 = mesh.first_step();
    let (u1, d1) = match start {
        StartScheme::Trapezoidal => start_trapezoidal(problem, k1, &u0, mode, config)?,
        StartScheme::BackwardEuler => start_backward_euler(problem, k1, &u0, mode, config)?,
    };
    states.push(u0);
    states.push(u1);
    diagnostics.push(d1);

    for n in 2..=n_steps {
        let (u, d) = bdf_step(
            problem,
            mesh,
            n,
            &states[n - 1],
            &states[n - 2],
            mode,
            config,
        )
        .map_err(|e| e.at_step(n))?;
        states.push(u);
        diagnostics.push(d);
    }
    Ok(Trajectory {
        mesh: mesh.clone(),
        states,
        diagnostics,
        start,
        mode,
    })
}
