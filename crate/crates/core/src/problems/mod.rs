//! Abstract parabolic problem and the concrete reference problems.
//!
//! A problem is the semi-discrete system
//!
//! ```text
//! u' + A u + B u = f(t)          (linear mode)
//! u' + A u       = f(t, u)       (semilinear mode, B = 0)
//! ```
//!
//! on a discrete space H with inner product [`ParabolicProblem::h_inner`].
//! `A` is symmetric positive (semi)definite; the stepper only ever needs to
//! apply the operators and to solve shifted systems `(σ I + θ (A + B)) x = b`.

mod heat1d;
mod scalar;
mod semilinear2d;

pub use heat1d::Heat1d;
pub use scalar::ScalarOde;
pub use semilinear2d::Semilinear2d;

use crate::error::Result;
use crate::state::{Grid, StateVector};

pub trait ParabolicProblem: Send + Sync {
    fn grid(&self) -> Grid;

    /// `A v`.
    fn apply_elliptic(&self, v: &StateVector) -> StateVector;

    /// `B v`; zero unless overridden.
    fn apply_lower_order(&self, v: &StateVector) -> StateVector {
        v.zeros_like()
    }

    /// Right-hand side. Linear problems ignore `state`.
    fn forcing(&self, t: f64, state: &StateVector) -> StateVector;

    /// Whether [`ParabolicProblem::forcing`] depends on the state (semilinear).
    fn forcing_depends_on_state(&self) -> bool {
        false
    }

    /// Solve `(shift I + weight (A + B)) x = rhs`.
    fn solve_shifted(&self, shift: f64, weight: f64, rhs: &StateVector) -> Result<StateVector>;

    /// Discrete L² inner product.
    fn h_inner(&self, a: &StateVector, b: &StateVector) -> f64;

    /// Discrete H¹ seminorm used by the error functionals.
    fn v_seminorm(&self, v: &StateVector) -> f64;

    /// Energy norm `(A v, v)^{1/2}`, the V-norm of the stability theory.
    fn energy_norm(&self, v: &StateVector) -> f64 {
        self.h_inner(&self.apply_elliptic(v), v).max(0.0).sqrt()
    }

    fn h_norm(&self, v: &StateVector) -> f64 {
        self.h_inner(v, v).max(0.0).sqrt()
    }

    fn initial_state(&self) -> StateVector;

    fn exact_state(&self, _t: f64) -> Option<StateVector> {
        None
    }

    /// Estimate of `γ(t)` in `|B u| <= γ(t) ||u||` (linear) or the local
    /// Lipschitz bound of `f(t, ·)` (semilinear).
    fn gamma_bound(&self, t: f64) -> f64;
}

/// `(A + B) v`.
pub fn apply_full_operator<P: ParabolicProblem + ?Sized>(
    problem: &P,
    v: &StateVector,
) -> StateVector {
    let mut out = problem.apply_elliptic(v);
    let lower = problem.apply_lower_order(v);
    out.axpy(1.0, &lower).expect("operators preserve the grid");
    out
}
