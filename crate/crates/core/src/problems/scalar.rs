use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::state::{Grid, StateVector};

use super::ParabolicProblem;

type ForcingFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type ExactFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scalar test equation `u' + λ u = f(t, u)`, `u(0) = u0`.
///
/// `A = λ` (so `λ >= 0` for the energy-norm identities to make sense), `B = 0`.
#[derive(Clone)]
pub struct ScalarOde {
    lambda: f64,
    initial: f64,
    forcing: Option<ForcingFn>,
    state_dependent: bool,
    exact: Option<ExactFn>,
    gamma: f64,
}

impl fmt::Debug for ScalarOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarOde")
            .field("lambda", &self.lambda)
            .field("initial", &self.initial)
            .field("state_dependent", &self.state_dependent)
            .finish()
    }
}

impl ScalarOde {
    /// Unforced `u' + λ u = 0`.
    pub fn new(lambda: f64, initial: f64) -> Self {
        Self {
            lambda,
            initial,
            forcing: None,
            state_dependent: false,
            exact: None,
            gamma: 0.0,
        }
    }

    /// Time-dependent forcing `f(t)`.
    pub fn with_forcing(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = Some(Arc::new(move |t, _| f(t)));
        self.state_dependent = false;
        self
    }

    /// State-dependent forcing `f(t, u)` (semilinear mode).
    pub fn with_nonlinear_forcing(
        mut self,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.forcing = Some(Arc::new(f));
        self.state_dependent = true;
        self
    }

    pub fn with_exact(mut self, u: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(u));
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl ParabolicProblem for ScalarOde {
    fn grid(&self) -> Grid {
        Grid::Scalar
    }

    fn apply_elliptic(&self, v: &StateVector) -> StateVector {
        v.scaled(self.lambda)
    }

    fn forcing(&self, t: f64, state: &StateVector) -> StateVector {
        match &self.forcing {
            Some(f) => StateVector::scalar(f(t, state.value())),
            None => StateVector::scalar(0.0),
        }
    }

    fn forcing_depends_on_state(&self) -> bool {
        self.state_dependent
    }

    fn solve_shifted(&self, shift: f64, weight: f64, rhs: &StateVector) -> Result<StateVector> {
        let denom = shift + weight * self.lambda;
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::LinearSolve(format!(
                "singular scalar system: {shift} + {weight} * {}",
                self.lambda
            )));
        }
        Ok(StateVector::scalar(rhs.value() / denom))
    }

    fn h_inner(&self, a: &StateVector, b: &StateVector) -> f64 {
        a.value() * b.value()
    }

    fn v_seminorm(&self, v: &StateVector) -> f64 {
        self.lambda.abs().sqrt() * v.value().abs()
    }

    fn initial_state(&self) -> StateVector {
        StateVector::scalar(self.initial)
    }

    fn exact_state(&self, t: f64) -> Option<StateVector> {
        self.exact.as_ref().map(|u| StateVector::scalar(u(t)))
    }

    fn gamma_bound(&self, _t: f64) -> f64 {
        self.gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_solve_and_norms() {
        let p = ScalarOde::new(4.0, 1.0).with_gamma(0.5);
        let x = p
            .solve_shifted(2.0, 0.5, &StateVector::scalar(8.0))
            .unwrap();
        assert_eq!(x.value(), 2.0);
        assert_eq!(p.v_seminorm(&StateVector::scalar(-3.0)), 6.0);
        assert_eq!(p.energy_norm(&StateVector::scalar(-3.0)), 6.0);
        assert_eq!(p.gamma_bound(1.0), 0.5);
        assert!(ScalarOde::new(0.0, 1.0)
            .solve_shifted(0.0, 1.0, &StateVector::scalar(1.0))
            .is_err());
    }

    #[test]
    fn forcing_variants() {
        let s = StateVector::scalar(2.0);
        assert_eq!(ScalarOde::new(1.0, 0.0).forcing(1.0, &s).value(), 0.0);
        let p = ScalarOde::new(1.0, 0.0).with_forcing(|t| 3.0 * t);
        assert!(!p.forcing_depends_on_state());
        assert_eq!(p.forcing(2.0, &s).value(), 6.0);
        let p = ScalarOde::new(1.0, 0.0).with_nonlinear_forcing(|t, u| t * u);
        assert!(p.forcing_depends_on_state());
        assert_eq!(p.forcing(3.0, &s).value(), 6.0);
        assert!(p.exact_state(0.0).is_none());
    }
}
