//! A user-defined problem: two decoupled modes `u' + diag(1, 50) u = 0` with
//! a skew coupling as the lower-order term.

use vsbdf2::mesh::TimeMesh;
use vsbdf2::problems::ParabolicProblem;
use vsbdf2::state::{Grid, StateVector};
use vsbdf2::stepper::{integrate, Mode, SolverConfig, StartScheme};

struct TwoModes {
    coupling: f64,
}

const RATES: [f64; 2] = [1.0, 50.0];

impl ParabolicProblem for TwoModes {
    fn grid(&self) -> Grid {
        Grid::Interior1d { interior: 2 }
    }

    fn apply_elliptic(&self, v: &StateVector) -> StateVector {
        StateVector::from_fn(v.grid(), |i| RATES[i] * v.as_slice()[i])
    }

    // B = [[0, c], [-c, 0]], |B u| = c |u|
    fn apply_lower_order(&self, v: &StateVector) -> StateVector {
        let u = v.as_slice();
        StateVector::new(v.grid(), vec![self.coupling * u[1], -self.coupling * u[0]]).unwrap()
    }

    fn forcing(&self, _t: f64, state: &StateVector) -> StateVector {
        state.zeros_like()
    }

    fn solve_shifted(
        &self,
        shift: f64,
        weight: f64,
        rhs: &StateVector,
    ) -> vsbdf2::Result<StateVector> {
        // 2x2 system by Cramer's rule
        let (a, d) = (shift + weight * RATES[0], shift + weight * RATES[1]);
        let (b, c) = (weight * self.coupling, -weight * self.coupling);
        let det = a * d - b * c;
        let r = rhs.as_slice();
        StateVector::new(
            rhs.grid(),
            vec![(d * r[0] - b * r[1]) / det, (a * r[1] - c * r[0]) / det],
        )
    }

    fn h_inner(&self, a: &StateVector, b: &StateVector) -> f64 {
        a.dot(b).unwrap()
    }

    fn v_seminorm(&self, v: &StateVector) -> f64 {
        self.energy_norm(v)
    }

    fn initial_state(&self) -> StateVector {
        StateVector::new(self.grid(), vec![1.0, 1.0]).unwrap()
    }

    fn gamma_bound(&self, _t: f64) -> f64 {
        self.coupling
    }
}

fn main() -> vsbdf2::Result<()> {
    let problem = TwoModes { coupling: 3.0 };
    for n in [20, 40, 80] {
        let mesh = TimeMesh::graded(2.0, n, 2.0)?;
        let traj = integrate(
            &problem,
            &mesh,
            StartScheme::Trapezoidal,
            Mode::Linear,
            &SolverConfig::default(),
        )?;
        let u = traj.final_state().as_slice();
        let worst = traj
            .diagnostics
            .iter()
            .map(|d| d.residual)
            .fold(0.0, f64::max);
        println!(
            "N={n:<3} U^N = ({:+.6e}, {:+.6e})  max residual {worst:.1e}",
            u[0], u[1]
        );
    }
    Ok(())
}
