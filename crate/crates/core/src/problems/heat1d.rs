use crate::error::{Error, Result};
use crate::state::{Grid, StateVector};
use crate::tridiag;

use super::ParabolicProblem;

#[derive(Clone, Debug)]
enum Source {
    /// `u(t, x) = x (1 - x) e^{-t}` with the matching forcing.
    Manufactured,
    /// `f = 0` with prescribed interior initial values.
    Homogeneous(Vec<f64>),
}

/// `u_t = u_xx + b u + f` on `(0, 1)` with homogeneous Dirichlet data,
/// discretised by second-order central differences on `M` cells.
///
/// In operator form `A = -D_xx` (SPD tridiagonal, `2/Δx²` on the diagonal)
/// and `B = -b I`. States hold the `M - 1` interior values.
#[derive(Clone, Debug)]
pub struct Heat1d {
    cells: usize,
    b: f64,
    dx: f64,
    source: Source,
}

impl Heat1d {
    /// Manufactured-solution problem with exact solution `x (1 - x) e^{-t}`.
    ///
    /// The central difference is exact on quadratics, so the grid samples of
    /// the exact solution satisfy the semi-discrete system exactly and the
    /// only error left is the time discretisation error.
    pub fn new(cells: usize, b: f64) -> Result<Self> {
        Self::build(cells, b, Source::Manufactured)
    }

    /// Unforced problem (`f = 0`) started from `initial` (interior values).
    pub fn homogeneous(cells: usize, b: f64, initial: Vec<f64>) -> Result<Self> {
        if initial.len() + 1 != cells {
            return Err(Error::ShapeMismatch {
                expected: format!("{} interior values", cells.saturating_sub(1)),
                found: format!("{} values", initial.len()),
            });
        }
        Self::build(cells, b, Source::Homogeneous(initial))
    }

    fn build(cells: usize, b: f64, source: Source) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidParameter(format!(
                "heat1d needs M >= 2 cells, got {cells}"
            )));
        }
        if !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "b must be finite, got {b}"
            )));
        }
        Ok(Self {
            cells,
            b,
            dx: 1.0 / cells as f64,
            source,
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn coefficient_b(&self) -> f64 {
        self.b
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    fn interior(&self) -> usize {
        self.cells - 1
    }

    /// Interior grid points `x_i = i Δx`, `i = 1..M-1`.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.cells).map(move |i| i as f64 * self.dx)
    }

    /// Smallest eigenvalue of the discrete `A`, `4/Δx² sin²(π Δx / 2)`.
    pub fn lambda_min(&self) -> f64 {
        let s = (std::f64::consts::PI * self.dx / 2.0).sin();
        4.0 * s * s / (self.dx * self.dx)
    }

    fn sample(&self, f: impl Fn(f64) -> f64) -> StateVector {
        let values = self.points().map(f).collect();
        StateVector::new(self.grid(), values).expect("grid length")
    }
}

impl ParabolicProblem for Heat1d {
    fn grid(&self) -> Grid {
        Grid::Interior1d {
            interior: self.interior(),
        }
    }

    fn apply_elliptic(&self, v: &StateVector) -> StateVector {
        let u = v.as_slice();
        let n = u.len();
        let h2 = self.dx * self.dx;
        StateVector::from_fn(v.grid(), |i| {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            (2.0 * u[i] - left - right) / h2
        })
    }

    fn apply_lower_order(&self, v: &StateVector) -> StateVector {
        v.scaled(-self.b)
    }

    fn forcing(&self, t: f64, _state: &StateVector) -> StateVector {
        match &self.source {
            Source::Manufactured => {
                // f = u_t - u_xx - b u with u = x(1-x)e^{-t}
                let decay = (-t).exp();
                self.sample(|x| (-1.0 - self.b) * x * (1.0 - x) * decay + 2.0 * decay)
            }
            Source::Homogeneous(_) => StateVector::zeros(self.grid()),
        }
    }

    fn solve_shifted(&self, shift: f64, weight: f64, rhs: &StateVector) -> Result<StateVector> {
        if rhs.grid() != self.grid() {
            return Err(Error::ShapeMismatch {
                expected: self.grid().to_string(),
                found: rhs.grid().to_string(),
            });
        }
        let h2 = self.dx * self.dx;
        let diag = shift + weight * (2.0 / h2 - self.b);
        let off = -weight / h2;
        let mut x = rhs.clone();
        tridiag::solve_toeplitz(diag, off, x.as_mut_slice())?;
        Ok(x)
    }

    fn h_inner(&self, a: &StateVector, b: &StateVector) -> f64 {
        self.dx
            * a.as_slice()
                .iter()
                .zip(b.as_slice())
                .map(|(x, y)| x * y)
                .sum::<f64>()
    }

    /// `(Σ_{i=1}^{M} Δx |(v_i - v_{i-1}) / Δx|²)^{1/2}` with `v_0 = v_M = 0`.
    fn v_seminorm(&self, v: &StateVector) -> f64 {
        let u = v.as_slice();
        let n = u.len();
        let mut sum = 0.0;
        for i in 0..=n {
            let right = if i < n { u[i] } else { 0.0 };
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let d = (right - left) / self.dx;
            sum += self.dx * d * d;
        }
        sum.sqrt()
    }

    fn initial_state(&self) -> StateVector {
        match &self.source {
            Source::Manufactured => self.sample(|x| x * (1.0 - x)),
            Source::Homogeneous(init) => {
                StateVector::new(self.grid(), init.clone()).expect("checked at construction")
            }
        }
    }

    fn exact_state(&self, t: f64) -> Option<StateVector> {
        match self.source {
            Source::Manufactured => {
                let decay = (-t).exp();
                Some(self.sample(|x| x * (1.0 - x) * decay))
            }
            Source::Homogeneous(_) => None,
        }
    }

    /// `|b u| <= |b| |u| <= |b| λ_min^{-1/2} ||u||`.
    fn gamma_bound(&self, _t: f64) -> f64 {
        self.b.abs() / self.lambda_min().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::apply_full_operator;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    #[test]
    fn second_difference_of_quadratic_is_exact() {
        let p = Heat1d::new(10, 1.0).unwrap();
        let av = p.apply_elliptic(&p.initial_state());
        for v in av.as_slice() {
            assert!((v - 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn shifted_solve_round_trip() {
        let p = Heat1d::new(100, 1.0).unwrap();
        let x = StateVector::from_fn(p.grid(), |i| ((i * 7919) % 101) as f64 / 50.0 - 1.0);
        for &theta in &[0.5, 1.0] {
            let mut rhs = x.scaled(10.0);
            rhs.axpy(theta, &apply_full_operator(&p, &x)).unwrap();
            let back = p.solve_shifted(10.0, theta, &rhs).unwrap();
            let err = back.sub(&x).unwrap().max_abs();
            assert!(err <= 1e-10 * x.max_abs(), "theta={theta} err={err}");
        }
    }

    #[test]
    fn shifted_solve_matches_dense_three_by_three() {
        // M = 4: A = 16 [[2,-1,0],[-1,2,-1],[0,-1,2]], B = -b I, σ = 1, θ = 1.
        for &b in &[0.0, 1.0, -2.5] {
            let p = Heat1d::new(4, b).unwrap();
            let mut dense = DMatrix::<f64>::zeros(3, 3);
            for i in 0..3 {
                dense[(i, i)] = 1.0 + 32.0 - b;
                if i > 0 {
                    dense[(i, i - 1)] = -16.0;
                    dense[(i - 1, i)] = -16.0;
                }
            }
            let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
            let expected = dense.lu().solve(&e1).unwrap();
            let rhs = StateVector::new(p.grid(), vec![1.0, 0.0, 0.0]).unwrap();
            let got = p.solve_shifted(1.0, 1.0, &rhs).unwrap();
            for i in 0..3 {
                assert!((got.as_slice()[i] - expected[i]).abs() < 1e-15);
            }
        }
        // b = 1 cancels the shift: x = A^{-1} e1 = (3, 2, 1) / 64.
        let p = Heat1d::new(4, 1.0).unwrap();
        let rhs = StateVector::new(p.grid(), vec![1.0, 0.0, 0.0]).unwrap();
        let got = p.solve_shifted(1.0, 1.0, &rhs).unwrap();
        assert!((got.as_slice()[0] - 3.0 / 64.0).abs() < 1e-16);
        assert!((got.as_slice()[1] - 2.0 / 64.0).abs() < 1e-16);
        assert!((got.as_slice()[2] - 1.0 / 64.0).abs() < 1e-16);
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(Heat1d::new(1, 1.0).is_err());
        assert!(Heat1d::homogeneous(5, 0.0, vec![0.0; 3]).is_err());
    }

    #[test]
    fn forcing_makes_exact_samples_a_semi_discrete_solution() {
        let p = Heat1d::new(16, 1.3).unwrap();
        let t = 0.7;
        let u = p.exact_state(t).unwrap();
        let ut = u.scaled(-1.0);
        let lhs = ut.add(&apply_full_operator(&p, &u)).unwrap();
        let res = lhs.sub(&p.forcing(t, &u)).unwrap();
        assert!(res.max_abs() < 1e-11);
    }

    #[test]
    fn seminorm_equals_energy_norm() {
        let p = Heat1d::new(32, 0.0).unwrap();
        let v = StateVector::from_fn(p.grid(), |i| (0.3 * i as f64).cos() + 0.1 * i as f64);
        let a = p.v_seminorm(&v);
        let b = p.energy_norm(&v);
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn gamma_bound_controls_lower_order_term() {
        let p = Heat1d::new(50, 2.0).unwrap();
        // The lowest discrete mode attains the bound.
        let v = StateVector::from_fn(p.grid(), |i| {
            (std::f64::consts::PI * (i + 1) as f64 * p.dx()).sin()
        });
        let lhs = p.h_norm(&p.apply_lower_order(&v));
        let rhs = p.gamma_bound(0.0) * p.energy_norm(&v);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    proptest! {
        #[test]
        fn elliptic_is_symmetric_and_positive(
            x in prop::collection::vec(-1.0f64..1.0, 15),
            y in prop::collection::vec(-1.0f64..1.0, 15),
        ) {
            let p = Heat1d::new(16, 1.0).unwrap();
            let x = StateVector::new(p.grid(), x).unwrap();
            let y = StateVector::new(p.grid(), y).unwrap();
            let l = p.h_inner(&p.apply_elliptic(&x), &y);
            let r = p.h_inner(&x, &p.apply_elliptic(&y));
            prop_assert!((l - r).abs() <= 1e-12 * (1.0 + l.abs()));
            prop_assert!((p.h_inner(&x, &y) - p.h_inner(&y, &x)).abs() <= 1e-15);
            if x.max_abs() > 1e-6 {
                let q = p.h_inner(&p.apply_elliptic(&x), &x);
                prop_assert!(q > 0.0);
                let s = p.v_seminorm(&x);
                prop_assert!((q - s * s).abs() <= 1e-10 * q);
            }
        }
    }
}
