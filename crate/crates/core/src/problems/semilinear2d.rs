use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::state::{Grid, StateVector};

use super::ParabolicProblem;

/// `u_t = ε Δu + u - u³ + g(t, x, y)` on the periodic unit square.
///
/// `A = -εΔ` is realised by Fourier collocation on an `M × M` grid, so it is
/// diagonal in the discrete Fourier basis with symbol `ε 4π² (p² + q²)`.
/// `g` is manufactured from the exact solution
/// `u = sin(2πx) cos(2πy) e^{-π² t}`.
pub struct Semilinear2d {
    m: usize,
    epsilon: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    symbol: Vec<f64>,
    /// `sin(2πx) cos(2πy)` on the grid.
    pattern: Vec<f64>,
}

impl fmt::Debug for Semilinear2d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semilinear2d")
            .field("m", &self.m)
            .field("epsilon", &self.epsilon)
            .finish()
    }
}

/// Signed wavenumber of FFT bin `i` (Nyquist bin mapped to `+m/2`).
fn wavenumber(i: usize, m: usize) -> f64 {
    if i <= m / 2 {
        i as f64
    } else {
        i as f64 - m as f64
    }
}

impl Semilinear2d {
    pub fn new(m: usize, epsilon: f64) -> Result<Self> {
        if m < 4 || !m.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "semilinear2d needs an even M >= 4, got {m}"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diffusion must be positive, got {epsilon}"
            )));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let mut symbol = vec![0.0; m * m];
        for i in 0..m {
            let p = wavenumber(i, m);
            for j in 0..m {
                let q = wavenumber(j, m);
                symbol[i * m + j] = epsilon * 4.0 * PI * PI * (p * p + q * q);
            }
        }
        let h = 1.0 / m as f64;
        let pattern = (0..m * m)
            .map(|k| Self::exact_value(0.0, (k / m) as f64 * h, (k % m) as f64 * h))
            .collect();
        Ok(Self {
            m,
            epsilon,
            forward,
            inverse,
            symbol,
            pattern,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    fn sample(&self, f: impl Fn(f64, f64) -> f64) -> StateVector {
        let h = self.h();
        let m = self.m;
        StateVector::from_fn(self.grid(), |k| f((k / m) as f64 * h, (k % m) as f64 * h))
    }

    /// Exact solution `sin(2πx) cos(2πy) e^{-π² t}`.
    pub fn exact_value(t: f64, x: f64, y: f64) -> f64 {
        (2.0 * PI * x).sin() * (2.0 * PI * y).cos() * (-PI * PI * t).exp()
    }

    /// `g = u_t - εΔu - u + u³` in closed form.
    pub fn source_value(&self, t: f64, x: f64, y: f64) -> f64 {
        let u = Self::exact_value(t, x, y);
        let u_t = -PI * PI * u;
        let minus_eps_lap = self.epsilon * 8.0 * PI * PI * u;
        u_t + minus_eps_lap - u + u * u * u
    }

    /// Time derivative of the exact solution on the grid.
    pub fn exact_derivative(&self, t: f64) -> StateVector {
        self.sample(|x, y| -PI * PI * Self::exact_value(t, x, y))
    }

    fn fft2(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // rows (contiguous in y)
        for row in data.chunks_exact_mut(m) {
            fft.process_with_scratch(row, &mut scratch);
        }
        // columns
        let mut col = vec![Complex64::default(); m];
        for j in 0..m {
            for i in 0..m {
                col[i] = data[i * m + j];
            }
            fft.process_with_scratch(&mut col, &mut scratch);
            for i in 0..m {
                data[i * m + j] = col[i];
            }
        }
    }

    /// Apply a Fourier multiplier `multiplier(symbol)` to a real grid function.
    fn apply_multiplier(&self, v: &StateVector, multiplier: impl Fn(f64) -> f64) -> StateVector {
        let mut data: Vec<Complex64> = v
            .as_slice()
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        self.fft2(&mut data, &self.forward);
        for (c, &s) in data.iter_mut().zip(&self.symbol) {
            *c *= multiplier(s);
        }
        self.fft2(&mut data, &self.inverse);
        let norm = 1.0 / (self.m * self.m) as f64;
        StateVector::from_fn(v.grid(), |k| data[k].re * norm)
    }
}

impl ParabolicProblem for Semilinear2d {
    fn grid(&self) -> Grid {
        Grid::Periodic2d { m: self.m }
    }

    fn apply_elliptic(&self, v: &StateVector) -> StateVector {
        self.apply_multiplier(v, |s| s)
    }

    /// `f(t, u) = u - u³ + g(t)`.
    fn forcing(&self, t: f64, state: &StateVector) -> StateVector {
        let decay = (-PI * PI * t).exp();
        let linear = -PI * PI + self.epsilon * 8.0 * PI * PI - 1.0;
        StateVector::from_fn(self.grid(), |k| {
            let exact = self.pattern[k] * decay;
            let g = linear * exact + exact * exact * exact;
            let u = state.as_slice()[k];
            u - u * u * u + g
        })
    }

    fn forcing_depends_on_state(&self) -> bool {
        true
    }

    fn solve_shifted(&self, shift: f64, weight: f64, rhs: &StateVector) -> Result<StateVector> {
        if rhs.grid() != self.grid() {
            return Err(Error::ShapeMismatch {
                expected: self.grid().to_string(),
                found: rhs.grid().to_string(),
            });
        }
        // σ + θ λ_pq must not vanish; the smallest symbol is 0 (mean mode).
        let lo = shift + weight * self.symbol.iter().copied().fold(f64::MAX, f64::min);
        let hi = shift + weight * self.symbol.iter().copied().fold(f64::MIN, f64::max);
        if lo * hi <= 0.0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::LinearSolve(format!(
                "shifted Fourier operator is singular (shift {shift}, weight {weight})"
            )));
        }
        Ok(self.apply_multiplier(rhs, |s| 1.0 / (shift + weight * s)))
    }

    fn h_inner(&self, a: &StateVector, b: &StateVector) -> f64 {
        let h = self.h();
        h * h
            * a.as_slice()
                .iter()
                .zip(b.as_slice())
                .map(|(x, y)| x * y)
                .sum::<f64>()
    }

    /// Forward-difference H¹ seminorm (periodic wrap), summed over x and y.
    fn v_seminorm(&self, v: &StateVector) -> f64 {
        let m = self.m;
        let h = self.h();
        let u = v.as_slice();
        let mut sum = 0.0;
        for i in 0..m {
            for j in 0..m {
                let c = u[i * m + j];
                let dx = (u[((i + 1) % m) * m + j] - c) / h;
                let dy = (u[i * m + (j + 1) % m] - c) / h;
                sum += dx * dx + dy * dy;
            }
        }
        (h * h * sum).sqrt()
    }

    fn initial_state(&self) -> StateVector {
        self.sample(|x, y| Self::exact_value(0.0, x, y))
    }

    fn exact_state(&self, t: f64) -> Option<StateVector> {
        let decay = (-PI * PI * t).exp();
        Some(StateVector::from_fn(self.grid(), |k| {
            self.pattern[k] * decay
        }))
    }

    /// Lipschitz constant of `u ↦ u - u³` on `|u| <= 2`, i.e. on a unit ball
    /// around the exact solution (which is bounded by 1) in the max norm.
    fn gamma_bound(&self, _t: f64) -> f64 {
        11.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Semilinear2d::new(3, 0.01).is_err());
        assert!(Semilinear2d::new(7, 0.01).is_err());
        assert!(Semilinear2d::new(2, 0.01).is_err());
        assert!(Semilinear2d::new(8, 0.0).is_err());
        assert!(Semilinear2d::new(8, 0.01).is_ok());
    }

    #[test]
    fn resolved_mode_is_an_eigenfunction() {
        let p = Semilinear2d::new(16, 0.01).unwrap();
        let u = p.initial_state();
        let au = p.apply_elliptic(&u);
        let expected = u.scaled(0.01 * 8.0 * PI * PI);
        let err = au.sub(&expected).unwrap().max_abs();
        assert!(err <= 1e-10 * expected.max_abs());
    }

    #[test]
    fn source_vanishes_where_solution_does() {
        let p = Semilinear2d::new(8, 0.01).unwrap();
        for &y in &[0.0, 0.3, 0.77] {
            assert!(p.source_value(0.0, 0.0, y).abs() < 1e-15);
        }
    }

    #[test]
    fn gridded_source_matches_closed_form() {
        let p = Semilinear2d::new(8, 0.02).unwrap();
        let t = 0.3;
        let zero = StateVector::zeros(p.grid());
        let g = p.forcing(t, &zero);
        let h = p.h();
        for k in 0..64 {
            let direct = p.source_value(t, (k / 8) as f64 * h, (k % 8) as f64 * h);
            assert!((g.as_slice()[k] - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_solution_has_small_residual() {
        let p = Semilinear2d::new(32, 0.01).unwrap();
        let t = 0.5;
        let u = p.exact_state(t).unwrap();
        let lhs = p.exact_derivative(t).add(&p.apply_elliptic(&u)).unwrap();
        let res = lhs.sub(&p.forcing(t, &u)).unwrap();
        assert!(res.max_abs() <= 1e-10, "{}", res.max_abs());
    }

    #[test]
    fn shifted_solve_is_exact_in_fourier_space() {
        let p = Semilinear2d::new(16, 0.05).unwrap();
        let x = StateVector::from_fn(p.grid(), |k| ((k * 37) % 23) as f64 / 11.0 - 1.0);
        for &theta in &[0.5, 1.0] {
            let mut rhs = x.scaled(3.0);
            rhs.axpy(theta, &p.apply_elliptic(&x)).unwrap();
            let back = p.solve_shifted(3.0, theta, &rhs).unwrap();
            assert!(back.sub(&x).unwrap().max_abs() <= 1e-12);
        }
        assert!(p.solve_shifted(0.0, 1.0, &x).is_err());
    }

    #[test]
    fn constants_are_annihilated() {
        let p = Semilinear2d::new(8, 0.3).unwrap();
        let c = StateVector::from_fn(p.grid(), |_| 2.5);
        assert!(p.apply_elliptic(&c).max_abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn elliptic_symmetric_and_mean_free(
            x in prop::collection::vec(-1.0f64..1.0, 64),
            y in prop::collection::vec(-1.0f64..1.0, 64),
        ) {
            let p = Semilinear2d::new(8, 0.1).unwrap();
            let x = StateVector::new(p.grid(), x).unwrap();
            let y = StateVector::new(p.grid(), y).unwrap();
            let ax = p.apply_elliptic(&x);
            let l = p.h_inner(&ax, &y);
            let r = p.h_inner(&x, &p.apply_elliptic(&y));
            prop_assert!((l - r).abs() <= 1e-12 * (1.0 + l.abs()));
            let mean: f64 = ax.as_slice().iter().sum();
            prop_assert!(mean.abs() <= 1e-11);
            prop_assert!(p.h_inner(&ax, &x) >= -1e-14);
        }
    }
}
