//! Step-ratio limits, step-size conditions and runtime stability certificates.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::norms::hh_norm;
use crate::problems::ParabolicProblem;
use crate::stepper::{Mode, Trajectory};

/// Zero-stability ratio limit `1 + √2`.
pub const R0: f64 = SQRT_2 + 1.0;

/// Energy-norm ratio limit `(3 + √17) / 2`.
pub const R1: f64 = 3.561_552_812_808_830_3;

/// `4 + 2√2`, the constant of the `R0` regime.
pub const R0_FACTOR: f64 = 4.0 + 2.0 * SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioRegime {
    R0,
    R1,
}

impl RatioRegime {
    pub fn limit(self) -> f64 {
        match self {
            RatioRegime::R0 => R0,
            RatioRegime::R1 => R1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RatioCheck {
    Pass,
    /// First step whose ratio is not below the limit.
    Fail {
        step: usize,
        ratio: f64,
    },
}

impl RatioCheck {
    pub fn passed(&self) -> bool {
        matches!(self, RatioCheck::Pass)
    }
}

/// Pass iff every `r_n < R` (strict).
pub fn check_ratio_bound(mesh: &TimeMesh, regime: RatioRegime) -> RatioCheck {
    let limit = regime.limit();
    for n in 2..=mesh.n_steps() {
        let r = mesh.ratio(n);
        if !(r < limit) {
            return RatioCheck::Fail { step: n, ratio: r };
        }
    }
    RatioCheck::Pass
}

fn check_fraction(name: &str, c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in (0, 1), got {c}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be finite and nonnegative, got {gamma}"
        )));
    }
    Ok(())
}

/// Largest `k_max` with `(4 + 2√2) γ² k_max <= c1`; infinite when `γ = 0`.
pub fn kmax_bound_r0(gamma: f64, c1: f64) -> Result<f64> {
    check_fraction("c1", c1)?;
    check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(c1 / (R0_FACTOR * gamma * gamma))
}

/// `max{(2 + 2R) / (2 + R), (2 + 2R) / (2 + 3R - R²)}` for `1 < R < R1`.
///
/// Admissible constants must exceed this value strictly.
pub fn c_r_constant(ratio: f64) -> Result<f64> {
    if !(ratio > 1.0 && ratio < R1) {
        return Err(Error::InvalidParameter(format!(
            "ratio limit must lie in (1, {R1}), got {ratio}"
        )));
    }
    let num = 2.0 + 2.0 * ratio;
    Ok((num / (2.0 + ratio)).max(num / (2.0 + 3.0 * ratio - ratio * ratio)))
}

/// Largest `k_max` with `c_R γ² k_max <= c1`.
pub fn kmax_bound_r1(gamma: f64, c_r: f64, c1: f64) -> Result<f64> {
    check_fraction("c1", c1)?;
    check_gamma(gamma)?;
    if !(c_r > 0.0 && c_r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "c_R must be positive, got {c_r}"
        )));
    }
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(c1 / (c_r * gamma * gamma))
}

/// `(1 + R)² / (1 + 2R - R²)` for `1 <= R < R0`.
pub fn c3_constant(ratio: f64) -> Result<f64> {
    if !(1.0..R0).contains(&ratio) {
        return Err(Error::InvalidParameter(format!(
            "ratio limit must lie in [1, {R0}), got {ratio}"
        )));
    }
    let denom = 1.0 + 2.0 * ratio - ratio * ratio;
    if denom <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ratio limit {ratio} too close to {R0}"
        )));
    }
    Ok((1.0 + ratio).powi(2) / denom)
}

/// Largest `k_max` with `2 c3 γ² k_max <= c2`.
pub fn kmax_bound_c3(gamma: f64, c2: f64, ratio: f64) -> Result<f64> {
    check_fraction("c2", c2)?;
    check_gamma(gamma)?;
    let c3 = c3_constant(ratio)?;
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(c2 / (2.0 * c3 * gamma * gamma))
}

/// Parameters of a stability analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityLimits {
    /// Ratio bound `R` with `r_max <= R`.
    pub ratio: f64,
    pub c1: f64,
    pub c2: f64,
    pub gamma_max: f64,
}

impl StabilityLimits {
    /// `R = r_max` of the mesh (at least 1) and `γ_max` from the problem's
    /// bound sampled at the mesh nodes.
    pub fn for_run<P: ParabolicProblem + ?Sized>(
        problem: &P,
        mesh: &TimeMesh,
        c1: f64,
        c2: f64,
    ) -> Self {
        Self {
            ratio: mesh.r_max().max(1.0),
            c1,
            c2,
            gamma_max: gamma_max(problem, mesh),
        }
    }

    pub fn kmax_r0(&self) -> Result<f64> {
        kmax_bound_r0(self.gamma_max, self.c1)
    }

    /// Uses `c_R` one percent above its infimum.
    pub fn kmax_r1(&self) -> Result<f64> {
        let c_r = 1.01 * c_r_constant(self.ratio.max(1.0 + f64::EPSILON))?;
        kmax_bound_r1(self.gamma_max, c_r, self.c1)
    }

    pub fn kmax_c3(&self) -> Result<f64> {
        kmax_bound_c3(self.gamma_max, self.c2, self.ratio)
    }
}

/// `max_n γ(t^n)` over the mesh nodes.
pub fn gamma_max<P: ParabolicProblem + ?Sized>(problem: &P, mesh: &TimeMesh) -> f64 {
    mesh.node_times()
        .iter()
        .map(|&t| problem.gamma_bound(t))
        .fold(0.0, f64::max)
}

/// Both sides of the certified energy inequality at `n = N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertificateCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// The growth constant multiplying the data.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Checked(CertificateCheck),
    /// The preconditions of the estimate are not met; nothing is claimed.
    NotApplicable(String),
}

impl Certificate {
    pub fn label(&self) -> &'static str {
        match self {
            Certificate::Checked(c) if c.holds => "holds",
            Certificate::Checked(_) => "fails",
            Certificate::NotApplicable(_) => "n/a",
        }
    }

    pub fn holds(&self) -> Option<bool> {
        match self {
            Certificate::Checked(c) => Some(c.holds),
            Certificate::NotApplicable(_) => None,
        }
    }
}

/// Check
///
/// ```text
/// k_N |∂̄U^N|² + Σ_{j=2}^{N-1} k_j s_j |∂̄U^j|² + max_{2<=j<=N} ||U^j||²
///   <= C (Σ_{j=2}^N k_j |f^j|² + k_2 s_2 |∂̄U^1|² + ||U^1||²)
/// ```
///
/// with `C = K/(1-c1) exp(K/(1-c1) γ² t^N)`, `K = 4 + 2√2`, on a linear run
/// whose mesh has `r_max < R0` and `K γ² k_max <= c1`.
pub fn stability_certificate<P: ParabolicProblem + ?Sized>(
    trajectory: &Trajectory,
    problem: &P,
    c1: f64,
) -> Result<Certificate> {
    check_fraction("c1", c1)?;
    let mesh = &trajectory.mesh;
    if trajectory.mode != Mode::Linear || problem.forcing_depends_on_state() {
        return Ok(Certificate::NotApplicable("run is not linear".into()));
    }
    if let RatioCheck::Fail { step, ratio } = check_ratio_bound(mesh, RatioRegime::R0) {
        return Ok(Certificate::NotApplicable(format!(
            "step ratio {ratio} at n = {step} is not below {R0}"
        )));
    }
    let gamma = gamma_max(problem, mesh);
    let bound = kmax_bound_r0(gamma, c1)?;
    if mesh.k_max() > bound {
        return Ok(Certificate::NotApplicable(format!(
            "k_max = {} exceeds the admissible {bound}",
            mesh.k_max()
        )));
    }

    let n = mesh.n_steps();
    let states = &trajectory.states;
    let h_diff = |j: usize| -> Result<f64> {
        Ok(problem.h_norm(&states[j].sub(&states[j - 1])?) / mesh.step(j))
    };
    let energy_sq = |j: usize| problem.energy_norm(&states[j]).powi(2);

    let last = h_diff(n)?;
    let weighted = hh_norm(problem, mesh, states, 2, n)?;
    let max_energy = (2..=n).map(energy_sq).fold(0.0, f64::max);
    let lhs = mesh.step(n) * last * last + weighted * weighted + max_energy;

    let mut data = 0.0;
    for (j, u) in states.iter().enumerate().take(n + 1).skip(2) {
        let f = problem.h_norm(&problem.forcing(mesh.time(j), u));
        data += mesh.step(j) * f * f;
    }
    let first = h_diff(1)?;
    data += mesh.step(2) * mesh.weight(2) * first * first + energy_sq(1);

    let growth = R0_FACTOR / (1.0 - c1);
    let constant = growth * (growth * gamma * gamma * mesh.horizon()).exp();
    let rhs = constant * data;
    Ok(Certificate::Checked(CertificateCheck {
        holds: lhs <= rhs * (1.0 + 1e-12),
        lhs,
        rhs,
        constant,
    }))
}

/// `E^n = R/(1+R) k_n |∂̄U^n|² + ||U^n||²` for `n = 1..=N` (entry `n - 1`).
///
/// For `f = 0`, `B = 0` and `r_max <= R < R1` this sequence is nonincreasing.
pub fn energy_sequence<P: ParabolicProblem + ?Sized>(
    trajectory: &Trajectory,
    problem: &P,
    ratio: f64,
) -> Result<Vec<f64>> {
    let mesh = &trajectory.mesh;
    let w = ratio / (1.0 + ratio);
    (1..=mesh.n_steps())
        .map(|n| {
            let u = &trajectory.states[n];
            let d = problem.h_norm(&u.sub(&trajectory.states[n - 1])?) / mesh.step(n);
            Ok(w * mesh.step(n) * d * d + problem.energy_norm(u).powi(2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Heat1d, ScalarOde};
    use crate::stepper::{integrate, SolverConfig, StartScheme};

    #[test]
    fn limit_constants() {
        assert!((R0 - 2.414_213_562_373_095).abs() < 1e-15);
        assert_eq!(R1, (3.0 + 17f64.sqrt()) / 2.0);
        // R1 is the positive root of 2 + 3R - R²
        assert!((2.0 + 3.0 * R1 - R1 * R1).abs() < 1e-14);
        // R0 is the positive root of 1 + 2R - R²
        assert!((1.0 + 2.0 * R0 - R0 * R0).abs() < 1e-14);
    }

    #[test]
    fn ratio_checks() {
        let geo = |r| TimeMesh::geometric(1.0, 12, r).unwrap();
        assert_eq!(
            check_ratio_bound(&geo(2.4), RatioRegime::R0),
            RatioCheck::Pass
        );
        assert!(matches!(
            check_ratio_bound(&geo(2.5), RatioRegime::R0),
            RatioCheck::Fail { step: 2, .. }
        ));
        assert!(check_ratio_bound(&geo(2.5), RatioRegime::R1).passed());
        let uni = TimeMesh::uniform(1.0, 10).unwrap();
        assert!(check_ratio_bound(&uni, RatioRegime::R0).passed());
        assert!(check_ratio_bound(&uni, RatioRegime::R1).passed());
    }

    #[test]
    fn kmax_bounds() {
        let one = kmax_bound_r0(1.0, 0.5).unwrap();
        // 0.5 / (4 + 2√2) = 1 / (8 + 4√2) = (8 - 4√2) / 32
        assert!((one - (8.0 - 4.0 * SQRT_2) / 32.0).abs() < 1e-16);
        assert!((one - 0.07322).abs() < 1e-5);
        assert_eq!(kmax_bound_r0(0.0, 0.5).unwrap(), f64::INFINITY);
        assert!((kmax_bound_r0(2.0, 0.5).unwrap() - one / 4.0).abs() < 1e-17);
        for c1 in [0.0, 1.0, -0.2, 1.5] {
            assert!(kmax_bound_r0(1.0, c1).is_err());
        }
        assert!(kmax_bound_r0(-1.0, 0.5).is_err());
        assert!(kmax_bound_r0(2.0, 0.5).unwrap() < kmax_bound_r0(1.0, 0.5).unwrap());
        assert!(kmax_bound_r0(1.0, 0.3).unwrap() < kmax_bound_r0(1.0, 0.6).unwrap());
        assert_eq!(kmax_bound_r1(2.0, 4.0, 0.5).unwrap(), 0.5 / 16.0);
        assert_eq!(kmax_bound_c3(1.0, 0.5, 2.0).unwrap(), 0.5 / 18.0);
    }

    #[test]
    fn constant_examples() {
        assert_eq!(c_r_constant(2.0).unwrap(), 1.5);
        assert_eq!(c_r_constant(3.0).unwrap(), 4.0);
        assert!(c_r_constant(R1 - 1e-9).unwrap() > 1e8);
        for bad in [1.0, 0.5, R1, 4.0] {
            assert!(c_r_constant(bad).is_err());
        }
        assert_eq!(c3_constant(1.0).unwrap(), 2.0);
        assert_eq!(c3_constant(2.0).unwrap(), 9.0);
        assert!(c3_constant(R0 - 1e-9).unwrap() > 1e8);
        assert!(c3_constant(R0).is_err());
        assert!(c3_constant(2.5).is_err());
    }

    /// Exact rational evaluation at `R = p / q`, rounded once.
    #[test]
    fn constants_match_exact_rationals() {
        for i in 0..20i128 {
            let (p, q) = (1025 + 97 * i, 1024i128);
            let r = p as f64 / q as f64;
            // (2 + 2R) / (2 + R) = (2q + 2p) / (2q + p), etc.
            let num = 2 * q + 2 * p;
            let first = (num, 2 * q + p);
            let second = (num * q, 2 * q * q + 3 * p * q - p * p);
            if r < R1 {
                // compare fractions exactly, then divide once
                let pick = if first.0 * second.1 >= second.0 * first.1 {
                    first
                } else {
                    second
                };
                let expected = pick.0 as f64 / pick.1 as f64;
                let got = c_r_constant(r).unwrap();
                assert!((got - expected).abs() <= 1e-14 * expected, "R={r}");
            }
            if r < R0 {
                let expected = ((p + q) * (p + q)) as f64 / (q * q + 2 * p * q - p * p) as f64;
                let got = c3_constant(r).unwrap();
                assert!((got - expected).abs() <= 1e-14 * expected, "R={r}");
            }
        }
    }

    fn run(problem: &Heat1d, mesh: &TimeMesh) -> Trajectory {
        integrate(
            problem,
            mesh,
            StartScheme::BackwardEuler,
            Mode::Linear,
            &SolverConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn degenerate_certificate_holds() {
        let p = Heat1d::homogeneous(8, 0.0, vec![0.0; 7]).unwrap();
        let tr = run(&p, &TimeMesh::uniform(1.0, 10).unwrap());
        match stability_certificate(&tr, &p, 0.5).unwrap() {
            Certificate::Checked(c) => {
                assert!(c.holds);
                assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_holds_on_heat_runs() {
        let p = Heat1d::new(50, 1.0).unwrap();
        let tr = run(&p, &TimeMesh::uniform(4.0, 50).unwrap());
        let cert = stability_certificate(&tr, &p, 0.5).unwrap();
        assert_eq!(cert.holds(), Some(true), "{cert:?}");

        let p0 = Heat1d::new(50, 0.0).unwrap();
        let tr = run(&p0, &TimeMesh::geometric(4.0, 50, 2.4).unwrap());
        let cert = stability_certificate(&tr, &p0, 0.5).unwrap();
        assert_eq!(cert.holds(), Some(true), "{cert:?}");
    }

    #[test]
    fn certificate_refuses_outside_preconditions() {
        let p = Heat1d::new(20, 0.0).unwrap();
        let tr = run(&p, &TimeMesh::geometric(4.0, 20, 2.5).unwrap());
        assert!(matches!(
            stability_certificate(&tr, &p, 0.5).unwrap(),
            Certificate::NotApplicable(_)
        ));
        // b = 1 with k_max far above the admissible step
        let p = Heat1d::new(20, 1.0).unwrap();
        let tr = run(&p, &TimeMesh::geometric(4.0, 50, 2.4).unwrap());
        let cert = stability_certificate(&tr, &p, 0.5).unwrap();
        assert_eq!(cert.label(), "n/a");
        assert!(stability_certificate(&tr, &p, 1.0).is_err());

        let q = ScalarOde::new(1.0, 1.0).with_nonlinear_forcing(|_, u| -u);
        let mesh = TimeMesh::uniform(1.0, 4).unwrap();
        let tr = integrate(
            &q,
            &mesh,
            StartScheme::BackwardEuler,
            Mode::Semilinear,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(matches!(
            stability_certificate(&tr, &q, 0.5).unwrap(),
            Certificate::NotApplicable(_)
        ));
    }

    #[test]
    fn energy_decays_without_forcing() {
        let init: Vec<f64> = (1..40)
            .map(|i| ((i * 37 % 11) as f64 - 5.0) / 5.0)
            .collect();
        let p = Heat1d::homogeneous(40, 0.0, init).unwrap();
        for (mesh, ratio) in [
            (TimeMesh::geometric(1.0, 30, 2.4).unwrap(), 2.4),
            (TimeMesh::geometric(1.0, 30, 3.5).unwrap(), 3.5),
            (
                TimeMesh::graded(1.0, 30, 3.0).unwrap(),
                TimeMesh::graded(1.0, 30, 3.0).unwrap().r_max(),
            ),
        ] {
            let tr = run(&p, &mesh);
            let e = energy_sequence(&tr, &p, ratio).unwrap();
            for w in e.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{} > {}", w[1], w[0]);
            }
        }
    }
}
