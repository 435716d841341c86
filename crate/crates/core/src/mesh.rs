//! Prescribed nonuniform time meshes and the ratio statistics derived from them.
//!
//! Indices follow the usual multistep convention: nodes `t^0 .. t^N`, steps
//! `k_n = t^n - t^{n-1}` for `n = 1..N`, ratios `r_n = k_n / k_{n-1}` and
//! weights `s_n = r_n / (1 + r_n)` for `n = 2..N`. All constructors compute
//! node times first and derive everything else by subtraction, so `t^N = T`
//! holds exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// An immutable time mesh on `[0, T]` with at least two steps.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
    steps: Vec<f64>,
    ratios: Vec<f64>,
    weights: Vec<f64>,
}

/// Derived quantities consumed by the stability conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshStats {
    /// `max_{n >= 2} k_n`; the first step is excluded.
    pub k_max: f64,
    /// `max_{n >= 2} r_n`.
    pub r_max: f64,
    phi: Vec<f64>,
}

impl MeshStats {
    /// `Φ_n = Σ_{j=2}^{n-2} [r_j - r_{j+2}]_+` for `2 <= n <= N`.
    pub fn phi(&self, n: usize) -> f64 {
        assert!(
            n >= 2 && n - 2 < self.phi.len(),
            "Φ_n defined for 2 <= n <= N"
        );
        self.phi[n - 2]
    }

    /// `Φ_N`.
    pub fn phi_final(&self) -> f64 {
        *self.phi.last().expect("mesh has N >= 2")
    }

    /// `Φ_2 .. Φ_N`.
    pub fn phi_values(&self) -> &[f64] {
        &self.phi
    }
}

/// Positive part `[x]_+ = (|x| + x) / 2`.
#[inline]
pub fn positive_part(x: f64) -> f64 {
    (x.abs() + x) / 2.0
}

fn check_horizon_and_count(horizon: f64, n: usize) -> Result<()> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidMesh(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidMesh(format!(
            "need at least two steps, got N = {n}"
        )));
    }
    Ok(())
}

impl TimeMesh {
    /// Equidistant mesh `k_n = T / N`.
    pub fn uniform(horizon: f64, n: usize) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        let nodes = (0..=n).map(|i| horizon * (i as f64 / n as f64)).collect();
        Self::from_nodes(nodes)
    }

    /// Graded mesh `t^n = T (n/N)^grading`, `grading >= 1`.
    ///
    /// `grading == 1` reproduces [`TimeMesh::uniform`] bit for bit.
    pub fn graded(horizon: f64, n: usize, grading: f64) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        if !(grading.is_finite() && grading >= 1.0) {
            return Err(Error::InvalidMesh(format!(
                "grading exponent must be >= 1, got {grading}"
            )));
        }
        let nodes = (0..=n)
            .map(|i| horizon * (i as f64 / n as f64).powf(grading))
            .collect();
        Self::from_nodes(nodes)
    }

    /// Geometric mesh with constant ratio `r`, `k_1 = T (r - 1) / (r^N - 1)`.
    ///
    /// `r == 1` is rejected; use [`TimeMesh::uniform`] for constant steps.
    pub fn geometric(horizon: f64, n: usize, ratio: f64) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidMesh(format!(
                "geometric ratio must be positive, got {ratio}"
            )));
        }
        if ratio == 1.0 {
            return Err(Error::InvalidMesh(
                "geometric ratio 1 is a uniform mesh; use TimeMesh::uniform".into(),
            ));
        }
        let nn = n as i32;
        // t^n = T (r^n - 1) / (r^N - 1), rewritten with negative powers when
        // r > 1 so that r^N cannot overflow.
        let node = |i: usize| -> f64 {
            let i = i as i32;
            if ratio > 1.0 {
                let inv_n = ratio.powi(-nn);
                horizon * (ratio.powi(i - nn) - inv_n) / (1.0 - inv_n)
            } else {
                horizon * (1.0 - ratio.powi(i)) / (1.0 - ratio.powi(nn))
            }
        };
        let mut nodes: Vec<f64> = (0..=n).map(node).collect();
        nodes[0] = 0.0;
        nodes[n] = horizon;
        Self::from_nodes(nodes)
    }

    /// Mesh from explicit node times `0 = t^0 < t^1 < ... < t^N`.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least three nodes, got {}",
                nodes.len()
            )));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidMesh(format!(
                "first node must be 0, got {}",
                nodes[0]
            )));
        }
        if let Some(bad) = nodes.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidMesh(format!("node {bad} is not finite")));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(format!(
                "nodes not strictly increasing at index {}: {} then {}",
                i + 1,
                nodes[i],
                nodes[i + 1]
            )));
        }
        let steps: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let ratios: Vec<f64> = steps.windows(2).map(|w| w[1] / w[0]).collect();
        let weights = ratios.iter().map(|r| r / (1.0 + r)).collect();
        Ok(Self {
            nodes,
            steps,
            ratios,
            weights,
        })
    }

    /// Number of steps `N`.
    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn horizon(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// `t^n`, `0 <= n <= N`.
    pub fn time(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    /// `k_n`, `1 <= n <= N`.
    pub fn step(&self, n: usize) -> f64 {
        assert!(n >= 1, "k_n defined for n >= 1");
        self.steps[n - 1]
    }

    /// `r_n`, `2 <= n <= N`.
    pub fn ratio(&self, n: usize) -> f64 {
        assert!(n >= 2, "r_n defined for n >= 2");
        self.ratios[n - 2]
    }

    /// `s_n = r_n / (1 + r_n)`, `2 <= n <= N`.
    pub fn weight(&self, n: usize) -> f64 {
        assert!(n >= 2, "s_n defined for n >= 2");
        self.weights[n - 2]
    }

    pub fn first_step(&self) -> f64 {
        self.steps[0]
    }

    pub fn node_times(&self) -> &[f64] {
        &self.nodes
    }

    /// `k_1 .. k_N`.
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// `r_2 .. r_N`.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// `s_2 .. s_N`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn k_max(&self) -> f64 {
        self.steps[1..].iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn r_max(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn stats(&self) -> MeshStats {
        let n = self.n_steps();
        let mut phi = vec![0.0; n - 1];
        for m in 4..=n {
            phi[m - 2] = phi[m - 3] + positive_part(self.ratio(m - 2) - self.ratio(m));
        }
        MeshStats {
            k_max: self.k_max(),
            r_max: self.r_max(),
            phi,
        }
    }

    /// One node time per line in plain decimal notation.
    ///
    /// `f64`'s `Display` is the shortest representation that round-trips, so
    /// [`TimeMesh::from_node_list`] reconstructs the mesh exactly.
    pub fn to_node_list(&self) -> String {
        let mut out = String::with_capacity(self.nodes.len() * 24);
        for t in &self.nodes {
            writeln!(out, "{t}").unwrap();
        }
        out
    }

    /// Parse a node list. Blank lines and `#` comments are ignored.
    pub fn from_node_list(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let t: f64 = line.parse().map_err(|e| {
                Error::Parse(format!("node list line {}: {line:?}: {e}", lineno + 1))
            })?;
            nodes.push(t);
        }
        Self::from_nodes(nodes)
    }

    pub fn write_node_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_node_list())?;
        Ok(())
    }

    pub fn read_node_list(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_node_list(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_steps_ratios_weights() {
        let m = TimeMesh::uniform(4.0, 4).unwrap();
        assert_eq!(m.steps(), &[1.0; 4]);
        assert_eq!(m.ratios(), &[1.0; 3]);
        assert_eq!(m.weights(), &[0.5; 3]);

        let m = TimeMesh::uniform(1.0, 2).unwrap();
        assert_eq!(m.node_times(), &[0.0, 0.5, 1.0]);

        let s = TimeMesh::uniform(4.0, 50).unwrap().stats();
        assert!((s.k_max - 0.08).abs() < 1e-15);
        assert!((s.r_max - 1.0).abs() < 1e-12);
        // ratios are 1 up to rounding of the node times
        assert!(s.phi_final() < 1e-12);
    }

    #[test]
    fn uniform_rejects_bad_input() {
        assert!(TimeMesh::uniform(4.0, 1).is_err());
        assert!(TimeMesh::uniform(0.0, 10).is_err());
        assert!(TimeMesh::uniform(-1.0, 10).is_err());
        assert!(TimeMesh::uniform(f64::NAN, 10).is_err());
    }

    #[test]
    fn graded_first_node_and_identity_case() {
        let m = TimeMesh::graded(4.0, 20, 3.0).unwrap();
        assert!((m.time(1) - 5.0e-4).abs() < 1e-18);
        assert_eq!(
            TimeMesh::graded(4.0, 20, 1.0).unwrap(),
            TimeMesh::uniform(4.0, 20).unwrap()
        );
        assert!(TimeMesh::graded(4.0, 20, 0.5).is_err());
    }

    #[test]
    fn graded_ratio_sequence() {
        // r_n = (n^3 - (n-1)^3) / ((n-1)^3 - (n-2)^3), evaluated in exact integers.
        let m = TimeMesh::graded(4.0, 20, 3.0).unwrap();
        assert!((m.ratio(2) - 7.0).abs() < 1e-12);
        for n in 2..=20u64 {
            let num = n.pow(3) - (n - 1).pow(3);
            let den = (n - 1).pow(3) - (n - 2).pow(3);
            let exact = num as f64 / den as f64;
            assert!((m.ratio(n as usize) - exact).abs() < 1e-10 * exact);
        }
        for w in m.ratios().windows(2) {
            assert!(w[1] < w[0] && w[1] > 1.0);
        }
    }

    #[test]
    fn geometric_two_steps() {
        let m = TimeMesh::geometric(1.0, 2, 2.0).unwrap();
        assert!((m.step(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.step(2) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_first_step_and_sum() {
        let m = TimeMesh::geometric(4.0, 50, 2.4).unwrap();
        // k_1 = T (r - 1) / (r^N - 1); r^50 evaluated by repeated exact
        // squaring is well inside f64 range.
        let k1 = 4.0 * 1.4 / (2.4f64.powi(50) - 1.0);
        assert!((m.step(1) - k1).abs() < 1e-9 * k1);
        let sum: f64 = m.steps().iter().sum();
        assert!((sum - 4.0).abs() <= 1e-10 * 4.0);
        assert!((m.r_max() - 2.4).abs() < 1e-9);
        for &r in m.ratios() {
            assert!((r - 2.4).abs() < 1e-8);
        }
    }

    #[test]
    fn geometric_rejects_unit_ratio() {
        assert!(matches!(
            TimeMesh::geometric(1.0, 10, 1.0),
            Err(Error::InvalidMesh(_))
        ));
        assert!(TimeMesh::geometric(1.0, 10, 0.0).is_err());
        assert!(TimeMesh::geometric(1.0, 10, 0.5).is_ok());
    }

    #[test]
    fn geometric_large_n_does_not_overflow() {
        // 2.4^800 ~ 1e304: positive powers would overflow in the formula
        let m = TimeMesh::geometric(1.0, 800, 2.4).unwrap();
        assert!(m.steps().iter().all(|&k| k > 0.0));
        assert_eq!(m.horizon(), 1.0);
        // steps far below the resolution of the node times cannot be represented
        assert!(TimeMesh::geometric(1.0, 2000, 2.4).is_err());
    }

    #[test]
    fn from_nodes_cases() {
        let m = TimeMesh::from_nodes(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m, TimeMesh::uniform(3.0, 3).unwrap());
        let m = TimeMesh::from_nodes(vec![0.0, 0.5, 1.5]).unwrap();
        assert_eq!(m.ratio(2), 2.0);
        assert!((m.weight(2) - 2.0 / 3.0).abs() < 1e-16);
        assert!(TimeMesh::from_nodes(vec![0.0, 1.0, 0.5]).is_err());
        assert!(TimeMesh::from_nodes(vec![0.1, 1.0, 2.0]).is_err());
        assert!(TimeMesh::from_nodes(vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn phi_hand_example() {
        // steps 1, 3, 3, 3, 3
        let m = TimeMesh::from_nodes(vec![0.0, 1.0, 4.0, 7.0, 10.0, 13.0]).unwrap();
        assert_eq!(m.ratios(), &[3.0, 1.0, 1.0, 1.0]);
        let s = m.stats();
        assert_eq!(s.phi(2), 0.0);
        assert_eq!(s.phi(3), 0.0);
        assert_eq!(s.phi(4), 2.0);
        assert_eq!(s.phi(5), 2.0);
    }

    #[test]
    fn phi_graded_matches_double_loop() {
        let m = TimeMesh::graded(4.0, 20, 3.0).unwrap();
        let s = m.stats();
        for n in 2..=20usize {
            let mut direct = 0.0;
            for j in 2..=n.saturating_sub(2) {
                let d = m.ratio(j) - m.ratio(j + 2);
                if d > 0.0 {
                    direct += d;
                }
            }
            assert!((s.phi(n) - direct).abs() < 1e-13);
        }
        // decreasing ratios telescope: Φ_N = r_2 + r_3 - r_{N-1} - r_N
        let tele = m.ratio(2) + m.ratio(3) - m.ratio(19) - m.ratio(20);
        assert!((s.phi_final() - tele).abs() < 1e-12);
    }

    #[test]
    fn k_max_excludes_first_step() {
        let m = TimeMesh::from_nodes(vec![0.0, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(m.k_max(), 1.0);
        assert_eq!(m.first_step(), 5.0);
    }

    #[test]
    fn node_list_round_trip() {
        let m = TimeMesh::graded(4.0, 37, 2.7).unwrap();
        let text = m.to_node_list();
        assert!(!text.contains('e'));
        assert_eq!(TimeMesh::from_node_list(&text).unwrap(), m);
        let parsed = TimeMesh::from_node_list("# custom\n0\n0.25\n\n1.0\n").unwrap();
        assert_eq!(parsed.n_steps(), 2);
        assert!(TimeMesh::from_node_list("0\nabc\n1\n").is_err());
    }

    fn arb_nodes() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-3f64..10.0, 2..60).prop_map(|steps| {
            let mut t = 0.0;
            let mut nodes = vec![0.0];
            for k in steps {
                t += k;
                nodes.push(t);
            }
            nodes
        })
    }

    proptest! {
        #[test]
        fn reconstruction_is_bit_identical(nodes in arb_nodes()) {
            let m = TimeMesh::from_nodes(nodes).unwrap();
            let again = TimeMesh::from_nodes(m.node_times().to_vec()).unwrap();
            prop_assert_eq!(&m, &again);
        }

        #[test]
        fn weight_identities(nodes in arb_nodes()) {
            let m = TimeMesh::from_nodes(nodes).unwrap();
            for (r, s) in m.ratios().iter().zip(m.weights()) {
                prop_assert!(*s > 0.0 && *s < 1.0);
                prop_assert!((s - r / (1.0 + r)).abs() <= 1e-15);
                prop_assert!(((1.0 - s) - 1.0 / (1.0 + r)).abs() <= 1e-15);
            }
        }

        #[test]
        fn phi_is_nondecreasing(nodes in arb_nodes()) {
            let s = TimeMesh::from_nodes(nodes).unwrap().stats();
            for w in s.phi_values().windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
        }

        #[test]
        fn geometric_sum_matches_horizon(n in 2usize..20, r in 0.6f64..3.5, t in 0.1f64..10.0) {
            prop_assume!((r - 1.0).abs() > 1e-3);
            let m = TimeMesh::geometric(t, n, r).unwrap();
            let sum: f64 = m.steps().iter().sum();
            prop_assert!((sum - t).abs() <= 1e-10 * t);
        }
    }

    #[test]
    fn graded_monotone_over_parameter_grid() {
        for &w in &[1.5, 2.0, 3.0, 4.0] {
            for &n in &[10usize, 100] {
                let m = TimeMesh::graded(1.0, n, w).unwrap();
                assert!(m.ratios().iter().all(|&r| r > 1.0));
                for pair in m.ratios().windows(2) {
                    assert!(pair[1] < pair[0], "w={w} n={n}");
                }
            }
        }
    }
}
