//! Converged follower opinions and the continuous-time dynamics that reach
//! them.
//!
//! [`steady_state`] is the primary path: one SPD solve of the grounded
//! Laplacian system. [`simulate`] integrates the dynamics with explicit Euler
//! and exists to cross-check it.

use nalgebra::{DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{laplacian_blocks, Graph, LaplacianBlocks, LeaderConfig};

/// Follower-only opinions, ordered by ascending node label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpinionVector {
    nodes: Vec<usize>,
    values: Vec<f64>,
}

impl OpinionVector {
    /// Pairs must be sorted by node label.
    pub(crate) fn from_parts(nodes: Vec<usize>, values: Vec<f64>) -> Self {
        debug_assert_eq!(nodes.len(), values.len());
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        OpinionVector { nodes, values }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.nodes
            .binary_search(&node)
            .ok()
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }

    /// Largest absolute difference against `other` over matching nodes.
    /// `None` when the follower sets differ.
    pub fn max_abs_diff(&self, other: &OpinionVector) -> Option<f64> {
        (self.nodes == other.nodes).then(|| {
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    /// `node,opinion` CSV with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,opinion\n");
        for (node, value) in self.iter() {
            out.push_str(&format!("{node},{}\n", format_significant(value, 12)));
        }
        out
    }
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that round-trips the rounded value.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{}", if value == 0.0 { 0.0 } else { value });
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), value)
        .parse()
        .expect("exponent format parses");
    format!("{rounded}")
}

/// Solves `Lff x = -Lfl x_l` for the follower opinions.
pub fn steady_state(g: &Graph, lc: &LeaderConfig) -> Result<OpinionVector> {
    let blocks = laplacian_blocks(g, lc);
    solve_blocks(&blocks)
}

pub(crate) fn solve_blocks(blocks: &LaplacianBlocks) -> Result<OpinionVector> {
    let rhs = -(&blocks.lfl * &blocks.leader_states);
    let chol = blocks
        .lff
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SolveFailure("follower block is not positive definite".into()))?;
    let x = chol.solve(&rhs);
    let nf = blocks.follower_count();
    let residual = (&blocks.lff * &x - &rhs).norm();
    if !(residual <= 1e-10 * nf as f64) {
        return Err(Error::SolveFailure(format!("residual {residual:e} too large")));
    }
    // Convex combinations of 0 and 1; clamp away roundoff past the ends.
    let values = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    Ok(OpinionVector::from_parts(blocks.followers.clone(), values))
}

/// Closed-form opinions on the canonical path `1..=n` with `l0 = k < l1 = j`.
///
/// Followers below `k` sit at 0, above `j` at 1, and between the leaders
/// they interpolate linearly.
pub fn path_closed_form(n: usize, k: usize, j: usize) -> Result<OpinionVector> {
    for v in [k, j] {
        if v == 0 || v > n {
            return Err(Error::EndpointOutOfRange { node: v, n });
        }
    }
    if k >= j {
        return Err(Error::LeaderOrderViolation { k, j });
    }
    let nodes: Vec<usize> = (1..=n).filter(|&v| v != k && v != j).collect();
    let values = nodes
        .iter()
        .map(|&v| {
            if v < k {
                0.0
            } else if v > j {
                1.0
            } else {
                (v - k) as f64 / (j - k) as f64
            }
        })
        .collect();
    Ok(OpinionVector::from_parts(nodes, values))
}

/// Follower snapshots from an explicit Euler integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub followers: Vec<usize>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> OpinionVector {
        let last = self.states.last().expect("trajectory holds the initial state");
        OpinionVector::from_parts(self.followers.clone(), last.clone())
    }

    pub fn state_at(&self, index: usize) -> OpinionVector {
        OpinionVector::from_parts(self.followers.clone(), self.states[index].clone())
    }
}

/// Step used when none is given: `1 / (2 * max degree)`.
///
/// Any step with `step * deg(v) <= 1` keeps each update a convex
/// combination, so opinions started in [0, 1] stay there.
pub fn default_step(g: &Graph) -> f64 {
    1.0 / (2.0 * g.max_degree() as f64)
}

fn extreme_eigenvalues(blocks: &LaplacianBlocks) -> (f64, f64) {
    let eig = SymmetricEigen::new(blocks.lff.clone());
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    (min, max)
}

/// Explicit Euler is stable for steps below `2 / lambda_max(Lff)`.
pub fn stability_bound(g: &Graph, lc: &LeaderConfig) -> f64 {
    let (_, max) = extreme_eigenvalues(&laplacian_blocks(g, lc));
    2.0 / max
}

/// Horizon after which Euler iterates started anywhere in [0, 1] are within
/// `tol` (sup norm) of the fixed point, from the contraction factor
/// `max |1 - step * lambda|` over the spectrum of `Lff`.
pub fn settle_horizon(g: &Graph, lc: &LeaderConfig, step: f64, tol: f64) -> Result<f64> {
    let (min, max) = extreme_eigenvalues(&laplacian_blocks(g, lc));
    let bound = 2.0 / max;
    if !(step > 0.0 && step < bound) {
        return Err(Error::UnstableStep { step, bound });
    }
    let factor = (1.0 - step * min).abs().max((1.0 - step * max).abs());
    let nf = lc.followers(g).len() as f64;
    // Initial error is at most 1 per component, so at most sqrt(n_f) in 2-norm.
    let steps = (tol / nf.sqrt()).ln() / factor.ln();
    Ok(steps.ceil().max(1.0) * step)
}

/// Integrates `x_f' = -Lff x_f - Lfl x_l` from `x0` (indexed by `label - 1`;
/// leader entries are ignored and pinned to their states).
pub fn simulate(
    g: &Graph,
    lc: &LeaderConfig,
    x0: &[f64],
    step: f64,
    horizon: f64,
) -> Result<Trajectory> {
    if x0.len() != g.n() {
        return Err(Error::InvalidLeaders(format!(
            "initial condition has {} entries for {} nodes",
            x0.len(),
            g.n()
        )));
    }
    let blocks = laplacian_blocks(g, lc);
    let (_, max) = extreme_eigenvalues(&blocks);
    let bound = 2.0 / max;
    if !(step > 0.0 && step < bound) {
        return Err(Error::UnstableStep { step, bound });
    }
    let mut x = DVector::from_iterator(
        blocks.follower_count(),
        blocks.followers.iter().map(|&v| x0[v - 1]),
    );
    if let Some(&bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OpinionOutOfRange(bad));
    }
    let drive = &blocks.lfl * &blocks.leader_states;
    let steps = (horizon / step).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.as_slice().to_vec());
    for i in 1..=steps {
        let rate = -(&blocks.lff * &x) - &drive;
        x += rate * step;
        times.push(i as f64 * step);
        states.push(x.as_slice().to_vec());
    }
    Ok(Trajectory {
        followers: blocks.followers,
        times,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Topology};
    use crate::test_graphs::tree11;

    fn path(n: usize) -> Graph {
        generate(Topology::Path(n)).unwrap()
    }

    #[test]
    fn steady_state_examples() {
        let g = path(5);
        let x = steady_state(&g, &LeaderConfig::pair(&g, 1, 5).unwrap()).unwrap();
        assert_eq!(x.nodes(), &[2, 3, 4]);
        for (got, want) in x.values().iter().zip([0.25, 0.5, 0.75]) {
            assert!((got - want).abs() < 1e-12);
        }

        let g = path(3);
        let x = steady_state(&g, &LeaderConfig::pair(&g, 1, 3).unwrap()).unwrap();
        assert!((x.get(2).unwrap() - 0.5).abs() < 1e-12);

        // Node 2 separates l0 = 1 from every follower.
        let g = tree11();
        let x = steady_state(&g, &LeaderConfig::pair(&g, 1, 2).unwrap()).unwrap();
        assert_eq!(x.len(), 9);
        assert!(x.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn closed_form_examples() {
        let x = path_closed_form(5, 1, 5).unwrap();
        assert_eq!(x.values(), &[0.25, 0.5, 0.75]);

        let x = path_closed_form(6, 2, 5).unwrap();
        assert_eq!(x.nodes(), &[1, 3, 4, 6]);
        assert_eq!(x.get(1), Some(0.0));
        assert_eq!(x.get(6), Some(1.0));
        assert!((x.get(3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((x.get(4).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let g = path(6);
        let solved = steady_state(&g, &LeaderConfig::pair(&g, 2, 5).unwrap()).unwrap();
        assert!(solved.max_abs_diff(&x).unwrap() < 1e-12);

        assert_eq!(path_closed_form(3, 1, 3).unwrap().values(), &[0.5]);
        assert_eq!(
            path_closed_form(5, 4, 2),
            Err(Error::LeaderOrderViolation { k: 4, j: 2 })
        );
        assert_eq!(
            path_closed_form(5, 3, 3),
            Err(Error::LeaderOrderViolation { k: 3, j: 3 })
        );
        assert!(matches!(
            path_closed_form(5, 1, 6),
            Err(Error::EndpointOutOfRange { .. })
        ));
    }

    #[test]
    fn csv_uses_twelve_significant_digits() {
        let x = path_closed_form(5, 1, 5).unwrap();
        assert_eq!(x.to_csv(), "node,opinion\n2,0.25\n3,0.5\n4,0.75\n");
        let x = path_closed_form(4, 1, 4).unwrap();
        assert_eq!(x.to_csv(), "node,opinion\n2,0.333333333333\n3,0.666666666667\n");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.0, 12), "0");
    }

    #[test]
    fn simulate_reaches_symmetric_midpoint() {
        let g = path(3);
        let lc = LeaderConfig::pair(&g, 1, 3).unwrap();
        let step = default_step(&g);
        let horizon = settle_horizon(&g, &lc, step, 1e-9).unwrap();
        let traj = simulate(&g, &lc, &[0.7, 0.0, 0.2], step, horizon).unwrap();
        assert_eq!(traj.states[0], vec![0.0]);
        assert!((traj.final_state().get(2).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn simulate_from_fixed_point_is_constant() {
        let g = tree11();
        let lc = LeaderConfig::pair(&g, 1, 11).unwrap();
        let fixed = steady_state(&g, &lc).unwrap();
        let mut x0 = vec![0.0; g.n()];
        for (v, x) in fixed.iter() {
            x0[v - 1] = x;
        }
        let traj = simulate(&g, &lc, &x0, default_step(&g), 50.0).unwrap();
        for i in 0..traj.states.len() {
            assert!(traj.state_at(i).max_abs_diff(&fixed).unwrap() < 1e-12);
        }
    }

    #[test]
    fn simulate_rejects_unstable_step_and_bad_start() {
        let g = path(5);
        let lc = LeaderConfig::pair(&g, 1, 5).unwrap();
        let bound = stability_bound(&g, &lc);
        match simulate(&g, &lc, &[0.0; 5], bound * 1.01, 1.0) {
            Err(Error::UnstableStep { bound: b, .. }) => assert_eq!(b, bound),
            other => panic!("expected UnstableStep, got {other:?}"),
        }
        assert!(matches!(
            simulate(&g, &lc, &[0.0, 1.5, 0.0, 0.0, 0.0], 0.1, 1.0),
            Err(Error::OpinionOutOfRange(v)) if v == 1.5
        ));
        // Leader entries are ignored even when out of range.
        assert!(simulate(&g, &lc, &[7.0, 0.0, 0.0, 0.0, -3.0], 0.1, 1.0).is_ok());
    }

    #[test]
    fn trajectory_stays_in_unit_interval() {
        let g = tree11();
        let lc = LeaderConfig::new(&g, [1, 6], [11]).unwrap();
        let x0: Vec<f64> = (0..g.n()).map(|i| (i % 3) as f64 / 2.0).collect();
        let traj = simulate(&g, &lc, &x0, default_step(&g), 30.0).unwrap();
        assert!(traj
            .states
            .iter()
            .flatten()
            .all(|v| (0.0..=1.0).contains(v)));
    }
}
