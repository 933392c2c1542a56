//! Placement of a single 1-leader next to a fixed 0-leader.
//!
//! [`brute_force_best`] scores every candidate and is the ground truth; the
//! `predict_*` functions give the closed-form optimal placements for paths,
//! cycles and y-trees, and [`check_balanced_tree_placement`] certifies
//! two-bin optima on general trees.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diversity::{bin_opinions_snapped, BinHistogram, DiversityScore, Measure, DEFAULT_SNAP_TOL};
use crate::dynamics::steady_state;
use crate::error::{Error, Result};
use crate::graph::{partition_followers, tree_path, Graph, LeaderConfig};

/// Scores within this distance of the best are tied for the optimum.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub l1: usize,
    pub simpson: f64,
    pub shannon: f64,
    pub counts: Vec<usize>,
}

impl CandidateScore {
    pub fn score(&self) -> DiversityScore {
        DiversityScore {
            simpson: self.simpson,
            shannon: self.shannon,
        }
    }

    pub fn get(&self, measure: Measure) -> f64 {
        self.score().get(measure)
    }
}

/// Full score table over every candidate `l1 != l0`, ordered by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub l0: usize,
    #[serde(rename = "R")]
    pub bins: usize,
    pub n_f: usize,
    pub scores: Vec<CandidateScore>,
    pub argmax_simpson: Vec<usize>,
    pub argmax_shannon: Vec<usize>,
}

impl PlacementResult {
    pub fn argmax(&self, measure: Measure) -> &[usize] {
        match measure {
            Measure::Simpson => &self.argmax_simpson,
            Measure::Shannon => &self.argmax_shannon,
        }
    }

    pub fn best(&self, measure: Measure) -> f64 {
        self.scores
            .iter()
            .map(|c| c.get(measure))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn candidate(&self, l1: usize) -> Option<&CandidateScore> {
        self.scores
            .binary_search_by_key(&l1, |c| c.l1)
            .ok()
            .map(|i| &self.scores[i])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("placement result serializes")
    }

    /// Aligned `l1 | Simpson | Shannon` table, three decimals rounded half-up.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>4} | {:>7} | {:>7}", "l1", "Simpson", "Shannon");
        let _ = writeln!(out, "-----+---------+--------");
        for c in &self.scores {
            let _ = writeln!(
                out,
                "{:>4} | {:>7} | {:>7}",
                c.l1,
                round3(c.simpson),
                round3(c.shannon)
            );
        }
        out
    }
}

/// Three decimals, ties rounded up. A 1e-9 nudge keeps values like 0.0625
/// that print from below in binary from rounding down.
pub fn round3(value: f64) -> String {
    let scaled = (value * 1000.0 + 0.5 + 1e-9).floor();
    format!("{:.3}", scaled / 1000.0)
}

fn argmax_of(scores: &[CandidateScore], measure: Measure) -> Vec<usize> {
    let best = scores
        .iter()
        .map(|c| c.get(measure))
        .fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .filter(|c| c.get(measure) >= best - TIE_TOL)
        .map(|c| c.l1)
        .collect()
}

/// Histogram of the converged opinions for one leader pair.
pub fn placement_histogram(g: &Graph, l0: usize, l1: usize, bins: usize, snap_tol: f64) -> Result<BinHistogram> {
    let lc = LeaderConfig::pair(g, l0, l1)?;
    bin_opinions_snapped(&steady_state(g, &lc)?, bins, snap_tol)
}

pub fn brute_force_best(g: &Graph, l0: usize, bins: usize) -> Result<PlacementResult> {
    brute_force_best_snapped(g, l0, bins, DEFAULT_SNAP_TOL)
}

/// Evaluates every `l1 != l0` and collects both argmax sets.
pub fn brute_force_best_snapped(g: &Graph, l0: usize, bins: usize, snap_tol: f64) -> Result<PlacementResult> {
    g.check_node(l0)?;
    let n_f = g.n().saturating_sub(2);
    if n_f < 2 {
        return Err(Error::TooFewFollowers(n_f));
    }
    let scores = g
        .nodes()
        .filter(|&l1| l1 != l0)
        .map(|l1| {
            let h = placement_histogram(g, l0, l1, bins, snap_tol)?;
            let s = DiversityScore::of(&h)?;
            Ok(CandidateScore {
                l1,
                simpson: s.simpson,
                shannon: s.shannon,
                counts: h.counts().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlacementResult {
        l0,
        bins,
        n_f,
        argmax_simpson: argmax_of(&scores, Measure::Simpson),
        argmax_shannon: argmax_of(&scores, Measure::Shannon),
        scores,
    })
}

/// The two bin counts with closed-form optimal placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinRegime {
    /// `R = n_f`.
    Followers,
    /// `R = 2`.
    Two,
}

impl BinRegime {
    pub fn of(bins: usize, n_f: usize) -> Option<Self> {
        if bins == n_f {
            Some(BinRegime::Followers)
        } else if bins == 2 {
            Some(BinRegime::Two)
        } else {
            None
        }
    }

    pub fn bins(self, n_f: usize) -> usize {
        match self {
            BinRegime::Followers => n_f,
            BinRegime::Two => 2,
        }
    }
}

/// Optimal 1-leader on the canonical path `1..=n` with `l0 = k`.
///
/// With one bin per follower the best place is the endpoint farthest from
/// `k` (both endpoints from the exact center). With two bins it is the
/// mirror placement `n - k + 1` for `k < n/2` and `n - k` otherwise; that
/// rule is reported as stated and is not optimal for every `k` (the node
/// is dropped when it is not a valid candidate).
pub fn predict_path(n: usize, k: usize, regime: BinRegime) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::EndpointOutOfRange { node: k, n });
    }
    Ok(match regime {
        BinRegime::Followers => {
            let (below, above) = (k - 1, n - k);
            match below.cmp(&above) {
                std::cmp::Ordering::Less => vec![n],
                std::cmp::Ordering::Greater => vec![1],
                std::cmp::Ordering::Equal => vec![1, n],
            }
        }
        BinRegime::Two => {
            let j = if 2 * k < n { n + 1 - k } else { n - k };
            if j >= 1 && j != k {
                vec![j]
            } else {
                Vec::new()
            }
        }
    })
}

/// Optimal 1-leaders on the canonical cycle with `l0 = 1`.
///
/// One bin per follower: the two neighbors of node 1. Two bins: every
/// candidate when `n_f` is odd, the even labels when `n_f` is even.
pub fn predict_cycle(n: usize, regime: BinRegime) -> Vec<usize> {
    let n_f = n.saturating_sub(2);
    match regime {
        BinRegime::Followers => vec![2, n],
        BinRegime::Two if n_f % 2 == 1 => (2..=n).collect(),
        BinRegime::Two => (2..=n).step_by(2).collect(),
    }
}

/// [`predict_cycle`] for an arbitrary `l0`, by rotating labels so that `l0`
/// plays node 1.
pub fn predict_cycle_from(n: usize, l0: usize, regime: BinRegime) -> Vec<usize> {
    let mut nodes: Vec<usize> = predict_cycle(n, regime)
        .into_iter()
        .map(|v| (v - 1 + l0 - 1) % n + 1)
        .collect();
    nodes.sort_unstable();
    nodes
}

/// True when the tree has exactly one degree-3 node and no other node above
/// degree 2.
pub fn is_y_tree(g: &Graph) -> bool {
    g.is_tree()
        && g.nodes().filter(|&v| g.degree(v) == 3).count() == 1
        && g.nodes().all(|v| g.degree(v) <= 3)
}

/// Optimal 1-leaders on a y-tree with `l0` at a leaf, one bin per follower:
/// the leaf at the end of the longest path from `l0` together with its
/// neighbor (both farthest leaves and neighbors when the two arms tie).
pub fn predict_y_tree(g: &Graph, l0: usize) -> Result<Vec<usize>> {
    g.check_node(l0)?;
    if !is_y_tree(g) {
        return Err(Error::NotAYTree);
    }
    if g.degree(l0) != 1 {
        return Err(Error::LeaderNotLeaf(l0));
    }
    let reach: Vec<(usize, usize)> = g
        .leaves()
        .into_iter()
        .filter(|&u| u != l0)
        .map(|u| Ok((u, tree_path(g, l0, u)?.len())))
        .collect::<Result<_>>()?;
    let longest = reach.iter().map(|&(_, d)| d).max().expect("y-tree has three leaves");
    let mut nodes: Vec<usize> = reach
        .iter()
        .filter(|&&(_, d)| d == longest)
        .flat_map(|&(u, _)| [u, g.neighbors(u)[0]])
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    Ok(nodes)
}

/// Two-bin balance certificate for a tree placement.
///
/// Holds when as many followers sit behind `l1` as behind `l0` and the
/// followers between the leaders split across the two bins with counts
/// differing by at most one. The split is read off the computed opinions.
pub fn check_balanced_tree_placement(g: &Graph, l0: usize, l1: usize) -> Result<bool> {
    check_balanced_tree_placement_snapped(g, l0, l1, DEFAULT_SNAP_TOL)
}

pub fn check_balanced_tree_placement_snapped(g: &Graph, l0: usize, l1: usize, snap_tol: f64) -> Result<bool> {
    let parts = partition_followers(g, l0, l1)?;
    if parts.p1.len() != parts.p3.len() {
        return Ok(false);
    }
    let x = steady_state(g, &LeaderConfig::pair(g, l0, l1)?)?;
    let between: Vec<f64> = parts
        .p2
        .iter()
        .map(|&v| x.get(v).expect("P2 members are followers"))
        .collect();
    let split = crate::diversity::bin_values(&between, 2, snap_tol)?;
    let (c1, c2) = (split.counts()[0], split.counts()[1]);
    Ok(c1.abs_diff(c2) <= 1)
}

/// Every `l1` that passes [`check_balanced_tree_placement`] for this `l0`.
pub fn balanced_placements(g: &Graph, l0: usize, snap_tol: f64) -> Result<Vec<usize>> {
    g.require_tree()?;
    g.check_node(l0)?;
    let mut out = Vec::new();
    for l1 in g.nodes().filter(|&v| v != l0) {
        if check_balanced_tree_placement_snapped(g, l0, l1, snap_tol)? {
            out.push(l1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Topology};
    use crate::test_graphs::tree11;

    fn gen(t: Topology) -> Graph {
        generate(t).unwrap()
    }

    #[test]
    fn fig3_measures_disagree() {
        let r = brute_force_best(&tree11(), 1, 9).unwrap();
        assert_eq!(r.argmax_simpson, vec![10, 11]);
        assert_eq!(r.argmax_shannon, vec![5, 6]);
        assert_eq!(r.scores.len(), 10);
        assert_eq!(r.candidate(2).unwrap().simpson, 0.0);
        assert_eq!(r.candidate(2).unwrap().shannon, 0.0);
        assert!(r.candidate(1).is_none());
    }

    #[test]
    fn brute_force_small_families() {
        let r = brute_force_best(&gen(Topology::Path(6)), 1, 4).unwrap();
        assert_eq!(r.argmax_simpson, vec![6]);
        assert_eq!(r.argmax_shannon, vec![6]);

        for bins in [3, 4] {
            let r = brute_force_best(&gen(Topology::Cycle(5)), 1, bins).unwrap();
            assert_eq!(r.argmax_simpson, vec![2, 5]);
            assert_eq!(r.argmax_shannon, vec![2, 5]);
        }

        assert_eq!(
            brute_force_best(&gen(Topology::Path(3)), 1, 2),
            Err(Error::TooFewFollowers(1))
        );
    }

    #[test]
    fn path_predictions() {
        assert_eq!(predict_path(10, 3, BinRegime::Followers).unwrap(), vec![10]);
        assert_eq!(predict_path(10, 3, BinRegime::Two).unwrap(), vec![8]);
        assert_eq!(predict_path(10, 8, BinRegime::Followers).unwrap(), vec![1]);
        // Exact center of an odd path: both ends.
        assert_eq!(predict_path(9, 5, BinRegime::Followers).unwrap(), vec![1, 9]);
        // Even path, k = n/2: the far end is n.
        assert_eq!(predict_path(6, 3, BinRegime::Followers).unwrap(), vec![6]);
        // Stated two-bin rule lands on l0 or off the path: nothing to predict.
        assert!(predict_path(6, 3, BinRegime::Two).unwrap().is_empty());
        assert!(predict_path(6, 6, BinRegime::Two).unwrap().is_empty());
        assert!(predict_path(6, 7, BinRegime::Two).is_err());
    }

    #[test]
    fn cycle_predictions() {
        assert_eq!(predict_cycle(6, BinRegime::Followers), vec![2, 6]);
        assert_eq!(predict_cycle(7, BinRegime::Two), vec![2, 3, 4, 5, 6, 7]);
        assert_eq!(predict_cycle(8, BinRegime::Two), vec![2, 4, 6, 8]);
        assert_eq!(predict_cycle_from(6, 4, BinRegime::Followers), vec![3, 5]);
        assert_eq!(predict_cycle_from(8, 2, BinRegime::Two), vec![1, 3, 5, 7]);
    }

    #[test]
    fn y_tree_predictions() {
        // y_tree(2,4,2): leaves 1 (arm0), 7 (arm1), 9 (arm2); center 3.
        let g = gen(Topology::YTree([2, 4, 2]));
        assert_eq!(predict_y_tree(&g, 1).unwrap(), vec![6, 7]);
        let g = gen(Topology::YTree([2, 3, 3]));
        assert_eq!(predict_y_tree(&g, 1).unwrap(), vec![5, 6, 8, 9]);
        assert_eq!(predict_y_tree(&tree11(), 1), Err(Error::NotAYTree));
        assert_eq!(predict_y_tree(&g, 3), Err(Error::LeaderNotLeaf(3)));
        assert_eq!(predict_y_tree(&gen(Topology::Path(5)), 1), Err(Error::NotAYTree));
    }

    #[test]
    fn balanced_tree_examples() {
        let g = tree11();
        assert!(check_balanced_tree_placement(&g, 1, 11).unwrap());
        assert!(!check_balanced_tree_placement(&g, 1, 10).unwrap());
        let r = brute_force_best(&g, 1, 2).unwrap();
        for l1 in [10, 11] {
            assert!(r.argmax_simpson.contains(&l1));
            assert!(r.argmax_shannon.contains(&l1));
        }
        assert!(check_balanced_tree_placement(&gen(Topology::Path(6)), 1, 6).unwrap());
        assert!(matches!(
            check_balanced_tree_placement(&gen(Topology::Cycle(6)), 1, 4),
            Err(Error::NotATree { .. })
        ));
    }

    #[test]
    fn table_layout() {
        let r = brute_force_best(&tree11(), 1, 9).unwrap();
        let table = r.to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "  l1 | Simpson | Shannon");
        assert_eq!(lines[2], "   2 |   0.000 |   0.000");
        assert_eq!(lines[5], "   5 |   0.583 |   1.003");
        assert_eq!(lines[11], "  11 |   0.639 |   0.937");
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(round3(0.0625), "0.063");
        assert_eq!(round3(0.0005), "0.001");
        assert_eq!(round3(0.63888), "0.639");
        assert_eq!(round3(1.0), "1.000");
        assert_eq!(round3(0.0), "0.000");
    }
}
