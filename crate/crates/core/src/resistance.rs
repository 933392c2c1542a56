//! Effective resistances with the leader set grounded.
//!
//! Leaders are removed from the Laplacian (equivalently, merged into one
//! ground node), so every quantity here is read off the inverse of the
//! follower block `Lff`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::dynamics::OpinionVector;
use crate::error::{Error, Result};
use crate::graph::{laplacian_blocks, Graph, LeaderConfig};

/// Inverse of the grounded Laplacian for one leader configuration.
///
/// Symmetric positive definite with non-negative entries; an entry is
/// strictly positive exactly when its two followers are connected without
/// passing through a leader.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedInverse {
    pub inv: DMatrix<f64>,
    pub followers: Vec<usize>,
    injection: DVector<f64>,
    row: Vec<Option<usize>>,
}

impl GroundedInverse {
    pub fn row_of(&self, v: usize) -> Option<usize> {
        self.row.get(v.wrapping_sub(1)).copied().flatten()
    }

    fn index(&self, v: usize) -> Result<usize> {
        self.row_of(v).ok_or(Error::NotAFollower(v))
    }

    /// Entry `inv(u, v)` by node label.
    pub fn entry(&self, u: usize, v: usize) -> Result<f64> {
        Ok(self.inv[(self.index(u)?, self.index(v)?)])
    }

    /// Follower opinions as `inv * (-Lfl x_l)`.
    pub fn opinions(&self) -> OpinionVector {
        let x = &self.inv * &self.injection;
        OpinionVector::from_parts(self.followers.clone(), x.iter().copied().collect())
    }
}

pub fn grounded_inverse(g: &Graph, lc: &LeaderConfig) -> Result<GroundedInverse> {
    let blocks = laplacian_blocks(g, lc);
    let inv = blocks
        .lff
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SolveFailure("follower block is not positive definite".into()))?
        .inverse();
    let check = &inv * &blocks.lff;
    let nf = blocks.follower_count();
    let off = (0..nf)
        .flat_map(|i| (0..nf).map(move |j| (i, j)))
        .map(|(i, j)| (check[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    if !(off <= 1e-10) {
        return Err(Error::SolveFailure(format!(
            "inverse check off by {off:e}"
        )));
    }
    let mut row = vec![None; g.n()];
    for (i, &v) in blocks.followers.iter().enumerate() {
        row[v - 1] = Some(i);
    }
    Ok(GroundedInverse {
        inv,
        injection: -(&blocks.lfl * &blocks.leader_states),
        followers: blocks.followers,
        row,
    })
}

/// `inv(u,u) + inv(v,v) - 2 inv(u,v)`.
pub fn pairwise_resistance(gi: &GroundedInverse, u: usize, v: usize) -> Result<f64> {
    let (i, j) = (gi.index(u)?, gi.index(v)?);
    if i == j {
        return Ok(0.0);
    }
    Ok(gi.inv[(i, i)] + gi.inv[(j, j)] - 2.0 * gi.inv[(i, j)])
}

/// Resistance between `u` and the grounded leader set: `inv(u,u)`.
pub fn leader_set_resistance(gi: &GroundedInverse, u: usize) -> Result<f64> {
    let i = gi.index(u)?;
    Ok(gi.inv[(i, i)])
}

/// Followers (other than `u`, `v`) whose removal disconnects `u` from `v`
/// once all leaders are merged into a single ground node.
pub fn separating_vertices(g: &Graph, lc: &LeaderConfig, u: usize, v: usize) -> Result<Vec<usize>> {
    for w in [u, v] {
        g.check_node(w)?;
        if lc.is_leader(w) {
            return Err(Error::NotAFollower(w));
        }
    }
    if u == v {
        return Ok(Vec::new());
    }
    Ok(lc
        .followers(g)
        .into_iter()
        .filter(|&x| x != u && x != v)
        .filter(|&x| !grounded_reachable(g, lc, u, x)[v - 1])
        .collect())
}

/// Reachability in the grounded graph from follower `start` with `blocked`
/// removed. Entering any leader enters them all.
fn grounded_reachable(g: &Graph, lc: &LeaderConfig, start: usize, blocked: usize) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    seen[start - 1] = true;
    let mut queue = VecDeque::from([start]);
    let mut grounded = false;
    while let Some(a) = queue.pop_front() {
        let mut next: Vec<usize> = g.neighbors(a).to_vec();
        if lc.is_leader(a) && !grounded {
            grounded = true;
            next.extend(lc.leaders());
        }
        for w in next {
            if w != blocked && !seen[w - 1] {
                seen[w - 1] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}
