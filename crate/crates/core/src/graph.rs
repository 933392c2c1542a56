//! Undirected simple graphs on nodes `1..=n`, leader configurations and the
//! grounded Laplacian blocks derived from them, plus the tree utilities the
//! placement theorems lean on.
//!
//! All public interfaces use 1-based node labels.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A connected, undirected, unweighted simple graph.
///
/// Edges keep their insertion order and orientation so the edge-list text
/// format round-trips exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and builds a graph. Connectivity is checked here once; every
    /// downstream routine assumes it.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewNodes { min: 1, got: 0 });
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for node in [u, v] {
                if node == 0 || node > n {
                    return Err(Error::EndpointOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph {
            n,
            edges: edges.to_vec(),
            adj,
        };
        let reached = g.reachable_from(1, None);
        if let Some(unreached) = (1..=n).find(|&v| !reached[v - 1]) {
            return Err(Error::DisconnectedGraph { unreached });
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// Neighbors of `v` in ascending label order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.adj[u - 1].binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.nodes().filter(|&v| self.degree(v) == 1).collect()
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::EndpointOutOfRange { node: v, n: self.n })
        }
    }

    pub(crate) fn require_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree {
                n: self.n,
                edges: self.edges.len(),
            })
        }
    }

    /// Reachability from `start`, optionally treating `blocked` as removed.
    /// Indexed by `label - 1`.
    pub fn reachable_from(&self, start: usize, blocked: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if Some(start) == blocked {
            return seen;
        }
        seen[start - 1] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if Some(w) != blocked && !seen[w - 1] {
                    seen[w - 1] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// BFS parents when the graph is rooted at `root`; `parent[root - 1]` is 0.
    fn bfs_parents(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.n];
        parent[root - 1] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if parent[w - 1] == usize::MAX {
                    parent[w - 1] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Serializes to the edge-list text format: `n <count>` then one `u v`
    /// line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. `#` starts a comment; blank lines are
    /// skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |msg: String| Error::Parse { line: line_no, msg };
            match n {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(parse_err(format!("expected `n <count>`, found `{line}`")));
                    }
                    let count = fields[1]
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad node count `{}`: {e}", fields[1])))?;
                    n = Some(count);
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected `u v`, found `{line}`")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, field) in ends.iter_mut().zip(&fields) {
                        *slot = field
                            .parse()
                            .map_err(|e| parse_err(format!("bad node label `{field}`: {e}")))?;
                    }
                    edges.push((ends[0], ends[1]));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `n <count>` header".into(),
        })?;
        Graph::new(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Generator families with canonical labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Path(usize),
    Cycle(usize),
    /// Arm lengths; arm 0 is labeled leaf-to-center first.
    YTree([usize; 3]),
}

impl Topology {
    pub fn generate(&self) -> Result<Graph> {
        generate(*self)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Path(n) => write!(f, "path:{n}"),
            Topology::Cycle(n) => write!(f, "cycle:{n}"),
            Topology::YTree([a, b, c]) => write!(f, "ytree:{a},{b},{c}"),
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    /// Grammar: `path:N`, `cycle:N`, `ytree:A,B,C`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 0,
            msg: format!("generator `{s}`: {msg}"),
        };
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| bad("expected `path:N`, `cycle:N` or `ytree:A,B,C`"))?;
        let nums = args
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        match (kind.trim(), nums.as_slice()) {
            ("path", [n]) => Ok(Topology::Path(*n)),
            ("cycle", [n]) => Ok(Topology::Cycle(*n)),
            ("ytree", [a, b, c]) => Ok(Topology::YTree([*a, *b, *c])),
            _ => Err(bad("unknown family or wrong argument count")),
        }
    }
}

pub fn generate(topology: Topology) -> Result<Graph> {
    match topology {
        Topology::Path(n) => {
            if n < 3 {
                return Err(Error::TooFewNodes { min: 3, got: n });
            }
            let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
            Graph::new(n, &edges)
        }
        Topology::Cycle(n) => {
            if n < 3 {
                return Err(Error::TooFewNodes { min: 3, got: n });
            }
            let mut edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
            edges.push((n, 1));
            Graph::new(n, &edges)
        }
        Topology::YTree(arms) => {
            if arms.contains(&0) {
                return Err(Error::ArmTooShort);
            }
            let [a0, a1, a2] = arms;
            let center = a0 + 1;
            let mut edges: Vec<_> = (1..=a0).map(|v| (v, v + 1)).collect();
            let mut next = center + 1;
            for len in [a1, a2] {
                let mut prev = center;
                for _ in 0..len {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
            }
            Graph::new(a0 + a1 + a2 + 1, &edges)
        }
    }
}

/// Uniform random labeled tree on `n >= 2` nodes via a Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes { min: 2, got: n });
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &seq {
        let leaf = (1..=n).find(|&u| degree[u] == 1).expect("prufer leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.sort_unstable();
    Graph::new(n, &edges)
}

/// Disjoint 0-leader and 1-leader sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderConfig {
    zeros: BTreeSet<usize>,
    ones: BTreeSet<usize>,
}

impl LeaderConfig {
    pub fn new(
        g: &Graph,
        zeros: impl IntoIterator<Item = usize>,
        ones: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let zeros: BTreeSet<usize> = zeros.into_iter().collect();
        let ones: BTreeSet<usize> = ones.into_iter().collect();
        if zeros.is_empty() || ones.is_empty() {
            return Err(Error::InvalidLeaders("both leader sets must be non-empty".into()));
        }
        for &v in zeros.iter().chain(&ones) {
            g.check_node(v)?;
        }
        if let Some(v) = zeros.intersection(&ones).next() {
            return Err(Error::InvalidLeaders(format!("node {v} is in both leader sets")));
        }
        if zeros.len() + ones.len() >= g.n() {
            return Err(Error::InvalidLeaders("no followers remain".into()));
        }
        Ok(LeaderConfig { zeros, ones })
    }

    /// Single 0-leader `l0` and single 1-leader `l1`.
    pub fn pair(g: &Graph, l0: usize, l1: usize) -> Result<Self> {
        Self::new(g, [l0], [l1])
    }

    pub fn zeros(&self) -> &BTreeSet<usize> {
        &self.zeros
    }

    pub fn ones(&self) -> &BTreeSet<usize> {
        &self.ones
    }

    pub fn is_leader(&self, v: usize) -> bool {
        self.zeros.contains(&v) || self.ones.contains(&v)
    }

    /// Pinned state of a leader, `None` for followers.
    pub fn state(&self, v: usize) -> Option<f64> {
        if self.zeros.contains(&v) {
            Some(0.0)
        } else if self.ones.contains(&v) {
            Some(1.0)
        } else {
            None
        }
    }

    /// Leaders in ascending label order.
    pub fn leaders(&self) -> Vec<usize> {
        self.zeros.union(&self.ones).copied().collect()
    }

    /// Followers in ascending label order.
    pub fn followers(&self, g: &Graph) -> Vec<usize> {
        g.nodes().filter(|&v| !self.is_leader(v)).collect()
    }
}

/// Follower-follower and follower-leader blocks of the graph Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianBlocks {
    pub lff: DMatrix<f64>,
    pub lfl: DMatrix<f64>,
    /// Row order of `lff`/`lfl`: followers by ascending label.
    pub followers: Vec<usize>,
    /// Column order of `lfl`: leaders by ascending label.
    pub leaders: Vec<usize>,
    /// Pinned leader states in `leaders` order.
    pub leader_states: DVector<f64>,
    row: Vec<Option<usize>>,
}

impl LaplacianBlocks {
    /// Matrix row of follower `v`.
    pub fn row_of(&self, v: usize) -> Option<usize> {
        self.row.get(v.wrapping_sub(1)).copied().flatten()
    }

    pub fn follower_count(&self) -> usize {
        self.followers.len()
    }
}

pub fn laplacian_blocks(g: &Graph, lc: &LeaderConfig) -> LaplacianBlocks {
    let followers = lc.followers(g);
    let leaders = lc.leaders();
    let mut row = vec![None; g.n()];
    for (i, &v) in followers.iter().enumerate() {
        row[v - 1] = Some(i);
    }
    let mut col = vec![None; g.n()];
    for (i, &v) in leaders.iter().enumerate() {
        col[v - 1] = Some(i);
    }
    let nf = followers.len();
    let mut lff = DMatrix::zeros(nf, nf);
    let mut lfl = DMatrix::zeros(nf, leaders.len());
    for (i, &v) in followers.iter().enumerate() {
        lff[(i, i)] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            match (row[w - 1], col[w - 1]) {
                (Some(j), _) => lff[(i, j)] = -1.0,
                (_, Some(j)) => lfl[(i, j)] = -1.0,
                _ => unreachable!("node is neither follower nor leader"),
            }
        }
    }
    let leader_states = DVector::from_iterator(
        leaders.len(),
        leaders.iter().map(|&v| lc.state(v).expect("leader state")),
    );
    LaplacianBlocks {
        lff,
        lfl,
        followers,
        leaders,
        leader_states,
        row,
    }
}

/// Nodes on the unique tree path from `a` to `b`, both ends included.
pub fn tree_path(g: &Graph, a: usize, b: usize) -> Result<Vec<usize>> {
    g.require_tree()?;
    g.check_node(a)?;
    g.check_node(b)?;
    let parent = g.bfs_parents(b);
    let mut path = vec![a];
    let mut cur = a;
    while cur != b {
        cur = parent[cur - 1];
        path.push(cur);
    }
    Ok(path)
}

/// Nodes whose path to `root` runs through `pivot`, excluding `pivot` itself.
///
/// On a tree this is the subtree hanging below `pivot` when rooted at `root`.
pub fn hanging_subtree(g: &Graph, root: usize, pivot: usize) -> Result<Vec<usize>> {
    g.require_tree()?;
    g.check_node(root)?;
    g.check_node(pivot)?;
    if root == pivot {
        return Ok(Vec::new());
    }
    let parent = g.bfs_parents(root);
    let toward_root = parent[pivot - 1];
    let mut below: Vec<usize> = g
        .reachable_from(pivot, Some(toward_root))
        .iter()
        .enumerate()
        .filter(|&(i, &r)| r && i + 1 != pivot)
        .map(|(i, _)| i + 1)
        .collect();
    below.sort_unstable();
    Ok(below)
}

/// First node of the tree path `a..b` met when walking from `u` toward `a`.
///
/// For `u` on the path this is `u` itself; otherwise it is the junction
/// where `u`'s branch hangs off the path.
pub fn project_onto_path(g: &Graph, a: usize, b: usize, u: usize) -> Result<usize> {
    let on_path = tree_path(g, a, b)?;
    let walk = tree_path(g, u, a)?;
    Ok(walk
        .into_iter()
        .find(|v| on_path.contains(v))
        .expect("walk ends at a, which is on the path"))
}

/// Followers behind `l0` (P1), between the leaders (P2) and behind `l1` (P3).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowerPartition {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub p3: Vec<usize>,
}

pub fn partition_followers(g: &Graph, l0: usize, l1: usize) -> Result<FollowerPartition> {
    g.require_tree()?;
    if l0 == l1 {
        return Err(Error::InvalidLeaders("l0 and l1 must differ".into()));
    }
    let p1 = hanging_subtree(g, l1, l0)?;
    let p3 = hanging_subtree(g, l0, l1)?;
    let p2 = g
        .nodes()
        .filter(|&v| v != l0 && v != l1)
        .filter(|v| p1.binary_search(v).is_err() && p3.binary_search(v).is_err())
        .collect();
    Ok(FollowerPartition { p1, p2, p3 })
}
