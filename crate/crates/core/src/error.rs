use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph is disconnected: node {unreached} is not reachable from node 1")]
    DisconnectedGraph { unreached: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("node {node} is outside 1..={n}")]
    EndpointOutOfRange { node: usize, n: usize },
    #[error("too few nodes: need at least {min}, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("y-tree arms must have length >= 1")]
    ArmTooShort,
    #[error("graph is not a tree ({edges} edges on {n} nodes)")]
    NotATree { n: usize, edges: usize },
    #[error("graph is not a y-tree (needs exactly one degree-3 node, all others degree <= 2)")]
    NotAYTree,
    #[error("leader {0} is not a leaf")]
    LeaderNotLeaf(usize),
    #[error("invalid leader configuration: {0}")]
    InvalidLeaders(String),
    #[error("node {0} is not a follower")]
    NotAFollower(usize),
    #[error("leader order violated: need k < j, got k={k}, j={j}")]
    LeaderOrderViolation { k: usize, j: usize },
    #[error("grounded Laplacian solve failed: {0}")]
    SolveFailure(String),
    #[error("step {step} exceeds the explicit Euler stability bound {bound}")]
    UnstableStep { step: f64, bound: f64 },
    #[error("opinion {0} lies outside [0, 1]")]
    OpinionOutOfRange(f64),
    #[error("bin count must be >= 2, got {0}")]
    TooFewBins(usize),
    #[error("need at least 2 followers, got {0}")]
    TooFewFollowers(usize),
    #[error("no closed-form maximum for R={bins} with n_f={followers} (only R=2 or R=n_f)")]
    UnsupportedBinCount { bins: usize, followers: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
