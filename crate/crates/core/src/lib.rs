//! Steady-state opinions in leader-follower French-DeGroot networks, binned
//! Simpson and Shannon opinion diversity, and optimal placement of a single
//! 1-leader given a fixed 0-leader on paths, cycles and trees.
//!
//! Node labels are 1-based throughout.
//!
//! ```
//! use leaderdiv::{brute_force_best, Graph};
//!
//! let g = Graph::new(
//!     11,
//!     &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (7, 8), (7, 9), (7, 10), (10, 11)],
//! )
//! .unwrap();
//! let result = brute_force_best(&g, 1, 9).unwrap();
//! assert_eq!(result.argmax_simpson, vec![10, 11]);
//! assert_eq!(result.argmax_shannon, vec![5, 6]);
//! ```

pub mod diversity;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod placement;
pub mod report;
pub mod resistance;
pub mod verify;

pub use diversity::{
    bin_opinions, bin_opinions_snapped, bin_values, max_diversity, shannon_index, simpson_index,
    BinHistogram, BinSpec, DiversityScore, Measure, DEFAULT_SNAP_TOL,
};
pub use dynamics::{
    default_step, path_closed_form, settle_horizon, simulate, stability_bound, steady_state,
    OpinionVector, Trajectory,
};
pub use error::{Error, Result};
pub use graph::{
    generate, hanging_subtree, laplacian_blocks, partition_followers, project_onto_path,
    random_tree, tree_path, FollowerPartition, Graph, LaplacianBlocks, LeaderConfig, Topology,
};
pub use placement::{
    balanced_placements, brute_force_best, brute_force_best_snapped, check_balanced_tree_placement,
    predict_cycle, predict_cycle_from, predict_path, predict_y_tree, BinRegime, CandidateScore,
    PlacementResult, TIE_TOL,
};
pub use report::{place, PlaceReport, PlaceRequest, Shape};
pub use resistance::{
    grounded_inverse, leader_set_resistance, pairwise_resistance, separating_vertices,
    GroundedInverse,
};
pub use verify::{Suite, VerifyOptions, VerifyReport};
