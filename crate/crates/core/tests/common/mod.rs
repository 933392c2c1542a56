#![allow(dead_code)]

use leaderdiv::{generate, random_tree, Graph, Topology};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Eleven-node tree with branch nodes 2 and 7.
pub fn tree11() -> Graph {
    Graph::new(
        11,
        &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (7, 8), (7, 9), (7, 10), (10, 11)],
    )
    .unwrap()
}

/// Leader-pair instances shared by the simulation cross-checks.
pub fn fixed_suite() -> Vec<(String, Graph, usize, usize)> {
    let mut suite = vec![
        ("path:3 1,3".to_string(), generate(Topology::Path(3)).unwrap(), 1, 3),
        ("path:5 1,5".to_string(), generate(Topology::Path(5)).unwrap(), 1, 5),
        ("path:8 3,6".to_string(), generate(Topology::Path(8)).unwrap(), 3, 6),
        ("cycle:6 1,4".to_string(), generate(Topology::Cycle(6)).unwrap(), 1, 4),
        ("cycle:9 1,2".to_string(), generate(Topology::Cycle(9)).unwrap(), 1, 2),
        ("ytree:2,3,3 1,6".to_string(), generate(Topology::YTree([2, 3, 3])).unwrap(), 1, 6),
        ("tree11 1,11".to_string(), tree11(), 1, 11),
        ("tree11 1,2".to_string(), tree11(), 1, 2),
        ("tree11 6,8".to_string(), tree11(), 6, 8),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..3 {
        let g = random_tree(12, &mut rng).unwrap();
        let leaves = g.leaves();
        let (a, b) = (leaves[0], *leaves.last().unwrap());
        suite.push((format!("random tree #{i} {a},{b}"), g, a, b));
    }
    suite
}

/// Random trees with `4 <= n <= max_n` from a fixed seed.
pub fn random_trees(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(4..=max_n);
            random_tree(n, &mut rng).unwrap()
        })
        .collect()
}
