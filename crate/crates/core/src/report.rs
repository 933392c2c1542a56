//! Placement experiment reports: the brute-force score table, theoretical
//! maxima beside the attained optimum, and the matching closed-form
//! predictor when the graph belongs to a family that has one.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::diversity::{max_diversity, BinSpec, Measure, DEFAULT_SNAP_TOL};
use crate::dynamics::format_significant;
use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};
use crate::placement::{
    balanced_placements, brute_force_best_snapped, is_y_tree, predict_cycle_from, predict_path,
    predict_y_tree, round3, BinRegime, PlacementResult, TIE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Canonically labeled path `1 - 2 - ... - n`.
    Path,
    /// Canonically labeled cycle `1 - 2 - ... - n - 1`.
    Cycle,
    YTree,
    Tree,
    General,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Path => "path",
            Shape::Cycle => "cycle",
            Shape::YTree => "y-tree",
            Shape::Tree => "tree",
            Shape::General => "general",
        })
    }
}

impl Shape {
    pub fn of_topology(t: Topology) -> Self {
        match t {
            Topology::Path(_) => Shape::Path,
            Topology::Cycle(_) => Shape::Cycle,
            Topology::YTree(_) => Shape::YTree,
        }
    }

    /// Structural recognition. Paths and cycles count only under their
    /// canonical labeling since their predictors are stated in it.
    pub fn recognize(g: &Graph) -> Self {
        let n = g.n();
        let chain = (1..n).all(|v| g.has_edge(v, v + 1));
        if chain && g.edge_count() + 1 == n {
            Shape::Path
        } else if chain && n >= 3 && g.edge_count() == n && g.has_edge(n, 1) {
            Shape::Cycle
        } else if is_y_tree(g) {
            Shape::YTree
        } else if g.is_tree() {
            Shape::Tree
        } else {
            Shape::General
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaceRequest {
    pub l0: usize,
    pub bins: BinSpec,
    pub snap_tol: f64,
}

impl PlaceRequest {
    pub fn new(l0: usize, bins: BinSpec) -> Self {
        PlaceRequest {
            l0,
            bins,
            snap_tol: DEFAULT_SNAP_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub simpson: f64,
    pub shannon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorCheck {
    pub rule: String,
    pub predicted: Vec<usize>,
    pub agrees_simpson: bool,
    pub agrees_shannon: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub n: usize,
    pub edges: usize,
    pub shape: Shape,
    pub result: PlacementResult,
    pub bounds: Option<Bounds>,
    pub predictor: Option<PredictorCheck>,
    pub notes: Vec<String>,
}

/// Runs the brute-force search and assembles the report.
pub fn place(g: &Graph, topology: Option<Topology>, req: &PlaceRequest) -> Result<PlaceReport> {
    g.check_node(req.l0)?;
    let n_f = g.n().saturating_sub(2);
    let bins = req.bins.resolve(n_f);
    let result = brute_force_best_snapped(g, req.l0, bins, req.snap_tol)?;
    let shape = topology.map_or_else(|| Shape::recognize(g), Shape::of_topology);
    let bounds = match (
        max_diversity(n_f, bins, Measure::Simpson),
        max_diversity(n_f, bins, Measure::Shannon),
    ) {
        (Ok(simpson), Ok(shannon)) => Some(Bounds { simpson, shannon }),
        _ => None,
    };
    let mut notes = Vec::new();
    let predicted = predictor_for(g, shape, req, &result, &mut notes)?;
    let predictor = predicted.map(|(rule, predicted)| {
        let agrees = |m: Measure| {
            !predicted.is_empty() && predicted.iter().all(|v| result.argmax(m).contains(v))
        };
        PredictorCheck {
            agrees_simpson: agrees(Measure::Simpson),
            agrees_shannon: agrees(Measure::Shannon),
            rule,
            predicted,
        }
    });
    Ok(PlaceReport {
        n: g.n(),
        edges: g.edge_count(),
        shape,
        result,
        bounds,
        predictor,
        notes,
    })
}

fn predictor_for(
    g: &Graph,
    shape: Shape,
    req: &PlaceRequest,
    result: &PlacementResult,
    notes: &mut Vec<String>,
) -> Result<Option<(String, Vec<usize>)>> {
    let n = g.n();
    let regime = BinRegime::of(result.bins, result.n_f);
    let Some(regime) = regime else {
        notes.push(format!(
            "no closed-form placement for R={} (only R=2 or R=n_f)",
            result.bins
        ));
        return Ok(None);
    };
    Ok(match (shape, regime) {
        (Shape::Path, BinRegime::Followers) => Some((
            "path, R=n_f: endpoint farthest from l0".into(),
            predict_path(n, req.l0, regime)?,
        )),
        (Shape::Path, BinRegime::Two) => {
            let predicted = predict_path(n, req.l0, regime)?;
            if predicted.is_empty() {
                notes.push("path, R=2: mirror rule gives no valid candidate for this l0".into());
            }
            Some(("path, R=2: j = n-k+1 if k < n/2 else n-k".into(), predicted))
        }
        (Shape::Cycle, BinRegime::Followers) => Some((
            "cycle, R=n_f: both neighbors of l0".into(),
            predict_cycle_from(n, req.l0, regime),
        )),
        (Shape::Cycle, BinRegime::Two) => Some((
            "cycle, R=2: all candidates (n_f odd) or even offsets from l0 (n_f even)".into(),
            predict_cycle_from(n, req.l0, regime),
        )),
        (Shape::YTree, BinRegime::Followers) => match predict_y_tree(g, req.l0) {
            Ok(p) => Some((
                "y-tree, R=n_f: farthest leaf from l0 and its neighbor".into(),
                p,
            )),
            Err(Error::LeaderNotLeaf(_)) => {
                notes.push("y-tree predictor needs l0 at a leaf".into());
                None
            }
            Err(e) => return Err(e),
        },
        (Shape::YTree | Shape::Tree, BinRegime::Two) => {
            let balanced = balanced_placements(g, req.l0, req.snap_tol)?;
            if balanced.is_empty() {
                notes.push("tree, R=2: no balanced placement exists for this l0".into());
                None
            } else {
                Some(("tree, R=2: balanced placements".into(), balanced))
            }
        }
        _ => None,
    })
}

fn set_string(nodes: &[usize]) -> String {
    let inner: Vec<String> = nodes.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

impl PlaceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `l1,simpson,shannon` rows with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l1,simpson,shannon\n");
        for c in &self.result.scores {
            let _ = writeln!(
                out,
                "{},{},{}",
                c.l1,
                format_significant(c.simpson, 12),
                format_significant(c.shannon, 12)
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let r = &self.result;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph: n={} edges={} shape={}",
            self.n, self.edges, self.shape
        );
        let _ = writeln!(out, "l0={} R={} n_f={}", r.l0, r.bins, r.n_f);
        out.push('\n');
        out.push_str(&r.to_table());
        out.push('\n');
        for m in Measure::ALL {
            let bound = self
                .bounds
                .map(|b| match m {
                    Measure::Simpson => round3(b.simpson),
                    Measure::Shannon => round3(b.shannon),
                })
                .unwrap_or_else(|| "n/a".into());
            let _ = writeln!(
                out,
                "argmax {m}: {} best={} bound={bound}",
                set_string(r.argmax(m)),
                round3(r.best(m))
            );
        }
        if let Some(p) = &self.predictor {
            let verdict = |ok: bool| if ok { "agrees" } else { "DISAGREES" };
            let _ = writeln!(
                out,
                "predictor [{}]: {} simpson={} shannon={}",
                p.rule,
                set_string(&p.predicted),
                verdict(p.agrees_simpson),
                verdict(p.agrees_shannon)
            );
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    /// Attained optima never exceed the theoretical maxima.
    pub fn within_bounds(&self) -> bool {
        self.bounds.is_none_or(|b| {
            self.result.best(Measure::Simpson) <= b.simpson + TIE_TOL
                && self.result.best(Measure::Shannon) <= b.shannon + TIE_TOL
        })
    }
}
