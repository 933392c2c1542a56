//! Exhaustive sweeps that compare the closed-form placement rules and the
//! grounded-resistance identities against brute force and direct numerics.
//!
//! Every sweep is deterministic: families are enumerated in a fixed order
//! and random trees come from a seeded generator.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diversity::{max_diversity, Measure};
use crate::dynamics::{path_closed_form, steady_state};
use crate::error::{Error, Result};
use crate::graph::{generate, project_onto_path, random_tree, tree_path, Graph, LeaderConfig, Topology};
use crate::placement::{
    balanced_placements, brute_force_best, predict_cycle_from, predict_path, predict_y_tree,
    BinRegime, PlacementResult, TIE_TOL,
};
use crate::resistance::{grounded_inverse, pairwise_resistance, separating_vertices};

/// Absolute tolerance for the numerical identities.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Paths,
    Cycles,
    Ytrees,
    TreesR2,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Paths,
        Suite::Cycles,
        Suite::Ytrees,
        Suite::TreesR2,
        Suite::Appendix,
    ];

    /// Smallest meaningful size bound.
    pub fn min_bound(self) -> usize {
        match self {
            Suite::Ytrees => 1,
            _ => 4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Paths => "paths",
            Suite::Cycles => "cycles",
            Suite::Ytrees => "ytrees",
            Suite::TreesR2 => "trees-R2",
            Suite::Appendix => "appendix",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown suite `{s}` (paths, cycles, ytrees, trees-R2, appendix)"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Largest n for paths, cycles and random trees; longest arm for y-trees.
    pub bound: usize,
    /// Random trees drawn by the tree suites.
    pub trees: usize,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(bound: usize) -> Self {
        VerifyOptions {
            bound,
            trees: 200,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub instance: String,
    pub detail: String,
}

/// Outcome of a stated rule that is recorded rather than asserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub rule: String,
    pub instance: String,
    pub stated: Vec<usize>,
    pub optimal_simpson: bool,
    pub optimal_shannon: bool,
    pub argmax_simpson: Vec<usize>,
    pub argmax_shannon: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub options: VerifyOptions,
    pub checks: Vec<CheckTally>,
    pub counterexamples: Vec<Counterexample>,
    pub audit: Vec<AuditRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn tally(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verify report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (bound {}, trees {}, seed {})",
            self.suite, self.options.bound, self.options.trees, self.options.seed
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<width$}  instances={:<6} failures={}",
                c.name, c.instances, c.failures
            );
        }
        if self.counterexamples.is_empty() {
            out.push_str("counterexamples: none\n");
        } else {
            let _ = writeln!(out, "counterexamples: {}", self.counterexamples.len());
            for cx in &self.counterexamples {
                let _ = writeln!(out, "  [{}] {}: {}", cx.check, cx.instance, cx.detail);
            }
        }
        let mut rules: Vec<&str> = Vec::new();
        for r in &self.audit {
            if !rules.contains(&r.rule.as_str()) {
                rules.push(&r.rule);
            }
        }
        for rule in rules {
            let rows: Vec<&AuditRow> = self.audit.iter().filter(|r| r.rule == rule).collect();
            let hits = rows
                .iter()
                .filter(|r| r.optimal_simpson && r.optimal_shannon)
                .count();
            let _ = writeln!(out, "audit: {rule} ({hits}/{} optimal)", rows.len());
            for r in rows {
                let mark = |ok: bool| if ok { "yes" } else { "no" };
                let _ = writeln!(
                    out,
                    "  {:<22} stated={:<10} simpson-optimal={:<3} shannon-optimal={:<3} argmax={}",
                    r.instance,
                    set_string(&r.stated),
                    mark(r.optimal_simpson),
                    mark(r.optimal_shannon),
                    set_string(&r.argmax_simpson),
                );
            }
        }
        let _ = writeln!(
            out,
            "result: {} ({} counterexamples)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.counterexamples.len()
        );
        out
    }
}

fn set_string(nodes: &[usize]) -> String {
    let inner: Vec<String> = nodes.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn scores_string(r: &PlacementResult) -> String {
    let rows: Vec<String> = r
        .scores
        .iter()
        .map(|c| format!("{}:({:.6},{:.6})", c.l1, c.simpson, c.shannon))
        .collect();
    format!(
        "argmax simpson {} shannon {}; scores [{}]",
        set_string(&r.argmax_simpson),
        set_string(&r.argmax_shannon),
        rows.join(" ")
    )
}

struct Recorder {
    checks: Vec<CheckTally>,
    counterexamples: Vec<Counterexample>,
    audit: Vec<AuditRow>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            checks: Vec::new(),
            counterexamples: Vec::new(),
            audit: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, ok: bool, instance: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckTally {
                    name: name.to_string(),
                    instances: 0,
                    failures: 0,
                });
                self.checks.len() - 1
            }
        };
        self.checks[idx].instances += 1;
        if !ok {
            self.checks[idx].failures += 1;
            self.counterexamples.push(Counterexample {
                check: name.to_string(),
                instance: instance(),
                detail: detail(),
            });
        }
    }

    /// Attained optima stay under the closed-form maxima.
    fn bounds(&mut self, r: &PlacementResult, instance: &dyn Fn() -> String) -> Result<()> {
        for m in Measure::ALL {
            let bound = max_diversity(r.n_f, r.bins, m)?;
            let best = r.best(m);
            self.check(
                "diversity-bounds",
                best <= bound + TIE_TOL,
                || format!("{} R={}", instance(), r.bins),
                || format!("{m} optimum {best} exceeds bound {bound}"),
            );
        }
        Ok(())
    }

    fn audit(&mut self, rule: &str, instance: String, stated: Vec<usize>, r: &PlacementResult) {
        let optimal = |m: Measure| !stated.is_empty() && stated.iter().all(|v| r.argmax(m).contains(v));
        self.audit.push(AuditRow {
            rule: rule.to_string(),
            instance,
            optimal_simpson: optimal(Measure::Simpson),
            optimal_shannon: optimal(Measure::Shannon),
            stated,
            argmax_simpson: r.argmax_simpson.clone(),
            argmax_shannon: r.argmax_shannon.clone(),
        });
    }

    fn finish(self, suite: Suite, options: VerifyOptions) -> VerifyReport {
        VerifyReport {
            suite,
            options,
            checks: self.checks,
            counterexamples: self.counterexamples,
            audit: self.audit,
        }
    }
}

fn contains_all(haystack: &[usize], needles: &[usize]) -> bool {
    !needles.is_empty() && needles.iter().all(|v| haystack.contains(v))
}

fn predictor_holds(r: &PlacementResult, predicted: &[usize]) -> bool {
    Measure::ALL
        .into_iter()
        .all(|m| contains_all(r.argmax(m), predicted))
}

pub fn run(suite: Suite, options: VerifyOptions) -> Result<VerifyReport> {
    if options.bound < suite.min_bound() {
        return Err(Error::TooFewNodes {
            min: suite.min_bound(),
            got: options.bound,
        });
    }
    let mut rec = Recorder::new();
    match suite {
        Suite::Paths => paths(&mut rec, options.bound)?,
        Suite::Cycles => cycles(&mut rec, options.bound)?,
        Suite::Ytrees => ytrees(&mut rec, options.bound)?,
        Suite::TreesR2 => trees_r2(&mut rec, options)?,
        Suite::Appendix => appendix(&mut rec, options)?,
    }
    Ok(rec.finish(suite, options))
}

fn paths(rec: &mut Recorder, bound: usize) -> Result<()> {
    for n in 4..=bound {
        let g = generate(Topology::Path(n))?;
        let n_f = n - 2;
        for k in 1..=n {
            let instance = || format!("path n={n} l0={k}");
            let full = brute_force_best(&g, k, n_f)?;
            let two = brute_force_best(&g, k, 2)?;
            rec.bounds(&full, &instance)?;
            rec.bounds(&two, &instance)?;

            let predicted = predict_path(n, k, BinRegime::Followers)?;
            rec.check(
                "path-R=nf-farthest-endpoint",
                predictor_holds(&full, &predicted),
                instance,
                || format!("predicted {}; {}", set_string(&predicted), scores_string(&full)),
            );

            // Followers stuck at 0 behind the nearer end all share bin 1.
            let near = k.min(n + 1 - k);
            let expected = 1.0 - ((near - 1) * near.saturating_sub(2)) as f64 / (n_f * (n_f - 1)) as f64;
            let best = full.best(Measure::Simpson);
            rec.check(
                "path-R=nf-simpson-shortfall",
                (best - expected).abs() <= IDENTITY_TOL,
                instance,
                || format!("simpson optimum {best}, expected {expected}"),
            );

            let literal = if 2 * k < n { vec![n] } else { vec![1] };
            rec.audit("path R=nf, stated j=n if k<n/2 else 1", instance(), literal, &full);
            let stated = predict_path(n, k, BinRegime::Two)?;
            rec.audit("path R=2, stated j=n-k+1 if k<n/2 else n-k", instance(), stated, &two);
        }
        for k in 1..n {
            for j in k + 1..=n {
                let direct = steady_state(&g, &LeaderConfig::pair(&g, k, j)?)?;
                let closed = path_closed_form(n, k, j)?;
                let diff = direct.max_abs_diff(&closed).unwrap_or(f64::INFINITY);
                rec.check(
                    "path-closed-form",
                    diff <= IDENTITY_TOL,
                    || format!("path n={n} l0={k} l1={j}"),
                    || format!("max abs difference {diff:e}"),
                );
                let between: Vec<f64> = (k + 1..j).filter_map(|v| direct.get(v)).collect();
                rec.check(
                    "path-monotone-between-leaders",
                    between.windows(2).all(|w| w[0] < w[1]),
                    || format!("path n={n} l0={k} l1={j}"),
                    || format!("opinions {between:?}"),
                );
            }
        }
    }
    Ok(())
}

/// `v` reflected through `l0` on the cycle `1..=n`.
fn reflect(n: usize, l0: usize, v: usize) -> usize {
    (2 * l0 + 2 * n - v - 1) % n + 1
}

fn cycles(rec: &mut Recorder, bound: usize) -> Result<()> {
    for n in 4..=bound {
        let g = generate(Topology::Cycle(n))?;
        let n_f = n - 2;
        for l0 in 1..=n {
            let instance = || format!("cycle n={n} l0={l0}");
            for regime in [BinRegime::Followers, BinRegime::Two] {
                let r = brute_force_best(&g, l0, regime.bins(n_f))?;
                rec.bounds(&r, &instance)?;
                let predicted = predict_cycle_from(n, l0, regime);
                let name = match regime {
                    BinRegime::Followers => "cycle-R=nf-argmax",
                    BinRegime::Two => "cycle-R=2-argmax",
                };
                rec.check(
                    name,
                    Measure::ALL.into_iter().all(|m| r.argmax(m) == predicted.as_slice()),
                    instance,
                    || format!("predicted {}; {}", set_string(&predicted), scores_string(&r)),
                );
                for m in Measure::ALL {
                    let bound = max_diversity(n_f, r.bins, m)?;
                    let best = r.best(m);
                    let name = match regime {
                        BinRegime::Followers => "cycle-R=nf-attains-maximum",
                        BinRegime::Two => "cycle-R=2-attains-maximum",
                    };
                    rec.check(
                        name,
                        (best - bound).abs() <= IDENTITY_TOL,
                        instance,
                        || format!("{m} optimum {best}, maximum {bound}"),
                    );
                    let mut mirrored: Vec<usize> =
                        r.argmax(m).iter().map(|&v| reflect(n, l0, v)).collect();
                    mirrored.sort_unstable();
                    rec.check(
                        "cycle-argmax-reflection-symmetric",
                        mirrored == r.argmax(m),
                        || format!("{} R={}", instance(), r.bins),
                        || format!("{m} argmax {} mirrored {}", set_string(r.argmax(m)), set_string(&mirrored)),
                    );
                }
            }
        }
    }
    Ok(())
}

fn ytrees(rec: &mut Recorder, bound: usize) -> Result<()> {
    for a0 in 1..=bound {
        for a1 in 1..=bound {
            for a2 in 1..=bound {
                let g = generate(Topology::YTree([a0, a1, a2]))?;
                for l0 in g.leaves() {
                    let instance = || format!("ytree:{a0},{a1},{a2} l0={l0}");
                    let r = brute_force_best(&g, l0, g.n() - 2)?;
                    rec.bounds(&r, &instance)?;
                    let predicted = predict_y_tree(&g, l0)?;
                    rec.check(
                        "ytree-R=nf-farthest-leaf",
                        predictor_holds(&r, &predicted),
                        instance,
                        || format!("predicted {}; {}", set_string(&predicted), scores_string(&r)),
                    );
                }
            }
        }
    }
    Ok(())
}

fn tree_instance(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("tree n={} [{}]", g.n(), edges.join(" "))
}

fn random_trees(options: VerifyOptions, salt: u64) -> Result<Vec<Graph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ salt);
    (0..options.trees)
        .map(|_| {
            let n = rng.random_range(4..=options.bound);
            random_tree(n, &mut rng)
        })
        .collect()
}

fn trees_r2(rec: &mut Recorder, options: VerifyOptions) -> Result<()> {
    for g in random_trees(options, 0x72)? {
        for l0 in g.nodes() {
            let instance = || format!("{} l0={l0}", tree_instance(&g));
            let r = brute_force_best(&g, l0, 2)?;
            rec.bounds(&r, &instance)?;
            for l1 in balanced_placements(&g, l0, crate::diversity::DEFAULT_SNAP_TOL)? {
                rec.check(
                    "tree-R=2-balanced-is-optimal",
                    predictor_holds(&r, &[l1]),
                    || format!("{} l1={l1}", instance()),
                    || scores_string(&r),
                );
            }
        }
    }
    Ok(())
}

fn appendix(rec: &mut Recorder, options: VerifyOptions) -> Result<()> {
    for g in random_trees(options, 0xa9)? {
        let leaves = g.leaves();
        for (i, &l0) in leaves.iter().enumerate() {
            for &l1 in &leaves[i + 1..] {
                let instance = || format!("{} l0={l0} l1={l1}", tree_instance(&g));
                let lc = LeaderConfig::pair(&g, l0, l1)?;
                let gi = grounded_inverse(&g, &lc)?;
                let x = steady_state(&g, &lc)?;
                let diff = gi.opinions().max_abs_diff(&x).unwrap_or(f64::INFINITY);
                rec.check(
                    "grounded-inverse-matches-steady-state",
                    diff <= IDENTITY_TOL,
                    instance,
                    || format!("max abs difference {diff:e}"),
                );

                let followers = lc.followers(&g);
                for (a, &u) in followers.iter().enumerate() {
                    for &v in &followers[a + 1..] {
                        let r_uv = pairwise_resistance(&gi, u, v)?;
                        for cut in separating_vertices(&g, &lc, u, v)? {
                            let split = pairwise_resistance(&gi, u, cut)? + pairwise_resistance(&gi, cut, v)?;
                            rec.check(
                                "cutpoint-additivity",
                                (r_uv - split).abs() <= IDENTITY_TOL,
                                || format!("{} u={u} v={v} x={cut}", instance()),
                                || format!("r(u,v)={r_uv} r(u,x)+r(x,v)={split}"),
                            );
                        }
                    }
                }

                let on_path = tree_path(&g, l0, l1)?;
                for &u in followers.iter().filter(|u| !on_path.contains(u)) {
                    let t = project_onto_path(&g, l0, l1, u)?;
                    let (xu, xt) = (x.get(u).expect("follower"), x.get(t).expect("junction is a follower"));
                    rec.check(
                        "branch-opinion-equality",
                        (xu - xt).abs() <= IDENTITY_TOL,
                        || format!("{} u={u} t={t}", instance()),
                        || format!("x(u)={xu} x(t)={xt}"),
                    );
                    let residual = gi.entry(u, u)? - pairwise_resistance(&gi, u, t)? - gi.entry(t, t)?;
                    rec.check(
                        "cut-identity",
                        residual.abs() <= IDENTITY_TOL,
                        || format!("{} u={u} t={t}", instance()),
                        || format!("inv(u,u) - r(u,t) - inv(t,t) = {residual:e}"),
                    );
                }
            }
        }
    }
    Ok(())
}
