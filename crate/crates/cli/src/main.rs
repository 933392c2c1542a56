use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use leaderdiv::diversity::{bin_opinions_snapped, BinSpec, DiversityScore, DEFAULT_SNAP_TOL};
use leaderdiv::verify::{self, Suite, VerifyOptions};
use leaderdiv::{place, steady_state, Graph, LeaderConfig, PlaceRequest, Topology};

/// Leader placement and opinion diversity in French-DeGroot networks.
#[derive(Debug, Parser)]
#[command(name = "leaderdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score every candidate 1-leader and report the optimal placements.
    Place(PlaceArgs),
    /// Sweep a graph family and compare placement rules against brute force.
    Verify(VerifyArgs),
    /// Print steady-state follower opinions and their bin histogram.
    Dump(DumpArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Edge-list file: `n <count>` then one `u v` pair per line.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Generated graph: `path:N`, `cycle:N` or `ytree:A,B,C`.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<Topology>,
}

impl Source {
    fn load(&self) -> anyhow::Result<(Graph, Option<Topology>)> {
        match (&self.graph, self.generator) {
            (Some(path), _) => Ok((read_graph(path)?, None)),
            (None, Some(t)) => Ok((t.generate()?, Some(t))),
            (None, None) => bail!("one of --graph or --gen is required"),
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read graph file {}", path.display()))?;
    Graph::from_edge_list(&text).with_context(|| format!("invalid graph file {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

#[derive(Debug, Args)]
struct PlaceArgs {
    #[command(flatten)]
    source: Source,
    /// The 0-leader.
    #[arg(long)]
    l0: usize,
    /// Bin count: an integer or `nf` for one bin per follower.
    #[arg(long = "R", value_name = "2|nf|INT", default_value = "nf")]
    bins: BinSpec,
    #[arg(long, value_name = "FLOAT", default_value_t = DEFAULT_SNAP_TOL)]
    snap_tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// paths, cycles, ytrees, trees-R2 or appendix.
    suite: Suite,
    /// Largest n swept (longest arm for ytrees).
    #[arg(long, default_value_t = 12)]
    bound: usize,
    /// Random trees drawn by trees-R2 and appendix.
    #[arg(long, default_value_t = 200)]
    trees: usize,
    #[arg(long, default_value_t = VerifyOptions::new(0).seed)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    l0: usize,
    #[arg(long)]
    l1: usize,
    #[arg(long = "R", value_name = "2|nf|INT", default_value = "nf")]
    bins: BinSpec,
    #[arg(long, value_name = "FLOAT", default_value_t = DEFAULT_SNAP_TOL)]
    snap_tol: f64,
    #[command(flatten)]
    output: Output,
}

fn check_snap_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        bail!("--snap-tol must be a non-negative number, got {tol}");
    }
    Ok(())
}

fn cmd_place(args: &PlaceArgs) -> anyhow::Result<String> {
    check_snap_tol(args.snap_tol)?;
    let (g, topology) = args.source.load()?;
    let mut req = PlaceRequest::new(args.l0, args.bins);
    req.snap_tol = args.snap_tol;
    let report = place(&g, topology, &req)?;
    Ok(match args.output.format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json() + "\n",
    })
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<(String, bool)> {
    let options = VerifyOptions {
        bound: args.bound,
        trees: args.trees,
        seed: args.seed,
    };
    let report = verify::run(args.suite, options)?;
    let text = match args.output.format {
        Format::Table => report.to_text(),
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let mut out = String::from("check,instances,failures\n");
            for c in &report.checks {
                out += &format!("{},{},{}\n", c.name, c.instances, c.failures);
            }
            out
        }
    };
    Ok((text, report.passed()))
}

fn cmd_dump(args: &DumpArgs) -> anyhow::Result<String> {
    check_snap_tol(args.snap_tol)?;
    let (g, _) = args.source.load()?;
    let lc = LeaderConfig::pair(&g, args.l0, args.l1)?;
    let x = steady_state(&g, &lc)?;
    let bins = args.bins.resolve(x.len());
    let hist = bin_opinions_snapped(&x, bins, args.snap_tol)?;
    let csv = x.to_csv();
    Ok(match args.output.format {
        Format::Csv => csv,
        Format::Table => format!("{csv}\n{}\n", hist.to_json()),
        Format::Json => {
            let score = DiversityScore::of(&hist).ok();
            let opinions: Vec<_> = x.iter().map(|(node, value)| json!({ "node": node, "opinion": value })).collect();
            let doc = json!({
                "l0": args.l0,
                "l1": args.l1,
                "opinions": opinions,
                "histogram": hist,
                "simpson": score.map(|s| s.simpson),
                "shannon": score.map(|s| s.shannon),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let (text, output, passed) = match &cli.command {
        Command::Place(args) => (cmd_place(args)?, &args.output, true),
        Command::Dump(args) => (cmd_dump(args)?, &args.output, true),
        Command::Verify(args) => {
            let (text, passed) = cmd_verify(args)?;
            (text, &args.output, passed)
        }
    };
    output.emit(&text)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
