//! Command-line front end. Exit codes: 0 success, 1 verification or solve
//! failure, 2 usage or input error. Vertices are 1-based in every file, and
//! `-` reads a file argument from stdin.

use std::fs;
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use nsd_total::colouring::{check_nsd, check_proper, parse_colouring, write_colouring, Violation};
use nsd_total::construct::{construct, LemmaSummary, RunConfig, SpanBudget};
use nsd_total::exact::{brute_force_chi, conjecture_sweep, solve_exact_with_budget, SolveOutcome, Verdict};
use nsd_total::experiment::{parse_family, run_experiment, ExperimentOutput, ExperimentSpec, RunVerdict, Summary};
use nsd_total::graph::{generate, parse_graph, write_graph, Graph, GraphKind};
use nsd_total::lemma::{run_lemma, LemmaParams, Mode};

#[derive(Parser)]
#[command(name = "nsd", version, about = "Neighbour sum distinguishing total colourings")]
struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a colouring file against a DIMACS graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colouring: PathBuf,
    },
    /// Compute χ''_Σ exactly.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        /// Largest palette tried; defaults to Δ+3.
        #[arg(long)]
        k_max: Option<u32>,
        /// Plain enumeration instead of backtracking.
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Write the optimal colouring here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check χ''_Σ ≤ Δ+3 over a family, e.g. `connected:5` or `random:8:0.4:20:1`.
    Sweep {
        family: String,
        #[arg(long)]
        node_budget: Option<u64>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run both lemma stages and report every property.
    Lemma {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build an NSD total colouring.
    Construct {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Permissive retries with doubled slack before the greedy fallback.
        #[arg(long, default_value_t = 2)]
        retries: usize,
        /// Span limit for permissive runs: a number, or `none`; default 3Δ+10.
        #[arg(long)]
        span_budget: Option<String>,
        /// Colouring destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a JSON experiment spec.
    Experiment {
        spec: PathBuf,
        /// Replace the spec's seeds with seeds split from this one.
        #[arg(long)]
        seed: Option<u64>,
        /// Write results.csv, summary.json, graphs/ and colourings/ here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Generate a graph, e.g. `random:100:0.1:7`, `regular:20:3:1`, `cycle:9`.
    Gen {
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value = "permissive")]
    mode: Mode,
    #[arg(long, default_value_t = 2.0)]
    slack: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    rounds: usize,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    emit(None, &format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn one_based(vs: &[Violation]) -> Vec<Violation> {
    vs.iter().map(Violation::one_based).collect()
}

fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    match cli.command {
        Command::Verify { graph, colouring } => {
            let g = read_graph(&graph)?;
            let c = parse_colouring(&read_input(&colouring)?, &g).context("parsing colouring")?;
            let proper = one_based(&check_proper(&g, &c));
            let nsd = one_based(&check_nsd(&g, &c));
            let valid = proper.is_empty() && nsd.is_empty();
            if json {
                print_json(&json!({
                    "valid": valid,
                    "k": c.k(),
                    "span": c.span(),
                    "proper_violations": proper,
                    "nsd_violations": nsd,
                }))?;
            } else {
                for v in proper.iter().chain(&nsd) {
                    println!("{:?} {:?}", v.kind, v.witnesses);
                }
                println!("{}", if valid { "valid" } else { "invalid" });
            }
            Ok(valid)
        }
        Command::Exact { graph, k_max, brute_force, node_budget, witness } => {
            let g = read_graph(&graph)?;
            let k_max = k_max.unwrap_or(g.max_degree() as u32 + 3);
            let outcome = if brute_force {
                brute_force_chi(&g, k_max)?
            } else {
                solve_exact_with_budget(&g, k_max, node_budget)?
            };
            if let (SolveOutcome::Solved(r), Some(path)) = (&outcome, &witness) {
                emit(Some(path), &write_colouring(&g, &r.witness))?;
            }
            if json {
                print_json(&json!({
                    "n": g.n(),
                    "m": g.m(),
                    "delta": g.max_degree(),
                    "k_max": k_max,
                    "chi": outcome.chi(),
                    "nodes_explored": outcome.nodes_explored(),
                }))?;
            } else {
                match outcome.chi() {
                    Some(chi) => println!("χ''_Σ = {chi} (Δ = {})", g.max_degree()),
                    None => println!("χ''_Σ > {k_max} (Δ = {})", g.max_degree()),
                }
            }
            Ok(outcome.chi().is_some())
        }
        Command::Sweep { family, node_budget, out } => {
            let (family, seeds) = parse_family(&family).map_err(anyhow::Error::msg)?;
            let graphs = family.graphs(&seeds)?;
            let report = conjecture_sweep(&graphs, node_budget);
            let ok = report.violations().next().is_none() && report.errors() == 0;
            if let Some(p) = &out {
                emit(Some(p), &report.to_csv())?;
            }
            if json {
                print_json(&json!({
                    "graphs": report.rows.len(),
                    "pass": report.rows.iter().filter(|r| r.verdict == Verdict::Pass).count(),
                    "violations": report.violations().count(),
                    "errors": report.errors(),
                    "rows": report.rows,
                }))?;
            } else if out.is_none() {
                emit(None, &report.to_csv())?;
            }
            for row in report.violations() {
                eprintln!("violation: {}\n{}", row.graph_id, row.witness_graph.as_deref().unwrap_or(""));
            }
            Ok(ok)
        }
        Command::Lemma { graph, run } => {
            let g = read_graph(&graph)?;
            let params = LemmaParams::new(g.max_degree(), run.mode, run.slack)?;
            let result = run_lemma(&g, &params, run.seed, run.rounds);
            let report = &result.stage_two.report;
            if json {
                print_json(&json!({
                    "params": params,
                    "summary": LemmaSummary::of(&result),
                    "report": report,
                    "valid": result.valid(),
                }))?;
            } else {
                println!(
                    "Δ={} r1={} r2={} r3={} mode={}{}",
                    params.delta,
                    params.r1,
                    params.r2,
                    params.r3,
                    params.mode(),
                    if params.downgraded { " (downgraded)" } else { "" }
                );
                for check in &report.checks {
                    for cap in &check.caps {
                        println!(
                            "{:>4} {:<40} observed {:>10.2} cap {:>10.2} {}",
                            check.property.id(),
                            cap.label,
                            cap.observed,
                            cap.cap,
                            if check.pass { "pass" } else { "FAIL" }
                        );
                    }
                }
            }
            Ok(result.valid())
        }
        Command::Construct { graph, run, retries, span_budget, out } => {
            let g = read_graph(&graph)?;
            let span_budget = match span_budget.as_deref() {
                None => SpanBudget::ThreeDeltaPlusTen,
                Some("none") => SpanBudget::Unlimited,
                Some(x) => SpanBudget::Fixed(x.parse().context("--span-budget")?),
            };
            let config = RunConfig {
                mode: run.mode,
                slack: run.slack,
                seed: run.seed,
                lemma_rounds: run.rounds,
                h_rounds: run.rounds,
                retries,
                span_budget,
                fault_cap: None,
            };
            let result = match construct(&g, &config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("construction failed: {e}");
                    return Ok(false);
                }
            };
            let text = write_colouring(&g, &result.colouring);
            if let Some(p) = &out {
                emit(Some(p), &text)?;
            }
            if json {
                print_json(&result.report)?;
            } else if out.is_none() {
                emit(None, &text)?;
            } else {
                let r = &result.report;
                println!(
                    "span {} (Δ+3 = {}, bound {:.1}){}",
                    r.span,
                    r.delta_plus_3,
                    r.theorem_bound,
                    if r.fallback { ", greedy fallback" } else { "" }
                );
            }
            Ok(true)
        }
        Command::Experiment { spec, seed, out_dir } => {
            let mut spec: ExperimentSpec =
                serde_json::from_str(&read_input(&spec)?).context("parsing experiment spec")?;
            if let Some(s) = seed {
                spec.reseed(s);
            }
            let output = run_experiment(&spec)?;
            if let Some(dir) = &out_dir {
                write_experiment(dir, &output)?;
            }
            if json {
                emit(None, &format!("{}\n", output.summary_json()))?;
            } else if out_dir.is_none() {
                emit(None, &output.csv())?;
            }
            Ok(match output.summary().summary {
                Summary::Construct { runs, valid, .. } => runs == valid,
                Summary::Exact { violations, errors, .. } => violations == 0 && errors == 0,
            })
        }
        Command::Gen { kind, out } => {
            let g = generate(&parse_kind(&kind)?)?;
            let text = write_graph(&g);
            if json {
                print_json(&json!({ "n": g.n(), "m": g.m(), "delta": g.max_degree(), "dimacs": text }))?;
                if let Some(p) = &out {
                    emit(Some(p), &text)?;
                }
            } else {
                emit(out.as_deref(), &text)?;
            }
            Ok(true)
        }
    }
}

fn write_experiment(dir: &Path, output: &ExperimentOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("results.csv"), output.csv())?;
    fs::write(dir.join("summary.json"), output.summary_json())?;
    if let ExperimentOutput::Construct { runs, .. } = output {
        fs::create_dir_all(dir.join("graphs"))?;
        fs::create_dir_all(dir.join("colourings"))?;
        for run in runs {
            let r = &run.record;
            fs::write(dir.join("graphs").join(format!("{}.dimacs", r.graph_id)), write_graph(&run.graph))?;
            if let (Some(c), RunVerdict::Valid) = (&run.colouring, &r.verdict) {
                let name = format!("{}-seed{}.col", r.graph_id, r.seed);
                fs::write(dir.join("colourings").join(name), write_colouring(&run.graph, c))?;
            }
        }
    }
    Ok(())
}

fn parse_kind(s: &str) -> Result<GraphKind> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts.get(i).with_context(|| format!("{s:?}: missing field"))?.parse().with_context(|| format!("{s:?}"))
    };
    let float = |i: usize| -> Result<f64> {
        parts.get(i).with_context(|| format!("{s:?}: missing field"))?.parse().with_context(|| format!("{s:?}"))
    };
    let seed = |i: usize| -> Result<u64> {
        parts.get(i).with_context(|| format!("{s:?}: missing seed"))?.parse().with_context(|| format!("{s:?}"))
    };
    let arity = if matches!(parts[0], "random" | "regular") { 4 } else { 2 };
    if parts.len() != arity {
        bail!("{s:?}: expected {} fields after the kind", arity - 1);
    }
    Ok(match parts[0] {
        "empty" => GraphKind::Empty { n: num(1)? },
        "complete" => GraphKind::Complete { n: num(1)? },
        "cycle" => GraphKind::Cycle { n: num(1)? },
        "path" => GraphKind::Path { n: num(1)? },
        "star" => GraphKind::Star { leaves: num(1)? },
        "random" => GraphKind::Random { n: num(1)?, p: float(2)?, seed: seed(3)? },
        "regular" => GraphKind::Regular { n: num(1)?, d: num(2)?, seed: seed(3)? },
        other => bail!("unknown graph kind {other:?}"),
    })
}
