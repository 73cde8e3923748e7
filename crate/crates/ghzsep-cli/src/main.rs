//! `ghzsep` command-line front end.
//!
//! Exit codes: 0 separable / success, 1 error or failed check,
//! 2 entangled (including entangled by a necessary criterion), 3 undetermined.

mod decompose;
mod output;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghzsep::boundaries::{hs_boundary, hs_point_state, sym_point_state, sym_surface, BoundarySegment};
use ghzsep::decompositions::{verify, SeparableDecomposition};
use ghzsep::matching::{
    criteria_with_tol, kay_condition, ppt_criterion_with_tol, CriterionReport, PptReport, Verdict, TAU_V,
};
use ghzsep::oracle::{check_gtilde, check_lambda, check_ppt, check_rtilde, numeric_matched_witness, CheckSummary};
use ghzsep::states::{GhzState, StateSpec};
use ghzsep::witness::{g_tilde, lambda_product_max, polyhedron_contains, LambdaMethod, LambdaOptions, WitnessParams};
use output::{Format, Sink};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ghzsep",
    version,
    about = "Full separability of four-qubit GHZ-diagonal states"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Numerical tolerance (verdict margin, verification residual, ...).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random seed for randomized searches and oracle suites.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Grid resolution (meaning depends on the command).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Points per boundary segment.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply the separability criteria to a state file.
    Classify { state: PathBuf },
    /// Witness evaluation and construction.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Emit separable boundaries.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// Build an explicit separable decomposition.
    Decompose(decompose::DecomposeArgs),
    /// Check a decomposition file against a target state.
    Verify {
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Run an oracle cross-check suite.
    Oracle {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Product-state maximum of a witness, and its value on a state if given.
    Eval {
        witness: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
        /// Refinement iterations for the numeric maximum.
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    /// Witness matched to a state (normalized so its anti-diagonal maximum is 1).
    Matched { state: PathBuf },
    /// Randomized witness search on a state.
    Search {
        state: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
    },
}

#[derive(Subcommand)]
enum BoundaryCmd {
    /// Highly symmetric family at fixed p16; points are (v, alpha).
    Fig2 {
        #[arg(long)]
        p16: f64,
    },
    /// Symmetric family at fixed Omega; points are (x, z, y).
    Fig3 {
        #[arg(long, default_value_t = 0.0625)]
        omega: f64,
    },
}

#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    CheckGtilde,
    CheckLambda,
    CheckRtilde,
    CheckPpt,
}

fn main() -> ExitCode {
    // usage errors exit 1: code 2 is reserved for entangled verdicts
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("GHZSEP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("GHZSEP_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub(crate) fn read_state(path: &Path) -> Result<GhzState> {
    let spec: StateSpec = read_json(path)?;
    spec.build()
        .with_context(|| format!("invalid state in {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    let g = cli.global;
    let sink = Sink::new(g.format, g.out.clone());
    match cli.cmd {
        Cmd::Classify { state } => classify(&sink, &g, &state),
        Cmd::Witness(w) => witness(&sink, &g, w),
        Cmd::Boundary(b) => boundary(&sink, &g, b),
        Cmd::Decompose(args) => decompose::run(&sink, g.tol.unwrap_or(1e-9), args),
        Cmd::Verify { decomposition, target } => {
            let d: SeparableDecomposition = read_json(&decomposition)?;
            let target = read_state(&target)?;
            let rep = verify(&d, &target)?;
            let ok = rep.ok(g.tol.unwrap_or(1e-9));
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                report: ghzsep::decompositions::VerifyReport,
                ok: bool,
            }
            sink.json(&Out { report: rep, ok })?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Oracle { suite, trials } => oracle(&sink, &g, suite, trials),
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    omega: f64,
    r_tilde: f64,
    case: ghzsep::matching::RCase,
    l_min: f64,
    margins: ghzsep::matching::Margins,
    applicable: [bool; 4],
    symmetric: bool,
    verdict: Verdict,
    ppt: PptReport,
    kay: bool,
    witness: WitnessParams,
}

impl ClassifyOut {
    fn new(r: CriterionReport, ppt: PptReport, kay: bool) -> Self {
        Self {
            omega: r.omega,
            r_tilde: r.r_tilde,
            case: r.case,
            l_min: r.l_min,
            margins: r.margins,
            applicable: r.applicable,
            symmetric: r.symmetric,
            verdict: r.verdict,
            ppt,
            kay,
            witness: r.matched_witness,
        }
    }
}

fn classify(sink: &Sink, g: &Global, path: &Path) -> Result<u8> {
    sink.require_json("classify")?;
    let state = read_state(path)?;
    let tol = g.tol.unwrap_or(TAU_V);
    let report = criteria_with_tol(&state, tol);
    let verdict = report.verdict;
    sink.json(&ClassifyOut::new(
        report,
        ppt_criterion_with_tol(&state, tol),
        kay_condition(&state),
    ))?;
    Ok(match verdict {
        Verdict::Separable => 0,
        Verdict::Entangled | Verdict::EntangledByNecessity => 2,
        Verdict::Undetermined => 3,
    })
}

fn witness(sink: &Sink, g: &Global, cmd: WitnessCmd) -> Result<u8> {
    sink.require_json("witness")?;
    match cmd {
        WitnessCmd::Eval {
            witness,
            state,
            max_iter,
        } => {
            let w: WitnessParams = read_json(&witness)?;
            let mut opts = LambdaOptions {
                max_iter,
                seed: g.seed,
                ..LambdaOptions::default()
            };
            if let Some(n) = g.grid {
                opts.grid = n;
            }
            if let Some(t) = g.tol {
                opts.step_tol = t;
            }
            let lam = lambda_product_max(&w, &opts);
            let sector = w.symmetric_sector();
            let gt = sector.then(|| g_tilde(w.m8(), w.m9(), w.m15()));
            let inside = gt
                .filter(|&v| v > 0.0)
                .map(|v| polyhedron_contains(&w.diag().map(|x| x / v)));
            let on_state = match state {
                Some(p) => {
                    let s = read_state(&p)?;
                    let mean = w.mean(&s.r);
                    Some(OnState {
                        mean,
                        witness_value: lam.value - mean,
                        ratio: if mean > 0.0 { Some(lam.value / mean) } else { None },
                    })
                }
                None => None,
            };
            #[derive(Serialize)]
            struct OnState {
                mean: f64,
                witness_value: f64,
                ratio: Option<f64>,
            }
            #[derive(Serialize)]
            struct Out {
                lambda: f64,
                method: LambdaMethod,
                symmetric_sector: bool,
                g_tilde: Option<f64>,
                inside_polyhedron: Option<bool>,
                #[serde(skip_serializing_if = "Option::is_none")]
                state: Option<OnState>,
            }
            sink.json(&Out {
                lambda: lam.value,
                method: lam.method,
                symmetric_sector: sector,
                g_tilde: gt,
                inside_polyhedron: inside,
                state: on_state,
            })?;
        }
        WitnessCmd::Matched { state } => {
            let s = read_state(&state)?;
            let w = ghzsep::matching::matched_witness(&s);
            #[derive(Serialize)]
            struct Out {
                #[serde(rename = "M")]
                m: [f64; 15],
                witness_value: f64,
            }
            sink.json(&Out {
                m: *w.as_array(),
                witness_value: ghzsep::witness::witness_value(&s.r, &w),
            })?;
        }
        WitnessCmd::Search { state, rounds } => {
            if rounds == 0 {
                bail!("--rounds must be at least 1");
            }
            let s = read_state(&state)?;
            sink.json(&numeric_matched_witness(&s, rounds, g.seed))?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Row<'a> {
    label: &'a str,
    param1: f64,
    param2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    param3: Option<f64>,
    l_min: f64,
}

type PointState = Box<dyn Fn(&[f64]) -> Result<GhzState> + Sync>;

fn boundary(sink: &Sink, g: &Global, cmd: BoundaryCmd) -> Result<u8> {
    let (segments, point_state): (Vec<BoundarySegment>, PointState) = match cmd {
        BoundaryCmd::Fig2 { p16 } => {
            let n = g.samples.unwrap_or(100);
            (
                hs_boundary(p16, n)?,
                Box::new(move |p: &[f64]| Ok(hs_point_state(p16, p[0], p[1])?)),
            )
        }
        BoundaryCmd::Fig3 { omega } => {
            let n = g.grid.or(g.samples).unwrap_or(50);
            (
                sym_surface(omega, n)?,
                Box::new(move |p: &[f64]| Ok(sym_point_state(omega, p)?)),
            )
        }
    };
    match sink.format {
        Format::Json => sink.json(&segments)?,
        Format::Csv => {
            use rayon::prelude::*;
            let mut rows = Vec::new();
            for seg in &segments {
                let l: Vec<f64> = seg
                    .points
                    .par_iter()
                    .map(|p| point_state(p).map(|s| ghzsep::matching::l_min(&s)))
                    .collect::<Result<_>>()?;
                for (p, l) in seg.points.iter().zip(l) {
                    rows.push(Row {
                        label: &seg.label,
                        param1: p[0],
                        param2: p[1],
                        param3: p.get(2).copied(),
                        l_min: l,
                    });
                }
            }
            sink.csv(&rows)?;
        }
    }
    Ok(0)
}

fn oracle(sink: &Sink, g: &Global, suite: Suite, trials: usize) -> Result<u8> {
    let summaries: Vec<CheckSummary> = match suite {
        Suite::CheckGtilde => vec![check_gtilde(trials, g.seed, g.grid.unwrap_or(64))],
        Suite::CheckLambda => check_lambda(trials, trials.div_ceil(4), g.seed),
        Suite::CheckRtilde => vec![check_rtilde(trials, g.seed, g.grid.unwrap_or(401))],
        Suite::CheckPpt => vec![check_ppt(trials, g.seed)],
    };
    match sink.format {
        Format::Json => sink.json(&summaries)?,
        Format::Csv => sink.csv(&summaries)?,
    }
    Ok(if summaries.iter().all(|s| s.passed) { 0 } else { 1 })
}
