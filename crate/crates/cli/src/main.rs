//! Experiment harness: generate drawings, validate them, run the
//! disjoint-edge pipeline, compare against the exact oracle, probe dual
//! shatter functions, and batch-run scaling experiments.
//!
//! Exit codes: 0 success, 1 domain failure (invalid drawing, falsified
//! bound, failed verification), 2 usage or parse error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use disjedge::extract::{extract_pipeline, PipelineError};
use disjedge::format;
use disjedge::gen::{self, Family, GenSpec};
use disjedge::matching::MatchingConfig;
use disjedge::oracle;
use disjedge::setsys::{
    build_crossing_sets, build_interior_sets, probe_shatter, SetSystem,
};
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "disjedge", version, about = "Disjoint edges in complete simple topological drawings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated drawing as JSON.
    Generate(GenerateArgs),
    /// Check the simple-topological-drawing invariants.
    Validate(InputArgs),
    /// Run the full extraction pipeline and print the report.
    Extract(ExtractArgs),
    /// Exact maximum disjoint-edge count by branch and bound.
    Oracle(OracleArgs),
    /// Probe dual shatter functions of the instance's set systems.
    Shatter(ShatterArgs),
    /// Batch pipeline runs over families, sizes, and seeds; CSV output.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Convex,
    Random,
    Polyline,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Convex => Family::ConvexParabola,
            FamilyArg::Random => Family::RandomGeneralPosition,
            FamilyArg::Polyline => Family::PerturbedPolyline,
        }
    }
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::Convex => "convex",
            FamilyArg::Random => "random",
            FamilyArg::Polyline => "polyline",
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    bends: usize,
    /// Coordinate range for the random families; defaults to 32 N^2.
    #[arg(long)]
    coord_bound: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Drawing JSON file.
    input: PathBuf,
}

#[derive(Args)]
struct ExtractArgs {
    input: PathBuf,
    /// Row-weight multiplier for the reweighting matching, as an exact
    /// rational ("2", "5/2"); must exceed 1.
    #[arg(long, default_value = "2")]
    multiplier: String,
    /// Include per-stage wall times (breaks byte-for-byte reproducibility).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(long, default_value_t = oracle::DEFAULT_LIMIT_N)]
    limit: usize,
}

#[derive(Args)]
struct ShatterArgs {
    input: PathBuf,
    /// Comma-separated subfamily sizes.
    #[arg(long, default_value = "1,2,4,8,16", value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "convex,random")]
    family: Vec<FamilyArg>,
    #[arg(long, value_delimiter = ',', default_value = "9,21,51")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    bends: usize,
    /// Include wall-time columns.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn load(input: &PathBuf) -> anyhow::Result<disjedge::Drawing> {
    let text = std::fs::read_to_string(input)?;
    Ok(format::from_json(&text)?)
}

fn run(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Generate(a) => {
            let mut spec = GenSpec::new(a.family.into(), a.n, a.seed);
            spec.bends = a.bends;
            if let Some(b) = a.coord_bound {
                spec.coord_bound = b;
            }
            let d = gen::generate(&spec)?;
            emit(&a.out, &format::to_json(&d))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate(a) => {
            let d = load(&a.input)?;
            let report = d.validate();
            let diag = json!({
                "ok": report.is_ok(),
                "violations": report.violations.iter().map(|v| {
                    json!({
                        "kind": v.kind.as_str(),
                        "arcs": v.arcs.iter().map(|(u, w)| [u.0, w.0]).collect::<Vec<_>>(),
                        "witness": v.witness.as_ref().map(|p| [
                            format::format_rational(&p.x),
                            format::format_rational(&p.y),
                        ]),
                    })
                }).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&diag)?);
            Ok(if report.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Extract(a) => {
            let d = load(&a.input)?;
            let cfg = matching_config(&a.multiplier)?;
            match extract_pipeline(&d, &cfg) {
                Ok(report) => {
                    let report = if a.timings {
                        report
                    } else {
                        report.without_timings()
                    };
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    emit(&a.out, &s)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ (PipelineError::InvalidDrawing(_)
                | PipelineError::IdentityViolation { .. }
                | PipelineError::VerificationFailed(_))) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Oracle(a) => {
            let d = load(&a.input)?;
            let (size, witness) = oracle::max_disjoint_edges_exact(&d, a.limit)?;
            let doc = json!({
                "size": size,
                "witness": witness.iter().map(|(u, w)| [u.0, w.0]).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Shatter(a) => {
            let d = load(&a.input)?;
            let apex = d.select_apex()?;
            let lab = d.label_ccw(apex)?;
            let interiors = build_interior_sets(&d, &lab)?;
            let crossings = build_crossing_sets(&d, &lab);
            let mixed = SetSystem {
                ground_size: lab.n(),
                rows: interiors
                    .rows
                    .iter()
                    .chain(crossings.rows.iter())
                    .cloned()
                    .collect(),
            };
            let mut csv = String::from("family,m,observed_max,bound\n");
            let mut falsified = false;
            for (name, sys) in [("interiors", &interiors), ("mixed", &mixed)] {
                for &m in &a.m {
                    if m > sys.rows.len() {
                        continue;
                    }
                    let probe = probe_shatter(sys, m, a.trials, a.seed);
                    falsified |= probe.observed_classes > probe.bound;
                    writeln!(
                        csv,
                        "{name},{m},{},{}",
                        probe.observed_classes, probe.bound
                    )?;
                }
            }
            emit(&a.out, &csv)?;
            Ok(if falsified {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Bench(a) => {
            let mut csv = String::from(if a.timings {
                "family,N,n,chosen,turan_bound,conflict_edges,max_stab,total_seconds\n"
            } else {
                "family,N,n,chosen,turan_bound,conflict_edges,max_stab\n"
            });
            for &fam in &a.family {
                for &n in &a.n {
                    for &seed in &a.seed {
                        let mut spec = GenSpec::new(fam.into(), n, seed);
                        spec.bends = a.bends;
                        let d = gen::generate(&spec)?;
                        let t0 = std::time::Instant::now();
                        let report = extract_pipeline(&d, &MatchingConfig::default())?;
                        let total = t0.elapsed().as_secs_f64();
                        if a.timings {
                            writeln!(
                                csv,
                                "{},{},{},{},{},{},{},{:.6}",
                                fam.name(),
                                n,
                                report.ground_size,
                                report.chosen.len(),
                                report.turan_bound,
                                report.conflict_edges,
                                report.max_stab,
                                total
                            )?;
                        } else {
                            writeln!(
                                csv,
                                "{},{},{},{},{},{},{}",
                                fam.name(),
                                n,
                                report.ground_size,
                                report.chosen.len(),
                                report.turan_bound,
                                report.conflict_edges,
                                report.max_stab
                            )?;
                        }
                    }
                }
            }
            emit(&a.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn matching_config(multiplier: &str) -> anyhow::Result<MatchingConfig> {
    let m = format::parse_rational(multiplier)?;
    let one = disjedge::Rational::from_integer(num_bigint::BigInt::from(1));
    anyhow::ensure!(m > one, "--multiplier must exceed 1");
    Ok(MatchingConfig {
        weight_multiplier: m,
        ..MatchingConfig::default()
    })
}
