use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multicover::bench::{self, Suite};
use multicover::bounds;
use multicover::exact::{self, DEFAULT_NODE_BUDGET};
use multicover::generate;
use multicover::geometry::{self, GeometricInstance, InstanceFile};
use multicover::io;
use multicover::lp::{self, Mode};
use multicover::{greedy_solve, Error, Hypergraph, RationalLambda, Result};

#[derive(Parser)]
#[command(
    name = "multicover",
    version,
    about = "Greedy f-fold transversals of hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Weighting {
    /// Fold: every edge must be hit this many times.
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Weight ratio, "p/q" or a decimal.
    #[arg(long, default_value = "2/7")]
    lambda: RationalLambda,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Exact,
    Float,
}

impl ModeArg {
    fn resolve(self, h: &Hypergraph) -> Mode {
        match self {
            ModeArg::Auto => Mode::auto(h),
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Fano,
    Triangle,
    Graph,
    Geometric,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFamily {
    Complete,
    Cycle,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Gen {
        kind: Kind,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        s_min: usize,
        #[arg(long, default_value_t = 8)]
        s_max: usize,
        #[arg(long, value_enum, default_value = "complete")]
        family: GraphFamily,
        /// Half-width of the square region, for geometric instances.
        #[arg(long, default_value_t = 4.0)]
        a: f64,
        #[arg(long, default_value_t = geometry::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 0.05)]
        grid_h: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Run the greedy and print the solution with its step groups.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        weighting: Weighting,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the fractional transversal and matching LPs.
    Lp {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[command(flatten)]
        output: Output,
    },
    /// Compute τ_f by branch and bound.
    Exact {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Also report f·τ* and the greedy size.
        #[arg(long)]
        sandwich: bool,
        #[arg(long, default_value = "2/7")]
        lambda: RationalLambda,
        #[command(flatten)]
        output: Output,
    },
    /// Check the greedy against its bound; non-zero exit if anything fails.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        weighting: Weighting,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[command(flatten)]
        output: Output,
    },
    /// Check that a multiset file is an f-fold transversal.
    Check {
        file: PathBuf,
        picks: PathBuf,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Build and verify a planar f-fold covering from an instance file.
    Cover {
        file: PathBuf,
        #[arg(long, default_value = "2/7")]
        lambda: RationalLambda,
        #[command(flatten)]
        output: Output,
    },
    /// Time the greedy over a seeded suite and write CSV.
    Bench {
        #[arg(long, default_value = "default")]
        suite: Suite,
        /// Repeat for several values.
        #[arg(long, default_value = "2/7")]
        lambda: Vec<RationalLambda>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_json(output: &Output, value: &Value) -> Result<()> {
    emit(
        output,
        &serde_json::to_string_pretty(value).expect("JSON values serialize"),
    )
}

fn load(path: &Path) -> Result<Hypergraph> {
    io::parse_hypergraph(&io::read_to_string(path)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Returns whether every check passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Gen {
            kind,
            n,
            m,
            s_min,
            s_max,
            family,
            a,
            delta,
            f,
            grid_h,
            seed,
            output,
        } => {
            let text = match kind {
                Kind::Random => {
                    io::serialize_hypergraph(&generate::random(n, m, s_min, s_max, seed)?)
                }
                Kind::Fano => io::serialize_hypergraph(&generate::fano()),
                Kind::Triangle => io::serialize_hypergraph(&generate::triangle()),
                Kind::Graph => io::serialize_hypergraph(&match family {
                    GraphFamily::Complete => generate::complete_graph(n)?,
                    GraphFamily::Cycle => generate::cycle(n)?,
                }),
                Kind::Geometric => {
                    let file = InstanceFile::square(a, delta, f, grid_h);
                    let text = serde_json::to_string(&file).expect("instance serializes");
                    geometry::parse_instance(&text)?;
                    text
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::Solve {
            file,
            weighting,
            output,
        } => {
            let h = load(&file)?;
            let (set, trace) = greedy_solve(&h, weighting.f, weighting.lambda)?;
            emit(&output, &io::solution_json(&set, &trace))?;
            Ok(true)
        }
        Command::Lp { file, mode, output } => {
            let h = load(&file)?;
            let mode = mode.resolve(&h);
            let transversal = lp::fractional_transversal(&h, mode)?;
            let matching = lp::fractional_matching(&h, mode)?;
            let gap = lp::duality_gap(&h, mode)?;
            emit_json(
                &output,
                &json!({
                    "mode": to_value(&mode),
                    "tau_star": transversal.objective().to_json(),
                    "transversal": transversal.to_json(),
                    "matching": matching.to_json(),
                    "gap": gap.to_json(),
                }),
            )?;
            Ok(true)
        }
        Command::Exact {
            file,
            f,
            budget,
            sandwich,
            lambda,
            output,
        } => {
            let h = load(&file)?;
            let sol = exact::exact_tau_f(&h, f, budget)?;
            let witness: Value =
                serde_json::from_str(&io::serialize_multiset(&sol.witness)).expect("multiset JSON");
            let mut value = json!({
                "f": f,
                "tau_f": sol.size,
                "witness": witness,
                "nodes": sol.nodes,
            });
            if sandwich {
                value["sandwich"] = to_value(&exact::sandwich_check(&h, f, lambda)?);
            }
            emit_json(&output, &value)?;
            Ok(true)
        }
        Command::Verify {
            file,
            weighting,
            mode,
            output,
        } => {
            let h = load(&file)?;
            let mode = mode.resolve(&h);
            let report = bounds::verify(&h, weighting.f, weighting.lambda, mode)?;
            emit_json(&output, &to_value(&report))?;
            Ok(report.all_hold)
        }
        Command::Check {
            file,
            picks,
            f,
            output,
        } => {
            let h = load(&file)?;
            let set = io::parse_multiset_for(&io::read_to_string(&picks)?, &h)?;
            let under = h.first_undercovered(&set, f);
            let mut value = json!({ "f": f, "size": set.size(), "transversal": under.is_none() });
            if let Some((edge, covered)) = under {
                value["undercovered"] = json!({ "edge": edge, "covered": covered });
            }
            emit_json(&output, &value)?;
            Ok(under.is_none())
        }
        Command::Cover {
            file,
            lambda,
            output,
        } => {
            let spec = geometry::parse_instance(&io::read_to_string(&file)?)?;
            let inst = GeometricInstance::build(&spec)?;
            let result = geometry::f_fold_cover(&inst, lambda)?;
            let mut value = to_value(&result);
            value["certified"] = json!(format!("grid samples at pitch {} only", result.grid_h));
            emit_json(&output, &value)?;
            Ok(result.all_hold())
        }
        Command::Bench {
            suite,
            lambda,
            seed,
            output,
        } => {
            let start = Instant::now();
            let rows = bench::run_suite(suite, &lambda, seed)?;
            let csv = bench::to_csv(&rows);
            match &output.out {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            let slope = bench::fit_exponent(&rows, 1.0);
            eprintln!(
                "{} rows in {:.1} s; fit exponent against max{{ln Δ, f}}·Δ·n·m: {}",
                rows.len(),
                start.elapsed().as_secs_f64(),
                slope.map_or("n/a".to_string(), |s| format!("{s:.3}"))
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Parse(_) = e {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
