use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use winograd_points::conv::{PrecisionMode, SummationPolicy};
use winograd_points::exec::{with_threads, Execution};
use winograd_points::families::{block_cost_table, format_ratio_2dp};
use winograd_points::harness::{
    measure_error_with, measure_layer_error, BatchRow, ErrorStats, LayerEvalConfig, LayerShape, TrialConfig,
};
use winograd_points::reference::{sota_rows, PointSource, SotaRow};
use winograd_points::search::{
    chebyshev_point_set, enumerate_subsets, grid_search_cd, pattern_report, sweep_c, FamilyTemplate, Slot, SweepResult,
    C_FAMILY, D_FAMILY, FINAL_TRIALS, SWEEP_TRIALS,
};
use winograd_points::{build_transforms, PointSet};

const DEFAULT_SEED: u64 = 2024;

/// Winograd convolution transforms, floating-point error experiments and
/// interpolation-point search.
#[derive(Parser)]
#[command(name = "winograd", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Log more (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Experiment {
    /// Precision mode: f32, mixed or f64.
    #[arg(long, default_value = "f32")]
    mode: PrecisionMode,

    /// Summation order: sequential, pairwise or huffman.
    #[arg(long, default_value = "huffman")]
    policy: SummationPolicy,

    /// 1 or 2.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    dims: u8,

    #[arg(long, env = "WINOGRAD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyKind {
    C,
    D,
    Cd,
}

#[derive(Subcommand)]
enum Command {
    /// Print the A^T, G and B^T matrices as CSV.
    Transforms {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Comma separated points, e.g. -1,0,1,inf.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },

    /// Measure the error of one point set (or direct convolution) as JSON.
    Eval {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Omit to measure direct convolution.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
        /// Append a row to this batch CSV.
        #[arg(long)]
        append_csv: Option<PathBuf>,
    },

    /// Sweep c for a one-parameter template.
    Sweep {
        /// e.g. 0,-1/c,-c,c,1/c,inf
        #[arg(long, allow_hyphen_values = true, default_value = "0,-1/c,-c,c,1/c,inf")]
        template: FamilyTemplate,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1.1)]
        cmin: f64,
        #[arg(long, default_value_t = 2.5)]
        cmax: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[command(flatten)]
        exp: Experiment,
        /// Trials per grid point.
        #[arg(long, default_value_t = SWEEP_TRIALS)]
        trials: usize,
        /// Trials for re-measuring the argmin (0 skips it).
        #[arg(long, default_value_t = FINAL_TRIALS)]
        final_trials: usize,
        /// Write the curve here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the summary here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// Coarse-to-fine search over (c, d) for a two-parameter template.
    Grid {
        #[arg(
            long,
            allow_hyphen_values = true,
            default_value = "0,-1/c,-c,c,1/c,-1/d,-d,d,1/d,inf"
        )]
        template: FamilyTemplate,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// MIN:MAX
        #[arg(long, default_value = "1.1:2.5", value_parser = parse_range)]
        crange: (f64, f64),
        /// MIN:MAX
        #[arg(long, default_value = "1.1:2.5", value_parser = parse_range)]
        drange: (f64, f64),
        #[arg(long, default_value_t = 1e-2)]
        coarse: f64,
        #[arg(long, default_value_t = 1e-3)]
        fine: f64,
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = SWEEP_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = FINAL_TRIALS)]
        final_trials: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// List (and optionally rank) templates joining base points with a
    /// subset of a symmetric family.
    Subsets {
        /// Fixed points, e.g. 0,3,inf.
        #[arg(long, allow_hyphen_values = true, default_value = "0,inf")]
        base: String,
        #[arg(long, value_enum, default_value = "c")]
        family: FamilyKind,
        #[arg(long)]
        choose: usize,
        /// Sweep every pattern over c and rank them.
        #[arg(long)]
        rank: bool,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1.1)]
        cmin: f64,
        #[arg(long, default_value_t = 2.5)]
        cmax: f64,
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = SWEEP_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = FINAL_TRIALS)]
        final_trials: usize,
    },

    /// Print multiplies per output for 2D tiles.
    Table1,

    /// Compare proposed and simple-fraction points in 1D.
    #[command(name = "reproduce-1d")]
    Reproduce1d(Reproduce),

    /// Compare proposed and simple-fraction points in 2D.
    #[command(name = "reproduce-2d")]
    Reproduce2d(Reproduce),

    /// Measure Chebyshev nodes plus infinity.
    Chebyshev {
        /// Total number of points including infinity.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
    },

    /// Run a synthetic network and report the normalised layer error.
    LayerEval {
        /// JSON list of {"C","K","H","W","r"} layers.
        #[arg(long)]
        net: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["template", "chebyshev"])]
        points: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "c")]
        template: Option<FamilyTemplate>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        /// Use this many Chebyshev points (including infinity).
        #[arg(long)]
        chebyshev: Option<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        images: usize,
        #[arg(long, default_value = "f32")]
        mode: PrecisionMode,
        #[arg(long, default_value = "sequential")]
        policy: SummationPolicy,
        #[arg(long, env = "WINOGRAD_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct Reproduce {
    /// 500 trials per set.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 5000)]
    trials: usize,
    #[arg(long, default_value = "f32")]
    mode: PrecisionMode,
    #[arg(long, default_value = "huffman")]
    policy: SummationPolicy,
    #[arg(long, env = "WINOGRAD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number `{b}`"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match with_threads(cli.threads, || run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        // reader went away (e.g. `| head`)
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    let exec = Execution::Parallel;
    match command {
        Command::Transforms { m, k, points } => {
            let set = PointSet::parse(&points, m, k)?;
            print!("{}", build_transforms(&set)?.to_csv());
        }
        Command::Eval {
            m,
            k,
            points,
            exp,
            trials,
            append_csv,
        } => {
            let cfg = match points {
                Some(p) => {
                    let set = PointSet::parse(&p, m, k)?;
                    TrialConfig::winograd(set, exp.dims, exp.mode, exp.policy, exp.seed)
                }
                None => TrialConfig {
                    sum_policy: exp.policy,
                    ..TrialConfig::direct(m, k, exp.dims, exp.mode, exp.seed)
                },
            }
            .with_trials(trials);
            let stats = measure_error_with(&cfg, exec)?;
            println!("{}", stats.to_json(&cfg)?);
            if let Some(path) = append_csv {
                BatchRow::new(&cfg, &stats).append_to(&path)?;
            }
        }
        Command::Sweep {
            template,
            k,
            cmin,
            cmax,
            step,
            exp,
            trials,
            final_trials,
            csv,
            json,
        } => {
            let cfg = sweep_config(k, &exp, trials);
            let result = sweep_c(&template, cmin, cmax, step, &cfg, exec)?;
            report_sweep(&result, &cfg, final_trials, csv.as_deref(), json.as_deref(), exec)?;
        }
        Command::Grid {
            template,
            k,
            crange,
            drange,
            coarse,
            fine,
            exp,
            trials,
            final_trials,
            csv,
            json,
        } => {
            let cfg = sweep_config(k, &exp, trials);
            let result = grid_search_cd(&template, crange, drange, (coarse, fine), &cfg, exec)?;
            report_sweep(&result, &cfg, final_trials, csv.as_deref(), json.as_deref(), exec)?;
        }
        Command::Subsets {
            base,
            family,
            choose,
            rank,
            k,
            cmin,
            cmax,
            step,
            exp,
            trials,
            final_trials,
        } => {
            let base = base
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<Slot>, _>>()?;
            let family: Vec<Slot> = match family {
                FamilyKind::C => C_FAMILY.to_vec(),
                FamilyKind::D => D_FAMILY.to_vec(),
                FamilyKind::Cd => C_FAMILY.iter().chain(&D_FAMILY).copied().collect(),
            };
            if !rank {
                for t in enumerate_subsets(&base, &family, choose)? {
                    println!("{t}");
                }
                return Ok(());
            }
            let sweep_cfg = sweep_config(k, &exp, trials);
            let final_cfg = sweep_config(k, &exp, final_trials);
            let ranked = pattern_report(
                &base,
                &family,
                base.len() + choose,
                (cmin, cmax),
                step,
                &sweep_cfg,
                &final_cfg,
                exec,
            )?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["rank", "template", "c", "mean_l1"])?;
            for r in ranked {
                w.write_record([
                    r.rank.to_string(),
                    r.candidate.template.to_string(),
                    format!("{:?}", r.candidate.c),
                    format!("{:e}", r.stats.mean_l1),
                ])?;
            }
            w.flush()?;
        }
        Command::Table1 => {
            println!("input,output,kernel,multiplies_per_output");
            for row in block_cost_table() {
                println!(
                    "{},{},{},{}",
                    row.input,
                    row.output,
                    row.kernel,
                    format_ratio_2dp(row.multiplies)
                );
            }
        }
        Command::Reproduce1d(args) => reproduce(1, &args, exec)?,
        Command::Reproduce2d(args) => reproduce(2, &args, exec)?,
        Command::Chebyshev { n, k, exp, trials } => {
            if n < k {
                bail!("{n} points cannot serve a kernel of {k}");
            }
            let set = chebyshev_point_set(n, n - k + 1, k)?;
            let cfg = TrialConfig::winograd(set, exp.dims, exp.mode, exp.policy, exp.seed).with_trials(trials);
            let stats = measure_error_with(&cfg, exec)?;
            println!("{}", stats.to_json(&cfg)?);
        }
        Command::LayerEval {
            net,
            points,
            template,
            c,
            d,
            chebyshev,
            k,
            images,
            mode,
            policy,
            seed,
        } => {
            let text = fs::read_to_string(&net).with_context(|| format!("reading {}", net.display()))?;
            let network = LayerShape::parse_network(&text)?;
            let set = match (points, template, chebyshev) {
                (Some(p), None, None) => {
                    let n = p.split(',').filter(|t| !t.trim().is_empty()).count();
                    if n < k {
                        bail!("{n} points cannot serve a kernel of {k}");
                    }
                    PointSet::parse(&p, n - k + 1, k)?
                }
                (None, Some(t), None) => t.instantiate(k, c.expect("required by clap"), d)?,
                (None, None, Some(n)) => {
                    if n < k {
                        bail!("{n} points cannot serve a kernel of {k}");
                    }
                    chebyshev_point_set(n, n - k + 1, k)?
                }
                _ => bail!("give exactly one of --points, --template or --chebyshev"),
            };
            let cfg = LayerEvalConfig::new(mode, policy, images, seed);
            let report = measure_layer_error(&network, &set, &cfg, exec)?;
            let out = json!({
                "points": set,
                "config": cfg,
                "layers": report.layers,
                "aggregate": report.aggregate,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(())
}

fn sweep_config(k: usize, exp: &Experiment, trials: usize) -> TrialConfig {
    TrialConfig {
        sum_policy: exp.policy,
        ..TrialConfig::direct(1, k, exp.dims, exp.mode, exp.seed)
    }
    .with_trials(trials)
}

fn report_sweep(
    result: &SweepResult,
    cfg: &TrialConfig,
    final_trials: usize,
    csv: Option<&Path>,
    json: Option<&Path>,
    exec: Execution,
) -> Result<()> {
    let mut summary: serde_json::Value = serde_json::from_str(&result.summary_json()?)?;
    if final_trials > 0 {
        let points = result.template.instantiate(cfg.k, result.argmin.c, result.argmin.d)?;
        let final_cfg = cfg.clone().with_points(points).with_trials(final_trials);
        let stats = measure_error_with(&final_cfg, exec)?;
        summary["final"] = serde_json::to_value(&stats)?;
    }
    let summary = serde_json::to_string_pretty(&summary)?;
    let mut stdout = io::stdout().lock();
    match csv {
        Some(path) => fs::write(path, result.to_csv()).with_context(|| format!("writing {}", path.display()))?,
        None => write!(stdout, "{}", result.to_csv())?,
    }
    match json {
        Some(path) => fs::write(path, summary + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => writeln!(stdout, "{summary}")?,
    }
    Ok(())
}

fn measure_source(src: &PointSource, row: &SotaRow, dims: u8, args: &Reproduce, exec: Execution) -> Result<ErrorStats> {
    let trials = if args.quick { 500 } else { args.trials };
    let cfg = match src.point_set()? {
        Some(set) => TrialConfig::winograd(set, dims, args.mode, args.policy, args.seed),
        None => TrialConfig::direct(row.m(), 3, dims, args.mode, args.seed),
    }
    .with_trials(trials);
    Ok(measure_error_with(&cfg, exec)?)
}

fn improvement(baseline: f64, proposed: f64) -> f64 {
    100.0 * (baseline - proposed) / baseline
}

fn reproduce(dims: u8, args: &Reproduce, exec: Execution) -> Result<()> {
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "n",
        "baseline_points",
        "baseline_mean_l1",
        "baseline_reported",
        "proposed_points",
        "proposed_mean_l1",
        "proposed_reported",
        "improvement_pct",
        "reported_improvement_pct",
    ])?;
    for row in sota_rows(dims) {
        let base = measure_source(&row.baseline, &row, dims, args, exec)?;
        let prop = if row.proposed == row.baseline {
            base.clone()
        } else {
            measure_source(&row.proposed, &row, dims, args, exec)?
        };
        let (imp, reported) = if row.n == 0 {
            (String::new(), String::new())
        } else {
            (
                format!("{:.2}", improvement(base.mean_l1, prop.mean_l1)),
                format!("{:.2}", improvement(row.baseline_error, row.proposed_error)),
            )
        };
        w.write_record([
            row.n.to_string(),
            row.baseline.label(),
            format!("{:.4e}", base.mean_l1),
            format!("{:e}", row.baseline_error),
            row.proposed.label(),
            format!("{:.4e}", prop.mean_l1),
            format!("{:e}", row.proposed_error),
            imp,
            reported,
        ])?;
        w.flush()?;
    }
    Ok(())
}
