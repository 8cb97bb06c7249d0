//! `cpmap`: evaluate verification score files, build C-P maps and compare
//! systems.
//!
//! Exit status: 0 on success, 1 for input or parse errors, 2 when a metric
//! cannot be evaluated.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cpmap_core::cpmap::{export_cp_map, export_grid_csv, parse_grid_csv};
use cpmap_core::delta::{compute_delta_grid, DEFAULT_EPSILON};
use cpmap_core::hardness::{read_order_dir, write_order_dir};
use cpmap_core::metrics::evaluate;
use cpmap_core::render::{render_grid_ppm, render_sequential, ColorScale};
use cpmap_core::score_io::{join_score_text, read_scored, read_trials_file, write_scores, write_trials};
use cpmap_core::{
    analytic_eer, compute_cp_map, fuse_orderings, sample_scores, summarize_wtl, DcfParams, Error, ErrorCategory,
    FusionMethod, GaussianScoreModel, GridSpec, HardnessOrder, MetricKind, Result, SampleSpec,
};

#[derive(Parser)]
#[command(
    name = "cpmap",
    version,
    about = "Trial-config performance maps for verification systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// EER and minDCF of one system over the full trial list
    Eval(EvalArgs),
    /// Write the hardness ordering fused from one or more systems
    Order(OrderArgs),
    /// Build a C-P map
    Cpmap(CpmapArgs),
    /// Compare two C-P maps cell by cell
    Delta(DeltaArgs),
    /// Sample Gaussian scores and/or report the closed-form EER
    Synth(SynthArgs),
}

#[derive(Args)]
struct DcfArgs {
    #[arg(long, default_value_t = 0.01)]
    p_target: f64,
    #[arg(long, default_value_t = 1.0)]
    c_miss: f64,
    #[arg(long, default_value_t = 1.0)]
    c_fa: f64,
}

impl DcfArgs {
    fn params(&self) -> Result<DcfParams> {
        DcfParams::new(self.p_target, self.c_miss, self.c_fa)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    trials: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    #[command(flatten)]
    dcf: DcfArgs,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    trials: PathBuf,
    /// Score files of the reference systems
    #[arg(long, num_args = 1.., required = true)]
    scores: Vec<PathBuf>,
    #[arg(long, default_value = "rank_mean")]
    fusion: FusionMethod,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CpmapArgs {
    #[arg(long)]
    trials: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    /// Directory written by `order`, or `self` to order by these scores
    #[arg(long)]
    order: String,
    #[arg(long, default_value = "eer")]
    metric: MetricKind,
    #[arg(long, default_value_t = cpmap_core::cpmap::DEFAULT_RESOLUTION)]
    grid: usize,
    #[arg(long, default_value_t = cpmap_core::cpmap::DEFAULT_MIN_TRIALS)]
    min_trials: usize,
    #[command(flatten)]
    dcf: DcfArgs,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_pgm: Option<PathBuf>,
    /// Value drawn white (defaults to the smallest defined cell)
    #[arg(long, requires = "scale_max")]
    scale_min: Option<f64>,
    /// Value drawn black (defaults to the largest defined cell)
    #[arg(long, requires = "scale_min")]
    scale_max: Option<f64>,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    ref_csv: PathBuf,
    #[arg(long)]
    test_csv: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_ppm: Option<PathBuf>,
    /// |RCR| drawn at full color (defaults to the largest |RCR|)
    #[arg(long)]
    span: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu_pos: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu_neg: f64,
    #[arg(long)]
    sigma_pos: f64,
    #[arg(long)]
    sigma_neg: f64,
    #[arg(long, required_unless_present = "analytic")]
    n_pos: Option<usize>,
    #[arg(long, required_unless_present = "analytic")]
    n_neg: Option<usize>,
    #[arg(long, required_unless_present = "analytic")]
    seed: Option<u64>,
    /// Directory for trials.txt and scores.txt
    #[arg(long, required_unless_present = "analytic")]
    out: Option<PathBuf>,
    /// Print the closed-form EER threshold and value
    #[arg(long)]
    analytic: bool,
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let params = args.dcf.params()?;
    let scored = read_scored(&args.trials, &args.scores)?;
    let (eer, dcf) = evaluate(&scored, &params)?;
    println!(
        "eer={:.6} min_dcf={:.6} threshold_eer={:.6} threshold_dcf={:.6}",
        eer.eer, dcf.min_dcf, eer.threshold, dcf.threshold
    );
    Ok(())
}

fn order(args: &OrderArgs) -> Result<()> {
    let trials = read_trials_file(&args.trials)?;
    let systems = args
        .scores
        .iter()
        .map(|path| join_score_text(trials.clone(), &std::fs::read_to_string(path)?))
        .collect::<Result<Vec<_>>>()?;
    let order = fuse_orderings(&systems, args.fusion)?;
    write_order_dir(&args.out, &order)
}

fn cpmap(args: &CpmapArgs) -> Result<()> {
    let spec = GridSpec::new(args.grid, args.min_trials)?;
    let params = match args.metric {
        MetricKind::MinDcf => Some(args.dcf.params()?),
        MetricKind::Eer => None,
    };
    let scored = read_scored(&args.trials, &args.scores)?;
    let order = if args.order == "self" {
        HardnessOrder::from_scores(&scored)
    } else {
        read_order_dir(&args.order)?
    };
    let map = compute_cp_map(&scored, &order, &spec, args.metric, params.as_ref())?
        .with_provenance(file_stem(&args.scores), args.order.clone());
    std::fs::write(&args.out_csv, export_cp_map(&map))?;
    if let Some(path) = &args.out_pgm {
        let scale = match (args.scale_min, args.scale_max) {
            (Some(lo), Some(hi)) => ColorScale::sequential(lo, hi)?,
            _ => ColorScale::sequential_for(&map.grid),
        };
        std::fs::write(path, render_sequential(&map, &scale)?)?;
    }
    Ok(())
}

fn delta(args: &DeltaArgs) -> Result<()> {
    let reference = parse_grid_csv(&std::fs::read_to_string(&args.ref_csv)?)?;
    let test = parse_grid_csv(&std::fs::read_to_string(&args.test_csv)?)?;
    let delta = compute_delta_grid(
        &reference,
        &test,
        args.epsilon,
        &file_stem(&args.ref_csv),
        &file_stem(&args.test_csv),
    )?;
    std::fs::write(&args.out_csv, export_grid_csv(&delta.grid))?;
    if let Some(path) = &args.out_ppm {
        let scale = match args.span {
            Some(span) => ColorScale::diverging(span)?,
            None => ColorScale::diverging_for(&delta.grid),
        };
        std::fs::write(path, render_grid_ppm(&delta.grid, &scale)?)?;
    }
    println!("{}", summarize_wtl(&delta)?);
    Ok(())
}

fn synth(args: &SynthArgs) -> Result<()> {
    let model = GaussianScoreModel::new(args.mu_pos, args.sigma_pos, args.mu_neg, args.sigma_neg)?;
    if args.analytic {
        let r = analytic_eer(&model)?;
        println!("eer={:.6} threshold={:.6}", r.eer, r.threshold);
    }
    if let Some(dir) = &args.out {
        let (Some(n_pos), Some(n_neg), Some(seed)) = (args.n_pos, args.n_neg, args.seed) else {
            return Err(Error::Input("--out needs --n-pos, --n-neg and --seed".into()));
        };
        let scored = sample_scores(&model, &SampleSpec::new(n_pos, n_neg, seed)?)?;
        let (trials, scores) = scored.split();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("trials.txt"), write_trials(&trials))?;
        std::fs::write(dir.join("scores.txt"), write_scores(&scores))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Order(a) => order(a),
        Command::Cpmap(a) => cpmap(a),
        Command::Delta(a) => delta(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.category() {
                ErrorCategory::Input => ExitCode::from(1),
                ErrorCategory::Evaluation => ExitCode::from(2),
            }
        }
    }
}
