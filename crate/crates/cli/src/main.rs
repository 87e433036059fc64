//! `usdisc`: sweeps, region maps, verification runs and single-instance solves.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad spec or input.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use usdisc_core::distributions::Family;
use usdisc_core::export::{write_curve, write_region_map, write_reports, write_weights};
use usdisc_core::sweep::{
    CoherenceMeasure, FilteringCurveSpec, MixedCurveSpec, PhotonExample, PhotonSpec, RegionMapSpec,
};
use usdisc_core::tol::DEFAULT_TAIL_BOUND;
use usdisc_core::{
    block_case, classify_joint, delta_q, q_min_filtering, q_min_mixed_mixed, q_min_pure_counterpart, q_min_superposed,
    verify_instance, Instance, InstanceDoc, PhotonDistribution, SweepOutput, SweepRange, SweepSpec, VerifySpec,
    VerifySummary,
};

#[derive(Parser)]
#[command(
    name = "usdisc",
    version,
    about = "Unambiguous state discrimination sweeps and checks"
)]
struct Cli {
    /// Run the JSON spec in this file; it overrides the subcommand flags.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Discarded-mass bound for Poisson and squeezed weights.
    #[arg(long, global = true, default_value_t = DEFAULT_TAIL_BOUND)]
    tail_bound: f64,

    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Joint-case labels over (s11', s12') for two components.
    RegionMap(RegionArgs),
    /// Delta-Q against coherence along a weight sweep.
    DeltaQ(DeltaQArgs),
    /// Delta-Q along an amplitude sweep of a photon-number family.
    Gaussian(GaussianArgs),
    /// Randomized oracle and comparison checks.
    Verify(VerifyArgs),
    /// Solve one instance given as JSON.
    Solve(SolveArgs),
    /// Export photon-number weights as CSV.
    Weights(WeightsArgs),
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long, default_value_t = 0.15)]
    p1: f64,
    #[arg(long, default_value_t = 0.1)]
    beta1: f64,
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 0.0])]
    phases: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    resolution: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    /// Pure state against a rank-N mixture, sweeping beta_1.
    Filtering,
    /// Two rank-N mixtures with alpha = beta, sweeping alpha_1.
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    L1,
    RelativeEntropy,
}

impl From<Measure> for CoherenceMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::L1 => CoherenceMeasure::L1,
            Measure::RelativeEntropy => CoherenceMeasure::RelativeEntropy,
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

impl RangeArgs {
    fn or(&self, start: f64, stop: f64, points: usize) -> SweepRange {
        SweepRange::new(
            self.start.unwrap_or(start),
            self.stop.unwrap_or(stop),
            self.points.unwrap_or(points),
        )
    }
}

#[derive(Args)]
struct DeltaQArgs {
    #[arg(long, value_enum, default_value = "filtering")]
    kind: CurveKind,
    #[arg(long, default_value_t = 0.15)]
    p1: f64,
    /// Overlaps s_1i' (filtering) or s_ii' (mixed).
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5])]
    overlaps: Vec<f64>,
    /// Phases theta_i (filtering only); zeros when absent.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "l1")]
    coherence: Measure,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Binomial,
    Poisson,
    Squeezed,
}

fn family(f: FamilyArg, n: usize) -> Family {
    match f {
        FamilyArg::Binomial => Family::Binomial { n },
        FamilyArg::Poisson => Family::Poisson,
        FamilyArg::Squeezed => Family::SqueezedVacuum,
    }
}

#[derive(Args)]
struct GaussianArgs {
    /// 1: pure state against the mixture; 2: two mixtures with alpha = beta.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    example: u8,
    #[arg(long, value_enum, default_value = "poisson")]
    family: FamilyArg,
    /// Dimension of the binomial family.
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.15)]
    p1: f64,
    /// Index of the single nonzero overlap (example 1).
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Value of that overlap (example 1).
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,
    /// Overlap for indices up to --head-last (example 2).
    #[arg(long, default_value_t = 0.5)]
    head: f64,
    /// Overlap for the remaining indices (example 2).
    #[arg(long, default_value_t = 0.2)]
    tail: f64,
    #[arg(long, default_value_t = 4)]
    head_last: usize,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Oracle instances per kind.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Instances per comparison suite.
    #[arg(long, default_value_t = 1_000)]
    suite_count: usize,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file, or `-` for stdin.
    instance: PathBuf,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    n: usize,
}

/// A check ran and failed (exit code 1), as opposed to bad input (exit code 2).
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn build_spec(cli: &Cli, cmd: &Command) -> SweepSpec {
    match cmd {
        Command::RegionMap(a) => SweepSpec::RegionMap(RegionMapSpec {
            p1: a.p1,
            beta1: a.beta1,
            phases: [a.phases[0], a.phases[1]],
            resolution: a.resolution,
        }),
        Command::DeltaQ(a) => match a.kind {
            CurveKind::Filtering => SweepSpec::FilteringDeltaQ(FilteringCurveSpec {
                p1: a.p1,
                overlaps: a.overlaps.clone(),
                phases: a.phases.clone().unwrap_or_else(|| vec![0.0; a.overlaps.len()]),
                beta1: a.range.or(0.0, 1.0, 201),
                coherence: a.coherence.into(),
            }),
            CurveKind::Mixed => SweepSpec::MixedDeltaQ(MixedCurveSpec {
                p1: a.p1,
                diag_overlaps: a.overlaps.clone(),
                alpha1: a.range.or(0.0, 1.0, 201),
                coherence: a.coherence.into(),
            }),
        },
        Command::Gaussian(a) => {
            let example = if a.example == 1 {
                PhotonExample::Filtering {
                    t: a.t,
                    overlap: a.overlap,
                }
            } else {
                PhotonExample::MixedMixed {
                    head: a.head,
                    tail: a.tail,
                    head_last: a.head_last,
                }
            };
            let spec = PhotonSpec {
                p1: a.p1,
                family: family(a.family, a.n),
                example,
                alpha: a.range.or(0.0, 3.0, 301),
                tail_bound: cli.tail_bound,
            };
            match (a.example, a.family) {
                (1, FamilyArg::Binomial) => SweepSpec::Example1Binomial(spec),
                (1, _) => SweepSpec::Example1Gaussian(spec),
                (_, FamilyArg::Binomial) => SweepSpec::Example2Binomial(spec),
                _ => SweepSpec::Example2Gaussian(spec),
            }
        }
        Command::Verify(a) => SweepSpec::Verify(VerifySpec {
            count: a.count,
            seed: cli.seed,
            suite_count: a.suite_count,
            max_len: a.max_len,
        }),
        Command::Solve(_) | Command::Weights(_) => unreachable!("not a sweep"),
    }
}

fn read_input(path: &Path) -> Result<String> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut s)?;
    } else {
        File::open(path)
            .with_context(|| format!("opening {}", path.display()))?
            .read_to_string(&mut s)?;
    }
    Ok(s)
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_summary(s: &VerifySummary) {
    println!(
        "{:<22} {:>7} {:>7}  {:<34} {:>12}",
        "suite", "passed", "total", "metric", "worst"
    );
    for suite in &s.suites {
        println!(
            "{:<22} {:>7} {:>7}  {:<34} {:>12.3e}",
            suite.name, suite.passed, suite.total, suite.metric, suite.worst
        );
    }
    println!("{}", if s.all_passed() { "all suites passed" } else { "FAILED" });
}

fn run_sweep(spec: &SweepSpec, out: &Option<PathBuf>) -> Result<()> {
    let result = spec.run().map_err(anyhow::Error::new)?;
    match result {
        SweepOutput::RegionMap(map) => write_region_map(output(out)?, spec, &map)?,
        SweepOutput::Curve(curve) => {
            write_curve(output(out)?, spec, &curve)?;
            if !curve.skipped.is_empty() {
                eprintln!("skipped {} invalid sweep points", curve.skipped.len());
            }
        }
        SweepOutput::Verify(summary) => {
            print_summary(&summary);
            if out.is_some() {
                write_reports(output(out)?, &summary.reports)?;
            }
            if !summary.all_passed() {
                return Err(VerificationFailed.into());
            }
        }
    }
    Ok(())
}

fn solve(path: &Path, out: &Option<PathBuf>) -> Result<()> {
    let doc: InstanceDoc = serde_json::from_str(&read_input(path)?).context("parsing instance")?;
    let inst = doc.validate()?;
    let report = verify_instance(&inst);
    let body = match &inst {
        Instance::Filtering(i) => json!({ "result": q_min_filtering(i) }),
        Instance::PurePair(i) => {
            let (mixed, pure) = (q_min_filtering(&i.mixture()), q_min_superposed(i));
            json!({
                "result": pure,
                "mixture": mixed,
                "delta_q": delta_q(&mixed, &pure),
                "joint_case": classify_joint(&i.mixture(), i)?.label(),
            })
        }
        Instance::RankNPair(i) => {
            let (mixed, pure) = (q_min_mixed_mixed(i)?, q_min_pure_counterpart(i));
            json!({
                "result": mixed,
                "counterpart": pure,
                "delta_q": delta_q(&mixed, &pure),
                "case": block_case(i)?.label(),
            })
        }
    };
    let mut doc = json!({ "kind": inst.kind(), "oracle_value": report.oracle_value, "oracle_gap": report.gap });
    doc.as_object_mut()
        .expect("object")
        .extend(body.as_object().expect("object").clone());
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()?;
    if !report.pass {
        return Err(VerificationFailed.into());
    }
    Ok(())
}

fn weights(cli: &Cli, a: &WeightsArgs) -> Result<()> {
    let fam = family(a.family, a.n);
    let dist = PhotonDistribution::new(fam, a.alpha, cli.tail_bound, 0)?;
    let header = json!({
        "family": fam,
        "alpha": a.alpha,
        "tail_bound": cli.tail_bound,
        "truncation": dist.truncation(),
    });
    write_weights(output(&cli.out)?, &header, &dist)?;
    Ok(())
}

fn spec_matches(spec: &SweepSpec, cmd: &Command) -> bool {
    matches!(
        (cmd, spec),
        (Command::RegionMap(_), SweepSpec::RegionMap(_))
            | (
                Command::DeltaQ(_),
                SweepSpec::FilteringDeltaQ(_) | SweepSpec::MixedDeltaQ(_)
            )
            | (
                Command::Gaussian(_),
                SweepSpec::Example1Binomial(_)
                    | SweepSpec::Example1Gaussian(_)
                    | SweepSpec::Example2Binomial(_)
                    | SweepSpec::Example2Gaussian(_)
            )
            | (Command::Verify(_), SweepSpec::Verify(_))
    )
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(path) = &cli.spec {
        let spec: SweepSpec =
            serde_json::from_str(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(cmd) = &cli.command {
            if !spec_matches(&spec, cmd) {
                bail!("spec target {} does not match the subcommand", spec.target());
            }
        }
        return run_sweep(&spec, &cli.out);
    }
    match &cli.command {
        None => bail!("a subcommand or --spec is required"),
        Some(Command::Solve(a)) => solve(&a.instance, &cli.out),
        Some(Command::Weights(a)) => weights(cli, a),
        Some(cmd) => run_sweep(&build_spec(cli, cmd), &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
