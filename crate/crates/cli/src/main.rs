//! Batch verification front end.
//!
//! Subcommands: `verify` (the full pipeline), `root-search`, `enumerate`,
//! `identities`. Rationals cross this boundary as exact `p/q` strings.
//! Exit codes: 0 full pass, 1 verification failure, 2 usage error.

mod pipeline;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use k3check::exactring::{parse_rational, BigRational, VarName};
use k3check::families::{build_family, control_triple_non_k0, FamilyKind, FamilySpec};
use k3check::lattice::{enumerate_by_norm, LatticeSpace};
use k3check::report::{CheckReport, Report, Status};
use k3check::rootcheck::identities::verify_identity_bank;
use k3check::rootcheck::{root_search_at_point, RootCandidate};

use pipeline::{default_family_instances, default_grid, verify_families, RunConfig};

#[derive(Parser)]
#[command(name = "k3check", version, about = "Exact verification of K3-lattice period constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check suite: lattice sanity, isometries, equivariance,
    /// period membership, linear variation, affine classification, system
    /// match, identity bank, root searches, exclusion sweep
    Verify(VerifyArgs),
    /// Exact root search at rational parameter points
    RootSearch(RootSearchArgs),
    /// Enumerate vectors of a definite lattice by norm
    Enumerate(EnumerateArgs),
    /// Check the bank of rewriting identities
    Identities(CommonArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// One-parameter family over the circle
    Circle,
    /// Standard two-torus family
    TorusStd,
    /// Three-integer-parameter torus family (needs --n --p --q)
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ControlArg {
    /// Triple satisfying the period conditions but with ±(u-v) orthogonal
    NonK0,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct FamilySelector {
    /// Family to verify (default: all built-in instances)
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Torus parameter n ≥ 1
    #[arg(long)]
    n: Option<i64>,
    /// Torus parameter p ≥ 1
    #[arg(long)]
    p: Option<i64>,
    /// Torus parameter q ≥ 1
    #[arg(long)]
    q: Option<i64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    selector: FamilySelector,
    /// Sample value for s as an exact rational `p/q` (repeatable)
    #[arg(long = "s")]
    s: Vec<String>,
    /// Sample value for r as an exact rational `p/q` (repeatable)
    #[arg(long = "r")]
    r: Vec<String>,
    /// Box bound |A..F| ≤ N for the point searches
    #[arg(long, default_value_t = 5)]
    bound: i64,
    /// Bound on n1, n2
    #[arg(long = "norm-bound", default_value_t = 2)]
    norm_bound: i64,
    /// Box bound for the exclusion sweep
    #[arg(long = "sweep-bound", default_value_t = 3)]
    sweep_bound: i64,
    /// Skip the exclusion sweep
    #[arg(long, default_value_t = false)]
    no_sweep: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RootSearchArgs {
    #[command(flatten)]
    selector: FamilySelector,
    /// Search a built-in control triple instead of a family
    #[arg(long, value_enum, conflicts_with = "family")]
    control: Option<ControlArg>,
    #[arg(long = "s")]
    s: Vec<String>,
    #[arg(long = "r")]
    r: Vec<String>,
    /// Box bound |A..F| ≤ N
    #[arg(long, default_value_t = 5)]
    bound: i64,
    #[arg(long = "norm-bound", default_value_t = 2)]
    norm_bound: i64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeArg {
    U,
    E8,
    MinusE8,
    K3,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Which lattice to enumerate
    #[arg(long, value_enum)]
    lattice: LatticeArg,
    /// Target |(v, v)|
    #[arg(long)]
    norm: i64,
    /// Include the full vector listing
    #[arg(long, default_value_t = false)]
    list: bool,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::RootSearch(args) => root_search(args),
        Command::Enumerate(args) => enumerate(args),
        Command::Identities(common) => identities(common),
    }
}

fn configure_jobs(jobs: usize) -> Result<(), String> {
    if jobs == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| format!("could not configure {jobs} worker threads: {e}"))
}

fn parse_samples(texts: &[String]) -> Result<Vec<BigRational>, String> {
    texts
        .iter()
        .map(|t| parse_rational(t).map_err(|e| e.to_string()))
        .collect()
}

fn resolve_families(selector: &FamilySelector) -> Result<Vec<FamilySpec>, String> {
    let npq = match (selector.n, selector.p, selector.q) {
        (None, None, None) => None,
        (Some(n), Some(p), Some(q)) => Some((n, p, q)),
        _ => return Err("--n, --p, --q must be given together".into()),
    };
    match selector.family {
        None => {
            if npq.is_some() {
                return Err("--n/--p/--q need --family torus".into());
            }
            Ok(default_family_instances())
        }
        Some(FamilyArg::Circle) => {
            build_family(FamilyKind::Circle, npq).map(|f| vec![f]).map_err(|e| e.to_string())
        }
        Some(FamilyArg::TorusStd) => build_family(FamilyKind::TorusStandard, npq)
            .map(|f| vec![f])
            .map_err(|e| e.to_string()),
        Some(FamilyArg::Torus) => {
            let params = npq.ok_or("--family torus needs --n, --p, --q")?;
            build_family(FamilyKind::TorusNpq, Some(params))
                .map(|f| vec![f])
                .map_err(|e| e.to_string())
        }
    }
}

fn emit(report: &Report, format: Format, started: Instant) -> ExitCode {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(report).expect("report serializes");
            println!("{text}");
        }
        Format::Text => {
            for check in &report.checks {
                match check.status {
                    Status::Pass => match &check.detail {
                        Some(detail) => println!("PASS {} ({detail})", check.check_name),
                        None => println!("PASS {}", check.check_name),
                    },
                    Status::Fail => println!(
                        "FAIL {}: {}",
                        check.check_name,
                        check.witness.as_deref().unwrap_or("(no witness)")
                    ),
                }
            }
            println!(
                "summary: {} ({} checks, {:.2?})",
                if report.summary == Status::Pass { "pass" } else { "fail" },
                report.checks.len(),
                started.elapsed()
            );
        }
    }
    if report.summary == Status::Pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let started = Instant::now();
    configure_jobs(args.common.jobs)?;
    let families = resolve_families(&args.selector)?;
    if args.bound < 1 || args.sweep_bound < 1 || args.norm_bound < 0 {
        return Err("bounds must be positive".into());
    }
    if args.norm_bound > 2 {
        return Err("the exclusion sweep covers norm bounds up to 2".into());
    }
    let s_samples = parse_samples(&args.s)?;
    let r_samples = parse_samples(&args.r)?;
    let config = RunConfig {
        s_samples: if s_samples.is_empty() { default_grid() } else { s_samples },
        r_samples: if r_samples.is_empty() { default_grid() } else { r_samples },
        bound: args.bound,
        norm_bound: args.norm_bound,
        sweep_bound: args.sweep_bound,
        skip_sweep: args.no_sweep,
    };
    let descriptor = if families.len() == 1 {
        families[0].descriptor()
    } else {
        "all".to_owned()
    };
    let checks = verify_families(&families, &config);
    let report = Report::new(Some(descriptor), checks);
    Ok(emit(&report, args.common.format, started))
}

fn describe_candidates(hits: &[RootCandidate]) -> String {
    let parts: Vec<String> = hits
        .iter()
        .map(|c| format!("{:?}", c.full_vector().0))
        .collect();
    parts.join("; ")
}

fn root_search(args: RootSearchArgs) -> Result<ExitCode, String> {
    let started = Instant::now();
    configure_jobs(args.common.jobs)?;
    if args.bound < 1 || args.norm_bound < 0 {
        return Err("bounds must be positive".into());
    }
    let mut report = CheckReport::new();
    let descriptor;
    if let Some(ControlArg::NonK0) = args.control {
        descriptor = "control non-k0".to_owned();
        let triple = control_triple_non_k0();
        let hits = root_search_at_point(&triple, &BTreeMap::new(), args.bound, args.norm_bound);
        let expected = vec![
            RootCandidate::hyperbolic_only([-1, 1, 0, 0, 0, 0]),
            RootCandidate::hyperbolic_only([1, -1, 0, 0, 0, 0]),
        ];
        report.record(
            "control_root_search",
            hits == expected,
            format!("found {}", describe_candidates(&hits)),
        );
        if hits == expected {
            report.results.last_mut().expect("just pushed").detail =
                Some(format!("{} candidates: {}", hits.len(), describe_candidates(&hits)));
        }
    } else {
        let families = resolve_families(&args.selector)?;
        if args.selector.family.is_none() {
            return Err("root-search needs --family or --control".into());
        }
        let family = &families[0];
        descriptor = family.descriptor();
        let s_samples = parse_samples(&args.s)?;
        let r_samples = parse_samples(&args.r)?;
        let s_samples = if s_samples.is_empty() { default_grid() } else { s_samples };
        let r_samples = if r_samples.is_empty() { default_grid() } else { r_samples };
        let points: Vec<BTreeMap<VarName, BigRational>> = match family.kind {
            FamilyKind::Circle => s_samples
                .iter()
                .map(|s| BTreeMap::from([(VarName::S, s.clone())]))
                .collect(),
            _ => s_samples
                .iter()
                .flat_map(|s| {
                    r_samples.iter().map(move |r| {
                        BTreeMap::from([(VarName::S, s.clone()), (VarName::R, r.clone())])
                    })
                })
                .collect(),
        };
        for values in points {
            let label: Vec<String> = values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let hits =
                root_search_at_point(&family.triple, &values, args.bound, args.norm_bound);
            let name = format!("root_search[{}]", label.join(","));
            if hits.is_empty() {
                report.pass_with_detail(name, "0 candidates");
            } else {
                report.fail(name, describe_candidates(&hits));
            }
        }
    }
    let report = Report::new(Some(descriptor), report.results);
    Ok(emit(&report, args.common.format, started))
}

fn enumerate(args: EnumerateArgs) -> Result<ExitCode, String> {
    let started = Instant::now();
    configure_jobs(args.common.jobs)?;
    if args.norm < 0 {
        return Err("--norm must be nonnegative".into());
    }
    let (space, label) = match args.lattice {
        LatticeArg::U => (LatticeSpace::hyperbolic_u("u", "v"), "u"),
        LatticeArg::E8 => (LatticeSpace::e8(), "e8"),
        LatticeArg::MinusE8 => (LatticeSpace::minus_e8(), "minus-e8"),
        LatticeArg::K3 => (LatticeSpace::k3(), "k3"),
    };
    let vectors = enumerate_by_norm(&space, args.norm).map_err(|e| e.to_string())?;
    let mut report = CheckReport::new();
    let detail = if args.list {
        let listing: Vec<&Vec<i64>> = vectors.iter().map(|v| &v.0).collect();
        format!(
            "{} vectors: {}",
            vectors.len(),
            serde_json::to_string(&listing).expect("vectors serialize")
        )
    } else {
        format!("{} vectors", vectors.len())
    };
    report.pass_with_detail(format!("enumerate[{label},norm={}]", args.norm), detail);
    let report = Report::new(None, report.results);
    Ok(emit(&report, args.common.format, started))
}

fn identities(common: CommonArgs) -> Result<ExitCode, String> {
    let started = Instant::now();
    configure_jobs(common.jobs)?;
    let report = Report::new(None, verify_identity_bank().results);
    Ok(emit(&report, common.format, started))
}
