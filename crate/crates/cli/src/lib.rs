//! Command-line front end: CSV/JSON tables of population laws, densities,
//! kernels, correlations, Fourier transforms, Monte Carlo runs and a
//! self-check report.

mod output;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{emit, fmt_f64, json_bytes, num, object, Table, SCHEMA_VERSION};
use rayon::prelude::*;
use serde_json::Value;
use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use twocharge::ensemble::{
    asymptotic_moments, brute_force_correlation, fourier_scaled_density, limit_density, limit_s1, limit_s2,
    population_law, BRUTE_FORCE_MAX_N,
};
use twocharge::kernel::{build_context, KernelBasis, KernelContext, KernelOp, Species};
use twocharge::quadrature::{integrate_interval, QuadratureSpec};
use twocharge::sampler::{run_ensemble, ChainConfig};
use twocharge::skewpoly::FamilyKind;

pub use verify::{tolerance_scale, TOL_ENV};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "twocharge", version, about = "Two-charge ensemble on the line: exact laws, densities and sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact law of (L, M)
    Population(PopulationArgs),
    /// One-point densities R_{1,0} and R_{0,1}
    Density(DensityArgs),
    /// Scaled densities with their large-N limit
    ScaledDensity(ScaledArgs),
    /// Matrix-kernel blocks at a pair of points
    Kernel(KernelArgs),
    /// Correlation function R_{l,m}
    Correlation(CorrelationArgs),
    /// Fourier transform of a scaled density
    Fourier(FourierArgs),
    /// Monte Carlo histograms against exact densities
    Sample(SampleArgs),
    /// Run the numerical self-checks and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Total charge (even)
    #[arg(long = "N")]
    n: usize,
    /// Output file; standard output when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct PopulationArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    common: Common,
    /// Fugacity
    #[arg(long = "X", default_value_t = 1.0)]
    x: f64,
    /// min:max:points
    #[arg(long, default_value = "-6:6:121", allow_hyphen_values = true)]
    grid: Grid,
}

#[derive(Args, Debug)]
struct ScaledArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "X", default_value_t = 1.0)]
    x: f64,
    /// 1 or 2
    #[arg(long, default_value = "1")]
    species: SpeciesArg,
    /// Grid in the scaled variable
    #[arg(long, default_value = "-2:2:401", allow_hyphen_values = true)]
    grid: Grid,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "X", default_value_t = 1.0)]
    x: f64,
    #[arg(long = "at-x", allow_hyphen_values = true)]
    at_x: f64,
    #[arg(long = "at-y", allow_hyphen_values = true)]
    at_y: f64,
}

#[derive(Args, Debug)]
struct CorrelationArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "X", default_value_t = 1.0)]
    x: f64,
    /// Comma-separated charge-1 positions
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    xs: PointList,
    /// Comma-separated charge-2 positions
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    ys: PointList,
    /// Also evaluate the direct integral (N <= 4)
    #[arg(long)]
    direct: bool,
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "1")]
    species: SpeciesArg,
    /// tmin:tmax:points
    #[arg(long = "t", default_value = "0:6:61", allow_hyphen_values = true)]
    t: Grid,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    /// Kept samples per chain
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    thinning: usize,
    #[arg(long = "burn-in", default_value_t = 200)]
    burn_in: usize,
    /// Histogram range and bin count, lo:hi:bins
    #[arg(long, default_value = "-4:4:20", allow_hyphen_values = true)]
    bins: Grid,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Skip the slow suites
    #[arg(long)]
    quick: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// `min:max:points`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:points, got '{s}'"));
        }
        let min: f64 = parts[0].parse().map_err(|_| format!("bad number '{}'", parts[0]))?;
        let max: f64 = parts[1].parse().map_err(|_| format!("bad number '{}'", parts[1]))?;
        let points: usize = parts[2].parse().map_err(|_| format!("bad count '{}'", parts[2]))?;
        if !(min < max) || points < 2 {
            return Err(format!("need min < max and at least 2 points, got '{s}'"));
        }
        Ok(Grid { min, max, points })
    }
}

#[derive(Clone, Debug, PartialEq)]
struct PointList(Vec<f64>);

impl FromStr for PointList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(PointList(Vec::new()));
        }
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad position '{p}'")))
            .collect::<Result<Vec<_>, _>>()
            .map(PointList)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct SpeciesArg(Species);

impl FromStr for SpeciesArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(SpeciesArg(Species::One)),
            "2" => Ok(SpeciesArg(Species::Two)),
            _ => Err(format!("species must be 1 or 2, got '{s}'")),
        }
    }
}

/// Failure kinds mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<twocharge::Error> for Failure {
    fn from(e: twocharge::Error) -> Self {
        match e {
            twocharge::Error::Domain(_) | twocharge::Error::Index { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `argv` (including the program name) and runs the command. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Population(a) => population(a),
        Command::Density(a) => density(a),
        Command::ScaledDensity(a) => scaled_density(a),
        Command::Kernel(a) => kernel(a),
        Command::Correlation(a) => correlation(a),
        Command::Fourier(a) => fourier(a),
        Command::Sample(a) => sample(a),
        Command::Verify(a) => return verify_command(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_FAILURE
        }
    }
}

fn check_n(n: usize) -> CliResult<()> {
    if n == 0 || n % 2 == 1 {
        return Err(Failure::Usage(format!("--N must be even and positive, got {n}")));
    }
    Ok(())
}

fn check_fugacity(x: f64) -> CliResult<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Failure::Usage(format!("--X must be finite and nonnegative, got {x}")));
    }
    Ok(())
}

fn context(n: usize, x: f64) -> CliResult<KernelContext> {
    check_n(n)?;
    check_fugacity(x)?;
    Ok(build_context(n, KernelBasis::Skew(FamilyKind::Capital), x)?)
}

fn write_table(common: &Common, command: &str, table: &Table, extra: Vec<(&str, Value)>) -> CliResult<()> {
    let bytes = match common.format {
        Format::Csv => table.to_csv()?,
        Format::Json => {
            let mut pairs = vec![
                ("schema_version", Value::String(SCHEMA_VERSION.into())),
                ("command", Value::String(command.into())),
                ("N", Value::from(common.n)),
            ];
            pairs.extend(extra);
            pairs.push(("rows", table.to_json_rows()));
            json_bytes(&object(pairs))
        }
    };
    emit(common.output.as_deref(), &bytes)?;
    Ok(())
}

fn population(a: PopulationArgs) -> CliResult<()> {
    check_n(a.common.n)?;
    let law = population_law(a.common.n)?;
    let (am, av) = asymptotic_moments(a.common.n);
    let summary = object(vec![
        ("mean_L", num(law.mean_l())),
        ("var_L", num(law.var_l())),
        ("asymptotic_mean", num(am)),
        ("asymptotic_var", num(av)),
    ]);
    let bytes = match a.common.format {
        Format::Csv => {
            let mut t = Table::new(&["L", "M", "prob"]);
            for e in law.entries() {
                t.push(vec![e.l.to_string(), e.m.to_string(), fmt_f64(e.prob)]);
            }
            t.to_csv()?
        }
        Format::Json => {
            let mut probs = serde_json::Map::new();
            for e in law.entries() {
                probs.insert(format!("({},{})", e.l, e.m), num(e.prob));
            }
            json_bytes(&object(vec![
                ("schema_version", Value::String(SCHEMA_VERSION.into())),
                ("command", Value::String("population".into())),
                ("N", Value::from(a.common.n)),
                ("probs", Value::Object(probs)),
                ("summary", summary.clone()),
            ]))
        }
    };
    emit(a.common.output.as_deref(), &bytes)?;
    if a.common.format == Format::Csv {
        // the summary is small; keep it off the data stream
        eprintln!("{}", serde_json::to_string(&summary).expect("serializable"));
    }
    Ok(())
}

fn density(a: DensityArgs) -> CliResult<()> {
    let ctx = context(a.common.n, a.x)?;
    let xs = a.grid.values();
    let rows: Vec<Vec<String>> = xs
        .par_iter()
        .map(|&x| vec![fmt_f64(x), fmt_f64(ctx.density_charge1(x)), fmt_f64(ctx.density_charge2(x))])
        .collect();
    let mut t = Table::new(&["x", "R10", "R01"]);
    rows.into_iter().for_each(|r| t.push(r));
    write_table(&a.common, "density", &t, vec![("X", num(a.x))])
}

fn scaled_density(a: ScaledArgs) -> CliResult<()> {
    let ctx = context(a.common.n, a.x)?;
    let sp = a.species.0;
    let (col, limit) = match sp {
        Species::One => ("s1", "uniform_limit"),
        Species::Two => ("s2", "semicircle_limit"),
    };
    let rows: Vec<Vec<String>> = a
        .grid
        .values()
        .par_iter()
        .map(|&x| vec![fmt_f64(x), fmt_f64(ctx.scaled_density(sp, x)), fmt_f64(limit_density(sp, x))])
        .collect();
    let mut t = Table::new(&["x", col, limit]);
    rows.into_iter().for_each(|r| t.push(r));
    write_table(&a.common, "scaled-density", &t, vec![("X", num(a.x)), ("species", Value::from(species_number(sp)))])
}

fn species_number(s: Species) -> u8 {
    match s {
        Species::One => 1,
        Species::Two => 2,
    }
}

fn kernel(a: KernelArgs) -> CliResult<()> {
    let ctx = context(a.common.n, a.x)?;
    let mut t = Table::new(&["a", "b", "k11", "k12", "k21", "k22"]);
    for sa in [Species::One, Species::Two] {
        for sb in [Species::One, Species::Two] {
            let k = ctx.block(sa, a.at_x, sb, a.at_y);
            t.push(vec![
                species_number(sa).to_string(),
                species_number(sb).to_string(),
                fmt_f64(k[0][0]),
                fmt_f64(k[0][1]),
                fmt_f64(k[1][0]),
                fmt_f64(k[1][1]),
            ]);
        }
    }
    let kappa = ctx.kappa_eps(a.at_x, a.at_y, KernelOp::Identity, KernelOp::Identity);
    write_table(
        &a.common,
        "kernel",
        &t,
        vec![("X", num(a.x)), ("x", num(a.at_x)), ("y", num(a.at_y)), ("kappa", num(kappa))],
    )
}

fn correlation(a: CorrelationArgs) -> CliResult<()> {
    let ctx = context(a.common.n, a.x)?;
    let (xs, ys) = (&a.xs.0, &a.ys.0);
    if xs.is_empty() && ys.is_empty() {
        return Err(Failure::Usage("give at least one position with --xs or --ys".into()));
    }
    let value = ctx.correlation(xs, ys)?;
    let direct = if a.direct {
        if a.common.n > BRUTE_FORCE_MAX_N {
            return Err(Failure::Usage(format!("--direct needs N <= {BRUTE_FORCE_MAX_N}")));
        }
        Some(brute_force_correlation(a.common.n, a.x, xs, ys)?)
    } else {
        None
    };
    let list = |v: &[f64]| v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";");
    let mut header = vec!["l", "m", "xs", "ys", "value"];
    let mut row = vec![xs.len().to_string(), ys.len().to_string(), list(xs), list(ys), fmt_f64(value)];
    if let Some(d) = direct {
        header.push("direct");
        row.push(fmt_f64(d));
    }
    let mut t = Table::new(&header);
    t.push(row);
    write_table(&a.common, "correlation", &t, vec![("X", num(a.x))])
}

fn fourier(a: FourierArgs) -> CliResult<()> {
    let ctx = context(a.common.n, 1.0)?;
    let sp = a.species.0;
    let limit = match sp {
        Species::One => limit_s1,
        Species::Two => limit_s2,
    };
    let rows: Vec<CliResult<Vec<String>>> = a
        .t
        .values()
        .par_iter()
        .map(|&t| {
            let v = fourier_scaled_density(&ctx, sp, t)?;
            let l = limit(t);
            Ok(vec![fmt_f64(t), fmt_f64(v), fmt_f64(l), fmt_f64((v - l).abs())])
        })
        .collect();
    let mut table = Table::new(&["t", "ft_value", "limit_value", "abs_error"]);
    for r in rows {
        table.push(r?);
    }
    write_table(&a.common, "fourier", &table, vec![("species", Value::from(species_number(sp)))])
}

fn sample(a: SampleArgs) -> CliResult<()> {
    let n = a.common.n;
    check_n(n)?;
    if a.chains == 0 || a.steps == 0 {
        return Err(Failure::Usage("--chains and --steps must be positive".into()));
    }
    let law = population_law(n)?;
    let config = ChainConfig {
        seed: a.seed,
        burn_in: a.burn_in,
        thinning: a.thinning,
        chain_count: a.chains,
        ..ChainConfig::default()
    };
    let bins = a.bins.points;
    let run = run_ensemble(&law, &config, a.steps, (a.bins.min, a.bins.max, bins), (-1.0, 1.0))?;
    let ctx = context(n, 1.0)?;
    let spec = QuadratureSpec::default().tightened(10.0);
    let total = run.samples as f64;
    let mut t = Table::new(&["species", "bin_lo", "bin_hi", "count", "empirical_density", "exact_density", "z"]);
    for (sp, hist) in [(Species::One, &run.charge1), (Species::Two, &run.charge2)] {
        for b in 0..hist.bins() {
            let (lo, hi) = hist.edges(b);
            let mass = integrate_interval(|x| ctx.density(sp, x), lo, hi, &[], &spec)?.value;
            let expected = total * mass;
            let c = hist.counts[b] as f64;
            t.push(vec![
                species_number(sp).to_string(),
                fmt_f64(lo),
                fmt_f64(hi),
                hist.counts[b].to_string(),
                fmt_f64(c / (total * hist.width())),
                fmt_f64(mass / hist.width()),
                fmt_f64((c - expected) / expected.max(1.0).sqrt()),
            ]);
        }
    }
    let acceptance: Vec<Value> = run
        .per_chain_acceptance
        .iter()
        .enumerate()
        .map(|(i, s)| {
            object(vec![
                ("chain", Value::from(i)),
                ("proposed", Value::from(s.proposed)),
                ("accepted", Value::from(s.accepted)),
                ("rate", num(s.rate())),
            ])
        })
        .collect();
    for (i, s) in run.per_chain_acceptance.iter().enumerate() {
        eprintln!("chain {i}: acceptance {:.4} ({} proposals)", s.rate(), s.proposed);
    }
    let pops: Vec<Value> = law
        .entries()
        .iter()
        .zip(&run.population_counts)
        .map(|(e, &c)| {
            object(vec![
                ("L", Value::from(e.l)),
                ("M", Value::from(e.m)),
                ("count", Value::from(c)),
                ("exact_prob", num(e.prob)),
            ])
        })
        .collect();
    write_table(
        &a.common,
        "sample",
        &t,
        vec![
            ("seed", Value::from(a.seed)),
            ("samples", Value::from(run.samples)),
            ("acceptance", Value::Array(acceptance)),
            ("populations", Value::Array(pops)),
        ],
    )
}

fn verify_command(a: VerifyArgs) -> i32 {
    let scale = match tolerance_scale() {
        Ok(s) => s,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
    };
    let report = verify::run_checks(a.quick, scale);
    let ok = report.all_passed();
    for s in &report.suites {
        eprintln!("{} {} ({:.2}s): {}", if s.passed { "ok  " } else { "FAIL" }, s.name, s.seconds, s.detail);
    }
    if let Err(e) = emit(a.output.as_deref(), &json_bytes(&report.to_json())) {
        eprintln!("error: i/o error: {e}");
        return EXIT_FAILURE;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
