//! `sphd`: spherical discrepancy, energy, and kernel-expansion toolbox.
//!
//! Every subcommand is a deterministic function of its inputs and the seed
//! (`--seed` flag, else the `SPHD_SEED` environment variable, else 0), and
//! can write a machine-readable JSON report alongside its stdout summary.

mod io;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sphere_disc::{
    cap_discrepancy_sq, cap_fixed_t_discrepancy_sq, constant_cd, energy_gap, expand_kernel,
    fibonacci_points, hemisphere_discrepancy_sq, is_positive_definite, lambda_for_dim,
    maximize_distance_sum, mc_discrepancy_sq, slice_discrepancy_sq, symmetry_defect, vd,
    wedge_discrepancy_sq, DiscrepancyFamily, GegenbauerExpansion, Kernel, OptimizerConfig,
    RandomSeed, DEFAULT_PD_TOL,
};

use io::{digest_parts, load_expansion, load_pointset, save_expansion, save_pointset, LoadedInput,
    Report};

#[derive(Parser)]
#[command(name = "sphd", version, about = "Spherical discrepancies, energies, and kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Squared discrepancy of a point-set file, closed form and/or Monte Carlo.
    Discrepancy(DiscrepancyArgs),
    /// Discrete energy of a measure against a kernel, with the uniform-measure value.
    Energy(EnergyArgs),
    /// Cross-validate a closed-form discrepancy against its Monte Carlo estimate.
    VerifyStolarsky(VerifyArgs),
    /// Search for a configuration maximizing the mean pairwise distance.
    Optimize(OptimizeArgs),
    /// Expand a kernel into a truncated ultraspherical series file.
    Expand(ExpandArgs),
    /// Positive-definiteness verdict for a kernel on S^d.
    PdCheck(PdCheckArgs),
    /// Table of the invariance constant C_d and the mean squared distance V_d.
    Constants(ConstantsArgs),
    /// Cap-discrepancy decay of Fibonacci configurations, with fitted slope.
    Scaling(ScalingArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Cap,
    CapT,
    Hemisphere,
    Wedge,
    Slice,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Closed,
    Mc,
    Both,
}

#[derive(clap::Args)]
struct DiscrepancyArgs {
    /// Point-set file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    family: Family,
    /// Cap height, required for `--family cap-t`.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EnergyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Kernel: euclidean | geodesic | wedge-square | slice-square |
    /// inner-prod:<k> | affine:<a>,<b> | expansion:<path>.
    #[arg(long)]
    kernel: String,
    /// Exponent for the euclidean/geodesic kernels.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    family: Family,
    /// Cap height, required for `--family cap-t`.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OptimizeArgs {
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Sphere dimension d (points live in R^{d+1}).
    #[arg(long)]
    dim: usize,
    /// Kernel: euclidean or geodesic.
    #[arg(long, default_value = "geodesic")]
    kernel: String,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 5000)]
    steps: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the best configuration as a point-set file.
    #[arg(long)]
    points_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExpandArgs {
    /// Kernel, including hemisphere-indicator and hemisphere-overlap.
    #[arg(long)]
    kernel: String,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long)]
    dim: usize,
    /// Truncation degree.
    #[arg(long)]
    nmax: usize,
    /// Expansion file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct PdCheckArgs {
    #[arg(long)]
    kernel: String,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 32)]
    nmax: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ConstantsArgs {
    /// Largest dimension to tabulate.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ScalingArgs {
    /// Configuration sizes for the sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 200, 400, 800, 1600])]
    sizes: Vec<usize>,
    /// CSV output path (`n,discrepancy` rows).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Discrepancy(args) => run_discrepancy(args),
        Command::Energy(args) => run_energy(args),
        Command::VerifyStolarsky(args) => run_verify(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Expand(args) => run_expand(args),
        Command::PdCheck(args) => run_pd_check(args),
        Command::Constants(args) => run_constants(args),
        Command::Scaling(args) => run_scaling(args),
    }
}

/// Seed precedence: flag, then SPHD_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SPHD_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .with_context(|| format!("SPHD_SEED value {v:?} is not an unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(std::env::VarError::NotUnicode(_)) => bail!("SPHD_SEED is not valid unicode"),
    }
}

#[derive(Clone, Debug)]
enum KernelSpec {
    Euclidean,
    Geodesic,
    WedgeSquare,
    SliceSquare,
    InnerProd(u32),
    Affine(f64, f64),
    HemisphereIndicator,
    HemisphereOverlap,
    Expansion(PathBuf),
}

fn parse_kernel(s: &str) -> Result<KernelSpec> {
    if let Some(rest) = s.strip_prefix("inner-prod:") {
        let k: u32 = rest.parse().with_context(|| format!("bad power in {s:?}"))?;
        if k == 0 {
            bail!("inner-prod power must be at least 1");
        }
        return Ok(KernelSpec::InnerProd(k));
    }
    if let Some(rest) = s.strip_prefix("affine:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            bail!("affine kernel needs two comma-separated numbers, got {s:?}");
        }
        let a: f64 = parts[0].parse().with_context(|| format!("bad number in {s:?}"))?;
        let b: f64 = parts[1].parse().with_context(|| format!("bad number in {s:?}"))?;
        return Ok(KernelSpec::Affine(a, b));
    }
    if let Some(rest) = s.strip_prefix("expansion:") {
        return Ok(KernelSpec::Expansion(PathBuf::from(rest)));
    }
    match s {
        "euclidean" => Ok(KernelSpec::Euclidean),
        "geodesic" => Ok(KernelSpec::Geodesic),
        "wedge-square" => Ok(KernelSpec::WedgeSquare),
        "slice-square" => Ok(KernelSpec::SliceSquare),
        "hemisphere-indicator" => Ok(KernelSpec::HemisphereIndicator),
        "hemisphere-overlap" => Ok(KernelSpec::HemisphereOverlap),
        other => bail!(
            "unknown kernel {other:?}; expected euclidean, geodesic, wedge-square, \
             slice-square, inner-prod:<k>, affine:<a>,<b>, hemisphere-indicator, \
             hemisphere-overlap, or expansion:<path>"
        ),
    }
}

/// Pairwise kernel for energy-style subcommands. Returns the kernel plus the
/// bytes of any expansion file it loaded, for digest purposes.
fn kernel_for_energy(spec: &KernelSpec, delta: f64, d: usize) -> Result<(Kernel, Vec<u8>)> {
    let kernel = match spec {
        KernelSpec::Euclidean => Kernel::EuclideanPow(delta),
        KernelSpec::Geodesic => Kernel::GeodesicPow(delta),
        KernelSpec::WedgeSquare => Kernel::WedgeSquare,
        KernelSpec::SliceSquare => Kernel::SliceSquare,
        KernelSpec::InnerProd(k) => Kernel::InnerProdPow(*k),
        KernelSpec::Affine(a, b) => {
            let lambda = lambda_for_dim(d)?;
            let exp =
                GegenbauerExpansion::new(lambda, vec![*a, b / (2.0 * (1.0 + lambda))])?;
            Kernel::ExpansionKernel(exp)
        }
        KernelSpec::Expansion(path) => {
            let exp = load_expansion(path)?;
            let bytes = std::fs::read(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok((Kernel::ExpansionKernel(exp), bytes));
        }
        KernelSpec::HemisphereIndicator | KernelSpec::HemisphereOverlap => bail!(
            "kernel {spec:?} is not available as a pairwise energy kernel; \
             expand it into a series file first (`sphd expand`)"
        ),
    };
    kernel.validate()?;
    Ok((kernel, Vec::new()))
}

/// Scalar function t -> F(t) for expansion-style subcommands.
fn kernel_function(
    spec: &KernelSpec,
    delta: f64,
) -> Result<(Box<dyn Fn(f64) -> f64>, Vec<u8>)> {
    use std::f64::consts::PI;
    let f: Box<dyn Fn(f64) -> f64> = match spec {
        KernelSpec::Euclidean => {
            let e = delta / 2.0;
            Box::new(move |t| (2.0 - 2.0 * t).max(0.0).powf(e))
        }
        KernelSpec::Geodesic => Box::new(move |t| (t.acos() / PI).powf(delta)),
        KernelSpec::WedgeSquare => Box::new(|t| {
            let g = 0.5 - t.acos() / PI;
            g * g
        }),
        KernelSpec::SliceSquare => Box::new(|t| {
            let g = 1.0 - t.acos() / PI;
            g * g
        }),
        KernelSpec::InnerProd(k) => {
            let k = *k as i32;
            Box::new(move |t| t.powi(k))
        }
        KernelSpec::Affine(a, b) => {
            let (a, b) = (*a, *b);
            Box::new(move |t| a + b * t)
        }
        KernelSpec::HemisphereIndicator => Box::new(|t| if t > 0.0 { 1.0 } else { 0.0 }),
        KernelSpec::HemisphereOverlap => Box::new(|t| 0.5 - t.acos() / (2.0 * PI)),
        KernelSpec::Expansion(path) => {
            let exp = load_expansion(path)?;
            let bytes = std::fs::read(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok((Box::new(move |t| exp.eval(t)), bytes));
        }
    };
    Ok((f, Vec::new()))
}

fn mc_family(family: Family, t: Option<f64>) -> Result<DiscrepancyFamily> {
    Ok(match family {
        Family::Cap => DiscrepancyFamily::Cap,
        Family::CapT => DiscrepancyFamily::CapFixedT(required_height(t)?),
        Family::Hemisphere => DiscrepancyFamily::Hemisphere,
        Family::Wedge => DiscrepancyFamily::Wedge,
        Family::Slice => DiscrepancyFamily::Slice,
    })
}

fn required_height(t: Option<f64>) -> Result<f64> {
    t.context("--family cap-t requires --t <height>")
}

fn closed_discrepancy(family: Family, t: Option<f64>, loaded: &LoadedInput) -> Result<f64> {
    let need_unweighted = |name: &str| -> Result<()> {
        if loaded.weighted {
            bail!("family {name} is defined for unweighted point sets; drop the weight column");
        }
        Ok(())
    };
    let value = match family {
        Family::Cap => cap_discrepancy_sq(&loaded.measure)?,
        Family::Hemisphere => hemisphere_discrepancy_sq(&loaded.measure)?,
        Family::CapT => {
            need_unweighted("cap-t")?;
            cap_fixed_t_discrepancy_sq(&loaded.points, required_height(t)?)?
        }
        Family::Wedge => {
            need_unweighted("wedge")?;
            wedge_discrepancy_sq(&loaded.points)?
        }
        Family::Slice => {
            need_unweighted("slice")?;
            slice_discrepancy_sq(&loaded.points)?
        }
    };
    Ok(value)
}

fn finish(report: &mut Report, start: Instant, out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        report.wall_ms = start.elapsed().as_millis();
        report.save(path)?;
        println!("report: {}", path.display());
    }
    Ok(())
}

fn run_discrepancy(args: DiscrepancyArgs) -> Result<()> {
    let start = Instant::now();
    let seed = resolve_seed(args.seed)?;
    let loaded = load_pointset(&args.input)?;
    let config = format!(
        "discrepancy family={:?} t={:?} mode={:?} samples={} seed={seed}",
        args.family, args.t, args.mode, args.samples
    );
    let mut report = Report::new(
        "discrepancy",
        digest_parts(&[config.as_bytes(), &loaded.bytes]),
        seed,
    );
    report.insert("family", format!("{:?}", args.family).to_lowercase());
    report.insert("n_points", loaded.points.len());
    report.insert("dim", loaded.points.dim());

    println!(
        "family {:?}, {} points on S^{}",
        args.family,
        loaded.points.len(),
        loaded.points.dim()
    );
    if matches!(args.mode, Mode::Closed | Mode::Both) {
        let closed = closed_discrepancy(args.family, args.t, &loaded)?;
        report.insert("closed", closed);
        println!("closed squared discrepancy: {closed}");
    }
    if matches!(args.mode, Mode::Mc | Mode::Both) {
        let est = mc_discrepancy_sq(
            &loaded.measure,
            mc_family(args.family, args.t)?,
            args.samples,
            RandomSeed(seed),
        )?;
        report.insert("mc_value", est.value);
        report.insert("mc_std_error", est.std_error);
        report.insert("samples", est.samples);
        println!(
            "monte carlo estimate: {} (se {}, {} samples)",
            est.value, est.std_error, est.samples
        );
    }
    finish(&mut report, start, args.out.as_deref())
}

fn run_energy(args: EnergyArgs) -> Result<()> {
    let start = Instant::now();
    let loaded = load_pointset(&args.input)?;
    let spec = parse_kernel(&args.kernel)?;
    let d = loaded.points.dim();
    let (kernel, kernel_bytes) = kernel_for_energy(&spec, args.delta, d)?;
    let config = format!("energy kernel={} delta={}", args.kernel, args.delta);
    let mut report = Report::new(
        "energy",
        digest_parts(&[config.as_bytes(), &loaded.bytes, &kernel_bytes]),
        0,
    );
    let gap = energy_gap(&loaded.measure, &kernel, d)?;
    report.insert("kernel", args.kernel.clone());
    report.insert("delta", args.delta);
    report.insert("discrete", gap.discrete);
    report.insert("continuous_sigma", gap.continuous_sigma);
    report.insert("gap", gap.gap);
    println!("kernel: {} (delta {})", args.kernel, args.delta);
    println!("discrete energy:          {}", gap.discrete);
    println!("uniform-measure energy:   {}", gap.continuous_sigma);
    println!("gap (discrete - uniform): {}", gap.gap);
    finish(&mut report, start, args.out.as_deref())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let start = Instant::now();
    let seed = resolve_seed(args.seed)?;
    let loaded = load_pointset(&args.input)?;
    let config = format!(
        "verify-stolarsky family={:?} t={:?} samples={} seed={seed}",
        args.family, args.t, args.samples
    );
    let mut report = Report::new(
        "verify-stolarsky",
        digest_parts(&[config.as_bytes(), &loaded.bytes]),
        seed,
    );
    let closed = closed_discrepancy(args.family, args.t, &loaded)?;
    let est = mc_discrepancy_sq(
        &loaded.measure,
        mc_family(args.family, args.t)?,
        args.samples,
        RandomSeed(seed),
    )?;
    let z = if est.std_error > 0.0 {
        (closed - est.value).abs() / est.std_error
    } else if closed == est.value {
        0.0
    } else {
        f64::INFINITY
    };
    let verdict = if z <= 3.0 { "PASS" } else { "FAIL" };
    report.insert("family", format!("{:?}", args.family).to_lowercase());
    report.insert("closed", closed);
    report.insert("mc_value", est.value);
    report.insert("mc_std_error", est.std_error);
    report.insert("samples", est.samples);
    report.insert("z_score", z);
    report.insert("verdict", verdict);
    println!(
        "family {:?}, {} points on S^{}",
        args.family,
        loaded.points.len(),
        loaded.points.dim()
    );
    println!("closed squared discrepancy: {closed}");
    println!(
        "monte carlo estimate:       {} (se {}, {} samples)",
        est.value, est.std_error, est.samples
    );
    println!("z-score: {z}");
    println!("VERDICT: {verdict}");
    finish(&mut report, start, args.out.as_deref())
}

fn run_optimize(args: OptimizeArgs) -> Result<()> {
    let start = Instant::now();
    let seed = resolve_seed(args.seed)?;
    let spec = parse_kernel(&args.kernel)?;
    if !matches!(spec, KernelSpec::Euclidean | KernelSpec::Geodesic) {
        bail!("optimize supports the euclidean and geodesic kernels");
    }
    let (kernel, _) = kernel_for_energy(&spec, args.delta, args.dim)?;
    let cfg = OptimizerConfig {
        max_steps: args.steps,
        restarts: args.restarts,
        seed: RandomSeed(seed),
        ..OptimizerConfig::default()
    };
    let config = format!(
        "optimize n={} dim={} kernel={} delta={} steps={} restarts={} seed={seed}",
        args.n, args.dim, args.kernel, args.delta, args.steps, args.restarts
    );
    let mut report = Report::new("optimize", digest_parts(&[config.as_bytes()]), seed);
    let result = maximize_distance_sum(args.n, args.dim, &kernel, &cfg)?;
    let defect = symmetry_defect(&result.points)?;
    let final_step = result.trace.last().map(|(step, _)| *step).unwrap_or(0);
    report.insert("n", args.n);
    report.insert("dim", args.dim);
    report.insert("kernel", args.kernel.clone());
    report.insert("delta", args.delta);
    report.insert("value", result.value);
    report.insert("converged", result.converged);
    report.insert("final_step", final_step);
    report.insert("symmetry_defect", defect);
    println!(
        "best mean pairwise energy for n={} on S^{}: {}",
        args.n, args.dim, result.value
    );
    println!("converged: {} (last accepted step {})", result.converged, final_step);
    println!("antipodal symmetry defect: {defect}");
    if let Some(path) = &args.points_out {
        save_pointset(path, &result.points)?;
        println!("points: {}", path.display());
    }
    finish(&mut report, start, args.out.as_deref())
}

fn run_expand(args: ExpandArgs) -> Result<()> {
    let spec = parse_kernel(&args.kernel)?;
    let (f, _) = kernel_function(&spec, args.delta)?;
    let lambda = lambda_for_dim(args.dim)?;
    let (exp, residual) = expand_kernel(&|t| f(t), lambda, args.nmax)?;
    save_expansion(&args.out, &exp)?;
    let verdict = exp.pd_verdict(DEFAULT_PD_TOL);
    println!("kernel: {} (delta {})", args.kernel, args.delta);
    println!("lambda: {} (S^{})", exp.lambda(), args.dim);
    println!("n_max: {}", exp.n_max());
    println!("weighted L2 truncation residual: {residual}");
    println!("positive definite: {}", verdict.is_pd);
    println!("expansion: {}", args.out.display());
    Ok(())
}

fn run_pd_check(args: PdCheckArgs) -> Result<()> {
    let start = Instant::now();
    let spec = parse_kernel(&args.kernel)?;
    let (f, kernel_bytes) = kernel_function(&spec, args.delta)?;
    let lambda = lambda_for_dim(args.dim)?;
    let config = format!(
        "pd-check kernel={} delta={} dim={} nmax={}",
        args.kernel, args.delta, args.dim, args.nmax
    );
    let mut report = Report::new(
        "pd-check",
        digest_parts(&[config.as_bytes(), &kernel_bytes]),
        0,
    );
    let verdict = is_positive_definite(&|t| f(t), lambda, args.nmax, DEFAULT_PD_TOL)?;
    report.insert("kernel", args.kernel.clone());
    report.insert("dim", args.dim);
    report.insert("nmax", args.nmax);
    report.insert("is_pd", verdict.is_pd);
    report.insert("tolerance", verdict.tolerance);
    match verdict.first_negative {
        Some((n, coeff)) => {
            report.insert("first_negative_n", n);
            report.insert("first_negative_coefficient", coeff);
            println!(
                "NOT positive definite on S^{}: coefficient {coeff} at degree {n}",
                args.dim
            );
        }
        None => {
            report.insert("first_negative_n", serde_json::Value::Null);
            report.insert("first_negative_coefficient", serde_json::Value::Null);
            println!(
                "positive definite on S^{} up to degree {}",
                args.dim, args.nmax
            );
        }
    }
    finish(&mut report, start, args.out.as_deref())
}

fn run_constants(args: ConstantsArgs) -> Result<()> {
    let start = Instant::now();
    if args.dim < 1 {
        bail!("--dim must be at least 1");
    }
    let config = format!("constants dim={}", args.dim);
    let mut report = Report::new("constants", digest_parts(&[config.as_bytes()]), 0);
    let mut rows = Vec::new();
    println!("{:>4}  {:<24} {:<24}", "d", "C_d", "V_d");
    for d in 1..=args.dim {
        let c = constant_cd(d)?;
        let v = vd(d)?;
        println!("{d:>4}  {c:<24} {v:<24}");
        rows.push(serde_json::json!({ "d": d, "c_d": c, "v_d": v }));
    }
    report.insert("table", serde_json::Value::Array(rows));
    finish(&mut report, start, args.out.as_deref())
}

fn run_scaling(args: ScalingArgs) -> Result<()> {
    let start = Instant::now();
    if args.sizes.len() < 2 {
        bail!("--sizes needs at least two sizes to fit a slope");
    }
    let config = format!("scaling sizes={:?}", args.sizes);
    let mut report = Report::new("scaling", digest_parts(&[config.as_bytes()]), 0);
    let mut csv = String::from("n,discrepancy\n");
    let mut rows = Vec::new();
    let mut logs = Vec::new();
    println!("{:>8}  discrepancy", "n");
    for &n in &args.sizes {
        let set = fibonacci_points(n)?;
        let disc = cap_discrepancy_sq(&sphere_disc::WeightedMeasure::equal_weights(&set))?
            .max(0.0)
            .sqrt();
        csv.push_str(&format!("{n},{disc}\n"));
        rows.push(serde_json::json!({ "n": n, "discrepancy": disc }));
        logs.push(((n as f64).ln(), disc.ln()));
        println!("{n:>8}  {disc}");
    }
    let slope = ols_slope(&logs);
    println!("fitted log-log slope: {slope}");
    report.insert("rows", serde_json::Value::Array(rows));
    report.insert("slope", slope);
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
        println!("csv: {}", path.display());
    }
    finish(&mut report, start, args.out.as_deref())
}

fn ols_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    sxy / sxx
}
