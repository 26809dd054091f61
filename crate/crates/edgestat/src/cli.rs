//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgestat_core::dpp::{
    empirical_rho1, sample_grand_canonical, sample_poisson_exp, sample_shifted_airy_max, AiryApprox,
    CountDistribution, PointConfiguration,
};
use edgestat_core::exec::{replica_rng, replica_seed, ReplicaExecutor};
use edgestat_core::fredholm::{f_alpha_cdf, tracy_widom_cdf, CdfTable, NystromConfig, ENVELOPE_CUTOFF, REFINE_TOL};
use edgestat_core::kernels::{
    bulk_kernel_lc, bulk_kernel_lc_approx, gue_kernel, m_alpha, m_alpha_gumbel_scaled, sine_kernel, AiryKernel,
    DeformedKernel, Kernel,
};
use edgestat_core::limits::{
    check_prop_1_7, check_thm_1_10, check_thm_1_2, check_thm_1_3, check_thm_1_8, check_thm_1_9, mns_for,
    prop_1_7_diag_ratio, ConvergenceTable, Direction, MuDirection,
};
use edgestat_core::rmt::{
    deformed_edge_experiment, deformed_run, edge_scale, gue_top_eigenvalues, sample_gue_eigs, DeformedModel,
    DeformedRun, DiagLaw, DEFAULT_EPSILON,
};
use edgestat_core::specfun::gumbel_cdf;
use edgestat_core::stats::{count_frequencies, mean, total_variation, uniform_edges, EmpiricalCdf};
use serde_json::{json, Value};

use crate::output::{pretty, real_text, sha256_hex, Cell, Format, Outputs, Recipe, Table};
use crate::parallel::Parallel;
use crate::verify::{self, Check};
use crate::{config, CliError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EDGESTAT_OUT_DIR";

const MAX_ROWS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "edgestat", version, about = "Edge statistics between the Gumbel and Tracy-Widom laws")]
pub struct Cli {
    /// Output directory (default: $EDGESTAT_OUT_DIR, else the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses the available parallelism.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Flat key = value file of long flags; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Format of the main table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a distribution function on a grid.
    Dist(DistArgs),
    /// Dump a kernel on a square grid.
    Kernel(KernelArgs),
    /// Run a sampler and compare with theory.
    Sample(SampleArgs),
    /// Run a convergence table; exit 1 when the error does not decrease.
    Converge(ConvergeArgs),
    /// Run identity checks; exit 1 on any failure.
    Verify(VerifyArgs),
    /// Rerun a manifest and compare output hashes.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = -8.0)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 4.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
}

impl GridArgs {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let GridArgs { from, to, step } = *self;
        if !(from.is_finite() && to.is_finite() && step > 0.0 && step.is_finite() && to >= from) {
            return Err(CliError::Usage(format!("bad grid: from {from} to {to} step {step}")));
        }
        let steps = ((to - from) / step).round();
        if (from + steps * step - to).abs() > 1e-9 * step.max(1.0) {
            return Err(CliError::Usage(format!("step {step} does not divide [{from}, {to}]")));
        }
        let n = steps as usize + 1;
        if n > MAX_ROWS {
            return Err(CliError::Usage(format!("{n} grid points exceed the limit {MAX_ROWS}")));
        }
        Ok((0..n).map(|k| from + k as f64 * step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Tw,
    Gumbel,
    Falpha,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(value_enum)]
    pub which: DistKind,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Interpolation parameter (falpha only).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gauss-Legendre nodes per determinant.
    #[arg(long, default_value_t = 80)]
    pub nodes: usize,
    /// Skip the node-doubling check.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KernelKind {
    Airy,
    MAlpha,
    GumbelScaled,
    Mns,
    Gue,
    Bulk,
    BulkApprox,
    Sine,
    Deformed,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(value_enum)]
    pub which: KernelKind,
    #[arg(long, allow_negative_numbers = true, default_value_t = -3.0)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Particle number (mns, gue).
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Inverse temperature parameter (mns).
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Bulk parameter c.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Variance parameter S of the deformed kernel.
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Diagonal entries y of the deformed kernel.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,0,0,0")]
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SampleKind {
    Mns,
    Poisson,
    ShiftedAiry,
    Gue,
    Deformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GueMethod {
    Dense,
    Tridiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum LawKind {
    Gaussian,
    Uniform,
    Rademacher,
    PointMass,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub which: SampleKind,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    /// Base seed; replica i uses seed + i. Generated and recorded when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Particle number N (mns) or matrix size (gue, deformed).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Left end of the Poisson window.
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// GUE size behind the approximate Airy process.
    #[arg(long, default_value_t = 400)]
    pub gue_n: usize,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, value_enum, default_value_t = GueMethod::Tridiagonal)]
    pub method: GueMethod,
    #[arg(long, value_enum, default_value_t = LawKind::Gaussian)]
    pub law: LawKind,
    /// Variance, half width or scale of the diagonal law.
    #[arg(long, default_value_t = 0.5)]
    pub law_param: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Deformed model: also run N/2 and check the KS trend.
    #[arg(long)]
    pub trend: bool,
    /// Window of the F_alpha table used for shifted_airy KS.
    #[arg(long, allow_negative_numbers = true, default_value_t = -10.0)]
    pub table_from: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 12.0)]
    pub table_to: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ConvergeKind {
    Thm1_2,
    Thm1_3,
    Prop1_7,
    Thm1_8,
    Thm1_9,
    Thm1_10,
}

impl ConvergeKind {
    pub fn name(self) -> &'static str {
        match self {
            ConvergeKind::Thm1_2 => "thm1_2",
            ConvergeKind::Thm1_3 => "thm1_3",
            ConvergeKind::Prop1_7 => "prop1_7",
            ConvergeKind::Thm1_8 => "thm1_8",
            ConvergeKind::Thm1_9 => "thm1_9",
            ConvergeKind::Thm1_10 => "thm1_10",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitSide {
    /// Large alpha or mu.
    Airy,
    Gue,
    /// Small alpha or mu.
    Poisson,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(value_enum)]
    pub which: ConvergeKind,
    #[arg(long, value_enum)]
    pub direction: Option<LimitSide>,
    /// Parameter ladder, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Centering constant for thm1_9 (defaults to c).
    #[arg(long)]
    pub centering_c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Particle number for prop1_7.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub refine: Option<bool>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Check::All)]
    pub which: Check,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Outputs of one command before they are written.
#[derive(Debug)]
pub struct Outcome {
    pub stem: String,
    pub outputs: Outputs,
    pub recipe: Recipe,
    pub passed: bool,
    pub summary: String,
}

/// Entry point: returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => return report_error(&e),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let exec = match Parallel::new(cli.threads) {
        Ok(p) => p,
        Err(e) => return report_error(&CliError::Io(e.to_string())),
    };
    let out = out_dir(&cli);
    if let Command::Replay(r) = &cli.command {
        return match replay(&r.manifest, cli.out.as_deref(), &exec) {
            Ok((passed, text)) => {
                println!("{text}");
                i32::from(!passed)
            }
            Err(e) => report_error(&e),
        };
    }
    let canonical = canonical_args(&args[1..]);
    match execute(&cli, canonical, &exec).and_then(|o| o.outputs.write(&out, &o.stem, &o.recipe).map(|p| (o, p))) {
        Ok((o, manifest)) => {
            if o.passed {
                println!("{}", o.summary);
            } else {
                eprintln!("{}", o.summary);
            }
            for name in o.outputs.names() {
                println!("wrote {}", out.join(name).display());
            }
            println!("wrote {}", manifest.display());
            i32::from(!o.passed)
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &CliError) -> i32 {
    eprintln!("edgestat: {e}");
    e.exit_code()
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Arguments without output location and thread count, which do not affect results.
pub fn canonical_args(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        let s = a.to_string_lossy().into_owned();
        if skip {
            skip = false;
            continue;
        }
        if s == "--out" || s == "--threads" {
            skip = true;
            continue;
        }
        if s.starts_with("--out=") || s.starts_with("--threads=") {
            continue;
        }
        out.push(s);
    }
    out
}

/// Runs the parsed command; nothing is written.
pub fn execute<E: ReplicaExecutor>(cli: &Cli, mut args: Vec<String>, exec: &E) -> Result<Outcome, CliError> {
    let format = cli.format;
    let (stem, outputs, params, seeds, passed, summary) = match &cli.command {
        Command::Dist(a) => dist(a, format, exec)?,
        Command::Kernel(a) => kernel(a, format, exec)?,
        Command::Sample(a) => {
            let seed = match a.seed {
                Some(s) => s,
                None => {
                    let s = fresh_seed();
                    args.push("--seed".into());
                    args.push(s.to_string());
                    s
                }
            };
            sample(a, seed, format, exec)?
        }
        Command::Converge(a) => converge(a, format, exec)?,
        Command::Verify(a) => verify_cmd(a)?,
        Command::Replay(_) => return Err(CliError::Usage("replay cannot be nested".into())),
    };
    let command = args.first().cloned().unwrap_or_default();
    Ok(Outcome { stem, outputs, recipe: Recipe { command, args, params, seeds }, passed, summary })
}

fn fresh_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let t = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
    (t as u64) ^ ((t >> 64) as u64) ^ u64::from(std::process::id()).rotate_left(32)
}

type Produced = (String, Outputs, Value, Value, bool, String);

fn collect<T, E: ReplicaExecutor>(
    exec: &E,
    n: usize,
    f: impl Fn(usize) -> edgestat_core::Result<T> + Sync + Send,
) -> Result<Vec<T>, CliError>
where
    T: Send,
{
    exec.run(n, f).into_iter().collect::<edgestat_core::Result<Vec<T>>>().map_err(CliError::Core)
}

fn nystrom(nodes: usize, refine: bool) -> NystromConfig {
    NystromConfig { node_count: nodes, interval_length: None, refine }
}

fn dist<E: ReplicaExecutor>(a: &DistArgs, format: Format, exec: &E) -> Result<Produced, CliError> {
    let ts = a.grid.points()?;
    let cfg = nystrom(a.nodes, !a.no_refine);
    let name = match a.which {
        DistKind::Tw => "tw",
        DistKind::Gumbel => "gumbel",
        DistKind::Falpha => "falpha",
    };
    let values: Vec<f64> = match a.which {
        DistKind::Gumbel => ts.iter().map(|&t| gumbel_cdf(t)).collect(),
        DistKind::Tw => collect(exec, ts.len(), |i| tracy_widom_cdf(ts[i], &cfg))?,
        DistKind::Falpha => {
            let alpha = a.alpha.ok_or_else(|| CliError::Usage("falpha needs --alpha".into()))?;
            collect(exec, ts.len(), |i| f_alpha_cdf(alpha, ts[i], &cfg))?
        }
    };
    let mut table = Table::new(&format!("dist/{name}"), &["t", "F"]).meta("distribution", name);
    if let Some(alpha) = a.alpha.filter(|_| a.which == DistKind::Falpha) {
        table = table.meta("alpha", alpha);
    }
    if a.which != DistKind::Gumbel {
        table = table
            .meta("quadrature", "gauss-legendre on [t, t+L]")
            .meta("nodes", a.nodes)
            .meta("refine", !a.no_refine)
            .meta("refine_tol", real_text(REFINE_TOL))
            .meta("envelope_cutoff", real_text(ENVELOPE_CUTOFF));
    } else {
        table = table.meta("quadrature", "closed form");
    }
    for (&t, &f) in ts.iter().zip(&values) {
        table.push(vec![t.into(), f.into()]);
    }
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 1e-12) && values.iter().all(|f| (-1e-12..=1.0 + 1e-12).contains(f));
    let mut outputs = Outputs::default();
    outputs.add(format!("dist_{name}.{}", format.extension()), table.render(format)?);
    let summary = if monotone {
        format!("dist {name}: {} rows, monotone", ts.len())
    } else {
        format!("dist {name}: values not monotone in [0, 1]")
    };
    let params = json!({ "which": name, "from": a.grid.from, "to": a.grid.to, "step": a.grid.step,
        "alpha": a.alpha, "nodes": a.nodes, "refine": !a.no_refine });
    Ok((format!("dist_{name}"), outputs, params, Value::Null, monotone, summary))
}

fn kernel<E: ReplicaExecutor>(a: &KernelArgs, format: Format, exec: &E) -> Result<Produced, CliError> {
    let xs = GridArgs { from: a.from, to: a.to, step: a.step }.points()?;
    if xs.len() * xs.len() > MAX_ROWS {
        return Err(CliError::Usage(format!("{}^2 grid points exceed the limit {MAX_ROWS}", xs.len())));
    }
    let name = KernelKind::to_possible_value(&a.which).map(|v| v.get_name().to_string()).unwrap_or_default();
    let mns = if a.which == KernelKind::Mns { Some(mns_for(a.n as f64, a.mu)?) } else { None };
    let deformed = if a.which == KernelKind::Deformed { Some(DeformedKernel::new(a.s, a.y.clone())?) } else { None };
    let eval = |x: f64, y: f64| -> edgestat_core::Result<f64> {
        match a.which {
            KernelKind::Airy => Ok(AiryKernel.eval(x, y)),
            KernelKind::MAlpha => m_alpha(a.alpha, x, y),
            KernelKind::GumbelScaled => m_alpha_gumbel_scaled(a.alpha, x, y),
            KernelKind::Mns => Ok(mns.as_ref().unwrap().eval(x, y)),
            KernelKind::Gue => gue_kernel(a.n, x, y),
            KernelKind::Bulk => bulk_kernel_lc(a.c, x, y),
            KernelKind::BulkApprox => bulk_kernel_lc_approx(a.c, x, y),
            KernelKind::Sine => Ok(sine_kernel(x, y)),
            KernelKind::Deformed => deformed.as_ref().unwrap().evaluate(x, y).map(|v| v.value),
        }
    };
    let rows = collect(exec, xs.len(), |i| xs.iter().map(|&y| eval(xs[i], y)).collect::<edgestat_core::Result<Vec<f64>>>())?;
    let mut table = Table::new(&format!("kernel/{name}"), &["x", "y", "K"]).meta("kernel", &name);
    let params = match a.which {
        KernelKind::MAlpha | KernelKind::GumbelScaled => json!({ "alpha": a.alpha }),
        KernelKind::Mns => json!({ "n": a.n, "mu": a.mu }),
        KernelKind::Gue => json!({ "n": a.n }),
        KernelKind::Bulk | KernelKind::BulkApprox => json!({ "c": a.c }),
        KernelKind::Deformed => json!({ "s": a.s, "y": a.y }),
        KernelKind::Airy | KernelKind::Sine => json!({}),
    };
    if let Value::Object(m) = &params {
        for (k, v) in m {
            table = table.meta(k, v);
        }
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, k) in row.iter().enumerate() {
            table.push(vec![xs[i].into(), xs[j].into(), (*k).into()]);
        }
    }
    let mut outputs = Outputs::default();
    outputs.add(format!("kernel_{name}.{}", format.extension()), table.render(format)?);
    let summary = format!("kernel {name}: {} rows", xs.len() * xs.len());
    let params = json!({ "which": name, "from": a.from, "to": a.to, "step": a.step, "kernel": params });
    Ok((format!("kernel_{name}"), outputs, params, Value::Null, true, summary))
}

/// Tabulates a CDF in parallel at the nodes of a `CdfTable`.
pub fn cdf_table<E: ReplicaExecutor>(
    lo: f64,
    hi: f64,
    exec: &E,
    f: impl Fn(f64) -> edgestat_core::Result<f64> + Sync + Send,
) -> Result<CdfTable, CliError> {
    let nodes = CdfTable::nodes(lo, hi);
    let values = collect(exec, nodes.len(), |i| f(nodes[i]))?;
    Ok(CdfTable::from_values(lo, hi, values)?)
}

/// Solves F(t) = p by bisection on [lo, hi].
pub fn cdf_quantile(
    f: impl Fn(f64) -> edgestat_core::Result<f64>,
    p: f64,
    mut lo: f64,
    mut hi: f64,
) -> edgestat_core::Result<f64> {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn law_of(kind: LawKind, p: f64) -> DiagLaw {
    match kind {
        LawKind::Gaussian => DiagLaw::Gaussian { variance: p },
        LawKind::Uniform => DiagLaw::Uniform { half_width: p },
        LawKind::Rademacher => DiagLaw::Rademacher { scale: p },
        LawKind::PointMass => DiagLaw::PointMass,
    }
}

fn points_table(schema: &str, configs: &[PointConfiguration]) -> Table {
    let mut t = Table::new(schema, &["replica", "seed", "index", "x"]);
    for (r, c) in configs.iter().enumerate() {
        for (j, &x) in c.points.iter().enumerate() {
            t.push(vec![r.into(), c.seed.into(), j.into(), x.into()]);
        }
    }
    t
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn run_json(r: &DeformedRun) -> Value {
    json!({
        "n": r.n,
        "replicas": r.replicas,
        "w_c": r.w_c,
        "r_of_n": r.r_of_n,
        "ks_convolution": r.ks_convolution,
        "ks_tracy_widom": r.ks_tw,
        "ks_gaussian": r.ks_gaussian,
        "var_s_n": finite(r.var_s_n),
        "exact_var_s_n": r.exact_var_s_n,
        "mean_r_n": finite(r.mean_r_n),
        "se_r_n": finite(r.se_r_n),
        "max_identity_error": r.max_identity_error,
        "cutoff_violations": r.cutoff_violations,
        "violation_fraction": r.violation_fraction(),
    })
}

fn sample<E: ReplicaExecutor>(a: &SampleArgs, seed: u64, format: Format, exec: &E) -> Result<Produced, CliError> {
    if a.replicas == 0 {
        return Err(CliError::Usage("--replicas must be at least 1".into()));
    }
    let name = SampleKind::to_possible_value(&a.which).map(|v| v.get_name().to_string()).unwrap_or_default();
    let seeds = json!({ "base": seed, "replicas": a.replicas, "rule": "replica i uses seed base + i" });
    let seed_of = |i: usize| replica_seed(seed, i as u64);
    let (table, report, params, summary) = match a.which {
        SampleKind::Mns => {
            let n = a.n.unwrap_or(20);
            let k = mns_for(n as f64, a.mu)?;
            let configs = collect(exec, a.replicas, |i| sample_grand_canonical(&k, seed_of(i)))?;
            let counts: Vec<usize> = configs.iter().map(|c| c.points.len()).collect();
            let exact = CountDistribution::of(&k);
            let tv = total_variation(&count_frequencies(&counts), &exact.probabilities);
            let agreement = empirical_rho1(&configs, &uniform_edges(-3.0, 3.0, 24))
                .ok()
                .map(|h| h.agreement(3.0, |x| k.eval(x, x)));
            let mean_count = mean(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>());
            let report = json!({
                "exact_mean_count": exact.mean(),
                "mean_count": mean_count,
                "count_tv": tv,
                "rho1_bins_within_3se": agreement,
                "truncation_index": k.truncation_index(),
            });
            let summary = format!("sample mns: count TV {tv:.4}, mean count {mean_count:.4} (exact {:.4})", exact.mean());
            (points_table("sample/mns", &configs), report, json!({ "n": n, "mu": a.mu }), summary)
        }
        SampleKind::Poisson => {
            let t = a.t_min;
            let configs = collect(exec, a.replicas, |i| sample_poisson_exp(t, seed_of(i)))?;
            let counts: Vec<f64> = configs.iter().map(|c| c.points.len() as f64).collect();
            let maxima: Vec<f64> = configs.iter().map(|c| c.points.last().copied().unwrap_or(t)).collect();
            // with the maximum set to t when empty, P(max <= u) = F_G(u) for u >= t
            let ks = EmpiricalCdf::new(maxima)?.ks(|u| if u < t { 0.0 } else { gumbel_cdf(u) });
            let report = json!({ "expected_count": (-t).exp(), "mean_count": mean(&counts), "ks_max": ks });
            let summary = format!("sample poisson: mean count {:.4} (expected {:.4}), KS of max {ks:.4}", mean(&counts), (-t).exp());
            (points_table("sample/poisson", &configs), report, json!({ "t_min": t }), summary)
        }
        SampleKind::ShiftedAiry => {
            let approx = AiryApprox { gue_n: a.gue_n, top_k: a.top_k };
            let maxima = collect(exec, a.replicas, |i| sample_shifted_airy_max(a.alpha, approx, seed_of(i)))?;
            if a.table_to <= a.table_from || a.table_to.is_nan() || a.table_from < -12.0 {
                return Err(CliError::Usage("F_alpha table window must satisfy -12 <= from < to".into()));
            }
            let cfg = NystromConfig::default();
            let f = cdf_table(a.table_from, a.table_to, exec, |t| f_alpha_cdf(a.alpha, t, &cfg))?;
            let e = EmpiricalCdf::new(maxima.clone())?;
            let ks = e.ks(|t| f.eval(t));
            let mut t = Table::new("sample/shifted_airy", &["replica", "seed", "max"]);
            for (i, &m) in maxima.iter().enumerate() {
                t.push(vec![i.into(), seed_of(i).into(), m.into()]);
            }
            let report = json!({
                "ks_f_alpha": ks,
                "median": e.median(),
                "table_window": [a.table_from, a.table_to],
                "table_mass_outside": f.eval(a.table_from + 1e-9) + 1.0 - f.eval(a.table_to - 1e-9),
            });
            let params = json!({ "alpha": a.alpha, "gue_n": a.gue_n, "top_k": a.top_k });
            (t, report, params, format!("sample shifted_airy: KS to F_alpha {ks:.4}"))
        }
        SampleKind::Gue => {
            let n = a.n.unwrap_or(400);
            let method = a.method;
            let lmax = collect(exec, a.replicas, |i| match method {
                GueMethod::Dense => sample_gue_eigs(n, seed_of(i)).map(|e| e[e.len() - 1]),
                GueMethod::Tridiagonal => gue_top_eigenvalues(n, 1, &mut replica_rng(seed_of(i), 0)).map(|e| e[0]),
            })?;
            let edge: Vec<f64> = lmax.iter().map(|&l| edge_scale(l, n)).collect();
            let cfg = NystromConfig::default();
            let tw = cdf_table(-12.0, 8.0, exec, |t| tracy_widom_cdf(t, &cfg))?;
            let e = EmpiricalCdf::new(edge.clone())?;
            let ks = e.ks(|t| tw.eval(t));
            let tw_median = cdf_quantile(|t| tracy_widom_cdf(t, &cfg), 0.5, -4.0, 0.0)?;
            let mut t = Table::new("sample/gue", &["replica", "seed", "lambda_max", "edge"]);
            for i in 0..lmax.len() {
                t.push(vec![i.into(), seed_of(i).into(), lmax[i].into(), edge[i].into()]);
            }
            let report = json!({
                "ks_tracy_widom": ks,
                "median": e.median(),
                "tracy_widom_median": tw_median,
                "median_gap": (e.median() - tw_median).abs(),
            });
            let m = match method {
                GueMethod::Dense => "dense",
                GueMethod::Tridiagonal => "tridiagonal",
            };
            let summary = format!("sample gue: KS to F_TW {ks:.4}, median {:.4} vs {tw_median:.4}", e.median());
            (t, report, json!({ "n": n, "method": m }), summary)
        }
        SampleKind::Deformed => {
            let n = a.n.unwrap_or(200);
            let model = DeformedModel::new(n, a.alpha, law_of(a.law, a.law_param), a.epsilon)?;
            let cfg = NystromConfig::default();
            let tw = cdf_table(-12.0, 8.0, exec, |t| tracy_widom_cdf(t, &cfg))?;
            let runs = if a.trend {
                let r = deformed_edge_experiment(&model, a.replicas, seed, exec, &tw)?;
                vec![r.half, r.full]
            } else {
                vec![deformed_run(&model, a.replicas, seed, exec, &tw)?]
            };
            let mut t = Table::new("sample/deformed", &["n", "replica", "seed", "statistic"]);
            for r in &runs {
                for (i, &s) in r.statistics.iter().enumerate() {
                    t.push(vec![r.n.into(), i.into(), seed_of(i).into(), s.into()]);
                }
            }
            let full = runs.last().unwrap();
            let mut report = json!({ "runs": runs.iter().map(run_json).collect::<Vec<_>>() });
            let mut summary = format!(
                "sample deformed: N={} KS to TW*Gaussian {:.4} (TW {:.4}, Gaussian {:.4})",
                full.n, full.ks_convolution, full.ks_tw, full.ks_gaussian
            );
            if a.trend {
                let ok = runs[1].ks_convolution < runs[0].ks_convolution;
                report["ks_trend_decreasing"] = json!(ok);
                summary.push_str(&format!("; N={} KS {:.4}", runs[0].n, runs[0].ks_convolution));
            }
            let law = LawKind::to_possible_value(&a.law).map(|v| v.get_name().to_string()).unwrap_or_default();
            let params = json!({ "n": n, "alpha": a.alpha, "law": law, "law_param": a.law_param,
                "epsilon": a.epsilon, "trend": a.trend });
            (t, report, params, summary)
        }
    };
    let mut table = table.meta("replicas", a.replicas).meta("seed", seed);
    if let Value::Object(m) = &params {
        for (k, v) in m {
            table = table.meta(k, v);
        }
    }
    let mut outputs = Outputs::default();
    outputs.add(format!("sample_{name}.{}", format.extension()), table.render(format)?);
    let mut report = report;
    report["which"] = json!(name);
    report["replicas"] = json!(a.replicas);
    report["seed"] = json!(seed);
    report["params"] = params.clone();
    outputs.add(format!("sample_{name}.report.json"), pretty(&report));
    let mut p = params;
    p["which"] = json!(name);
    p["replicas"] = json!(a.replicas);
    Ok((format!("sample_{name}"), outputs, p, seeds, true, summary))
}

fn converge<E: ReplicaExecutor>(a: &ConvergeArgs, format: Format, exec: &E) -> Result<Produced, CliError> {
    let name = a.which.name();
    let large = |d: Option<LimitSide>| -> Result<bool, CliError> {
        match d {
            None | Some(LimitSide::Airy) | Some(LimitSide::Gue) => Ok(true),
            Some(LimitSide::Poisson) => Ok(false),
        }
    };
    let ladder = |default: &[f64]| a.ladder.clone().unwrap_or_else(|| default.to_vec());
    let sizes = |default: &[f64]| -> Result<Vec<usize>, CliError> {
        ladder(default)
            .into_iter()
            .map(|v| {
                if v >= 1.0 && v.fract() == 0.0 {
                    Ok(v as usize)
                } else {
                    Err(CliError::Usage(format!("ladder entry {v} is not a size")))
                }
            })
            .collect()
    };
    let mut extra = json!({});
    let mut config = json!({ "which": name });
    let table: ConvergenceTable = match a.which {
        ConvergeKind::Thm1_2 => {
            let up = large(a.direction)?;
            let (dir, l) = if up { (Direction::ToAiry, ladder(&[2.0, 6.0, 20.0])) } else { (Direction::ToPoisson, ladder(&[0.4, 0.2, 0.1])) };
            config["direction"] = json!(if up { "airy" } else { "poisson" });
            check_thm_1_2(dir, &l, exec)?
        }
        ConvergeKind::Thm1_3 => {
            let up = large(a.direction)?;
            let cfg = if up {
                nystrom(a.nodes.unwrap_or(80), a.refine.unwrap_or(true))
            } else {
                nystrom(a.nodes.unwrap_or(1600), a.refine.unwrap_or(false))
            };
            let (dir, l) = if up { (Direction::ToAiry, ladder(&[2.0, 6.0, 16.0])) } else { (Direction::ToPoisson, ladder(&[0.4, 0.2, 0.1])) };
            config["direction"] = json!(if up { "airy" } else { "poisson" });
            config["nodes"] = json!(cfg.node_count);
            config["refine"] = json!(cfg.refine);
            check_thm_1_3(dir, &l, &cfg, exec)?
        }
        ConvergeKind::Prop1_7 => {
            let up = large(a.direction)?;
            config["direction"] = json!(if up { "gue" } else { "poisson" });
            config["n"] = json!(a.n);
            if up {
                check_prop_1_7(MuDirection::ToGue, a.n, &ladder(&[2.0, 4.0, 8.0]), exec)?
            } else {
                let l = ladder(&[0.2, 0.1, 0.05]);
                let ratios = l.iter().map(|&mu| prop_1_7_diag_ratio(a.n, mu)).collect::<edgestat_core::Result<Vec<f64>>>()?;
                extra["diagonal_ratio"] = json!(ratios);
                check_prop_1_7(MuDirection::ToPoissonDensity, a.n, &l, exec)?
            }
        }
        ConvergeKind::Thm1_8 => {
            config["c"] = json!(a.c);
            check_thm_1_8(a.c, &sizes(&[50.0, 100.0, 200.0])?, exec)?
        }
        ConvergeKind::Thm1_9 => {
            let cc = a.centering_c.unwrap_or(a.c);
            config["c"] = json!(a.c);
            config["centering_c"] = json!(cc);
            check_thm_1_9(a.c, cc, &sizes(&[200.0, 400.0, 800.0])?, exec)?
        }
        ConvergeKind::Thm1_10 => {
            config["alpha"] = json!(a.alpha);
            check_thm_1_10(a.alpha, &sizes(&[64.0, 216.0, 512.0])?, exec)?
        }
    };
    let passed = table.passed();
    let mut t = Table::new(&format!("converge/{name}"), &[table.parameter.as_str(), "sup_error"])
        .meta("target", &table.target)
        .meta("grid", &table.grid)
        .meta("passed", passed);
    for (&v, &e) in table.values.iter().zip(&table.errors) {
        t.push(vec![Cell::Real(v), Cell::Real(e)]);
    }
    let file = format!("converge_{name}.{}", format.extension());
    let bytes = t.render(format)?;
    let sidecar = json!({
        "config": config,
        "table": file,
        "sha256": sha256_hex(&bytes),
        "target": table.target,
        "grid": table.grid,
        "parameter": table.parameter,
        "values": table.values,
        "errors": table.errors,
        "passed": passed,
        "extra": extra,
    });
    let mut outputs = Outputs::default();
    outputs.add(file, bytes);
    outputs.add(format!("converge_{name}.json"), pretty(&sidecar));
    let summary = if passed {
        format!("converge {name}: passed, last sup error {:.3e}", table.last_error())
    } else {
        format!("converge {name}: trend failed\n{}", table.render())
    };
    Ok((format!("converge_{name}"), outputs, config, Value::Null, passed, summary))
}

fn verify_cmd(a: &VerifyArgs) -> Result<Produced, CliError> {
    let verdicts = verify::run(a.which);
    let passed = verdicts.iter().all(|v| v.passed());
    let mut lines = Vec::new();
    for v in &verdicts {
        lines.push(format!(
            "{} {}: max error {:e} (tolerance {:e})",
            if v.passed() { "PASS" } else { "FAIL" },
            v.check,
            v.max_error(),
            v.tolerance
        ));
    }
    let name = a.which.name();
    let report = json!({ "passed": passed, "verdicts": verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>() });
    let mut outputs = Outputs::default();
    outputs.add(format!("verify_{name}.json"), pretty(&report));
    Ok((format!("verify_{name}"), outputs, json!({ "which": name }), Value::Null, passed, lines.join("\n")))
}

/// Reruns the manifest's arguments and compares output hashes. Outputs are
/// written only when `out` is given.
pub fn replay<E: ReplicaExecutor>(manifest: &Path, out: Option<&Path>, exec: &E) -> Result<(bool, String), CliError> {
    let text = std::fs::read_to_string(manifest).map_err(|e| CliError::Usage(format!("{}: {e}", manifest.display())))?;
    let m: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", manifest.display())))?;
    let args: Vec<String> = m["args"]
        .as_array()
        .and_then(|a| a.iter().map(|v| v.as_str().map(String::from)).collect())
        .ok_or_else(|| CliError::Usage("manifest has no argument list".into()))?;
    let cli = Cli::try_parse_from(std::iter::once("edgestat".to_string()).chain(args.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("manifest records a replay".into()));
    }
    let o = execute(&cli, args, exec)?;
    let mut lines = Vec::new();
    let mut ok = true;
    let recorded = m["outputs"].as_array().cloned().unwrap_or_default();
    for entry in &recorded {
        let file = entry["file"].as_str().unwrap_or_default();
        let want = entry["sha256"].as_str().unwrap_or_default();
        let got = o.outputs.get(file).map(sha256_hex);
        let same = got.as_deref() == Some(want);
        ok &= same;
        lines.push(format!("{} {file}", if same { "identical" } else { "DIFFERS" }));
    }
    if recorded.len() != o.outputs.names().count() {
        ok = false;
        lines.push("output file sets differ".into());
    }
    if let Some(dir) = out {
        o.outputs.write(dir, &o.stem, &o.recipe)?;
    }
    lines.push(if ok { "replay: byte-identical".into() } else { "replay: outputs differ".into() });
    Ok((ok, lines.join("\n")))
}
