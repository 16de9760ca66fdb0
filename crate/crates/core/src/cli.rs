//! The `refutekit` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::covers::{build_fko_witness, extract_disjoint_covers, verify_fko_witness, CoverSearch, CoverStrategy, FkoWitness};
use crate::csp::refute_csp;
use crate::decompose::{decompose, verify_contraction};
use crate::instances::{
    gen_csp, gen_xor, plant_literals, read_instance, smooth_csp, write_instance, write_instance_string, CoeffDist,
    Format, HypergraphModel, Instance, Predicate, SmoothingPlan,
};
use crate::kikuchi::{adversarial_wam_instance, build_wam_matrix, min_owner_partition, wam_submatrix, KikuchiConfig, WamMode};
use crate::linalg::{power_iteration, SpecConfig};
use crate::refute::{refute_poly, verify_certificate, DeltaRule, RefutationCertificate, RefuteConfig};
use crate::subsets::binomial;
use crate::{Error, Result};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "refutekit", version, about = "Spectral refutation certificates for XOR and CSP instances")]
pub struct Cli {
    /// Write a JSON run report here.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Refute an XOR instance and emit a certificate.
    Refute(RefuteArgs),
    /// Refute a CSP instance through its separating polynomial.
    RefuteCsp(RefuteArgs),
    /// Run the regularity decomposition and check it.
    Decompose(DecomposeArgs),
    /// Search for disjoint even covers.
    Cover(CoverArgs),
    /// Build a cover witness for an XOR instance.
    Witness(WitnessArgs),
    /// Check a cover witness or replay a refutation certificate.
    Verify(VerifyArgs),
    /// Build the adversarial tuple-matrix instance and check its norm.
    Wam(WamArgs),
    /// Refute a grid of random instances and write CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Uniform,
    /// Skewed vertex weights (exponent 0.5) with random signs.
    Semirandom,
    Skewed,
    Sunflower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Xor,
    Csp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Signs,
    Interval,
    Ones,
}

#[derive(Debug, Clone, Args)]
pub struct ModelOpts {
    #[arg(long, value_enum, default_value = "uniform")]
    pub model: ModelArg,
    /// Vertex weight exponent for the skewed model.
    #[arg(long, default_value_t = 1.0)]
    pub exponent: f64,
    /// Core size for the sunflower model.
    #[arg(long, default_value_t = 1)]
    pub core: u32,
    /// Fraction of sunflower clauses.
    #[arg(long, default_value_t = 0.5)]
    pub fraction: f64,
}

impl ModelOpts {
    fn model(&self) -> HypergraphModel {
        match self.model {
            ModelArg::Uniform => HypergraphModel::Uniform,
            ModelArg::Semirandom => HypergraphModel::Skewed { exponent: 0.5 },
            ModelArg::Skewed => HypergraphModel::Skewed { exponent: self.exponent },
            ModelArg::Sunflower => HypergraphModel::Sunflower {
                core: self.core,
                fraction: self.fraction,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "xor")]
    pub kind: KindArg,
    #[command(flatten)]
    pub model: ModelOpts,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long, env = "REFUTEKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "signs")]
    pub coeffs: CoeffArg,
    /// Builtin predicate name or truth table, for CSP instances.
    #[arg(long, default_value = "or3")]
    pub predicate: String,
    /// Re-randomize each literal with this probability.
    #[arg(long)]
    pub smooth: Option<f64>,
    /// Plant the all-ones assignment before smoothing.
    #[arg(long)]
    pub plant: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct RefuteOpts {
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tau: f64,
    /// Use the formula threshold with this constant instead of the adaptive one.
    #[arg(long)]
    pub delta_c: Option<f64>,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_cells: u64,
}

impl RefuteOpts {
    fn config(&self) -> RefuteConfig {
        RefuteConfig {
            eps: self.eps,
            delta: self.delta_c.map_or(DeltaRule::Adaptive, |c| DeltaRule::Formula { c }),
            kikuchi: KikuchiConfig { max_cells: self.max_cells },
            spec: SpecConfig {
                tau: self.tau,
                ..SpecConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RefuteArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub opts: RefuteOpts,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the certificate JSON here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Gf2,
    Kikuchi,
}

#[derive(Debug, Clone, Args)]
pub struct SearchOpts {
    #[arg(long, default_value_t = 40)]
    pub max_len: usize,
    #[arg(long, default_value_t = 1000)]
    pub want: usize,
    #[arg(long, value_enum, default_value = "gf2")]
    pub strategy: StrategyArg,
    /// Kikuchi level for the cycle strategy.
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, default_value_t = 16)]
    pub rounds: u32,
    #[arg(long, env = "REFUTEKIT_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl SearchOpts {
    fn config(&self) -> CoverSearch {
        CoverSearch {
            strategy: match self.strategy {
                StrategyArg::Exhaustive => CoverStrategy::Exhaustive,
                StrategyArg::Gf2 => CoverStrategy::Gf2Kernel,
                StrategyArg::Kikuchi => CoverStrategy::KikuchiCycle { ell: self.ell },
            },
            rounds: self.rounds,
            seed: self.seed,
            ..CoverSearch::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CoverArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub search: SearchOpts,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub search: SearchOpts,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, conflicts_with = "certificate")]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WamArgs {
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    #[arg(long, default_value_t = 60)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub ell: usize,
    #[arg(long, env = "REFUTEKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    /// Largest `n^ell` accepted.
    #[arg(long, default_value_t = 1 << 22)]
    pub max_dim: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "40")]
    pub n: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,4000")]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub ell: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Number of seeds per grid point, starting at `--seed`.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, env = "REFUTEKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelOpts,
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tau: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// JSON summary of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub seeds: Vec<u64>,
    pub timings_ms: BTreeMap<String, f64>,
    pub outputs: Value,
    pub environment: String,
}

fn environment_digest() -> String {
    let text = format!(
        "{} {} {} {}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        std::env::consts::OS,
        std::env::consts::ARCH
    );
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(stage.into(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

/// Parse arguments, run, and map the outcome to an exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<RunReport> {
    let mut timer = Timer(BTreeMap::new());
    let (command, parameters, seeds, outputs) = match &cli.command {
        Command::Gen(a) => gen(a, out, &mut timer)?,
        Command::Refute(a) => refute(a, out, &mut timer)?,
        Command::RefuteCsp(a) => refute_csp_cmd(a, out, &mut timer)?,
        Command::Decompose(a) => decompose_cmd(a, out, &mut timer)?,
        Command::Cover(a) => cover(a, out, &mut timer)?,
        Command::Witness(a) => witness(a, out, &mut timer)?,
        Command::Verify(a) => verify(a, out, &mut timer)?,
        Command::Wam(a) => wam(a, out, &mut timer)?,
        Command::Sweep(a) => sweep(a, out, &mut timer)?,
    };
    let report = RunReport {
        schema_version: REPORT_SCHEMA,
        command: command.into(),
        parameters,
        seeds,
        timings_ms: timer.0,
        outputs,
        environment: environment_digest(),
    };
    if let Some(path) = &cli.report {
        write_text(path, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

type Outcome = (&'static str, Value, Vec<u64>, Value);

fn gen(a: &GenArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let inst = timer.time("generate", || -> Result<Instance> {
        match a.kind {
            KindArg::Xor => {
                let dist = match a.coeffs {
                    CoeffArg::Signs => CoeffDist::Signs,
                    CoeffArg::Interval => CoeffDist::Interval,
                    CoeffArg::Ones => CoeffDist::AllOnes,
                };
                Ok(Instance::Xor(gen_xor(a.model.model(), dist, a.n, a.k, a.m, a.seed)?))
            }
            KindArg::Csp => {
                let pred = Predicate::builtin(&a.predicate).or_else(|_| Predicate::parse_truth_table(&a.predicate))?;
                let mut csp = gen_csp(pred, a.model.model(), a.n, a.m, a.seed)?;
                if a.plant {
                    csp = plant_literals(&csp, &vec![1; a.n as usize], a.seed ^ 0x9e37)?;
                }
                if let Some(p) = a.smooth {
                    let plan = SmoothingPlan::uniform(csp.m(), csp.k as usize, p, a.seed ^ 0x51);
                    csp = smooth_csp(&csp, &plan)?.0;
                }
                Ok(Instance::Csp(csp))
            }
        }
    })?;
    let format = a.format.unwrap_or_else(|| match (&a.output, &inst) {
        (Some(p), _) if Format::from_path(p).is_some() => Format::from_path(p).unwrap(),
        (_, Instance::Xor(_)) => Format::Xor,
        (_, Instance::Csp(_)) => Format::Json,
    });
    match &a.output {
        Some(path) => write_instance(&inst, path, format)?,
        None => write!(out, "{}", write_instance_string(&inst, format)?).map_err(|e| Error::io("<stdout>", e))?,
    }
    let params = json!({"kind": format!("{:?}", a.kind), "model": format!("{:?}", a.model.model()), "n": a.n, "m": a.m, "k": a.k});
    Ok(("gen", params, vec![a.seed], json!({"output": a.output})))
}

fn refute(a: &RefuteArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let inst = read_instance(&a.instance, a.format)?.into_xor()?;
    let cfg = a.opts.config();
    let r = timer.time("refute", || refute_poly(&inst, a.opts.ell, &cfg))?;
    if let Some(path) = &a.certificate {
        write_text(path, &serde_json::to_string_pretty(&r.certificate)?)?;
    }
    let c = &r.certificate;
    emit(out, &format!("alg-val {}", r.alg_val))?;
    emit(out, &format!("discarded {} of {}", c.discarded, c.m))?;
    for l in &c.levels {
        emit(
            out,
            &format!(
                "level t={} m={} p={} alpha={} bad_rows={} buckets={}",
                l.t,
                l.m,
                l.p,
                l.alpha,
                l.bad_rows,
                l.bucket_sizes.len()
            ),
        )?;
    }
    let params = json!({"instance": a.instance, "ell": a.opts.ell, "eps": a.opts.eps, "tau": a.opts.tau});
    let outputs = json!({"alg_val": r.alg_val, "certificate": a.certificate, "digest": c.digest});
    Ok(("refute", params, vec![], outputs))
}

fn refute_csp_cmd(a: &RefuteArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let inst = read_instance(&a.instance, a.format)?.into_csp()?;
    let cfg = a.opts.config();
    let r = timer.time("refute", || refute_csp(&inst, a.opts.ell, &cfg))?;
    if let Some(path) = &a.certificate {
        write_text(path, &serde_json::to_string_pretty(&r.certificate)?)?;
    }
    emit(out, &format!("alg-val {}", r.alg_val))?;
    emit(out, &format!("t {} delta {}", r.certificate.t, r.certificate.delta))?;
    let params = json!({"instance": a.instance, "ell": a.opts.ell, "eps": a.opts.eps, "tau": a.opts.tau});
    let outputs = json!({"alg_val": r.alg_val, "t": r.certificate.t, "delta": r.certificate.delta.to_string()});
    Ok(("refute-csp", params, vec![], outputs))
}

fn decompose_cmd(a: &DecomposeArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let h = read_instance(&a.instance, None)?.into_xor()?.hypergraph();
    let dec = timer.time("decompose", || decompose(&h, a.eps, a.ell))?;
    let report = timer.time("verify", || verify_contraction(&h, &dec, a.eps, a.ell));
    if let Some(path) = &a.output {
        write_text(path, &serde_json::to_string_pretty(&dec)?)?;
    }
    emit(out, &format!("discarded {}", dec.discarded.len()))?;
    for l in &dec.levels {
        emit(out, &format!("level t={} p={} m={}", l.t, l.p(), l.m()))?;
    }
    for c in &report.checks {
        emit(out, &format!("{} {}", c.clause, if c.passed { "ok" } else { "FAILED" }))?;
    }
    if !report.passed() {
        return Err(Error::Invariant("decomposition failed its checks".into()));
    }
    let outputs = json!({"discarded": dec.discarded.len(), "levels": dec.levels.iter().map(|l| json!({"t": l.t, "p": l.p(), "m": l.m()})).collect::<Vec<_>>()});
    Ok(("decompose", json!({"instance": a.instance, "eps": a.eps, "ell": a.ell}), vec![], outputs))
}

fn cover(a: &CoverArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let h = read_instance(&a.instance, None)?.into_xor()?.hypergraph();
    let covers = timer.time("search", || extract_disjoint_covers(&h, a.search.max_len, a.search.want, &a.search.config()))?;
    let one_based: Vec<Vec<usize>> = covers.iter().map(|c| c.edge_ids.iter().map(|i| i + 1).collect()).collect();
    let text = serde_json::to_string_pretty(&json!({ "covers": one_based }))?;
    match &a.output {
        Some(p) => write_text(p, &text)?,
        None => emit(out, &text)?,
    }
    let lengths: Vec<usize> = covers.iter().map(|c| c.len()).collect();
    Ok((
        "cover",
        json!({"instance": a.instance, "max_len": a.search.max_len, "strategy": format!("{:?}", a.search.strategy)}),
        vec![a.search.seed],
        json!({"covers": covers.len(), "lengths": lengths}),
    ))
}

fn witness(a: &WitnessArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let inst = read_instance(&a.instance, None)?.into_xor()?;
    let w = timer.time("build", || build_fko_witness(&inst, a.search.max_len, a.search.want, &a.search.config()))?;
    let bound = verify_fko_witness(&inst, &w)?;
    let text = serde_json::to_string_pretty(&w)?;
    match &a.output {
        Some(p) => write_text(p, &text)?,
        None => emit(out, &text)?,
    }
    emit(out, &format!("covers {} violated {} bound {}", bound.covers, bound.violated, bound.bound))?;
    Ok((
        "witness",
        json!({"instance": a.instance, "max_len": a.search.max_len}),
        vec![a.search.seed],
        serde_json::to_value(bound)?,
    ))
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let inst = a.instance.as_ref().map(|p| read_instance(p, None)?.into_xor()).transpose()?;
    if let Some(path) = &a.witness {
        let inst = inst.ok_or_else(|| Error::param("--witness needs --instance"))?;
        let w: FkoWitness = read_json(path)?;
        let bound = timer.time("verify", || verify_fko_witness(&inst, &w))?;
        emit(out, &format!("bound {}", bound.bound))?;
        return Ok(("verify", json!({"witness": path}), vec![], serde_json::to_value(bound)?));
    }
    let path = a.certificate.as_ref().ok_or_else(|| Error::param("give --witness or --certificate"))?;
    let cert: RefutationCertificate = read_json(path)?;
    let rep = timer.time("replay", || verify_certificate(&cert, inst.as_ref()));
    for p in &rep.problems {
        emit(out, p)?;
    }
    if !rep.ok {
        return Err(Error::Invariant("certificate replay failed".into()));
    }
    emit(out, &format!("certificate ok, alg-val {}", rep.recomputed))?;
    Ok(("verify", json!({"certificate": path}), vec![], serde_json::to_value(rep)?))
}

fn wam(a: &WamArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let (inst, gadget) = adversarial_wam_instance(a.n, a.m, a.ell, a.seed)?;
    let owners = min_owner_partition(&inst);
    let wm = timer.time("build", || build_wam_matrix(&inst, &owners, a.ell, WamMode::Lenient, a.max_dim))?;
    let sub = wam_submatrix(&wm, &gadget);
    let expected = binomial(gadget.ell_prime as u64, 2).unwrap_or(0) as f64;
    let rows_ok = sub
        .iter()
        .all(|r| r.iter().filter(|&&v| v != 0.0).count() as f64 == expected && r.iter().all(|&v| v == 0.0 || v == 1.0));
    let estimate = timer.time("power", || power_iteration(&wm.matrix, a.iters, a.seed));
    emit(out, &format!("ell' {} lower bound {expected}", gadget.ell_prime))?;
    emit(out, &format!("submatrix rows with exactly {expected} ones: {}", if rows_ok { "all" } else { "NOT all" }))?;
    emit(out, &format!("power-iteration estimate {estimate}"))?;
    let passed = rows_ok && estimate >= expected;
    emit(out, &format!("check {}", if passed { "passed" } else { "FAILED" }))?;
    if !passed {
        return Err(Error::Invariant("tuple-matrix lower bound not reproduced".into()));
    }
    Ok((
        "wam",
        json!({"n": a.n, "m": a.m, "ell": a.ell, "iters": a.iters}),
        vec![a.seed],
        json!({"ell_prime": gadget.ell_prime, "lower_bound": expected, "estimate": estimate, "nnz": wm.matrix.nnz()}),
    ))
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    n: u32,
    m: usize,
    k: u32,
    ell: usize,
    seed: u64,
    alg_val: f64,
    bad_rows: usize,
    buckets: usize,
    runtime_ms: f64,
}

fn sweep(a: &SweepArgs, out: &mut dyn Write, timer: &mut Timer) -> Result<Outcome> {
    let model = a.model.model();
    let mut grid = Vec::new();
    for &n in &a.n {
        for &m in &a.m {
            for &ell in &a.ell {
                for s in 0..a.seeds {
                    grid.push((n, m, ell, a.seed + s));
                }
            }
        }
    }
    let cfg = RefuteConfig {
        eps: a.eps,
        spec: SpecConfig {
            tau: a.tau,
            ..SpecConfig::default()
        },
        ..RefuteConfig::default()
    };
    let rows: Vec<SweepRow> = timer.time("sweep", || {
        grid.par_iter()
            .map(|&(n, m, ell, seed)| {
                let start = Instant::now();
                let inst = gen_xor(model, CoeffDist::Signs, n, a.k, m, seed)?;
                let r = refute_poly(&inst, ell, &cfg)?;
                let levels = &r.certificate.levels;
                Ok(SweepRow {
                    n,
                    m,
                    k: a.k,
                    ell,
                    seed,
                    alg_val: r.alg_val,
                    bad_rows: levels.iter().map(|l| l.bad_rows).sum(),
                    buckets: levels.iter().map(|l| l.bucket_sizes.len()).max().unwrap_or(0),
                    runtime_ms: start.elapsed().as_secs_f64() * 1e3,
                })
            })
            .collect::<Result<_>>()
    })?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    match &a.output {
        Some(p) => write_text(p, &text)?,
        None => write!(out, "{text}").map_err(|e| Error::io("<stdout>", e))?,
    }
    let seeds = (a.seed..a.seed + a.seeds).collect();
    Ok((
        "sweep",
        json!({"n": a.n, "m": a.m, "ell": a.ell, "k": a.k, "eps": a.eps}),
        seeds,
        json!({"points": rows.len(), "output": a.output}),
    ))
}
