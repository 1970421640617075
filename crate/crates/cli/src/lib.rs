//! Command-line front end for the `coaltwo` engine.
//!
//! Every subcommand produces a list of [`OutputRecord`]s, rendered as CSV
//! (one header row, one record per line) or as a JSON array of the same flat
//! records. Decimal values carry 15 significant digits; exact values are
//! repeated as `"num/den"`.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coaltwo::asympt::{
    asymptotic_correlation, asymptotic_correlation_closure, asymptotic_covariance, asymptotic_covariance_closure,
    extreme_correlation, extreme_covariance, limit_moment_ratios, tail_probability, tajima_recombination_limit,
    tajima_variance_limit, unbounded_recombination_limit, AsymptoticResult, ExtremeCase, ExtremeResult, Order,
    TailRegime,
};
use coaltwo::exact::{
    exact_correlation, exact_correlation_f64, exact_covariance, exact_covariance_f64, locus_means, locus_variances,
    solve_joint_moments, ExactCorrelation,
};
use coaltwo::mc::{estimate_correlation, CorrelationEstimate, Execution, Sampler};
use coaltwo::model::{Colocation, Parameters, ScalingScenario, TwoLocusState};
use coaltwo::rational::{f64_sig, parse_rational, to_f64, to_fraction_string, to_sig_decimal, uint};
use coaltwo::{resolve_scenario, Q};

/// Significant digits of every decimal field.
pub const DIGITS: usize = 15;

/// Environment variable supplying the default for `--threads`.
pub const THREADS_ENV: &str = "COALTWO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "coaltwo", version, about = "Correlation of coalescence times at two linked loci")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact covariance, correlation or moments from the absorbing chain.
    Exact(ExactArgs),
    /// Closed-form asymptotic, extreme-case, Tajima-variance and tail laws.
    Asymptotic(AsymptoticArgs),
    /// Monte Carlo estimate of the correlation.
    Simulate(SimulateArgs),
    /// Exact, asymptotic and Monte Carlo values side by side.
    Compare(CompareArgs),
    /// Asymptotic, exact and Monte Carlo values over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Population size (diploid individuals).
    #[arg(long = "N")]
    pub n: u64,
    /// Selfing probability, as "p/q" or a decimal.
    #[arg(long, value_parser = parse_q)]
    pub s: Q,
    /// Recombination probability, as "p/q" or a decimal.
    #[arg(long, value_parser = parse_q)]
    pub r: Q,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// A live state, a comma-separated list, or "all".
    #[arg(long, value_parser = parse_states)]
    pub state: States,
    #[arg(long, value_enum, default_value_t = ExactQuantity::Cov)]
    pub quantity: ExactQuantity,
    /// Use the double-precision solver (no exact fractions).
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactQuantity {
    Cov,
    Corr,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    I,
    Ii,
    Iii,
    Iv,
    TotalSelfing,
    NoRecombination,
}

impl ScenarioKind {
    fn label(self) -> &'static str {
        match self {
            ScenarioKind::I => "i",
            ScenarioKind::Ii => "ii",
            ScenarioKind::Iii => "iii",
            ScenarioKind::Iv => "iv",
            ScenarioKind::TotalSelfing => "total_selfing",
            ScenarioKind::NoRecombination => "no_recombination",
        }
    }

    fn extreme(self) -> Option<ExtremeCase> {
        match self {
            ScenarioKind::TotalSelfing => Some(ExtremeCase::TotalSelfing),
            ScenarioKind::NoRecombination => Some(ExtremeCase::NoRecombination),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Scaled selfing constant, s = sigma/N.
    #[arg(long, value_parser = parse_q)]
    pub sigma: Option<Q>,
    /// Scaled recombination constant, r = rho/N; "inf" for the unbounded limit
    /// in scenario ii.
    #[arg(long, value_parser = parse_q_or_inf)]
    pub rho: Option<QOrInf>,
    /// Constant selfing probability.
    #[arg(long, value_parser = parse_q)]
    pub s: Option<Q>,
    /// Constant recombination probability.
    #[arg(long, value_parser = parse_q)]
    pub r: Option<Q>,
}

#[derive(Debug, Clone, Args)]
pub struct AsymptoticArgs {
    /// Scaling scenario, or an extreme case (which needs --N).
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    #[command(flatten)]
    pub constants: ScenarioArgs,
    /// A live state, a comma-separated list, or "all" (not needed for tail laws).
    #[arg(long, value_parser = parse_states)]
    pub state: Option<States>,
    #[arg(long, value_enum, default_value_t = AsymptoticQuantity::Cov)]
    pub quantity: AsymptoticQuantity,
    /// Population size at which to evaluate the leading law.
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// Population-scaled mutation rate, for --quantity tajima.
    #[arg(long, value_parser = parse_q)]
    pub theta: Option<Q>,
    /// Scaled time in units of N generations, for --quantity tail.
    #[arg(long)]
    pub t: Option<f64>,
    /// Colocation of the pair, for --quantity tail.
    #[arg(long, value_enum)]
    pub colocation: Option<ColocationArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymptoticQuantity {
    Cov,
    Corr,
    /// Limits of E[Ti Tj]/N^2 and E[Ti] E[Tj]/N^2.
    Limits,
    Tajima,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColocationArg {
    Same,
    Diff,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Number of independent trials.
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
    /// Master seed; trial k uses stream k of this seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = SamplerArg::Matrix)]
    pub sampler: SamplerArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    /// Walk on the 17-state transition matrix.
    Matrix,
    /// Lineage tracing under the reproduction rules.
    Generative,
}

impl SamplerArg {
    fn sampler(self) -> Sampler {
        match self {
            SamplerArg::Matrix => Sampler::Matrix,
            SamplerArg::Generative => Sampler::Generative,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SamplerArg::Matrix => "matrix",
            SamplerArg::Generative => "generative",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Starting live state, q1 to q12.
    #[arg(long, value_parser = parse_state)]
    pub state: TwoLocusState,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Starting live state, q1 to q12.
    #[arg(long, value_parser = parse_state)]
    pub state: TwoLocusState,
    #[command(flatten)]
    pub mc: McArgs,
    /// Force the asymptotic regime instead of matching it from (N, s, r).
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    #[arg(long, value_enum, default_value_t = CompareQuantity::Corr)]
    pub quantity: CompareQuantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareQuantity {
    Cov,
    Corr,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub scenario: ScenarioKind,
    #[command(flatten)]
    pub constants: ScenarioArgs,
    /// Starting live state, q1 to q12.
    #[arg(long, value_parser = parse_state)]
    pub state: TwoLocusState,
    /// Parameter to vary: r (rho in scenarios i and ii), s (sigma in
    /// scenarios i and iii), or N.
    #[arg(long, value_enum)]
    pub vary: VaryArg,
    /// "lo:hi:count" (evenly spaced, endpoints included) or "a,b,c".
    #[arg(long)]
    pub grid: String,
    /// Population size when not varying N.
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t = CompareQuantity::Corr)]
    pub quantity: CompareQuantity,
    /// Trials per point; 0 skips the Monte Carlo records.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    /// Master seed; grid point k uses seed + k.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = SamplerArg::Matrix)]
    pub sampler: SamplerArg,
    /// Skip the exact-solver records.
    #[arg(long)]
    pub no_exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VaryArg {
    R,
    Rho,
    S,
    Sigma,
    #[value(name = "N")]
    N,
}

/// A set of live states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct States(pub Vec<TwoLocusState>);

/// An exact rational or `+infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QOrInf {
    Finite(Q),
    Infinite,
}

fn parse_q(text: &str) -> Result<Q, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn parse_q_or_inf(text: &str) -> Result<QOrInf, String> {
    match text.trim() {
        "inf" | "infinity" => Ok(QOrInf::Infinite),
        t => parse_q(t).map(QOrInf::Finite),
    }
}

fn parse_state(text: &str) -> Result<TwoLocusState, String> {
    let st: TwoLocusState = text.trim().parse().map_err(|e: coaltwo::Error| e.to_string())?;
    if !st.is_live() {
        return Err(format!("{st} is not a live state (q1..q12)"));
    }
    Ok(st)
}

fn parse_states(text: &str) -> Result<States, String> {
    if text.trim() == "all" {
        return Ok(States(TwoLocusState::LIVE.to_vec()));
    }
    text.split(',').map(parse_state).collect::<Result<Vec<_>, _>>().map(States)
}

/// A failure with its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags or out-of-domain parameters (exit 2).
    Validation(String),
    /// Output could not be written (exit 3).
    Io(String),
    /// An internal consistency check failed (exit 4).
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) | CliError::Invariant(m) => f.write_str(m),
        }
    }
}

impl From<coaltwo::Error> for CliError {
    fn from(e: coaltwo::Error) -> Self {
        match e {
            coaltwo::Error::Validation(_) | coaltwo::Error::Degenerate(_) => CliError::Validation(e.to_string()),
            coaltwo::Error::Invariant(_) => CliError::Invariant(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn validation<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

/// One flat, self-describing output row.
///
/// Empty fields do not apply to the record. For asymptotic records `value`
/// is the leading law evaluated at `N` when `N` is present, and the leading
/// coefficient otherwise; `coefficient` always holds the latter.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub s: Option<String>,
    pub s_exact: Option<String>,
    pub r: Option<String>,
    pub r_exact: Option<String>,
    pub scenario: Option<String>,
    pub sigma: Option<String>,
    pub rho: Option<String>,
    pub state: Option<String>,
    pub quantity: String,
    pub order: Option<String>,
    pub coefficient: Option<String>,
    pub coefficient_exact: Option<String>,
    pub value: String,
    pub value_exact: Option<String>,
    /// Exact square of a correlation that is irrational.
    pub value_squared_exact: Option<String>,
    pub std_error: Option<String>,
    /// `|value - exact value|` in compare and sweep records.
    pub deviation: Option<String>,
    /// `(value - exact value) / std_error` for Monte Carlo records.
    pub z_score: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub sampler: Option<String>,
    pub sum_t_i: Option<String>,
    pub sum_t_j: Option<String>,
    pub sum_t_i2: Option<String>,
    pub sum_t_j2: Option<String>,
    pub sum_t_ij: Option<String>,
    pub theta: Option<String>,
    pub t: Option<String>,
    pub colocation: Option<String>,
    pub formula: Option<String>,
}

fn dec(x: &Q) -> String {
    to_sig_decimal(x, DIGITS)
}

fn frac(x: &Q) -> String {
    to_fraction_string(x)
}

fn decf(x: f64) -> String {
    f64_sig(x, DIGITS)
}

impl OutputRecord {
    fn new(command: &str, quantity: &str) -> Self {
        OutputRecord { command: command.into(), quantity: quantity.into(), ..Default::default() }
    }

    fn with_params(mut self, p: &Parameters) -> Self {
        self.n = Some(p.n());
        self.s = Some(dec(p.s()));
        self.s_exact = Some(frac(p.s()));
        self.r = Some(dec(p.r()));
        self.r_exact = Some(frac(p.r()));
        self
    }

    fn with_state(mut self, st: TwoLocusState) -> Self {
        self.state = Some(st.name().to_string());
        self
    }

    fn with_exact(mut self, x: &Q) -> Self {
        self.value = dec(x);
        self.value_exact = Some(frac(x));
        self
    }

    fn with_correlation(mut self, c: &ExactCorrelation) -> Self {
        match &c.rational {
            Some(v) => self.with_exact(v),
            None => {
                self.value = coaltwo::rational::signed_sqrt_decimal(c.covariance < Q::from_integer(0.into()), &c.squared, DIGITS);
                self.value_squared_exact = Some(frac(&c.squared));
                self
            }
        }
    }

    fn with_scenario(mut self, label: &str, sc: Option<&ScalingScenario>, missing: &Missing) -> Self {
        self.scenario = Some(label.to_string());
        if let Some(sc) = sc {
            let (sigma, rho, s, r) = match sc {
                ScalingScenario::I { sigma, rho } => (Some(sigma), Some(rho), None, None),
                ScalingScenario::II { s, rho } => (None, Some(rho), Some(s), None),
                ScalingScenario::III { sigma, r } => (Some(sigma), None, None, Some(r)),
                ScalingScenario::IV { s, r } => (None, None, Some(s), Some(r)),
            };
            if !missing.sigma {
                self.sigma = sigma.map(frac);
            }
            if !missing.rho {
                self.rho = rho.map(frac);
            }
            if !missing.s && self.s.is_none() {
                if let Some(s) = s {
                    self.s = Some(dec(s));
                    self.s_exact = Some(frac(s));
                }
            }
            if !missing.r && self.r.is_none() {
                if let Some(r) = r {
                    self.r = Some(dec(r));
                    self.r_exact = Some(frac(r));
                }
            }
        }
        self
    }

    fn with_law(mut self, law: &AsymptoticResult, n: Option<u64>) -> CliResult<Self> {
        let c = law
            .coefficient
            .as_ref()
            .ok_or_else(|| CliError::Validation(format!("{} gives only the order {} of this law", law.formula_id, law.order)))?;
        self.order = Some(law.order.label().to_string());
        self.coefficient = Some(dec(c));
        self.coefficient_exact = Some(frac(c));
        self.formula = Some(law.formula_id.clone());
        let v = match n {
            Some(n) => law.at(n).expect("coefficient present"),
            None => c.clone(),
        };
        self.n = n.or(self.n);
        Ok(self.with_exact(&v))
    }

    fn with_extreme(mut self, e: &ExtremeResult, params: &Parameters) -> Self {
        self.formula = Some(e.formula_id.clone());
        match e.leading_order {
            None => {
                self.order = Some("exact".to_string());
                self.with_exact(&e.value)
            }
            Some(order) => {
                self.order = Some(order.label().to_string());
                self.coefficient = Some(dec(&e.value));
                self.coefficient_exact = Some(frac(&e.value));
                let at = &e.value * pow_n(params.n(), order);
                self.with_exact(&at)
            }
        }
    }

    fn with_estimate(mut self, e: &CorrelationEstimate, sampler: SamplerArg) -> Self {
        self.value = e.pearson.map(decf).unwrap_or_else(|| "NaN".to_string());
        self.std_error = e.std_error.map(decf);
        self.seed = Some(e.seed);
        self.trials = Some(e.trials);
        self.sampler = Some(sampler.name().to_string());
        self.sum_t_i = Some(e.sums.t_i.to_string());
        self.sum_t_j = Some(e.sums.t_j.to_string());
        self.sum_t_i2 = Some(e.sums.t_i2.to_string());
        self.sum_t_j2 = Some(e.sums.t_j2.to_string());
        self.sum_t_ij = Some(e.sums.t_ij.to_string());
        self
    }
}

fn pow_n(n: u64, order: Order) -> Q {
    let k = order.exponent();
    let nq = uint(n);
    num_traits::pow::Pow::pow(nq, k)
}

/// Which scenario constants the user left out.
#[derive(Debug, Clone, Copy, Default)]
struct Missing {
    sigma: bool,
    rho: bool,
    s: bool,
    r: bool,
}

/// Builds the scenario for each placeholder round. Absent constants take
/// two distinct placeholder values so that a result can be reported only
/// when it does not depend on them.
fn scenario_candidates(kind: ScenarioKind, c: &ScenarioArgs) -> CliResult<(Vec<ScalingScenario>, Missing)> {
    let rho = match &c.rho {
        Some(QOrInf::Infinite) => return validation("--rho inf is only available in scenario ii for q12"),
        Some(QOrInf::Finite(x)) => Some(x.clone()),
        None => None,
    };
    let pick = |v: &Option<Q>, a: Q, b: Q| -> [Q; 2] {
        match v {
            Some(x) => [x.clone(), x.clone()],
            None => [a, b],
        }
    };
    let one = || Q::from_integer(1.into());
    let two = || Q::from_integer(2.into());
    let third = || coaltwo::rational::q(1, 3);
    let two_thirds = || coaltwo::rational::q(2, 3);
    let sigma_v = pick(&c.sigma, one(), two());
    let rho_v = pick(&rho, one(), two());
    let s_v = pick(&c.s, third(), two_thirds());
    let r_v = pick(&c.r, third(), two_thirds());
    let mut missing = Missing::default();
    let unused = |name: &str, present: bool| -> CliResult<()> {
        if present {
            validation(format!("--{name} does not apply to scenario {}", kind.label()))
        } else {
            Ok(())
        }
    };
    let scs: Vec<ScalingScenario> = (0..2)
        .map(|k| match kind {
            ScenarioKind::I => ScalingScenario::I { sigma: sigma_v[k].clone(), rho: rho_v[k].clone() },
            ScenarioKind::Ii => ScalingScenario::II { s: s_v[k].clone(), rho: rho_v[k].clone() },
            ScenarioKind::Iii => ScalingScenario::III { sigma: sigma_v[k].clone(), r: r_v[k].clone() },
            _ => ScalingScenario::IV { s: s_v[k].clone(), r: r_v[k].clone() },
        })
        .collect();
    match kind {
        ScenarioKind::I => {
            unused("s", c.s.is_some())?;
            unused("r", c.r.is_some())?;
            missing.sigma = c.sigma.is_none();
            missing.rho = rho.is_none();
        }
        ScenarioKind::Ii => {
            unused("sigma", c.sigma.is_some())?;
            unused("r", c.r.is_some())?;
            missing.s = c.s.is_none();
            missing.rho = rho.is_none();
        }
        ScenarioKind::Iii => {
            unused("s", c.s.is_some())?;
            unused("rho", rho.is_some())?;
            missing.sigma = c.sigma.is_none();
            missing.r = c.r.is_none();
        }
        ScenarioKind::Iv => {
            unused("sigma", c.sigma.is_some())?;
            unused("rho", rho.is_some())?;
            missing.s = c.s.is_none();
            missing.r = c.r.is_none();
        }
        _ => unreachable!("extreme cases have no scaling constants"),
    }
    Ok((scs, missing))
}

fn missing_names(m: &Missing) -> String {
    let mut v = Vec::new();
    for (flag, name) in [(m.sigma, "--sigma"), (m.rho, "--rho"), (m.s, "--s"), (m.r, "--r")] {
        if flag {
            v.push(name);
        }
    }
    v.join(", ")
}

/// Evaluates `f` under both placeholder rounds and insists on agreement.
fn independent<T: PartialEq>(
    scs: &[ScalingScenario],
    missing: &Missing,
    f: impl Fn(&ScalingScenario) -> CliResult<T>,
) -> CliResult<T> {
    let a = f(&scs[0])?;
    let b = f(&scs[1])?;
    if a != b {
        return validation(format!("the result depends on {}; supply it", missing_names(missing)));
    }
    Ok(a)
}

fn execution(threads: Option<usize>) -> Execution {
    let t = threads.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    Execution::with_threads(t)
}

fn params(m: &ModelArgs) -> CliResult<Parameters> {
    Ok(Parameters::new(m.n, m.s.clone(), m.r.clone())?)
}

fn cmd_exact(a: &ExactArgs) -> CliResult<Vec<OutputRecord>> {
    let p = params(&a.model)?;
    let mut out = Vec::new();
    let joint = match (a.quantity, a.float) {
        (ExactQuantity::Moments, false) => Some(solve_joint_moments(&p)?),
        _ => None,
    };
    if a.quantity == ExactQuantity::Moments && a.float {
        return validation("--float applies to cov and corr only");
    }
    for &st in &a.state.0 {
        let base = || OutputRecord::new("exact", "").with_params(&p).with_state(st);
        match (a.quantity, a.float) {
            (ExactQuantity::Cov, false) => {
                let mut r = base().with_exact(&exact_covariance(&p, st)?);
                r.quantity = "cov_exact".into();
                out.push(r);
            }
            (ExactQuantity::Corr, false) => {
                let mut r = base().with_correlation(&exact_correlation(&p, st)?);
                r.quantity = "corr_exact".into();
                out.push(r);
            }
            (ExactQuantity::Cov, true) => {
                let mut r = base();
                r.quantity = "cov_exact".into();
                r.value = decf(exact_covariance_f64(&p, st)?);
                out.push(r);
            }
            (ExactQuantity::Corr, true) => {
                let mut r = base();
                r.quantity = "corr_exact".into();
                r.value = decf(exact_correlation_f64(&p, st)?);
                out.push(r);
            }
            (ExactQuantity::Moments, _) => {
                let joint = joint.as_ref().expect("solved above");
                let (mi, mj) = locus_means(&p, st)?;
                let (vi, vj) = locus_variances(&p, st)?;
                for (name, v) in [
                    ("joint_moment_exact", joint.get(st)?.clone()),
                    ("mean_i_exact", mi),
                    ("mean_j_exact", mj),
                    ("var_i_exact", vi),
                    ("var_j_exact", vj),
                ] {
                    let mut r = base().with_exact(&v);
                    r.quantity = name.into();
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

fn cmd_asymptotic(a: &AsymptoticArgs) -> CliResult<Vec<OutputRecord>> {
    if a.quantity == AsymptoticQuantity::Tail {
        return asymptotic_tail(a);
    }
    let kind = a.scenario.ok_or_else(|| CliError::Validation("--scenario is required".into()))?;
    let states = a.state.clone().ok_or_else(|| CliError::Validation("--state is required".into()))?;
    if let Some(case) = kind.extreme() {
        return asymptotic_extreme(a, case, &states);
    }
    if a.constants.rho == Some(QOrInf::Infinite) {
        return asymptotic_rho_inf(a, kind, &states);
    }
    let (scs, missing) = scenario_candidates(kind, &a.constants)?;
    let mut out = Vec::new();
    for &st in &states.0 {
        let base = OutputRecord::new("asymptotic", "")
            .with_state(st)
            .with_scenario(kind.label(), Some(&scs[0]), &missing);
        match a.quantity {
            AsymptoticQuantity::Cov | AsymptoticQuantity::Corr => {
                let cov = a.quantity == AsymptoticQuantity::Cov;
                let law = independent(&scs, &missing, |sc| {
                    Ok(if cov { asymptotic_covariance(sc, st)? } else { asymptotic_correlation(sc, st)? })
                })?;
                let mut r = base.with_law(&law, a.n)?;
                r.quantity = if cov { "cov_asympt" } else { "corr_asympt" }.into();
                out.push(r);
            }
            AsymptoticQuantity::Limits => {
                let (joint, prod) = independent(&scs, &missing, |sc| Ok(limit_moment_ratios(sc, st)?))?;
                for (name, v) in [("lim_joint_asympt", joint), ("lim_prod_asympt", prod)] {
                    let mut r = base.clone().with_exact(&v);
                    r.quantity = name.into();
                    r.order = Some(Order::N2.label().into());
                    r.coefficient = Some(dec(&v));
                    r.coefficient_exact = Some(frac(&v));
                    r.formula = Some(format!("{}.{}.{st}", name.trim_end_matches("_asympt"), kind.label()));
                    out.push(r);
                }
            }
            AsymptoticQuantity::Tajima => {
                let theta = a.theta.clone().ok_or_else(|| CliError::Validation("--theta is required".into()))?;
                let n = a.n.ok_or_else(|| CliError::Validation("--N is required for tajima".into()))?;
                let v = independent(&scs, &missing, |sc| Ok(tajima_variance_limit(&theta, sc, st, n)?))?;
                let mut r = base.with_exact(&v);
                r.quantity = "tajima_var".into();
                r.n = Some(n);
                r.theta = Some(frac(&theta));
                out.push(r);
            }
            AsymptoticQuantity::Tail => unreachable!("handled above"),
        }
    }
    Ok(out)
}

fn asymptotic_rho_inf(a: &AsymptoticArgs, kind: ScenarioKind, states: &States) -> CliResult<Vec<OutputRecord>> {
    if kind != ScenarioKind::Ii || states.0 != [TwoLocusState::Q12] {
        return validation("--rho inf is only available in scenario ii for q12");
    }
    if a.constants.sigma.is_some() || a.constants.r.is_some() {
        return validation("scenario ii takes --s and --rho only");
    }
    let s = a.constants.s.clone().ok_or_else(|| CliError::Validation("--s is required".into()))?;
    let (cov, corr) = unbounded_recombination_limit(&s)?;
    let mut base = OutputRecord::new("asymptotic", "").with_state(TwoLocusState::Q12);
    base.scenario = Some("ii".into());
    base.rho = Some("inf".into());
    base.s = Some(dec(&s));
    base.s_exact = Some(frac(&s));
    let mut r = match a.quantity {
        AsymptoticQuantity::Cov => {
            let mut r = base.with_law(&cov, a.n)?;
            r.quantity = "cov_asympt".into();
            r
        }
        AsymptoticQuantity::Corr => {
            let mut r = base.with_law(&corr, a.n)?;
            r.quantity = "corr_asympt".into();
            r
        }
        AsymptoticQuantity::Tajima => {
            let theta = a.theta.clone().ok_or_else(|| CliError::Validation("--theta is required".into()))?;
            let mut r = base.with_exact(&tajima_recombination_limit(&theta, &s)?);
            r.quantity = "tajima_var".into();
            r.theta = Some(frac(&theta));
            r.formula = Some("tajima.recombination_limit".into());
            r
        }
        _ => return validation("--rho inf supports --quantity cov, corr or tajima"),
    };
    r.command = "asymptotic".into();
    Ok(vec![r])
}

fn asymptotic_extreme(a: &AsymptoticArgs, case: ExtremeCase, states: &States) -> CliResult<Vec<OutputRecord>> {
    let n = a.n.ok_or_else(|| CliError::Validation(format!("--N is required for {}", case.name())))?;
    let c = &a.constants;
    if c.sigma.is_some() || c.rho.is_some() {
        return validation(format!("{} takes --s or --r, not scaled constants", case.name()));
    }
    let (s, r) = match case {
        ExtremeCase::TotalSelfing => {
            if c.s.is_some() {
                return validation("total_selfing fixes s = 1");
            }
            (Q::from_integer(1.into()), c.r.clone().ok_or_else(|| CliError::Validation("--r is required".into()))?)
        }
        ExtremeCase::NoRecombination => {
            if c.r.is_some() {
                return validation("no_recombination fixes r = 0");
            }
            (c.s.clone().ok_or_else(|| CliError::Validation("--s is required".into()))?, Q::from_integer(0.into()))
        }
    };
    let p = Parameters::new(n, s, r)?;
    let mut out = Vec::new();
    for &st in &states.0 {
        let (name, e) = match a.quantity {
            AsymptoticQuantity::Cov => ("cov_asympt", extreme_covariance(case, &p, st)?),
            AsymptoticQuantity::Corr => ("corr_asympt", extreme_correlation(case, &p, st)?),
            _ => return validation(format!("{} supports --quantity cov or corr", case.name())),
        };
        let mut rec = OutputRecord::new("asymptotic", name).with_params(&p).with_state(st).with_extreme(&e, &p);
        rec.scenario = Some(case.name().into());
        out.push(rec);
    }
    Ok(out)
}

fn asymptotic_tail(a: &AsymptoticArgs) -> CliResult<Vec<OutputRecord>> {
    let t = a.t.ok_or_else(|| CliError::Validation("--t is required for tail".into()))?;
    let c = a.colocation.ok_or_else(|| CliError::Validation("--colocation is required for tail".into()))?;
    let (coloc, cname) = match c {
        ColocationArg::Same => (Colocation::Same, "same"),
        ColocationArg::Diff => (Colocation::Diff, "diff"),
    };
    if a.scenario.is_some() || a.state.is_some() || a.constants.sigma.is_some() || a.constants.rho.is_some() || a.constants.r.is_some() {
        return validation("tail takes --t, --colocation and optionally --s (omit --s for vanishing selfing)");
    }
    let regime = match &a.constants.s {
        Some(s) => TailRegime::ConstantS(to_f64(s)),
        None => TailRegime::VanishingS,
    };
    let v = tail_probability(t, coloc, regime)?;
    let mut r = OutputRecord::new("asymptotic", "tail_prob");
    r.value = decf(v);
    r.t = Some(decf(t));
    r.colocation = Some(cname.into());
    if let Some(s) = &a.constants.s {
        r.s = Some(dec(s));
        r.s_exact = Some(frac(s));
    }
    Ok(vec![r])
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult<Vec<OutputRecord>> {
    let p = params(&a.model)?;
    let e = estimate_correlation(&p, a.state, a.mc.trials, a.mc.seed, a.mc.sampler.sampler(), execution(a.mc.threads))?;
    let r = OutputRecord::new("simulate", "corr_mc").with_params(&p).with_state(a.state).with_estimate(&e, a.mc.sampler);
    Ok(vec![r])
}

/// The asymptotic regime matched to concrete parameters.
#[derive(Debug, Clone)]
pub enum Regime {
    Extreme(ExtremeCase),
    Scaled(ScalingScenario),
}

/// Matches `(N, s, r)` to a regime: `r = 0` and `s = 1` are the extreme
/// cases; otherwise a parameter counts as scaled (`sigma = s N`,
/// `rho = r N`) when it is below `1/sqrt(N)`. `force` overrides the choice
/// of scenario while the constants still come from `(N, s, r)`.
pub fn match_regime(p: &Parameters, force: Option<ScenarioKind>) -> CliResult<Regime> {
    use num_traits::{One, Zero};
    let nq = uint(p.n());
    let threshold = 1.0 / (p.n() as f64).sqrt();
    let kind = match force {
        Some(k) => k,
        None if p.r().is_zero() => ScenarioKind::NoRecombination,
        None if p.s().is_one() => ScenarioKind::TotalSelfing,
        None => match (p.s_f64() < threshold, p.r_f64() < threshold) {
            (true, true) => ScenarioKind::I,
            (false, true) => ScenarioKind::Ii,
            (true, false) => ScenarioKind::Iii,
            (false, false) => ScenarioKind::Iv,
        },
    };
    let (s, r) = (p.s().clone(), p.r().clone());
    Ok(match kind {
        ScenarioKind::TotalSelfing => Regime::Extreme(ExtremeCase::TotalSelfing),
        ScenarioKind::NoRecombination => Regime::Extreme(ExtremeCase::NoRecombination),
        ScenarioKind::I => Regime::Scaled(ScalingScenario::I { sigma: s * &nq, rho: r * &nq }),
        ScenarioKind::Ii => Regime::Scaled(ScalingScenario::II { s, rho: r * &nq }),
        ScenarioKind::Iii => Regime::Scaled(ScalingScenario::III { sigma: s * &nq, r }),
        ScenarioKind::Iv => Regime::Scaled(ScalingScenario::IV { s, r }),
    })
}

fn scenario_label(sc: &ScalingScenario) -> &'static str {
    sc.label()
}

/// Exact value as `(f64, record)` for the compare and sweep commands.
fn exact_record(command: &str, p: &Parameters, st: TwoLocusState, q: CompareQuantity) -> CliResult<(f64, OutputRecord)> {
    let base = OutputRecord::new(command, "").with_params(p).with_state(st);
    Ok(match q {
        CompareQuantity::Cov => {
            let v = exact_covariance(p, st)?;
            let mut r = base.with_exact(&v);
            r.quantity = "cov_exact".into();
            (to_f64(&v), r)
        }
        CompareQuantity::Corr => {
            let c = exact_correlation(p, st)?;
            let mut r = base.with_correlation(&c);
            r.quantity = "corr_exact".into();
            (c.value(), r)
        }
    })
}

/// Asymptotic law under a regime, evaluated at the parameters' `N`.
/// Returns `None` when only the order of the law is known.
fn asymptotic_record(
    command: &str,
    p: &Parameters,
    st: TwoLocusState,
    regime: &Regime,
    q: CompareQuantity,
) -> CliResult<Option<(f64, OutputRecord)>> {
    let base = OutputRecord::new(command, "").with_params(p).with_state(st);
    let (mut rec, v) = match regime {
        Regime::Extreme(case) => {
            let e = match q {
                CompareQuantity::Cov => extreme_covariance(*case, p, st)?,
                CompareQuantity::Corr => extreme_correlation(*case, p, st)?,
            };
            let mut r = base.with_extreme(&e, p);
            r.scenario = Some(case.name().into());
            let v: f64 = r.value.parse().unwrap_or(f64::NAN);
            (r, v)
        }
        Regime::Scaled(sc) => {
            let law = match q {
                CompareQuantity::Cov => asymptotic_covariance_closure(sc, st)?,
                CompareQuantity::Corr => asymptotic_correlation_closure(sc, st)?,
            };
            if law.coefficient.is_none() {
                return Ok(None);
            }
            let at = law.at(p.n()).expect("coefficient present");
            let r = base.with_scenario(scenario_label(sc), Some(sc), &Missing::default()).with_law(&law, Some(p.n()))?;
            (r, to_f64(&at))
        }
    };
    rec.quantity = match q {
        CompareQuantity::Cov => "cov_asympt",
        CompareQuantity::Corr => "corr_asympt",
    }
    .into();
    Ok(Some((v, rec)))
}

fn mc_record(
    command: &str,
    p: &Parameters,
    st: TwoLocusState,
    trials: u64,
    seed: u64,
    sampler: SamplerArg,
    threads: Option<usize>,
) -> CliResult<(CorrelationEstimate, OutputRecord)> {
    let e = estimate_correlation(p, st, trials, seed, sampler.sampler(), execution(threads))?;
    let r = OutputRecord::new(command, "corr_mc").with_params(p).with_state(st).with_estimate(&e, sampler);
    Ok((e, r))
}

fn annotate_mc(rec: &mut OutputRecord, e: &CorrelationEstimate, reference: f64) {
    if let Some(v) = e.pearson {
        rec.deviation = Some(decf((v - reference).abs()));
        if let Some(se) = e.std_error.filter(|se| *se > 0.0) {
            rec.z_score = Some(decf((v - reference) / se));
        }
    }
}

fn cmd_compare(a: &CompareArgs) -> CliResult<Vec<OutputRecord>> {
    let p = params(&a.model)?;
    let regime = match_regime(&p, a.scenario)?;
    let (exact, exact_rec) = exact_record("compare", &p, a.state, a.quantity)?;
    let mut out = vec![exact_rec];
    if let Some((v, mut rec)) = asymptotic_record("compare", &p, a.state, &regime, a.quantity)? {
        rec.deviation = Some(decf((v - exact).abs()));
        out.push(rec);
    }
    if a.quantity == CompareQuantity::Corr && a.mc.trials > 0 {
        let (e, mut rec) = mc_record("compare", &p, a.state, a.mc.trials, a.mc.seed, a.mc.sampler, a.mc.threads)?;
        annotate_mc(&mut rec, &e, exact);
        out.push(rec);
    }
    Ok(out)
}

/// Parses `"lo:hi:count"` or `"a,b,c"` into exact values.
pub fn parse_grid(spec: &str) -> CliResult<Vec<Q>> {
    let spec = spec.trim();
    let vals = if let Some((lo, rest)) = spec.split_once(':') {
        let (hi, count) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Validation(format!("grid {spec:?} must be lo:hi:count")))?;
        let lo = parse_q(lo).map_err(CliError::Validation)?;
        let hi = parse_q(hi).map_err(CliError::Validation)?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("bad grid count in {spec:?}")))?;
        match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => {
                let step = (&hi - &lo) / uint(count - 1);
                (0..count).map(|k| &lo + &step * uint(k)).collect()
            }
        }
    } else {
        spec.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_q(t).map_err(CliError::Validation))
            .collect::<CliResult<Vec<_>>>()?
    };
    if vals.is_empty() {
        return validation("the grid is empty");
    }
    Ok(vals)
}

fn cmd_sweep(a: &SweepArgs) -> CliResult<Vec<OutputRecord>> {
    if a.scenario.extreme().is_some() {
        return validation("sweep needs a scaling scenario i, ii, iii or iv");
    }
    if a.constants.rho == Some(QOrInf::Infinite) {
        return validation("--rho inf cannot be swept");
    }
    let grid = parse_grid(&a.grid)?;
    let vary_n = a.vary == VaryArg::N;
    if !vary_n && a.n.is_none() {
        return validation("--N is required unless --vary N");
    }
    if vary_n && a.n.is_some() {
        return validation("--N conflicts with --vary N");
    }
    let mut out = Vec::new();
    for (k, x) in grid.iter().enumerate() {
        let mut c = a.constants.clone();
        let n = if vary_n {
            use num_traits::{One, ToPrimitive};
            if !x.denom().is_one() || *x < uint(2) {
                return validation(format!("N grid values must be integers >= 2, got {}", frac(x)));
            }
            x.numer().to_u64().ok_or_else(|| CliError::Validation("N is too large".into()))?
        } else {
            let target = match (a.vary, a.scenario) {
                (VaryArg::Rho, _) | (VaryArg::R, ScenarioKind::I | ScenarioKind::Ii) => "rho",
                (VaryArg::Sigma, _) | (VaryArg::S, ScenarioKind::I | ScenarioKind::Iii) => "sigma",
                (VaryArg::R, _) => "r",
                (VaryArg::S, _) => "s",
                (VaryArg::N, _) => unreachable!(),
            };
            match target {
                "rho" => c.rho = Some(QOrInf::Finite(x.clone())),
                "sigma" => c.sigma = Some(x.clone()),
                "r" => c.r = Some(x.clone()),
                _ => c.s = Some(x.clone()),
            }
            a.n.expect("checked above")
        };
        let (scs, missing) = scenario_candidates(a.scenario, &c)?;
        if !missing_names(&missing).is_empty() {
            return validation(format!("sweep needs every scenario constant; missing {}", missing_names(&missing)));
        }
        let sc = &scs[0];
        let p = resolve_scenario(sc, n)?;
        let tag = |mut r: OutputRecord| {
            r = r.with_scenario(sc.label(), Some(sc), &missing);
            r
        };
        let exact = if a.no_exact {
            None
        } else {
            let (v, rec) = exact_record("sweep", &p, a.state, a.quantity)?;
            out.push(tag(rec));
            Some(v)
        };
        let law = match a.quantity {
            CompareQuantity::Cov => asymptotic_covariance(sc, a.state)?,
            CompareQuantity::Corr => asymptotic_correlation(sc, a.state)?,
        };
        let asym = if law.coefficient.is_some() {
            let at = to_f64(&law.at(n).expect("coefficient present"));
            let mut rec = tag(OutputRecord::new("sweep", "").with_params(&p).with_state(a.state)).with_law(&law, Some(n))?;
            rec.quantity = match a.quantity {
                CompareQuantity::Cov => "cov_asympt",
                CompareQuantity::Corr => "corr_asympt",
            }
            .into();
            if let Some(e) = exact {
                rec.deviation = Some(decf((at - e).abs()));
            }
            out.push(rec);
            Some(at)
        } else {
            None
        };
        if a.quantity == CompareQuantity::Corr && a.trials > 0 {
            let seed = a.seed.wrapping_add(k as u64);
            let (e, rec) = mc_record("sweep", &p, a.state, a.trials, seed, a.sampler, a.threads)?;
            let mut rec = tag(rec);
            if let Some(reference) = asym.or(exact) {
                annotate_mc(&mut rec, &e, reference);
            }
            out.push(rec);
        }
    }
    Ok(out)
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> CliResult<Vec<OutputRecord>> {
    match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Asymptotic(a) => cmd_asymptotic(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Renders records in the chosen format.
pub fn render(records: &[OutputRecord], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).map_err(|e| CliError::Invariant(format!("cannot encode CSV: {e}")))?;
            }
            w.into_inner().map_err(|e| CliError::Invariant(format!("cannot encode CSV: {e}")))
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(records)
                .map_err(|e| CliError::Invariant(format!("cannot encode JSON: {e}")))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Writes rendered output to `--out` or to `stdout`.
pub fn emit(bytes: &[u8], out: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code; diagnostics go to `stderr` as a single line.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = run(&cli).and_then(|recs| {
        let bytes = render(&recs, cli.output.format)?;
        emit(&bytes, cli.output.out.as_ref(), stdout)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coaltwo::rational::{int, q};

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("coaltwo").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grids_parse_as_ranges_and_lists() {
        assert_eq!(parse_grid("0:1:5").unwrap(), vec![int(0), q(1, 4), q(1, 2), q(3, 4), int(1)]);
        assert_eq!(parse_grid("1/3, 2 ,5").unwrap(), vec![q(1, 3), int(2), int(5)]);
        assert_eq!(parse_grid("7:9:1").unwrap(), vec![int(7)]);
        for bad in ["", " , ", "0:1:0", "0:1", "a,b", "0:1:x"] {
            assert_eq!(parse_grid(bad).unwrap_err().exit_code(), 2, "{bad:?}");
        }
    }

    #[test]
    fn regimes_follow_the_square_root_threshold() {
        let p = |n, s, r| Parameters::new(n, s, r).unwrap();
        let sc = |p: &Parameters| match match_regime(p, None).unwrap() {
            Regime::Scaled(sc) => sc,
            Regime::Extreme(c) => panic!("unexpected {c:?}"),
        };
        assert_eq!(sc(&p(10_000, q(1, 10_000), q(3, 10_000))), ScalingScenario::I { sigma: int(1), rho: int(3) });
        assert_eq!(sc(&p(10_000, q(1, 2), q(1, 10_000))), ScalingScenario::II { s: q(1, 2), rho: int(1) });
        assert_eq!(sc(&p(10_000, int(0), q(1, 2))), ScalingScenario::III { sigma: int(0), r: q(1, 2) });
        assert_eq!(sc(&p(10_000, q(1, 2), q(1, 2))), ScalingScenario::IV { s: q(1, 2), r: q(1, 2) });
        assert!(matches!(match_regime(&p(9, q(1, 2), int(0)), None), Ok(Regime::Extreme(ExtremeCase::NoRecombination))));
        assert!(matches!(match_regime(&p(9, int(1), q(1, 3)), None), Ok(Regime::Extreme(ExtremeCase::TotalSelfing))));
        let forced = match_regime(&p(100, q(1, 2), q(1, 2)), Some(ScenarioKind::I)).unwrap();
        assert!(matches!(forced, Regime::Scaled(ScalingScenario::I { .. })));
    }

    #[test]
    fn exit_codes_by_failure_kind() {
        assert_eq!(CliError::Validation(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
        assert_eq!(CliError::Invariant(String::new()).exit_code(), 4);
        assert_eq!(call(&["exact", "--N", "1", "--s", "0", "--r", "0", "--state", "q1"]).0, 2);
        assert_eq!(call(&["exact", "--bogus"]).0, 2);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("exact"));
    }

    #[test]
    fn diagnostics_are_a_single_line() {
        let (code, out, err) = call(&["exact", "--N", "3", "--s", "3/2", "--r", "0", "--state", "q1"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.starts_with("error: "));
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn csv_header_lists_every_column() {
        let bytes = render(&[OutputRecord::new("exact", "cov_exact")], Format::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("command,N,s,s_exact,r,r_exact,scenario"));
        assert!(header.ends_with("colocation,formula"));
    }
}
