//! Seeded Monte Carlo estimation of the coalescence-time correlation.
//!
//! Every trial draws from its own ChaCha8 stream, selected by the trial
//! index from a single master seed, so results do not depend on how trials
//! are scheduled. Trials are grouped into `floor(sqrt(M))` contiguous
//! batches; batches may run in parallel, and their exact integer sums are
//! combined associatively. The standard error comes from the spread of the
//! per-batch Pearson estimates (batch means).

mod generative;
mod sampler;

pub use generative::GenerativeModel;
pub use sampler::MatrixSampler;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::build_extended_matrix;
use crate::error::{invalid, Result};
use crate::model::{Parameters, TwoLocusState};

/// Hard limit on the generations of a single trial.
pub const STEP_CAP: u64 = 1_000_000_000;

/// Coalescence times at the two loci, in generations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TrialOutcome {
    pub t_i: u64,
    pub t_j: u64,
}

/// The random stream of one trial.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// One trial of the matrix-driven walk. Builds the sampling tables on every
/// call; use [`MatrixSampler`] directly for repeated trials.
pub fn run_trial(params: &Parameters, start: TwoLocusState, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    MatrixSampler::new(params)?.run_trial(start, rng)
}

/// One trial of the lineage tracer.
pub fn run_trial_generative(params: &Parameters, start: TwoLocusState, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    GenerativeModel::new(params).run_trial(start, rng)
}

/// Which simulator produces the trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sampler {
    /// Walk on the 17-state transition matrix.
    Matrix,
    /// Lineage tracing under the reproduction rules.
    Generative,
}

/// How batches are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// A dedicated pool of this many worker threads. Without the `parallel`
    /// feature this runs sequentially.
    Parallel { threads: usize },
}

impl Execution {
    pub fn with_threads(threads: usize) -> Self {
        if threads <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel { threads }
        }
    }
}

/// Runs `f` over `0..count` under the chosen execution, preserving order.
fn run_indexed<T, F>(exec: Execution, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| crate::error::Error::Invariant(format!("cannot start thread pool: {e}")))?;
            pool.install(|| (0..count).into_par_iter().map(f).collect())
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => (0..count).map(f).collect(),
    }
}

/// Exact integer accumulators of a sample of `(T_i, T_j)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Sums {
    pub count: u64,
    pub t_i: u128,
    pub t_j: u128,
    pub t_i2: u128,
    pub t_j2: u128,
    pub t_ij: u128,
}

impl Sums {
    pub fn add(&mut self, o: TrialOutcome) {
        let (x, y) = (o.t_i as u128, o.t_j as u128);
        self.count += 1;
        self.t_i += x;
        self.t_j += y;
        self.t_i2 += x * x;
        self.t_j2 += y * y;
        self.t_ij += x * y;
    }

    pub fn merge(&mut self, other: &Sums) {
        self.count += other.count;
        self.t_i += other.t_i;
        self.t_j += other.t_j;
        self.t_i2 += other.t_i2;
        self.t_j2 += other.t_j2;
        self.t_ij += other.t_ij;
    }

    /// `(M sum xy - sum x sum y, M sum x^2 - (sum x)^2, M sum y^2 - (sum y)^2)`,
    /// exactly.
    pub fn centred(&self) -> (i128, i128, i128) {
        let m = self.count as i128;
        let (sx, sy) = (self.t_i as i128, self.t_j as i128);
        (
            m * self.t_ij as i128 - sx * sy,
            m * self.t_i2 as i128 - sx * sx,
            m * self.t_j2 as i128 - sy * sy,
        )
    }

    /// Pearson correlation, or `None` if either sample has zero variance.
    ///
    /// The numerator and both variance factors are exact integers; only
    /// the final ratio is rounded.
    pub fn pearson(&self) -> Option<f64> {
        let (num, dx, dy) = self.centred();
        if dx <= 0 || dy <= 0 {
            return None;
        }
        let v = if dx == dy {
            num as f64 / dx as f64
        } else {
            num as f64 / ((dx as f64).sqrt() * (dy as f64).sqrt())
        };
        Some(v.clamp(-1.0, 1.0))
    }

    pub fn mean_i(&self) -> f64 {
        self.t_i as f64 / self.count as f64
    }

    pub fn mean_j(&self) -> f64 {
        self.t_j as f64 / self.count as f64
    }
}

/// A Monte Carlo correlation estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    /// `None` when the sample is degenerate (zero variance at a locus).
    pub pearson: Option<f64>,
    pub trials: u64,
    pub sums: Sums,
    /// Batch-means standard error; `None` when fewer than two batches have
    /// a defined Pearson estimate.
    pub std_error: Option<f64>,
    pub batches: u64,
    pub seed: u64,
}

/// Contiguous trial ranges of the `floor(sqrt(M))` batches, the remainder
/// spread one trial each over the first batches.
pub fn batch_ranges(trials: u64) -> Vec<std::ops::Range<u64>> {
    let b = (trials as f64).sqrt().floor() as u64;
    let b = b.max(1);
    // Correct any rounding in the square root.
    let b = if (b + 1) * (b + 1) <= trials { b + 1 } else if b * b > trials { b - 1 } else { b };
    let (base, extra) = (trials / b, trials % b);
    let mut out = Vec::with_capacity(b as usize);
    let mut lo = 0;
    for k in 0..b {
        let len = base + u64::from(k < extra);
        out.push(lo..lo + len);
        lo += len;
    }
    out
}

/// Runs `trials` independent trials from `start` and estimates the Pearson
/// correlation of `(T_i, T_j)`.
///
/// The result is a deterministic function of `(params, start, trials,
/// master_seed, sampler)`; the execution mode only changes speed.
pub fn estimate_correlation(
    params: &Parameters,
    start: TwoLocusState,
    trials: u64,
    master_seed: u64,
    sampler: Sampler,
    exec: Execution,
) -> Result<CorrelationEstimate> {
    if trials < 2 {
        return invalid(format!("at least 2 trials are needed, got {trials}"));
    }
    if !start.is_live() {
        return invalid(format!("trials must start from a live state, got {start}"));
    }
    let matrix = match sampler {
        Sampler::Matrix => Some(MatrixSampler::new(params)?),
        Sampler::Generative => None,
    };
    let generative = GenerativeModel::new(params);
    let ranges = batch_ranges(trials);
    let batches = run_indexed(exec, ranges.len(), |b| {
        let mut sums = Sums::default();
        for k in ranges[b].clone() {
            let mut rng = trial_rng(master_seed, k);
            let o = match &matrix {
                Some(m) => m.run_trial(start, &mut rng)?,
                None => generative.run_trial(start, &mut rng)?,
            };
            sums.add(o);
        }
        Ok(sums)
    })?;
    let mut total = Sums::default();
    for b in &batches {
        total.merge(b);
    }
    let per_batch: Vec<f64> = batches.iter().filter_map(Sums::pearson).collect();
    let std_error = (per_batch.len() >= 2).then(|| {
        let k = per_batch.len() as f64;
        let mean = per_batch.iter().sum::<f64>() / k;
        let var = per_batch.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    });
    Ok(CorrelationEstimate {
        pearson: total.pearson(),
        trials,
        sums: total,
        std_error,
        batches: ranges.len() as u64,
        seed: master_seed,
    })
}

/// Empirical one-generation transition frequencies over the 17 states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneStepEstimate {
    pub trials: u64,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    /// Binomial standard errors `sqrt(p (1 - p) / M)`.
    pub std_errors: Vec<f64>,
}

/// Smallest sample accepted by [`one_step_empirical`].
pub const ONE_STEP_MIN_TRIALS: u64 = 10_000;

/// Draws `trials` single generations of the lineage tracer from `start` and
/// tabulates the resulting states.
pub fn one_step_empirical(
    params: &Parameters,
    start: TwoLocusState,
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<OneStepEstimate> {
    if trials < ONE_STEP_MIN_TRIALS {
        return invalid(format!("at least {ONE_STEP_MIN_TRIALS} trials are needed, got {trials}"));
    }
    if !start.is_live() {
        return invalid(format!("one-step draws must start from a live state, got {start}"));
    }
    let g = GenerativeModel::new(params);
    let ranges = batch_ranges(trials);
    let parts = run_indexed(exec, ranges.len(), |b| {
        let mut counts = [0u64; 17];
        for k in ranges[b].clone() {
            counts[g.one_step(start, &mut trial_rng(master_seed, k)).index()] += 1;
        }
        Ok(counts)
    })?;
    let mut counts = vec![0u64; 17];
    for p in &parts {
        for (c, v) in counts.iter_mut().zip(p) {
            *c += v;
        }
    }
    let m = trials as f64;
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / m).collect();
    let std_errors = frequencies.iter().map(|p| (p * (1.0 - p) / m).sqrt()).collect();
    Ok(OneStepEstimate { trials, counts, frequencies, std_errors })
}

/// Checks an empirical one-step row against the exact 17-state row; returns
/// the largest `|freq - p| / se` (with `se` floored at the binomial error of
/// a single count).
pub fn one_step_z_max(params: &Parameters, start: TwoLocusState, est: &OneStepEstimate) -> Result<f64> {
    let m = build_extended_matrix(params)?;
    let floor = 1.0 / est.trials as f64;
    let mut worst: f64 = 0.0;
    for j in 0..17 {
        let p = crate::rational::to_f64(m.entry(start.index(), j));
        let se = (p * (1.0 - p) / est.trials as f64).sqrt().max(floor);
        worst = worst.max((est.frequencies[j] - p).abs() / se);
    }
    Ok(worst)
}
