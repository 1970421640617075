//! The matrix-driven sampler: a walk on the 17-state chain.

use num_traits::One;
use rand::Rng;

use crate::chain::{build_extended_matrix, TransitionMatrix};
use crate::error::{invalid, Error, Result};
use crate::model::{Parameters, TwoLocusState};
use crate::rational::{to_f64, Q};

use super::{TrialOutcome, STEP_CAP};

/// Per-state sampling tables derived from the exact 17-state matrix.
#[derive(Debug, Clone)]
pub struct MatrixSampler {
    /// Cumulative row distributions, last entry forced to 1.
    row_cdf: Vec<[f64; 17]>,
    /// `1 - P(q, q)`, rounded from the exact value.
    leave: [f64; 17],
    /// `ln(1 - leave)`, the log of the stay probability.
    ln_stay: [f64; 17],
    /// Distribution of the next state given that the walk leaves.
    exit_cdf: Vec<[f64; 17]>,
}

impl MatrixSampler {
    pub fn new(params: &Parameters) -> Result<Self> {
        Ok(Self::from_matrix(&build_extended_matrix(params)?))
    }

    pub fn from_matrix(m: &TransitionMatrix) -> Self {
        assert_eq!(m.dim(), 17, "the sampler walks the 17-state chain");
        let mut row_cdf = Vec::with_capacity(17);
        let mut exit_cdf = Vec::with_capacity(17);
        let mut leave = [0.0; 17];
        let mut ln_stay = [0.0; 17];
        for i in 0..17 {
            row_cdf.push(cdf((0..17).map(|j| to_f64(m.entry(i, j)))));
            let exit = Q::one() - m.entry(i, i);
            leave[i] = to_f64(&exit);
            ln_stay[i] = (-leave[i]).ln_1p();
            exit_cdf.push(if leave[i] > 0.0 {
                cdf((0..17).map(|j| if j == i { 0.0 } else { to_f64(&(m.entry(i, j) / &exit)) }))
            } else {
                [1.0; 17]
            });
        }
        MatrixSampler { row_cdf, leave, ln_stay, exit_cdf }
    }

    /// One trial, skipping runs of self-transitions with a geometric draw.
    ///
    /// The walk stays in state `q` for `K ~ Geometric(1 - P(q,q))` steps on
    /// `{1, 2, ...}` including the step that leaves, then moves according to
    /// the row conditioned on leaving. This has the same law as stepping one
    /// generation at a time.
    pub fn run_trial<R: Rng + ?Sized>(&self, start: TwoLocusState, rng: &mut R) -> Result<TrialOutcome> {
        check_start(start)?;
        let (mut ti, mut tj) = (0u64, 0u64);
        let mut state = start;
        while state != TwoLocusState::Both {
            let k = state.index();
            let leave = self.leave[k];
            if leave <= 0.0 {
                return Err(Error::Invariant(format!("live state {state} cannot be left")));
            }
            let hold = if leave >= 1.0 {
                1.0
            } else {
                // 1 - u lies in (0, 1], so the logarithm is finite.
                let u: f64 = 1.0 - rng.random::<f64>();
                1.0 + (u.ln() / self.ln_stay[k]).floor()
            };
            if hold.is_nan() || hold > STEP_CAP as f64 {
                return Err(cap_error());
            }
            let hold = hold as u64;
            if state.locus_i_open() {
                ti += hold;
            }
            if state.locus_j_open() {
                tj += hold;
            }
            if ti.max(tj) > STEP_CAP {
                return Err(cap_error());
            }
            state = draw(&self.exit_cdf[k], rng);
        }
        Ok(TrialOutcome { t_i: ti, t_j: tj })
    }

    /// One trial, drawing every generation from the full row.
    pub fn run_trial_stepwise<R: Rng + ?Sized>(&self, start: TwoLocusState, rng: &mut R) -> Result<TrialOutcome> {
        check_start(start)?;
        let (mut ti, mut tj) = (0u64, 0u64);
        let mut state = start;
        let mut steps = 0u64;
        while state != TwoLocusState::Both {
            // Each clock runs while its own locus is uncoalesced.
            if state.locus_i_open() {
                ti += 1;
            }
            if state.locus_j_open() {
                tj += 1;
            }
            steps += 1;
            if steps > STEP_CAP {
                return Err(cap_error());
            }
            state = draw(&self.row_cdf[state.index()], rng);
        }
        Ok(TrialOutcome { t_i: ti, t_j: tj })
    }
}

fn check_start(start: TwoLocusState) -> Result<()> {
    if start.is_live() {
        Ok(())
    } else {
        invalid(format!("trials must start from a live state, got {start}"))
    }
}

fn cap_error() -> Error {
    Error::Invariant(format!("trial exceeded {STEP_CAP} generations"))
}

fn cdf(weights: impl Iterator<Item = f64>) -> [f64; 17] {
    let mut out = [0.0; 17];
    let mut acc = 0.0;
    let mut last = 0;
    for (k, w) in weights.enumerate() {
        acc += w;
        out[k] = acc;
        if w > 0.0 {
            last = k;
        }
    }
    // Absorb rounding so the final reachable state always catches u.
    for v in out.iter_mut().skip(last) {
        *v = 1.0;
    }
    out
}

fn draw<R: Rng + ?Sized>(cdf: &[f64; 17], rng: &mut R) -> TwoLocusState {
    let u: f64 = rng.random();
    let k = cdf.iter().position(|&c| u < c).unwrap_or(16);
    TwoLocusState::ALL[k]
}
