//! Exact finite-`N` moments of the coalescence times.
//!
//! Single-locus moments have closed forms; joint moments come from the
//! first-step equations of the 13-state chain,
//! `E_q[T_i T_j] = E_q[T_i] + E_q[T_j] - 1 + sum_{q' live} P(q, q') E_{q'}[T_i T_j]`,
//! solved exactly as `(I - P~) E = b` over the twelve live states.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chain::{build_single_locus_matrix, build_two_locus_matrix};
use crate::error::{invalid, Error, Result};
use crate::linalg::{solve_exact, solve_f64};
use crate::model::{colocation_signature, Colocation, Parameters, TwoLocusState};
use crate::rational::{int, signed_sqrt_decimal, to_f64, to_fraction_string, Q};

/// Mean, second moment and variance of one locus' coalescence time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleLocusMoments {
    pub mean: Q,
    pub second_moment: Q,
    pub variance: Q,
}

/// Closed-form single-locus moments for a pair that starts in one
/// individual (`Same`) or in two (`Diff`).
pub fn single_locus_moments(params: &Parameters, c: Colocation) -> Result<SingleLocusMoments> {
    let n = params.n_q();
    let n2 = &n * &n;
    let s = params.s();
    let one = Q::one();
    let (mean, second_moment) = match c {
        Colocation::Same => (
            int(2) * (&one - s) * &n + int(2),
            int(4) * (&one - s) * (int(2) - s) * &n2 + int(10) * (&one - s) * &n + int(6),
        ),
        Colocation::Diff => {
            let t = int(2) - s;
            (
                &t * &n + &one,
                int(2) * &t * &t * &n2 + (int(6) - int(5) * s) * &n + int(3),
            )
        }
        Colocation::Coal => return invalid("moments of an already coalesced pair are identically zero"),
    };
    let variance = &second_moment - &mean * &mean;
    Ok(SingleLocusMoments { mean, second_moment, variance })
}

/// Single-locus moments for both colocations, obtained by solving the
/// first-step equations of the three-state chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleLocusSolution {
    pub same: SingleLocusMoments,
    pub diff: SingleLocusMoments,
}

pub fn solve_single_locus(params: &Parameters) -> Result<SingleLocusSolution> {
    let m = build_single_locus_matrix(params);
    // Transient states are same (1) and diff (2).
    let idx = [1usize, 2];
    let a: Vec<Vec<Q>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| if i == j { Q::one() } else { Q::zero() } - m.entry(i, j)).collect())
        .collect();
    // E[T] = 1 + P E[T];  E[T^2] = 1 + 2 P E[T] + P E[T^2].
    let mean = solve_exact(&a, &[Q::one(), Q::one()])?;
    let b2: Vec<Q> = idx
        .iter()
        .map(|&i| {
            let pm: Q = idx.iter().zip(&mean).map(|(&j, e)| m.entry(i, j) * e).sum();
            Q::one() + int(2) * pm
        })
        .collect();
    let second = solve_exact(&a, &b2)?;
    let pack = |k: usize| SingleLocusMoments {
        mean: mean[k].clone(),
        second_moment: second[k].clone(),
        variance: &second[k] - &mean[k] * &mean[k],
    };
    Ok(SingleLocusSolution { same: pack(0), diff: pack(1) })
}

/// `E_q[T_i T_j]` for each live state `q1..q12`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMomentVector {
    values: Vec<Q>,
}

impl JointMomentVector {
    pub fn get(&self, state: TwoLocusState) -> Result<&Q> {
        if !state.is_live() {
            return invalid(format!("{state} is not a live state"));
        }
        Ok(&self.values[state.index()])
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }
}

/// Per-locus means `(E_q[T_i], E_q[T_j])` of a live state.
pub fn locus_means(params: &Parameters, state: TwoLocusState) -> Result<(Q, Q)> {
    let (ci, cj) = colocation_signature(state)?;
    Ok((single_locus_moments(params, ci)?.mean, single_locus_moments(params, cj)?.mean))
}

/// Per-locus variances `(Var_q[T_i], Var_q[T_j])` of a live state.
pub fn locus_variances(params: &Parameters, state: TwoLocusState) -> Result<(Q, Q)> {
    let (ci, cj) = colocation_signature(state)?;
    Ok((single_locus_moments(params, ci)?.variance, single_locus_moments(params, cj)?.variance))
}

/// The live system `(I - P~, b)` together with the mean products `m_q`.
type LiveSystem = (Vec<Vec<Q>>, Vec<Q>, Vec<Q>);

fn live_system(params: &Parameters) -> Result<LiveSystem> {
    let m = build_two_locus_matrix(params)?;
    let a: Vec<Vec<Q>> = (0..12)
        .map(|i| {
            (0..12)
                .map(|j| if i == j { Q::one() } else { Q::zero() } - m.entry(i, j))
                .collect()
        })
        .collect();
    let mut b = Vec::with_capacity(12);
    let mut prod = Vec::with_capacity(12);
    for st in TwoLocusState::LIVE {
        let (mi, mj) = locus_means(params, st)?;
        b.push(&mi + &mj - Q::one());
        prod.push(mi * mj);
    }
    Ok((a, b, prod))
}

/// Solves for every `E_q[T_i T_j]` exactly.
pub fn solve_joint_moments(params: &Parameters) -> Result<JointMomentVector> {
    let (a, b, _) = live_system(params)?;
    let values = solve_exact(&a, &b)?;
    if let Some(v) = values.iter().find(|v| !v.is_positive()) {
        return Err(Error::Invariant(format!(
            "nonpositive joint moment {} at {params}",
            to_fraction_string(v)
        )));
    }
    Ok(JointMomentVector { values })
}

/// Exact covariances `Cov_q[T_i, T_j]` for all live states, in order.
pub fn exact_covariances(params: &Parameters) -> Result<Vec<Q>> {
    let e = solve_joint_moments(params)?;
    TwoLocusState::LIVE
        .iter()
        .map(|&st| {
            let (mi, mj) = locus_means(params, st)?;
            Ok(e.get(st)? - mi * mj)
        })
        .collect()
}

/// `Cov_q[T_i, T_j] = E_q[T_i T_j] - E_q[T_i] E_q[T_j]`.
pub fn exact_covariance(params: &Parameters, state: TwoLocusState) -> Result<Q> {
    if !state.is_live() {
        return invalid(format!("{state} is not a live state"));
    }
    Ok(exact_covariances(params)?.swap_remove(state.index()))
}

/// An exact correlation coefficient.
///
/// When both loci have the same colocation the correlation is the rational
/// `cov / var`. Otherwise it is irrational in general and is certified by
/// the exact pair `(cov^2, var_i * var_j)` with the sign of `cov`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactCorrelation {
    #[serde(serialize_with = "ser_q")]
    pub covariance: Q,
    #[serde(serialize_with = "ser_q")]
    pub variance_i: Q,
    #[serde(serialize_with = "ser_q")]
    pub variance_j: Q,
    /// The correlation when it is rational.
    #[serde(serialize_with = "ser_opt_q")]
    pub rational: Option<Q>,
    /// `corr^2 = cov^2 / (var_i var_j)`, always exact.
    #[serde(serialize_with = "ser_q")]
    pub squared: Q,
    /// The correlation to 50 significant digits.
    pub decimal: String,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_fraction_string(x))
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&to_fraction_string(v)),
        None => s.serialize_none(),
    }
}

impl ExactCorrelation {
    pub fn from_parts(covariance: Q, variance_i: Q, variance_j: Q) -> Result<Self> {
        if !variance_i.is_positive() || !variance_j.is_positive() {
            return Err(Error::Degenerate("zero variance".into()));
        }
        let denom = &variance_i * &variance_j;
        let squared = &covariance * &covariance / &denom;
        let rational = (variance_i == variance_j).then(|| &covariance / &variance_i);
        let decimal = match &rational {
            Some(v) => crate::rational::to_sig_decimal(v, 50),
            None => signed_sqrt_decimal(covariance.is_negative(), &squared, 50),
        };
        Ok(ExactCorrelation { covariance, variance_i, variance_j, rational, squared, decimal })
    }

    /// Nearest `f64` value.
    pub fn value(&self) -> f64 {
        match &self.rational {
            Some(v) => to_f64(v),
            None => {
                let m = to_f64(&self.squared).sqrt();
                if self.covariance.is_negative() {
                    -m
                } else {
                    m
                }
            }
        }
    }
}

/// `Corr_q = Cov_q / sqrt(Var_i Var_j)` with per-locus variances chosen by
/// the state's colocation.
pub fn exact_correlation(params: &Parameters, state: TwoLocusState) -> Result<ExactCorrelation> {
    let cov = exact_covariance(params, state)?;
    let (vi, vj) = locus_variances(params, state)?;
    ExactCorrelation::from_parts(cov, vi, vj)
}

/// Floating-point joint moments for large `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMoments {
    /// `E_q[T_i T_j]`, live states in order.
    pub joint: Vec<f64>,
    /// `Cov_q[T_i, T_j]`, live states in order.
    pub covariance: Vec<f64>,
    /// Relative residual of the solved system.
    pub residual: f64,
}

/// Largest relative residual the floating-point path accepts.
pub const F64_RESIDUAL_TOLERANCE: f64 = 1e-12;

const REFINEMENT_STEPS: usize = 4;

/// Solves for the covariances in double precision.
///
/// The system is centred before leaving exact arithmetic: with `m_q` the
/// product of the per-locus means, the covariance vector satisfies
/// `(I - P~) C = b - (I - P~) m`. Both the matrix and this right-hand side
/// are formed exactly and only then rounded, so the solve never subtracts
/// two nearly equal `O(N^2)` quantities. The reported residual
/// `max|rhs - (I - P~) C| / max|rhs|` is evaluated exactly.
pub fn solve_joint_moments_f64(params: &Parameters) -> Result<FloatMoments> {
    let (a, b, prod) = live_system(params)?;
    let rhs: Vec<Q> = (0..12)
        .map(|i| {
            let am: Q = a[i].iter().zip(&prod).map(|(x, y)| x * y).sum();
            &b[i] - am
        })
        .collect();
    let af: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let rhs_max = rhs.iter().map(|v| to_f64(v).abs()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    // Solve, then refine with residuals formed in exact arithmetic.
    let mut covariance = vec![0.0; 12];
    let mut residual = f64::INFINITY;
    for _ in 0..REFINEMENT_STEPS {
        let res: Vec<Q> = (0..12)
            .map(|i| {
                let ax: Q = a[i]
                    .iter()
                    .zip(&covariance)
                    .map(|(p, x)| p * Q::from_float(*x).expect("finite iterate"))
                    .sum();
                &rhs[i] - ax
            })
            .collect();
        let rf: Vec<f64> = res.iter().map(to_f64).collect();
        residual = rf.iter().fold(0.0f64, |m, v| m.max(v.abs())) / rhs_max;
        if residual <= F64_RESIDUAL_TOLERANCE * 1e-3 {
            break;
        }
        let (delta, _) = solve_f64(&af, &rf)?;
        for (c, d) in covariance.iter_mut().zip(delta) {
            *c += d;
        }
    }
    if residual.is_nan() || residual > F64_RESIDUAL_TOLERANCE {
        return Err(Error::Invariant(format!(
            "floating-point solve residual {residual:e} exceeds {F64_RESIDUAL_TOLERANCE:e} at {params}"
        )));
    }
    let joint = covariance.iter().zip(&prod).map(|(c, m)| c + to_f64(m)).collect();
    Ok(FloatMoments { joint, covariance, residual })
}

/// Floating-point covariance of one live state.
pub fn exact_covariance_f64(params: &Parameters, state: TwoLocusState) -> Result<f64> {
    if !state.is_live() {
        return invalid(format!("{state} is not a live state"));
    }
    Ok(solve_joint_moments_f64(params)?.covariance[state.index()])
}

/// Floating-point correlation of one live state.
pub fn exact_correlation_f64(params: &Parameters, state: TwoLocusState) -> Result<f64> {
    let cov = exact_covariance_f64(params, state)?;
    let (vi, vj) = locus_variances(params, state)?;
    Ok(cov / (to_f64(&vi) * to_f64(&vj)).sqrt())
}
