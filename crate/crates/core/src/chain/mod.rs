//! Transition matrices: the single-locus chain, the 13-state two-locus
//! chain, the 17-state chain with split coalescent substates, and the
//! published special-case and limit tables.

pub mod config;
pub mod enumerate;
pub mod tables;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::expr::{eval_str, Env};
use crate::model::{Parameters, TwoLocusState};
use crate::rational::{parse_rational, q, to_f64, to_fraction_string, Q};

pub use tables::{Erratum, Table, ERRATA};

/// Labels of the single-locus chain.
pub const SINGLE_LOCUS_LABELS: [&str; 3] = ["coal", "same", "diff"];

/// Labels of the 13-state chain: `q1..q12`, then the aggregate `q0`.
pub const TWO_LOCUS_LABELS: [&str; 13] =
    ["q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10", "q11", "q12", "q0"];

/// Column of the aggregate absorbing state in the 13-state chain.
pub const Q0: usize = 12;

/// Square matrix of exact transition probabilities.
///
/// Rows are the current state and columns the state one generation further
/// back in time.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<Q>>,
}

impl TransitionMatrix {
    /// Builds and validates: square shape, entries in `[0,1]`, rows summing
    /// to exactly one. Errors name the offending row.
    pub fn new(labels: Vec<String>, entries: Vec<Vec<Q>>) -> Result<Self> {
        let m = Self::unchecked(labels, entries)?;
        m.check_stochastic()?;
        Ok(m)
    }

    /// Builds without the stochastic checks, for inspecting printed tables
    /// that may contain misprints. The shape is still checked.
    pub fn unchecked(labels: Vec<String>, entries: Vec<Vec<Q>>) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invariant(format!("matrix is not {n}x{n}")));
        }
        Ok(TransitionMatrix { labels, entries })
    }

    pub fn check_stochastic(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_negative() || *x > Q::one() {
                    return Err(Error::Invariant(format!(
                        "entry ({} -> {}) = {} lies outside [0,1]",
                        self.labels[i],
                        self.labels[j],
                        to_fraction_string(x)
                    )));
                }
            }
            let sum: Q = row.iter().cloned().sum();
            if !sum.is_one() {
                return Err(Error::Invariant(format!(
                    "row {} sums to {} instead of 1",
                    self.labels[i],
                    to_fraction_string(&sum)
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.entries[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.entries[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Entry by row and column label. Panics on unknown labels.
    pub fn get(&self, from: &str, to: &str) -> &Q {
        let i = self.index_of(from).unwrap_or_else(|| panic!("no state {from}"));
        let j = self.index_of(to).unwrap_or_else(|| panic!("no state {to}"));
        &self.entries[i][j]
    }

    /// Row sums, exactly.
    pub fn row_sums(&self) -> Vec<Q> {
        self.entries.iter().map(|r| r.iter().cloned().sum()).collect()
    }

    /// Round-to-nearest floating-point mirror.
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }

    /// `{"states": [...], "entries": [["num/den", ...], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "states": self.labels,
            "entries": self
                .entries
                .iter()
                .map(|r| r.iter().map(to_fraction_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Validation("malformed matrix JSON".into());
        let labels: Vec<String> = v["states"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let entries: Vec<Vec<Q>> = v["entries"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| parse_rational(x.as_str().ok_or_else(bad)?))
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<_>>()?;
        Self::unchecked(labels, entries)
    }

    /// Collapses the five coalescent substates of a 17-state matrix into the
    /// single absorbing state `q0`, giving a 13-state matrix.
    pub fn collapse_substates(&self) -> Result<TransitionMatrix> {
        if self.dim() != 17 {
            return invalid("collapse expects the 17-state matrix");
        }
        let mut rows = Vec::with_capacity(13);
        for i in 0..12 {
            let mut row: Vec<Q> = self.entries[i][..12].to_vec();
            row.push(self.entries[i][12..].iter().cloned().sum());
            rows.push(row);
        }
        rows.push(unit_row(13, Q0));
        Self::unchecked(labels13(), rows)
    }

    /// The transient block (live states to live states) of a 13- or
    /// 17-state matrix.
    pub fn live_block(&self) -> Vec<Vec<Q>> {
        self.entries[..12].iter().map(|r| r[..12].to_vec()).collect()
    }
}

fn labels13() -> Vec<String> {
    TWO_LOCUS_LABELS.iter().map(|s| s.to_string()).collect()
}

fn labels17() -> Vec<String> {
    TwoLocusState::ALL.iter().map(|s| s.name().to_string()).collect()
}

fn unit_row(n: usize, at: usize) -> Vec<Q> {
    (0..n).map(|j| if j == at { Q::one() } else { Q::zero() }).collect()
}

fn table_env(params: &Parameters) -> Env {
    let mut env = Env::new();
    env.insert("N", params.n_q());
    env.insert("s", params.s().clone());
    env.insert("r", params.r().clone());
    env.insert("R", params.big_r());
    env
}

/// The single-locus chain over `{coal, same, diff}`.
pub fn build_single_locus_matrix(params: &Parameters) -> TransitionMatrix {
    let one = Q::one();
    let s = params.s().clone();
    let inv2n = Q::one() / (params.n_q() * q(2, 1));
    let rows = vec![
        vec![one.clone(), Q::zero(), Q::zero()],
        vec![&s / q(2, 1), &s / q(2, 1), &one - &s],
        vec![inv2n.clone(), inv2n.clone(), &one - &inv2n * q(2, 1)],
    ];
    TransitionMatrix::new(SINGLE_LOCUS_LABELS.iter().map(|s| s.to_string()).collect(), rows)
        .expect("single-locus rows are stochastic for valid parameters")
}

fn evaluate_table(table: Table, params: &Parameters, corrected: bool) -> Result<TransitionMatrix> {
    let env = table_env(params);
    let mut rows = Vec::with_capacity(13);
    for row in 1..=12 {
        let mut r = Vec::with_capacity(13);
        for col in 0..13 {
            r.push(eval_str(tables::entry(table, row, col, corrected), &env)?);
        }
        rows.push(r);
    }
    rows.push(unit_row(13, Q0));
    TransitionMatrix::unchecked(labels13(), rows)
}

/// The 13-state chain `q1..q12, q0` from the general published table, with
/// the entries listed in [`ERRATA`] corrected.
///
/// Fails, naming the row, if any entry is negative or a row does not sum
/// to one; rows are never renormalised.
pub fn build_two_locus_matrix(params: &Parameters) -> Result<TransitionMatrix> {
    let m = evaluate_table(Table::General, params, true)?;
    m.check_stochastic()?;
    Ok(m)
}

/// The general table exactly as printed, without corrections or checks.
pub fn printed_two_locus_matrix(params: &Parameters) -> Result<TransitionMatrix> {
    evaluate_table(Table::General, params, false)
}

/// The three published special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    /// `s = 1`.
    TotalSelfing,
    /// `r = 0`.
    NoRecombination,
    /// `r = 1/2`.
    FreeRecombination,
}

impl SpecialCase {
    pub fn table(self) -> Table {
        match self {
            SpecialCase::TotalSelfing => Table::TotalSelfing,
            SpecialCase::NoRecombination => Table::NoRecombination,
            SpecialCase::FreeRecombination => Table::FreeRecombination,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::TotalSelfing => "total_selfing",
            SpecialCase::NoRecombination => "no_recombination",
            SpecialCase::FreeRecombination => "free_recombination",
        }
    }

    fn check(self, params: &Parameters) -> Result<()> {
        let ok = match self {
            SpecialCase::TotalSelfing => params.s().is_one(),
            SpecialCase::NoRecombination => params.r().is_zero(),
            SpecialCase::FreeRecombination => *params.r() == q(1, 2),
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("parameters {params} do not match the {} case", self.name()))
        }
    }
}

/// The hard-coded special-case table (errata applied).
pub fn appendix_reference_matrix(case: SpecialCase, params: &Parameters) -> Result<TransitionMatrix> {
    case.check(params)?;
    let m = evaluate_table(case.table(), params, true)?;
    m.check_stochastic()?;
    Ok(m)
}

/// The special-case table exactly as printed, without corrections or checks.
pub fn printed_reference_matrix(case: SpecialCase, params: &Parameters) -> Result<TransitionMatrix> {
    case.check(params)?;
    evaluate_table(case.table(), params, false)
}

/// The published `N -> infinity` limit of a special-case table.
///
/// `x` is `r` for total selfing and `s` for the other two cases.
pub fn limit_matrix(case: SpecialCase, x: &Q) -> Result<TransitionMatrix> {
    if x.is_negative() || *x > Q::one() {
        return invalid(format!("case parameter {} outside [0,1]", to_fraction_string(x)));
    }
    let (table, var) = match case {
        SpecialCase::TotalSelfing => (&tables::TOTAL_SELFING_LIMIT, "r"),
        SpecialCase::NoRecombination => (&tables::NO_RECOMBINATION_LIMIT, "s"),
        SpecialCase::FreeRecombination => (&tables::FREE_RECOMBINATION_LIMIT, "s"),
    };
    let mut env = Env::new();
    env.insert(var, x.clone());
    let mut rows = Vec::with_capacity(13);
    for sparse in table.iter() {
        let mut row = vec![Q::zero(); 13];
        for &(col, f) in sparse.iter() {
            row[col] = eval_str(f, &env)?;
        }
        rows.push(row);
    }
    rows.push(unit_row(13, Q0));
    TransitionMatrix::new(labels13(), rows)
}

/// The 17-state chain: live states plus the five coalescent substates.
///
/// Live rows come from the exact enumeration of the reproduction rules; the
/// one-locus-left rows embed the single-locus chain. The result is checked
/// to collapse exactly onto [`build_two_locus_matrix`].
pub fn build_extended_matrix(params: &Parameters) -> Result<TransitionMatrix> {
    use TwoLocusState::*;
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(17);
    for st in TwoLocusState::LIVE {
        rows.push(enumerate::one_step_distribution(params, st).to_vec());
    }
    let single = build_single_locus_matrix(params);
    // Single-locus rows are indexed coal=0, same=1, diff=2.
    let embed = |same_state: TwoLocusState, diff_state: TwoLocusState, from: usize| -> Vec<Q> {
        let mut row = vec![Q::zero(); 17];
        row[Both.index()] = single.entry(from, 0).clone();
        row[same_state.index()] = single.entry(from, 1).clone();
        row[diff_state.index()] = single.entry(from, 2).clone();
        row
    };
    rows.push(unit_row(17, Both.index()));
    rows.push(embed(OneLeftISame, OneLeftIDiff, 2));
    rows.push(embed(OneLeftISame, OneLeftIDiff, 1));
    rows.push(embed(OneLeftJSame, OneLeftJDiff, 2));
    rows.push(embed(OneLeftJSame, OneLeftJDiff, 1));
    let m = TransitionMatrix::new(labels17(), rows)?;
    let reference = build_two_locus_matrix(params)?;
    let collapsed = m.collapse_substates()?;
    for (i, from) in TWO_LOCUS_LABELS.iter().enumerate() {
        for (j, to) in TWO_LOCUS_LABELS.iter().enumerate() {
            if collapsed.entry(i, j) != reference.entry(i, j) {
                return Err(Error::Invariant(format!(
                    "extended matrix row {} collapses to {} in column {} but the two-locus table has {}",
                    from,
                    to_fraction_string(collapsed.entry(i, j)),
                    to,
                    to_fraction_string(reference.entry(i, j)),
                )));
            }
        }
    }
    Ok(m)
}
