//! Model parameters, the two-locus state space, and scaling scenarios.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{is_in_unit_interval, to_f64, to_fraction_string, uint, Q};

/// Concrete inputs for one population: `N` diploid individuals, selfing
/// probability `s` and recombination probability `r`, all exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Parameters {
    n: u64,
    s: Q,
    r: Q,
}

impl Parameters {
    pub fn new(n: u64, s: Q, r: Q) -> Result<Self> {
        if n < 2 {
            return invalid(format!("N must be at least 2, got {n}"));
        }
        if !is_in_unit_interval(&s) {
            return invalid(format!("s must lie in [0,1], got {}", to_fraction_string(&s)));
        }
        if !is_in_unit_interval(&r) {
            return invalid(format!("r must lie in [0,1], got {}", to_fraction_string(&r)));
        }
        Ok(Parameters { n, s, r })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn n_q(&self) -> Q {
        uint(self.n)
    }

    pub fn s(&self) -> &Q {
        &self.s
    }

    pub fn r(&self) -> &Q {
        &self.r
    }

    /// `R = (1-r)^2 + r^2`, the chance that an individual's two chromosomes
    /// are both recombinant or both non-recombinant.
    pub fn big_r(&self) -> Q {
        let one = Q::one();
        let a = &one - &self.r;
        &a * &a + &self.r * &self.r
    }

    pub fn s_f64(&self) -> f64 {
        to_f64(&self.s)
    }

    pub fn r_f64(&self) -> f64 {
        to_f64(&self.r)
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={}, s={}, r={}",
            self.n,
            to_fraction_string(&self.s),
            to_fraction_string(&self.r)
        )
    }
}

/// Colocation of the two gene copies at one locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colocation {
    Coal,
    Same,
    Diff,
}

impl Colocation {
    pub fn name(self) -> &'static str {
        match self {
            Colocation::Coal => "coal",
            Colocation::Same => "same",
            Colocation::Diff => "diff",
        }
    }
}

impl FromStr for Colocation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coal" => Ok(Colocation::Coal),
            "same" | "s" => Ok(Colocation::Same),
            "diff" | "d" => Ok(Colocation::Diff),
            _ => invalid(format!("unknown colocation {s:?}")),
        }
    }
}

/// Sampling configuration of the four gene copies.
///
/// The twelve live states follow the fixed order `q1..q12`. The five
/// coalescent substates record what is left once at least one locus has
/// coalesced: `OneLeftI*` means locus `i` is still uncoalesced (locus `j`
/// has coalesced) and the suffix is the colocation of the surviving pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoLocusState {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    Q7,
    Q8,
    Q9,
    Q10,
    Q11,
    Q12,
    Both,
    OneLeftIDiff,
    OneLeftISame,
    OneLeftJDiff,
    OneLeftJSame,
}

use TwoLocusState::*;

impl TwoLocusState {
    pub const LIVE: [TwoLocusState; 12] = [Q1, Q2, Q3, Q4, Q5, Q6, Q7, Q8, Q9, Q10, Q11, Q12];
    pub const SUBSTATES: [TwoLocusState; 5] = [Both, OneLeftIDiff, OneLeftISame, OneLeftJDiff, OneLeftJSame];
    pub const ALL: [TwoLocusState; 17] = [
        Q1,
        Q2,
        Q3,
        Q4,
        Q5,
        Q6,
        Q7,
        Q8,
        Q9,
        Q10,
        Q11,
        Q12,
        Both,
        OneLeftIDiff,
        OneLeftISame,
        OneLeftJDiff,
        OneLeftJSame,
    ];

    /// Position in the 17-state ordering (live states first).
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<TwoLocusState> {
        Self::ALL.get(i).copied()
    }

    pub fn is_live(self) -> bool {
        self.index() < 12
    }

    pub fn name(self) -> &'static str {
        match self {
            Q1 => "q1",
            Q2 => "q2",
            Q3 => "q3",
            Q4 => "q4",
            Q5 => "q5",
            Q6 => "q6",
            Q7 => "q7",
            Q8 => "q8",
            Q9 => "q9",
            Q10 => "q10",
            Q11 => "q11",
            Q12 => "q12",
            Both => "both",
            OneLeftIDiff => "one_left_i_diff",
            OneLeftISame => "one_left_i_same",
            OneLeftJDiff => "one_left_j_diff",
            OneLeftJSame => "one_left_j_same",
        }
    }

    /// Whether locus `i` has not yet coalesced in this state.
    pub fn locus_i_open(self) -> bool {
        !matches!(self, Both | OneLeftJDiff | OneLeftJSame)
    }

    /// Whether locus `j` has not yet coalesced in this state.
    pub fn locus_j_open(self) -> bool {
        !matches!(self, Both | OneLeftIDiff | OneLeftISame)
    }

    /// Image under relabelling the loci (`i` <-> `j`).
    pub fn swap_loci(self) -> TwoLocusState {
        match self {
            Q2 => Q3,
            Q3 => Q2,
            Q8 => Q9,
            Q9 => Q8,
            OneLeftIDiff => OneLeftJDiff,
            OneLeftJDiff => OneLeftIDiff,
            OneLeftISame => OneLeftJSame,
            OneLeftJSame => OneLeftISame,
            other => other,
        }
    }
}

impl fmt::Display for TwoLocusState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwoLocusState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        TwoLocusState::ALL
            .iter()
            .copied()
            .find(|st| st.name() == lower)
            .ok_or_else(|| Error::Validation(format!("unknown state {s:?} (expected q1..q12)")))
    }
}

/// Colocation of the locus-`i` pair and the locus-`j` pair in a live state.
pub fn colocation_signature(state: TwoLocusState) -> Result<(Colocation, Colocation)> {
    use Colocation::{Diff as D, Same as S};
    Ok(match state {
        Q1 | Q4 | Q6 | Q7 | Q10 | Q11 => (D, D),
        Q2 | Q8 => (S, D),
        Q3 | Q9 => (D, S),
        Q5 | Q12 => (S, S),
        other => return invalid(format!("{other} is not a live state")),
    })
}

/// How selfing and recombination scale with `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalingScenario {
    /// `s = sigma/N`, `r = rho/N`.
    I { sigma: Q, rho: Q },
    /// `s` constant, `r = rho/N`.
    II { s: Q, rho: Q },
    /// `s = sigma/N`, `r` constant.
    III { sigma: Q, r: Q },
    /// `s` and `r` constant.
    IV { s: Q, r: Q },
}

impl ScalingScenario {
    pub fn label(&self) -> &'static str {
        match self {
            ScalingScenario::I { .. } => "i",
            ScalingScenario::II { .. } => "ii",
            ScalingScenario::III { .. } => "iii",
            ScalingScenario::IV { .. } => "iv",
        }
    }

    /// Checks the asymptotic domain: `s` in `[0,1)`, `r` in `(0,1]`, and
    /// `sigma`, `rho` strictly positive.
    pub fn validate(&self) -> Result<()> {
        self.check(false)
    }

    /// As [`validate`](Self::validate) but also admits the endpoints
    /// `sigma = 0` and `rho = 0`, where the closed forms remain finite.
    pub fn validate_closure(&self) -> Result<()> {
        self.check(true)
    }

    fn check(&self, closed: bool) -> Result<()> {
        let pos = |name: &str, x: &Q| -> Result<()> {
            if x.is_negative() || (!closed && x.is_zero()) {
                let bound = if closed { ">= 0" } else { "> 0" };
                return invalid(format!("{name} must be {bound}, got {}", to_fraction_string(x)));
            }
            Ok(())
        };
        let s_ok = |s: &Q| -> Result<()> {
            if s.is_negative() || *s >= Q::one() {
                return invalid(format!("s must lie in [0,1), got {}", to_fraction_string(s)));
            }
            Ok(())
        };
        let r_ok = |r: &Q| -> Result<()> {
            if !r.is_positive() || *r > Q::one() {
                return invalid(format!("r must lie in (0,1], got {}", to_fraction_string(r)));
            }
            Ok(())
        };
        match self {
            ScalingScenario::I { sigma, rho } => {
                pos("sigma", sigma)?;
                pos("rho", rho)
            }
            ScalingScenario::II { s, rho } => {
                s_ok(s)?;
                pos("rho", rho)
            }
            ScalingScenario::III { sigma, r } => {
                pos("sigma", sigma)?;
                r_ok(r)
            }
            ScalingScenario::IV { s, r } => {
                s_ok(s)?;
                r_ok(r)
            }
        }
    }
}

/// Concrete `(N, s, r)` for a scenario at population size `N`, exactly.
///
/// Refuses (never clamps) any `N` that would put `s` or `r` outside `[0,1]`.
pub fn resolve_scenario(scenario: &ScalingScenario, n: u64) -> Result<Parameters> {
    if n < 2 {
        return invalid(format!("N must be at least 2, got {n}"));
    }
    let nq = uint(n);
    let (s, r) = match scenario {
        ScalingScenario::I { sigma, rho } => (sigma / &nq, rho / &nq),
        ScalingScenario::II { s, rho } => (s.clone(), rho / &nq),
        ScalingScenario::III { sigma, r } => (sigma / &nq, r.clone()),
        ScalingScenario::IV { s, r } => (s.clone(), r.clone()),
    };
    Parameters::new(n, s, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn resolve_examples() {
        let p = resolve_scenario(&ScalingScenario::I { sigma: int(1), rho: int(1) }, 100).unwrap();
        assert_eq!((p.s().clone(), p.r().clone()), (q(1, 100), q(1, 100)));
        let p = resolve_scenario(&ScalingScenario::IV { s: q(1, 2), r: q(1, 2) }, 7).unwrap();
        assert_eq!((p.s().clone(), p.r().clone()), (q(1, 2), q(1, 2)));
        assert!(resolve_scenario(&ScalingScenario::III { sigma: int(3), r: q(1, 2) }, 2).is_err());
        assert!(resolve_scenario(&ScalingScenario::IV { s: q(1, 2), r: q(1, 2) }, 1).is_err());
    }

    #[test]
    fn colocation_table_matches_configurations() {
        use Colocation::{Diff as D, Same as S};
        let expected = [
            (Q1, (D, D)),
            (Q2, (S, D)),
            (Q3, (D, S)),
            (Q4, (D, D)),
            (Q5, (S, S)),
            (Q6, (D, D)),
            (Q7, (D, D)),
            (Q8, (S, D)),
            (Q9, (D, S)),
            (Q10, (D, D)),
            (Q11, (D, D)),
            (Q12, (S, S)),
        ];
        for (st, sig) in expected {
            assert_eq!(colocation_signature(st).unwrap(), sig, "{st}");
        }
        for st in TwoLocusState::SUBSTATES {
            assert!(colocation_signature(st).is_err());
        }
    }

    #[test]
    fn state_names_round_trip() {
        for st in TwoLocusState::ALL {
            assert_eq!(st.name().parse::<TwoLocusState>().unwrap(), st);
            assert_eq!(TwoLocusState::from_index(st.index()), Some(st));
            assert_eq!(st.swap_loci().swap_loci(), st);
        }
        assert!("q13".parse::<TwoLocusState>().is_err());
    }

    #[test]
    fn parameter_domain() {
        assert!(Parameters::new(2, q(0, 1), q(1, 1)).is_ok());
        assert!(Parameters::new(1, q(0, 1), q(0, 1)).is_err());
        assert!(Parameters::new(5, q(3, 2), q(0, 1)).is_err());
        assert!(Parameters::new(5, q(1, 2), q(-1, 2)).is_err());
    }

    #[test]
    fn scenario_domains() {
        assert!(ScalingScenario::III { sigma: int(0), r: q(1, 2) }.validate().is_err());
        assert!(ScalingScenario::III { sigma: int(0), r: q(1, 2) }.validate_closure().is_ok());
        assert!(ScalingScenario::IV { s: int(1), r: q(1, 2) }.validate().is_err());
        assert!(ScalingScenario::IV { s: int(0), r: int(0) }.validate().is_err());
        assert!(ScalingScenario::II { s: q(1, 2), rho: int(3) }.validate().is_ok());
    }
}
