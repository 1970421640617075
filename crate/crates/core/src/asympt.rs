//! Closed-form asymptotic and extreme-case laws.
//!
//! Every formula is stored as text in [`REGISTRY`] under a descriptive id of
//! the form `<quantity>.<scenario or case>.<state>`, so coverage can be
//! audited and each expression diffed against its published form. The
//! quantities are:
//!
//! * `cov`, `corr`: leading-order covariance and correlation;
//! * `lim_joint`, `lim_prod`: limits of `E[T_i T_j]/N^2` and
//!   `E[T_i] E[T_j]/N^2`;
//! * `order_n`: limit of `Cov/N` where `Cov/N^2 -> 0`;
//! * `order_n_half`: the same at `r = 1/2`, in its simplified form.
//!
//! Variables: `sigma`, `rho` (scaled selfing and recombination), `s`, `r`,
//! `N`, and the shorthands `R = (1-r)^2 + r^2`,
//! `L1 = 8 rho^2 + 26 rho + 9`, `L2 = 8 rho^2 (1-s)^2 + 26 rho (1-s) + 9`,
//! `P` (the quintic in `s` below) and
//! `D = 4 r (1-s) (s R - 2) (r s + r - s - 2) (2 r s - s + 2)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::exact_covariance;
use crate::expr::{eval_str, Env};
use crate::model::{colocation_signature, Colocation, Parameters, ScalingScenario, TwoLocusState};
use crate::rational::{int, q, to_fraction_string, uint, Q};

/// Power of `N` multiplying a leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    N2,
    N,
    One,
    InvN,
    InvN2,
}

impl Order {
    pub fn label(self) -> &'static str {
        match self {
            Order::N2 => "N^2",
            Order::N => "N",
            Order::One => "1",
            Order::InvN => "N^-1",
            Order::InvN2 => "N^-2",
        }
    }

    /// The exponent `k` in `N^k`.
    pub fn exponent(self) -> i32 {
        match self {
            Order::N2 => 2,
            Order::N => 1,
            Order::One => 0,
            Order::InvN => -1,
            Order::InvN2 => -2,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A registered closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formula {
    pub id: &'static str,
    pub order: Order,
    /// `None` when only the order is known.
    pub expr: Option<&'static str>,
}

/// A published formula that disagrees with the exact solver, together with
/// the corrected form that this crate evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaErratum {
    pub id: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

pub const FORMULA_ERRATA: &[FormulaErratum] = &[
    FormulaErratum {
        id: "corr.ii.q5",
        printed: "2/L2",
        corrected: "2*(1-s)/L2",
        note: "the covariance 8(1-s)^2/L2 divided by the same-individual variance 4(1-s) leaves a factor 1-s",
    },
    FormulaErratum {
        id: "order_n.iv.q10",
        printed: "s*(2-s)*((16*r^5-40*r^4+36*r^3-14*r^2+2*r)*s^4-(16*r^3-24*r^2+10*r-1)*s^3+(16*r^4-48*r^3+36*r^2-4*r-2)*s^2+(24*r^3-52*r^2+36*r-4)*s-16*r^3+24*r^2-8*r-8)/D",
        corrected: "s*(2-s)*((16*r^5-40*r^4+36*r^3-14*r^2+2*r)*s^4-(16*r^3-24*r^2+10*r-1)*s^3+(16*r^4-48*r^3+36*r^2-4*r-2)*s^2+(24*r^3-52*r^2+36*r-4)*s-16*r^3+24*r^2-8*r+8)/D",
        note: "constant term sign; only +8 agrees with the exact solver and with the simplified r = 1/2 entry",
    },
    FormulaErratum {
        id: "tajima.recombination_limit",
        printed: "theta^2*(1-s)^2*s/2",
        corrected: "theta^2*s*(1-s)/2",
        note: "4 mu^2 Cov with the q12 covariance coefficient 2s(1-s) in the rho -> infinity limit gives s(1-s), not s(1-s)^2",
    },
];

macro_rules! f {
    ($id:literal, $order:ident, $e:literal) => {
        Formula { id: $id, order: Order::$order, expr: Some($e) }
    };
    ($id:literal, $order:ident) => {
        Formula { id: $id, order: Order::$order, expr: None }
    };
}

const P_POLY: &str = "(R-1)*(2*r-1)^3*s^5-(R+2*r^2)*(2*R-1)*s^4+(32*r^4-40*R*r+8*r+4)*s^3+8*r*(2*r-1)*s^2-(40*R-24)*s+16*R";
const D_POLY: &str = "4*r*(1-s)*(s*R-2)*(r*s+r-s-2)*(2*r*s-s+2)";

/// Every registered closed form.
pub const REGISTRY: &[Formula] = &[
    // Leading covariance for the states with published constants.
    f!("cov.i.q5", N2, "8/L1"),
    f!("cov.i.q11", N2, "(8*rho+36)/L1"),
    f!("cov.i.q12", N2, "(8*rho+36)/L1"),
    f!("cov.ii.q5", N2, "8*(1-s)^2/L2"),
    f!("cov.ii.q11", N2, "(2-s)^2*(2*rho*(1-s)+9)/L2"),
    f!("cov.ii.q12", N2, "4*(1-s)*(4*rho^2*s*(1-s)^2+12*rho*s*(1-s)+2*rho*(1-s)+9)/L2"),
    f!("cov.iii.q5", One),
    f!("cov.iii.q11", N, "2*R/(r*(2-r))"),
    f!("cov.iii.q12", N, "2*R*(2*r*sigma-2*r-r^2*sigma+r^2+1)/(r*(2-r))"),
    f!("cov.iv.q5", N, "2*s^3*(1-s)*(2*R-2*s*R+s)/((4-s^2)*(2-s*R))"),
    f!("cov.iv.q11", N, "(2-s)*P/(4*r*(1-s)*(s*R-2)*(r*s+r-s-2)*(2*r*s-s+2))"),
    f!("cov.iv.q12", N2, "2*(1-s)*(2-s)^2/(2-s*R)-4*(1-s)^2"),
    // Leading correlation.
    f!("corr.i.q5", One, "2/L1"),
    f!("corr.i.q11", One, "(2*rho+9)/L1"),
    f!("corr.i.q12", One, "(2*rho+9)/L1"),
    f!("corr.ii.q5", One, "2*(1-s)/L2"),
    f!("corr.ii.q11", One, "(2*rho*(1-s)+9)/L2"),
    f!("corr.ii.q12", One, "(4*rho^2*s*(1-s)^2+12*rho*s*(1-s)+2*rho*(1-s)+9)/L2"),
    f!("corr.iii.q5", InvN2),
    f!("corr.iii.q11", InvN, "R/(2*r*(2-r))"),
    f!("corr.iii.q12", InvN, "R*(2*r*sigma-2*r-r^2*sigma+r^2+1)/(2*r*(2-r))"),
    f!("corr.iv.q5", InvN, "s^3*(2*R-2*s*R+s)/(2*(4-s^2)*(2-s*R))"),
    f!("corr.iv.q11", InvN, "P/(4*r*(2-s)*(1-s)*(s*R-2)*(r*s+r-s-2)*(2*r*s-s+2))"),
    f!("corr.iv.q12", One, "(2-s)^2/(2*(2-s*R))+s-1"),
    // Limits of the q12 laws as recombination grows without bound.
    f!("cov.ii.q12.rho_inf", N2, "2*s*(1-s)"),
    f!("corr.ii.q12.rho_inf", One, "s/2"),
    f!("corr.iv.q12.r_one", One, "s/2"),
    // Extreme cases, for every N >= 2. Order `One` marks an exact identity
    // unless the id is listed in `LEADING_ONLY`.
    f!("cov.total_selfing.q5", One, "2*(2*r-1)^2/((3*N+1)*(1+2*r-2*r^2))"),
    f!("cov.total_selfing.q11", N2),
    f!("cov.total_selfing.q12", One, "6/(1+2*r-2*r^2)-4"),
    f!("cov.no_recombination.q5", N2, "8*(1-s)^2/9"),
    f!("cov.no_recombination.q11", One, "(4-4*s+s^2)*N^2+(2-3*s)*N+2"),
    f!("cov.no_recombination.q12", One, "(4-4*s)*N^2+(2-2*s)*N+2"),
    f!("corr.total_selfing.q5", One, "(2*r-1)^2/((3*N+1)*(1+2*r-2*r^2))"),
    f!("corr.total_selfing.q11", One, "1"),
    f!("corr.total_selfing.q12", One, "3/(1+2*r-2*r^2)-2"),
    f!("corr.no_recombination.q5", One, "2*(1-s)/9"),
    f!("corr.no_recombination.q11", One, "1"),
    f!("corr.no_recombination.q12", One, "1"),
    // Limits of E[T_i T_j]/N^2.
    f!("lim_joint.i.q1", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q2", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q3", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q4", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q5", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q6", N2, "(4*L1+8)/L1"),
    f!("lim_joint.i.q7", N2, "(4*L1+12)/L1"),
    f!("lim_joint.i.q8", N2, "(4*L1+12)/L1"),
    f!("lim_joint.i.q9", N2, "(4*L1+12)/L1"),
    f!("lim_joint.i.q10", N2, "(4*L1+12)/L1"),
    f!("lim_joint.i.q11", N2, "(4*L1+8*rho+36)/L1"),
    f!("lim_joint.i.q12", N2, "(4*L1+8*rho+36)/L1"),
    f!("lim_joint.ii.q1", N2, "(s-2)^2*(L2+2)/L2"),
    f!("lim_joint.ii.q2", N2, "2*(1-s)*(2-s)*(L2+2)/L2"),
    f!("lim_joint.ii.q3", N2, "2*(1-s)*(2-s)*(L2+2)/L2"),
    f!("lim_joint.ii.q4", N2, "((2-s)^2*L2+(2-s)*(4-s))/L2"),
    f!("lim_joint.ii.q5", N2, "4*(1-s)^2*(L2+2)/L2"),
    f!("lim_joint.ii.q6", N2, "((2-s)^2*L2-2*rho*s^3+2*rho*s^2+5*s^2-4*s+8)/L2"),
    f!("lim_joint.ii.q7", N2, "(2-s)^2*(L2+3)/L2"),
    f!("lim_joint.ii.q8", N2, "2*(1-s)*(2-s)*(L2+3)/L2"),
    f!("lim_joint.ii.q9", N2, "2*(1-s)*(2-s)*(L2+3)/L2"),
    f!("lim_joint.ii.q10", N2, "(2-s)*((2-s)*L2-2*rho*s^2+2*rho*s+3*s+6)/L2"),
    f!("lim_joint.ii.q11", N2, "(2-s)^2*(L2-2*rho*s+2*rho+9)/L2"),
    f!("lim_joint.ii.q12", N2, "2*(1-s)*(2-s)*(L2-2*rho*s+2*rho+9)/L2"),
    f!("lim_joint.iii.q1", N2, "4"),
    f!("lim_joint.iii.q2", N2, "4"),
    f!("lim_joint.iii.q3", N2, "4"),
    f!("lim_joint.iii.q4", N2, "4"),
    f!("lim_joint.iii.q5", N2, "4"),
    f!("lim_joint.iii.q6", N2, "4"),
    f!("lim_joint.iii.q7", N2, "4"),
    f!("lim_joint.iii.q8", N2, "4"),
    f!("lim_joint.iii.q9", N2, "4"),
    f!("lim_joint.iii.q10", N2, "4"),
    f!("lim_joint.iii.q11", N2, "4"),
    f!("lim_joint.iii.q12", N2, "4"),
    f!("lim_joint.iv.q1", N2, "(2-s)^2"),
    f!("lim_joint.iv.q2", N2, "2*(1-s)*(2-s)"),
    f!("lim_joint.iv.q3", N2, "2*(1-s)*(2-s)"),
    f!("lim_joint.iv.q4", N2, "(2-s)^2"),
    f!("lim_joint.iv.q5", N2, "4*(1-s)^2"),
    f!("lim_joint.iv.q6", N2, "(2-s)^2"),
    f!("lim_joint.iv.q7", N2, "(2-s)^2"),
    f!("lim_joint.iv.q8", N2, "2*(1-s)*(2-s)"),
    f!("lim_joint.iv.q9", N2, "2*(1-s)*(2-s)"),
    f!("lim_joint.iv.q10", N2, "(2-s)^2"),
    f!("lim_joint.iv.q11", N2, "(2-s)^2"),
    f!("lim_joint.iv.q12", N2, "2*(s-1)*(s-2)^2/(2*s*r^2-2*s*r+s-2)"),
    // Limits of E[T_i] E[T_j]/N^2, by colocation.
    f!("lim_prod.i.q1", N2, "4"),
    f!("lim_prod.i.q2", N2, "4"),
    f!("lim_prod.i.q3", N2, "4"),
    f!("lim_prod.i.q4", N2, "4"),
    f!("lim_prod.i.q5", N2, "4"),
    f!("lim_prod.i.q6", N2, "4"),
    f!("lim_prod.i.q7", N2, "4"),
    f!("lim_prod.i.q8", N2, "4"),
    f!("lim_prod.i.q9", N2, "4"),
    f!("lim_prod.i.q10", N2, "4"),
    f!("lim_prod.i.q11", N2, "4"),
    f!("lim_prod.i.q12", N2, "4"),
    f!("lim_prod.ii.q1", N2, "(2-s)^2"),
    f!("lim_prod.ii.q2", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.ii.q3", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.ii.q4", N2, "(2-s)^2"),
    f!("lim_prod.ii.q5", N2, "4*(1-s)^2"),
    f!("lim_prod.ii.q6", N2, "(2-s)^2"),
    f!("lim_prod.ii.q7", N2, "(2-s)^2"),
    f!("lim_prod.ii.q8", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.ii.q9", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.ii.q10", N2, "(2-s)^2"),
    f!("lim_prod.ii.q11", N2, "(2-s)^2"),
    f!("lim_prod.ii.q12", N2, "4*(1-s)^2"),
    f!("lim_prod.iii.q1", N2, "4"),
    f!("lim_prod.iii.q2", N2, "4"),
    f!("lim_prod.iii.q3", N2, "4"),
    f!("lim_prod.iii.q4", N2, "4"),
    f!("lim_prod.iii.q5", N2, "4"),
    f!("lim_prod.iii.q6", N2, "4"),
    f!("lim_prod.iii.q7", N2, "4"),
    f!("lim_prod.iii.q8", N2, "4"),
    f!("lim_prod.iii.q9", N2, "4"),
    f!("lim_prod.iii.q10", N2, "4"),
    f!("lim_prod.iii.q11", N2, "4"),
    f!("lim_prod.iii.q12", N2, "4"),
    f!("lim_prod.iv.q1", N2, "(2-s)^2"),
    f!("lim_prod.iv.q2", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.iv.q3", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.iv.q4", N2, "(2-s)^2"),
    f!("lim_prod.iv.q5", N2, "4*(1-s)^2"),
    f!("lim_prod.iv.q6", N2, "(2-s)^2"),
    f!("lim_prod.iv.q7", N2, "(2-s)^2"),
    f!("lim_prod.iv.q8", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.iv.q9", N2, "2*(1-s)*(2-s)"),
    f!("lim_prod.iv.q10", N2, "(2-s)^2"),
    f!("lim_prod.iv.q11", N2, "(2-s)^2"),
    f!("lim_prod.iv.q12", N2, "4*(1-s)^2"),
    // Limits of Cov/N where the N^2 term vanishes.
    f!("order_n.iii.q1", N, "0"),
    f!("order_n.iii.q2", N, "0"),
    f!("order_n.iii.q3", N, "0"),
    f!("order_n.iii.q4", N, "0"),
    f!("order_n.iii.q5", N, "0"),
    f!("order_n.iii.q6", N, "0"),
    f!("order_n.iii.q7", N, "0"),
    f!("order_n.iii.q8", N, "0"),
    f!("order_n.iii.q9", N, "0"),
    f!("order_n.iii.q10", N, "0"),
    f!("order_n.iii.q11", N, "2*R/(r*(2-r))"),
    f!("order_n.iii.q12", N, "2*R*(sigma*r*(2-r)+(1-r)^2)/(r*(2-r))"),
    f!("order_n.iv.q1", N, "0"),
    f!("order_n.iv.q2", N, "0"),
    f!("order_n.iv.q3", N, "0"),
    f!("order_n.iv.q4", N, "0"),
    f!("order_n.iv.q5", N, "2*s^3*(1-s)*(2*R-2*s*R+s)/((4-s^2)*(2-s*R))"),
    f!("order_n.iv.q6", N, "s^2*(2-s)*((16*r^5-40*r^4+36*r^3-14*r^2+2*r)*s^3+(16*r^4-40*r^3+24*r^2-2*r-1)*s^2-8*r*(2*r^2-r-1)*s+8*r+4)/D"),
    f!("order_n.iv.q7", N, "0"),
    f!("order_n.iv.q8", N, "s^2*(1-s)*(2*R+s-2*s*R)/((2-s)*(2-s*R))"),
    f!("order_n.iv.q9", N, "s^2*(1-s)*(2*R+s-2*s*R)/((2-s)*(2-s*R))"),
    f!("order_n.iv.q10", N, "s*(2-s)*((16*r^5-40*r^4+36*r^3-14*r^2+2*r)*s^4-(16*r^3-24*r^2+10*r-1)*s^3+(16*r^4-48*r^3+36*r^2-4*r-2)*s^2+(24*r^3-52*r^2+36*r-4)*s-16*r^3+24*r^2-8*r+8)/D"),
    f!("order_n.iv.q11", N, "(2-s)*((16*r^5-40*r^4+36*r^3-14*r^2+2*r)*s^5-(16*r^4-24*r^3+16*r^2-6*r+1)*s^4+(32*r^4-80*r^3+80*r^2-32*r+4)*s^3+8*r*(2*r-1)*s^2-(80*r^2-80*r+16)*s+32*r^2-32*r+16)/D"),
    f!("order_n_half.iv.q1", N, "0"),
    f!("order_n_half.iv.q2", N, "0"),
    f!("order_n_half.iv.q3", N, "0"),
    f!("order_n_half.iv.q4", N, "0"),
    f!("order_n_half.iv.q5", N, "4*s^3*(1-s)/((4-s)*(2-s)*(s+2))"),
    f!("order_n_half.iv.q6", N, "4*s^2*(2-s)*(2+s)/((1-s)*(3+s)*(4-s))"),
    f!("order_n_half.iv.q7", N, "0"),
    f!("order_n_half.iv.q8", N, "2*s^2*(1-s)/((4-s)*(2-s))"),
    f!("order_n_half.iv.q9", N, "2*s^2*(1-s)/((4-s)*(2-s))"),
    f!("order_n_half.iv.q10", N, "4*s*(2-s)*(2+s)/((1-s)*(3+s)*(4-s))"),
    f!("order_n_half.iv.q11", N, "4*(2-s)*(2+s)/((1-s)*(3+s)*(4-s))"),
];

/// Extreme-case correlations of order one that hold only to leading order.
const LEADING_ONLY: &[&str] = &["corr.total_selfing.q11", "corr.no_recombination.q5"];

/// Looks up a registered formula by id.
pub fn formula(id: &str) -> Option<&'static Formula> {
    REGISTRY.iter().find(|f| f.id == id)
}

/// Evaluates the printed form of a corrected scenario formula, so that it
/// can be compared against the exact solver.
pub fn printed_value(id: &str, scenario: &ScalingScenario) -> Result<Q> {
    let e = FORMULA_ERRATA
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Validation(format!("no erratum recorded for {id}")))?;
    check_domain(scenario, false)?;
    eval_str(e.printed, &scenario_env(scenario))
}

fn registered(id: &str) -> Result<&'static Formula> {
    formula(id).ok_or_else(|| Error::Invariant(format!("no formula registered under {id}")))
}

/// Leading-order law: `value ~ coefficient * N^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticResult {
    pub order: Order,
    /// `None` when only the order is known in closed form.
    pub coefficient: Option<Q>,
    pub formula_id: String,
}

impl AsymptoticResult {
    /// `coefficient * N^order`, when the coefficient is known.
    pub fn at(&self, n: u64) -> Option<Q> {
        let c = self.coefficient.as_ref()?;
        let k = self.order.exponent();
        let nq = uint(n);
        Some(c * num_traits::pow::Pow::pow(nq, k))
    }
}

/// Which extreme boundary of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremeCase {
    /// `s = 1`.
    TotalSelfing,
    /// `r = 0`.
    NoRecombination,
}

impl ExtremeCase {
    pub fn name(self) -> &'static str {
        match self {
            ExtremeCase::TotalSelfing => "total_selfing",
            ExtremeCase::NoRecombination => "no_recombination",
        }
    }

    fn check(self, params: &Parameters) -> Result<()> {
        let ok = match self {
            ExtremeCase::TotalSelfing => params.s().is_one(),
            ExtremeCase::NoRecombination => params.r().is_zero(),
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("parameters {params} do not match the {} case", self.name()))
        }
    }
}

/// An extreme-case value: either exact for the given `N`, or a leading
/// coefficient of `N^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeResult {
    /// `None` for an exact identity, otherwise the order of the leading term.
    pub leading_order: Option<Order>,
    pub value: Q,
    pub formula_id: String,
}

fn scenario_env(scenario: &ScalingScenario) -> Env {
    let mut env = Env::new();
    let one = Q::one();
    match scenario {
        ScalingScenario::I { sigma, rho } => {
            env.insert("sigma", sigma.clone());
            env.insert("rho", rho.clone());
            env.insert("L1", int(8) * rho * rho + int(26) * rho + int(9));
        }
        ScalingScenario::II { s, rho } => {
            env.insert("s", s.clone());
            env.insert("rho", rho.clone());
            let x = rho * (&one - s);
            env.insert("L2", int(8) * &x * &x + int(26) * &x + int(9));
        }
        ScalingScenario::III { sigma, r } => {
            env.insert("sigma", sigma.clone());
            env.insert("r", r.clone());
            env.insert("R", big_r(r));
        }
        ScalingScenario::IV { s, r } => {
            env.insert("s", s.clone());
            env.insert("r", r.clone());
            env.insert("R", big_r(r));
            let p = eval_str(P_POLY, &env).expect("P evaluates");
            let d = eval_str(D_POLY, &env).expect("D evaluates");
            env.insert("P", p);
            env.insert("D", d);
        }
    }
    env
}

fn big_r(r: &Q) -> Q {
    let a = Q::one() - r;
    &a * &a + r * r
}

fn check_live(state: TwoLocusState) -> Result<()> {
    if state.is_live() {
        Ok(())
    } else {
        invalid(format!("{state} is not a live state"))
    }
}

fn check_domain(scenario: &ScalingScenario, closure: bool) -> Result<()> {
    let r = if closure { scenario.validate_closure() } else { scenario.validate() };
    r.map_err(|e| match e {
        Error::Validation(m) => Error::Validation(format!(
            "{m} (s = 1 and r = 0 are handled by the extreme-case operations)"
        )),
        other => other,
    })
}

fn evaluate(id: &str, env: &Env) -> Result<AsymptoticResult> {
    let f = registered(id)?;
    let coefficient = match f.expr {
        Some(e) => Some(eval_str(e, env)?),
        None => None,
    };
    Ok(AsymptoticResult { order: f.order, coefficient, formula_id: id.to_string() })
}

fn is_headline(state: TwoLocusState) -> bool {
    matches!(state, TwoLocusState::Q5 | TwoLocusState::Q11 | TwoLocusState::Q12)
}

/// Leading-order covariance `Cov_q[T_i, T_j] ~ c N^k` under a scenario.
///
/// `q5`, `q11` and `q12` use the published constants. Other states use the
/// difference of the `E[T_i T_j]/N^2` and `E[T_i] E[T_j]/N^2` limits when it
/// is nonzero, and otherwise the limit of `Cov/N`.
pub fn asymptotic_covariance(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_domain(scenario, false)?;
    covariance_in(scenario, state)
}

fn covariance_in(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_live(state)?;
    let env = scenario_env(scenario);
    let sc = scenario.label();
    if is_headline(state) {
        return evaluate(&format!("cov.{sc}.{state}"), &env);
    }
    match scenario {
        ScalingScenario::I { .. } | ScalingScenario::II { .. } => {
            let (joint, prod) = moment_ratios_in(scenario, state)?;
            Ok(AsymptoticResult {
                order: Order::N2,
                coefficient: Some(joint - prod),
                formula_id: format!("lim_joint.{sc}.{state} - lim_prod.{sc}.{state}"),
            })
        }
        ScalingScenario::III { .. } | ScalingScenario::IV { .. } => order_n_in(scenario, state),
    }
}

/// Leading-order correlation for `q5`, `q11` and `q12`.
pub fn asymptotic_correlation(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_domain(scenario, false)?;
    correlation_in(scenario, state)
}

/// As [`asymptotic_correlation`], but admitting the endpoints `sigma = 0`
/// and `rho = 0` where the closed forms stay finite (for example the
/// `1/(12N)` law at `s = 0`, `r = 1/2`).
pub fn asymptotic_correlation_closure(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_domain(scenario, true)?;
    correlation_in(scenario, state)
}

/// As [`asymptotic_covariance`], admitting `sigma = 0` and `rho = 0`.
pub fn asymptotic_covariance_closure(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_domain(scenario, true)?;
    covariance_in(scenario, state)
}

fn correlation_in(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_live(state)?;
    if !is_headline(state) {
        return invalid(format!("no closed-form correlation is available for {state}; use q5, q11 or q12"));
    }
    evaluate(&format!("corr.{}.{state}", scenario.label()), &scenario_env(scenario))
}

/// Covariance at the extreme boundaries, for `q5`, `q11` and `q12`.
///
/// Total selfing `q11` has no published constant; its leading coefficient
/// is reported as the exact solver's `Cov/N^2` at the given `N`.
pub fn extreme_covariance(case: ExtremeCase, params: &Parameters, state: TwoLocusState) -> Result<ExtremeResult> {
    case.check(params)?;
    extreme(case, params, state, "cov")
}

/// Correlation at the extreme boundaries, for `q5`, `q11` and `q12`.
pub fn extreme_correlation(case: ExtremeCase, params: &Parameters, state: TwoLocusState) -> Result<ExtremeResult> {
    case.check(params)?;
    extreme(case, params, state, "corr")
}

fn extreme(case: ExtremeCase, params: &Parameters, state: TwoLocusState, quantity: &str) -> Result<ExtremeResult> {
    check_live(state)?;
    if !is_headline(state) {
        return invalid(format!("{state} has no extreme-case formula; use the exact solver"));
    }
    let id = format!("{quantity}.{}.{state}", case.name());
    let f = registered(&id)?;
    let mut env = Env::new();
    env.insert("N", params.n_q());
    env.insert("s", params.s().clone());
    env.insert("r", params.r().clone());
    let leading_order = (f.order != Order::One || LEADING_ONLY.contains(&f.id)).then_some(f.order);
    let value = match f.expr {
        Some(e) => eval_str(e, &env)?,
        None => {
            let n = params.n_q();
            exact_covariance(params, state)? / (&n * &n)
        }
    };
    Ok(ExtremeResult { leading_order, value, formula_id: id })
}

/// Limits of `E_q[T_i T_j]/N^2` and `E_q[T_i] E_q[T_j]/N^2`.
pub fn limit_moment_ratios(scenario: &ScalingScenario, state: TwoLocusState) -> Result<(Q, Q)> {
    check_domain(scenario, false)?;
    moment_ratios_in(scenario, state)
}

fn moment_ratios_in(scenario: &ScalingScenario, state: TwoLocusState) -> Result<(Q, Q)> {
    check_live(state)?;
    let env = scenario_env(scenario);
    let sc = scenario.label();
    let joint = evaluate(&format!("lim_joint.{sc}.{state}"), &env)?;
    let prod = evaluate(&format!("lim_prod.{sc}.{state}"), &env)?;
    Ok((joint.coefficient.expect("registered"), prod.coefficient.expect("registered")))
}

/// Limit of `Cov_q/N` in scenarios III and IV, where `Cov/N^2 -> 0`.
///
/// At `r = 1/2` in scenario IV the simplified published entries are used.
pub fn order_n_covariance(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_domain(scenario, false)?;
    order_n_in(scenario, state)
}

fn order_n_in(scenario: &ScalingScenario, state: TwoLocusState) -> Result<AsymptoticResult> {
    check_live(state)?;
    match scenario {
        ScalingScenario::III { .. } => {}
        ScalingScenario::IV { r, .. } => {
            if state == TwoLocusState::Q12 {
                return invalid("the q12 covariance is of order N^2 in scenario iv");
            }
            if *r == q(1, 2) {
                return evaluate(&format!("order_n_half.iv.{state}"), &scenario_env(scenario));
            }
        }
        _ => return invalid("order-N covariance laws exist only for scenarios iii and iv"),
    }
    evaluate(&format!("order_n.{}.{state}", scenario.label()), &scenario_env(scenario))
}

/// Selfing regime for the single-locus tail law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRegime {
    /// `s` fixed in `[0,1)` as `N` grows.
    ConstantS(f64),
    /// `s_N -> 0`.
    VanishingS,
}

/// `lim P(T > N t)` for a pair starting in one (`Same`) or two (`Diff`)
/// individuals.
pub fn tail_probability(t: f64, c: Colocation, regime: TailRegime) -> Result<f64> {
    if t.is_nan() || t <= 0.0 || t.is_infinite() {
        return invalid(format!("t must be positive and finite, got {t}"));
    }
    let s = match regime {
        TailRegime::ConstantS(s) => {
            if !(0.0..1.0).contains(&s) {
                return invalid(format!("s must lie in [0,1), got {s}"));
            }
            s
        }
        TailRegime::VanishingS => 0.0,
    };
    let decay = (-t / (2.0 - s)).exp();
    match c {
        Colocation::Same => Ok(decay * 2.0 * (1.0 - s) / (2.0 - s)),
        Colocation::Diff => Ok(decay),
        Colocation::Coal => invalid("an already coalesced pair has no tail"),
    }
}

/// Many-loci variance of Tajima's estimator, `4 mu^2 Cov_q[T_i, T_j]` with
/// `mu = theta/(4N)` and the leading covariance of the scenario.
pub fn tajima_variance_limit(theta: &Q, scenario: &ScalingScenario, state: TwoLocusState, n: u64) -> Result<Q> {
    if !theta.is_positive() {
        return invalid(format!("theta must be positive, got {}", to_fraction_string(theta)));
    }
    if n < 2 {
        return invalid(format!("N must be at least 2, got {n}"));
    }
    let cov = asymptotic_covariance_closure(scenario, state)?;
    let value = cov
        .at(n)
        .ok_or_else(|| Error::Validation(format!("{} gives only the order of the covariance", cov.formula_id)))?;
    let nq = uint(n);
    Ok(theta * theta * value / (int(4) * &nq * &nq))
}

/// `q12` laws in scenario ii as `rho -> infinity`: the covariance
/// coefficient of `N^2` and the limiting correlation.
pub fn unbounded_recombination_limit(s: &Q) -> Result<(AsymptoticResult, AsymptoticResult)> {
    if s.is_negative() || *s >= Q::one() {
        return invalid(format!("s must lie in [0,1), got {}", to_fraction_string(s)));
    }
    let mut env = Env::new();
    env.insert("s", s.clone());
    Ok((evaluate("cov.ii.q12.rho_inf", &env)?, evaluate("corr.ii.q12.rho_inf", &env)?))
}

/// `lim Var` of Tajima's estimator for `q12` at constant selfing `s` when
/// recombination grows without bound (`rho -> infinity` in scenario ii).
pub fn tajima_recombination_limit(theta: &Q, s: &Q) -> Result<Q> {
    if !theta.is_positive() {
        return invalid(format!("theta must be positive, got {}", to_fraction_string(theta)));
    }
    let (cov, _) = unbounded_recombination_limit(s)?;
    Ok(theta * theta * cov.coefficient.expect("registered") / int(4))
}

/// Leading variance coefficient of a pair: `4(1-s)` in one individual,
/// `(2-s)^2` in two.
pub fn leading_variance(s: &Q, c: Colocation) -> Result<Q> {
    match c {
        Colocation::Same => Ok(int(4) * (Q::one() - s)),
        Colocation::Diff => {
            let t = int(2) - s;
            Ok(&t * &t)
        }
        Colocation::Coal => invalid("an already coalesced pair has no variance"),
    }
}

/// The leading variance product `Var_i Var_j / N^4` in a scenario, used to
/// relate the covariance and correlation laws.
pub fn leading_variance_product(scenario: &ScalingScenario, state: TwoLocusState) -> Result<Q> {
    let (ci, cj) = colocation_signature(state)?;
    let s = match scenario {
        ScalingScenario::II { s, .. } | ScalingScenario::IV { s, .. } => s.clone(),
        _ => Q::zero(),
    };
    Ok(leading_variance(&s, ci)? * leading_variance(&s, cj)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TwoLocusState::*;

    fn iv(s: Q, r: Q) -> ScalingScenario {
        ScalingScenario::IV { s, r }
    }

    #[test]
    fn every_formula_parses_and_ids_are_unique() {
        let mut ids = std::collections::HashSet::new();
        for f in REGISTRY {
            assert!(ids.insert(f.id), "duplicate id {}", f.id);
            if let Some(e) = f.expr {
                crate::expr::Expr::parse(e).unwrap();
            }
        }
        for e in FORMULA_ERRATA {
            crate::expr::Expr::parse(e.printed).unwrap();
            crate::expr::Expr::parse(e.corrected).unwrap();
            if let Some(f) = formula(e.id) {
                assert_eq!(f.expr, Some(e.corrected));
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let a = asymptotic_covariance(&ScalingScenario::I { sigma: int(1), rho: int(1) }, Q11).unwrap();
        assert_eq!((a.order, a.coefficient), (Order::N2, Some(q(44, 43))));
        let a = asymptotic_covariance(&iv(int(0), q(1, 3)), Q12).unwrap();
        assert_eq!(a.coefficient, Some(int(0)));
        let a = asymptotic_covariance(&ScalingScenario::III { sigma: int(1), r: q(1, 2) }, Q12).unwrap();
        assert_eq!((a.order, a.coefficient), (Order::N, Some(q(4, 3))));
        let a = asymptotic_covariance(&ScalingScenario::III { sigma: int(1), r: q(1, 2) }, Q5).unwrap();
        assert_eq!((a.order, a.coefficient), (Order::One, None));
        assert!(asymptotic_covariance(&iv(int(1), q(1, 2)), Q12).is_err());
        assert!(asymptotic_covariance(&iv(q(1, 2), int(0)), Q12).is_err());
    }

    #[test]
    fn correlation_examples() {
        let a = asymptotic_correlation(&ScalingScenario::I { sigma: int(1), rho: q(1, 4) }, Q11).unwrap();
        assert_eq!(a.coefficient, Some(q(19, 32)));
        let a = asymptotic_correlation(&ScalingScenario::III { sigma: int(1), r: q(1, 2) }, Q12).unwrap();
        assert_eq!((a.order, a.coefficient), (Order::InvN, Some(q(1, 3))));
        let a = asymptotic_correlation(&iv(q(1, 2), q(1, 2)), Q12).unwrap();
        assert_eq!(a.coefficient, Some(q(1, 7)));
        let a = asymptotic_correlation_closure(&ScalingScenario::III { sigma: int(0), r: q(1, 2) }, Q12).unwrap();
        assert_eq!(a.coefficient, Some(q(1, 12)));
        assert!(asymptotic_correlation(&ScalingScenario::III { sigma: int(0), r: q(1, 2) }, Q12).is_err());
        assert!(asymptotic_correlation(&iv(q(1, 2), q(1, 2)), Q4).is_err());
    }

    #[test]
    fn extreme_examples() {
        let p = |n, s, r| Parameters::new(n, s, r).unwrap();
        let e = extreme_covariance(ExtremeCase::TotalSelfing, &p(33, int(1), q(1, 2)), Q5).unwrap();
        assert_eq!((e.value, e.leading_order), (int(0), None));
        let e = extreme_covariance(ExtremeCase::NoRecombination, &p(10, q(1, 2), int(0)), Q12).unwrap();
        assert_eq!(e.value, int(212));
        let e = extreme_covariance(ExtremeCase::TotalSelfing, &p(4, int(1), int(0)), Q12).unwrap();
        assert_eq!(e.value, int(2));
        let e = extreme_correlation(ExtremeCase::NoRecombination, &p(9, q(1, 3), int(0)), Q11).unwrap();
        assert_eq!(e.value, int(1));
        let e = extreme_correlation(ExtremeCase::TotalSelfing, &p(5, int(1), q(1, 4)), Q5).unwrap();
        assert_eq!(e.value, q(1, 88));
        let e = extreme_correlation(ExtremeCase::TotalSelfing, &p(5, int(1), q(1, 2)), Q12).unwrap();
        assert_eq!(e.value, int(0));
        let e = extreme_covariance(ExtremeCase::TotalSelfing, &p(6, int(1), q(1, 3)), Q11).unwrap();
        assert_eq!(e.leading_order, Some(Order::N2));
        assert!(extreme_covariance(ExtremeCase::TotalSelfing, &p(6, q(1, 2), q(1, 3)), Q11).is_err());
    }

    #[test]
    fn moment_ratio_examples() {
        let (a, b) = limit_moment_ratios(&ScalingScenario::I { sigma: int(1), rho: int(1) }, Q1).unwrap();
        assert_eq!((a, b), (q(180, 43), int(4)));
        let (a, b) = limit_moment_ratios(&iv(int(0), q(1, 3)), Q12).unwrap();
        assert_eq!((a, b), (int(4), int(4)));
        let (a, b) = limit_moment_ratios(&ScalingScenario::III { sigma: int(2), r: q(1, 3) }, Q7).unwrap();
        assert_eq!((a, b), (int(4), int(4)));
    }

    #[test]
    fn order_n_examples() {
        let a = order_n_covariance(&ScalingScenario::III { sigma: int(1), r: q(1, 2) }, Q11).unwrap();
        assert_eq!(a.coefficient, Some(q(4, 3)));
        let a = order_n_covariance(&ScalingScenario::III { sigma: int(1), r: q(1, 5) }, Q1).unwrap();
        assert_eq!(a.coefficient, Some(int(0)));
        let a = order_n_covariance(&iv(q(1, 2), q(1, 2)), Q8).unwrap();
        assert_eq!(a.coefficient, Some(q(1, 21)));
        assert!(order_n_covariance(&iv(q(1, 2), q(1, 3)), Q12).is_err());
    }

    #[test]
    fn half_table_matches_general_table() {
        for s in [q(1, 10), q(1, 3), q(1, 2), q(4, 5)] {
            let env = scenario_env(&iv(s, q(1, 2)));
            for st in TwoLocusState::LIVE.iter().filter(|&&x| x != Q12) {
                let a = evaluate(&format!("order_n.iv.{st}"), &env).unwrap().coefficient;
                let b = evaluate(&format!("order_n_half.iv.{st}"), &env).unwrap().coefficient;
                assert_eq!(a, b, "{st}");
            }
        }
    }

    #[test]
    fn printed_q10_constant_disagrees_with_half_table() {
        let e = FORMULA_ERRATA.iter().find(|e| e.id == "order_n.iv.q10").unwrap();
        let env = scenario_env(&iv(q(1, 3), q(1, 2)));
        let printed = eval_str(e.printed, &env).unwrap();
        let half = evaluate("order_n_half.iv.q10", &env).unwrap().coefficient.unwrap();
        assert_ne!(printed, half);
    }

    #[test]
    fn tail_examples() {
        let v = tail_probability(1.0, Colocation::Same, TailRegime::ConstantS(0.5)).unwrap();
        assert!((v - (-2.0f64 / 3.0).exp() * 2.0 / 3.0).abs() < 1e-15);
        assert!((v - 0.34227).abs() < 1e-5);
        let v = tail_probability(1e-12, Colocation::Same, TailRegime::ConstantS(0.3)).unwrap();
        assert!((v - 1.4 / 1.7).abs() < 1e-9);
        let v = tail_probability(2.0, Colocation::Diff, TailRegime::VanishingS).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!(tail_probability(0.0, Colocation::Diff, TailRegime::VanishingS).is_err());
    }

    #[test]
    fn tajima_examples() {
        let v = tajima_variance_limit(&int(2), &ScalingScenario::III { sigma: int(1), r: q(1, 2) }, Q12, 100).unwrap();
        assert_eq!(v, q(1, 75));
        assert_eq!(tajima_recombination_limit(&int(3), &int(0)).unwrap(), int(0));
        assert_eq!(tajima_recombination_limit(&int(1), &q(1, 2)).unwrap(), q(1, 8));
    }
}
