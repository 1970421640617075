//! Exact one-step enumeration of the reproduction rules.
//!
//! One generation back in time, every occupied chromosome picks a parent
//! and then a parental chromosome:
//!
//! * an individual selfs with probability `s`, in which case both of its
//!   chromosomes descend from one parent drawn uniformly from `N`;
//!   otherwise its two chromosomes come from two distinct parents drawn as
//!   a uniform ordered pair;
//! * each chromosome is recombinant with probability `r`; it picks a
//!   parental chromosome `c` uniformly, its locus-`i` content descends from
//!   `c` and its locus-`j` content from `c` (non-recombinant) or `1-c`
//!   (recombinant).
//!
//! The parents drawn for distinct individuals are independent uniform
//! draws, so they may collide. Collisions are enumerated as set partitions
//! of the draws. The structure of the enumeration does not depend on
//! `(N, s, r)`, so each start state is enumerated once into a list of
//! weighted monomials that is evaluated exactly for any parameters.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chain::config::{classify, merge_coalesced, representative, Config, Slot};
use crate::model::{Parameters, TwoLocusState};
use crate::rational::Q;

/// Exponents and combinatorial shape of one group of outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Shape {
    target: TwoLocusState,
    selfed: u8,
    outcrossed: u8,
    recombinant: u8,
    nonrecombinant: u8,
    /// Number of distinct parents used.
    blocks: u8,
    /// Number of independent parent draws.
    draws: u8,
    /// Number of draws that are constrained to differ pairwise (outcrossing).
    pairs: u8,
}

#[derive(Debug, Clone)]
struct Term {
    shape: Shape,
    /// Multiplicity; the per-chromosome factor `1/2` is applied at evaluation.
    count: u64,
}

#[derive(Debug, Clone)]
struct Kernel {
    occupied: u32,
    terms: Vec<Term>,
}

fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, m: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, m, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, &mut Vec::new(), 0, &mut out);
    out
}

fn kernel_for(cfg: &Config) -> Kernel {
    let mut occ: Vec<Slot> = cfg.iter().flatten().copied().collect();
    occ.sort_unstable();
    occ.dedup();
    let mut inds: Vec<u64> = occ.iter().map(|s| s.0).collect();
    inds.dedup();
    let two: Vec<u64> = inds.iter().copied().filter(|i| occ.iter().filter(|s| s.0 == *i).count() == 2).collect();

    let mut acc: BTreeMap<Shape, u64> = BTreeMap::new();
    for mask in 0u32..(1 << two.len()) {
        let selfs = |ind: u64| two.iter().position(|&t| t == ind).map(|k| mask >> k & 1 == 1).unwrap_or(false);
        let selfed = mask.count_ones() as u8;
        let outcrossed = two.len() as u8 - selfed;
        // One draw per chromosome, except that a selfing individual shares one.
        let mut keys: Vec<(u64, Option<u8>)> = Vec::new();
        let mut draw_of = Vec::with_capacity(occ.len());
        for &(ind, ch) in &occ {
            let key = if selfs(ind) { (ind, None) } else { (ind, Some(ch)) };
            let idx = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                keys.push(key);
                keys.len() - 1
            });
            draw_of.push(idx);
        }
        let pairs: Vec<(usize, usize)> = two
            .iter()
            .filter(|&&i| !selfs(i))
            .map(|&i| {
                let a = occ.iter().position(|s| *s == (i, 0)).unwrap();
                let b = occ.iter().position(|s| *s == (i, 1)).unwrap();
                (draw_of[a], draw_of[b])
            })
            .collect();
        let m = keys.len();
        for part in set_partitions(m) {
            if pairs.iter().any(|&(a, b)| part[a] == part[b]) {
                continue;
            }
            let blocks = part.iter().max().map_or(0, |b| b + 1) as u8;
            for choice in 0u32..(1 << (2 * occ.len())) {
                let mut rec = 0u8;
                let mut next: Config = [None; 4];
                for (k, lineage) in cfg.iter().enumerate() {
                    let Some(slot) = lineage else { continue };
                    let o = occ.iter().position(|s| s == slot).unwrap();
                    let bits = choice >> (2 * o) & 3;
                    let recombinant = bits & 2 != 0;
                    let c = (bits & 1) as u8;
                    let parent = part[draw_of[o]] as u64;
                    let is_i = k < 2;
                    let pch = if is_i || !recombinant { c } else { 1 - c };
                    next[k] = Some((parent, pch));
                }
                for o in 0..occ.len() {
                    if choice >> (2 * o) & 2 != 0 {
                        rec += 1;
                    }
                }
                merge_coalesced(&mut next);
                let shape = Shape {
                    target: classify(&next),
                    selfed,
                    outcrossed,
                    recombinant: rec,
                    nonrecombinant: occ.len() as u8 - rec,
                    blocks,
                    draws: m as u8,
                    pairs: pairs.len() as u8,
                };
                *acc.entry(shape).or_insert(0) += 1;
            }
        }
    }
    Kernel {
        occupied: occ.len() as u32,
        terms: acc.into_iter().map(|(shape, count)| Term { shape, count }).collect(),
    }
}

fn kernels() -> &'static Vec<Kernel> {
    static K: OnceLock<Vec<Kernel>> = OnceLock::new();
    K.get_or_init(|| TwoLocusState::ALL.iter().map(|&st| kernel_for(&representative(st))).collect())
}

fn powers(x: &Q, k: usize) -> Vec<Q> {
    let mut v = Vec::with_capacity(k + 1);
    v.push(Q::one());
    for i in 0..k {
        let next = &v[i] * x;
        v.push(next);
    }
    v
}

/// Exact one-step distribution over the 17 states from `start`, obtained by
/// enumerating every reproduction outcome.
pub fn one_step_distribution(params: &Parameters, start: TwoLocusState) -> [Q; 17] {
    let kernel = &kernels()[start.index()];
    let one = Q::one();
    let s = params.s();
    let r = params.r();
    let ps = powers(s, 4);
    let pns = powers(&(&one - s), 4);
    let pr = powers(r, 4);
    let pnr = powers(&(&one - r), 4);
    let n = params.n_q();
    let nm1 = &n - &one;
    let pn = powers(&n, 8);
    let pnn = powers(&(&n * &nm1), 4);
    let falling = |b: u8| -> Q {
        let mut acc = Q::one();
        for k in 0..b {
            acc *= &n - Q::from_integer(BigInt::from(k));
        }
        acc
    };
    let half_pow = Q::new(BigInt::one(), BigInt::from(1u64) << kernel.occupied);

    let mut out: [Q; 17] = std::array::from_fn(|_| Q::zero());
    for t in &kernel.terms {
        let sh = t.shape;
        let ff = falling(sh.blocks);
        if ff.is_zero() {
            continue;
        }
        let weight = Q::from_integer(BigInt::from(t.count))
            * &half_pow
            * &ps[sh.selfed as usize]
            * &pns[sh.outcrossed as usize]
            * &pr[sh.recombinant as usize]
            * &pnr[sh.nonrecombinant as usize]
            * ff
            / (&pn[(sh.draws - 2 * sh.pairs) as usize] * &pnn[sh.pairs as usize]);
        out[sh.target.index()] += weight;
    }
    out
}
