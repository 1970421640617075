//! Direct lineage tracing under the reproduction rules, independent of the
//! transition tables.
//!
//! Each generation, every individual that carries sampled lineages picks its
//! parents: with probability `s` both of its chromosomes come from one
//! parent drawn uniformly from the `N` individuals, otherwise chromosome 0
//! comes from the first and chromosome 1 from the second of an ordered pair
//! of distinct parents. A chromosome is recombinant with probability `r`; it
//! copies parental chromosome `c` (uniform) at locus `i`, and `c` or `1 - c`
//! at locus `j` depending on recombination. A locus coalesces once its two
//! lineages sit on the same parental chromosome.

use rand::Rng;

use crate::chain::config::{classify, merge_coalesced, representative, Config};
use crate::error::{invalid, Error, Result};
use crate::model::{Parameters, TwoLocusState};

use super::{TrialOutcome, STEP_CAP};

/// Floating-point copy of the parameters used by the tracer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerativeModel {
    n: u64,
    s: f64,
    r: f64,
}

impl GenerativeModel {
    pub fn new(params: &Parameters) -> Self {
        GenerativeModel { n: params.n(), s: params.s_f64(), r: params.r_f64() }
    }

    /// Advances a configuration by one generation and merges coalesced loci.
    pub fn step<R: Rng + ?Sized>(&self, cfg: &Config, rng: &mut R) -> Config {
        // Distinct individuals carrying lineages, in order of appearance.
        let mut inds: [u64; 4] = [0; 4];
        let mut k = 0;
        for slot in cfg.iter().flatten() {
            if !inds[..k].contains(&slot.0) {
                inds[k] = slot.0;
                k += 1;
            }
        }
        // Parent of each chromosome of each carrying individual.
        let mut parents: [[u64; 2]; 4] = [[0; 2]; 4];
        for p in parents.iter_mut().take(k) {
            if rng.random_bool(self.s) {
                let a = rng.random_range(0..self.n);
                *p = [a, a];
            } else {
                let a = rng.random_range(0..self.n);
                let mut b = rng.random_range(0..self.n - 1);
                if b >= a {
                    b += 1;
                }
                *p = [a, b];
            }
        }
        // Meiosis outcome per chromosome: (recombinant, parental chromosome).
        let mut meiosis: [[Option<(bool, u8)>; 2]; 4] = [[None; 2]; 4];
        let mut next: Config = [None; 4];
        for (lineage, slot) in cfg.iter().enumerate() {
            let Some((ind, ch)) = *slot else { continue };
            let x = inds[..k].iter().position(|&v| v == ind).expect("indexed above");
            let (rec, c) = *meiosis[x][ch as usize].get_or_insert_with(|| {
                let rec = rng.random_bool(self.r);
                let c = rng.random_range(0..2u8);
                (rec, c)
            });
            let parent = parents[x][ch as usize];
            let is_i = lineage < 2;
            let pch = if is_i || !rec { c } else { 1 - c };
            next[lineage] = Some((parent, pch));
        }
        merge_coalesced(&mut next);
        next
    }

    /// One trial from a live state: generations until each locus coalesces.
    pub fn run_trial<R: Rng + ?Sized>(&self, start: TwoLocusState, rng: &mut R) -> Result<TrialOutcome> {
        if !start.is_live() {
            return invalid(format!("trials must start from a live state, got {start}"));
        }
        let mut cfg = representative(start);
        let (mut ti, mut tj) = (0u64, 0u64);
        while cfg.iter().any(Option::is_some) {
            if cfg[0].is_some() {
                ti += 1;
            }
            if cfg[2].is_some() {
                tj += 1;
            }
            if ti.max(tj) > STEP_CAP {
                return Err(Error::Invariant(format!("trial exceeded {STEP_CAP} generations")));
            }
            cfg = self.step(&cfg, rng);
        }
        Ok(TrialOutcome { t_i: ti, t_j: tj })
    }

    /// The state reached after one generation from `start`.
    pub fn one_step<R: Rng + ?Sized>(&self, start: TwoLocusState, rng: &mut R) -> TwoLocusState {
        classify(&self.step(&representative(start), rng))
    }
}
