//! Explicit lineage configurations and their classification into states.
//!
//! A configuration records, for each of the four sampled lineages
//! (`i1, i2, j1, j2`), the individual and chromosome it sits on, or `None`
//! once its locus has coalesced. Individuals are arbitrary labels.

use crate::model::TwoLocusState::{self, *};

/// Position of a lineage: (individual label, chromosome 0 or 1).
pub type Slot = (u64, u8);

/// Lineage positions in the order `i1, i2, j1, j2`.
pub type Config = [Option<Slot>; 4];

/// A canonical configuration for each of the 17 states.
pub fn representative(state: TwoLocusState) -> Config {
    let s = |ind: u64, ch: u8| Some((ind, ch));
    match state {
        Q1 => [s(0, 0), s(1, 0), s(2, 0), s(3, 0)],
        Q2 => [s(0, 0), s(0, 1), s(2, 0), s(3, 0)],
        Q3 => [s(0, 0), s(1, 0), s(2, 0), s(2, 1)],
        Q4 => [s(0, 0), s(1, 0), s(0, 1), s(2, 0)],
        Q5 => [s(0, 0), s(0, 1), s(1, 0), s(1, 1)],
        Q6 => [s(0, 0), s(1, 0), s(0, 1), s(1, 1)],
        Q7 => [s(0, 0), s(1, 0), s(0, 0), s(2, 0)],
        Q8 => [s(0, 0), s(0, 1), s(0, 0), s(2, 0)],
        Q9 => [s(0, 0), s(2, 0), s(0, 0), s(0, 1)],
        Q10 => [s(0, 0), s(1, 0), s(0, 0), s(1, 1)],
        Q11 => [s(0, 0), s(1, 0), s(0, 0), s(1, 0)],
        Q12 => [s(0, 0), s(0, 1), s(0, 0), s(0, 1)],
        Both => [None, None, None, None],
        OneLeftIDiff => [s(0, 0), s(1, 0), None, None],
        OneLeftISame => [s(0, 0), s(0, 1), None, None],
        OneLeftJDiff => [None, None, s(0, 0), s(1, 0)],
        OneLeftJSame => [None, None, s(0, 0), s(0, 1)],
    }
}

/// Drops a locus pair whose two lineages share a chromosome (coalescence).
/// Returns which loci coalesced.
pub fn merge_coalesced(cfg: &mut Config) -> (bool, bool) {
    let mut hit = (false, false);
    if cfg[0].is_some() && cfg[0] == cfg[1] {
        cfg[0] = None;
        cfg[1] = None;
        hit.0 = true;
    }
    if cfg[2].is_some() && cfg[2] == cfg[3] {
        cfg[2] = None;
        cfg[3] = None;
        hit.1 = true;
    }
    hit
}

/// Maps a configuration (with coalesced pairs already removed) to its state.
///
/// Panics on malformed input such as a locus with a single lineage.
pub fn classify(cfg: &Config) -> TwoLocusState {
    let i_open = cfg[0].is_some() && cfg[1].is_some();
    let j_open = cfg[2].is_some() && cfg[3].is_some();
    assert_eq!(cfg[0].is_some(), cfg[1].is_some(), "locus i half-coalesced: {cfg:?}");
    assert_eq!(cfg[2].is_some(), cfg[3].is_some(), "locus j half-coalesced: {cfg:?}");
    match (i_open, j_open) {
        (false, false) => return Both,
        (true, false) => {
            return if cfg[0].unwrap().0 == cfg[1].unwrap().0 { OneLeftISame } else { OneLeftIDiff };
        }
        (false, true) => {
            return if cfg[2].unwrap().0 == cfg[3].unwrap().0 { OneLeftJSame } else { OneLeftJDiff };
        }
        (true, true) => {}
    }
    // Chromosome content bitmask: 1 = carries an i lineage, 2 = carries a j lineage.
    let mut chroms: Vec<(Slot, u8)> = Vec::with_capacity(4);
    for (k, slot) in cfg.iter().enumerate() {
        let bit = if k < 2 { 1 } else { 2 };
        let slot = slot.unwrap();
        match chroms.iter_mut().find(|(sl, _)| *sl == slot) {
            Some((_, m)) => {
                assert!(*m & bit == 0, "two lineages of one locus on one chromosome: {cfg:?}");
                *m |= bit;
            }
            None => chroms.push((slot, bit)),
        }
    }
    let mut inds: Vec<(u64, Vec<u8>)> = Vec::new();
    for ((ind, _), m) in chroms {
        match inds.iter_mut().find(|(i, _)| *i == ind) {
            Some((_, v)) => v.push(m),
            None => inds.push((ind, vec![m])),
        }
    }
    let mut desc: Vec<Vec<u8>> = inds
        .into_iter()
        .map(|(_, mut v)| {
            v.sort_unstable();
            v
        })
        .collect();
    desc.sort();
    let d: Vec<&[u8]> = desc.iter().map(|v| v.as_slice()).collect();
    match d.as_slice() {
        [[1], [1], [2], [2]] => Q1,
        [[1, 1], [2], [2]] => Q2,
        [[1], [1], [2, 2]] => Q3,
        [[1], [1, 2], [2]] => Q4,
        [[1, 1], [2, 2]] => Q5,
        [[1, 2], [1, 2]] => Q6,
        [[1], [2], [3]] => Q7,
        [[1, 3], [2]] => Q8,
        [[1], [2, 3]] => Q9,
        [[1, 2], [3]] => Q10,
        [[3], [3]] => Q11,
        [[3, 3]] => Q12,
        _ => panic!("unclassifiable configuration {cfg:?}"),
    }
}
