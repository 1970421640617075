use std::collections::HashMap;

use coaltwo::exact::{exact_correlation, locus_means};
use coaltwo::mc::{
    estimate_correlation, one_step_empirical, one_step_z_max, run_trial, trial_rng, Execution, GenerativeModel,
    MatrixSampler, Sampler, TrialOutcome,
};
use coaltwo::model::{Parameters, TwoLocusState};
use coaltwo::rational::{int, q, to_f64, Q};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use TwoLocusState::*;

fn p(n: u64, s: Q, r: Q) -> Parameters {
    Parameters::new(n, s, r).unwrap()
}

/// Bin of `(t_i, t_j)` on `{1..50}^2`, with one overflow bin per axis.
fn cell(o: TrialOutcome) -> (u64, u64) {
    (o.t_i.min(51), o.t_j.min(51))
}

fn histogram(trials: u64, seed: u64, mut draw: impl FnMut(&mut rand_chacha::ChaCha8Rng) -> TrialOutcome) -> HashMap<(u64, u64), u64> {
    let mut h = HashMap::new();
    for k in 0..trials {
        *h.entry(cell(draw(&mut trial_rng(seed, k)))).or_insert(0) += 1;
    }
    h
}

/// p-value of the two-sample chi-square homogeneity test for equal sample
/// sizes. Cells with fewer than 10 combined counts are pooled.
fn two_sample_p(a: &HashMap<(u64, u64), u64>, b: &HashMap<(u64, u64), u64>) -> f64 {
    let mut keys: Vec<_> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut stat = 0.0;
    let mut bins = 0usize;
    let (mut pa, mut pb) = (0u64, 0u64);
    let mut add = |x: u64, y: u64| {
        let (x, y) = (x as f64, y as f64);
        stat += (x - y) * (x - y) / (x + y);
        bins += 1;
    };
    for k in keys {
        let (x, y) = (a.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
        if x + y < 10 {
            pa += x;
            pb += y;
        } else {
            add(x, y);
        }
    }
    if pa + pb > 0 {
        add(pa, pb);
    }
    ChiSquared::new((bins - 1) as f64).unwrap().sf(stat)
}

fn equivalence_cases() -> Vec<(Parameters, TwoLocusState)> {
    vec![
        (p(5, q(1, 2), q(1, 4)), Q12),
        (p(5, q(1, 2), q(1, 4)), Q5),
        (p(8, int(0), q(1, 2)), Q1),
        (p(8, q(9, 10), q(1, 10)), Q11),
        (p(4, int(1), q(1, 3)), Q12),
        (p(6, q(1, 3), int(0)), Q12),
        (p(6, q(1, 3), int(1)), Q7),
        (p(10, q(1, 5), q(1, 5)), Q2),
        (p(3, q(2, 3), q(1, 2)), Q10),
        (p(12, q(1, 2), q(3, 4)), Q6),
    ]
}

#[test]
fn matrix_walk_and_lineage_tracer_agree_in_distribution() {
    let m = 100_000;
    for (params, start) in equivalence_cases() {
        let sampler = MatrixSampler::new(&params).unwrap();
        let gen = GenerativeModel::new(&params);
        let a = histogram(m, 1, |rng| sampler.run_trial(start, rng).unwrap());
        let b = histogram(m, 2, |rng| gen.run_trial(start, rng).unwrap());
        let pv = two_sample_p(&a, &b);
        assert!(pv > 0.001, "{params} from {start}: p = {pv}");
    }
}

#[test]
fn geometric_skipping_matches_stepwise_walk() {
    let m = 100_000;
    for (params, start) in [(p(20, q(1, 2), q(1, 10)), Q12), (p(15, int(0), q(1, 3)), Q1), (p(6, int(1), q(1, 4)), Q5)] {
        let sampler = MatrixSampler::new(&params).unwrap();
        let a = histogram(m, 3, |rng| sampler.run_trial(start, rng).unwrap());
        let b = histogram(m, 4, |rng| sampler.run_trial_stepwise(start, rng).unwrap());
        let pv = two_sample_p(&a, &b);
        assert!(pv > 0.001, "{params} from {start}: p = {pv}");
    }
}

#[test]
fn sample_means_match_the_single_locus_means() {
    let params = p(30, q(1, 3), q(1, 5));
    let sampler = MatrixSampler::new(&params).unwrap();
    let m = 20_000u64;
    for start in TwoLocusState::LIVE {
        let (mi, mj) = locus_means(&params, start).unwrap();
        let (mut si, mut sj, mut qi, mut qj) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..m {
            let o = sampler.run_trial(start, &mut trial_rng(9, k)).unwrap();
            let (a, b) = (o.t_i as f64, o.t_j as f64);
            si += a;
            sj += b;
            qi += a * a;
            qj += b * b;
        }
        let mf = m as f64;
        for (sum, sq, want) in [(si, qi, to_f64(&mi)), (sj, qj, to_f64(&mj))] {
            let mean = sum / mf;
            let se = ((sq / mf - mean * mean) / mf).sqrt();
            assert!((mean - want).abs() <= 4.0 * se, "{start}: {mean} vs {want} (se {se})");
        }
    }
}

#[test]
fn mean_steps_grow_linearly_in_n() {
    let m = 10_000u64;
    for n in [50u64, 200] {
        for s in [int(0), q(1, 2), q(9, 10)] {
            let params = p(n, s.clone(), q(1, 10));
            let sampler = MatrixSampler::new(&params).unwrap();
            for start in [Q1, Q12] {
                let total: u64 = (0..m)
                    .map(|k| {
                        let o = sampler.run_trial_stepwise(start, &mut trial_rng(5, k)).unwrap();
                        o.t_i.max(o.t_j)
                    })
                    .sum();
                let mean = total as f64 / m as f64;
                assert!(mean <= 8.0 * n as f64, "N={n} s={s} {start}: {mean}");
            }
        }
    }
}

#[test]
fn trials_start_at_one_and_tie_without_recombination() {
    for (params, tie) in [(p(7, q(1, 2), int(0)), true), (p(7, q(1, 2), q(1, 3)), false)] {
        let sampler = MatrixSampler::new(&params).unwrap();
        let gen = GenerativeModel::new(&params);
        for start in TwoLocusState::LIVE {
            for k in 0..500 {
                for o in [
                    sampler.run_trial(start, &mut trial_rng(7, k)).unwrap(),
                    gen.run_trial(start, &mut trial_rng(7, k)).unwrap(),
                ] {
                    assert!(o.t_i >= 1 && o.t_j >= 1);
                    if tie && matches!(start, Q11 | Q12) {
                        assert_eq!(o.t_i, o.t_j, "{start}");
                    }
                }
            }
        }
    }
}

#[test]
fn estimates_are_reproducible_across_thread_counts() {
    let params = p(40, q(1, 4), q(1, 20));
    let base = estimate_correlation(&params, Q12, 20_000, 77, Sampler::Matrix, Execution::Sequential).unwrap();
    for threads in [1, 2, 4, 8] {
        let e = estimate_correlation(&params, Q12, 20_000, 77, Sampler::Matrix, Execution::with_threads(threads)).unwrap();
        assert_eq!(e.sums, base.sums);
        assert_eq!(e.pearson.map(f64::to_bits), base.pearson.map(f64::to_bits));
        assert_eq!(e.std_error.map(f64::to_bits), base.std_error.map(f64::to_bits));
    }
    let again = estimate_correlation(&params, Q12, 20_000, 77, Sampler::Matrix, Execution::Sequential).unwrap();
    assert_eq!(again, base);
    let other = estimate_correlation(&params, Q12, 20_000, 78, Sampler::Matrix, Execution::Sequential).unwrap();
    assert_ne!(other.sums, base.sums);
}

#[test]
fn matrix_estimates_agree_with_the_exact_correlation() {
    for (params, start) in [(p(20, q(1, 2), q(1, 10)), Q12), (p(20, q(1, 2), q(1, 10)), Q5), (p(10, int(0), q(1, 2)), Q1)] {
        let want = exact_correlation(&params, start).unwrap().value();
        let e = estimate_correlation(&params, start, 100_000, 11, Sampler::Matrix, Execution::with_threads(4)).unwrap();
        let z = (e.pearson.unwrap() - want) / e.std_error.unwrap();
        assert!(z.abs() <= 4.0, "{params} {start}: z = {z}");
    }
}

#[test]
fn lineage_tracer_estimates_agree_with_the_exact_correlation() {
    let params = p(12, q(2, 5), q(1, 6));
    let want = exact_correlation(&params, Q12).unwrap().value();
    let e = estimate_correlation(&params, Q12, 40_000, 12, Sampler::Generative, Execution::with_threads(4)).unwrap();
    let z = (e.pearson.unwrap() - want) / e.std_error.unwrap();
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn extended_rows_match_one_generation_of_the_lineage_tracer() {
    for params in [p(6, q(1, 3), q(1, 4)), p(4, int(1), q(1, 2)), p(9, int(0), int(1))] {
        for start in TwoLocusState::LIVE {
            let est = one_step_empirical(&params, start, 50_000, 13, Execution::with_threads(4)).unwrap();
            let z = one_step_z_max(&params, start, &est).unwrap();
            assert!(z <= 5.0, "{params} {start}: z = {z}");
        }
    }
}

#[test]
fn convenience_trial_matches_the_sampler() {
    let params = p(9, q(1, 2), q(1, 5));
    let sampler = MatrixSampler::new(&params).unwrap();
    for k in 0..50 {
        assert_eq!(
            run_trial(&params, Q12, &mut trial_rng(3, k)).unwrap(),
            sampler.run_trial(Q12, &mut trial_rng(3, k)).unwrap()
        );
    }
}
