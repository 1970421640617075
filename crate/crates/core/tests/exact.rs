use coaltwo::exact::{
    exact_correlation, exact_covariance, exact_covariance_f64, locus_means, locus_variances, single_locus_moments,
    solve_joint_moments, solve_joint_moments_f64, solve_single_locus, F64_RESIDUAL_TOLERANCE,
};
use coaltwo::model::{colocation_signature, Colocation, Parameters, TwoLocusState};
use coaltwo::rational::{int, q, to_f64, uint, Q};
use num_traits::{One, Signed};
use proptest::prelude::*;

fn p(n: u64, s: Q, r: Q) -> Parameters {
    Parameters::new(n, s, r).unwrap()
}

fn quarter_grid() -> Vec<Q> {
    vec![int(0), q(1, 4), q(1, 2), q(3, 4), int(1)]
}

#[test]
fn closed_form_single_locus_moments_match_the_solver() {
    for n in 2..=50u64 {
        for s in quarter_grid() {
            let params = p(n, s.clone(), int(0));
            let solved = solve_single_locus(&params).unwrap();
            assert_eq!(single_locus_moments(&params, Colocation::Same).unwrap(), solved.same, "N={n} s={s}");
            assert_eq!(single_locus_moments(&params, Colocation::Diff).unwrap(), solved.diff, "N={n} s={s}");
        }
    }
}

#[test]
fn single_locus_moments_are_positive() {
    for n in [2u64, 3, 10, 1000] {
        for s in quarter_grid() {
            let params = p(n, s.clone(), int(0));
            for c in [Colocation::Same, Colocation::Diff] {
                let m = single_locus_moments(&params, c).unwrap();
                assert_eq!(m.variance, &m.second_moment - &m.mean * &m.mean);
                assert!(m.mean.is_positive() && m.second_moment.is_positive());
                if c == Colocation::Diff || !s.is_one() {
                    assert!(m.variance.is_positive(), "N={n} s={s} {c:?}");
                }
            }
        }
    }
}

#[test]
fn single_locus_published_values() {
    // Same individual, N=10, s=1/2: E[T] = 2 (1 - s) N + 2 = 12.
    let params = p(10, q(1, 2), int(0));
    assert_eq!(single_locus_moments(&params, Colocation::Same).unwrap().mean, int(12));
    // Different individuals: E[T] = (2 - s) N + 1 = 16.
    assert_eq!(single_locus_moments(&params, Colocation::Diff).unwrap().mean, int(16));
}

#[test]
fn total_selfing_identities_hold_exactly() {
    for n in 2..=20u64 {
        for r in quarter_grid() {
            let params = p(n, int(1), r.clone());
            let d = int(1) + int(2) * &r - int(2) * &r * &r;
            let q12 = int(6) / &d - int(4);
            let two_r = int(2) * &r - int(1);
            let q5 = int(2) * &two_r * &two_r / ((int(3) * uint(n) + int(1)) * &d);
            assert_eq!(exact_covariance(&params, TwoLocusState::Q12).unwrap(), q12, "N={n} r={r}");
            assert_eq!(exact_covariance(&params, TwoLocusState::Q5).unwrap(), q5, "N={n} r={r}");
        }
    }
}

#[test]
fn no_recombination_identities_hold_exactly() {
    for n in 2..=20u64 {
        for s in quarter_grid() {
            let params = p(n, s.clone(), int(0));
            let nq = uint(n);
            let q11 = (int(4) - int(4) * &s + &s * &s) * &nq * &nq + (int(2) - int(3) * &s) * &nq + int(2);
            let q12 = (int(4) - int(4) * &s) * &nq * &nq + (int(2) - int(2) * &s) * &nq + int(2);
            assert_eq!(exact_covariance(&params, TwoLocusState::Q11).unwrap(), q11, "N={n} s={s}");
            assert_eq!(exact_covariance(&params, TwoLocusState::Q12).unwrap(), q12, "N={n} s={s}");
        }
    }
}

#[test]
fn cli_reference_values() {
    assert_eq!(exact_covariance(&p(10, q(1, 2), int(0)), TwoLocusState::Q12).unwrap(), int(212));
    assert_eq!(exact_covariance(&p(5, q(1, 2), int(0)), TwoLocusState::Q12).unwrap(), int(57));
}

#[test]
fn cauchy_schwarz_and_growth_bound() {
    for n in [2u64, 3, 5, 12, 40] {
        for s in quarter_grid() {
            for r in quarter_grid() {
                let params = p(n, s.clone(), r.clone());
                let joint = solve_joint_moments(&params).unwrap();
                let bound = int(24) * uint(n) * uint(n);
                for st in TwoLocusState::LIVE {
                    let e = joint.get(st).unwrap();
                    let (ci, cj) = colocation_signature(st).unwrap();
                    let m2i = single_locus_moments(&params, ci).unwrap().second_moment;
                    let m2j = single_locus_moments(&params, cj).unwrap().second_moment;
                    assert!(e.is_positive());
                    // E^2 <= E[Ti^2] E[Tj^2] avoids the square root.
                    assert!(e * e <= &m2i * &m2j, "{st} N={n} s={s} r={r}");
                    assert!(e <= &bound, "{st} N={n} s={s} r={r}");
                }
            }
        }
    }
}

#[test]
fn covariance_is_consistent_with_the_joint_moment() {
    let params = p(7, q(2, 5), q(1, 3));
    let joint = solve_joint_moments(&params).unwrap();
    for st in TwoLocusState::LIVE {
        let (mi, mj) = locus_means(&params, st).unwrap();
        assert_eq!(exact_covariance(&params, st).unwrap(), joint.get(st).unwrap() - mi * mj);
    }
}

#[test]
fn reflection_in_r_fails_below_total_selfing() {
    let a = p(6, q(1, 3), q(1, 5));
    let b = p(6, q(1, 3), q(4, 5));
    for st in TwoLocusState::LIVE {
        assert_ne!(exact_covariance(&a, st).unwrap(), exact_covariance(&b, st).unwrap(), "{st}");
    }
}

#[test]
fn correlation_certificates() {
    let params = p(9, q(1, 3), q(1, 7));
    for st in TwoLocusState::LIVE {
        let c = exact_correlation(&params, st).unwrap();
        let (vi, vj) = locus_variances(&params, st).unwrap();
        assert_eq!(c.squared, &c.covariance * &c.covariance / (&vi * &vj));
        let (ci, cj) = colocation_signature(st).unwrap();
        assert_eq!(c.rational.is_some(), ci == cj, "{st}");
        if let Some(v) = &c.rational {
            assert_eq!(&(v * v), &c.squared);
        }
        let dec: f64 = c.decimal.parse().unwrap();
        assert!((dec - c.value()).abs() <= 1e-15 * dec.abs().max(1.0));
        assert!(c.value().abs() <= 1.0);
    }
}

#[test]
fn float_path_agrees_with_exact_path() {
    for (n, s, r) in [(5u64, q(1, 2), int(0)), (40, q(1, 3), q(1, 5)), (300, q(9, 10), q(1, 2)), (2, int(1), int(1))] {
        let params = p(n, s, r);
        let exact = solve_joint_moments(&params).unwrap();
        let float = solve_joint_moments_f64(&params).unwrap();
        assert!(float.residual <= F64_RESIDUAL_TOLERANCE);
        for st in TwoLocusState::LIVE {
            let e = to_f64(exact.get(st).unwrap());
            let f = float.joint[st.index()];
            assert!(((f - e) / e).abs() < 1e-12, "{st} {params}: {f} vs {e}");
            let ce = to_f64(&exact_covariance(&params, st).unwrap());
            let cf = exact_covariance_f64(&params, st).unwrap();
            assert!((cf - ce).abs() <= 1e-9 * ce.abs().max(1.0), "{st} {params}: {cf} vs {ce}");
        }
    }
}

#[test]
fn float_path_meets_the_residual_bound_at_large_n() {
    for n in [10_000u64, 1_000_000] {
        let params = p(n, q(3, 10), q(1, 10));
        let f = solve_joint_moments_f64(&params).unwrap();
        assert!(f.residual <= F64_RESIDUAL_TOLERANCE, "N={n} residual {}", f.residual);
    }
}

fn unit_rational() -> impl Strategy<Value = Q> {
    (0i64..=24, 1i64..=24).prop_map(|(a, b)| if a >= b { int(1) } else { q(a, b) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn locus_swap_symmetry(n in 2u64..60, s in unit_rational(), r in unit_rational()) {
        let params = p(n, s, r);
        let cov = coaltwo::exact::exact_covariances(&params).unwrap();
        for st in TwoLocusState::LIVE {
            prop_assert_eq!(&cov[st.index()], &cov[st.swap_loci().index()]);
        }
    }

    #[test]
    fn total_selfing_reflection_symmetry(n in 2u64..60, r in unit_rational()) {
        let a = coaltwo::exact::exact_covariances(&p(n, int(1), r.clone())).unwrap();
        let b = coaltwo::exact::exact_covariances(&p(n, int(1), Q::one() - r)).unwrap();
        use TwoLocusState::*;
        for st in [Q2, Q3, Q5, Q8, Q9, Q12] {
            prop_assert_eq!(&a[st.index()], &b[st.index()]);
        }
    }

    #[test]
    fn joint_moments_respect_cauchy_schwarz(n in 2u64..200, s in unit_rational(), r in unit_rational()) {
        let params = p(n, s, r);
        let joint = solve_joint_moments(&params).unwrap();
        for st in TwoLocusState::LIVE {
            let e = joint.get(st).unwrap();
            let (ci, cj) = colocation_signature(st).unwrap();
            let m2i = single_locus_moments(&params, ci).unwrap().second_moment;
            let m2j = single_locus_moments(&params, cj).unwrap().second_moment;
            prop_assert!(e.is_positive());
            prop_assert!(e * e <= m2i * m2j);
        }
    }
}
