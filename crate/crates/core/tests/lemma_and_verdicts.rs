use curvcones::classify::{betti_vanishing, classify_kahler, classify_riemannian, Conclusion, Evidence};
use curvcones::lemmalab::{
    f_double_prime_zero, f_prime_zero, f_value, fd_first_derivative, fd_second_derivative, matches_degenerate_profile,
    quadratic_fit_residual, verify_batch, InterpolationProblem, T_STEP,
};
use curvcones::symcone::{ConeStatus, Geometry, Spectrum};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn problem_strategy() -> impl Strategy<Value = (Vec<f64>, usize)> {
    (3usize..=10).prop_flat_map(|n| (prop::collection::vec(-1.0f64..3.0, n), 1..=(n - 2))).prop_filter(
        "positive total",
        |(v, _)| v.iter().sum::<f64>() > 0.1,
    )
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn f_is_an_exact_quadratic((v, k) in problem_strategy(), t in 0.0f64..1.0) {
        let p = InterpolationProblem::new(&Spectrum::new(v).unwrap(), k).unwrap();
        let scale = p.lambda().iter().map(|x| x.abs()).fold(1.0, f64::max).powi(2) * p.size().pow(2) as f64;
        prop_assert!(quadratic_fit_residual(&p, t).unwrap().abs() <= 1e-12 * scale);
        prop_assert!(f_value(&p, 0.0).unwrap().abs() <= 1e-12 * scale);
        let fd = fd_first_derivative(&p, T_STEP).unwrap();
        prop_assert!((f_prime_zero(&p) - fd).abs() <= 1e-6);
    }

    #[test]
    fn second_derivative_closed_form_under_hypothesis(
        n in 4usize..=10,
        head in prop::collection::vec(0.0f64..0.8, 1..3),
        tail in prop::collection::vec(0.5f64..2.0, 8),
    ) {
        // Head entries ±x with zero sum, then a tail at least as large.
        let k = 2 * head.len();
        prop_assume!(k <= n - 2);
        let mut v: Vec<f64> = head.iter().flat_map(|x| [-x, *x]).collect();
        let top = head.iter().fold(0.0f64, |m, x| m.max(*x));
        v.extend(tail.iter().take(n - k).map(|x| top + x));
        let p = InterpolationProblem::new(&Spectrum::new(v).unwrap(), k).unwrap();
        let closed = f_double_prime_zero(&p).unwrap();
        prop_assert!((closed - fd_second_derivative(&p, T_STEP).unwrap()).abs() <= 1e-5);
    }
}

#[test]
fn random_certified_batches_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 3..=10 {
        for k in 1..=(n - 2) {
            let rep = verify_batch(n, k, 2000, &mut rng).unwrap();
            assert!(rep.passes(), "{rep:?}");
        }
    }
}

#[test]
fn vanishing_first_derivative_forces_degenerate_profile() {
    // Rejection sampling near the degenerate profile: perturb (0^k, 1^{N−k}) and keep the
    // certified draws whose f'(0) nearly vanishes. The tail can then sit only O(√f'(0)) away
    // from the profile, since f'' is minus its squared distance.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut kept = 0;
    for _ in 0..20_000 {
        let n = rng.random_range(3..=8);
        let k = rng.random_range(1..=(n - 2));
        let eps = 10f64.powf(rng.random_range(-14.0..-2.0));
        let v: Vec<f64> = (0..n)
            .map(|i| if i < k { 0.0 } else { 1.0 } + eps * rng.random_range(-1.0..1.0))
            .collect();
        let p = InterpolationProblem::new(&Spectrum::new(v).unwrap(), k).unwrap();
        if p.certified(0.0) && f_prime_zero(&p).abs() <= 1e-9 {
            kept += 1;
            let tol = 10.0 * f_prime_zero(&p).abs().sqrt() + 1e-12;
            assert!(matches_degenerate_profile(p.lambda(), k, tol), "{:?}", p.lambda());
        }
    }
    assert!(kept > 100, "kept {kept}");
}

/// The two Betti bullets, written out independently.
fn betti_literal(n: usize, k: usize) -> Vec<usize> {
    let half = n.div_ceil(2);
    let mut out = Vec::new();
    for p in 1..=(n - 1) {
        let first = k <= half;
        let second = k > half && k < n && (p <= n - k || (k <= p && p < n));
        if first || second {
            out.push(p);
        }
    }
    out
}

#[test]
fn betti_table_matches_transcription() {
    for n in 3..=10 {
        for k in 1..n {
            let b = betti_vanishing(n, k);
            assert_eq!(b.indices, betti_literal(n, k), "n={n} k={k}");
            assert!(b.caveat.is_none());
            if k <= n.div_ceil(2) {
                assert_eq!(b.indices, (1..n).collect::<Vec<_>>());
            }
        }
        assert!(betti_vanishing(n, n).caveat.is_some());
    }
}

fn boundary_or_interior_spectrum(rng: &mut ChaCha8Rng, interior: bool) -> Vec<f64> {
    if interior {
        vec![1.0, 1.0, 1.0 + rng.random_range(0.0..0.2)]
    } else if rng.random_bool(0.5) {
        vec![0.0, 0.0, rng.random_range(0.5..2.0)]
    } else {
        vec![0.0; 3]
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn strengthening_evidence_never_weakens_the_verdict(seed in any::<u64>(), points in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut spectra: Vec<Vec<f64>> = (0..points)
            .map(|_| {
                let interior = rng.random_bool(0.3);
                boundary_or_interior_spectrum(&mut rng, interior)
            })
            .collect();
        let classify = |s: &[Vec<f64>]| {
            let e = Evidence::new(
                Geometry::Riemannian, 3, true, 2,
                s.iter().map(|v| Spectrum::new(v.clone()).unwrap()).collect(), 1e-9,
            ).unwrap();
            classify_riemannian(&e).unwrap()
        };
        let before = classify(&spectra);
        let idx = rng.random_range(0..points);
        spectra[idx] = boundary_or_interior_spectrum(&mut rng, true);
        let after = classify(&spectra);
        prop_assert!(after.strength() >= before.strength(), "{:?} -> {:?}", before, after);
        let again = classify(&spectra);
        prop_assert_eq!(serde_json::to_string(&after).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn stored_verdicts_recompute_exactly(v in prop::collection::vec(-1.0f64..2.0, 6)) {
        let s = Spectrum::new(v.clone()).unwrap();
        let e = Evidence::new(Geometry::Riemannian, 4, true, 2, vec![s.clone()], 1e-9).unwrap();
        prop_assert!(e.check_consistency().is_ok());
        let k4: Vec<f64> = v[..4].to_vec();
        let e = Evidence::new(Geometry::Kahler, 2, true, 2, vec![Spectrum::new(k4).unwrap()], 1e-9).unwrap();
        prop_assert!(e.check_consistency().is_ok());
    }
}

#[test]
fn kahler_branches() {
    let ev = |v: Vec<f64>, n: usize| {
        Evidence::new(Geometry::Kahler, n, true, 2, vec![Spectrum::new(v).unwrap(); 3], 1e-9).unwrap()
    };
    let fs = |n: usize| {
        let mut v = vec![1.0; n * n];
        v[n * n - 1] = (n + 1) as f64;
        ev(v, n)
    };
    let e = fs(2);
    assert!(e.verdicts.iter().all(|v| v.status == ConeStatus::Interior), "{:?}", e.verdicts);
    assert_eq!(classify_kahler(&e).unwrap().conclusion, Conclusion::BiholomorphicCPn);
    // The condition is only sufficient: Fubini–Study itself fails it once n ≥ 3.
    for n in 3..=5 {
        let e = fs(n);
        assert!(e.verdicts.iter().all(|v| v.status == ConeStatus::Outside));
        assert_eq!(classify_kahler(&e).unwrap().conclusion, Conclusion::NoConclusion);
    }
    let e = ev(vec![0.0, 0.0, 2.0, 2.0], 2);
    assert!(e.verdicts[0].sigmas[1].abs() <= 1e-10);
    assert_eq!(classify_kahler(&e).unwrap().conclusion, Conclusion::CP1xCP1);
    assert_eq!(classify_kahler(&ev(vec![0.0; 4], 2)).unwrap().conclusion, Conclusion::FlatTorus);
}
