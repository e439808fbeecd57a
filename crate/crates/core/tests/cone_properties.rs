use curvcones::symcone::{
    cone_membership, dichotomy_check, elementary_symmetric, elementary_symmetric_upto, k_smallest_sum, shift,
    shift_threshold, ConeStatus, Dichotomy, Geometry, Spectrum,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_sigma(values: &[f64], j: usize) -> f64 {
    let n = values.len();
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == j)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| values[i]).product::<f64>())
        .sum()
}

fn vector(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sigma_matches_subset_sum(v in vector(8)) {
        for j in 0..=v.len() {
            let a = elementary_symmetric(&v, j).unwrap();
            let b = brute_sigma(&v, j);
            let scale = v.iter().map(|x| x.abs()).fold(1.0f64, f64::max).powi(j as i32) * (1u64 << v.len()) as f64;
            prop_assert!((a - b).abs() <= 1e-12 * scale, "j={} {} vs {}", j, a, b);
        }
    }

    #[test]
    fn sigma_scales_homogeneously(v in vector(10), c in 0.01f64..50.0) {
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let base = elementary_symmetric_upto(&v, v.len());
        let sc = elementary_symmetric_upto(&scaled, v.len());
        for j in 0..=v.len() {
            let want = c.powi(j as i32) * base[j];
            // Cancellation makes the reference small relative to its terms; compare to the
            // magnitude of σ_j(|v|).
            let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            let mag = c.powi(j as i32) * elementary_symmetric(&abs, j).unwrap();
            prop_assert!((sc[j] - want).abs() <= 1e-10 * mag.max(f64::MIN_POSITIVE), "j={}", j);
        }
    }

    #[test]
    fn operations_are_permutation_invariant(v in prop::collection::vec(-3.0f64..3.0, 3..10), seed in any::<u64>()) {
        let mut w = v.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..w.len()).rev() {
            w.swap(i, rng.random_range(0..=i));
        }
        let (a, b) = (Spectrum::new(v.clone()).unwrap(), Spectrum::new(w.clone()).unwrap());
        prop_assert_eq!(a.values(), b.values());
        for j in 1..=v.len() {
            let (x, y) = (elementary_symmetric(&v, j).unwrap(), elementary_symmetric(&w, j).unwrap());
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()) * 4f64.powi(j as i32));
            prop_assert_eq!(cone_membership(&a, j, 1e-9).unwrap(), cone_membership(&b, j, 1e-9).unwrap());
            prop_assert_eq!(k_smallest_sum(&a, j).unwrap(), k_smallest_sum(&b, j).unwrap());
        }
        let n = v.len();
        for k in 1..=(n - 2) {
            prop_assert_eq!(dichotomy_check(&a, k, 1e-9).unwrap(), dichotomy_check(&b, k, 1e-9).unwrap());
            let al = shift_threshold(n, k, Geometry::Riemannian).unwrap();
            prop_assert_eq!(shift(&a, &al), shift(&b, &al));
        }
    }

    #[test]
    fn top_cone_is_the_positive_orthant(v in prop::collection::vec(-1.0f64..3.0, 1..9)) {
        let s = Spectrum::new(v.clone()).unwrap();
        let interior = cone_membership(&s, v.len(), f64::MIN_POSITIVE).unwrap().status == ConeStatus::Interior;
        prop_assert_eq!(interior, v.iter().all(|x| *x > 0.0));
    }

    #[test]
    fn positive_vectors_are_in_the_top_cone(v in prop::collection::vec(1e-3f64..3.0, 1..9)) {
        let s = Spectrum::new(v.clone()).unwrap();
        prop_assert_eq!(cone_membership(&s, v.len(), f64::MIN_POSITIVE).unwrap().status, ConeStatus::Interior);
    }
}

fn random_spectrum(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(3..=10);
    let lo = rng.random_range(-1.0..0.5);
    (0..n).map(|_| rng.random_range(lo..2.0)).collect()
}

#[test]
fn cones_nest_and_grow_with_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counterexamples = 0;
    let mut shifted_hits = 0;
    for _ in 0..100_000 {
        let v = random_spectrum(&mut rng);
        let s = Spectrum::new(v.clone()).unwrap();
        let n = v.len();
        let statuses: Vec<ConeStatus> = (1..=n).map(|j| cone_membership(&s, j, 1e-12).unwrap().status).collect();
        for j2 in 0..n {
            if statuses[j2] == ConeStatus::Interior && statuses[..j2].iter().any(|s| *s != ConeStatus::Interior) {
                counterexamples += 1;
            }
        }
        let inside: Vec<bool> = (1..=(n - 2))
            .map(|k| {
                let a = shift_threshold(n, k, Geometry::Riemannian).unwrap();
                cone_membership(&shift(&s, &a), 2, 1e-12).unwrap().status == ConeStatus::Interior
            })
            .collect();
        if inside[0] {
            shifted_hits += 1;
        }
        for k1 in 0..inside.len() {
            if inside[k1] && inside[k1..].iter().any(|x| !x) {
                counterexamples += 1;
            }
        }
    }
    assert_eq!(counterexamples, 0);
    assert!(shifted_hits > 1000, "sampler rarely reaches the smallest cone ({shifted_hits})");
}

#[test]
fn certified_inputs_never_violate_the_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut certified = 0;
    let mut trials = 0;
    while certified < 100_000 {
        trials += 1;
        let v = random_spectrum(&mut rng);
        let n = v.len();
        let k = rng.random_range(1..=(n - 2));
        // Half the draws are pushed onto the degenerate boundary profile.
        let v = if trials % 2 == 0 {
            let c = rng.random_range(0.1..3.0);
            (0..n).map(|i| if i < k { 0.0 } else { c }).collect()
        } else {
            v
        };
        let s = Spectrum::new(v).unwrap();
        let a = shift_threshold(n, k, Geometry::Riemannian).unwrap();
        let shifted = shift(&s, &a);
        let s1: f64 = shifted.total();
        let s2 = elementary_symmetric(shifted.values(), 2).unwrap();
        if s1 >= 0.0 && s2 >= -1e-12 {
            certified += 1;
            assert_ne!(dichotomy_check(&s, k, 1e-9).unwrap(), Dichotomy::Violation, "{:?} k={k}", s.values());
        }
    }
}
