use std::collections::BTreeSet;

use noether::algebra::{rat, Mat};
use noether::invariants::{necklace_count, necklaces, random_invertible, MatrixTuple};
use noether::orbit::{intersects_deterministic, intersects_randomized, signature};
use noether::rng::SeedRng;
use proptest::prelude::*;

/// Orbits of rotation on all words, counted by brute force.
fn brute_necklaces(r: usize, l: usize) -> usize {
    let mut seen = BTreeSet::new();
    let total = r.pow(l as u32);
    for code in 0..total {
        let word: Vec<usize> = (0..l).map(|i| (code / r.pow(i as u32)) % r).collect();
        let canon = (0..l).map(|k| [&word[k..], &word[..k]].concat()).min().unwrap();
        seen.insert(canon);
    }
    seen.len()
}

#[test]
fn necklace_counts_match_brute_force() {
    for r in 1..=4 {
        for l in 1..=8 {
            let brute = brute_necklaces(r, l);
            assert_eq!(necklace_count(r as u64, l as u64) as usize, brute, "r={r} l={l}");
            if r.pow(l as u32) <= 5000 {
                assert_eq!(necklaces(r, l).len(), brute);
            }
        }
    }
}

#[test]
fn signature_is_conjugation_invariant() {
    let mut rng = SeedRng::new(31);
    for i in 0..50 {
        let m = 1 + i % 3;
        let a = MatrixTuple::random(m, 2, -4, 4, &mut rng);
        let p = random_invertible(m, 3, &mut rng);
        let b = a.conjugate(&p).unwrap();
        assert_eq!(signature(&a, None).unwrap(), signature(&b, None).unwrap());
    }
}

#[test]
fn deterministic_is_reflexive_and_symmetric() {
    let mut rng = SeedRng::new(32);
    for i in 0..100 {
        let m = 1 + i % 3;
        let a = MatrixTuple::random(m, 2, -3, 3, &mut rng);
        let b = MatrixTuple::random(m, 2, -3, 3, &mut rng);
        assert!(intersects_deterministic(&a, &a, None).unwrap().intersect);
        assert_eq!(
            intersects_deterministic(&a, &b, None).unwrap().intersect,
            intersects_deterministic(&b, &a, None).unwrap().intersect
        );
    }
}

#[test]
fn randomized_false_is_never_wrong() {
    let mut rng = SeedRng::new(33);
    for i in 0..60 {
        let a = MatrixTuple::random(2, 2, -2, 2, &mut rng);
        let b = MatrixTuple::random(2, 2, -2, 2, &mut rng);
        if !intersects_randomized(&a, &b, 3, i).unwrap() {
            assert!(!intersects_deterministic(&a, &b, None).unwrap().intersect);
        }
    }
}

#[test]
fn shape_mismatch_rejected() {
    let a = MatrixTuple::zeros(2, 1);
    let b = MatrixTuple::zeros(3, 1);
    assert!(intersects_deterministic(&a, &b, None).is_err());
    assert!(intersects_randomized(&a, &b, 2, 0).is_err());
}

#[test]
fn randomized_examples() {
    let d10 = MatrixTuple::new(vec![Mat::diag(&[rat(1), rat(0)])]).unwrap();
    let d11 = MatrixTuple::new(vec![Mat::diag(&[rat(1), rat(1)])]).unwrap();
    assert!(!intersects_randomized(&d10, &d11, 5, 0).unwrap());
    let mut rng = SeedRng::new(34);
    let a = MatrixTuple::random(3, 2, -3, 3, &mut rng);
    let p = random_invertible(3, 2, &mut rng);
    for seed in 0..3 {
        assert!(intersects_randomized(&a, &a.conjugate(&p).unwrap(), 2, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_scales_traces(entries in proptest::collection::vec(-5i64..=5, 8), t in -3i64..=3) {
        let flat: Vec<_> = entries.iter().map(|&x| rat(x)).collect();
        let a = MatrixTuple::from_flat(2, 2, &flat).unwrap();
        let ta = a.map(|x| x.scale(&rat(t)));
        let (sa, st) = (signature(&a, None).unwrap(), signature(&ta, None).unwrap());
        for (n, v) in &sa.values {
            prop_assert_eq!(st.values[n].clone(), v * rat(t.pow(n.len() as u32)));
        }
    }
}
