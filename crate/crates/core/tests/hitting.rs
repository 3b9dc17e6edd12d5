use noether::algebra::{indexed_vars, rat, MPoly};
use noether::circuit::from_mpoly;
use noether::hitting::{
    diag3_hitting_set, diag3_size, grid_hitting_set, greedy_hitting_set, hard_poly_from_hitting_set, nw_hitting_set,
    sz_points, HittingSet,
};
use noether::Error;
use proptest::prelude::*;

fn vanishes(p: &MPoly, pts: &[Vec<u64>]) -> bool {
    pts.iter().all(|x| p.eval(&x.iter().map(|&a| rat(a as i64)).collect::<Vec<_>>()).unwrap() == rat(0))
}

#[test]
fn greedy_output_hits_family() {
    let vars = indexed_vars("x", 2);
    let family: Vec<MPoly> = ["x1*x2 - 1", "x1 - x2", "x1^2 - 2*x1 + 1", "x2 - 3"]
        .iter()
        .map(|t| MPoly::parse(t, &vars).unwrap())
        .collect();
    let h = greedy_hitting_set(2, &family, 4).unwrap();
    let circuits: Vec<_> = family.iter().map(from_mpoly).collect();
    assert!(h.verify(&circuits).unwrap().is_empty());
}

#[test]
fn hard_poly_examples() {
    let p = hard_poly_from_hitting_set(&[vec![0, 0]], 2).unwrap();
    assert!(vanishes(&p, &[vec![0, 0]]) && !p.is_zero());
    let one = hard_poly_from_hitting_set(&[], 2).unwrap();
    assert_eq!(one, MPoly::one(&indexed_vars("x", 2)));
    let cube = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
    assert!(matches!(hard_poly_from_hitting_set(&cube, 2), Err(Error::NoSolution)));
}

#[test]
fn nw_points_in_range() {
    let vars = indexed_vars("x", 2);
    let p = MPoly::parse("x1*x2", &vars).unwrap();
    let h = nw_hitting_set(2, 1, 2, &p).unwrap();
    assert!(!h.is_empty());
    assert_eq!(h.r(), 2);
    // With D = 3, each coordinate is a product of two values in 1..=3.
    assert!(h.points().all(|pt| pt.iter().all(|&x| (1..=9).contains(&x))));
}

#[test]
fn caps_are_enforced() {
    assert!(matches!(diag3_hitting_set(40, 4, 3), Err(Error::ExplosionGuard { .. })));
    assert!(diag3_size(40, 4, 3) > 1_000_000);
    assert_eq!(grid_hitting_set(32, 3, 1000).unwrap().len(), 1000);
}

#[test]
fn json_round_trip() {
    let h = diag3_hitting_set(3, 2, 2).unwrap();
    let text = serde_json::to_string(&h).unwrap();
    let back: HittingSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, h);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hard_poly_vanishes(m in 1usize..=5, pts in proptest::collection::btree_set(proptest::collection::vec(0u64..4, 5), 0..31)) {
        let pts: Vec<Vec<u64>> = pts.into_iter().map(|p| p[..m].to_vec()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        prop_assume!(pts.len() < 1 << m);
        let p = hard_poly_from_hitting_set(&pts, m).unwrap();
        prop_assert!(!p.is_zero() && p.is_multilinear());
        prop_assert!(vanishes(&p, &pts));
    }

    #[test]
    fn sz_points_deterministic_and_in_range(r in 1usize..5, d in 1u64..6, count in 1usize..20, seed in any::<u64>()) {
        let a = sz_points(r, d, count, seed);
        prop_assert_eq!(&a, &sz_points(r, d, count, seed));
        prop_assert_eq!(a.len(), count);
        prop_assert!(a.iter().flatten().all(|&x| x < 2 * d * count as u64));
    }
}
