use noether::algebra::{rat, Mat};
use noether::rng::SeedRng;
use noether::smt::{action_on_basis, change_of_basis_rank, standard_monomials, straighten, unstraighten, MinorMonomial};
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn standard_monomials_count_ordinary_monomials() {
    for m in 1..=3 {
        for d in 0..=4 {
            if m == 3 && d == 4 {
                continue;
            }
            assert_eq!(standard_monomials(m, d).len(), binom(d + m * m - 1, m * m - 1), "m={m} d={d}");
        }
    }
    for d in 0..=4 {
        let (r, b, k) = change_of_basis_rank(2, d);
        assert_eq!((r, b, k), (k, k, k));
    }
}

fn subset(m: usize, size: usize, rng: &mut SeedRng) -> Vec<usize> {
    let mut all: Vec<usize> = (1..=m).collect();
    while all.len() > size {
        let i = rng.below(all.len() as u64) as usize;
        all.remove(i);
    }
    all
}

#[test]
fn straighten_round_trips() {
    let mut rng = SeedRng::new(61);
    for _ in 0..50 {
        let m = 2 + rng.below(2) as usize;
        let mut factors = Vec::new();
        let mut deg = 0;
        while deg < 3 {
            let k = 1 + rng.below(m.min(3 - deg) as u64) as usize;
            factors.push((subset(m, k, &mut rng), subset(m, k, &mut rng)));
            deg += k;
        }
        let mu = MinorMonomial { factors };
        let s = straighten(&mu, m).unwrap();
        assert!(s.keys().all(|b| b.is_standard()));
        assert_eq!(unstraighten(&s, m), mu.expand(m).unwrap());
    }
}

fn int_mat(entries: &[i64]) -> Mat {
    Mat::from_fn(2, 2, |i, j| rat(entries[2 * i + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn action_is_multiplicative(g in proptest::collection::vec(-4i64..=4, 4), h in proptest::collection::vec(-4i64..=4, 4)) {
        let (g, h) = (int_mat(&g), int_mat(&h));
        let gh = &g * &h;
        let shape = [2, 1];
        let (Ok(ag), Ok(ah), Ok(agh)) = (action_on_basis(&g, &shape, 2), action_on_basis(&h, &shape, 2), action_on_basis(&gh, &shape, 2)) else {
            return Ok(());
        };
        prop_assert_eq!(agh, &ag * &ah);
    }
}
