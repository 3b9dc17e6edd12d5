use noether::algebra::{indexed_vars, linear_solve, rank, rat, Mat, MPoly, Rat};
use proptest::prelude::*;

fn poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = MPoly> {
    let term = (proptest::collection::vec(0..=max_deg, nvars), -6i64..=6);
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let vars = indexed_vars("x", nvars);
        let mut p = MPoly::zero(&vars);
        for (mut e, c) in terms {
            // Keep the total degree within max_deg.
            while e.iter().sum::<u32>() > max_deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            p.add_term(e, rat(c));
        }
        p
    })
}

fn small_rats(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), n).prop_map(|v| v.into_iter().map(|(a, b)| noether::algebra::ratio(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distributive(f in poly_strategy(4, 4), g in poly_strategy(4, 4), h in poly_strategy(4, 4)) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn components_sum_and_scale(f in poly_strategy(4, 4), p in small_rats(4), t in -5i64..=5) {
        let subset = [0, 2];
        let comps = f.homogeneous_components(&subset);
        let total = comps.values().fold(MPoly::zero(f.vars()), |acc, c| &acc + c);
        prop_assert_eq!(&total, &f);
        let t = rat(t);
        let mut tp = p.clone();
        for &i in &subset {
            tp[i] = &tp[i] * &t;
        }
        for (c, fc) in &comps {
            prop_assert_eq!(fc.eval(&tp).unwrap(), fc.eval(&p).unwrap() * noether::algebra::rat::pow_rat(&t, *c));
        }
    }

    #[test]
    fn consistent_systems_solve_exactly(rows in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 4), x in small_rats(4)) {
        let a = Mat::from_fn(4, 4, |i, j| rat(rows[i][j]));
        prop_assume!(rank(&a) == 4);
        let b = a.vec_mul(&x);
        let sol = linear_solve(&a, &b).unwrap();
        prop_assert_eq!(a.vec_mul(&sol), b);
    }

    #[test]
    fn parse_round_trip(f in poly_strategy(3, 3)) {
        let back = MPoly::parse(&f.to_string(), f.vars()).unwrap();
        prop_assert_eq!(back, f);
    }
}
