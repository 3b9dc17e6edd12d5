use noether::algebra::{det, indexed_vars, rat, Mat, MPoly, Rat};
use noether::reynolds::{reynolds_kv, rxc_circuit};
use noether::rng::SeedRng;
use noether::smt::{rep_generic_action, RepSpec};

fn random_sl2(rng: &mut SeedRng) -> Mat {
    loop {
        let (a, b, c) = (rng.small_rat(4), rng.small_rat(4), rng.small_rat(4));
        if a == rat(0) {
            continue;
        }
        // d chosen so that ad - bc = 1.
        let d = (rat(1) + &b * &c) / &a;
        let g = Mat::from_fn(2, 2, |i, j| [[&a, &b], [&c, &d]][i][j].clone());
        assert_eq!(det(&g).unwrap(), rat(1));
        return g;
    }
}

/// `f(g v)`, with `g` acting through the representation matrices.
fn act(f: &MPoly, spec: &RepSpec, g: &Mat) -> MPoly {
    let gen = rep_generic_action(spec).unwrap();
    let point = g.flat().to_vec();
    let lin: Vec<MPoly> = gen
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(MPoly::zero(f.vars()), |acc, (j, p)| {
                &acc + &MPoly::var(f.vars(), j).scale(&p.eval(&point).unwrap())
            })
        })
        .collect();
    f.compose(&lin).unwrap()
}

fn multinomial(alpha: &[u32]) -> Rat {
    let mut out = rat(1);
    let mut n = 0i64;
    for &a in alpha {
        for k in 1..=a as i64 {
            n += 1;
            out = out * rat(n) / rat(k);
        }
    }
    out
}

#[test]
fn kv_output_is_invariant() {
    let spec = RepSpec::binary_forms(2);
    let vars = indexed_vars("v", 3);
    let f = MPoly::parse("v1^2 + 3*v1*v3 - v2^2 + v2*v3", &vars).unwrap();
    let r = reynolds_kv(&f, &spec).unwrap();
    assert!(!r.is_zero());
    let mut rng = SeedRng::new(51);
    for _ in 0..10 {
        let g = random_sl2(&mut rng);
        assert_eq!(act(&r, &spec, &g), r);
    }
    assert_eq!(reynolds_kv(&r, &spec).unwrap(), r);
}

#[test]
fn rxc_matches_monomialwise_reynolds() {
    let spec = RepSpec::binary_forms(2);
    let n = spec.n;
    let both = indexed_vars("w", 2 * n);
    let vs = indexed_vars("v", n);
    for c in 1..=3u32 {
        let expanded = rxc_circuit(&spec, c as usize).unwrap().to_mpoly_with(&both, usize::MAX).unwrap().remove(0);
        let mut expected = MPoly::zero(&both);
        for alpha in exponents(n, c) {
            let mono = MPoly::monomial(&vs, alpha.clone(), rat(1));
            let rv = reynolds_kv(&mono, &spec).unwrap().embed(&both, &(0..n).collect::<Vec<_>>());
            let mut x_exp = vec![0; 2 * n];
            x_exp[n..].copy_from_slice(&alpha);
            let xa = MPoly::monomial(&both, x_exp, multinomial(&alpha));
            expected = &expected + &(&rv * &xa);
        }
        assert_eq!(expanded, expected, "c={c}");
    }
}

fn exponents(n: usize, c: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![c]];
    }
    (0..=c)
        .flat_map(|a| {
            exponents(n - 1, c - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}
