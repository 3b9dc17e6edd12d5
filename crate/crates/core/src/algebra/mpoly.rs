//! Sparse multivariate polynomials over `Rat`.
//!
//! A polynomial carries its own ordered variable list; every binary
//! operation requires both operands to live over the same list. Terms are
//! kept in a `BTreeMap` keyed by exponent vector, so iteration order (and the
//! lex leading term used by exact division) is deterministic. Serialization
//! sorts terms graded-lexicographically, highest first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, pow_rat, serde_rat, Rat};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;
pub type Vars = Arc<[String]>;

pub fn make_vars<I, S>(names: I) -> Vars
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names.into_iter().map(Into::into).collect::<Vec<String>>().into()
}

/// `prefix1, prefix2, ..., prefixN`.
pub fn indexed_vars(prefix: &str, n: usize) -> Vars {
    make_vars((1..=n).map(|i| format!("{prefix}{i}")))
}

/// Graded lexicographic comparison: total degree first, then lex.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Exponents, Rat>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index {i} out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rat::one())
    }

    pub fn monomial(vars: &Vars, exps: Exponents, coeff: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length must match variable count");
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Builds a polynomial from terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rat)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, Rat> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Maximum total degree over the terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Maximum degree in the variables listed in `subset`.
    pub fn degree_in(&self, subset: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|e| subset.iter().map(|&i| e[i]).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x <= 1))
    }

    /// Sum of the terms whose degree in the variables of `subset` is `c`.
    pub fn homogeneous_component(&self, subset: &[usize], c: u32) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| subset.iter().map(|&i| e[i]).sum::<u32>() == c)
            .map(|(e, v)| (e.clone(), v.clone()))
            .collect();
        MPoly { vars: self.vars.clone(), terms }
    }

    /// All nonzero components, keyed by degree in `subset`.
    pub fn homogeneous_components(&self, subset: &[usize]) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, v) in &self.terms {
            let c = subset.iter().map(|&i| e[i]).sum::<u32>();
            out.entry(c)
                .or_insert_with(|| MPoly::zero(&self.vars))
                .terms
                .insert(e.clone(), v.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= pow_rat(x, k);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// `times`-fold partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize, times: u32) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] < times {
                continue;
            }
            let mut falling = Rat::one();
            for k in 0..times {
                falling *= Rat::from_integer((e[i] - k).into());
            }
            let mut e2 = e.clone();
            e2[i] -= times;
            out.terms.insert(e2, c * falling);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly> {
        if subs.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: subs.len() });
        }
        let target = match subs.first() {
            Some(s) => s.vars.clone(),
            None => {
                return Ok(MPoly::zero(&Vars::from(Vec::<String>::new())).plus_const(self.coeff(&[])));
            }
        };
        if subs.iter().any(|s| s.vars != target) {
            return Err(Error::VariableMismatch("substitutes live over different variables".into()));
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::one(&target), s.clone()]).collect();
        let mut out = MPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Fixes the listed variables to values, keeping the variable list.
    pub fn substitute_values(&self, assignments: &[(usize, Rat)]) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e2 = e.clone();
            for (i, v) in assignments {
                let k = e2[*i];
                if k > 0 {
                    coeff *= pow_rat(v, k);
                    e2[*i] = 0;
                }
            }
            out.add_term(e2, coeff);
        }
        out
    }

    /// Moves variable `i` of `self` to variable `map[i]` of `target`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.vars.len());
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Restricts to the variables in `keep` (in that order). Fails if a term
    /// involves a dropped variable.
    pub fn restrict(&self, target: &Vars, keep: &[usize]) -> Result<MPoly> {
        assert_eq!(keep.len(), target.len());
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let kept: u32 = keep.iter().map(|&i| e[i]).sum();
            if kept != e.iter().sum::<u32>() {
                return Err(Error::VariableMismatch("term involves a dropped variable".into()));
            }
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        Ok(out)
    }

    /// Groups terms by their exponents in `subset`; the values are the
    /// coefficient polynomials with those variables zeroed out.
    pub fn split_by(&self, subset: &[usize]) -> BTreeMap<Exponents, MPoly> {
        let mut out: BTreeMap<Exponents, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Exponents = subset.iter().map(|&i| e[i]).collect();
            let mut rest = e.clone();
            for &i in subset {
                rest[i] = 0;
            }
            out.entry(key).or_insert_with(|| MPoly::zero(&self.vars)).add_term(rest, c.clone());
        }
        out
    }

    /// `self / divisor` when the division is exact, else `None`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        assert!(self.vars == divisor.vars, "variable mismatch in division");
        let (lead_e, lead_c) = divisor.terms.last_key_value()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(&self.vars);
        while let Some((e, c)) = rem.terms.last_key_value() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let t = MPoly::monomial(&self.vars, qe, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    fn plus_const(mut self, c: Rat) -> MPoly {
        let n = self.vars.len();
        self.add_term(vec![0; n], c);
        self
    }

    /// Terms sorted graded-lexicographically, highest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    fn check_same_ring(&self, other: &MPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials live over different variable lists: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let mut out = MPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl MPoly {
    /// Parses sums of terms like `3/2*x1^2*x2 - y`, the notation of the
    /// `Display` impl, over the given variables.
    pub fn parse(text: &str, vars: &Vars) -> Result<MPoly> {
        let bad = |what: &str| Error::Parse(format!("{what} in polynomial {text:?}"));
        let mut out = MPoly::zero(vars);
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.is_empty() {
                neg ^= ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        terms.push((neg, cur));
        for (neg, term) in terms {
            let mut coeff = if neg { -Rat::one() } else { Rat::one() };
            let mut e = vec![0u32; vars.len()];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= super::rat::parse_rat(factor)?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, k)) => (n, k.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let i = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::VariableMismatch(format!("unknown variable {name:?}")))?;
                e[i] += exp;
            }
            out.add_term(e, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], x)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rat(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm(Exponents, #[serde(with = "serde_rat")] Rat);

#[derive(Serialize, Deserialize)]
struct WirePoly {
    vars: Vec<String>,
    terms: Vec<WireTerm>,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WirePoly {
            vars: self.vars.to_vec(),
            terms: self.sorted_terms().into_iter().map(|(e, c)| WireTerm(e.clone(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WirePoly::deserialize(d)?;
        let vars: Vars = w.vars.into();
        MPoly::from_terms(&vars, w.terms.into_iter().map(|t| (t.0, t.1))).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    fn xyz() -> Vars {
        make_vars(["x", "y", "z"])
    }

    #[test]
    fn parse_round_trip() {
        let v = xyz();
        let p = MPoly::parse("3/2*x^2*y - z + 4 - x*x", &v).unwrap();
        assert_eq!(p.to_string(), "3/2*x^2*y - x^2 - z + 4");
        assert_eq!(MPoly::parse(&p.to_string(), &v).unwrap(), p);
        assert!(MPoly::parse("w", &v).is_err());
        assert!(MPoly::parse("x +", &v).is_err());
    }

    #[test]
    fn square_of_sum_at_one_one() {
        let v = make_vars(["x", "y"]);
        let f = (&MPoly::var(&v, 0) + &MPoly::var(&v, 1)).pow(2);
        assert_eq!(f.eval(&[rat(1), rat(1)]).unwrap(), rat(4));
        assert_eq!(f.num_terms(), 3);
    }

    #[test]
    fn discriminant_value() {
        let v = indexed_vars("v", 3);
        let disc = &MPoly::var(&v, 1).pow(2) - &(&MPoly::var(&v, 0) * &MPoly::var(&v, 2)).scale(&rat(4));
        assert_eq!(disc.eval(&[rat(1), rat(0), rat(-1)]).unwrap(), rat(4));
    }

    #[test]
    fn zero_poly_evaluates_to_zero() {
        let z = MPoly::zero(&xyz());
        assert_eq!(z.eval(&[rat(3), ratio(1, 2), rat(-9)]).unwrap(), rat(0));
        assert_eq!(z.total_degree(), 0);
    }

    #[test]
    fn eval_arity_mismatch() {
        let f = MPoly::var(&xyz(), 0);
        assert_eq!(f.eval(&[rat(1)]), Err(Error::ArityMismatch { expected: 3, got: 1 }));
    }

    #[test]
    fn homogeneous_component_examples() {
        let v = make_vars(["x"]);
        let x = MPoly::var(&v, 0);
        let f = &(&x.pow(2) + &x) + &MPoly::one(&v);
        assert_eq!(f.homogeneous_component(&[0], 1), x);
        assert!(f.homogeneous_component(&[0], 7).is_zero());

        let w = make_vars(["v1", "v2", "x"]);
        let (v1, v2, xx) = (MPoly::var(&w, 0), MPoly::var(&w, 1), MPoly::var(&w, 2));
        let g = &(&v1 * &xx) + &(&(&v1 * &v2) * &xx.pow(2));
        assert_eq!(g.homogeneous_component(&[0, 1], 2), &(&v1 * &v2) * &xx.pow(2));
    }

    #[test]
    fn exact_division() {
        let v = xyz();
        let (x, y) = (MPoly::var(&v, 0), MPoly::var(&v, 1));
        let a = &x + &y;
        let b = &x - &y.scale(&rat(3));
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!((&p + &MPoly::one(&v)).div_exact(&a).is_none());
    }

    #[test]
    fn compose_and_partial() {
        let v = make_vars(["x", "y"]);
        let (x, y) = (MPoly::var(&v, 0), MPoly::var(&v, 1));
        let f = &x.pow(3) * &y;
        assert_eq!(f.partial(0, 2), (&x * &y).scale(&rat(6)));
        let g = f.compose(&[&x + &y, y.clone()]).unwrap();
        assert_eq!(g, &(&x + &y).pow(3) * &y);
    }

    #[test]
    fn json_round_trip_and_order() {
        let v = make_vars(["x", "y"]);
        let f = &(&MPoly::var(&v, 0).pow(2) + &MPoly::var(&v, 1)).scale(&ratio(3, 2)) + &MPoly::one(&v);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"vars":["x","y"],"terms":[[[2,0],"3/2"],[[0,1],"3/2"],[[0,0],"1"]]}"#);
        let back: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
