//! Relations among trace invariants generated by the fundamental trace
//! identity `F(M_1, ..., M_{m+1}) = sum_sigma sign(sigma) T_sigma`, written in
//! necklace coordinates `z_[a]`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use super::trace::{cycles, sign};
use super::words::{necklaces_up_to, words, Necklace, Word};
use crate::algebra::mpoly::Vars;
use crate::algebra::{make_vars, MPoly, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    /// The monomials `M_1 <= ... <= M_{m+1}`.
    pub monomials: Vec<Word>,
    pub poly: MPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct SftRelations {
    pub m: usize,
    pub r: usize,
    pub max_total_len: usize,
    /// Coordinate `i` of every relation polynomial is `z_{coords[i]}`.
    pub coords: Vec<Necklace>,
    pub relations: Vec<Relation>,
}

/// Non-decreasing `count`-tuples of words with total length in
/// `count..=max_total`, in graded-lex order of the tuples.
fn monomial_tuples(r: usize, count: usize, max_total: usize) -> Vec<Vec<Word>> {
    let mut pool: Vec<Word> = Vec::new();
    for len in 1..=max_total.saturating_sub(count - 1) {
        pool.extend(words(r, len));
    }
    let mut out: Vec<Vec<Word>> = pool
        .iter()
        .cloned()
        .combinations_with_replacement(count)
        .filter(|t| t.iter().map(Word::len).sum::<usize>() <= max_total)
        .collect();
    out.sort_by(|a, b| {
        let la: usize = a.iter().map(Word::len).sum();
        let lb: usize = b.iter().map(Word::len).sum();
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    out
}

/// Expands `F(M_1, ..., M_{m+1})` in the coordinates of `coords`.
pub fn fundamental_relation(monomials: &[Word], vars: &Vars, index: &BTreeMap<Word, usize>) -> MPoly {
    let n = monomials.len();
    let mut poly = MPoly::zero(vars);
    for perm in (0..n).permutations(n) {
        let mut exps = vec![0u32; vars.len()];
        for cyc in cycles(&perm) {
            let w = cyc.iter().skip(1).fold(monomials[cyc[0] - 1].clone(), |acc, &i| acc.concat(&monomials[i - 1]));
            exps[index[&w.canonical()]] += 1;
        }
        let c = if sign(&perm) > 0 { Rat::one() } else { -Rat::one() };
        poly.add_term(exps, c);
    }
    poly
}

pub fn necklace_vars(coords: &[Necklace]) -> Vars {
    make_vars(coords.iter().map(|n| format!("z{n}")))
}

/// All nonzero relations `F(M_1..M_{m+1})` with total length at most
/// `max_total_len`, deduplicated up to sign.
pub fn sft_relations(m: usize, r: usize, max_total_len: usize) -> Result<SftRelations> {
    if m == 0 || r == 0 {
        return Err(Error::DimensionMismatch("m and r must be positive".into()));
    }
    if max_total_len > m * m {
        return Err(Error::InfeasibleParameters(format!(
            "total length {max_total_len} exceeds m^2 = {}",
            m * m
        )));
    }
    let coords = necklaces_up_to(r, max_total_len);
    let vars = necklace_vars(&coords);
    let index: BTreeMap<Word, usize> = coords.iter().enumerate().map(|(i, n)| (n.canonical.clone(), i)).collect();
    let mut relations: Vec<Relation> = Vec::new();
    if max_total_len > m {
        for tuple in monomial_tuples(r, m + 1, max_total_len) {
            let poly = fundamental_relation(&tuple, &vars, &index);
            if poly.is_zero() {
                continue;
            }
            let neg = -&poly;
            if relations.iter().any(|rel| rel.poly == poly || rel.poly == neg) {
                continue;
            }
            relations.push(Relation { monomials: tuple, poly });
        }
    }
    Ok(SftRelations { m, r, max_total_len, coords, relations })
}

impl SftRelations {
    /// Point `(z_[a])` read off a signature map.
    pub fn point_from(&self, sig: &BTreeMap<Necklace, Rat>) -> Vec<Rat> {
        self.coords.iter().map(|n| sig.get(n).cloned().unwrap_or_else(Rat::zero)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letters_give_the_fundamental_identity() {
        let s = sft_relations(2, 3, 3).unwrap();
        let distinct = s
            .relations
            .iter()
            .find(|rel| rel.monomials.iter().map(|w| w.letters()[0]).collect::<Vec<_>>() == vec![1, 2, 3])
            .expect("relation for (U1, U2, U3)");
        // z1 z2 z3 - z12 z3 - z13 z2 - z23 z1 + z123 + z132
        assert_eq!(distinct.poly.num_terms(), 6);
    }

    #[test]
    fn too_short_for_a_relation() {
        let s = sft_relations(2, 2, 2).unwrap();
        assert!(s.relations.is_empty());
        assert!(sft_relations(2, 2, 5).is_err());
    }
}
