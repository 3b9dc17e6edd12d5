//! Words over `{1..r}` and their rotation classes.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonempty word with letters in `1..=r`. Ordered by length, then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>, r: usize) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > r) {
            return Err(Error::LetterOutOfRange { letter: bad, alphabet: r });
        }
        Ok(Word(letters))
    }

    /// No alphabet check; letters must still be at least 1.
    pub fn from_letters(letters: Vec<usize>) -> Word {
        assert!(!letters.is_empty() && letters.iter().all(|&x| x >= 1), "letters are 1-based and nonempty");
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Smallest `p` with `w` equal to its rotation by `p`.
    pub fn period(&self) -> usize {
        let n = self.0.len();
        (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[(i + p) % n])).unwrap_or(n)
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> Word {
        (0..self.0.len()).map(|k| self.rotate(k)).min_by(|a, b| a.0.cmp(&b.0)).expect("nonempty word")
    }

    pub fn necklace(&self) -> Necklace {
        Necklace { canonical: self.canonical(), orbit_size: self.period() }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", s.join("."))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Rotation class of a word; `orbit_size` is the number of distinct
/// rotations, i.e. the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Necklace {
    pub canonical: Word,
    pub orbit_size: usize,
}

impl Necklace {
    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

/// All necklaces of length exactly `l` over `{1..r}`, sorted by canonical
/// word (Fredricksen–Kessler–Maiorana enumeration).
pub fn necklaces(r: usize, l: usize) -> Vec<Necklace> {
    if r == 0 || l == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // a[1..=l] over 0..r, a[0] sentinel.
    let mut a = vec![0usize; l + 1];
    let mut i = l;
    let mut p = 1;
    loop {
        if l.is_multiple_of(p) {
            out.push(Necklace {
                canonical: Word(a[1..=l].iter().map(|&x| x + 1).collect()),
                orbit_size: p,
            });
        }
        // Next prenecklace.
        while i > 0 && a[i] == r - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        a[i] += 1;
        p = i;
        for j in i + 1..=l {
            a[j] = a[j - p];
        }
        i = l;
    }
    out
}

/// Necklaces of every length `1..=max_len`, by length then word.
pub fn necklaces_up_to(r: usize, max_len: usize) -> Vec<Necklace> {
    (1..=max_len).flat_map(|l| necklaces(r, l)).collect()
}

/// Every word of length exactly `l`, lexicographic.
pub fn words(r: usize, l: usize) -> Vec<Word> {
    if r == 0 || l == 0 {
        return Vec::new();
    }
    let total = r.checked_pow(l as u32).expect("word count overflow");
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0; l];
            for slot in v.iter_mut().rev() {
                *slot = idx % r + 1;
                idx /= r;
            }
            Word(v)
        })
        .collect()
}

/// `(1/l) * sum_{d | l} phi(d) * r^(l/d)`.
pub fn necklace_count(r: u64, l: u64) -> u64 {
    let phi = |mut n: u64| {
        let mut result = n;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                while n.is_multiple_of(p) {
                    n /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if n > 1 {
            result -= result / n;
        }
        result
    };
    let total: u64 = (1..=l).filter(|d| l.is_multiple_of(*d)).map(|d| phi(d) * r.pow((l / d) as u32)).sum();
    total / l
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn unary_alphabet() {
        for l in 1..6 {
            let n = necklaces(1, l);
            assert_eq!(n.len(), 1);
            assert_eq!(n[0].orbit_size, 1);
        }
    }

    #[test]
    fn binary_small() {
        assert_eq!(necklaces(2, 1).len(), 2);
        let n4 = necklaces(2, 4);
        assert_eq!(n4.len(), 6);
        // Brute force over all 16 words.
        let classes: BTreeSet<Word> = words(2, 4).iter().map(Word::canonical).collect();
        let got: BTreeSet<Word> = n4.iter().map(|n| n.canonical.clone()).collect();
        assert_eq!(classes, got);
        let sizes: Vec<usize> = n4.iter().map(|n| n.orbit_size).collect();
        assert_eq!(sizes, vec![1, 4, 4, 2, 4, 1]);
    }

    #[test]
    fn letters_checked() {
        assert_eq!(Word::new(vec![1, 3], 2), Err(Error::LetterOutOfRange { letter: 3, alphabet: 2 }));
        assert!(Word::new(vec![], 2).is_err());
    }

    #[test]
    fn burnside_and_orbits() {
        for r in 1..=4u64 {
            for l in 1..=8u64 {
                if r.pow(l as u32) > 70_000 {
                    continue;
                }
                let n = necklaces(r as usize, l as usize);
                assert_eq!(n.len() as u64, necklace_count(r, l), "r={r} l={l}");
                let sum: usize = n.iter().map(|x| x.orbit_size).sum();
                assert_eq!(sum as u64, r.pow(l as u32));
                for x in &n {
                    assert_eq!(x.canonical.canonical(), x.canonical);
                    assert_eq!(l as usize % x.orbit_size, 0);
                }
            }
        }
    }
}
