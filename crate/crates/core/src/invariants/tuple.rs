use serde::{Deserialize, Serialize};

use super::words::Word;
use crate::algebra::{Mat, Rat};
use crate::error::{Error, Result};
use crate::rng::SeedRng;

/// An `r`-tuple of `m x m` rational matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixTuple {
    m: usize,
    r: usize,
    matrices: Vec<Mat>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<Mat>) -> Result<MatrixTuple> {
        let first = matrices.first().ok_or_else(|| Error::DimensionMismatch("empty matrix tuple".into()))?;
        let m = first.rows();
        for (i, a) in matrices.iter().enumerate() {
            if a.rows() != m || a.cols() != m {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {i} is {}x{}, expected {m}x{m}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(MatrixTuple { m, r: matrices.len(), matrices })
    }

    pub fn zeros(m: usize, r: usize) -> MatrixTuple {
        MatrixTuple { m, r, matrices: vec![Mat::zeros(m, m); r] }
    }

    /// Entries uniform in `[lo, hi]`.
    pub fn random(m: usize, r: usize, lo: i64, hi: i64, rng: &mut SeedRng) -> MatrixTuple {
        let matrices = (0..r).map(|_| Mat::from_fn(m, m, |_, _| rng.rat_int(lo, hi))).collect();
        MatrixTuple { m, r, matrices }
    }

    /// Matrices read from `flat`, each stored row-major.
    pub fn from_flat(m: usize, r: usize, flat: &[Rat]) -> Result<MatrixTuple> {
        if flat.len() != r * m * m {
            return Err(Error::ArityMismatch { expected: r * m * m, got: flat.len() });
        }
        let matrices = (0..r)
            .map(|i| Mat::from_flat(m, m, flat[i * m * m..(i + 1) * m * m].to_vec()).expect("sized slice"))
            .collect();
        Ok(MatrixTuple { m, r, matrices })
    }

    pub fn flatten(&self) -> Vec<Rat> {
        self.matrices.iter().flat_map(|a| a.flat().iter().cloned()).collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &Mat {
        &self.matrices[i]
    }

    /// `(P A_1 P^-1, ..., P A_r P^-1)`.
    pub fn conjugate(&self, p: &Mat) -> Result<MatrixTuple> {
        let pinv = crate::algebra::inverse(p).map_err(|_| Error::SingularGroupElement)?;
        let matrices = self.matrices.iter().map(|a| &(p * a) * &pinv).collect();
        Ok(MatrixTuple { m: self.m, r: self.r, matrices })
    }

    pub fn map(&self, f: impl Fn(&Mat) -> Mat) -> MatrixTuple {
        MatrixTuple { m: self.m, r: self.r, matrices: self.matrices.iter().map(f).collect() }
    }

    pub fn same_shape(&self, other: &MatrixTuple) -> Result<()> {
        if self.m != other.m || self.r != other.r {
            return Err(Error::ShapeMismatch(format!(
                "(m={}, r={}) vs (m={}, r={})",
                self.m, self.r, other.m, other.r
            )));
        }
        Ok(())
    }

    /// `A_{i_1} ... A_{i_l}` for a word `i_1..i_l`.
    pub fn word_product(&self, w: &Word) -> Result<Mat> {
        let mut acc: Option<Mat> = None;
        for &letter in w.letters() {
            if letter == 0 || letter > self.r {
                return Err(Error::LetterOutOfRange { letter, alphabet: self.r });
            }
            let a = &self.matrices[letter - 1];
            acc = Some(match acc {
                None => a.clone(),
                Some(p) => &p * a,
            });
        }
        Ok(acc.unwrap_or_else(|| Mat::identity(self.m)))
    }
}

#[derive(Deserialize)]
struct WireTuple {
    m: usize,
    r: usize,
    matrices: Vec<Mat>,
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireTuple::deserialize(d)?;
        let t = MatrixTuple::new(w.matrices).map_err(serde::de::Error::custom)?;
        if t.m != w.m || t.r != w.r {
            return Err(serde::de::Error::custom(format!(
                "header says m={}, r={} but matrices give m={}, r={}",
                w.m, w.r, t.m, t.r
            )));
        }
        Ok(t)
    }
}

/// Random invertible integer matrix with entries in `[-bound, bound]`.
pub fn random_invertible(m: usize, bound: i64, rng: &mut SeedRng) -> Mat {
    loop {
        let p = Mat::from_fn(m, m, |_, _| rng.rat_int(-bound, bound));
        if !num_traits::Zero::is_zero(&crate::algebra::det(&p).expect("square")) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn json_shape() {
        let t = MatrixTuple::new(vec![Mat::from_i64(&[&[1, 2], &[3, 4]])]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"m":2,"r":1,"matrices":[[["1","2"],["3","4"]]]}"#);
        assert_eq!(serde_json::from_str::<MatrixTuple>(&s).unwrap(), t);
        assert!(serde_json::from_str::<MatrixTuple>(r#"{"m":3,"r":1,"matrices":[[["1","2"],["3","4"]]]}"#).is_err());
    }

    #[test]
    fn conjugation_with_singular_matrix_fails() {
        let t = MatrixTuple::zeros(2, 1);
        assert_eq!(t.conjugate(&Mat::zeros(2, 2)), Err(Error::SingularGroupElement));
        let p = Mat::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(t.conjugate(&p).unwrap(), t);
        assert_eq!(t.flatten(), vec![rat(0); 4]);
    }
}
