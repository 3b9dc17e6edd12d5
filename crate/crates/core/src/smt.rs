//! Standard monomial theory for `K[Z]`, `Z` a generic `m x m` matrix:
//! bitableaux, the standard-monomial basis of `K[Z]_d`, straightening, and
//! the action `h(Z) -> h(g^T Z)` on Weyl modules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::rank;
use crate::algebra::{det, inverse, make_vars, Exponents, MPoly, Mat, Rat, Vars};
use crate::error::{Error, Result};
use crate::invariants::sign;

fn matrix_vars(prefix: &str, m: usize) -> Vars {
    make_vars((1..=m).cartesian_product(1..=m).map(|(i, j)| {
        if m < 10 {
            format!("{prefix}{i}{j}")
        } else {
            format!("{prefix}{i}_{j}")
        }
    }))
}

/// `z11, z12, ..., zmm`, row-major.
pub fn z_vars(m: usize) -> Vars {
    matrix_vars("z", m)
}

/// `u11, ..., umm`, row-major.
pub fn u_vars(m: usize) -> Vars {
    matrix_vars("u", m)
}

/// Determinant of the minor of the generic matrix over `vars` (row-major,
/// `m x m`, possibly followed by other variables at `offset`), rows and
/// columns 1-based.
pub(crate) fn minor(vars: &Vars, offset: usize, m: usize, rows: &[usize], cols: &[usize]) -> MPoly {
    let k = rows.len();
    let mut out = MPoly::zero(vars);
    for perm in (0..k).permutations(k) {
        let mut e = vec![0u32; vars.len()];
        for (a, &b) in perm.iter().enumerate() {
            e[offset + (rows[a] - 1) * m + (cols[b] - 1)] += 1;
        }
        out.add_term(e, if sign(&perm) > 0 { Rat::one() } else { -Rat::one() });
    }
    out
}

/// Partitions of `d` into at most `max_parts` parts, in decreasing
/// lexicographic order.
pub fn partitions(d: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cap: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

fn check_shape(shape: &[usize]) -> Result<()> {
    if shape.windows(2).any(|w| w[0] < w[1]) || shape.contains(&0) {
        return Err(Error::DimensionMismatch(format!("{shape:?} is not a partition")));
    }
    Ok(())
}

/// Semistandard fillings of `shape` with entries in `1..=m` (rows weakly
/// increasing, columns strictly increasing), in lexicographic order of the
/// row reading word.
pub fn semistandard_tableaux(shape: &[usize], m: usize) -> Vec<Vec<Vec<usize>>> {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut t: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    fn go(k: usize, cells: &[(usize, usize)], m: usize, t: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == cells.len() {
            out.push(t.clone());
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { t[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { t[i - 1][j] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=m {
            t[i][j] = v;
            go(k + 1, cells, m, t, out);
        }
        t[i][j] = 0;
    }
    go(0, &cells, m, &mut t, &mut out);
    out
}

/// Pair of fillings of the same shape; the product over columns of the
/// minors `Z(left column, right column)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bitableau {
    pub shape: Vec<usize>,
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

impl Bitableau {
    pub fn new(shape: Vec<usize>, left: Vec<Vec<usize>>, right: Vec<Vec<usize>>, m: usize) -> Result<Bitableau> {
        check_shape(&shape)?;
        for t in [&left, &right] {
            let lens: Vec<usize> = t.iter().map(Vec::len).collect();
            if lens != shape {
                return Err(Error::ShapeMismatch(format!("filling rows {lens:?} vs shape {shape:?}")));
            }
            if let Some(&bad) = t.iter().flatten().find(|&&x| x == 0 || x > m) {
                return Err(Error::IndexOutOfRange(format!("entry {bad} outside 1..={m}")));
            }
        }
        Ok(Bitableau { shape, left, right })
    }

    pub fn degree(&self) -> usize {
        self.shape.iter().sum()
    }

    /// Rows weakly increasing and columns strictly increasing on both sides.
    pub fn is_standard(&self) -> bool {
        let ok = |t: &Vec<Vec<usize>>| {
            t.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]))
                && (1..t.len()).all(|i| (0..t[i].len()).all(|j| t[i - 1][j] < t[i][j]))
        };
        ok(&self.left) && ok(&self.right)
    }

    fn column(t: &[Vec<usize>], j: usize) -> Vec<usize> {
        t.iter().take_while(|row| row.len() > j).map(|row| row[j]).collect()
    }

    pub fn to_minor_monomial(&self) -> MinorMonomial {
        let cols = self.shape.first().copied().unwrap_or(0);
        MinorMonomial {
            factors: (0..cols).map(|j| (Bitableau::column(&self.left, j), Bitableau::column(&self.right, j))).collect(),
        }
    }

    fn reading_words(&self) -> (Vec<usize>, Vec<usize>) {
        (self.left.concat(), self.right.concat())
    }
}

impl Ord for Bitableau {
    /// Graded, then by left reading word, then right reading word.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.reading_words().cmp(&other.reading_words()))
            .then_with(|| other.shape.cmp(&self.shape))
    }
}

impl PartialOrd for Bitableau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bitableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = |t: &[Vec<usize>]| t.iter().map(|r| r.iter().join("")).join("/");
        write!(f, "({}|{})", rows(&self.left), rows(&self.right))
    }
}

/// Product of minors of `Z`, each given by 1-based row and column sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorMonomial {
    pub factors: Vec<(Vec<usize>, Vec<usize>)>,
}

impl MinorMonomial {
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(r, _)| r.len()).sum()
    }

    pub fn check(&self, m: usize) -> Result<()> {
        for (rows, cols) in &self.factors {
            if rows.len() != cols.len() || rows.len() > m {
                return Err(Error::IndexOutOfRange(format!("minor {rows:?} x {cols:?} for m={m}")));
            }
            for set in [rows, cols] {
                if set.iter().any(|&x| x == 0 || x > m) || set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::IndexOutOfRange(format!("index set {set:?} must increase strictly within 1..={m}")));
                }
            }
        }
        Ok(())
    }

    /// The polynomial in `z_vars(m)`.
    pub fn expand(&self, m: usize) -> Result<MPoly> {
        self.check(m)?;
        let vars = z_vars(m);
        Ok(self.factors.iter().fold(MPoly::one(&vars), |acc, (r, c)| &acc * &minor(&vars, 0, m, r, c)))
    }
}

impl Bitableau {
    pub fn expand(&self, m: usize) -> MPoly {
        self.to_minor_monomial().expand(m).expect("bitableau entries are in range")
    }
}

struct Drs {
    basis: Vec<Bitableau>,
    monomials: BTreeMap<Exponents, usize>,
    /// Rows: basis elements; columns: ordinary monomials.
    matrix: Mat,
    inverse_t: OnceLock<Mat>,
}

type DrsCache = Mutex<HashMap<(usize, usize), Arc<Drs>>>;

fn drs(m: usize, d: usize) -> Arc<Drs> {
    static CACHE: OnceLock<DrsCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(m, d)) {
        return hit.clone();
    }
    let mut basis = Vec::new();
    for shape in partitions(d, m) {
        let tabs = semistandard_tableaux(&shape, m);
        for (l, r) in tabs.iter().cartesian_product(&tabs) {
            basis.push(Bitableau { shape: shape.clone(), left: l.clone(), right: r.clone() });
        }
    }
    basis.sort();
    let expansions: Vec<MPoly> = basis.iter().map(|b| b.expand(m)).collect();
    let monomials: BTreeMap<Exponents, usize> = expansions
        .iter()
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()).collect::<Vec<_>>())
        .sorted()
        .dedup()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut matrix = Mat::zeros(basis.len(), monomials.len());
    for (i, p) in expansions.iter().enumerate() {
        for (e, c) in p.terms() {
            matrix.set(i, monomials[e], c.clone());
        }
    }
    let entry = Arc::new(Drs { basis, monomials, matrix, inverse_t: OnceLock::new() });
    cache.lock().expect("cache lock").entry((m, d)).or_insert(entry).clone()
}

/// Standard bitableaux of degree `d` with entries in `1..=m`, in canonical
/// order. They form a basis of `K[Z]_d`.
pub fn standard_monomials(m: usize, d: usize) -> Vec<Bitableau> {
    drs(m, d).basis.clone()
}

/// Rank of the change-of-basis matrix from standard monomials to ordinary
/// monomials of degree `d`, and the number of each.
pub fn change_of_basis_rank(m: usize, d: usize) -> (usize, usize, usize) {
    let t = drs(m, d);
    (rank(&t.matrix), t.basis.len(), t.monomials.len())
}

/// Coefficients of `mu` in the standard-monomial basis.
pub fn straighten(mu: &MinorMonomial, m: usize) -> Result<BTreeMap<Bitableau, Rat>> {
    let p = mu.expand(m)?;
    let t = drs(m, mu.degree());
    let inv = t.inverse_t.get_or_init(|| inverse(&t.matrix.transpose()).expect("standard monomials form a basis"));
    let mut y = vec![Rat::zero(); t.monomials.len()];
    for (e, c) in p.terms() {
        y[t.monomials[e]] = c.clone();
    }
    let x = inv.vec_mul(&y);
    Ok(t.basis.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(b, c)| (b.clone(), c)).collect())
}

/// Re-expands a straightened form.
pub fn unstraighten(coeffs: &BTreeMap<Bitableau, Rat>, m: usize) -> MPoly {
    coeffs.iter().fold(MPoly::zero(&z_vars(m)), |acc, (b, c)| &acc + &b.expand(m).scale(c))
}

/// Filling of `shape` whose row `i` is all `i`.
pub fn canonical_tableau(shape: &[usize]) -> Vec<Vec<usize>> {
    shape.iter().enumerate().map(|(i, &len)| vec![i + 1; len]).collect()
}

/// Basis `Z(A, K_shape)` of the Weyl module of `shape`, `A` semistandard.
pub fn weyl_basis(shape: &[usize], m: usize) -> Result<Vec<Bitableau>> {
    check_shape(shape)?;
    if shape.len() > m {
        return Err(Error::InfeasibleParameters(format!("shape {shape:?} has more than {m} parts")));
    }
    let k = canonical_tableau(shape);
    Ok(semistandard_tableaux(shape, m)
        .into_iter()
        .map(|a| Bitableau { shape: shape.to_vec(), left: a, right: k.clone() })
        .collect())
}

type ActionCache = Mutex<HashMap<(Vec<usize>, usize), Arc<Vec<Vec<MPoly>>>>>;

/// Matrix of the generic `u` acting on the Weyl basis of `shape`: entry
/// `(i, j)` is the coefficient of `b_i` in `b_j(u^T Z)`, a polynomial of
/// degree `|shape|` in `u_vars(m)`.
pub fn generic_action(shape: &[usize], m: usize) -> Result<Arc<Vec<Vec<MPoly>>>> {
    static CACHE: OnceLock<ActionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (shape.to_vec(), m);
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let basis = weyl_basis(shape, m)?;
    let mm = m * m;
    let both = make_vars(u_vars(m).iter().chain(z_vars(m).iter()).cloned());
    let uz: Vec<MPoly> = (0..m)
        .cartesian_product(0..m)
        .map(|(i, j)| {
            // (u^T Z)_{ij} = sum_k u_{ki} z_{kj}
            let mut p = MPoly::zero(&both);
            for k in 0..m {
                let mut e = vec![0u32; 2 * mm];
                e[k * m + i] = 1;
                e[mm + k * m + j] = 1;
                p.add_term(e, Rat::one());
            }
            p
        })
        .collect();
    let expansions: Vec<MPoly> = basis.iter().map(|b| b.expand(m)).collect();
    // Square invertible block of the basis-expansion matrix.
    let monos: Vec<Exponents> = expansions.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone()).collect::<Vec<_>>()).sorted().dedup().collect();
    let full = Mat::from_fn(monos.len(), basis.len(), |r, c| expansions[c].coeff(&monos[r]));
    let mut rows: Vec<usize> = Vec::new();
    for r in 0..monos.len() {
        let mut trial = rows.clone();
        trial.push(r);
        let sub = Mat::from_fn(trial.len(), basis.len(), |i, j| full.get(trial[i], j).clone());
        if rank(&sub) == trial.len() {
            rows = trial;
        }
        if rows.len() == basis.len() {
            break;
        }
    }
    let square = Mat::from_fn(basis.len(), basis.len(), |i, j| full.get(rows[i], j).clone());
    let inv = inverse(&square)?;
    let uvars = u_vars(m);
    let keep: Vec<usize> = (0..mm).collect();
    let z_idx: Vec<usize> = (mm..2 * mm).collect();
    let n = basis.len();
    let mut out = vec![vec![MPoly::zero(&uvars); n]; n];
    for (j, p) in expansions.iter().enumerate() {
        let moved = p.compose(&uz)?;
        let by_z = moved.split_by(&z_idx);
        let zero = MPoly::zero(&both);
        let picked: Vec<MPoly> = rows
            .iter()
            .map(|&r| by_z.get(&monos[r]).unwrap_or(&zero).restrict(&uvars, &keep))
            .collect::<Result<_>>()?;
        for i in 0..n {
            let mut acc = MPoly::zero(&uvars);
            for (k, h) in picked.iter().enumerate() {
                let c = inv.get(i, k);
                if !c.is_zero() {
                    acc = &acc + &h.scale(c);
                }
            }
            out[i][j] = acc;
        }
    }
    let entry = Arc::new(out);
    Ok(cache.lock().expect("cache lock").entry(key).or_insert(entry).clone())
}

/// Matrix of `g` on the Weyl basis of `shape`.
pub fn action_on_basis(g: &Mat, shape: &[usize], m: usize) -> Result<Mat> {
    if g.rows() != m || g.cols() != m {
        return Err(Error::DimensionMismatch(format!("group element must be {m} x {m}")));
    }
    if det(g)?.is_zero() {
        return Err(Error::SingularGroupElement);
    }
    let gen = generic_action(shape, m)?;
    let point = g.flat().to_vec();
    let n = gen.len();
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, gen[i][j].eval(&point)?);
        }
    }
    Ok(out)
}

/// Direct sum of Weyl modules `V_lambda`, each with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub n: usize,
    pub m: usize,
    pub summands: Vec<(Vec<usize>, usize)>,
}

impl RepSpec {
    pub fn new(m: usize, summands: Vec<(Vec<usize>, usize)>) -> Result<RepSpec> {
        let mut n = 0;
        for (shape, mult) in &summands {
            n += weyl_dimension(shape, m)? * mult;
        }
        let spec = RepSpec { n, m, summands };
        spec.check()?;
        Ok(spec)
    }

    /// `V_(k)` of `SL_2`: binary forms of degree `k`.
    pub fn binary_forms(k: usize) -> RepSpec {
        RepSpec::new(2, vec![(vec![k], 1)]).expect("valid")
    }

    pub fn check(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::DimensionMismatch("m must be positive".into()));
        }
        let mut total = 0;
        for (shape, mult) in &self.summands {
            if *mult == 0 {
                return Err(Error::DimensionMismatch("multiplicities must be positive".into()));
            }
            if shape.len() > self.m {
                return Err(Error::DimensionMismatch(format!("shape {shape:?} has more than m = {} parts", self.m)));
            }
            total += weyl_dimension(shape, self.m)? * mult;
        }
        if total != self.n {
            return Err(Error::DimensionMismatch(format!("summands have total dimension {total}, n = {}", self.n)));
        }
        Ok(())
    }

    /// Largest `|lambda|`.
    pub fn degree(&self) -> usize {
        self.summands.iter().map(|(s, _)| s.iter().sum()).max().unwrap_or(0)
    }
}

/// Number of semistandard tableaux of `shape` with entries in `1..=m`.
pub fn weyl_dimension(shape: &[usize], m: usize) -> Result<usize> {
    check_shape(shape)?;
    Ok(semistandard_tableaux(shape, m).len())
}

/// Coordinate `v_i` of a [`RepSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    pub summand: usize,
    pub copy: usize,
    pub tableau: Vec<Vec<usize>>,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}.{}:{}", self.summand + 1, self.copy + 1, self.tableau.iter().map(|r| r.iter().join("")).join("/"))
    }
}

pub fn rep_basis(spec: &RepSpec) -> Result<Vec<BasisLabel>> {
    spec.check()?;
    let mut out = Vec::with_capacity(spec.n);
    for (s, (shape, mult)) in spec.summands.iter().enumerate() {
        let tabs = semistandard_tableaux(shape, spec.m);
        for copy in 0..*mult {
            out.extend(tabs.iter().map(|t| BasisLabel { summand: s, copy, tableau: t.clone() }));
        }
    }
    Ok(out)
}

/// Block-diagonal generic action on all of `V`, entries in `u_vars(m)`.
pub fn rep_generic_action(spec: &RepSpec) -> Result<Vec<Vec<MPoly>>> {
    spec.check()?;
    let uvars = u_vars(spec.m);
    let mut out = vec![vec![MPoly::zero(&uvars); spec.n]; spec.n];
    let mut at = 0;
    for (shape, mult) in &spec.summands {
        let block = generic_action(shape, spec.m)?;
        for _ in 0..*mult {
            for (i, row) in block.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    out[at + i][at + j] = p.clone();
                }
            }
            at += block.len();
        }
    }
    Ok(out)
}
