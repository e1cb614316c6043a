//! Exact integer linear algebra over `Z^n`.
//!
//! Everything here works on arbitrary-precision integers. The normal forms
//! follow one fixed convention so results can be compared across runs:
//!
//! * [`hnf`] is the row Hermite normal form `H = U·M` with positive pivots and
//!   the entries above each pivot reduced into `[0, pivot)`.
//! * [`snf`] is the Smith normal form `S = U·M·V` with a nonnegative diagonal
//!   satisfying `d₁ | d₂ | …`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(BigInt),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A point of the lattice `Z^n` (a one-parameter subgroup of the torus).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

/// An element of the dual lattice (a character of the torus).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covector(Vec<BigInt>);

macro_rules! integer_row {
    ($ty:ident) => {
        impl $ty {
            pub fn new(entries: Vec<BigInt>) -> Self {
                Self(entries)
            }

            pub fn from_i64(entries: &[i64]) -> Self {
                Self(entries.iter().map(|&x| BigInt::from(x)).collect())
            }

            pub fn zero(dim: usize) -> Self {
                Self(vec![BigInt::zero(); dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn entries(&self) -> &[BigInt] {
                &self.0
            }

            pub fn into_entries(self) -> Vec<BigInt> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            /// Entries as `i64`, if all of them fit.
            pub fn to_i64(&self) -> Option<Vec<i64>> {
                self.0.iter().map(ToPrimitive::to_i64).collect()
            }

            pub fn to_rational(&self) -> Vec<BigRational> {
                self.0.iter().cloned().map(BigRational::from_integer).collect()
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    };
}

integer_row!(LatticeVector);
integer_row!(Covector);

impl Covector {
    /// The natural pairing `⟨α, v⟩`.
    pub fn pair(&self, v: &LatticeVector) -> BigInt {
        dot(&self.0, &v.0)
    }

    /// Pairing with a rational vector.
    pub fn pair_rational(&self, v: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(v)
            .map(|(a, x)| x * a)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

impl LatticeVector {
    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nonnegative gcd of all entries (zero for the zero vector).
pub fn content(entries: &[BigInt]) -> BigInt {
    entries.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides `v` by the gcd of its entries. Direction is preserved.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector, LatticeError> {
    let g = content(&v.0);
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(LatticeVector(v.0.iter().map(|x| x / &g).collect()))
}

pub fn is_primitive(v: &LatticeVector) -> bool {
    content(&v.0).is_one()
}

/// A rectangular integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl LatticeMatrix {
    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows, cols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn from_vectors(vectors: &[LatticeVector], cols: usize) -> Self {
        Self::from_rows(vectors.iter().map(|v| v.0.clone()).collect(), cols)
    }

    pub fn from_covectors(covectors: &[Covector], cols: usize) -> Self {
        Self::from_rows(covectors.iter().map(|v| v.0.clone()).collect(), cols)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self { rows, cols: n }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![vec![BigInt::zero(); cols]; rows], cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn row_vector(&self, i: usize) -> LatticeVector {
        LatticeVector(self.rows[i].clone())
    }

    pub fn row_covector(&self, i: usize) -> Covector {
        Covector(self.rows[i].clone())
    }

    pub fn to_vectors(&self) -> Vec<LatticeVector> {
        self.rows.iter().cloned().map(LatticeVector).collect()
    }

    pub fn to_covectors(&self) -> Vec<Covector> {
        self.rows.iter().cloned().map(Covector).collect()
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self { rows, cols: self.nrows() }
    }

    pub fn mul(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.cols, other.nrows(), "incompatible matrix product");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .map(|(a, orow)| a * &orow[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Self { rows, cols: other.cols }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        let n = self.cols;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.abs().is_one())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.rows {
            r.swap(i, j);
        }
    }

    /// `row[dst] -= q * row[src]`
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (d, s) = two_rows(&mut self.rows, dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    }

    /// `col[dst] -= q * col[src]`
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.rows {
            let t = q * &r[src];
            r[dst] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.rows[i] {
            *x = -&*x;
        }
    }

    /// Replaces rows `(i, j)` by `(s·ri + t·rj, u·ri + v·rj)`.
    fn combine_rows(&mut self, i: usize, j: usize, c: &[BigInt; 4]) {
        let [s, t, u, v] = c;
        let (ri, rj) = two_rows(&mut self.rows, i, j);
        for (a, b) in ri.iter_mut().zip(rj.iter_mut()) {
            let na = s * &*a + t * &*b;
            let nb = u * &*a + v * &*b;
            *a = na;
            *b = nb;
        }
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", LatticeVector(r.clone()))?;
        }
        write!(f, "]")
    }
}

fn two_rows<T>(rows: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = rows.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row Hermite normal form. Returns `(H, U)` with `H = U·M` and `U` unimodular.
pub fn hnf(m: &LatticeMatrix) -> (LatticeMatrix, LatticeMatrix) {
    let k = m.nrows();
    let mut h = m.clone();
    let mut u = LatticeMatrix::identity(k);
    let mut p = 0;
    for col in 0..m.ncols() {
        if p == k {
            break;
        }
        for i in p + 1..k {
            if h.rows[i][col].is_zero() {
                continue;
            }
            let a = h.rows[p][col].clone();
            let b = h.rows[i][col].clone();
            let (g, s, t) = extended_gcd(&a, &b);
            let coeffs = [s, t, -(&b / &g), &a / &g];
            h.combine_rows(p, i, &coeffs);
            u.combine_rows(p, i, &coeffs);
        }
        if h.rows[p][col].is_zero() {
            continue;
        }
        if h.rows[p][col].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h.rows[p][col].clone();
        for i in 0..p {
            let q = h.rows[i][col].div_floor(&pivot);
            h.sub_row_multiple(i, p, &q);
            u.sub_row_multiple(i, p, &q);
        }
        p += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(S, U, V)` with `S = U·M·V`.
pub fn snf(m: &LatticeMatrix) -> (LatticeMatrix, LatticeMatrix, LatticeMatrix) {
    let (k, n) = (m.nrows(), m.ncols());
    let mut s = m.clone();
    let mut u = LatticeMatrix::identity(k);
    let mut v = LatticeMatrix::identity(n);
    for t in 0..k.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    let x = &s.rows[i][j];
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < s.rows[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (s, u, v);
            };
            if bi != t {
                s.swap_rows(bi, t);
                u.swap_rows(bi, t);
            }
            if bj != t {
                s.swap_cols(bj, t);
                v.swap_cols(bj, t);
            }
            let pivot = s.rows[t][t].clone();
            let mut clean = true;
            for i in t + 1..k {
                let q = &s.rows[i][t] / &pivot;
                s.sub_row_multiple(i, t, &q);
                u.sub_row_multiple(i, t, &q);
                clean &= s.rows[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = &s.rows[t][j] / &pivot;
                s.sub_col_multiple(j, t, &q);
                v.sub_col_multiple(j, t, &q);
                clean &= s.rows[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce d_t | every entry of the trailing block
            let offender = (t + 1..k).find(|&i| {
                (t + 1..n).any(|j| !s.rows[i][j].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(-1);
                    s.sub_row_multiple(t, i, &one);
                    u.sub_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.rows[t][t].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Nonzero diagonal entries of the Smith normal form.
pub fn invariant_factors(m: &LatticeMatrix) -> Vec<BigInt> {
    let (s, _, _) = snf(m);
    (0..s.nrows().min(s.ncols()))
        .map(|i| s.rows[i][i].clone())
        .filter(|d| !d.is_zero())
        .collect()
}

/// The basis dual to the rows of `g`: rows `A_i` with `⟨A_i, G_j⟩ = δ_ij`.
pub fn dual_basis(g: &LatticeMatrix) -> Result<LatticeMatrix, LatticeError> {
    let d = g.det()?;
    if !d.abs().is_one() {
        return Err(LatticeError::NotUnimodular(d));
    }
    // The HNF of a unimodular matrix is the identity, so U = G⁻¹.
    let (_, u) = hnf(g);
    Ok(u.transpose())
}

/// Inverse of a unimodular square matrix.
pub fn unimodular_inverse(g: &LatticeMatrix) -> Result<LatticeMatrix, LatticeError> {
    Ok(dual_basis(g)?.transpose())
}

/// Whether the rows of `g` extend to a Z-basis of `Z^n`.
pub fn is_part_of_basis(g: &LatticeMatrix) -> bool {
    let k = g.nrows();
    if k > g.ncols() {
        return false;
    }
    let factors = invariant_factors(g);
    factors.len() == k && factors.iter().all(One::is_one)
}

/// A basis of `{k ∈ Z^m : kᵀ·M = 0}` for an `m×n` matrix `M`, one basis vector per row.
pub fn left_kernel(m: &LatticeMatrix) -> LatticeMatrix {
    let (s, u, _) = snf(m);
    let r = (0..s.nrows().min(s.ncols()))
        .take_while(|&i| !s.rows[i][i].is_zero())
        .count();
    LatticeMatrix::from_rows(u.rows[r..].to_vec(), m.nrows())
}

/// A basis of `{x ∈ Z^n : M·x = 0}`, one basis vector per row.
pub fn right_kernel(m: &LatticeMatrix) -> LatticeMatrix {
    if m.nrows() == 0 {
        return LatticeMatrix::identity(m.ncols());
    }
    left_kernel(&m.transpose())
}

/// Extends independent rows to a full-rank square matrix by appending rows.
/// When the rows are part of a Z-basis the result is unimodular.
pub fn extend_to_full_rank(g: &LatticeMatrix) -> Option<LatticeMatrix> {
    let (k, n) = (g.nrows(), g.ncols());
    if k > n {
        return None;
    }
    let (s, _, v) = snf(g);
    if (0..k).any(|i| s.rows[i][i].is_zero()) {
        return None;
    }
    // G = U⁻¹·S·V⁻¹ and the last n−k rows of V⁻¹ complete it.
    let v_inv = unimodular_inverse(&v).ok()?;
    let mut rows = g.rows.clone();
    rows.extend_from_slice(&v_inv.rows[k..]);
    Some(LatticeMatrix::from_rows(rows, n))
}

/// Rank over Q of a list of integer rows.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let Some(n) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let (f, g) = (a[r][col].clone(), a[i][col].clone());
            let (pr, ri) = two_rows(&mut a, r, i);
            for (x, y) in ri.iter_mut().zip(pr.iter()) {
                *x = &*x * &f - y * &g;
            }
            let c = content(ri);
            if !c.is_zero() && !c.is_one() {
                for x in ri.iter_mut() {
                    *x /= &c;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j { BigRational::one() } else { BigRational::zero() }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in &mut a[col] {
            *x *= &inv;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let (pr, ri) = two_rows(&mut a, col, i);
            for (x, y) in ri.iter_mut().zip(pr.iter()) {
                *x -= &f * y;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scales a rational vector by a positive integer so every entry is integral.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}
