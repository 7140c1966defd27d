//! Exact linear algebra over the coordinate spaces of homogeneous forms.
//!
//! Everything is generic over a [`Field`]. Two exact fields are provided:
//! the rationals [`Q`] (arbitrary precision, eliminated with fraction-free
//! Bareiss steps) and the prime field [`Fp`] with `p = 2^61 − 1`. No floating
//! point is used anywhere.
//!
//! A [`Subspace`] is stored as its canonical reduced row-echelon basis, so two
//! subspaces are equal exactly when their representations are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::combinat::{dim_forms, monomials, mul_table, rank_of};

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace is not contained in the claimed superspace")]
    NotContained,
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// An exact field.
pub trait Field: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Image of a rational number, `None` when its denominator is not
    /// invertible in the field.
    fn from_rational(q: &BigRational) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics on zero.
    fn recip(&self) -> Self;
    /// Short name used in reports.
    fn name() -> &'static str;

    /// Reduced row-echelon form of the rows of `m` (zero rows dropped).
    fn echelon(m: &Matrix<Self>) -> Echelon<Self> {
        gauss_jordan(m)
    }

    /// Rank of `m`; fields may override with a cheaper forward elimination.
    fn rank_of(m: &Matrix<Self>) -> usize {
        Self::echelon(m).pivots.len()
    }
}

/// The rational numbers.
pub type Q = BigRational;

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Self {
        assert!(!Zero::is_zero(self), "division by zero");
        BigRational::recip(self)
    }
    fn name() -> &'static str {
        "Q"
    }
    fn echelon(m: &Matrix<Self>) -> Echelon<Self> {
        bareiss_rref(m)
    }
    fn rank_of(m: &Matrix<Self>) -> usize {
        bareiss_forward(m).1.len()
    }
}

/// The prime `2^61 − 1`.
pub const PRIME: u64 = (1u64 << 61) - 1;

/// An element of the prime field `F_p`, `p = 2^61 − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % PRIME)
    }
    pub fn value(self) -> u64 {
        self.0
    }
    fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn reduce128(x: u128) -> u64 {
    // Mersenne reduction: x = hi·2^61 + lo ≡ hi + lo.
    let lo = (x as u64) & PRIME;
    let hi = (x >> 61) as u64;
    let mut s = lo + (hi & PRIME) + (hi >> 61);
    while s >= PRIME {
        s -= PRIME;
    }
    s
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        let m = v.rem_euclid(PRIME as i64);
        Fp(m as u64)
    }
    fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(PRIME);
        let num = q.numer().mod_floor(&p).to_u64()?;
        let den = q.denom().mod_floor(&p).to_u64()?;
        if den == 0 {
            return None;
        }
        Some(Fp(num).times(&Fp(den).recip()))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
    fn minus(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + PRIME - o.0
        })
    }
    fn times(&self, o: &Self) -> Self {
        Fp(reduce128(u128::from(self.0) * u128::from(o.0)))
    }
    fn negate(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { PRIME - self.0 })
    }
    fn recip(&self) -> Self {
        assert!(self.0 != 0, "division by zero");
        self.pow(PRIME - 2)
    }
    fn name() -> &'static str {
        "Fp"
    }
    fn rank_of(m: &Matrix<Self>) -> usize {
        fp_rank(m)
    }
}

/// Forward elimination on raw residues; no back-substitution.
fn fp_rank(m: &Matrix<Fp>) -> usize {
    let cols = m.cols;
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| m.row(r).iter().map(|x| x.0).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Fp(rows[rank][c]).recip().0;
        for x in rows[rank][c..].iter_mut() {
            *x = reduce128(u128::from(*x) * u128::from(inv));
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = PRIME - f;
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                if y != 0 {
                    *x = reduce128(u128::from(*x) + u128::from(nf) * u128::from(y));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// A matrix of exact rationals.
pub type RationalMatrix = Matrix<Q>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows, all of length `cols`.
    ///
    /// # Panics
    /// Panics when a row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    pub fn rank(&self) -> usize {
        F::rank_of(self)
    }

    /// Maps every entry into another field.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Dot product of two equal-length vectors.
pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.plus(&x.times(y));
        }
    }
    acc
}

/// Reduced row-echelon data: the nonzero rows and their pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<F> {
    pub cols: usize,
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

/// Plain Gauss–Jordan elimination to reduced row-echelon form.
pub fn gauss_jordan<F: Field>(m: &Matrix<F>) -> Echelon<F> {
    let cols = m.cols;
    let mut rows: Vec<Vec<F>> = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut().skip(c) {
            *x = x.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].minus(&f.times(&pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { cols, rows, pivots }
}

/// Fraction-free (Bareiss) elimination on a rational matrix, normalized to
/// the canonical reduced row-echelon form.
///
/// Each row is first scaled to a primitive integer row. Forward elimination
/// uses the Bareiss update `(p·a_ij − a_ic·a_rj) / p_prev`, whose division is
/// exact. Back-substitution stays integral, with row contents divided out,
/// and a single division by the pivot produces the RREF.
pub fn bareiss_rref(m: &Matrix<Q>) -> Echelon<Q> {
    let cols = m.cols;
    let (mut rows, pivots) = bareiss_forward(m);
    let r = rows.len();
    // Integral back-substitution from the bottom up.
    for i in (0..r).rev() {
        make_primitive(&mut rows[i]);
        let pc = pivots[i];
        let (upper, lower) = rows.split_at_mut(i);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let a = row[pc].clone();
            let p = &pivot_row[pc];
            for j in 0..cols {
                if !pivot_row[j].is_zero() || !row[j].is_zero() {
                    row[j] = &row[j] * p - &a * &pivot_row[j];
                }
            }
            make_primitive(row);
        }
    }
    let rows = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let p = row[pc].clone();
            row.into_iter()
                .map(|x| BigRational::new(x, p.clone()))
                .collect()
        })
        .collect();
    Echelon { cols, rows, pivots }
}

/// Fraction-free forward elimination: the echelon rows (integral, not
/// reduced) and their pivot columns.
fn bareiss_forward(m: &Matrix<Q>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let cols = m.cols;
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| integer_row(m.row(r)))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let a = row[c].clone();
            for j in (c + 1)..cols {
                let v = &piv * &row[j] - &a * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Exact determinant of a square integer matrix by Bareiss elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> Result<BigInt, LinalgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: m.first().map_or(0, Vec::len),
        });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for i in (c + 1)..n {
            for j in (c + 1)..n {
                let v = &a[c][c] * &a[i][j] - &a[i][c] * &a[c][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Canonical basis of the right null space of `m`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let e = F::echelon(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let basis = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = row[free].negate();
            }
            v
        })
        .collect();
    Subspace::from_rows(cols, basis)
}

/// One solution of `m·x = b`, if any.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(b.len(), m.rows);
    let augmented = Matrix::from_rows(
        m.cols + 1,
        (0..m.rows)
            .map(|r| {
                let mut row = m.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect(),
    );
    let e = F::echelon(&augmented);
    if e.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![F::zero(); m.cols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[m.cols].clone();
    }
    Some(x)
}

/// A linear subspace of `F^ambient`, stored as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors.
    pub fn from_rows(ambient: usize, rows: Vec<Vec<F>>) -> Self {
        let m = Matrix::from_rows(ambient, rows);
        let e = F::echelon(&m);
        Subspace {
            ambient,
            rows: e.rows,
            pivots: e.pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_rows(ambient, Matrix::<F>::identity(ambient).row_vecs())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// The canonical RREF basis rows.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot coordinates; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// The basis as a matrix whose rows span the subspace.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(self.ambient, self.rows.clone())
    }

    /// Remainder of `v` after eliminating all pivot coordinates.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o = o.minus(&f.times(x));
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(Field::is_zero)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    fn check(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(other.rows.iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Subspace::from_rows(self.ambient, rows))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        // Solve Σ a_i u_i = Σ b_j w_j; the intersection is spanned by Σ a_i u_i.
        let cols = self.dim() + other.dim();
        let mut m = Matrix::zeros(self.ambient, cols);
        for (i, u) in self.rows.iter().enumerate() {
            for (c, x) in u.iter().enumerate() {
                m.set(c, i, x.clone());
            }
        }
        for (j, w) in other.rows.iter().enumerate() {
            for (c, x) in w.iter().enumerate() {
                m.set(c, self.dim() + j, x.negate());
            }
        }
        let ker = kernel(&m);
        let rows = ker
            .rows
            .iter()
            .map(|coef| {
                let mut v = vec![F::zero(); self.ambient];
                for (a, u) in coef.iter().zip(&self.rows) {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, x) in v.iter_mut().zip(u) {
                        *o = o.plus(&a.times(x));
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_rows(self.ambient, rows))
    }

    /// `dim self − dim sub`, after checking `sub ⊆ self`.
    pub fn quotient_dim(&self, sub: &Self) -> Result<usize, LinalgError> {
        if !self.contains(sub)? {
            return Err(LinalgError::NotContained);
        }
        Ok(self.dim() - sub.dim())
    }

    /// Basis of a complement of `sub` inside `self`: the nonzero remainders
    /// of `self`'s basis modulo `sub`, in canonical echelon form.
    pub fn complement_of(&self, sub: &Self) -> Result<Vec<Vec<F>>, LinalgError> {
        if !self.contains(sub)? {
            return Err(LinalgError::NotContained);
        }
        let rem: Vec<Vec<F>> = self.rows.iter().map(|v| sub.reduce(v)).collect();
        Ok(Subspace::from_rows(self.ambient, rem).rows)
    }

    /// Image of the subspace in another field (entrywise).
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Subspace<G> {
        Subspace::from_rows(
            self.ambient,
            self.rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        )
    }
}

/// Matrix of multiplication by `x_j` (1-based `j`) from `R_d` to `R_{d+1}`
/// in the monomial bases (rows indexed by degree `d+1`, columns by degree `d`).
pub fn mul_map_matrix<F: Field>(n: usize, d: usize, j: usize) -> Matrix<F> {
    assert!((1..=n).contains(&j), "variable index out of range");
    let mut m = Matrix::zeros(dim_forms(n, d + 1), dim_forms(n, d));
    for (c, mono) in monomials(n, d).iter().enumerate() {
        let mut e = mono.exponents().to_vec();
        e[j - 1] += 1;
        m.set(rank_of(&e), c, F::one());
    }
    m
}

/// Multiplies a degree-`d` coefficient vector by `x_j` (0-based `j`).
pub fn mul_var<F: Field>(n: usize, d: usize, v: &[F], j: usize) -> Vec<F> {
    let table = mul_table(n, d);
    let mut out = vec![F::zero(); dim_forms(n, d + 1)];
    for (c, x) in v.iter().enumerate() {
        if !x.is_zero() {
            out[table[c][j]] = x.clone();
        }
    }
    out
}

/// `R_1·V`: the span of all `x_j·v` for `v` in a basis of `V ⊆ R_d`.
pub fn mul_by_linear<F: Field>(v: &Subspace<F>, n: usize, d: usize) -> Result<Subspace<F>, LinalgError> {
    let expected = dim_forms(n, d);
    if v.ambient_dim() != expected {
        return Err(LinalgError::AmbientMismatch {
            left: v.ambient_dim(),
            right: expected,
        });
    }
    let target = dim_forms(n, d + 1);
    let mut rows = Vec::with_capacity(v.dim() * n);
    for b in v.basis() {
        for j in 0..n {
            rows.push(mul_var(n, d, b, j));
        }
    }
    Ok(Subspace::from_rows(target, rows))
}

/// Converts an integer to a rational.
pub fn q(v: i64) -> Q {
    Q::from_i64(v)
}

/// `p/q` rendering of a rational (integers render without denominator).
pub fn render_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` into a rational.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            (!b.is_zero()).then(|| BigRational::new(a, b))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::{parse_rational, render_rational, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad rational {text:?}")))
    }

    /// The same for vectors of rationals.
    pub mod vec {
        use super::super::{parse_rational, render_rational, Q};
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&render_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| parse_rational(t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}"))))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[Vec<i64>]) -> Matrix<Q> {
        Matrix::from_i64(rows)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::<Q>::identity(3)).dim(), 0);
        let k = kernel(&qm(&[vec![1, 2], vec![2, 4]]));
        // Canonical RREF representative of span{(−2, 1)}.
        assert_eq!(k.basis(), &[vec![q(1), Q::new((-1).into(), 2.into())]] as &[Vec<Q>]);
        let g = qm(&[vec![1, 3, -2, 5, 7], vec![-4, 1, 9, 0, 2]]);
        assert_eq!(kernel(&g).dim(), 3);
    }

    #[test]
    fn bareiss_matches_gauss_jordan() {
        let m = qm(&[
            vec![2, 4, -2, 6],
            vec![1, 2, 0, 1],
            vec![3, 6, -2, 7],
            vec![0, 0, 5, -5],
        ]);
        assert_eq!(bareiss_rref(&m), gauss_jordan(&m));
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::from_i64(-3);
        assert_eq!(a.plus(&Fp::from_i64(3)), Fp::zero());
        let b = Fp::from_i64(123_456_789);
        assert_eq!(b.times(&b.recip()), Fp::one());
        let half = Fp::from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half.times(&Fp::from_i64(2)), Fp::one());
    }

    #[test]
    fn mul_by_linear_examples() {
        // V = span{x²} in two variables.
        let v = Subspace::<Q>::from_rows(3, vec![vec![q(1), q(0), q(0)]]);
        let w = mul_by_linear(&v, 2, 2).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.pivots(), &[0, 1]);
        let full = Subspace::<Q>::full(dim_forms(3, 2));
        assert!(mul_by_linear(&full, 3, 2).unwrap().is_full());
        assert!(mul_by_linear(&full, 2, 2).is_err());
    }

    #[test]
    fn mul_map_matrix_examples() {
        let m = mul_map_matrix::<Q>(1, 4, 1);
        assert_eq!((m.rows(), m.cols()), (1, 1));
        let m = mul_map_matrix::<Q>(2, 1, 1);
        // x ↦ x² (index 0), y ↦ xy (index 1).
        assert_eq!(m.get(0, 0), &q(1));
        assert_eq!(m.get(1, 1), &q(1));
        let m = mul_map_matrix::<Q>(3, 3, 2);
        for c in 0..m.cols() {
            let s = (0..m.rows()).fold(q(0), |acc, r| acc + m.get(r, c));
            assert_eq!(s, q(1));
        }
    }

    #[test]
    fn subspace_ops() {
        let a = Subspace::<Q>::from_rows(3, vec![vec![q(1), q(0), q(0)]]);
        let b = Subspace::<Q>::from_rows(3, vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        assert!(a.sum(&b).unwrap().is_full());
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        let full = Subspace::<Q>::full(3);
        assert_eq!(full.quotient_dim(&b).unwrap(), 1);
        assert_eq!(b.quotient_dim(&a), Err(LinalgError::NotContained));
        assert!(a.sum(&Subspace::zero(4)).is_err());
    }

    #[test]
    fn determinant_matches_known_values() {
        let m = vec![
            vec![BigInt::from(-2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(-2)],
        ];
        assert_eq!(det_bareiss(&m).unwrap(), BigInt::from(3));
        let z = vec![vec![BigInt::from(1), BigInt::from(2)], vec![BigInt::from(2), BigInt::from(4)]];
        assert_eq!(det_bareiss(&z).unwrap(), BigInt::zero());
    }

    #[test]
    fn solve_finds_preimage() {
        let m = qm(&[vec![1, 1], vec![1, -1]]);
        let x = solve(&m, &[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = qm(&[vec![1, 1], vec![1, 1]]);
        assert!(solve(&s, &[q(1), q(2)]).is_none());
    }
}
