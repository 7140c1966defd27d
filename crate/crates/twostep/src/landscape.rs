//! The quadratic landscape of 2-step strata.
//!
//! `Δ_{n,r,k}` compares the stratum dimension bound of a nesting with the
//! dimension of the smoothable component; `Θ_{n,k,b}` bounds negative
//! tangents from below. Both are quadratic, so this module also provides
//! their exact Hessians, continuant determinants, rational critical points
//! and the potential TNT area.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binomial, dim_forms, macaulay_growth};
use crate::exactla::{det_bareiss, rational_serde, solve, Matrix, Q};
use crate::exec::Exec;
use crate::profiles::TwoStepProfile;

/// Errors raised by landscape evaluations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LandscapeError {
    #[error("expected {expected} coordinates for r = {r}, got {found}")]
    Arity {
        r: usize,
        expected: usize,
        found: usize,
    },
    #[error("need n ≥ 2, r ≥ 1 and k ≥ 1 (got n = {n}, r = {r}, k = {k})")]
    BadShape { n: usize, r: usize, k: usize },
}

fn check_shape(n: usize, r: usize, k: usize, len: usize) -> Result<(), LandscapeError> {
    if n < 2 || r < 1 || k < 1 {
        return Err(LandscapeError::BadShape { n, r, k });
    }
    if len != 2 * r {
        return Err(LandscapeError::Arity {
            r,
            expected: 2 * r,
            found: len,
        });
    }
    Ok(())
}

/// Generic evaluation of `Δ_{n,r,k}` over any ring-like coordinate type.
///
/// Coordinates are `c = (h_k^{(0)}, h_{k+1}^{(0)}, h_{k+1}^{(1)}, h_{k+2}^{(1)}, …)`:
/// `Δ = c_0(r_k − c_0) + Σ_{i≥1} c_{2i}(c_{2i−1} − c_{2i})
///    + Σ_i (c_{2i+1} − (n−1)c_{2i})(r_{k+i+1} − c_{2i+1})
///    + n − n(C(k+r+n, n) − c_{2r−2} − c_{2r−1})`.
fn delta_generic<T>(n: usize, r: usize, k: usize, c: &[T]) -> T
where
    T: Clone
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + From<i64>,
{
    let int = |v: usize| T::from(v as i64);
    let nn = int(n);
    let mut acc = c[0].clone() * (int(dim_forms(n, k)) - c[0].clone());
    for i in 0..r {
        let (lo, hi) = (c[2 * i].clone(), c[2 * i + 1].clone());
        if i > 0 {
            acc = acc + lo.clone() * (c[2 * i - 1].clone() - lo.clone());
        }
        let big = int(dim_forms(n, k + i + 1));
        acc = acc + (hi.clone() - int(n - 1) * lo) * (big - hi);
    }
    let total = int(binomial((k + r + n) as u64, n as u64) as usize);
    acc + nn.clone() - nn * (total - c[2 * r - 2].clone() - c[2 * r - 1].clone())
}

/// Exact `Δ_{n,r,k}` at a rational point.
pub fn delta(n: usize, r: usize, k: usize, point: &[Q]) -> Result<Q, LandscapeError> {
    check_shape(n, r, k, point.len())?;
    let c: Vec<RationalRing> = point.iter().cloned().map(RationalRing).collect();
    Ok(delta_generic(n, r, k, &c).0)
}

/// Exact `Δ_{n,r,k}` at a lattice point (integer-valued there).
pub fn delta_int(n: usize, r: usize, k: usize, point: &[i64]) -> Result<i64, LandscapeError> {
    check_shape(n, r, k, point.len())?;
    Ok(delta_generic(n, r, k, point))
}

/// Newtype so `BigRational` gets `From<i64>` for the generic evaluator.
#[derive(Clone)]
struct RationalRing(Q);

impl From<i64> for RationalRing {
    fn from(v: i64) -> Self {
        RationalRing(BigRational::from_integer(v.into()))
    }
}

impl std::ops::Add for RationalRing {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        RationalRing(self.0 + o.0)
    }
}

impl std::ops::Sub for RationalRing {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        RationalRing(self.0 - o.0)
    }
}

impl std::ops::Mul for RationalRing {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        RationalRing(self.0 * o.0)
    }
}

/// `Θ_{n,k,b}(h_k, h_{k+1}) = h_k r_{k−1} + s_h(r_k − h_k) + (t_h − b)(r_{k+1} − h_{k+1}) − n`
/// as an integer.
pub fn theta_int(n: usize, k: usize, b: i64, hk: i64, hk1: i64) -> i64 {
    let r = |d: usize| dim_forms(n, d) as i64;
    let nn = n as i64;
    let s = hk1 - nn * hk;
    let t = r(k + 2) - nn * hk1 + binomial(n as u64, 2) as i64 * hk;
    hk * r(k - 1) + s * (r(k) - hk) + (t - b) * (r(k + 1) - hk1) - nn
}

/// Exact `Θ_{n,k,b}` at a rational point `(h_k, h_{k+1})`.
pub fn theta(n: usize, k: usize, b: usize, hk: &Q, hk1: &Q) -> Q {
    let int = |v: i64| BigRational::from_integer(v.into());
    let r = |d: usize| int(dim_forms(n, d) as i64);
    let nn = int(n as i64);
    let s = hk1 - &nn * hk;
    let t = r(k + 2) - &nn * hk1 + int(binomial(n as u64, 2) as i64) * hk;
    hk * r(k - 1) + s * (r(k) - hk) + (t - int(b as i64)) * (r(k + 1) - hk1) - nn
}

/// A quadratic function `½xᵀHx + gᵀx + c` recovered exactly from values.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    pub hessian: Vec<Vec<Q>>,
    pub gradient0: Vec<Q>,
    pub constant: Q,
}

impl Quadratic {
    /// Recovers the coefficients of a quadratic `f` on `Q^dim` from its
    /// values at `0`, `e_i`, `2e_i` and `e_i + e_j`.
    pub fn interpolate(dim: usize, f: impl Fn(&[Q]) -> Q) -> Quadratic {
        let zero = vec![Q::zero(); dim];
        let unit = |idx: &[usize]| {
            let mut v = zero.clone();
            for &i in idx {
                v[i] += Q::from_integer(1.into());
            }
            v
        };
        let c = f(&zero);
        let two = Q::from_integer(2.into());
        let mut h = vec![vec![Q::zero(); dim]; dim];
        let mut g = vec![Q::zero(); dim];
        let fe: Vec<Q> = (0..dim).map(|i| f(&unit(&[i]))).collect();
        for i in 0..dim {
            // f(2e_i) − 2f(e_i) + f(0) = H_ii.
            h[i][i] = f(&unit(&[i, i])) - &two * &fe[i] + &c;
            g[i] = &fe[i] - &c - &h[i][i] / &two;
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(&unit(&[i, j])) - &fe[i] - &fe[j] + &c;
                h[i][j] = v.clone();
                h[j][i] = v;
            }
        }
        Quadratic {
            hessian: h,
            gradient0: g,
            constant: c,
        }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let half = Q::new(1.into(), 2.into());
        let mut acc = self.constant.clone();
        for i in 0..x.len() {
            acc += &self.gradient0[i] * &x[i];
            for j in 0..x.len() {
                acc += &half * &self.hessian[i][j] * &x[i] * &x[j];
            }
        }
        acc
    }

    /// Gradient `Hx + g`.
    pub fn gradient(&self, x: &[Q]) -> Vec<Q> {
        (0..x.len())
            .map(|i| {
                let mut v = self.gradient0[i].clone();
                for j in 0..x.len() {
                    v += &self.hessian[i][j] * &x[j];
                }
                v
            })
            .collect()
    }

    /// The unique critical point when `H` is invertible.
    pub fn critical_point(&self) -> Option<Vec<Q>> {
        let m = Matrix::from_rows(self.gradient0.len(), self.hessian.clone());
        let rhs: Vec<Q> = self.gradient0.iter().map(|v| -v).collect();
        if m.rank() < self.gradient0.len() {
            return None;
        }
        solve(&m, &rhs)
    }
}

/// Character of a critical point of a quadratic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Nature {
    Max,
    Min,
    Saddle,
    Degenerate,
}

/// Nature from leading principal minors of a symmetric matrix: alternating
/// signs starting negative means negative definite, all positive means
/// positive definite; anything else with nonzero determinant is indefinite.
pub fn nature_of(h: &[Vec<BigInt>]) -> Nature {
    let dim = h.len();
    let minors: Vec<BigInt> = (1..=dim)
        .map(|m| {
            let sub: Vec<Vec<BigInt>> = h[..m].iter().map(|row| row[..m].to_vec()).collect();
            det_bareiss(&sub).expect("square by construction")
        })
        .collect();
    if minors.last().is_some_and(Zero::is_zero) {
        return Nature::Degenerate;
    }
    let neg_def = minors
        .iter()
        .enumerate()
        .all(|(i, d)| if i % 2 == 0 { d.is_negative() } else { d.is_positive() });
    let pos_def = minors.iter().all(Signed::is_positive);
    if neg_def {
        Nature::Max
    } else if pos_def {
        Nature::Min
    } else {
        Nature::Saddle
    }
}

/// The Hessian of `Δ_{n,r,k}`: tridiagonal with diagonal `−2` and
/// off-diagonals `n−1, 1, n−1, 1, …`.
pub fn hessian(n: usize, r: usize) -> Vec<Vec<i64>> {
    let dim = 2 * r;
    let mut h = vec![vec![0i64; dim]; dim];
    for i in 0..dim {
        h[i][i] = -2;
        if i + 1 < dim {
            let off = if i % 2 == 0 { n as i64 - 1 } else { 1 };
            h[i][i + 1] = off;
            h[i + 1][i] = off;
        }
    }
    h
}

/// `det Hess Δ_{n,r,·}` by the continuant recurrence: `f_1 = −2`,
/// `f_2 = 4 − (n−1)²`, `f_i = −2f_{i−1} − f_{i−2}` for odd `i` and
/// `f_i = −2f_{i−1} − (n−1)² f_{i−2}` for even `i`.
pub fn continuant_det(n: usize, r: usize) -> BigInt {
    let m2 = BigInt::from((n as i64 - 1) * (n as i64 - 1));
    let mut prev = BigInt::from(1); // f_0
    let mut cur = BigInt::from(-2); // f_1
    for i in 2..=2 * r {
        let coupling = if i % 2 == 0 { m2.clone() } else { BigInt::from(1) };
        let next = BigInt::from(-2) * &cur - coupling * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The critical point of `Δ_{n,r,k}` with its value and nature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    #[serde(with = "rational_serde::vec")]
    pub point: Vec<Q>,
    #[serde(with = "option_rational")]
    pub value: Option<Q>,
    pub hessian_det: String,
    pub nature: Nature,
}

mod option_rational {
    use super::Q;
    use crate::exactla::{parse_rational, render_rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&render_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).ok_or_else(|| D::Error::custom("bad rational")))
            .transpose()
    }
}

/// `Δ_{n,r,k}` as an interpolated quadratic.
pub fn delta_quadratic(n: usize, r: usize, k: usize) -> Quadratic {
    Quadratic::interpolate(2 * r, |x| delta(n, r, k, x).expect("arity fixed"))
}

/// Solves the gradient system of `Δ_{n,r,k}`. The degenerate case
/// (`det Hess = 0`, only `(n, r) = (3, 1)`) reports no point.
pub fn critical_point(n: usize, r: usize, k: usize) -> Result<CriticalReport, LandscapeError> {
    check_shape(n, r, k, 2 * r)?;
    let det = continuant_det(n, r);
    let h: Vec<Vec<BigInt>> = hessian(n, r)
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let nature = nature_of(&h);
    let (point, value) = if det.is_zero() {
        (Vec::new(), None)
    } else {
        let quad = delta_quadratic(n, r, k);
        let x = quad.critical_point().expect("invertible Hessian");
        let v = delta(n, r, k, &x)?;
        (x, Some(v))
    };
    Ok(CriticalReport {
        n,
        r,
        k,
        point,
        value,
        hessian_det: det.to_string(),
        nature,
    })
}

/// Minimum of `Θ_{n,k,b}` over `ℝ²` when its quadratic part is positive
/// definite (`n ≤ 4`); `None` otherwise.
pub fn theta_minimum(n: usize, k: usize, b: usize) -> Option<(Q, Vec<Q>)> {
    let quad = Quadratic::interpolate(2, |x| theta(n, k, b, &x[0], &x[1]));
    let h: Vec<Vec<BigInt>> = quad
        .hessian
        .iter()
        .map(|row| row.iter().map(|v| v.to_integer()).collect())
        .collect();
    if nature_of(&h) != Nature::Min {
        return None;
    }
    let x = quad.critical_point()?;
    Some((quad.eval(&x), x))
}

/// The largest admissible `b` at a degree-`k` dimension `h_k`:
/// `β_{2,k+2}` of the lexicographic ideal, which depends only on the
/// degree-`k` lex segment.
pub fn max_b(n: usize, k: usize, hk: usize) -> usize {
    let hk1 = macaulay_growth(n, k, hk).expect("h_k in range");
    TwoStepProfile::new(n, k, hk, hk1)
        .expect("minimal growth is admissible")
        .lex_beta2()
}

/// All admissible pairs `(h_k, h_{k+1})` with `Θ_{n,k,b} ≤ 0` for some
/// `0 ≤ b ≤ β_{2,k+2}(L_h)`, sorted.
///
/// `Θ` is non-increasing in `b` (its coefficient is `−q_{k+1} ≤ 0`), so
/// the scan over `b` runs downward from the maximum and stops at the first
/// success, which is the maximum itself whenever any `b` works.
pub fn potential_tnt_area(n: usize, k: usize, exec: Exec) -> Vec<(usize, usize)> {
    let columns: Vec<usize> = (0..=dim_forms(n, k)).collect();
    let per_column = exec.map(columns, |hk| {
        let bmax = max_b(n, k, hk) as i64;
        let lo = macaulay_growth(n, k, hk).expect("h_k in range");
        (lo..=dim_forms(n, k + 1))
            .filter(|&hk1| (0..=bmax).rev().any(|b| theta_int(n, k, b, hk as i64, hk1 as i64) <= 0))
            .map(|hk1| (hk, hk1))
            .collect::<Vec<_>>()
    });
    let mut out: Vec<(usize, usize)> = per_column.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn frac(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_int(4, 1, 2, &[2, 15]).unwrap(), -7);
        assert_eq!(delta_int(3, 1, 6, &[11, 31]).unwrap(), 1);
        let p: Vec<Q> = [116, 241, 87, 221, 67, 210, 56, 190]
            .iter()
            .map(|&v| frac(v, 9))
            .collect();
        assert_eq!(delta(2, 4, 29, &p).unwrap(), frac(13, 9));
        assert!(delta_int(2, 2, 3, &[1, 2, 3]).is_err());
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_int(4, 2, 0, 2, 15), -5);
        assert_eq!(theta(4, 2, 0, &q(2), &q(15)), q(-5));
    }

    #[test]
    fn hessian_and_continuant_examples() {
        assert_eq!(hessian(3, 1), vec![vec![-2, 2], vec![2, -2]]);
        assert_eq!(continuant_det(3, 1), BigInt::from(0));
        assert_eq!(continuant_det(2, 1), BigInt::from(3));
    }

    #[test]
    fn critical_point_examples() {
        let rep = critical_point(2, 4, 29).unwrap();
        assert_eq!(rep.value, Some(frac(13, 9)));
        assert_eq!(rep.nature, Nature::Max);
        for k in 1..=6i64 {
            let rep = critical_point(2, 1, k as usize).unwrap();
            assert_eq!(rep.value, Some(frac(-2 * k * k - 6 * k + 9, 3)));
        }
        let deg = critical_point(3, 1, 4).unwrap();
        assert_eq!(deg.nature, Nature::Degenerate);
        assert!(deg.value.is_none());
    }

    #[test]
    fn theta_minimum_three_variables() {
        for k in 1..=5i64 {
            for b in 0..=3i64 {
                let (v, _) = theta_minimum(3, k as usize, b as usize).unwrap();
                let expect = frac(
                    k.pow(4) + 8 * k.pow(3) + (21 - 6 * b) * k * k + (20 - 14 * b) * k - 6 * b * b - 120,
                    40,
                );
                assert_eq!(v, expect, "k={k} b={b}");
            }
        }
    }

    #[test]
    fn area_examples() {
        assert!(potential_tnt_area(2, 3, Exec::Sequential).is_empty());
        assert!(potential_tnt_area(4, 2, Exec::Sequential).contains(&(2, 15)));
        for k in 2..=6 {
            assert!(potential_tnt_area(3, k, Exec::Sequential).is_empty(), "k={k}");
        }
        // Order 1 in three variables keeps the tiny smoothable quotients
        // (1,2,1), (1,1,1), (1,1) and (1): Θ is 0, −1, −1, 0 there.
        assert_eq!(potential_tnt_area(3, 1, Exec::Sequential), vec![(1, 5), (2, 5), (2, 6), (3, 6)]);
        assert_eq!(theta_int(3, 1, 0, 2, 5), -1);
    }
}
