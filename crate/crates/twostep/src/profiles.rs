//! The Hilbert-function calculus of 2-step ideals.
//!
//! A 2-step ideal `I` of order `k` satisfies `m^{k+2} ⊂ I ⊂ m^k`. Its Hilbert
//! function is determined by the pair `(h_k, h_{k+1}) = (dim I_k, dim I_{k+1})`.
//! This module holds that pair together with the derived invariants, the
//! syzygy-regime classification, the expected tangent dimensions and the
//! stratum dimension bound for nestings.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binomial, dim_forms, ek_betti, lex_ideal, macaulay_growth, HilbertFunction};

/// Errors raised when building or using profiles.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("need n ≥ 2 and k ≥ 1 (got n = {n}, k = {k})")]
    BadShape { n: usize, k: usize },
    #[error("h_k = {hk} exceeds r_k = {max}")]
    HkOutOfRange { hk: usize, max: usize },
    #[error("h_(k+1) = {hk1} is outside [{min}, {max}] (Macaulay growth / ambient bound)")]
    Hk1OutOfRange { hk1: usize, min: usize, max: usize },
    #[error("quotient Hilbert function {hf:?} is not that of a 2-step ideal in {n} variables")]
    NotTwoStep { n: usize, hf: Vec<usize> },
    #[error("level {index}: order {found} but expected {expected}")]
    OrderMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("level {index}: degree-{degree} piece of dimension {inner} is not contained in the previous level's piece of dimension {outer}")]
    Containment {
        index: usize,
        degree: usize,
        inner: usize,
        outer: usize,
    },
    #[error("level {index} has regime {regime:?}, outside the range where the dimension formula holds")]
    RegimeViolation { index: usize, regime: SyzygyRegime },
    #[error("level {index} violates the nested growth inequality")]
    NestedInequality { index: usize },
    #[error("b = {b} is outside [0, {max}]")]
    BOutOfRange { b: usize, max: usize },
    #[error("a nesting needs at least one level")]
    Empty,
    #[error("cannot parse {0:?}: expected `n=…,k=…,(1,n,…)` or `n=…,k=…,[(h,h'),…]`")]
    Syntax(String),
    #[error("colength drops from {before} to {after} at level {index}")]
    ColengthDecreases {
        index: usize,
        before: usize,
        after: usize,
    },
}

/// The five syzygy regimes of a 2-step profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SyzygyRegime {
    NoSyzygies,
    VeryFew,
    Few,
    Lots,
    Degenerate1Step,
}

impl SyzygyRegime {
    /// Short label used in tables.
    pub fn label(self) -> &'static str {
        match self {
            SyzygyRegime::NoSyzygies => "no syz",
            SyzygyRegime::VeryFew => "very few",
            SyzygyRegime::Few => "few",
            SyzygyRegime::Lots => "lots",
            SyzygyRegime::Degenerate1Step => "1-step",
        }
    }
}

/// A 2-step Hilbert function `(n, k, h_k, h_{k+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoStepProfile {
    pub n: usize,
    pub k: usize,
    pub hk: usize,
    pub hk1: usize,
}

impl TwoStepProfile {
    /// Validates `0 ≤ h_k ≤ r_k` and `h_k^{⟨k+1⟩} ≤ h_{k+1} ≤ r_{k+1}`.
    pub fn new(n: usize, k: usize, hk: usize, hk1: usize) -> Result<Self, ProfileError> {
        if n < 2 || k < 1 {
            return Err(ProfileError::BadShape { n, k });
        }
        let rk = dim_forms(n, k);
        if hk > rk {
            return Err(ProfileError::HkOutOfRange { hk, max: rk });
        }
        let min = macaulay_growth(n, k, hk).expect("h_k already range-checked");
        let max = dim_forms(n, k + 1);
        if hk1 < min || hk1 > max {
            return Err(ProfileError::Hk1OutOfRange { hk1, min, max });
        }
        Ok(TwoStepProfile { n, k, hk, hk1 })
    }

    /// Reads a quotient Hilbert function `(1, n, r_2, …, r_{k−1}, q_k, q_{k+1})`.
    /// The order `k` is the first degree where the value drops below `r_k`.
    pub fn from_quotient(n: usize, hf: &[usize]) -> Result<Self, ProfileError> {
        let bad = || ProfileError::NotTwoStep {
            n,
            hf: hf.to_vec(),
        };
        let k = (0..=hf.len())
            .find(|&d| hf.get(d).copied().unwrap_or(0) < dim_forms(n, d))
            .ok_or_else(bad)?;
        if k == 0 || hf.len() > k + 2 || (0..k).any(|d| hf[d] != dim_forms(n, d)) {
            return Err(bad());
        }
        let qk = hf.get(k).copied().unwrap_or(0);
        let qk1 = hf.get(k + 1).copied().unwrap_or(0);
        let rk1 = dim_forms(n, k + 1);
        if qk1 > rk1 {
            return Err(bad());
        }
        TwoStepProfile::new(n, k, dim_forms(n, k) - qk, rk1 - qk1)
    }

    /// `r_d` in `n` variables.
    pub fn r(&self, d: usize) -> usize {
        dim_forms(self.n, d)
    }

    pub fn qk(&self) -> usize {
        self.r(self.k) - self.hk
    }

    pub fn qk1(&self) -> usize {
        self.r(self.k + 1) - self.hk1
    }

    /// `s_h = h_{k+1} − n·h_k`.
    pub fn s(&self) -> i64 {
        self.hk1 as i64 - (self.n * self.hk) as i64
    }

    /// `t_h = r_{k+2} − n·h_{k+1} + C(n,2)·h_k`.
    pub fn t(&self) -> i64 {
        self.r(self.k + 2) as i64 - (self.n * self.hk1) as i64
            + binomial(self.n as u64, 2) as i64 * self.hk as i64
    }

    /// `dim R/I = C(k+n+1, n) − h_k − h_{k+1}`.
    pub fn colength(&self) -> usize {
        binomial((self.k + self.n + 1) as u64, self.n as u64) as usize - self.hk - self.hk1
    }

    /// `(1, n, …, r_{k−1}, q_k, q_{k+1})` with trailing zeros removed.
    pub fn quotient_hf(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.k).map(|d| self.r(d)).collect();
        v.push(self.qk());
        v.push(self.qk1());
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// The ideal-side Hilbert function.
    pub fn ideal_hf(&self) -> HilbertFunction {
        let mut v = vec![0; self.k];
        v.push(self.hk);
        v.push(self.hk1);
        HilbertFunction::ideal(self.n, v)
    }

    /// `β_{2,k+2}` of the lexicographic ideal with this Hilbert function.
    pub fn lex_beta2(&self) -> usize {
        let l = lex_ideal(self.n, &self.ideal_hf()).expect("profile is admissible by construction");
        ek_betti(&l, 2, self.k + 2)
    }
}

impl fmt::Display for TwoStepProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hf: Vec<String> = self.quotient_hf().iter().map(ToString::to_string).collect();
        write!(f, "n={},k={},({})", self.n, self.k, hf.join(","))
    }
}

/// Splits `n=…[,k=…],rest` into its parts.
fn split_header(text: &str) -> Result<(usize, Option<usize>, String), ProfileError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ProfileError::Syntax(text.to_string());
    let mut rest = compact.as_str();
    let mut field = |key: &str| -> Option<usize> {
        let body = rest.strip_prefix(key)?;
        let (value, tail) = body.split_once(',')?;
        let v = value.parse().ok()?;
        rest = tail;
        Some(v)
    };
    let n = field("n=").ok_or_else(bad)?;
    let k = field("k=");
    Ok((n, k, rest.to_string()))
}

fn parse_list(body: &str, open: char, close: char) -> Option<Vec<usize>> {
    let inner = body.strip_prefix(open)?.strip_suffix(close)?;
    inner.split(',').map(|t| t.parse().ok()).collect()
}

/// Parses the [`Display`](fmt::Display) form `n=6,k=2,(1,6,20,7)`: the
/// quotient Hilbert function in parentheses, `k=` optional.
impl FromStr for TwoStepProfile {
    type Err = ProfileError;
    fn from_str(text: &str) -> Result<Self, ProfileError> {
        let (n, k, rest) = split_header(text)?;
        let hf = parse_list(&rest, '(', ')').ok_or_else(|| ProfileError::Syntax(text.to_string()))?;
        let p = TwoStepProfile::from_quotient(n, &hf)?;
        match k {
            Some(k) if k != p.k => Err(ProfileError::OrderMismatch {
                index: 0,
                expected: k,
                found: p.k,
            }),
            _ => Ok(p),
        }
    }
}

/// Syzygy regime, checked in the order Degenerate1Step, NoSyzygies,
/// VeryFew, Few, Lots.
pub fn classify(p: &TwoStepProfile) -> SyzygyRegime {
    let n = p.n as i64;
    let hk = p.hk as i64;
    let s = p.s();
    if p.hk == 0 || p.hk1 == p.r(p.k + 1) {
        SyzygyRegime::Degenerate1Step
    } else if s >= 0 {
        SyzygyRegime::NoSyzygies
    } else if -s * n <= hk {
        SyzygyRegime::VeryFew
    } else if -s < hk {
        SyzygyRegime::Few
    } else {
        SyzygyRegime::Lots
    }
}

/// Expected tangent dimensions of a 2-step profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTangent {
    /// `dim T^{=1} = h_k·q_{k+1}`.
    pub t1: usize,
    /// `max{0, h_k·q_k + s_h·q_{k+1}}`.
    pub t0_lower: usize,
}

pub fn expected_tangent_dims(p: &TwoStepProfile) -> ExpectedTangent {
    let t0 = p.hk as i64 * p.qk() as i64 + p.s() * p.qk1() as i64;
    ExpectedTangent {
        t1: p.hk * p.qk1(),
        t0_lower: t0.max(0) as usize,
    }
}

/// `max{0, h_k·r_{k−1} + s_h·q_k + (t_h − b)·q_{k+1}}` for
/// `0 ≤ b ≤ β_{2,k+2}(L_h)`.
pub fn tneg1_lower(p: &TwoStepProfile, b: usize) -> Result<usize, ProfileError> {
    let max = p.lex_beta2();
    if b > max {
        return Err(ProfileError::BOutOfRange { b, max });
    }
    let v = p.hk as i64 * p.r(p.k - 1) as i64
        + p.s() * p.qk() as i64
        + (p.t() - b as i64) * p.qk1() as i64;
    Ok(v.max(0) as usize)
}

/// A chain of 2-step profiles of orders `k, k+1, …, k+r−1` describing a
/// nesting `I^{(0)} ⊇ I^{(1)} ⊇ …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "NestedProfileJson", try_from = "NestedProfileJson")]
pub struct NestedProfile {
    pub n: usize,
    pub k: usize,
    pub levels: Vec<TwoStepProfile>,
}

impl NestedProfile {
    /// Validates consecutive orders, containment of the shared graded piece
    /// and non-decreasing colengths.
    pub fn new(n: usize, k: usize, levels: Vec<TwoStepProfile>) -> Result<Self, ProfileError> {
        if levels.is_empty() {
            return Err(ProfileError::Empty);
        }
        for (i, p) in levels.iter().enumerate() {
            if p.k != k + i || p.n != n {
                return Err(ProfileError::OrderMismatch {
                    index: i,
                    expected: k + i,
                    found: p.k,
                });
            }
            if i > 0 {
                let outer = levels[i - 1].hk1;
                if p.hk > outer {
                    return Err(ProfileError::Containment {
                        index: i,
                        degree: p.k,
                        inner: p.hk,
                        outer,
                    });
                }
                let (before, after) = (levels[i - 1].colength(), p.colength());
                if after < before {
                    return Err(ProfileError::ColengthDecreases {
                        index: i,
                        before,
                        after,
                    });
                }
            }
        }
        Ok(NestedProfile { n, k, levels })
    }

    /// Builds the nesting from a lattice point
    /// `(h_k^{(0)}, h_{k+1}^{(0)}, h_{k+1}^{(1)}, h_{k+2}^{(1)}, …)`.
    pub fn from_point(n: usize, k: usize, point: &[usize]) -> Result<Self, ProfileError> {
        let levels = point
            .chunks(2)
            .enumerate()
            .map(|(i, c)| TwoStepProfile::new(n, k + i, c[0], *c.get(1).unwrap_or(&0)))
            .collect::<Result<Vec<_>, _>>()?;
        NestedProfile::new(n, k, levels)
    }

    pub fn r(&self) -> usize {
        self.levels.len()
    }

    pub fn colengths(&self) -> Vec<usize> {
        self.levels.iter().map(TwoStepProfile::colength).collect()
    }

    pub fn point(&self) -> Vec<usize> {
        self.levels.iter().flat_map(|p| [p.hk, p.hk1]).collect()
    }

    pub fn regimes(&self) -> Vec<SyzygyRegime> {
        self.levels.iter().map(classify).collect()
    }

    /// The nested growth inequality for level `i ≥ 1`:
    /// `max{n − 1/n, n − h^{(i−1)}_{k+i}/r_{k+i+1}}·h^{(i)}_{k+i} ≤ h^{(i)}_{k+i+1}`,
    /// evaluated in exact rationals.
    pub fn nested_inequality_holds(&self, i: usize) -> bool {
        if i == 0 {
            return true;
        }
        let n = BigRational::from_integer((self.n as i64).into());
        let p = &self.levels[i];
        let outer = BigRational::from_integer((self.levels[i - 1].hk1 as i64).into());
        let r = BigRational::from_integer((p.r(p.k + 1) as i64).into());
        let a = &n - BigRational::new(1.into(), (self.n as i64).into());
        let b = &n - outer / r;
        let factor = if a > b { a } else { b };
        factor * BigRational::from_integer((p.hk as i64).into())
            <= BigRational::from_integer((p.hk1 as i64).into())
    }
}

/// Wire format `{n, k, pairs: [[h, h'], …]}`.
#[derive(Serialize, Deserialize)]
struct NestedProfileJson {
    n: usize,
    k: usize,
    pairs: Vec<[usize; 2]>,
}

impl From<NestedProfile> for NestedProfileJson {
    fn from(np: NestedProfile) -> Self {
        NestedProfileJson {
            n: np.n,
            k: np.k,
            pairs: np.levels.iter().map(|p| [p.hk, p.hk1]).collect(),
        }
    }
}

impl TryFrom<NestedProfileJson> for NestedProfile {
    type Error = ProfileError;
    fn try_from(j: NestedProfileJson) -> Result<Self, ProfileError> {
        let point: Vec<usize> = j.pairs.iter().flatten().copied().collect();
        NestedProfile::from_point(j.n, j.k, &point)
    }
}

impl fmt::Display for NestedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .levels
            .iter()
            .map(|p| format!("({},{})", p.hk, p.hk1))
            .collect();
        write!(f, "n={},k={},[{}]", self.n, self.k, pairs.join(","))
    }
}

/// Parses the [`Display`](fmt::Display) form `n=3,k=2,[(0,6),(1,10)]`.
impl FromStr for NestedProfile {
    type Err = ProfileError;
    fn from_str(text: &str) -> Result<Self, ProfileError> {
        let bad = || ProfileError::Syntax(text.to_string());
        let (n, k, rest) = split_header(text)?;
        let k = k.ok_or_else(bad)?;
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let flat = inner.replace(['(', ')'], "");
        let point: Vec<usize> = flat
            .split(',')
            .map(|t| t.parse().ok())
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        if !point.len().is_multiple_of(2) || !inner.starts_with('(') {
            return Err(bad());
        }
        NestedProfile::from_point(n, k, &point)
    }
}

/// Lower bound for the dimension of the Hilbert stratum of nestings:
/// `h_k^{(0)}(r_k − h_k^{(0)}) + Σ_{i≥1} h^{(i)}_{k+i}(h^{(i−1)}_{k+i} − h^{(i)}_{k+i})
///  + Σ_i (h^{(i)}_{k+i+1} − (n−1)h^{(i)}_{k+i})(r_{k+i+1} − h^{(i)}_{k+i+1})`.
///
/// Every level must be in the NoSyzygies, VeryFew or Degenerate1Step regime
/// and the nested growth inequality must hold.
pub fn stratum_dim_bound(np: &NestedProfile) -> Result<usize, ProfileError> {
    let mut total: i64 = 0;
    for (i, p) in np.levels.iter().enumerate() {
        let regime = classify(p);
        if matches!(regime, SyzygyRegime::Few | SyzygyRegime::Lots) {
            return Err(ProfileError::RegimeViolation { index: i, regime });
        }
        if !np.nested_inequality_holds(i) {
            return Err(ProfileError::NestedInequality { index: i });
        }
        let hk = p.hk as i64;
        let hk1 = p.hk1 as i64;
        let outer = if i == 0 {
            p.r(p.k) as i64
        } else {
            np.levels[i - 1].hk1 as i64
        };
        total += hk * (outer - hk);
        total += (hk1 - (np.n as i64 - 1) * hk) * (p.r(p.k + 1) as i64 - hk1);
    }
    Ok(total.max(0) as usize)
}

/// Dimension `n·d` of the smoothable component of `Hilb^d A^n`.
pub fn smoothable_dim(n: usize, d: usize) -> usize {
    n * d
}
