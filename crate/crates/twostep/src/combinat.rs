//! Exact combinatorics of monomials: binomials, dimensions of spaces of
//! forms, the degree-then-lexicographic monomial order, Macaulay growth,
//! lexicographic ideals and the graded Betti numbers of lex (stable) ideals.
//!
//! Monomials of a fixed degree are always listed from the greatest to the
//! smallest in the order `x_1 > x_2 > … > x_n`, so index 0 of a degree is
//! `x_1^d` and lex segments are prefixes of that list.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the combinatorial layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatError {
    #[error("value h = {h} is out of range 0..={max} for degree {degree} in {n} variables")]
    OutOfRange {
        n: usize,
        degree: usize,
        h: usize,
        max: usize,
    },
    #[error("Hilbert function is not admissible in {n} variables (fails at degree {degree})")]
    Inadmissible { n: usize, degree: usize },
}

const TABLE: usize = 160;

fn pascal() -> &'static Vec<Vec<u64>> {
    static CELL: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut t = vec![vec![0u64; TABLE]; TABLE];
        for a in 0..TABLE {
            t[a][0] = 1;
            for b in 1..=a {
                t[a][b] = t[a - 1][b - 1].saturating_add(t[a - 1][b]);
            }
        }
        t
    })
}

/// Exact binomial coefficient `C(a, b)`, zero when `b > a`.
///
/// Uses the multiplicative formula `C(a, i+1) = C(a, i)·(a−i)/(i+1)`, where
/// every intermediate quotient is exact.
///
/// # Panics
/// Panics if the result does not fit in a `u64`.
pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * u128::from(a - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

fn binom_small(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    if a < TABLE {
        pascal()[a][b] as usize
    } else {
        binomial(a as u64, b as u64) as usize
    }
}

/// Dimension `r_d = C(d+n−1, n−1)` of the space of degree-`d` forms in `n`
/// variables.
pub fn dim_forms(n: usize, d: usize) -> usize {
    assert!(n >= 1, "at least one variable is required");
    binom_small(d + n - 1, n - 1)
}

/// A monomial `x_1^{a_1}⋯x_n^{a_n}`.
///
/// The derived ordering is the global monomial order: first by degree, then
/// lexicographically with `x_1 > … > x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: usize,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().map(|&e| e as usize).sum();
        Monomial { exponents, degree }
    }

    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n])
    }

    /// The variable `x_j` (0-based index).
    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let e = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Monomial::new(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// 1-based index of the largest variable index dividing the monomial,
    /// zero for the constant monomial.
    pub fn max_var(&self) -> usize {
        self.exponents
            .iter()
            .rposition(|&e| e > 0)
            .map_or(0, |p| p + 1)
    }

    /// Position of the monomial in the degree-`d` basis (greatest first).
    pub fn rank(&self) -> usize {
        rank_of(&self.exponents)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Index of an exponent vector inside its degree, greatest monomial first.
///
/// Monomials preceding `x^a` are those agreeing on a prefix and then having a
/// larger exponent; summing those counts telescopes into one binomial per
/// variable.
pub fn rank_of(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut remaining: usize = exps.iter().map(|&e| e as usize).sum();
    let mut rank = 0;
    for i in 0..n.saturating_sub(1) {
        let e = exps[i] as usize;
        if remaining > e {
            let m = n - i - 1;
            rank += binom_small(remaining - e - 1 + m, m);
        }
        remaining -= e;
    }
    rank
}

/// All monomials of degree `d` in `n` variables, greatest first.
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(dim_forms(n, d));
    let mut cur = vec![0u32; n];
    fill(&mut out, &mut cur, 0, d);
    out
}

/// `table[c][j]` is the index in degree `d+1` of `x_{j+1}` times the
/// `c`-th monomial of degree `d`. Tables are built once per `(n, d)`.
pub fn mul_table(n: usize, d: usize) -> Arc<Vec<Vec<usize>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<Vec<usize>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&(n, d)) {
        return Arc::clone(t);
    }
    let table: Vec<Vec<usize>> = monomials(n, d)
        .iter()
        .map(|m| {
            (0..n)
                .map(|j| {
                    let mut e = m.exponents().to_vec();
                    e[j] += 1;
                    rank_of(&e)
                })
                .collect()
        })
        .collect();
    let table = Arc::new(table);
    cache.lock().expect("cache lock").insert((n, d), Arc::clone(&table));
    table
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: usize) {
    let n = cur.len();
    if pos + 1 == n {
        cur[pos] = left as u32;
        out.push(Monomial::new(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e as u32;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// Whether a sequence of values is tagged as the Hilbert function of an
/// ideal or of its quotient algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Ideal,
    Quotient,
}

/// A Hilbert function stored densely on `[0, len)`.
///
/// Past the stored window, ideal-side functions take the value `r_i` and
/// quotient-side functions the value `0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertFunction {
    pub n: usize,
    pub side: Side,
    pub values: Vec<usize>,
}

impl HilbertFunction {
    pub fn ideal(n: usize, values: Vec<usize>) -> Self {
        HilbertFunction {
            n,
            side: Side::Ideal,
            values,
        }
    }

    pub fn quotient(n: usize, values: Vec<usize>) -> Self {
        HilbertFunction {
            n,
            side: Side::Quotient,
            values,
        }
    }

    /// Value in degree `d`, applying the tail convention. Values that would
    /// be negative after a side conversion are clamped at zero.
    pub fn get(&self, d: usize) -> usize {
        match (self.side, self.values.get(d)) {
            (_, Some(&v)) => v,
            (Side::Ideal, None) => dim_forms(self.n, d),
            (Side::Quotient, None) => 0,
        }
    }

    /// The same function expressed on the ideal side.
    pub fn to_ideal(&self) -> HilbertFunction {
        match self.side {
            Side::Ideal => self.clone(),
            Side::Quotient => HilbertFunction::ideal(
                self.n,
                self.values
                    .iter()
                    .enumerate()
                    .map(|(d, &q)| dim_forms(self.n, d).saturating_sub(q))
                    .collect(),
            ),
        }
    }

    /// The same function expressed on the quotient side.
    pub fn to_quotient(&self) -> HilbertFunction {
        match self.side {
            Side::Quotient => self.clone(),
            Side::Ideal => {
                let mut v: Vec<usize> = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(d, &h)| dim_forms(self.n, d).saturating_sub(h))
                    .collect();
                while v.last() == Some(&0) {
                    v.pop();
                }
                HilbertFunction::quotient(self.n, v)
            }
        }
    }

    /// Sum of the quotient-side values, i.e. the colength.
    pub fn colength(&self) -> usize {
        self.to_quotient().values.iter().sum()
    }
}

/// The `h` greatest monomials of degree `d`.
pub fn lex_segment(n: usize, d: usize, h: usize) -> Vec<Monomial> {
    let mut all = monomials(n, d);
    all.truncate(h);
    all
}

/// Macaulay growth `h^{⟨d+1⟩}`: the dimension in degree `d+1` of the ideal
/// generated by the lex segment of size `h` in degree `d`, obtained by
/// enumerating the distinct multiples of the segment.
pub fn macaulay_growth(n: usize, d: usize, h: usize) -> Result<usize, CombinatError> {
    let max = dim_forms(n, d);
    if h > max {
        return Err(CombinatError::OutOfRange {
            n,
            degree: d,
            h,
            max,
        });
    }
    let mut seen = HashSet::new();
    for m in lex_segment(n, d, h) {
        for j in 0..n {
            seen.insert(m.mul(&Monomial::var(n, j)).rank());
        }
    }
    Ok(seen.len())
}

/// Macaulay's criterion: `0 ≤ h_i ≤ r_i` and `h_{i+1} ≥ h_i^{⟨i+1⟩}` on the
/// stored window (a quotient-side function is converted first).
pub fn is_admissible(h: &HilbertFunction, n: usize) -> bool {
    first_inadmissible_degree(h, n).is_none()
}

fn first_inadmissible_degree(h: &HilbertFunction, n: usize) -> Option<usize> {
    let side_ok = |d: usize| -> bool {
        h.side == Side::Ideal || h.values.get(d).is_none_or(|&q| q <= dim_forms(n, d))
    };
    let hi = HilbertFunction {
        n,
        ..h.to_ideal()
    };
    for d in 0..=hi.values.len() {
        let cur = hi.get(d);
        if !side_ok(d) || cur > dim_forms(n, d) {
            return Some(d);
        }
        let next = hi.get(d + 1);
        match macaulay_growth(n, d, cur) {
            Ok(g) if next >= g => {}
            _ => return Some(d),
        }
    }
    None
}

/// A lexicographic monomial ideal, stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexIdeal {
    pub n: usize,
    pub generators: BTreeMap<usize, Vec<Monomial>>,
}

impl LexIdeal {
    /// Total number of minimal generators.
    pub fn num_generators(&self) -> usize {
        self.generators.values().map(Vec::len).sum()
    }

    /// Dimension of the degree-`d` piece, counted from the generators.
    pub fn piece_dim(&self, d: usize) -> usize {
        monomials(self.n, d)
            .iter()
            .filter(|m| {
                self.generators
                    .values()
                    .flatten()
                    .any(|g| g.divides(m))
            })
            .count()
    }
}

/// The lexicographic ideal `L_h` with ideal-side Hilbert function `h`.
pub fn lex_ideal(n: usize, h: &HilbertFunction) -> Result<LexIdeal, CombinatError> {
    if let Some(degree) = first_inadmissible_degree(h, n) {
        return Err(CombinatError::Inadmissible { n, degree });
    }
    let hi = h.to_ideal();
    let mut generators = BTreeMap::new();
    let mut prev: HashSet<usize> = HashSet::new();
    for d in 0..=hi.values.len() {
        let seg = lex_segment(n, d, hi.get(d));
        let gens: Vec<Monomial> = seg
            .iter()
            .filter(|m| !prev.contains(&m.rank()))
            .cloned()
            .collect();
        if !gens.is_empty() {
            generators.insert(d, gens);
        }
        prev = seg
            .iter()
            .flat_map(|m| (0..n).map(move |j| m.mul(&Monomial::var(n, j)).rank()))
            .collect();
    }
    Ok(LexIdeal { n, generators })
}

/// Graded Betti number `β_{i,j}` of a lex (hence stable) ideal via the
/// Eliahou–Kervaire formula `β_{i,i+deg u} = Σ_u C(max(u)−1, i)`.
pub fn ek_betti(l: &LexIdeal, i: usize, j: usize) -> usize {
    if j < i {
        return 0;
    }
    l.generators
        .get(&(j - i))
        .map_or(0, |gens| {
            gens.iter()
                .map(|u| binom_small(u.max_var().saturating_sub(1), i))
                .sum()
        })
}
