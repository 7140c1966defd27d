//! Lattice search for certificates.
//!
//! A lattice point `c = (h_k^{(0)}, h_{k+1}^{(0)}, h_{k+1}^{(1)}, …)` of the
//! admissible domain with `Δ_{n,r,k}(c) ≥ 0` certifies a nested Hilbert
//! stratum at least as large as the smoothable component.
//!
//! `Δ` is a sum of terms that each couple two consecutive coordinates, and
//! every domain inequality couples at most three. A dynamic program over
//! pairs of consecutive coordinates therefore gives the exact best value of
//! any completion of a prefix; the enumeration descends only into prefixes
//! whose best completion is non-negative, so an exhaustive search visits
//! little more than the certificates themselves.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binomial, dim_forms, macaulay_growth};
use crate::exactla::{rational_serde, Q};
use crate::exec::Exec;
use crate::landscape::{critical_point, delta_int, Nature};
use crate::profiles::{stratum_dim_bound, NestedProfile, SyzygyRegime};

/// Largest DP table (number of states at one position) before pruning
/// falls back to plain enumeration.
const MAX_DP_STATES: usize = 4_000_000;

/// Errors raised by the search layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("need n ≥ 2, r ≥ 1 and k ≥ 1 (got n = {n}, r = {r}, k = {k})")]
    BadShape { n: usize, r: usize, k: usize },
    #[error("the critical point of Δ is degenerate for (n, r) = ({n}, {r}); use the exhaustive strategy")]
    DegenerateCriticalPoint { n: usize, r: usize },
    #[error("sequences have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
}

/// Search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every lattice point of the domain.
    Exhaustive,
    /// Boxes `[⌊x*⌋ − s, ⌊x*⌋ + 1 + s]` around the critical point `x*`, for
    /// `s = 0, 1, …, cap`, growing while new certificates appear (or while
    /// none has been found yet).
    Hypercube { cap: usize },
}

impl Strategy {
    pub const DEFAULT_CAP: usize = 6;
}

/// The admissible lattice domain for `(n, r, k)`.
///
/// Constraints on `c_j` given the earlier coordinates:
/// * `0 ≤ c_0 ≤ r_k`;
/// * `(n − 1/n)·c_0 ≤ c_1 ≤ r_{k+1}`;
/// * `0 ≤ c_{2i} ≤ c_{2i−1}`;
/// * `max{n − 1/n, n − c_{2i−1}/r_{k+i+1}}·c_{2i} ≤ c_{2i+1} ≤ r_{k+i+1}`;
///
/// and every odd coordinate is at least the Macaulay growth of the one
/// before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    /// `growth[i][h]` = Macaulay growth of `h` in degree `k+i`.
    growth: Vec<Vec<i64>>,
}

impl Domain {
    pub fn new(n: usize, r: usize, k: usize) -> Result<Self, SearchError> {
        if n < 2 || r < 1 || k < 1 {
            return Err(SearchError::BadShape { n, r, k });
        }
        let growth = (0..r)
            .map(|i| {
                (0..=dim_forms(n, k + i))
                    .map(|h| macaulay_growth(n, k + i, h).expect("in range") as i64)
                    .collect()
            })
            .collect();
        Ok(Domain { n, r, k, growth })
    }

    pub fn len(&self) -> usize {
        2 * self.r
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn rr(&self, d: usize) -> i64 {
        dim_forms(self.n, d) as i64
    }

    /// Upper bound of coordinate `j` over the whole domain.
    fn coord_max(&self, j: usize) -> i64 {
        let i = j / 2;
        if j.is_multiple_of(2) {
            self.rr(self.k + i)
        } else {
            self.rr(self.k + i + 1)
        }
    }

    /// The interval of admissible values of `c_j` given `pp = c_{j−2}` and
    /// `prev = c_{j−1}` (ignored where not needed).
    pub fn interval(&self, j: usize, pp: i64, prev: i64) -> (i64, i64) {
        let n = self.n as i64;
        let i = j / 2;
        if j == 0 {
            return (0, self.rr(self.k));
        }
        if j.is_multiple_of(2) {
            return (0, prev);
        }
        let big = self.rr(self.k + i + 1);
        let mut lo = ceil_div((n * n - 1) * prev, n);
        if i > 0 {
            lo = lo.max(ceil_div((n * big - pp) * prev, big));
        }
        lo = lo.max(self.growth[i][prev as usize]);
        (lo.max(0), big)
    }

    /// Independent exact membership test.
    pub fn contains(&self, c: &[i64]) -> bool {
        if c.len() != self.len() {
            return false;
        }
        let n = BigRational::from_integer((self.n as i64).into());
        let nq = &n - BigRational::new(1.into(), (self.n as i64).into());
        let int = |v: i64| BigRational::from_integer(v.into());
        for i in 0..self.r {
            let (lo, hi) = (c[2 * i], c[2 * i + 1]);
            let outer = if i == 0 { self.rr(self.k) } else { c[2 * i - 1] };
            if lo < 0 || lo > outer || hi > self.rr(self.k + i + 1) {
                return false;
            }
            let mut factor = nq.clone();
            if i > 0 {
                let alt = &n - int(c[2 * i - 1]) / int(self.rr(self.k + i + 1));
                if alt > factor {
                    factor = alt;
                }
            }
            if factor * int(lo) > int(hi) {
                return false;
            }
            if macaulay_growth(self.n, self.k + i, lo as usize).expect("in range") as i64 > hi {
                return false;
            }
        }
        true
    }

    /// The contribution of coordinate `j` to `Δ`, given `prev = c_{j−1}`.
    /// The last coordinate also carries the linear colength term.
    fn term(&self, j: usize, prev: i64, cur: i64) -> i64 {
        let n = self.n as i64;
        let i = j / 2;
        let mut v = if j == 0 {
            cur * (self.rr(self.k) - cur)
        } else if j % 2 == 1 {
            (cur - (n - 1) * prev) * (self.rr(self.k + i + 1) - cur)
        } else {
            cur * (prev - cur)
        };
        if j + 1 == self.len() {
            let total = binomial((self.k + self.r + self.n) as u64, self.n as u64) as i64;
            v += n - n * (total - prev - cur);
        }
        v
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Per-coordinate closed boxes intersected with the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub bounds: Vec<(i64, i64)>,
}

impl Region {
    pub fn whole(dom: &Domain) -> Self {
        Region {
            bounds: (0..dom.len()).map(|j| (0, dom.coord_max(j))).collect(),
        }
    }

    fn clamp(&self, dom: &Domain) -> Self {
        Region {
            bounds: self
                .bounds
                .iter()
                .enumerate()
                .map(|(j, &(lo, hi))| (lo.max(0), hi.min(dom.coord_max(j))))
                .collect(),
        }
    }
}

/// Exact best-completion tables.
///
/// `best[j][(a, b)]` is the maximum over admissible completions
/// `c_{j+1}, …` of the remaining `Δ` terms, given `c_{j−1} = a`, `c_j = b`,
/// or `None` when no completion exists.
struct Completion {
    lo: Vec<i64>,
    width: Vec<usize>,
    best: Vec<Vec<Option<i64>>>,
}

impl Completion {
    fn build(dom: &Domain, region: &Region) -> Option<Self> {
        let len = dom.len();
        let lo: Vec<i64> = region.bounds.iter().map(|b| b.0).collect();
        let width: Vec<usize> = region
            .bounds
            .iter()
            .map(|&(a, b)| if b >= a { (b - a + 1) as usize } else { 0 })
            .collect();
        let prev_width = |j: usize| if j == 0 { 1 } else { width[j - 1] };
        if (0..len).any(|j| prev_width(j) * width[j] > MAX_DP_STATES) {
            return None;
        }
        let mut best: Vec<Vec<Option<i64>>> = (0..len).map(|j| vec![None; prev_width(j) * width[j]]).collect();
        best[len - 1].iter_mut().for_each(|v| *v = Some(0));
        for j in (0..len - 1).rev() {
            let next = j + 1;
            for ai in 0..prev_width(j) {
                let a = if j == 0 { 0 } else { lo[j - 1] + ai as i64 };
                for bi in 0..width[j] {
                    let b = lo[j] + bi as i64;
                    let (ilo, ihi) = dom.interval(next, a, b);
                    let (ilo, ihi) = (ilo.max(region.bounds[next].0), ihi.min(region.bounds[next].1));
                    let mut top: Option<i64> = None;
                    for c in ilo..=ihi {
                        let ci = (c - lo[next]) as usize;
                        if let Some(rest) = best[next][bi * width[next] + ci] {
                            let v = dom.term(next, b, c) + rest;
                            top = Some(top.map_or(v, |t| t.max(v)));
                        }
                    }
                    best[j][ai * width[j] + bi] = top;
                }
            }
        }
        Some(Completion { lo, width, best })
    }

    fn get(&self, j: usize, a: i64, b: i64) -> Option<i64> {
        let ai = if j == 0 { 0 } else { (a - self.lo[j - 1]) as usize };
        let bi = (b - self.lo[j]) as usize;
        self.best[j][ai * self.width[j] + bi]
    }
}

/// Depth-first walk over the lattice points of a region in lexicographic
/// order, optionally pruned by exact completion bounds.
struct Walker<'a> {
    dom: &'a Domain,
    region: Region,
    prune: Option<&'a Completion>,
    fixed: usize,
    c: Vec<i64>,
    partial: Vec<i64>,
    j: usize,
    from: i64,
    done: bool,
}

impl<'a> Walker<'a> {
    fn new(dom: &'a Domain, region: Region, prune: Option<&'a Completion>, prefix: &[i64]) -> Self {
        let len = dom.len();
        let mut w = Walker {
            dom,
            region,
            prune,
            fixed: prefix.len(),
            c: vec![0; len],
            partial: vec![0; len],
            j: prefix.len(),
            from: i64::MIN,
            done: false,
        };
        for (j, &v) in prefix.iter().enumerate() {
            w.c[j] = v;
            if !w.admits(j, v) {
                w.done = true;
            }
        }
        w
    }

    fn range(&self, j: usize) -> (i64, i64) {
        let pp = if j >= 2 { self.c[j - 2] } else { 0 };
        let prev = if j >= 1 { self.c[j - 1] } else { 0 };
        let (lo, hi) = self.dom.interval(j, pp, prev);
        (lo.max(self.region.bounds[j].0), hi.min(self.region.bounds[j].1))
    }

    /// Sets `c_j = v` if it is admissible and worth descending into.
    fn admits(&mut self, j: usize, v: i64) -> bool {
        let (lo, hi) = self.range(j);
        if v < lo || v > hi {
            return false;
        }
        let prev = if j >= 1 { self.c[j - 1] } else { 0 };
        let before = if j == 0 { 0 } else { self.partial[j - 1] };
        let here = before + self.dom.term(j, prev, v);
        if let Some(tab) = self.prune {
            match tab.get(j, prev, v) {
                Some(rest) if here + rest >= 0 => {}
                _ => return false,
            }
        }
        self.c[j] = v;
        self.partial[j] = here;
        true
    }
}

impl Iterator for Walker<'_> {
    type Item = (Vec<i64>, i64);

    fn next(&mut self) -> Option<Self::Item> {
        let len = self.dom.len();
        loop {
            if self.done {
                return None;
            }
            if self.j == len {
                let out = (self.c.clone(), self.partial[len - 1]);
                if len == self.fixed {
                    self.done = true;
                } else {
                    self.j = len - 1;
                    self.from = self.c[len - 1] + 1;
                }
                return Some(out);
            }
            let (lo, hi) = self.range(self.j);
            let start = self.from.max(lo);
            let j = self.j;
            let found = (start..=hi).find(|&v| self.admits(j, v));
            match found {
                Some(_) => {
                    self.j += 1;
                    self.from = i64::MIN;
                }
                None => {
                    if self.j == self.fixed {
                        self.done = true;
                    } else {
                        self.j -= 1;
                        self.from = self.c[self.j] + 1;
                    }
                }
            }
        }
    }
}

/// Every integer point of the domain, exactly once, in lexicographic order.
pub fn enumerate_domain(dom: &Domain) -> impl Iterator<Item = Vec<usize>> + '_ {
    Walker::new(dom, Region::whole(dom), None, &[]).map(|(c, _)| c.into_iter().map(|v| v as usize).collect())
}

/// A lattice point with `Δ ≥ 0`, with its derived data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub point: Vec<usize>,
    #[serde(with = "rational_serde")]
    pub delta: Q,
    pub dim_bound: usize,
    pub colengths: Vec<usize>,
    pub regimes: Vec<SyzygyRegime>,
}

impl Certificate {
    /// Builds the certificate for a domain point, or `None` if `Δ < 0`.
    pub fn at(n: usize, r: usize, k: usize, point: &[usize]) -> Option<Certificate> {
        let ints: Vec<i64> = point.iter().map(|&v| v as i64).collect();
        let d = delta_int(n, r, k, &ints).ok()?;
        if d < 0 {
            return None;
        }
        let np = NestedProfile::from_point(n, k, point).ok()?;
        let dim_bound = stratum_dim_bound(&np).ok()?;
        Some(Certificate {
            n,
            r,
            k,
            point: point.to_vec(),
            delta: BigRational::from_integer(d.into()),
            dim_bound,
            colengths: np.colengths(),
            regimes: np.regimes(),
        })
    }
}

/// Lexicographic comparison starting from the last entry.
pub fn seq_compare(d: &[usize], e: &[usize]) -> Result<Ordering, SearchError> {
    if d.len() != e.len() {
        return Err(SearchError::LengthMismatch(d.len(), e.len()));
    }
    Ok(d.iter().rev().cmp(e.iter().rev()))
}

fn cert_order(a: &Certificate, b: &Certificate) -> Ordering {
    (a.colengths.len(), a.colengths.iter().rev().collect::<Vec<_>>(), &a.point).cmp(&(
        b.colengths.len(),
        b.colengths.iter().rev().collect::<Vec<_>>(),
        &b.point,
    ))
}

/// Outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub strategy: Strategy,
    /// Number of hypercube shells explored (0 for exhaustive).
    pub shells_explored: usize,
    /// Whether the hypercube stopped because it reached its cap.
    pub cap_bound: bool,
    pub certificates: Vec<Certificate>,
}

/// All certificates inside a region, sorted.
pub fn certificates_in(dom: &Domain, region: &Region, exec: Exec) -> Vec<Certificate> {
    let region = region.clamp(dom);
    let tables = Completion::build(dom, &region);
    let tab = tables.as_ref();
    // Split the work over admissible (c_0, c_1) prefixes.
    let mut heads = Vec::new();
    let (lo0, hi0) = (region.bounds[0].0, region.bounds[0].1.min(dom.coord_max(0)));
    for c0 in lo0..=hi0 {
        let (lo1, hi1) = dom.interval(1, 0, c0);
        for c1 in lo1.max(region.bounds[1].0)..=hi1.min(region.bounds[1].1) {
            heads.push(vec![c0, c1]);
        }
    }
    let (n, r, k) = (dom.n, dom.r, dom.k);
    let chunks = exec.map(heads, |head| {
        Walker::new(dom, region.clone(), tab, &head)
            .filter(|&(_, v)| v >= 0)
            .filter_map(|(c, _)| {
                let p: Vec<usize> = c.iter().map(|&v| v as usize).collect();
                Certificate::at(n, r, k, &p)
            })
            .collect::<Vec<_>>()
    });
    let mut out: Vec<Certificate> = chunks.into_iter().flatten().collect();
    out.sort_by(cert_order);
    out
}

/// Searches `(n, r, k)` with the given strategy.
pub fn find_certificates(n: usize, r: usize, k: usize, strategy: Strategy, exec: Exec) -> Result<SearchReport, SearchError> {
    let dom = Domain::new(n, r, k)?;
    match strategy {
        Strategy::Exhaustive => Ok(SearchReport {
            n,
            r,
            k,
            strategy,
            shells_explored: 0,
            cap_bound: false,
            certificates: certificates_in(&dom, &Region::whole(&dom), exec),
        }),
        Strategy::Hypercube { cap } => {
            let crit = critical_point(n, r, k).map_err(|_| SearchError::BadShape { n, r, k })?;
            if crit.nature == Nature::Degenerate {
                return Err(SearchError::DegenerateCriticalPoint { n, r });
            }
            let base: Vec<i64> = crit
                .point
                .iter()
                .map(|x| x.floor().to_integer().try_into().unwrap_or(i64::MAX / 4))
                .collect();
            let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut all = Vec::new();
            let mut shells = 0;
            let mut cap_bound = false;
            for s in 0..=cap as i64 {
                shells += 1;
                let region = Region {
                    bounds: base.iter().map(|&b| (b - s, b + 1 + s)).collect(),
                };
                let mut fresh = 0;
                for c in certificates_in(&dom, &region, exec) {
                    if found.insert(c.point.clone()) {
                        fresh += 1;
                        all.push(c);
                    }
                }
                let keep_going = fresh > 0 || found.is_empty();
                if !keep_going {
                    break;
                }
                if s as usize == cap {
                    cap_bound = true;
                }
            }
            all.sort_by(cert_order);
            Ok(SearchReport {
                n,
                r,
                k,
                strategy,
                shells_explored: shells,
                cap_bound,
                certificates: all,
            })
        }
    }
}

/// Whether `to` is reachable from `from` (same length) by the move
/// "add 1 to every entry from position i on": exactly when the difference
/// is non-negative and non-decreasing.
fn reachable_same_length(from: &[usize], to: &[usize]) -> bool {
    let mut last = 0i64;
    for (a, b) in from.iter().zip(to) {
        let e = *b as i64 - *a as i64;
        if e < last {
            return false;
        }
        last = e;
    }
    true
}

/// Whether `to` is reachable from `from` by any composition of the two
/// covering moves: suffix increments and inserting `d_i + 1` right after
/// `d_i`. Insertions commute to the front, so all insertion patterns are
/// tried first, then the same-length test.
pub fn reachable(from: &[usize], to: &[usize]) -> bool {
    if from.len() > to.len() || from.is_empty() {
        return false;
    }
    if from.len() == to.len() {
        return reachable_same_length(from, to);
    }
    (0..from.len()).any(|i| {
        let mut next = from.to_vec();
        next.insert(i + 1, from[i] + 1);
        reachable(&next, to)
    })
}

/// Keeps the certificates whose colength sequence is not reachable from a
/// different retained sequence. Without `cross_r` only sequences of equal
/// length are compared.
pub fn minimal_sequences(certs: &[Certificate], cross_r: bool) -> Vec<Certificate> {
    let seqs: BTreeSet<&Vec<usize>> = certs.iter().map(|c| &c.colengths).collect();
    let minimal: BTreeSet<&Vec<usize>> = seqs
        .iter()
        .filter(|s| {
            !seqs.iter().any(|t| {
                t != *s && (cross_r || t.len() == s.len()) && reachable(t, s)
            })
        })
        .copied()
        .collect();
    certs
        .iter()
        .filter(|c| minimal.contains(&c.colengths))
        .cloned()
        .collect()
}

/// The plain sequence version of [`minimal_sequences`].
pub fn minimal_sequence_set(seqs: &[Vec<usize>], cross_r: bool) -> Vec<Vec<usize>> {
    let set: BTreeSet<&Vec<usize>> = seqs.iter().collect();
    set.iter()
        .filter(|s| {
            !set.iter()
                .any(|t| t != *s && (cross_r || t.len() == s.len()) && reachable(t, s))
        })
        .map(|s| (*s).clone())
        .collect()
}
