//! Concrete graded 2-step ideals.
//!
//! A [`GradedIdeal`] of order `k` stores its degree-`k` and degree-`k+1`
//! pieces; lower degrees are zero and degrees `≥ k+2` are everything. This
//! module builds such ideals from generators, samples generic ones for each
//! syzygy regime, computes the low Betti numbers, and assembles nestings.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binomial, dim_forms, HilbertFunction};
use crate::exactla::{kernel, mul_by_linear, mul_var, parse_rational, render_rational, Field, LinalgError, Matrix, Subspace, Q};
use crate::poly::{Form, Poly};
use crate::profiles::{classify, NestedProfile, ProfileError, SyzygyRegime, TwoStepProfile};

/// Errors raised while building or sampling ideals.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("generator of degree {degree} is outside the window [{k}, {}]", k + 2)]
    DegreeOutOfWindow { degree: usize, k: usize },
    #[error("no generator of degree k = {k}")]
    NoOrderGenerator { k: usize },
    #[error("generator has {found} variables, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("R_1·I_k is not contained in I_(k+1)")]
    NotClosed,
    #[error("the ideal does not contain m^{degree}")]
    NotTwoStep { degree: usize },
    #[error("no usable generator (all zero)")]
    Empty,
    #[error("sampler exhausted its {retries} retries for {profile}")]
    SamplerExhausted { profile: String, retries: usize },
    #[error("level {level}: the kernel inside the previous level is too small ({available} < {needed})")]
    InfeasibleIntersection {
        level: usize,
        available: usize,
        needed: usize,
    },
    #[error("{profile}: {reason}")]
    Refused { profile: String, reason: String },
    #[error("level {level} is not contained in level {} in degree {degree}", level - 1)]
    ContainmentViolation { level: usize, degree: usize },
    #[error("a coefficient has no image in the target field")]
    FieldReduction,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// A graded ideal with `m^{k+2} ⊂ I ⊂ m^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedIdeal<F> {
    n: usize,
    k: usize,
    lo: Subspace<F>,
    hi: Subspace<F>,
}

impl<F: Field> GradedIdeal<F> {
    /// Checks ambient dimensions and `R_1·lo ⊆ hi`. An empty `lo` is
    /// allowed: such ideals are degenerate (1-step) members of the family.
    pub fn new(n: usize, k: usize, lo: Subspace<F>, hi: Subspace<F>) -> Result<Self, IdealError> {
        if lo.ambient_dim() != dim_forms(n, k) || hi.ambient_dim() != dim_forms(n, k + 1) {
            return Err(IdealError::Linalg(LinalgError::AmbientMismatch {
                left: lo.ambient_dim(),
                right: dim_forms(n, k),
            }));
        }
        if !hi.contains(&mul_by_linear(&lo, n, k)?)? {
            return Err(IdealError::NotClosed);
        }
        Ok(GradedIdeal { n, k, lo, hi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The degree-`k` piece.
    pub fn lo(&self) -> &Subspace<F> {
        &self.lo
    }

    /// The degree-`k+1` piece.
    pub fn hi(&self) -> &Subspace<F> {
        &self.hi
    }

    /// The degree-`d` piece as a subspace of `R_d`.
    pub fn piece(&self, d: usize) -> Subspace<F> {
        let r = dim_forms(self.n, d);
        match d {
            _ if d < self.k => Subspace::zero(r),
            _ if d == self.k => self.lo.clone(),
            _ if d == self.k + 1 => self.hi.clone(),
            _ => Subspace::full(r),
        }
    }

    pub fn piece_dim(&self, d: usize) -> usize {
        match d {
            _ if d < self.k => 0,
            _ if d == self.k => self.lo.dim(),
            _ if d == self.k + 1 => self.hi.dim(),
            _ => dim_forms(self.n, d),
        }
    }

    /// `dim (R/I)_d`.
    pub fn quotient_dim(&self, d: usize) -> usize {
        dim_forms(self.n, d) - self.piece_dim(d)
    }

    /// Quotient Hilbert function `(1, n, …, r_{k−1}, q_k, q_{k+1})`,
    /// trailing zeros removed.
    pub fn hilbert_function(&self) -> HilbertFunction {
        let mut v: Vec<usize> = (0..=self.k + 1).map(|d| self.quotient_dim(d)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        HilbertFunction::quotient(self.n, v)
    }

    pub fn colength(&self) -> usize {
        (0..=self.k + 1).map(|d| self.quotient_dim(d)).sum()
    }

    /// The profile `(n, k, h_k, h_{k+1})`.
    pub fn profile(&self) -> TwoStepProfile {
        TwoStepProfile {
            n: self.n,
            k: self.k,
            hk: self.lo.dim(),
            hk1: self.hi.dim(),
        }
    }

    /// Entrywise image in another field; fails if a dimension drops.
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Result<GradedIdeal<G>, IdealError> {
        let conv = |s: &Subspace<F>| -> Result<Subspace<G>, IdealError> {
            let rows = s
                .basis()
                .iter()
                .map(|r| r.iter().map(&f).collect::<Option<Vec<G>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or(IdealError::FieldReduction)?;
            let out = Subspace::from_rows(s.ambient_dim(), rows);
            if out.dim() != s.dim() {
                return Err(IdealError::FieldReduction);
            }
            Ok(out)
        };
        GradedIdeal::new(self.n, self.k, conv(&self.lo)?, conv(&self.hi)?)
    }

    /// The first degree in which `other ⊄ self`, if any.
    pub fn first_non_containment(&self, other: &GradedIdeal<F>) -> Option<usize> {
        let top = self.k.max(other.k) + 2;
        (0..=top).find(|&d| !self.piece(d).contains(&other.piece(d)).expect("same ambient"))
    }
}

impl GradedIdeal<Q> {
    /// Reduction modulo the working prime.
    pub fn to_fp(&self) -> Result<GradedIdeal<crate::exactla::Fp>, IdealError> {
        self.map_field(crate::exactla::Fp::from_rational)
    }
}

/// Wire format `{n, k, lo: [[p/q, …], …], hi: …}` (canonical basis rows).
#[derive(Serialize, Deserialize)]
struct GradedIdealJson {
    n: usize,
    k: usize,
    lo: Vec<Vec<String>>,
    hi: Vec<Vec<String>>,
}

impl Serialize for GradedIdeal<Q> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = |sp: &Subspace<Q>| -> Vec<Vec<String>> {
            sp.basis()
                .iter()
                .map(|r| r.iter().map(render_rational).collect())
                .collect()
        };
        GradedIdealJson {
            n: self.n,
            k: self.k,
            lo: rows(&self.lo),
            hi: rows(&self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedIdeal<Q> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = GradedIdealJson::deserialize(d)?;
        let parse = |rows: &[Vec<String>], amb: usize| -> Result<Subspace<Q>, D::Error> {
            let rows = rows
                .iter()
                .map(|r| {
                    if r.len() != amb {
                        return Err(D::Error::custom("row length mismatch"));
                    }
                    r.iter()
                        .map(|t| parse_rational(t).ok_or_else(|| D::Error::custom("bad rational")))
                        .collect()
                })
                .collect::<Result<Vec<Vec<Q>>, _>>()?;
            Ok(Subspace::from_rows(amb, rows))
        };
        let lo = parse(&j.lo, dim_forms(j.n, j.k))?;
        let hi = parse(&j.hi, dim_forms(j.n, j.k + 1))?;
        GradedIdeal::new(j.n, j.k, lo, hi).map_err(D::Error::custom)
    }
}

/// The ideal generated by forms of degrees `k`, `k+1`, `k+2` plus `m^{k+2}`.
pub fn two_step_closure<F: Field>(n: usize, k: usize, gens: &[Form<F>]) -> Result<GradedIdeal<F>, IdealError> {
    let mut lo_rows = Vec::new();
    let mut hi_rows = Vec::new();
    for g in gens {
        if g.n != n {
            return Err(IdealError::Arity {
                expected: n,
                found: g.n,
            });
        }
        match g.degree {
            d if d == k => lo_rows.push(g.coeffs.clone()),
            d if d == k + 1 => hi_rows.push(g.coeffs.clone()),
            d if d == k + 2 => {}
            d => return Err(IdealError::DegreeOutOfWindow { degree: d, k }),
        }
    }
    let lo = Subspace::from_rows(dim_forms(n, k), lo_rows);
    if lo.is_zero() {
        return Err(IdealError::NoOrderGenerator { k });
    }
    let hi = mul_by_linear(&lo, n, k)?.sum(&Subspace::from_rows(dim_forms(n, k + 1), hi_rows))?;
    GradedIdeal::new(n, k, lo, hi)
}

/// The associated graded (initial-form) ideal of a possibly inhomogeneous
/// ideal whose order is `k` and which contains `m^{k+2}`.
///
/// Works in `R/m^{k+3}`: the truncated ideal is spanned by the truncations
/// of `m·f` over generators `f` and monomials `m`. Ordering coordinates by
/// ascending degree, the echelon rows with pivot in degree `d` have lowest
/// forms spanning `In(I)_d`. Containment of `m^{k+2}` is checked in degree
/// `k+2` (then `m^{k+2} ⊂ I` by Nakayama).
pub fn initial_two_step(n: usize, polys: &[Poly<Q>]) -> Result<GradedIdeal<Q>, IdealError> {
    let k = polys.iter().filter_map(Poly::order).min().ok_or(IdealError::Empty)?;
    for p in polys {
        if p.nvars() != n {
            return Err(IdealError::Arity {
                expected: n,
                found: p.nvars(),
            });
        }
    }
    let widths: Vec<usize> = (k..=k + 2).map(|d| dim_forms(n, d)).collect();
    let offsets = [0, widths[0], widths[0] + widths[1]];
    let total: usize = widths.iter().sum();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for p in polys {
        let Some(o) = p.order() else { continue };
        // Dense truncation of p: components in degrees k..k+2.
        let comps: Vec<Vec<Q>> = (k..=k + 2).map(|d| p.component(d)).collect();
        let mut frontier = vec![(o, comps)];
        // Multiply by monomials degree by degree: shift all components by x_j.
        while let Some((ord, c)) = frontier.pop() {
            let mut row = vec![Q::from_i64(0); total];
            for (i, comp) in c.iter().enumerate() {
                row[offsets[i]..offsets[i] + widths[i]].clone_from_slice(comp);
            }
            rows.push(row);
            if ord < k + 2 {
                for j in 0..n {
                    let mut next = vec![vec![Q::from_i64(0); widths[0]]];
                    for i in 0..2 {
                        next.push(mul_var(n, k + i, &c[i], j));
                    }
                    frontier.push((ord + 1, next));
                }
            }
        }
    }
    let ech = Subspace::from_rows(total, rows);
    let mut pieces: Vec<Vec<Vec<Q>>> = vec![Vec::new(); 3];
    for (row, &p) in ech.basis().iter().zip(ech.pivots()) {
        let block = (0..3).rev().find(|&b| p >= offsets[b]).expect("pivot in range");
        pieces[block].push(row[offsets[block]..offsets[block] + widths[block]].to_vec());
    }
    let top = Subspace::from_rows(widths[2], pieces[2].clone());
    // In(I)_{k+2} also receives R_1·In(I)_{k+1}; the echelon already
    // accounts for it since truncated multiples are included.
    if !top.is_full() {
        return Err(IdealError::NotTwoStep { degree: k + 2 });
    }
    let lo = Subspace::from_rows(widths[0], pieces[0].clone());
    let hi = Subspace::from_rows(widths[1], pieces[1].clone());
    GradedIdeal::new(n, k, lo, hi)
}

/// The low-degree Betti numbers of a 2-step ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiSlice {
    /// `β_{0,j}` for `j ∈ {k, k+1, k+2}`.
    pub beta0: BTreeMap<usize, usize>,
    pub beta1_k1: usize,
    pub beta1_k2: usize,
    pub beta2_k2: usize,
}

/// Minimal generators by degree: a basis of `I_k`, a complement of
/// `R_1·I_k` in `I_{k+1}`, and a complement of `R_1·I_{k+1}` in `R_{k+2}`.
pub fn minimal_generators<F: Field>(i: &GradedIdeal<F>) -> [Vec<Vec<F>>; 3] {
    let (n, k) = (i.n, i.k);
    let g0 = i.lo.basis().to_vec();
    let r1lo = mul_by_linear(&i.lo, n, k).expect("ambient");
    let g1 = i.hi.complement_of(&r1lo).expect("closed ideal");
    let r1hi = mul_by_linear(&i.hi, n, k + 1).expect("ambient");
    let g2 = Subspace::full(dim_forms(n, k + 2)).complement_of(&r1hi).expect("full");
    [g0, g1, g2]
}

/// Linear syzygies of degree `k+2` as a subspace of
/// `(R_2 ⊗ G_k) ⊕ (R_1 ⊗ G_{k+1})`, plus `R_1·Syz_{k+1}` inside it.
fn syzygy_dims<F: Field>(i: &GradedIdeal<F>, gens: &[Vec<Vec<F>>; 3]) -> (usize, usize) {
    let (n, k) = (i.n, i.k);
    let (g0, g1) = (&gens[0], &gens[1]);
    let r1 = dim_forms(n, 1);
    let r2 = dim_forms(n, 2);
    let rk2 = dim_forms(n, k + 2);
    // Products: (monomial of degree 2) × g0 and (variable) × g1, as columns.
    let cols0 = g0.len() * r2;
    let cols = cols0 + g1.len() * r1;
    let mut m = Matrix::zeros(rk2, cols);
    let monos2 = crate::combinat::monomials(n, 2);
    for (gi, g) in g0.iter().enumerate() {
        for (mi, mono) in monos2.iter().enumerate() {
            let mut v = g.clone();
            let mut deg = k;
            for (j, &e) in mono.exponents().iter().enumerate() {
                for _ in 0..e {
                    v = mul_var(n, deg, &v, j);
                    deg += 1;
                }
            }
            for (row, x) in v.into_iter().enumerate() {
                m.set(row, gi * r2 + mi, x);
            }
        }
    }
    for (gi, g) in g1.iter().enumerate() {
        for j in 0..n {
            for (row, x) in mul_var(n, k + 1, g, j).into_iter().enumerate() {
                m.set(row, cols0 + gi * r1 + j, x);
            }
        }
    }
    let syz2 = kernel(&m);
    // Syz_{k+1}: kernel of R_1 ⊗ G_k → R_{k+1}.
    let rk1 = dim_forms(n, k + 1);
    let mut m1 = Matrix::zeros(rk1, g0.len() * r1);
    for (gi, g) in g0.iter().enumerate() {
        for j in 0..n {
            for (row, x) in mul_var(n, k, g, j).into_iter().enumerate() {
                m1.set(row, gi * r1 + j, x);
            }
        }
    }
    let syz1 = kernel(&m1);
    // Multiply each linear syzygy by each variable; coefficients land in R_2 ⊗ G_k.
    let mut lifted = Vec::new();
    for s in syz1.basis() {
        for j in 0..n {
            let mut v = vec![F::zero(); cols];
            for gi in 0..g0.len() {
                let lin = &s[gi * r1..(gi + 1) * r1];
                let quad = mul_var(n, 1, lin, j);
                for (mi, x) in quad.into_iter().enumerate() {
                    v[gi * r2 + mi] = x;
                }
            }
            lifted.push(v);
        }
    }
    let r1syz = Subspace::from_rows(cols, lifted);
    (syz2.dim(), r1syz.dim())
}

/// `β_{0,·}`, `β_{1,k+1}`, `β_{1,k+2}` and `β_{2,k+2}` of a 2-step ideal.
pub fn betti_slice<F: Field>(i: &GradedIdeal<F>) -> BettiSlice {
    let (n, k) = (i.n, i.k);
    let gens = minimal_generators(i);
    let r1lo = mul_by_linear(&i.lo, n, k).expect("ambient");
    let beta1_k1 = n * i.lo.dim() - r1lo.dim();
    let (syz2, r1syz) = syzygy_dims(i, &gens);
    let beta1_k2 = syz2 - r1syz;
    let p = i.profile();
    let beta0: BTreeMap<usize, usize> = [(k, gens[0].len()), (k + 1, gens[1].len()), (k + 2, gens[2].len())].into();
    // β_{0,k+2} − β_{1,k+2} + β_{2,k+2} = t_h.
    let beta2 = p.t() - gens[2].len() as i64 + beta1_k2 as i64;
    debug_assert!(beta2 >= 0);
    BettiSlice {
        beta0,
        beta1_k1,
        beta1_k2,
        beta2_k2: beta2 as usize,
    }
}

/// `β_{i,j}(I)` via the Koszul complex: homology of
/// `Λ^{i+1}V ⊗ I_{j−i−1} → Λ^i V ⊗ I_{j−i} → Λ^{i−1}V ⊗ I_{j−i+1}`.
/// Independent of generator choices; used as an oracle.
pub fn koszul_betti<F: Field>(ideal: &GradedIdeal<F>, i: usize, j: usize) -> usize {
    if j < i {
        return 0;
    }
    let n = ideal.n;
    let d = j - i;
    let ker = koszul_map_rank(ideal, i, d);
    let src = binomial(n as u64, i as u64) as usize * ideal.piece_dim(d);
    let img = if d == 0 { 0 } else { koszul_map_rank(ideal, i + 1, d - 1) };
    src - ker - img
}

/// Rank of `∂: Λ^p V ⊗ I_d → Λ^{p−1} V ⊗ R_{d+1}`.
fn koszul_map_rank<F: Field>(ideal: &GradedIdeal<F>, p: usize, d: usize) -> usize {
    let n = ideal.n;
    if p == 0 || p > n {
        return 0;
    }
    let subsets = |size: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(v + 1, n, size, cur, out);
                cur.pop();
            }
        }
        rec(0, n, size, &mut cur, &mut out);
        out
    };
    let src = subsets(p);
    let tgt = subsets(p - 1);
    let piece = ideal.piece(d);
    let width = dim_forms(n, d + 1);
    let mut rows = Vec::new();
    for s in &src {
        for b in piece.basis() {
            let mut v = vec![F::zero(); tgt.len() * width];
            for (pos, &var) in s.iter().enumerate() {
                let mut smaller = s.clone();
                smaller.remove(pos);
                let ti = tgt.binary_search(&smaller).expect("subset present");
                let prod = mul_var(n, d, b, var);
                let sign_neg = pos % 2 == 1;
                for (c, x) in prod.into_iter().enumerate() {
                    let slot = &mut v[ti * width + c];
                    *slot = if sign_neg { slot.minus(&x) } else { slot.plus(&x) };
                }
            }
            rows.push(v);
        }
    }
    Matrix::from_rows(tgt.len() * width, rows).rank()
}

/// Sampler settings: integer coefficients in `[−coeff_range, coeff_range]`
/// and a bounded number of attempts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub coeff_range: i64,
    pub retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            coeff_range: 10,
            retries: 25,
        }
    }
}

/// The random stream for task `index` under a master seed.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_vec<F: Field>(rng: &mut ChaCha8Rng, len: usize, cfg: &SamplerConfig) -> Vec<F> {
    (0..len)
        .map(|_| F::from_i64(rng.gen_range(-cfg.coeff_range..=cfg.coeff_range)))
        .collect()
}

/// A random element of the span of `basis`.
fn random_combination<F: Field>(rng: &mut ChaCha8Rng, basis: &[Vec<F>], ambient: usize, cfg: &SamplerConfig) -> Vec<F> {
    let coeffs: Vec<F> = random_vec(rng, basis.len(), cfg);
    let mut out = vec![F::zero(); ambient];
    for (a, b) in coeffs.iter().zip(basis) {
        if a.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = o.plus(&a.times(x));
        }
    }
    out
}

fn exhausted(p: &TwoStepProfile, cfg: &SamplerConfig) -> IdealError {
    IdealError::SamplerExhausted {
        profile: p.to_string(),
        retries: cfg.retries,
    }
}

/// Where the degree-`k` piece of a sampled ideal must live, and where it
/// must land afterwards (for nestings: inside the previous level).
struct Ambient<'a, F> {
    /// Basis of the subspace of `R_k` to draw from (`None`: all of `R_k`).
    within: Option<&'a Subspace<F>>,
    level: usize,
}

impl<F: Field> Ambient<'_, F> {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, k: usize, cfg: &SamplerConfig) -> Vec<F> {
        match self.within {
            Some(s) => random_combination(rng, s.basis(), dim_forms(n, k), cfg),
            None => random_vec(rng, dim_forms(n, k), cfg),
        }
    }
}

/// Adds `s` random forms of degree `k+1` to `R_1·V` until the dimension is
/// `target`.
fn extend_hi<F: Field>(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    base: Subspace<F>,
    target: usize,
    cfg: &SamplerConfig,
) -> Option<Subspace<F>> {
    if base.dim() > target {
        return None;
    }
    let extra: Vec<Vec<F>> = (0..target - base.dim())
        .map(|_| random_vec(rng, dim_forms(n, k + 1), cfg))
        .collect();
    let hi = base.sum(&Subspace::from_rows(dim_forms(n, k + 1), extra)).ok()?;
    (hi.dim() == target).then_some(hi)
}

fn sample_no_syz_in<F: Field>(p: &TwoStepProfile, amb: &Ambient<F>, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    let (n, k) = (p.n, p.k);
    for _ in 0..cfg.retries {
        let rows: Vec<Vec<F>> = (0..p.hk).map(|_| amb.draw(rng, n, k, cfg)).collect();
        let lo = Subspace::from_rows(dim_forms(n, k), rows);
        if lo.dim() != p.hk {
            continue;
        }
        let r1 = mul_by_linear(&lo, n, k)?;
        if r1.dim() != n * p.hk {
            continue;
        }
        if let Some(hi) = extend_hi(rng, n, k, r1, p.hk1, cfg) {
            return GradedIdeal::new(n, k, lo, hi);
        }
    }
    Err(exhausted(p, cfg))
}

/// Kernel of `(v_1, …, v_n) ↦ Σ x_j v_j` on `U^{⊕n}` for `U ⊆ R_k`, as
/// tuples of degree-`k` forms.
fn linear_syzygy_space<F: Field>(n: usize, k: usize, within: Option<&Subspace<F>>) -> Vec<Vec<Vec<F>>> {
    let rk = dim_forms(n, k);
    let basis: Vec<Vec<F>> = match within {
        Some(s) => s.basis().to_vec(),
        None => (0..rk)
            .map(|c| {
                let mut v = vec![F::zero(); rk];
                v[c] = F::one();
                v
            })
            .collect(),
    };
    let b = basis.len();
    let mut m = Matrix::zeros(dim_forms(n, k + 1), n * b);
    for j in 0..n {
        for (bi, v) in basis.iter().enumerate() {
            for (row, x) in mul_var(n, k, v, j).into_iter().enumerate() {
                m.set(row, j * b + bi, x);
            }
        }
    }
    kernel(&m)
        .basis()
        .iter()
        .map(|coef| {
            (0..n)
                .map(|j| {
                    let mut v = vec![F::zero(); rk];
                    for (bi, a) in coef[j * b..(j + 1) * b].iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (o, x) in v.iter_mut().zip(&basis[bi]) {
                            *o = o.plus(&a.times(x));
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn sample_very_few_in<F: Field>(p: &TwoStepProfile, amb: &Ambient<F>, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    let (n, k) = (p.n, p.k);
    let m = (-p.s()) as usize;
    let syz = linear_syzygy_space(n, k, amb.within);
    if syz.len() < m {
        return Err(IdealError::InfeasibleIntersection {
            level: amb.level,
            available: syz.len(),
            needed: m,
        });
    }
    let rk = dim_forms(n, k);
    for _ in 0..cfg.retries {
        let mut rows = Vec::with_capacity(p.hk);
        for _ in 0..m {
            let coeffs: Vec<F> = random_vec(rng, syz.len(), cfg);
            for j in 0..n {
                let mut v = vec![F::zero(); rk];
                for (a, tuple) in coeffs.iter().zip(&syz) {
                    for (o, x) in v.iter_mut().zip(&tuple[j]) {
                        *o = o.plus(&a.times(x));
                    }
                }
                rows.push(v);
            }
        }
        for _ in 0..p.hk - n * m {
            rows.push(amb.draw(rng, n, k, cfg));
        }
        let lo = Subspace::from_rows(rk, rows);
        if lo.dim() != p.hk {
            continue;
        }
        let hi = mul_by_linear(&lo, n, k)?;
        if hi.dim() == p.hk1 {
            return GradedIdeal::new(n, k, lo, hi);
        }
    }
    Err(exhausted(p, cfg))
}

/// Generic construction with `−s_h` linear syzygies: draw a random
/// `(−s_h) × h_k` matrix `Φ` of linear forms and a random `p` in the kernel
/// of `Φ: R_k^{h_k} → R_{k+1}^{−s_h}`; the components of `p` span `I_k`.
/// Elimination budget (rows · columns · min(rows, columns)) of the
/// few-syzygies sampler.
const MAX_SYZYGY_WORK: usize = 4_000_000_000;

fn sample_few_in<F: Field>(p: &TwoStepProfile, amb: &Ambient<F>, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    let (n, k) = (p.n, p.k);
    let m = (-p.s()) as usize;
    let h = p.hk;
    let rk = dim_forms(n, k);
    let rk1 = dim_forms(n, k + 1);
    let basis: Vec<Vec<F>> = match amb.within {
        Some(s) => s.basis().to_vec(),
        None => Subspace::<F>::full(rk).basis().to_vec(),
    };
    let b = basis.len();
    if m >= h {
        // An m×h matrix of generic linear forms with m ≥ h has full column
        // rank over the fraction field, so it is injective in every degree.
        return Err(injective_syzygies(p));
    }
    let (rows, cols) = (m * rk1, h * b);
    if rows * cols * rows.min(cols) > MAX_SYZYGY_WORK {
        return Err(IdealError::Refused {
            profile: p.to_string(),
            reason: format!("the {rows}×{cols} syzygy system is above the sampler's size limit"),
        });
    }
    for _ in 0..cfg.retries {
        // Φ[i][l] is a linear form (n coefficients).
        let phi: Vec<Vec<Vec<F>>> = (0..m).map(|_| (0..h).map(|_| random_vec(rng, n, cfg)).collect()).collect();
        let mut mat = Matrix::zeros(rows, cols);
        for (i, row) in phi.iter().enumerate() {
            for (l, lin) in row.iter().enumerate() {
                for (bi, v) in basis.iter().enumerate() {
                    let mut img = vec![F::zero(); rk1];
                    for (j, a) in lin.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (o, x) in img.iter_mut().zip(mul_var(n, k, v, j)) {
                            *o = o.plus(&a.times(&x));
                        }
                    }
                    for (r, x) in img.into_iter().enumerate() {
                        mat.set(i * rk1 + r, l * b + bi, x);
                    }
                }
            }
        }
        let ker = kernel(&mat);
        if ker.is_zero() {
            // The kernel can only grow under specialisation, so a random Φ
            // with zero kernel shows the generic one is zero.
            return Err(injective_syzygies(p));
        }
        let coef = random_combination(rng, ker.basis(), h * b, cfg);
        let rows: Vec<Vec<F>> = (0..h)
            .map(|l| {
                let mut v = vec![F::zero(); rk];
                for (bi, a) in coef[l * b..(l + 1) * b].iter().enumerate() {
                    for (o, x) in v.iter_mut().zip(&basis[bi]) {
                        *o = o.plus(&a.times(x));
                    }
                }
                v
            })
            .collect();
        let lo = Subspace::from_rows(rk, rows);
        if lo.dim() != h {
            continue;
        }
        let r1 = mul_by_linear(&lo, n, k)?;
        if let Some(hi) = extend_hi(rng, n, k, r1, p.hk1, cfg) {
            return GradedIdeal::new(n, k, lo, hi);
        }
    }
    Err(exhausted(p, cfg))
}

fn injective_syzygies(p: &TwoStepProfile) -> IdealError {
    IdealError::Refused {
        profile: p.to_string(),
        reason: "the generic syzygy matrix is injective, so no ideal with generic syzygies exists".into(),
    }
}

fn sample_degenerate_in<F: Field>(p: &TwoStepProfile, amb: &Ambient<F>, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    let (n, k) = (p.n, p.k);
    let (rk, rk1) = (dim_forms(n, k), dim_forms(n, k + 1));
    for _ in 0..cfg.retries {
        let rows: Vec<Vec<F>> = (0..p.hk).map(|_| amb.draw(rng, n, k, cfg)).collect();
        let lo = Subspace::from_rows(rk, rows);
        if lo.dim() != p.hk {
            continue;
        }
        let hi = if p.hk1 == rk1 {
            Subspace::full(rk1)
        } else {
            match extend_hi(rng, n, k, mul_by_linear(&lo, n, k)?, p.hk1, cfg) {
                Some(hi) => hi,
                None => continue,
            }
        };
        return GradedIdeal::new(n, k, lo, hi);
    }
    Err(exhausted(p, cfg))
}

fn sample_in<F: Field>(p: &TwoStepProfile, amb: &Ambient<F>, rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    match classify(p) {
        SyzygyRegime::Degenerate1Step => sample_degenerate_in(p, amb, rng, cfg),
        SyzygyRegime::NoSyzygies => sample_no_syz_in(p, amb, rng, cfg),
        SyzygyRegime::VeryFew => sample_very_few_in(p, amb, rng, cfg),
        SyzygyRegime::Few | SyzygyRegime::Lots => sample_few_in(p, amb, rng, cfg),
    }
}

fn wrong_regime(p: &TwoStepProfile, want: &str) -> IdealError {
    IdealError::Refused {
        profile: p.to_string(),
        reason: format!("regime {:?} is not {want}", classify(p)),
    }
}

fn top<F: Field>() -> Ambient<'static, F> {
    Ambient { within: None, level: 0 }
}

/// Generic ideal without linear syzygies: `h_k` random forms `V` with
/// `dim R_1·V = n·h_k`, plus `s_h` random forms of degree `k+1`.
pub fn sample_no_syz<F: Field>(p: &TwoStepProfile, seed: u64, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    let regime = classify(p);
    if !(regime == SyzygyRegime::NoSyzygies || (regime == SyzygyRegime::Degenerate1Step && p.s() >= 0)) {
        return Err(wrong_regime(p, "NoSyzygies"));
    }
    let mut rng = task_rng(seed, 0);
    if regime == SyzygyRegime::Degenerate1Step {
        return sample_degenerate_in(p, &top(), &mut rng, cfg);
    }
    sample_no_syz_in(p, &top(), &mut rng, cfg)
}

/// Generic ideal with very few linear syzygies: `−s_h` random elements of
/// the kernel of `[x_1 … x_n]: R_k^{⊕n} → R_{k+1}` plus
/// `h_k − n(−s_h)` random forms.
pub fn sample_very_few<F: Field>(p: &TwoStepProfile, seed: u64, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    if classify(p) != SyzygyRegime::VeryFew {
        return Err(wrong_regime(p, "VeryFew"));
    }
    sample_very_few_in(p, &top(), &mut task_rng(seed, 0), cfg)
}

/// Generic ideal with few linear syzygies (see the module notes); refuses
/// when the generic syzygy matrix admits no kernel.
pub fn sample_few<F: Field>(p: &TwoStepProfile, seed: u64, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    if !matches!(classify(p), SyzygyRegime::Few | SyzygyRegime::Lots) {
        return Err(wrong_regime(p, "Few"));
    }
    sample_few_in(p, &top(), &mut task_rng(seed, 0), cfg)
}

/// Dispatches on the regime of `p`.
pub fn sample_two_step<F: Field>(p: &TwoStepProfile, seed: u64, cfg: &SamplerConfig) -> Result<GradedIdeal<F>, IdealError> {
    sample_in(p, &top(), &mut task_rng(seed, 0), cfg)
}

/// A chain `I^{(0)} ⊇ I^{(1)} ⊇ …` of graded ideals.
#[derive(Clone, Debug, PartialEq)]
pub struct Nesting<F> {
    ideals: Vec<GradedIdeal<F>>,
}

impl<F: Field> Nesting<F> {
    pub fn ideals(&self) -> &[GradedIdeal<F>] {
        &self.ideals
    }

    pub fn colengths(&self) -> Vec<usize> {
        self.ideals.iter().map(GradedIdeal::colength).collect()
    }

    pub fn hilbert_functions(&self) -> Vec<HilbertFunction> {
        self.ideals.iter().map(GradedIdeal::hilbert_function).collect()
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> Option<G> + Copy) -> Result<Nesting<G>, IdealError> {
        make_nesting(self.ideals.iter().map(|i| i.map_field(f)).collect::<Result<Vec<_>, _>>()?)
    }
}

impl Nesting<Q> {
    pub fn to_fp(&self) -> Result<Nesting<crate::exactla::Fp>, IdealError> {
        self.map_field(crate::exactla::Fp::from_rational)
    }
}

impl Serialize for Nesting<Q> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.ideals.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nesting<Q> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ideals = Vec::<GradedIdeal<Q>>::deserialize(d)?;
        make_nesting(ideals).map_err(serde::de::Error::custom)
    }
}

/// Validates degreewise containment `I^{(i+1)} ⊆ I^{(i)}`.
pub fn make_nesting<F: Field>(ideals: Vec<GradedIdeal<F>>) -> Result<Nesting<F>, IdealError> {
    if ideals.is_empty() {
        return Err(IdealError::Empty);
    }
    for level in 1..ideals.len() {
        if let Some(degree) = ideals[level - 1].first_non_containment(&ideals[level]) {
            return Err(IdealError::ContainmentViolation { level, degree });
        }
    }
    Ok(Nesting { ideals })
}

/// Samples a nesting level by level: each level's degree-`k+i` piece is
/// drawn inside the previous level's piece of that degree.
pub fn sample_nested<F: Field>(np: &NestedProfile, seed: u64, cfg: &SamplerConfig) -> Result<Nesting<F>, IdealError> {
    let mut rng = task_rng(seed, 0);
    let mut ideals: Vec<GradedIdeal<F>> = Vec::with_capacity(np.r());
    for (level, p) in np.levels.iter().enumerate() {
        if matches!(classify(p), SyzygyRegime::Few | SyzygyRegime::Lots) {
            return Err(wrong_regime(p, "NoSyzygies, VeryFew or Degenerate1Step"));
        }
        let ideal = match ideals.last() {
            None => sample_in(p, &top(), &mut rng, cfg)?,
            Some(prev) => {
                let within = prev.hi().clone();
                let amb = Ambient {
                    within: Some(&within),
                    level,
                };
                sample_in(p, &amb, &mut rng, cfg)?
            }
        };
        ideals.push(ideal);
    }
    make_nesting(ideals)
}

/// Batch of seeded samples of one profile, task `i` using stream `i`.
pub fn sample_batch<F: Field>(
    p: &TwoStepProfile,
    seed: u64,
    count: usize,
    cfg: &SamplerConfig,
    exec: crate::exec::Exec,
) -> Vec<Result<GradedIdeal<F>, IdealError>> {
    exec.map((0..count as u64).collect(), |i| {
        let mut rng = task_rng(seed, i);
        sample_in(p, &top(), &mut rng, cfg)
    })
}
