//! Graded tangent spaces `Hom_R(I, R/I)_t` of 2-step ideals and nestings.
//!
//! A homomorphism of degree `t` is parametrized by its values on a minimal
//! generating set (degrees `k`, `k+1`, `k+2`); it is well defined iff every
//! relation among the generators is respected. Because `m^{k+2} ⊂ I`, all
//! relations are generated in degrees `≤ k+3`, and a relation of degree `e`
//! only constrains `(R/I)_{e+t}`, which vanishes for `e+t ≥ k+2`.
//!
//! The module also computes the translation derivations `∂/∂x_j` (which
//! span the "trivial" part of `T^{=−1}`), TNT verdicts, and the joint system
//! for nestings. [`oracle`] holds an independent, much larger formulation
//! used for cross-checks on small instances.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::combinat::{dim_forms, monomials, Monomial};
use crate::exactla::{kernel, solve, Field, Matrix};
use crate::exec::Exec;
use crate::ideals::{minimal_generators, GradedIdeal, Nesting};

/// Monomials of every degree up to a bound, with rank lookup by product.
struct MonomialCache {
    by_degree: Vec<Vec<Monomial>>,
}

impl MonomialCache {
    fn new(n: usize, top: usize) -> Self {
        MonomialCache {
            by_degree: (0..=top).map(|d| monomials(n, d)).collect(),
        }
    }

    fn get(&self, d: usize) -> &[Monomial] {
        &self.by_degree[d]
    }

    fn product_rank(&self, d1: usize, a: usize, d2: usize, b: usize) -> usize {
        self.by_degree[d1][a].mul(&self.by_degree[d2][b]).rank()
    }
}

/// Normal forms modulo one ideal: for each degree `d < k+2`, the standard
/// monomials (non-pivots of `I_d`) and the coordinates of every monomial of
/// `R_d` in `(R/I)_d`.
struct Quotient<F> {
    /// `std[d]`: ranks of standard monomials of degree `d`.
    std: Vec<Vec<usize>>,
    /// `nf[d][m]`: coordinates of monomial `m` in the standard basis.
    nf: Vec<Vec<Vec<F>>>,
}

impl<F: Field> Quotient<F> {
    fn new(ideal: &GradedIdeal<F>) -> Self {
        let n = ideal.n();
        let top = ideal.k() + 1;
        let mut std = Vec::with_capacity(top + 1);
        let mut nf = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let piece = ideal.piece(d);
            let free = piece.non_pivots();
            let mut pos = vec![usize::MAX; dim_forms(n, d)];
            for (i, &c) in free.iter().enumerate() {
                pos[c] = i;
            }
            let mut table = vec![vec![F::zero(); free.len()]; dim_forms(n, d)];
            for &c in &free {
                table[c][pos[c]] = F::one();
            }
            // A pivot monomial equals minus the rest of its echelon row.
            for (row, &p) in piece.basis().iter().zip(piece.pivots()) {
                for &c in &free {
                    if !row[c].is_zero() {
                        table[p][pos[c]] = row[c].negate();
                    }
                }
            }
            std.push(free);
            nf.push(table);
        }
        Quotient { std, nf }
    }

    /// `dim (R/I)_d`, with negative or high degrees giving zero.
    fn dim(&self, d: i64) -> usize {
        if d < 0 || d as usize >= self.std.len() {
            0
        } else {
            self.std[d as usize].len()
        }
    }

    /// Coordinates of a dense degree-`d` vector in `(R/I)_d`.
    fn reduce(&self, d: usize, v: &[F]) -> Vec<F> {
        let width = self.dim(d as i64);
        let mut out = vec![F::zero(); width];
        if width == 0 {
            return out;
        }
        for (m, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.nf[d][m]) {
                if !x.is_zero() {
                    *o = o.plus(&a.times(x));
                }
            }
        }
        out
    }
}

/// One term `coeff · μ · g` of an element of the free module on the
/// generators: generator index, rank of `μ` in its degree, coefficient.
type FreeTerm<F> = (usize, usize, F);

/// A minimal presentation truncated to the degrees that matter.
struct Presentation<F> {
    n: usize,
    k: usize,
    /// Minimal generators: (degree, dense coefficients).
    gens: Vec<(usize, Vec<F>)>,
    /// Relations of degree `k+1`, `k+2`, `k+3`, computed on first use.
    relations: [OnceLock<Vec<Vec<FreeTerm<F>>>>; 3],
    quotient: Quotient<F>,
}

impl<F: Field> Presentation<F> {
    fn new(ideal: &GradedIdeal<F>) -> Self {
        let (n, k) = (ideal.n(), ideal.k());
        let gens: Vec<(usize, Vec<F>)> = minimal_generators(ideal)
            .into_iter()
            .enumerate()
            .flat_map(|(i, g)| g.into_iter().map(move |v| (k + i, v)))
            .collect();
        Presentation {
            n,
            k,
            gens,
            relations: Default::default(),
            quotient: Quotient::new(ideal),
        }
    }

    /// Number of unknowns for generator `g` at degree `t`.
    fn block(&self, g: usize, t: i64) -> usize {
        self.quotient.dim(self.gens[g].0 as i64 + t)
    }

    fn offsets(&self, t: i64) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(self.gens.len());
        let mut total = 0;
        for g in 0..self.gens.len() {
            offs.push(total);
            total += self.block(g, t);
        }
        (offs, total)
    }

    /// Rows expressing `φ(Σ coeff·μ·g)` in `(R/I)_{e+t}` as linear
    /// functionals of the unknowns (columns shifted by `base`).
    fn apply_free(&self, cache: &MonomialCache, t: i64, e: usize, terms: &[FreeTerm<F>], offs: &[usize], base: usize, width: usize) -> Vec<Vec<F>> {
        let target = e as i64 + t;
        let rows = self.quotient.dim(target);
        let mut out = vec![vec![F::zero(); width]; rows];
        if rows == 0 {
            return out;
        }
        let target = target as usize;
        for (g, mu, coeff) in terms {
            let dg = self.gens[*g].0;
            let src = dg as i64 + t;
            if self.quotient.dim(src) == 0 {
                continue;
            }
            let src = src as usize;
            for (beta, &b) in self.quotient.std[src].iter().enumerate() {
                let m = cache.product_rank(e - dg, *mu, src, b);
                let col = base + offs[*g] + beta;
                for (row, x) in out.iter_mut().zip(&self.quotient.nf[target][m]) {
                    if !x.is_zero() {
                        row[col] = row[col].plus(&coeff.times(x));
                    }
                }
            }
        }
        out
    }

    /// A basis of the relations of degree `e ∈ [k+1, k+3]`.
    fn relations_in(&self, cache: &MonomialCache, e: usize) -> &[Vec<FreeTerm<F>>] {
        self.relations[e - self.k - 1].get_or_init(|| {
            let cols = free_columns(&self.gens, cache, e);
            if cols.is_empty() {
                return Vec::new();
            }
            let m = free_matrix(&self.gens, cache, self.n, e, &cols);
            kernel(&m)
                .basis()
                .iter()
                .map(|rel| {
                    cols.iter()
                        .zip(rel)
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(&(g, mu), a)| (g, mu, a.clone()))
                        .collect()
                })
                .collect()
        })
    }

    /// Relation constraints at degree `t`; relations whose target piece
    /// `(R/I)_{e+t}` vanishes are never computed.
    fn relation_rows(&self, cache: &MonomialCache, t: i64, offs: &[usize], base: usize, width: usize) -> Vec<Vec<F>> {
        let mut rows = Vec::new();
        for e in self.k + 1..=self.k + 3 {
            if self.quotient.dim(e as i64 + t) == 0 {
                continue;
            }
            for terms in self.relations_in(cache, e) {
                rows.extend(
                    self.apply_free(cache, t, e, terms, offs, base, width)
                        .into_iter()
                        .filter(|r| r.iter().any(|x| !x.is_zero())),
                );
            }
        }
        rows
    }

    /// Expresses `v ∈ I_d` over the generators.
    fn express(&self, cache: &MonomialCache, d: usize, v: &[F]) -> Vec<FreeTerm<F>> {
        let cols = free_columns(&self.gens, cache, d);
        let m = free_matrix(&self.gens, cache, self.n, d, &cols);
        let sol = solve(&m, v).expect("element lies in the ideal");
        cols.into_iter()
            .zip(sol)
            .filter(|(_, a)| !a.is_zero())
            .map(|((g, mu), a)| (g, mu, a))
            .collect()
    }

    /// The derivation `f ↦ ∂f/∂x_j mod I` in degree −1 coordinates.
    fn derivation(&self, cache: &MonomialCache, j: usize, offs: &[usize], width: usize) -> Vec<F> {
        let mut out = vec![F::zero(); width];
        for (g, (d, v)) in self.gens.iter().enumerate() {
            if *d == 0 || self.block(g, -1) == 0 {
                continue;
            }
            let mut deriv = vec![F::zero(); dim_forms(self.n, d - 1)];
            for (m, a) in v.iter().enumerate() {
                let e = cache.get(*d)[m].exponents();
                if a.is_zero() || e[j] == 0 {
                    continue;
                }
                let mut lower = e.to_vec();
                lower[j] -= 1;
                let r = Monomial::new(lower).rank();
                deriv[r] = deriv[r].plus(&a.times(&F::from_i64(e[j] as i64)));
            }
            let coords = self.quotient.reduce(d - 1, &deriv);
            out[offs[g]..offs[g] + coords.len()].clone_from_slice(&coords);
        }
        out
    }
}

/// Columns `(generator, μ)` of the free module in degree `e`.
fn free_columns<F>(gens: &[(usize, Vec<F>)], cache: &MonomialCache, e: usize) -> Vec<(usize, usize)> {
    gens.iter()
        .enumerate()
        .filter(|(_, (d, _))| *d <= e)
        .flat_map(|(g, (d, _))| (0..cache.get(e - d).len()).map(move |mu| (g, mu)))
        .collect()
}

/// The evaluation map of the free module onto `R_e`.
fn free_matrix<F: Field>(gens: &[(usize, Vec<F>)], cache: &MonomialCache, n: usize, e: usize, cols: &[(usize, usize)]) -> Matrix<F> {
    let mut m = Matrix::zeros(dim_forms(n, e), cols.len());
    for (c, &(g, mu)) in cols.iter().enumerate() {
        let (d, v) = &gens[g];
        for (idx, a) in v.iter().enumerate() {
            if !a.is_zero() {
                m.set(cache.product_rank(e - d, mu, *d, idx), c, a.clone());
            }
        }
    }
    m
}

/// A graded piece of the tangent space.
#[derive(Clone, Debug, PartialEq)]
pub struct HomSpace<F> {
    pub dim: usize,
    /// Kernel basis in generator-image coordinates.
    pub basis: Vec<Vec<F>>,
}

/// Precomputed presentation of a single ideal.
pub struct TangentSystem<F> {
    cache: MonomialCache,
    pres: Presentation<F>,
}

impl<F: Field> TangentSystem<F> {
    pub fn new(ideal: &GradedIdeal<F>) -> Self {
        let cache = MonomialCache::new(ideal.n(), ideal.k() + 3);
        let pres = Presentation::new(ideal);
        TangentSystem { cache, pres }
    }

    fn matrix(&self, t: i64) -> (Matrix<F>, Vec<usize>, usize) {
        let (offs, width) = self.pres.offsets(t);
        let rows = self.pres.relation_rows(&self.cache, t, &offs, 0, width);
        (Matrix::from_rows(width, rows), offs, width)
    }

    /// `Hom_R(I, R/I)_t` with a kernel basis.
    pub fn hom(&self, t: i64) -> HomSpace<F> {
        let (m, _, width) = self.matrix(t);
        if width == 0 {
            return HomSpace { dim: 0, basis: Vec::new() };
        }
        let ker = kernel(&m);
        HomSpace {
            dim: ker.dim(),
            basis: ker.basis().to_vec(),
        }
    }

    /// `dim Hom_R(I, R/I)_t`.
    pub fn dim(&self, t: i64) -> usize {
        let (m, _, width) = self.matrix(t);
        width - m.rank()
    }

    /// The `n` translation derivations in degree −1 coordinates.
    pub fn derivations(&self) -> Vec<Vec<F>> {
        let (offs, width) = self.pres.offsets(-1);
        (0..self.pres.n)
            .map(|j| self.pres.derivation(&self.cache, j, &offs, width))
            .collect()
    }

    /// Whether a degree −1 vector satisfies all relation constraints.
    pub fn is_homomorphism(&self, t: i64, v: &[F]) -> bool {
        let (m, _, _) = self.matrix(t);
        m.apply(v).iter().all(Field::is_zero)
    }
}

/// `Hom_R(I, R/I)_t` with a basis in generator-image coordinates.
pub fn hom_graded<F: Field>(ideal: &GradedIdeal<F>, t: i64) -> HomSpace<F> {
    TangentSystem::new(ideal).hom(t)
}

/// The `n` derivation classes `f ↦ ∂f/∂x_j mod I` as degree −1 vectors.
pub fn derivation_classes<F: Field>(ideal: &GradedIdeal<F>) -> Vec<Vec<F>> {
    TangentSystem::new(ideal).derivations()
}

/// Dimensions of the graded tangent pieces and the TNT verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReport {
    pub dims: BTreeMap<i64, usize>,
    pub t_neg_total: usize,
    pub t0: usize,
    pub t1: usize,
    pub derivation_rank: usize,
    pub tnt: bool,
}

impl TangentReport {
    fn assemble(dims: BTreeMap<i64, usize>, derivation_rank: usize) -> Self {
        let t_neg_total = dims.range(..0).map(|(_, v)| v).sum();
        let t0 = dims.get(&0).copied().unwrap_or(0);
        let t1 = dims.get(&1).copied().unwrap_or(0);
        let tnt = dims.range(..-1).all(|(_, &v)| v == 0) && dims.get(&-1).copied().unwrap_or(0) == derivation_rank;
        TangentReport {
            dims,
            t_neg_total,
            t0,
            t1,
            derivation_rank,
            tnt,
        }
    }

    /// `dim T^{=t}` (zero outside the recorded range).
    pub fn dim(&self, t: i64) -> usize {
        self.dims.get(&t).copied().unwrap_or(0)
    }
}

/// Full report over `t ∈ [−(k+2), 1]`, asserting vanishing at `t = 2` and
/// `t = −(k+3)`.
pub fn tangent_report<F: Field>(ideal: &GradedIdeal<F>, exec: Exec) -> TangentReport {
    let sys = TangentSystem::new(ideal);
    let lo = -(ideal.k() as i64 + 2);
    for edge in [2, lo - 1] {
        assert_eq!(sys.dim(edge), 0, "tangent space must vanish in degree {edge}");
    }
    let ts: Vec<i64> = (lo..=1).collect();
    let values = exec.map(ts.clone(), |t| sys.dim(t));
    let dims: BTreeMap<i64, usize> = ts.into_iter().zip(values).collect();
    let derivation_rank = Matrix::from_rows(sys.pres.offsets(-1).1, sys.derivations()).rank();
    TangentReport::assemble(dims, derivation_rank)
}

/// Joint tangent system of a nesting.
pub struct NestedTangentSystem<F> {
    cache: MonomialCache,
    levels: Vec<Presentation<F>>,
    /// `expressions[i][g]`: generator `g` of level `i+1` written over the
    /// generators of level `i`.
    expressions: Vec<Vec<Vec<FreeTerm<F>>>>,
}

impl<F: Field> NestedTangentSystem<F> {
    pub fn new(nesting: &Nesting<F>) -> Self {
        let n = nesting.ideals()[0].n();
        let top = nesting.ideals().iter().map(GradedIdeal::k).max().expect("nonempty") + 3;
        let cache = MonomialCache::new(n, top);
        let levels: Vec<Presentation<F>> = nesting.ideals().iter().map(|i| Presentation::new(i)).collect();
        let expressions = levels
            .windows(2)
            .map(|w| w[1].gens.iter().map(|(d, v)| w[0].express(&cache, *d, v)).collect())
            .collect();
        NestedTangentSystem {
            cache,
            levels,
            expressions,
        }
    }

    fn layout(&self, t: i64) -> (Vec<Vec<usize>>, Vec<usize>, usize) {
        let mut all_offs = Vec::new();
        let mut bases = Vec::new();
        let mut width = 0;
        for p in &self.levels {
            let (offs, w) = p.offsets(t);
            all_offs.push(offs);
            bases.push(width);
            width += w;
        }
        (all_offs, bases, width)
    }

    /// Compatibility rows `π(φ^{(i+1)}(g)) − φ^{(i)}(g)` for generators `g`
    /// of each inner ideal.
    fn cross_rows(&self, t: i64, offs: &[Vec<usize>], bases: &[usize], width: usize) -> Vec<Vec<F>> {
        let mut rows = Vec::new();
        for i in 0..self.levels.len().saturating_sub(1) {
            let (outer, inner) = (&self.levels[i], &self.levels[i + 1]);
            for (g, (d, _)) in inner.gens.iter().enumerate() {
                let target = *d as i64 + t;
                if outer.quotient.dim(target) == 0 {
                    continue;
                }
                let target = target as usize;
                let terms = &self.expressions[i][g];
                let mut block = outer.apply_free(&self.cache, t, *d, terms, &offs[i], bases[i], width);
                for row in &mut block {
                    for x in row.iter_mut() {
                        *x = x.negate();
                    }
                }
                if inner.quotient.dim(target as i64) > 0 {
                    for (beta, &b) in inner.quotient.std[target].iter().enumerate() {
                        let col = bases[i + 1] + offs[i + 1][g] + beta;
                        for (row, x) in block.iter_mut().zip(&outer.quotient.nf[target][b]) {
                            if !x.is_zero() {
                                row[col] = row[col].plus(x);
                            }
                        }
                    }
                }
                rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
            }
        }
        rows
    }

    /// Solves each level separately, then imposes the compatibility rows on
    /// the direct sum of the per-level solution spaces.
    pub fn dim(&self, t: i64) -> usize {
        let (offs, bases, width) = self.layout(t);
        let kernels: Vec<Vec<Vec<F>>> = self
            .levels
            .iter()
            .zip(&offs)
            .map(|(p, o)| {
                let w = p.offsets(t).1;
                if w == 0 {
                    return Vec::new();
                }
                let m = Matrix::from_rows(w, p.relation_rows(&self.cache, t, o, 0, w));
                if m.rank() == w {
                    return Vec::new();
                }
                kernel(&m).basis().to_vec()
            })
            .collect();
        let total: usize = kernels.iter().map(Vec::len).sum();
        if total == 0 || self.levels.len() == 1 {
            return total;
        }
        // Row j of `lift` is the image of global unknown j in kernel
        // coordinates, so a sparse row projects with one pass.
        let mut lift: Vec<Vec<(usize, F)>> = vec![Vec::new(); width];
        let mut col0 = 0;
        for (ker, &base) in kernels.iter().zip(&bases) {
            for (c, kv) in ker.iter().enumerate() {
                for (j, x) in kv.iter().enumerate() {
                    if !x.is_zero() {
                        lift[base + j].push((col0 + c, x.clone()));
                    }
                }
            }
            col0 += ker.len();
        }
        let projected: Vec<Vec<F>> = self
            .cross_rows(t, &offs, &bases, width)
            .iter()
            .map(|row| {
                let mut out = vec![F::zero(); total];
                for (j, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (c, x) in &lift[j] {
                        out[*c] = out[*c].plus(&a.times(x));
                    }
                }
                out
            })
            .collect();
        total - Matrix::from_rows(total, projected).rank()
    }

    /// `dim` from the rank of the joint system: every level's relation
    /// rows stacked with the compatibility rows.
    pub fn dim_joint(&self, t: i64) -> usize {
        let (offs, bases, width) = self.layout(t);
        if width == 0 {
            return 0;
        }
        let mut rows = Vec::new();
        for ((p, o), &base) in self.levels.iter().zip(&offs).zip(&bases) {
            rows.extend(p.relation_rows(&self.cache, t, o, base, width));
        }
        rows.extend(self.cross_rows(t, &offs, &bases, width));
        width - Matrix::from_rows(width, rows).rank()
    }

    /// Tuples of per-level derivations, in the joint degree −1 coordinates.
    pub fn derivations(&self) -> Vec<Vec<F>> {
        let (offs, bases, width) = self.layout(-1);
        (0..self.levels[0].n)
            .map(|j| {
                let mut v = vec![F::zero(); width];
                for (i, p) in self.levels.iter().enumerate() {
                    let (_, w) = p.offsets(-1);
                    let part = p.derivation(&self.cache, j, &offs[i], w);
                    v[bases[i]..bases[i] + w].clone_from_slice(&part);
                }
                v
            })
            .collect()
    }

    fn lowest_degree(&self) -> i64 {
        -(self.levels.iter().map(|p| p.k).max().expect("nonempty") as i64 + 2)
    }
}

/// `dim` of the degree-`t` tangent space to a nesting.
pub fn nested_hom_graded<F: Field>(nesting: &Nesting<F>, t: i64) -> usize {
    NestedTangentSystem::new(nesting).dim(t)
}

/// Report for a nesting over `t ∈ [−(k_max+2), 1]`.
pub fn nested_tangent_report<F: Field>(nesting: &Nesting<F>, exec: Exec) -> TangentReport {
    let sys = NestedTangentSystem::new(nesting);
    let lo = sys.lowest_degree();
    for edge in [2, lo - 1] {
        assert_eq!(sys.dim(edge), 0, "tangent space must vanish in degree {edge}");
    }
    let ts: Vec<i64> = (lo..=1).collect();
    let values = exec.map(ts.clone(), |t| sys.dim(t));
    let dims: BTreeMap<i64, usize> = ts.into_iter().zip(values).collect();
    let derivation_rank = Matrix::from_rows(sys.layout(-1).2, sys.derivations()).rank();
    TangentReport::assemble(dims, derivation_rank)
}

/// Fiber dimension of the initial-ideal morphism: `dim T^{=1}`.
pub fn fiber_dim_initial<F: Field>(ideal: &GradedIdeal<F>) -> usize {
    TangentSystem::new(ideal).dim(1)
}

/// Sum of the per-level fiber dimensions of a nesting.
pub fn nested_fiber_dim_initial<F: Field>(nesting: &Nesting<F>) -> usize {
    nesting.ideals().iter().map(fiber_dim_initial).sum()
}

/// Independent formulation: unknown linear maps `φ_d : I_d → (R/I)_{d+t}`
/// on whole bases of every relevant `I_d` (with `I_d = R_d` for `d ≥ k+2`),
/// subject to `φ_{d+1}(x_j f) = x_j φ_d(f)`. Quadratically larger than the
/// presentation-based system; meant for small instances.
pub mod oracle {
    use crate::combinat::dim_forms;
    use crate::exactla::{mul_var, Field, Matrix, Subspace};
    use crate::ideals::{GradedIdeal, Nesting};

    /// Coordinates of `v ∈ R_d` in `(R/I)_d` (entries on non-pivots after
    /// reduction by `I_d`).
    fn standard_coords<F: Field>(piece: &Subspace<F>, v: &[F]) -> Vec<F> {
        let r = piece.reduce(v);
        piece.non_pivots().into_iter().map(|c| r[c].clone()).collect()
    }

    fn qdim<F: Field>(ideal: &GradedIdeal<F>, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            ideal.quotient_dim(d as usize)
        }
    }

    /// Unknown layout of one ideal: `φ_d(f_b)` for the canonical basis
    /// `f_b` of `I_d`, in standard-monomial coordinates of `(R/I)_{d+t}`.
    struct Layout {
        first: i64,
        offs: Vec<usize>,
        width: usize,
    }

    impl Layout {
        fn new<F: Field>(ideal: &GradedIdeal<F>, t: i64, last: i64) -> Self {
            let first = ideal.k() as i64;
            let mut offs = Vec::new();
            let mut width = 0;
            for d in first..=last {
                offs.push(width);
                width += ideal.piece_dim(d as usize) * qdim(ideal, d + t);
            }
            Layout { first, offs, width }
        }

        /// Column of `φ_d(f_b)`'s `s`-th coordinate.
        fn col<F: Field>(&self, ideal: &GradedIdeal<F>, t: i64, d: i64, b: usize, s: usize) -> usize {
            self.offs[(d - self.first) as usize] + b * qdim(ideal, d + t) + s
        }
    }

    /// Rows for `φ_{d+1}(x_j f) = x_j φ_d(f)` on one ideal.
    fn compat_rows<F: Field>(ideal: &GradedIdeal<F>, t: i64, last: i64, lay: &Layout, base: usize, width: usize) -> Vec<Vec<F>> {
        let n = ideal.n();
        let mut rows = Vec::new();
        for d in lay.first..=last {
            let q1 = qdim(ideal, d + 1 + t);
            if q1 == 0 {
                continue;
            }
            let q0 = qdim(ideal, d + t);
            let tgt_piece = ideal.piece((d + 1 + t) as usize);
            let src_std = if q0 == 0 { Vec::new() } else { ideal.piece((d + t) as usize).non_pivots() };
            let here = ideal.piece(d as usize);
            let next = ideal.piece(d as usize + 1);
            for j in 0..n {
                let shifted: Vec<Vec<F>> = src_std
                    .iter()
                    .map(|&c| {
                        let mut unit = vec![F::zero(); dim_forms(n, (d + t) as usize)];
                        unit[c] = F::one();
                        standard_coords(&tgt_piece, &mul_var(n, (d + t) as usize, &unit, j))
                    })
                    .collect();
                for (b, f) in here.basis().iter().enumerate() {
                    let mut block = vec![vec![F::zero(); width]; q1];
                    let coords = next.coordinates(&mul_var(n, d as usize, f, j)).expect("ideal closed under R_1");
                    for (bb, a) in coords.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (r, row) in block.iter_mut().enumerate() {
                            let col = base + lay.col(ideal, t, d + 1, bb, r);
                            row[col] = row[col].plus(a);
                        }
                    }
                    for (s, img) in shifted.iter().enumerate() {
                        let col = base + lay.col(ideal, t, d, b, s);
                        for (row, x) in block.iter_mut().zip(img) {
                            if !x.is_zero() {
                                row[col] = row[col].minus(x);
                            }
                        }
                    }
                    rows.extend(block);
                }
            }
        }
        rows
    }

    /// `dim Hom_R(I, R/I)_t` from the full system.
    pub fn hom_dim<F: Field>(ideal: &GradedIdeal<F>, t: i64) -> usize {
        let last = ideal.k() as i64 + 1 - t;
        let lay = Layout::new(ideal, t, last);
        let rows = compat_rows(ideal, t, last, &lay, 0, lay.width);
        lay.width - Matrix::from_rows(lay.width, rows).rank()
    }

    /// Nested version: every level carries its full system, and
    /// `π(φ^{(i+1)}_d(f)) = φ^{(i)}_d(f)` for every basis vector `f` of
    /// `I^{(i+1)}_d`.
    pub fn nested_hom_dim<F: Field>(nesting: &Nesting<F>, t: i64) -> usize {
        let ideals = nesting.ideals();
        let last = ideals.iter().map(|i| i.k() as i64).max().expect("nonempty") + 1 - t;
        let lays: Vec<Layout> = ideals.iter().map(|i| Layout::new(i, t, last)).collect();
        let mut bases = Vec::new();
        let mut width = 0;
        for l in &lays {
            bases.push(width);
            width += l.width;
        }
        let mut rows = Vec::new();
        for (i, ideal) in ideals.iter().enumerate() {
            rows.extend(compat_rows(ideal, t, last, &lays[i], bases[i], width));
        }
        for i in 0..ideals.len().saturating_sub(1) {
            let (outer, inner) = (&ideals[i], &ideals[i + 1]);
            for d in inner.k() as i64..=last {
                let q = qdim(outer, d + t);
                if q == 0 {
                    continue;
                }
                let tgt = (d + t) as usize;
                let outer_tgt = outer.piece(tgt);
                let inner_std = inner.piece(tgt).non_pivots();
                let projected: Vec<Vec<F>> = inner_std
                    .iter()
                    .map(|&c| {
                        let mut unit = vec![F::zero(); dim_forms(outer.n(), tgt)];
                        unit[c] = F::one();
                        standard_coords(&outer_tgt, &unit)
                    })
                    .collect();
                let outer_piece = outer.piece(d as usize);
                for (b, f) in inner.piece(d as usize).basis().iter().enumerate() {
                    let mut block = vec![vec![F::zero(); width]; q];
                    for (s, img) in projected.iter().enumerate() {
                        let col = bases[i + 1] + lays[i + 1].col(inner, t, d, b, s);
                        for (row, x) in block.iter_mut().zip(img) {
                            row[col] = row[col].plus(x);
                        }
                    }
                    let coords = outer_piece.coordinates(f).expect("nesting is contained");
                    for (bb, a) in coords.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (r, row) in block.iter_mut().enumerate() {
                            let col = bases[i] + lays[i].col(outer, t, d, bb, r);
                            row[col] = row[col].minus(a);
                        }
                    }
                    rows.extend(block);
                }
            }
        }
        width - Matrix::from_rows(width, rows).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Fp, Q};
    use crate::ideals::{make_nesting, sample_no_syz, two_step_closure, SamplerConfig};
    use crate::poly::{parse_poly, Form};
    use crate::profiles::TwoStepProfile;

    fn forms(n: usize, src: &[&str]) -> Vec<Form<Q>> {
        src.iter().map(|s| parse_poly(n, s).unwrap().to_form().unwrap()).collect()
    }

    #[test]
    fn degree_one_law_on_small_ideals() {
        let i = two_step_closure(2, 2, &forms(2, &["x1^2"])).unwrap();
        let r = tangent_report(&i, Exec::Sequential);
        // h_k·q_{k+1} = 1·2.
        assert_eq!(r.t1, 2);
        assert_eq!(r.dims.keys().copied().collect::<Vec<_>>(), (-4..=1).collect::<Vec<_>>());
    }

    #[test]
    fn presentation_matches_oracle_small() {
        for gens in [vec!["x1^2"], vec!["x1^2", "x1*x2"], vec!["x1^3", "x1*x2^2 - x2^3"], vec!["x1^2", "x2^3"]] {
            let k = parse_poly(2, gens[0]).unwrap().order().unwrap();
            let i = two_step_closure(2, k, &forms(2, &gens)).unwrap();
            for t in -(k as i64 + 3)..=2 {
                assert_eq!(hom_graded(&i, t).dim, oracle::hom_dim(&i, t), "{gens:?} t={t}");
            }
        }
    }

    #[test]
    fn fig_nine_smallest_profile_is_tnt() {
        let p = TwoStepProfile::new(4, 2, 2, 15).unwrap();
        let i: GradedIdeal<Fp> = sample_no_syz(&p, 11, &SamplerConfig::default()).unwrap();
        let r = tangent_report(&i, Exec::Sequential);
        assert_eq!((r.dim(-1), r.t0, r.t1), (4, 51, 10));
        assert!(r.tnt);
        for d in derivation_classes(&i) {
            assert!(TangentSystem::new(&i).is_homomorphism(-1, &d));
        }
    }

    #[test]
    fn consecutive_nesting_is_additive_in_degree_one() {
        let a = two_step_closure(2, 2, &forms(2, &["x1^2"])).unwrap();
        let b = two_step_closure(2, 3, &forms(2, &["x1^3", "x1^2*x2"])).unwrap();
        let nest = make_nesting(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(nested_hom_graded(&nest, 1), fiber_dim_initial(&a) + fiber_dim_initial(&b));
    }
}
