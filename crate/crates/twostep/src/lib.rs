//! Exact tools for 2-step ideals and Hilbert schemes of points.
//!
//! The crate evaluates dimension formulas for Hilbert strata of 2-step
//! ideals (`m^{k+2} ⊂ I ⊂ m^k`), searches integer lattices for points where
//! a stratum is at least as large as the smoothable component, builds
//! explicit generic ideals, and computes graded tangent spaces
//! `Hom_R(I, R/I)_t` to decide the trivial-negative-tangents property.
//!
//! All arithmetic is exact: `BigRational` for formulas and small linear
//! algebra, and a 61-bit prime field for the large tangent computations
//! (see [`exactla::Field`]).
//!
//! Modules:
//! * [`combinat`] — binomials, monomials, Macaulay growth, lex ideals and
//!   Eliahou–Kervaire Betti numbers.
//! * [`exactla`] — matrices, kernels and subspaces over an exact field.
//! * [`poly`] — sparse polynomials and the `c*x1^a*x2^b` text format.
//! * [`profiles`] — 2-step Hilbert functions, regimes and dimension bounds.
//! * [`landscape`] — the quadratic functions `Δ` and `Θ`, their Hessians,
//!   critical points and the potential TNT area.
//! * [`search`] — lattice enumeration and certificate search.
//! * [`ideals`] — concrete graded ideals, samplers, Betti slices, nestings.
//! * [`tangent`] — graded tangent dimensions and TNT verdicts.
//! * [`fixtures`] — the bundled explicit ideals.
//! * [`exec`] — sequential / parallel execution switch.

pub mod combinat;
pub mod exactla;
pub mod exec;
pub mod fixtures;
pub mod ideals;
pub mod poly;
pub mod landscape;
pub mod profiles;
pub mod search;
pub mod tangent;

pub use exec::Exec;
