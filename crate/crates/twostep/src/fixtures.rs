//! Named ideals and nestings shipped with the crate.
//!
//! Each fixture file holds a header (`n:`, `mode:`, optionally `k:`) and one
//! generator per line in the plain polynomial format of [`crate::poly`].
//! `mode: closure` routes the generators through
//! [`two_step_closure`](crate::ideals::two_step_closure); `mode: initial`
//! takes the initial-form ideal of possibly inhomogeneous generators.

use thiserror::Error;

use crate::combinat::dim_forms;
use crate::exactla::{Field, Subspace, Q};
use crate::ideals::{initial_two_step, make_nesting, task_rng, two_step_closure, GradedIdeal, IdealError, Nesting};
use crate::poly::{parse_poly, ParseError};

/// Errors raised while loading a fixture.
#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}")]
    Unknown(String),
    #[error("line {line}: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

const IARROBINO78: &str = include_str!("../fixtures/iarrobino78.txt");
const NESTED_A4_OUTER: &str = include_str!("../fixtures/nested-a4-outer.txt");
const NESTED_A4_INNER: &str = include_str!("../fixtures/nested-a4-inner.txt");
const SIXVAR_FIRST: &str = include_str!("../fixtures/sixvar-first.txt");
const SIXVAR_SECOND: &str = include_str!("../fixtures/sixvar-second.txt");

/// A loaded fixture: a single ideal or a nesting.
#[derive(Clone, Debug)]
pub enum Fixture {
    Ideal(GradedIdeal<Q>),
    Nesting(Nesting<Q>),
}

impl Fixture {
    /// The levels (one for a single ideal).
    pub fn ideals(&self) -> Vec<GradedIdeal<Q>> {
        match self {
            Fixture::Ideal(i) => vec![i.clone()],
            Fixture::Nesting(n) => n.ideals().to_vec(),
        }
    }
}

/// Names accepted by [`load`], with one-line descriptions.
pub const CATALOG: &[(&str, &str)] = &[
    ("iarrobino78", "length-78 ideal in 3 variables with two linear syzygies"),
    ("nested-a4", "two-level nesting in 4 variables, Hilbert vector ((1,2),(1,4,2))"),
    ("sixvar-first", "ideal in 6 variables with Hilbert function (1,6,12,7)"),
    ("sixvar-second", "ideal in 6 variables with Hilbert function (1,6,12,6), cubic as printed"),
    ("sixvar-generic", "the first 6-variable ideal plus a seeded random cubic, Hilbert function (1,6,12,6)"),
];

/// Seed of the random cubic in `sixvar-generic`.
pub const SIXVAR_GENERIC_SEED: u64 = 0;

/// Parses one fixture file.
pub fn parse_fixture(text: &str) -> Result<GradedIdeal<Q>, FixtureError> {
    let mut n = None;
    let mut mode = None;
    let mut k = None;
    let mut polys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((key, value)) = body.split_once(':') {
            let value = value.trim();
            let num = || {
                value.parse::<usize>().map_err(|_| FixtureError::Header {
                    line,
                    message: format!("expected a number, found {value:?}"),
                })
            };
            match key.trim() {
                "n" => n = Some(num()?),
                "k" => k = Some(num()?),
                "mode" => mode = Some(value.to_string()),
                other => {
                    return Err(FixtureError::Header {
                        line,
                        message: format!("unknown key {other:?}"),
                    })
                }
            }
            continue;
        }
        let nv = n.ok_or(FixtureError::Header {
            line,
            message: "generator before the `n:` header".into(),
        })?;
        polys.push(parse_poly(nv, body).map_err(|source| FixtureError::Parse { line, source })?);
    }
    let n = n.ok_or(FixtureError::Header {
        line: 0,
        message: "missing `n:` header".into(),
    })?;
    match mode.as_deref() {
        Some("initial") => Ok(initial_two_step(n, &polys)?),
        Some("closure") | None => {
            let forms = polys
                .iter()
                .enumerate()
                .map(|(i, p)| p.to_form().map_err(|source| FixtureError::Parse { line: i + 1, source }))
                .collect::<Result<Vec<_>, _>>()?;
            let k = match k {
                Some(k) => k,
                None => forms.iter().map(|f| f.degree).min().ok_or(IdealError::Empty)?,
            };
            Ok(two_step_closure(n, k, &forms)?)
        }
        Some(other) => Err(FixtureError::Header {
            line: 0,
            message: format!("unknown mode {other:?}"),
        }),
    }
}

/// Loads a fixture by name.
pub fn load(name: &str) -> Result<Fixture, FixtureError> {
    match name {
        "iarrobino78" => Ok(Fixture::Ideal(parse_fixture(IARROBINO78)?)),
        "sixvar-first" => Ok(Fixture::Ideal(parse_fixture(SIXVAR_FIRST)?)),
        "sixvar-second" => Ok(Fixture::Ideal(parse_fixture(SIXVAR_SECOND)?)),
        "sixvar-generic" => Ok(Fixture::Ideal(sixvar_generic(SIXVAR_GENERIC_SEED)?)),
        "nested-a4" => Ok(Fixture::Nesting(make_nesting(vec![
            parse_fixture(NESTED_A4_OUTER)?,
            parse_fixture(NESTED_A4_INNER)?,
        ])?)),
        other => Err(FixtureError::Unknown(other.to_string())),
    }
}

/// `sixvar-first` plus one cubic with coefficients drawn uniformly from
/// `[−10, 10]` (stream 0 of `seed`).
pub fn sixvar_generic(seed: u64) -> Result<GradedIdeal<Q>, FixtureError> {
    use rand::Rng;
    let first = parse_fixture(SIXVAR_FIRST)?;
    let mut rng = task_rng(seed, 0);
    let width = dim_forms(6, 3);
    let cubic: Vec<Q> = (0..width).map(|_| Q::from_i64(rng.gen_range(-10..=10))).collect();
    let hi = first.hi().sum(&Subspace::from_rows(width, vec![cubic])).map_err(IdealError::from)?;
    Ok(GradedIdeal::new(6, 2, first.lo().clone(), hi)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_loads() {
        for (name, _) in CATALOG {
            load(name).unwrap();
        }
        assert!(matches!(load("nope"), Err(FixtureError::Unknown(_))));
    }

    #[test]
    fn header_errors_are_reported() {
        assert!(matches!(parse_fixture("x1^2\n"), Err(FixtureError::Header { line: 1, .. })));
        assert!(matches!(parse_fixture("n: 2\nmode: odd\nx1^2\n"), Err(FixtureError::Header { .. })));
    }
}
