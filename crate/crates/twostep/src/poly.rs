//! Sparse polynomials, homogeneous forms and the plain-text polynomial
//! format `c*x1^a1*...*xn^an` with terms joined by `+` / `-`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::combinat::{dim_forms, monomials, Monomial};
use crate::exactla::{Field, Q};

/// Errors raised while parsing polynomials.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("variable x{index} is outside x1..x{n}")]
    BadVariable { index: usize, n: usize },
    #[error("malformed number {text:?}")]
    BadNumber { text: String },
    #[error("empty polynomial")]
    Empty,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

/// A polynomial in `n` variables with coefficients in `F`, possibly
/// inhomogeneous. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    n: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.nvars(), self.n, "monomial arity mismatch");
        let entry = self.terms.entry(m.clone()).or_insert_with(F::zero);
        *entry = entry.plus(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Lowest degree of a term (the order), `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree-`d` component as a dense vector in the monomial basis.
    pub fn component(&self, d: usize) -> Vec<F> {
        let mut v = vec![F::zero(); dim_forms(self.n, d)];
        for (m, c) in &self.terms {
            if m.degree() == d {
                v[m.rank()] = c.clone();
            }
        }
        v
    }

    /// Product with a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous form, if the polynomial is homogeneous and nonzero.
    pub fn to_form(&self) -> Result<Form<F>, ParseError> {
        let d = self.order().ok_or(ParseError::Empty)?;
        if self.max_degree() != Some(d) {
            return Err(ParseError::NotHomogeneous);
        }
        Ok(Form::from_dense(self.n, d, self.component(d)))
    }

    /// Entrywise image in another field.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Greatest monomial first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_one = body == "1";
            if m.degree() == 0 {
                write!(f, "{body}")?;
            } else if is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{body}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A homogeneous form of a fixed degree, stored densely in the monomial
/// basis of that degree (greatest monomial first).
#[derive(Clone, Debug, PartialEq)]
pub struct Form<F> {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<F>,
}

impl<F: Field> Form<F> {
    pub fn from_dense(n: usize, degree: usize, coeffs: Vec<F>) -> Self {
        assert_eq!(coeffs.len(), dim_forms(n, degree), "coefficient length mismatch");
        Form { n, degree, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Field::is_zero)
    }

    /// Sparse view: nonzero coefficients keyed by monomial.
    pub fn sparse(&self) -> BTreeMap<Monomial, F> {
        monomials(self.n, self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, c.clone()))
            .collect()
    }

    pub fn to_poly(&self) -> Poly<F> {
        let mut p = Poly::zero(self.n);
        for (m, c) in self.sparse() {
            p.add_term(m, c);
        }
        p
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Parses a polynomial with rational coefficients in the variables
/// `x1, …, xn`. Terms look like `3*x1^2*x3`, `-x2`, `5/2` or `x1*x2^4`.
pub fn parse_poly(n: usize, text: &str) -> Result<Poly<Q>, ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut out = Poly::zero(n);
    let mut any = false;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        let mut sign = 1i64;
        if !any || matches!(bytes[pos], '+' | '-') {
            while pos < bytes.len() && matches!(bytes[pos], '+' | '-') {
                if bytes[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
                skip_ws(&mut pos);
            }
        } else {
            return Err(ParseError::Unexpected {
                pos,
                found: bytes[pos],
            });
        }
        let (coeff, mono) = parse_term(n, &bytes, &mut pos)?;
        out.add_term(mono, coeff * BigRational::from_integer(BigInt::from(sign)));
        any = true;
    }
    if !any {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

fn parse_term(n: usize, s: &[char], pos: &mut usize) -> Result<(Q, Monomial), ParseError> {
    let mut coeff = <Q as One>::one();
    let mut exps = vec![0u32; n];
    let mut factors = 0;
    loop {
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
        let Some(&c) = s.get(*pos) else { break };
        if c.is_ascii_digit() {
            let start = *pos;
            while *pos < s.len() && (s[*pos].is_ascii_digit() || s[*pos] == '/') {
                *pos += 1;
            }
            let text: String = s[start..*pos].iter().collect();
            coeff *= parse_number(&text)?;
        } else if c == 'x' {
            *pos += 1;
            let start = *pos;
            while *pos < s.len() && s[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let text: String = s[start..*pos].iter().collect();
            let index: usize = text
                .parse()
                .map_err(|_| ParseError::BadNumber { text: text.clone() })?;
            if index == 0 || index > n {
                return Err(ParseError::BadVariable { index, n });
            }
            let mut e = 1u32;
            if s.get(*pos) == Some(&'^') {
                *pos += 1;
                let start = *pos;
                while *pos < s.len() && s[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let text: String = s[start..*pos].iter().collect();
                e = text
                    .parse()
                    .map_err(|_| ParseError::BadNumber { text: text.clone() })?;
            }
            exps[index - 1] += e;
        } else if factors == 0 {
            return Err(ParseError::Unexpected { pos: *pos, found: c });
        } else {
            break;
        }
        factors += 1;
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
        if s.get(*pos) == Some(&'*') {
            *pos += 1;
        } else {
            break;
        }
    }
    if factors == 0 {
        return Err(ParseError::Empty);
    }
    Ok((coeff, Monomial::new(exps)))
}

fn parse_number(text: &str) -> Result<Q, ParseError> {
    let bad = || ParseError::BadNumber {
        text: text.to_string(),
    };
    match text.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}
