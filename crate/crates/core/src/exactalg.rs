//! Exact multivariate Laurent polynomials over the rationals.
//!
//! Every integral, bracket and Jacobian entry in this crate is a
//! [`LaurentPolynomial`]: a finite sum of terms `c * x1^e1 * ... * xn^en`
//! with `c` a nonzero [`Rational`] and integer (possibly negative) exponents.
//! Variables are addressed by 0-based index in the API; the text form
//! labels them `x1..xn`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Canonical `p/q` string, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p` or `p/q` (optional sign on `p`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// Exponents of one Laurent monomial, one slot per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i32>);

impl ExponentVector {
    pub fn zeros(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(v: Vec<i32>) -> Self {
        ExponentVector(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

/// One serialized term: `{"coeff": "p/q", "exp": [e1, ..., en]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub exp: Vec<i32>,
}

/// Multivariate Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in canonical form: no zero coefficient is ever stored, so
/// structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zeros(nvars), c)
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars}");
        Self::monomial(ExponentVector::unit(nvars, var), Rational::one())
    }

    pub fn monomial(exps: ExponentVector, coeff: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    /// Coefficient-one monomial from raw exponents.
    pub fn unit_monomial(exps: Vec<i32>) -> Self {
        Self::monomial(ExponentVector(exps), Rational::one())
    }

    /// Builds a polynomial from possibly repeated terms, combining like terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &ExponentVector) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff * x^exps` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: ExponentVector, coeff: Rational) {
        assert_eq!(exps.len(), self.nvars, "exponent length mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal derivative in `x_{var+1}`; valid for negative exponents.
    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[var] -= 1;
            out.add_term(d, c * int(k as i64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        if len != self.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: len,
            });
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.check_point_len(point.len())?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 && point[i].is_zero() {
                    return Err(Error::ZeroToNegativePower { var: i + 1 });
                }
                term *= num_traits::pow::Pow::pow(&point[i], k);
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point twin of [`evaluate`](Self::evaluate).
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64> {
        self.check_point_len(point.len())?;
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 && point[i] == 0.0 {
                    return Err(Error::ZeroToNegativePower { var: i + 1 });
                }
                term *= point[i].powi(k);
            }
            total += term;
        }
        Ok(total)
    }

    /// Whether every monomial has total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: i64) -> bool {
        self.terms.keys().all(|e| e.degree() == d)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.0.iter().any(|&k| k < 0))
    }

    /// Indices of variables that occur with nonzero exponent in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e.0[i] != 0))
            .collect()
    }

    /// Renames variables: old variable `i` becomes `map[i]` in a ring with
    /// `new_nvars` variables. `map` must be injective.
    pub fn rename_vars(&self, map: &[usize], new_nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_nvars];
            for (i, &k) in e.0.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ExponentVector(ne), c.clone());
        }
        out
    }

    /// Appends `extra` unused variables after the existing ones.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.rename_vars(&map, self.nvars + extra)
    }

    /// Sets `x_{var+1} = 0` and removes that slot.
    ///
    /// Terms containing the variable vanish; a negative exponent on it is a
    /// pole on the hyperplane and is rejected.
    pub fn set_var_zero_and_drop(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            match e.0[var] {
                k if k < 0 => return Err(Error::ZeroToNegativePower { var: var + 1 }),
                0 => {
                    let mut ne = e.0.clone();
                    ne.remove(var);
                    out.add_term(ExponentVector(ne), c.clone());
                }
                _ => {}
            }
        }
        Ok(out)
    }

    /// Pullback along a monomial map: variable `i` is replaced by the
    /// Laurent monomial with exponent vector `images[i]` (in `target_nvars`
    /// variables).
    pub fn pullback_monomial_map(&self, images: &[Vec<i32>], target_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars);
        let mut out = Self::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0i32; target_nvars];
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                for (slot, &img) in ne.iter_mut().zip(&images[i]) {
                    *slot += k * img;
                }
            }
            out.add_term(ExponentVector(ne), c.clone());
        }
        out
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| TermRecord {
                coeff: format_rational(c),
                exp: e.0.clone(),
            })
            .collect()
    }

    pub fn from_records(nvars: usize, records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for r in records {
            if r.exp.len() != nvars {
                return Err(Error::VariableCountMismatch {
                    left: nvars,
                    right: r.exp.len(),
                });
            }
            p.add_term(ExponentVector(r.exp.clone()), parse_rational(&r.coeff)?);
        }
        Ok(p)
    }

    /// Parses the text form (`x1^2*x3^-1 - 3/2*x2 + 1`) in a ring with
    /// `nvars` variables.
    pub fn parse(nvars: usize, s: &str) -> Result<Self> {
        parse_text(nvars, s)
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPolynomial> for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            /// Panics on a variable-count mismatch; use the `checked_*` form
            /// for fallible input.
            fn $method(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                self.$checked(rhs).expect("variable count mismatch")
            }
        }
        impl $tr<LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$checked(&rhs).expect("variable count mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    /// Text form, terms in descending lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_constant() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

fn parse_text(nvars: usize, s: &str) -> Result<LaurentPolynomial> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    // Split on top-level sign characters that are not part of an exponent.
    let bytes = compact.as_bytes();
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        neg = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && i > start && bytes[i - 1] != b'^' {
            pieces.push((neg, &compact[start..i]));
            neg = b == b'-';
            start = i + 1;
        }
        i += 1;
    }
    pieces.push((neg, &compact[start..]));

    let mut out = LaurentPolynomial::zero(nvars);
    for (neg, piece) in pieces {
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let mut coeff = Rational::one();
        let mut exps = vec![0i32; nvars];
        for factor in piece.split('*') {
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx, pow) = match rest.split_once('^') {
                    Some((a, b)) => (a, b),
                    None => (rest, "1"),
                };
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                if idx == 0 || idx > nvars {
                    return Err(Error::VariableOutOfRange { index: idx, nvars });
                }
                let pow: i32 = pow
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {factor:?}")))?;
                exps[idx - 1] += pow;
            } else {
                coeff *= parse_rational(factor)?;
            }
        }
        if neg {
            coeff = -coeff;
        }
        out.add_term(ExponentVector(exps), coeff);
    }
    Ok(out)
}

impl std::str::FromStr for LaurentPolynomial {
    type Err = Error;

    /// Infers the variable count from the largest `x<i>` label present.
    fn from_str(s: &str) -> Result<Self> {
        let mut nvars = 0;
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() {
            if b[i] == b'x' {
                let mut j = i + 1;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                if let Ok(v) = s[i + 1..j].parse::<usize>() {
                    nvars = nvars.max(v);
                }
                i = j;
            } else {
                i += 1;
            }
        }
        parse_text(nvars.max(1), s)
    }
}
