//! Exact scalars and matrices.
//!
//! The scalar field used throughout is the Q-vector space spanned by an
//! ordered list of symbols. Symbol 0 is always the constant `1`; the
//! remaining symbols denote algebraically independent transcendental reals
//! (so `λ` really is irrational, and `1` and `λ` admit no integer
//! relation). A [`KNumber`] is a finite Q-linear combination of symbols.
//! Sums, differences and rational rescalings stay inside the span; a
//! product of two non-rational numbers does not, and the operations that
//! could produce one report [`ExactError::SymbolProduct`] instead of
//! silently leaving the field.

mod matrix;
mod normal_form;
mod rank;

pub use matrix::{KMatrix, Mat, QMatrix, ZMatrix};
pub use normal_form::{determinant, hnf_row, inverse_unimodular, snf};
pub use rank::{extend_to_unimodular, flatten_rank_q, function_field_rank, saturated_left_kernel};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// The input lattice admits a proper finite-index superlattice inside
    /// its rational span, so it cannot be completed to a basis of `Z^n`.
    #[error("input lattice is not saturated (or its rows are not a basis)")]
    NotSaturated,
    /// A product of two non-rational scalars left the Q-span of the symbols.
    #[error("product of two non-rational scalars is not representable")]
    SymbolProduct,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
}

/// Ordered list of scalar symbols. Index 0 is always the constant `"1"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolBasis {
    names: Vec<String>,
}

impl SymbolBasis {
    /// Basis with no irrational symbols: scalars are plain rationals.
    pub fn rational_only() -> Self {
        SymbolBasis {
            names: vec!["1".to_string()],
        }
    }

    /// Builds a basis from the non-constant symbol names; `"1"` is
    /// prepended automatically at index 0.
    pub fn new<I, S>(symbols: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = vec!["1".to_string()];
        for s in symbols {
            let name = s.into();
            if !Self::valid_name(&name) {
                return Err(ExactError::InvalidSymbol(name));
            }
            if names.contains(&name) {
                return Err(ExactError::InvalidSymbol(name));
            }
            names.push(name);
        }
        Ok(SymbolBasis { names })
    }

    // A name must not collide with rational literals or the term syntax.
    fn valid_name(name: &str) -> bool {
        if name.is_empty() || name == "1" {
            return false;
        }
        if name.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            return false;
        }
        !name.chars().any(|c| "+-*/ \t\r\n".contains(c))
    }

    /// Number of symbols, the constant included.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // index 0 always exists
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All names, the constant `"1"` first.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The non-constant names, in order.
    pub fn symbol_names(&self) -> &[String] {
        &self.names[1..]
    }
}

/// A scalar in the Q-span of the symbol basis: a sparse map from symbol
/// index to rational coefficient. No explicit zeros are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KNumber {
    coeffs: BTreeMap<usize, Rational>,
}

impl KNumber {
    pub fn zero() -> Self {
        KNumber::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut k = KNumber::zero();
        k.set_coeff(0, q);
        k
    }

    pub fn from_integer(n: i64) -> Self {
        KNumber::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The symbol with the given basis index, coefficient 1.
    pub fn symbol(index: usize) -> Self {
        let mut k = KNumber::zero();
        k.set_coeff(index, Rational::one());
        k
    }

    pub fn with_coeff(index: usize, q: Rational) -> Self {
        let mut k = KNumber::zero();
        k.set_coeff(index, q);
        k
    }

    fn set_coeff(&mut self, index: usize, q: Rational) {
        if q.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, q);
        }
    }

    pub fn coeff(&self, index: usize) -> Rational {
        self.coeffs
            .get(&index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when only the constant symbol carries a coefficient.
    pub fn is_rational(&self) -> bool {
        self.coeffs.keys().all(|&i| i == 0)
    }

    /// Coefficient of the constant symbol.
    pub fn rational_part(&self) -> Rational {
        self.coeff(0)
    }

    /// Largest symbol index that occurs, if any.
    pub fn max_symbol_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&i, q)| (i, q))
    }

    pub fn add(&self, other: &KNumber) -> KNumber {
        let mut out = self.clone();
        for (i, q) in other.iter() {
            let sum = out.coeff(i) + q;
            out.set_coeff(i, sum);
        }
        out
    }

    pub fn sub(&self, other: &KNumber) -> KNumber {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KNumber {
        let coeffs = self.coeffs.iter().map(|(&i, q)| (i, -q.clone())).collect();
        KNumber { coeffs }
    }

    pub fn scale(&self, factor: &Rational) -> KNumber {
        if factor.is_zero() {
            return KNumber::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&i, q)| (i, q * factor)).collect();
        KNumber { coeffs }
    }

    /// Product, defined only when at least one factor is rational.
    pub fn try_mul(&self, other: &KNumber) -> Result<KNumber, ExactError> {
        if self.is_zero() || other.is_zero() {
            return Ok(KNumber::zero());
        }
        if self.is_rational() {
            return Ok(other.scale(&self.rational_part()));
        }
        if other.is_rational() {
            return Ok(self.scale(&other.rational_part()));
        }
        Err(ExactError::SymbolProduct)
    }

    /// Canonical text form, e.g. `"1 - 3/2*λ"`.
    pub fn to_text(&self, basis: &SymbolBasis) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, q) in self.iter() {
            let negative = q.is_negative();
            let abs = q.abs();
            let body = if i == 0 {
                abs.to_string()
            } else if abs.is_one() {
                basis.name(i).to_string()
            } else {
                format!("{}*{}", abs, basis.name(i))
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }

    /// Parses the text form produced by [`KNumber::to_text`]. Accepts any
    /// whitespace around terms, bare symbols (`"λ"`), bare rationals
    /// (`"-2/3"`) and explicit products (`"3/4*λ"`).
    pub fn parse(text: &str, basis: &SymbolBasis) -> Result<KNumber, ExactError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ExactError::Parse(text.to_string()));
        }
        let mut out = KNumber::zero();
        let mut term = String::new();
        let mut sign = 1i64;
        let mut chars = compact.chars().peekable();
        // leading sign
        if let Some(&c) = chars.peek() {
            if c == '+' || c == '-' {
                if c == '-' {
                    sign = -1;
                }
                chars.next();
            }
        }
        let flush = |term: &mut String, sign: i64, out: &mut KNumber| -> Result<(), ExactError> {
            if term.is_empty() {
                return Err(ExactError::Parse(text.to_string()));
            }
            let (index, coeff) = Self::parse_term(term, basis, text)?;
            let signed = if sign < 0 { -coeff } else { coeff };
            let sum = out.coeff(index) + signed;
            out.set_coeff(index, sum);
            term.clear();
            Ok(())
        };
        for c in chars {
            if c == '+' || c == '-' {
                flush(&mut term, sign, &mut out)?;
                sign = if c == '-' { -1 } else { 1 };
            } else {
                term.push(c);
            }
        }
        flush(&mut term, sign, &mut out)?;
        Ok(out)
    }

    fn parse_term(
        term: &str,
        basis: &SymbolBasis,
        original: &str,
    ) -> Result<(usize, Rational), ExactError> {
        if let Some((coeff_text, name)) = term.split_once('*') {
            let coeff = parse_rational(coeff_text)
                .ok_or_else(|| ExactError::Parse(original.to_string()))?;
            let index = basis
                .index_of(name)
                .ok_or_else(|| ExactError::UnknownSymbol(name.to_string()))?;
            Ok((index, coeff))
        } else if let Some(q) = parse_rational(term) {
            Ok((0, q))
        } else {
            let index = basis
                .index_of(term)
                .ok_or_else(|| ExactError::UnknownSymbol(term.to_string()))?;
            Ok((index, Rational::one()))
        }
    }
}

fn parse_rational(text: &str) -> Option<Rational> {
    if text.is_empty() {
        return None;
    }
    Rational::from_str(text).ok()
}

impl fmt::Display for KNumber {
    /// Display with raw symbol indices (`#2`); prefer [`KNumber::to_text`]
    /// when a basis is at hand.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, q) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{q}")?;
            } else {
                write!(f, "{q}*#{i}")?;
            }
        }
        Ok(())
    }
}
