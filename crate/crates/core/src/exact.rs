//! Exact integer and rational helpers, modular inverses, and
//! Hirzebruch–Jung continued fractions.
//!
//! A Hirzebruch–Jung chain `[b1, ..., bk]` with every `bi >= 2` encodes the
//! fraction
//!
//! ```text
//! r/q = b1 - 1/(b2 - 1/(... - 1/bk))
//! ```
//!
//! and is the list of negated self-intersections of the exceptional curves
//! in the minimal resolution of the cyclic quotient singularity `1/r(1, q)`.
//! The empty chain stands for a smooth point (`r = 1`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shorthand for building a `BigInt` from a machine integer.
pub fn int<T: Into<BigInt>>(v: T) -> BigInt {
    v.into()
}

/// Shorthand for the rational `num/den`. Panics on a zero denominator.
pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Returns the integer value of `q`, or [`Error::NonIntegral`].
pub fn to_integer(q: &BigRational) -> Result<BigInt> {
    if is_integral(q) {
        Ok(q.numer().clone())
    } else {
        Err(Error::NonIntegral(q.to_string()))
    }
}

/// Least non-negative residue of `a` modulo `m` (`m > 0`).
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, returned in `[1, m - 1]`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if *m < int(2) {
        return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
    }
    let reduced = modulo(a, m);
    let eg = reduced.extended_gcd(m);
    if !eg.gcd.is_one() {
        return Err(Error::NotAUnit { a: a.clone(), m: m.clone() });
    }
    Ok(modulo(&eg.x, m))
}

/// A Hirzebruch–Jung continued fraction `[b1, ..., bk]` with all `bi >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HjChain(#[serde(with = "crate::serial::dec_seq")] Vec<BigInt>);

impl HjChain {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|b| **b < int(2)) {
            return Err(Error::InvalidArgument(format!("chain entries must be at least 2, found {bad}")));
        }
        Ok(Self(entries))
    }

    /// The chain of a smooth point.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same curves listed from the other end.
    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().cloned().collect())
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }
}

impl fmt::Display for HjChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// Expands `r/q` as a Hirzebruch–Jung continued fraction.
///
/// Uses the ceiling recurrence `b = ceil(r/q)`, `(r, q) <- (q, b*q - r)`,
/// which yields the unique expansion with all entries at least 2.
/// For `r = 1` the chain is empty and `q` must be 0 or 1.
pub fn hj_expand(r: &BigInt, q: &BigInt) -> Result<HjChain> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!("order must be positive, got {r}")));
    }
    if r.is_one() {
        if q.is_zero() || q.is_one() {
            return Ok(HjChain::empty());
        }
        return Err(Error::InvalidArgument(format!("for r = 1 the twist must be 0 or 1, got {q}")));
    }
    if !(q.is_positive() && q < r) {
        return Err(Error::InvalidArgument(format!("twist must satisfy 0 < q < r, got q = {q}, r = {r}")));
    }
    if !r.gcd(q).is_one() {
        return Err(Error::NotCoprime { a: r.clone(), b: q.clone() });
    }
    let mut entries = Vec::new();
    let (mut num, mut den) = (r.clone(), q.clone());
    while !den.is_zero() {
        let b = num.div_ceil(&den);
        let next = &b * &den - &num;
        entries.push(b);
        num = std::mem::replace(&mut den, next);
    }
    Ok(HjChain(entries))
}

/// Evaluates a chain back to the reduced fraction `r/q`.
pub fn hj_evaluate(chain: &HjChain) -> BigRational {
    // Fold from the tail: x_k = b_k, x_i = b_i - 1/x_{i+1}. Every x_i > 1.
    let mut value: Option<BigRational> = None;
    for b in chain.entries().iter().rev() {
        let b = BigRational::from_integer(b.clone());
        value = Some(match value {
            None => b,
            Some(x) => b - x.recip(),
        });
    }
    value.unwrap_or_else(BigRational::one)
}

/// Determinant of the tridiagonal matrix with diagonal `b1, ..., bk` and
/// off-diagonal entries `-1`, i.e. the continuant of the chain.
pub fn chain_determinant(chain: &HjChain) -> BigInt {
    let mut prev = BigInt::one();
    let mut cur = BigInt::one();
    for (i, b) in chain.entries().iter().enumerate() {
        let next = if i == 0 { b.clone() } else { b * &cur - &prev };
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
