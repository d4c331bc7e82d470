//! Exact rational arithmetic for the low operations.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::syntax::{OpKind, Operator};

pub use num_rational::BigRational;

/// Greatest common divisor by the Euclidean algorithm.
pub fn gcd(a: &BigUint, b: &BigUint) -> Result<BigUint> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("gcd(0, 0) is undefined"));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    Ok(x)
}

/// Reduce `numerator / denominator` to lowest terms with a positive
/// denominator.
pub fn reduce(numerator: BigInt, denominator: BigInt) -> Result<BigRational> {
    if denominator.is_zero() {
        return Err(Error::domain("zero denominator"));
    }
    if numerator.is_zero() {
        return Ok(BigRational::zero());
    }
    let g = gcd(numerator.magnitude(), denominator.magnitude())?;
    let g = BigInt::from_biguint(Sign::Plus, g);
    let (mut n, mut d) = (numerator / &g, denominator / &g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    Ok(BigRational::new_raw(n, d))
}

/// Greatest integer not above `r`.
pub fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &BigRational) -> BigInt {
    -(-r.numer()).div_floor(r.denom())
}

/// Ranks 1 and 2: addition, multiplication, subtraction, division. `-` and
/// `/` coincide at these ranks.
pub fn low_op(op: Operator, a: &BigRational, b: &BigRational) -> Result<BigRational> {
    match (op.kind(), op.rank()) {
        (OpKind::Plus, 1) => Ok(a + b),
        (OpKind::Plus, 2) => Ok(a * b),
        (OpKind::Minus | OpKind::Slash, 1) => Ok(a - b),
        (OpKind::Minus | OpKind::Slash, 2) => {
            if b.is_zero() {
                Err(Error::domain("division by zero"))
            } else {
                Ok(a / b)
            }
        }
        _ => Err(Error::domain(format!("`{op}` is not a low operation"))),
    }
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Parse `"p/q"` or `"p"` (optionally signed) into a reduced fraction.
pub fn parse_fraction(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::parse(0, format!("not a fraction: {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    reduce(n, d)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_fraction(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Equality of reduced fractions without the recursive comparison that
/// `Ratio` uses, which can exhaust the stack on long near-equal values.
pub(crate) fn same(a: &BigRational, b: &BigRational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

/// `2^e` for any integer exponent.
pub(crate) fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new_raw(BigInt::one(), p)
    }
}

/// `floor(log2 |r|)` for non-zero `r`.
pub(crate) fn floor_log2(r: &BigRational) -> i64 {
    debug_assert!(!r.is_zero());
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // now 2^(e-1) < |r| < 2^(e+1)
    let lhs = if e >= 0 { d << e as u64 } else { d.clone() };
    let rhs = if e >= 0 { n.clone() } else { n << (-e) as u64 };
    if rhs < lhs {
        e -= 1;
    }
    e
}

/// Smallest `k` with `|r| <= 2^k`, for non-zero `r`.
pub(crate) fn ceil_log2(r: &BigRational) -> i64 {
    let f = floor_log2(r);
    if same(&r.abs(), &pow2(f)) {
        f
    } else {
        f + 1
    }
}

/// Number of bits needed so that `2^-bits <= eps`.
pub(crate) fn bits_for(eps: &BigRational) -> i64 {
    -floor_log2(eps)
}
