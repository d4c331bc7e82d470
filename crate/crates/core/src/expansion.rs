//! Truncated positional expansions in bases 2 to 36.
//!
//! Integer digits come from repeated quotient and remainder; fractional
//! digits from `a_n = floor(b * f_n)`, `f_{n+1} = b * f_n - a_n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{floor, same, BigRational};

pub const MIN_BASE: u32 = 2;
pub const MAX_BASE: u32 = 36;

const ALPHABET: &[u8; 36] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasebExpansion {
    pub negative: bool,
    pub base: u32,
    /// Most significant first; a single `0` when the integer part is zero.
    pub integer_digits: Vec<u8>,
    pub fractional_digits: Vec<u8>,
}

impl BasebExpansion {
    /// The rational number the digits spell out.
    pub fn to_rational(&self) -> BigRational {
        let b = BigInt::from(self.base);
        let mut n = BigInt::zero();
        for &d in self.integer_digits.iter().chain(&self.fractional_digits) {
            n = n * &b + BigInt::from(d);
        }
        let den = num_traits::pow::Pow::pow(&b, self.fractional_digits.len() as u32);
        let v = BigRational::new(n, den);
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for BasebExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.integer_digits.len() + self.fractional_digits.len() + 2);
        if self.negative {
            s.push('-');
        }
        s.extend(self.integer_digits.iter().map(|&d| ALPHABET[d as usize] as char));
        if !self.fractional_digits.is_empty() {
            s.push('.');
            s.extend(self.fractional_digits.iter().map(|&d| ALPHABET[d as usize] as char));
        }
        f.write_str(&s)
    }
}

pub fn check_base(base: u32) -> Result<()> {
    if (MIN_BASE..=MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(Error::domain(format!("base {base} is outside 2..=36")))
    }
}

/// Truncated expansion of an exact rational with `n` fractional digits.
/// A negative value whose digits are all zero is written without a sign.
pub fn expand_rational(x: &BigRational, base: u32, n: usize) -> Result<BasebExpansion> {
    check_base(base)?;
    let b = BigInt::from(base);
    let mag = x.abs();
    let whole = floor(&mag);
    let mut integer_digits = Vec::new();
    let mut q = whole.clone();
    loop {
        let (next, d) = q.div_rem(&b);
        integer_digits.push(d.to_u8().expect("digit below base"));
        q = next;
        if q.is_zero() {
            break;
        }
    }
    integer_digits.reverse();

    let den = mag.denom().clone();
    let mut rem = mag.numer() - &whole * &den;
    let mut fractional_digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = rem * &b;
        let (d, r) = t.div_rem(&den);
        fractional_digits.push(d.to_u8().expect("digit below base"));
        rem = r;
    }
    let all_zero = whole.is_zero() && fractional_digits.iter().all(|&d| d == 0);
    Ok(BasebExpansion {
        negative: x.is_negative() && !all_zero,
        base,
        integer_digits,
        fractional_digits,
    })
}

/// Expansion shared by every point of `[lo, hi]`, or a precision error.
pub fn certified_expansion(lo: &BigRational, hi: &BigRational, base: u32, n: usize) -> Result<BasebExpansion> {
    let a = expand_rational(lo, base, n)?;
    if same(lo, hi) {
        return Ok(a);
    }
    let b = expand_rational(hi, base, n)?;
    if a == b {
        Ok(a)
    } else {
        Err(Error::Precision(format!(
            "digits not certified: value lies between {a} and {b}"
        )))
    }
}
