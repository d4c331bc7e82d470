//! Rational midpoint-radius intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil, floor, floor_log2, pow2, same, BigRational};

/// Significant bits kept when a radius is rounded upward.
const RADIUS_BITS: i64 = 30;

/// A real number known to lie in `[center - radius, center + radius]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    center: BigRational,
    radius: BigRational,
}

impl Ball {
    /// Panics on a negative radius.
    pub fn new(center: BigRational, radius: BigRational) -> Self {
        assert!(!radius.is_negative(), "ball radius must be non-negative");
        Ball { center, radius }
    }

    pub fn exact(value: BigRational) -> Self {
        Ball {
            center: value,
            radius: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Ball::exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// The smallest ball covering `[lo, hi]`.
    pub fn from_bounds(lo: BigRational, hi: BigRational) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let two = BigRational::from_integer(BigInt::from(2));
        let center = (&lo + &hi) / &two;
        let radius = (hi - lo) / two;
        Ball { center, radius }
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.center)
    }

    pub fn lower(&self) -> BigRational {
        &self.center - &self.radius
    }

    pub fn upper(&self) -> BigRational {
        &self.center + &self.radius
    }

    /// Upper bound on the absolute value.
    pub fn mag(&self) -> BigRational {
        self.center.abs() + &self.radius
    }

    /// Lower bound on the absolute value (zero if the ball contains zero).
    pub fn mig(&self) -> BigRational {
        let m = self.center.abs() - &self.radius;
        if m.is_negative() {
            BigRational::zero()
        } else {
            m
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (&self.center - x).abs() <= self.radius
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        (&self.center - &other.center).abs() <= &self.radius + &other.radius
    }

    /// The sign shared by every point, or `None` if the ball straddles zero.
    /// An exact zero reports `Equal`.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_exact() {
            return Some(self.center.cmp(&BigRational::zero()));
        }
        if self.lower().is_positive() {
            Some(Ordering::Greater)
        } else if self.upper().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Compare against an exact value; `None` when undecided.
    pub fn cmp_value(&self, x: &BigRational) -> Option<Ordering> {
        if self.is_exact() {
            Some(self.center.cmp(x))
        } else if &self.lower() > x {
            Some(Ordering::Greater)
        } else if &self.upper() < x {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            center: -&self.center,
            radius: self.radius.clone(),
        }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        Ball {
            center: &self.center + &other.center,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        Ball {
            center: &self.center - &other.center,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let radius =
            self.center.abs() * &other.radius + other.center.abs() * &self.radius + &self.radius * &other.radius;
        Ball {
            center: &self.center * &other.center,
            radius,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Ball {
        Ball {
            center: &self.center * k,
            radius: &self.radius * k.abs(),
        }
    }

    pub fn div(&self, other: &Ball) -> Result<Ball> {
        let m = other.mig();
        if m.is_zero() {
            return Err(if other.is_exact() {
                Error::domain("division by zero")
            } else {
                Error::Precision("divisor not separated from zero".into())
            });
        }
        let q = &self.center / &other.center;
        let radius = (&self.radius + q.abs() * &other.radius) / m;
        Ok(Ball { center: q, radius })
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut n: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::exact(BigRational::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Round the center to a multiple of `2^-bits` and the radius up to a
    /// short dyadic. The result contains `self`.
    pub fn round(&self, bits: i64) -> Ball {
        if self.center.denom().is_one() && self.radius.is_zero() {
            return self.clone();
        }
        let scale = pow2(bits);
        let scaled = &self.center * &scale;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let n = floor(&(scaled + half));
        let center = BigRational::from_integer(n) / &scale;
        if same(&center, &self.center) {
            return Ball {
                center,
                radius: round_up(&self.radius),
            };
        }
        let radius = round_up(&(&self.radius + (&self.center - &center).abs()));
        Ball { center, radius }
    }

    /// Add an absolute error to the radius.
    pub fn widen(&self, err: &BigRational) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: &self.radius + err,
        }
    }
}

/// Round a non-negative rational upward to `RADIUS_BITS` significant bits.
pub(crate) fn round_up(r: &BigRational) -> BigRational {
    if r.is_zero() || (r.denom().is_one() && r.numer().bits() <= RADIUS_BITS as u64) {
        return r.clone();
    }
    let e = floor_log2(r);
    let scale = pow2(RADIUS_BITS - e);
    BigRational::from_integer(ceil(&(r * &scale))) / scale
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {}",
            crate::rational::format_fraction(&self.center),
            crate::rational::format_fraction(&self.radius)
        )
    }
}

/// Exact `n`-th root of a non-negative integer, if there is one.
pub(crate) fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow::Pow::pow(&r, k) == *n).then_some(r)
}

/// Truncating division used by the fixed-point series code.
pub(crate) fn div_trunc(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_rem(b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn arithmetic_encloses() {
        let a = Ball::new(int(2), ratio(1, 10));
        let b = Ball::new(int(-3), ratio(1, 5));
        let p = a.mul(&b);
        for x in [ratio(19, 10), ratio(21, 10)] {
            for y in [ratio(-16, 5), ratio(-14, 5)] {
                assert!(p.contains(&(&x * &y)));
                assert!(a.add(&b).contains(&(&x + &y)));
                assert!(a.sub(&b).contains(&(&x - &y)));
                assert!(a.div(&b).unwrap().contains(&(&x / &y)));
            }
        }
    }

    #[test]
    fn division_by_zero() {
        let a = Ball::from_integer(1);
        assert!(matches!(a.div(&Ball::from_integer(0)), Err(Error::Domain(_))));
        let z = Ball::new(int(0), ratio(1, 2));
        assert!(matches!(a.div(&z), Err(Error::Precision(_))));
    }

    #[test]
    fn signs() {
        assert_eq!(Ball::from_integer(0).sign(), Some(Ordering::Equal));
        assert_eq!(Ball::new(int(1), ratio(1, 2)).sign(), Some(Ordering::Greater));
        assert_eq!(Ball::new(int(-1), ratio(1, 2)).sign(), Some(Ordering::Less));
        assert_eq!(Ball::new(int(1), int(1)).sign(), None);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&BigInt::from(27), 3), Some(BigInt::from(3)));
        assert_eq!(exact_root(&BigInt::from(28), 3), None);
        assert_eq!(exact_root(&BigInt::from(1), 7), Some(BigInt::from(1)));
    }

    proptest! {
        #[test]
        fn rounding_contains(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000, r in 0i64..1000, bits in -4i64..80) {
            let b = Ball::new(ratio(n, d), ratio(r, 997));
            let rounded = b.round(bits);
            prop_assert!(rounded.contains_ball(&b));
        }

        #[test]
        fn powi_matches_repeated_mul(n in -50i64..50, d in 1i64..20, r in 0i64..5, k in 0u64..12) {
            let b = Ball::new(ratio(n, d), ratio(r, 100));
            let mut slow = Ball::from_integer(1);
            for _ in 0..k {
                slow = slow.mul(&b);
            }
            let fast = b.powi(k);
            prop_assert_eq!(fast.center(), slow.center());
            let x = b.upper();
            prop_assert!(fast.contains(&num_traits::pow::Pow::pow(&x, k as u32)));
        }
    }
}
