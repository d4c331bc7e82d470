//! Rank-3 operations: exponential and natural logarithm by power series,
//! then power, root and logarithm through `a^b = e^(b ln a)`.
//!
//! Every result is a [`Ball`] whose radius bounds the total error: series
//! truncation, fixed-point rounding, and whatever uncertainty the inputs
//! carried. Euler's number is never stored; it only appears as `exp(1)`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{div_trunc, exact_root, Ball};
use crate::error::{Error, Result};
use crate::rational::{bits_for, ceil, ceil_log2, floor_log2, int, is_integer, pow2, ratio, same, BigRational};

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
/// Intermediates whose magnitude exceeds `2^DEFAULT_BLOWUP_BITS` are refused.
pub const DEFAULT_BLOWUP_BITS: u64 = 1 << 20;

/// Requested accuracy for one series evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesConfig {
    pub target: BigRational,
    pub max_terms: usize,
}

impl SeriesConfig {
    /// Panics unless `target > 0`.
    pub fn new(target: BigRational) -> Self {
        assert!(target.is_positive(), "target error must be positive");
        SeriesConfig {
            target,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    fn limits(&self) -> Limits {
        Limits {
            max_terms: self.max_terms,
            ..Limits::default()
        }
    }
}

/// Resource bounds shared by the transcendental kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_terms: usize,
    pub blowup_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: DEFAULT_MAX_TERMS,
            blowup_bits: DEFAULT_BLOWUP_BITS,
        }
    }
}

/// Upper bound for log2(e).
fn log2e_up() -> BigRational {
    ratio(14427, 10000)
}

fn ensure_terms(n: usize, lim: &Limits, what: &str) -> Result<()> {
    if n > lim.max_terms {
        Err(Error::Resource(format!(
            "{what} series needs more than {} terms",
            lim.max_terms
        )))
    } else {
        Ok(())
    }
}

pub fn exp_e(a: &BigRational, cfg: &SeriesConfig) -> Result<Ball> {
    exp_ball(&Ball::exact(a.clone()), &cfg.target, &cfg.limits())
}

pub fn ln_e(a: &BigRational, cfg: &SeriesConfig) -> Result<Ball> {
    ln_ball(&Ball::exact(a.clone()), &cfg.target, &cfg.limits())
}

pub fn pow(a: &BigRational, b: &BigRational, cfg: &SeriesConfig) -> Result<Ball> {
    pow_ball(
        &Ball::exact(a.clone()),
        &Ball::exact(b.clone()),
        &cfg.target,
        &cfg.limits(),
    )
}

/// The `---` operation: `x` with `x^b = a`.
pub fn root(a: &BigRational, b: &BigRational, cfg: &SeriesConfig) -> Result<Ball> {
    root_ball(
        &Ball::exact(a.clone()),
        &Ball::exact(b.clone()),
        &cfg.target,
        &cfg.limits(),
    )
}

/// The `///` operation: logarithm of `a` to base `b`.
pub fn log(a: &BigRational, b: &BigRational, cfg: &SeriesConfig) -> Result<Ball> {
    log_ball(
        &Ball::exact(a.clone()),
        &Ball::exact(b.clone()),
        &cfg.target,
        &cfg.limits(),
    )
}

/// `e^x`. The radius is at most `eps` plus the propagated input radius.
pub fn exp_ball(x: &Ball, eps: &BigRational, lim: &Limits) -> Result<Ball> {
    if x.is_exact() && x.center().is_zero() {
        return Ok(Ball::from_integer(1));
    }
    let up = x.upper();
    let mag_bits = if up.is_positive() {
        let b = ceil(&(&up * log2e_up()));
        if b > BigInt::from(lim.blowup_bits) {
            return Err(Error::Overflow {
                bits: lim.blowup_bits,
                context: "exponential".into(),
            });
        }
        b.to_i64().unwrap_or(i64::MAX) + 1
    } else {
        1
    };
    let half = eps / int(2);
    let mut extra = 8;
    let mut point = exp_point(x.center(), bits_for(&half) + mag_bits + extra, lim)?;
    while point.radius() > &half {
        extra += 8 + (ceil_log2(point.radius()) - floor_log2(&half)).max(0);
        if extra > 4096 {
            return Err(Error::Precision("exponential failed to reach its target".into()));
        }
        point = exp_point(x.center(), bits_for(&half) + mag_bits + extra, lim)?;
    }
    let r = x.radius();
    if r.is_zero() {
        return Ok(point);
    }
    // e^(c±r) lies within e^c·[e^-r, e^r]
    let growth = if r <= &int(1) {
        r + r * r
    } else {
        exp_point(r, 8, lim)?.upper() - int(1)
    };
    let spread = point.mag() * growth;
    Ok(point.widen(&spread).round(bits_for(eps) + 4))
}

/// `e^c` computed with roughly `w` bits of absolute precision after the
/// argument has been halved into `[-1, 1]` (plus a few extra halvings when
/// `w` is large, which trades series terms for squarings).
fn exp_point(c: &BigRational, w: i64, lim: &Limits) -> Result<Ball> {
    if c.is_zero() {
        return Ok(Ball::from_integer(1));
    }
    let mut k = ceil_log2(c).max(0);
    let extra_halvings = ((w.max(0) as u64).sqrt() as i64 / 4).min(24);
    k += extra_halvings;
    let w = w + k + 8;
    let x = c / pow2(k);
    let xr = if x.denom().bits() as i64 > w + 4 {
        Ball::exact(x).round(w + 4)
    } else {
        Ball::exact(x)
    };
    let series = exp_series(xr.center(), w, lim)?;
    // |d/dx e^x| <= e < 3 on [-1, 1]
    let mut y = series.widen(&(xr.radius() * int(3)));
    for _ in 0..k {
        y = y.mul(&y).round(w);
    }
    Ok(y)
}

/// Taylor series of `e^x` for `|x| <= 1` in fixed point with scale `2^w`.
fn exp_series(x: &BigRational, w: i64, lim: &Limits) -> Result<Ball> {
    debug_assert!(x.abs() <= int(1));
    let num = x.numer();
    let den = x.denom();
    let one = BigInt::one() << w as u64;
    let mut term = one.clone();
    let mut sum = one;
    let mut n: usize = 0;
    loop {
        n += 1;
        ensure_terms(n, lim, "exponential")?;
        term = div_trunc(&(&term * num), &(den * BigInt::from(n)));
        sum += &term;
        if term.is_zero() {
            break;
        }
    }
    // each term carries at most 2 ulps of truncation error; the tail after
    // term n is at most |x|^(n+1)/(n+1)! / (1 - |x|/(n+2)), under 2 ulps here
    let err_ulps = BigInt::from(2 * (n + 1) + 2);
    let scale = pow2(w);
    Ok(Ball::new(
        BigRational::from_integer(sum) / &scale,
        BigRational::from_integer(err_ulps) / scale,
    ))
}

/// Natural logarithm. Errors with `Domain` for non-positive arguments.
pub fn ln_ball(x: &Ball, eps: &BigRational, lim: &Limits) -> Result<Ball> {
    if x.upper() <= BigRational::zero() {
        return Err(Error::domain("logarithm of a non-positive number"));
    }
    if !x.lower().is_positive() {
        return Err(Error::Precision("logarithm argument not separated from zero".into()));
    }
    if x.is_exact() && x.center().is_one() {
        return Ok(Ball::from_integer(0));
    }
    let half = eps / int(2);
    let mut w = bits_for(&half) + 8;
    let mut point = ln_point(x.center(), w, lim)?;
    while point.radius() > &half {
        w += 8 + (ceil_log2(point.radius()) - floor_log2(&half)).max(0);
        point = ln_point(x.center(), w, lim)?;
    }
    if x.is_exact() {
        return Ok(point);
    }
    // |ln(c ± r) - ln c| <= r / (c - r)
    let spread = x.radius() / x.lower();
    Ok(point.widen(&spread).round(bits_for(eps) + 4))
}

/// `ln c = 2 atanh(b) + k ln 2` with `c = m 2^k`, `m` in `[1, 2)`,
/// `b = (m-1)/(m+1)`; `ln 2` itself is `2 atanh(1/3)`.
fn ln_point(c: &BigRational, w: i64, lim: &Limits) -> Result<Ball> {
    let k = floor_log2(c);
    let m = c / pow2(k);
    let mut acc = Ball::from_integer(0);
    if !m.is_one() {
        let b = (&m - int(1)) / (&m + int(1));
        let br = if b.denom().bits() as i64 > w + 4 {
            Ball::exact(b).round(w + 4)
        } else {
            Ball::exact(b)
        };
        let s = atanh_series(br.center(), w, lim)?;
        // d/db 2 atanh(b) = 2/(1-b^2) <= 9/4 for |b| <= 1/3
        acc = s.widen(&(br.radius() * ratio(9, 4)));
    }
    if k != 0 {
        let kb = BigInt::from(k);
        let guard = kb.bits() as i64 + 2;
        let ln2 = atanh_series(&ratio(1, 3), w + guard, lim)?;
        acc = acc.add(&ln2.scale(&BigRational::from_integer(kb)));
    }
    Ok(acc)
}

/// `2 atanh(b) = 2 Σ b^(2n+1)/(2n+1)` for `|b| <= 1/3`, fixed point `2^w`.
fn atanh_series(b: &BigRational, w: i64, lim: &Limits) -> Result<Ball> {
    debug_assert!(b.abs() < ratio(1, 2));
    let num = b.numer();
    let den = b.denom();
    let num2 = num * num;
    let den2 = den * den;
    let mut power = div_trunc(&((BigInt::one() << w as u64) * num), den);
    let mut sum = power.clone();
    let mut n: usize = 0;
    while !power.is_zero() {
        n += 1;
        ensure_terms(n, lim, "logarithm")?;
        power = div_trunc(&(&power * &num2), &den2);
        sum += div_trunc(&power, &BigInt::from(2 * n + 1));
    }
    // power error stays below 9/8 ulp, each term below 3 ulps; the tail
    // 2|b|^(2n+3)/((2n+3)(1-b^2)) is under one ulp once the power vanished
    let err_ulps = BigInt::from(2 * (3 * (n + 1) + 1));
    let scale = pow2(w);
    Ok(Ball::new(
        BigRational::from_integer(sum * 2) / &scale,
        BigRational::from_integer(err_ulps) / scale,
    ))
}

/// Magnitude class of `|a|^b` in bits, as an interval estimate.
fn log2_magnitude(a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
    let lo = BigRational::from_integer(BigInt::from(floor_log2(a)));
    let hi = BigRational::from_integer(BigInt::from(ceil_log2(a)));
    let (x, y) = (&lo * b, &hi * b);
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Exact `a^b` when the result is rational and representable.
/// `Ok(None)` means "not exactly representable; approximate instead".
pub fn exact_pow(a: &BigRational, b: &BigRational, lim: &Limits) -> Result<Option<BigRational>> {
    if b.is_zero() {
        if a.is_zero() {
            return Err(Error::domain("zero to the power zero"));
        }
        return Ok(Some(int(1)));
    }
    if a.is_zero() {
        return if b.is_positive() {
            Ok(Some(int(0)))
        } else {
            Err(Error::domain("zero to a non-positive power"))
        };
    }
    if a.is_one() || b.is_one() {
        return Ok(Some(a.clone()));
    }
    if a.is_negative() && !is_integer(b) {
        return Err(Error::domain("negative base needs an integer exponent"));
    }
    let (_, hi_bits) = log2_magnitude(a, b);
    if hi_bits > BigRational::from_integer(BigInt::from(lim.blowup_bits)) {
        let (lo_bits, _) = log2_magnitude(a, b);
        if lo_bits > BigRational::from_integer(BigInt::from(lim.blowup_bits)) {
            return Err(Error::Overflow {
                bits: lim.blowup_bits,
                context: "power".into(),
            });
        }
        return Ok(None);
    }
    let size_bits = |base: &BigRational, e: &BigInt| -> Option<u64> {
        let bits = base.numer().bits().max(base.denom().bits());
        e.magnitude().to_u64().and_then(|e| e.checked_mul(bits))
    };
    let (base, e) = if is_integer(b) {
        (a.clone(), b.numer().clone())
    } else {
        let q = match b.denom().to_u32() {
            Some(q) => q,
            None => return Ok(None),
        };
        let (Some(rn), Some(rd)) = (exact_root(&a.numer().abs(), q), exact_root(a.denom(), q)) else {
            return Ok(None);
        };
        (BigRational::new_raw(rn, rd), b.numer().clone())
    };
    match size_bits(&base, &e) {
        Some(s) if s <= lim.blowup_bits => {}
        _ => return Ok(None),
    }
    let e_abs = e.magnitude().to_u32().expect("bounded exponent");
    let p = num_traits::pow::Pow::pow(&base, e_abs);
    Ok(Some(if e.is_negative() { p.recip() } else { p }))
}

/// `a^b` for balls. Negative bases need an exact integer exponent.
pub fn pow_ball(a: &Ball, b: &Ball, eps: &BigRational, lim: &Limits) -> Result<Ball> {
    if let (Some(av), Some(bv)) = (a.exact_value(), b.exact_value()) {
        if let Some(v) = exact_pow(av, bv, lim)? {
            return Ok(Ball::exact(v));
        }
    }
    if let Some(bv) = b.exact_value() {
        if bv.is_zero() {
            return match a.sign() {
                Some(std::cmp::Ordering::Equal) => Err(Error::domain("zero to the power zero")),
                Some(_) => Ok(Ball::from_integer(1)),
                None => Err(Error::Precision("base not separated from zero".into())),
            };
        }
        if bv.is_one() {
            return Ok(a.clone());
        }
        if is_integer(bv) {
            if a.upper().is_negative() {
                let odd = bv.numer().is_odd_int();
                let p = pow_ball(&a.neg(), b, eps, lim)?;
                return Ok(if odd { p.neg() } else { p });
            }
            if let Some(n) = bv.numer().to_i64().filter(|n| n.abs() <= 64) {
                if !a.lower().is_positive() {
                    let p = a.powi(n.unsigned_abs());
                    return if n < 0 { Ball::from_integer(1).div(&p) } else { Ok(p) };
                }
            }
        }
    }
    if a.upper() <= BigRational::zero() {
        if a.is_exact() && a.center().is_zero() {
            return match b.sign() {
                Some(std::cmp::Ordering::Greater) => Ok(Ball::from_integer(0)),
                Some(_) => Err(Error::domain("zero to a non-positive power")),
                None => Err(Error::Precision("exponent sign undecided".into())),
            };
        }
        return Err(Error::domain("negative base needs an integer exponent"));
    }
    if !a.lower().is_positive() {
        return Err(Error::Precision("base not separated from zero".into()));
    }
    let coarse = ln_ball(a, &pow2(-16), lim)?;
    let y0 = b.mul(&coarse);
    let up = y0.upper();
    let mag_bits = if up.is_positive() {
        let bits = ceil(&(&up * log2e_up()));
        if bits > BigInt::from(lim.blowup_bits) {
            return Err(Error::Overflow {
                bits: lim.blowup_bits,
                context: "power".into(),
            });
        }
        bits.to_i64().unwrap_or(i64::MAX) + 1
    } else {
        1
    };
    let mut y_eps = eps / pow2(mag_bits + 3);
    for _ in 0..4 {
        let l_eps = &y_eps / (b.mag() + int(1)) / int(2);
        let l = ln_ball(a, &l_eps, lim)?;
        let y = b.mul(&l).round(bits_for(&y_eps) + 4);
        let out = exp_ball(&y, &(eps / int(2)), lim)?;
        if out.radius() <= eps || !(a.is_exact() && b.is_exact()) {
            return Ok(out);
        }
        y_eps /= pow2(16);
    }
    Err(Error::Precision("power failed to reach its target".into()))
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

/// `x` with `x^b = a`, i.e. `a^(1/b)`.
pub fn root_ball(a: &Ball, b: &Ball, eps: &BigRational, lim: &Limits) -> Result<Ball> {
    if b.is_exact() && b.center().is_zero() {
        return Err(Error::domain("root of order zero"));
    }
    if a.upper() <= BigRational::zero() {
        return Err(Error::domain("root of a non-positive number"));
    }
    let inv = Ball::from_integer(1).div(b)?;
    pow_ball(a, &inv, eps, lim)
}

/// Logarithm of `a` to base `b`.
pub fn log_ball(a: &Ball, b: &Ball, eps: &BigRational, lim: &Limits) -> Result<Ball> {
    if a.upper() <= BigRational::zero() || b.upper() <= BigRational::zero() {
        return Err(Error::domain("logarithm needs positive arguments"));
    }
    if b.is_exact() && b.center().is_one() {
        return Err(Error::domain("logarithm to base 1"));
    }
    if let (Some(av), Some(bv)) = (a.exact_value(), b.exact_value()) {
        if av.is_one() {
            return Ok(Ball::from_integer(0));
        }
        if same(av, bv) {
            return Ok(Ball::from_integer(1));
        }
        if let Some(k) = exact_integer_log(av, bv, lim) {
            return Ok(Ball::exact(int(k)));
        }
    }
    let mut lb_eps = pow2(-16);
    let lb = loop {
        let lb = ln_ball(b, &lb_eps, lim)?;
        if lb.mig().is_positive() {
            break lb;
        }
        if lb_eps < pow2(-4096) || !b.is_exact() {
            return Err(Error::Precision("logarithm base not separated from 1".into()));
        }
        lb_eps /= pow2(64);
    };
    let la0 = ln_ball(a, &pow2(-16), lim)?;
    let q_mag = la0.mag() / lb.mig() + int(1);
    let m = lb.mig();
    let la = ln_ball(a, &(eps * &m / int(4)), lim)?;
    let lb = ln_ball(b, &(eps * &m / (int(4) * q_mag)), lim)?;
    Ok(la.div(&lb)?.round(bits_for(eps) + 4))
}

/// `k` with `b^k = a` exactly, for small integer `k`.
fn exact_integer_log(a: &BigRational, b: &BigRational, lim: &Limits) -> Option<i64> {
    if !a.is_positive() || !b.is_positive() || b.is_one() {
        return None;
    }
    let est = BigRational::from_integer(BigInt::from(floor_log2(a)))
        / BigRational::from_integer(BigInt::from(floor_log2(b).max(ceil_log2(b)).max(1)));
    let guess = crate::rational::floor(&est).to_i64()?;
    for k in [guess - 1, guess, guess + 1, -guess - 1, -guess, -guess + 1] {
        if k == 0 || k.unsigned_abs() > 4096 {
            continue;
        }
        if let Ok(Some(v)) = exact_pow(b, &int(k), lim) {
            if same(&v, a) {
                return Some(k);
            }
        }
    }
    None
}
