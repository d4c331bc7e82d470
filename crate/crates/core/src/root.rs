//! Bracketed root finding over exact rational abscissae.
//!
//! The function is only ever known as a [`Ball`] at the requested accuracy,
//! so every probe resolves a sign adaptively. Interpolation and bisection are
//! carried out in exact rational arithmetic; probe points are snapped to the
//! simplest rational in a small window so that downstream evaluations stay
//! cheap.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::rational::{ceil, floor, int, pow2, same, BigRational};

/// A sign-changing interval. Signs are those of `f` at the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
    pub f_lo: Ordering,
    pub f_hi: Ordering,
}

impl Bracket {
    pub fn new(lo: BigRational, hi: BigRational, f_lo: Ordering, f_hi: Ordering) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("bracket has lo > hi"));
        }
        let opposite = matches!(
            (f_lo, f_hi),
            (Ordering::Less, Ordering::Greater) | (Ordering::Greater, Ordering::Less)
        );
        if !opposite && f_lo != Ordering::Equal && f_hi != Ordering::Equal {
            return Err(Error::domain("bracket endpoints do not change sign"));
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// How probe points are snapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeGrid {
    /// Within a relative `2^-20` of the candidate.
    Fine,
    /// Anywhere in the middle three quarters around the candidate; keeps
    /// probes very simple when they feed into rational heights.
    Coarse,
}

#[derive(Clone, Debug)]
pub struct RootConfig {
    pub tolerance: BigRational,
    pub max_iterations: usize,
    pub max_expansions: usize,
    /// How many times a probe may be re-evaluated more tightly before its
    /// sign is declared ambiguous.
    pub max_refinements: u32,
    pub grid: ProbeGrid,
}

impl RootConfig {
    /// Panics unless `tolerance > 0`.
    pub fn new(tolerance: BigRational) -> Self {
        assert!(tolerance.is_positive(), "tolerance must be positive");
        RootConfig {
            tolerance,
            max_iterations: 400,
            max_expansions: 64,
            max_refinements: 24,
            grid: ProbeGrid::Fine,
        }
    }

    pub fn with_grid(mut self, grid: ProbeGrid) -> Self {
        self.grid = grid;
        self
    }
}

/// One evaluation of the target function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Value(Ball),
    /// Certainly positive, without a usable value (e.g. past the blow-up cap).
    Above,
    /// Certainly negative.
    Below,
}

impl From<Ball> for Probe {
    fn from(b: Ball) -> Self {
        Probe::Value(b)
    }
}

impl Probe {
    fn sign(&self) -> Option<Ordering> {
        match self {
            Probe::Value(b) => b.sign(),
            Probe::Above => Some(Ordering::Greater),
            Probe::Below => Some(Ordering::Less),
        }
    }

    fn center(&self) -> Option<&BigRational> {
        match self {
            Probe::Value(b) => Some(b.center()),
            _ => None,
        }
    }
}

/// The rational with the smallest denominator in `[u, v]` (and among those,
/// the smallest magnitude), by continued-fraction descent.
pub fn simplest_between(u: &BigRational, v: &BigRational) -> BigRational {
    let (u, v) = if u <= v {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    };
    if !u.is_positive() && !v.is_negative() {
        return BigRational::zero();
    }
    if v.is_negative() {
        return -simplest_between(&-v, &-u);
    }
    let (mut u, mut v) = (u, v);
    let mut terms = Vec::new();
    loop {
        let c = BigRational::from_integer(ceil(&u));
        if c <= v {
            terms.push(c);
            break;
        }
        let f = BigRational::from_integer(floor(&u));
        let (nu, nv) = ((&v - &f).recip(), (&u - &f).recip());
        terms.push(f);
        u = nu;
        v = nv;
    }
    let mut x = terms.pop().expect("at least one term");
    while let Some(t) = terms.pop() {
        x = t + x.recip();
    }
    x
}

/// Brent-style root finding for a function that returns balls.
pub fn brent<F>(mut f: F, bracket: Bracket, cfg: &RootConfig) -> Result<Ball>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Ball>,
{
    brent_probes(|x, eps| f(x, eps).map(Probe::Value), bracket, cfg, |_| {})
}

/// As [`brent`], reporting the bracket after every iteration.
pub fn brent_observed<F, O>(mut f: F, bracket: Bracket, cfg: &RootConfig, observer: O) -> Result<Ball>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Ball>,
    O: FnMut(&Bracket),
{
    brent_probes(|x, eps| f(x, eps).map(Probe::Value), bracket, cfg, observer)
}

struct Sampler<F> {
    f: F,
    max_refinements: u32,
}

impl<F> Sampler<F>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Probe>,
{
    /// Evaluate at `x` starting from accuracy `eps`, tightening until the
    /// sign is known. `None` means the sign stayed ambiguous.
    fn resolve(&mut self, x: &BigRational, eps: &BigRational) -> Result<Option<(Ordering, Probe)>> {
        let mut eps = eps.clone();
        for _ in 0..=self.max_refinements {
            let p = (self.f)(x, &eps)?;
            if let Some(s) = p.sign() {
                return Ok(Some((s, p)));
            }
            let c = p.center().map(|c| c.abs()).unwrap_or_else(BigRational::zero);
            let next = &eps / int(4);
            eps = if c.is_positive() && &c / int(8) < next {
                c / int(8)
            } else {
                next
            };
        }
        Ok(None)
    }
}

/// The general driver: `f(x, eps)` returns a [`Probe`] whose ball radius
/// should not exceed `eps`.
pub fn brent_probes<F, O>(f: F, bracket: Bracket, cfg: &RootConfig, mut observer: O) -> Result<Ball>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Probe>,
    O: FnMut(&Bracket),
{
    let mut b = bracket;
    if b.f_lo == Ordering::Equal {
        return Ok(Ball::exact(b.lo));
    }
    if b.f_hi == Ordering::Equal {
        return Ok(Ball::exact(b.hi));
    }
    let mut sampler = Sampler {
        f,
        max_refinements: cfg.max_refinements,
    };
    let tol2 = &cfg.tolerance * int(2);
    let lo_sign = b.f_lo;
    // known function values at the endpoints and one older point, for
    // interpolation
    let mut f_lo: Option<BigRational> = None;
    let mut f_hi: Option<BigRational> = None;
    let mut older: Option<(BigRational, BigRational)> = None;
    let mut smallest_f: Option<BigRational> = None;
    let mut pair_width = b.width();
    let mut iteration = 0usize;
    loop {
        let width = b.width();
        if width <= tol2 {
            return Ok(Ball::from_bounds(b.lo, b.hi));
        }
        if iteration >= cfg.max_iterations {
            return Err(Error::Convergence(format!(
                "root not isolated after {} iterations",
                cfg.max_iterations
            )));
        }
        if iteration.is_multiple_of(2) {
            pair_width = width.clone();
        }
        let half_pair = &pair_width / int(2);
        let x = if iteration % 2 == 1 && width > half_pair {
            // second step of a pair that has not yet halved the bracket
            simplest_between(&(&b.hi - &half_pair), &(&b.lo + &half_pair))
        } else {
            let candidate = interpolate(&b, f_lo.as_ref(), f_hi.as_ref(), older.as_ref())
                .filter(|x| x > &b.lo && x < &b.hi)
                .unwrap_or_else(|| (&b.lo + &b.hi) / int(2));
            snap(&candidate, &b, cfg.grid)
        };
        iteration += 1;

        let mut eps = &width / int(16);
        if let Some(m) = &smallest_f {
            if m < &eps && m.is_positive() {
                eps = m / int(16);
            }
        }
        let resolved = match sampler.resolve(&x, &eps)? {
            Some(r) => r,
            None => return flank(&mut sampler, &x, &b, cfg, lo_sign),
        };
        let (sign, probe) = resolved;
        if sign == Ordering::Equal {
            return Ok(Ball::exact(x));
        }
        if let Some(c) = probe.center() {
            let a = c.abs();
            if a.is_positive() && smallest_f.as_ref().is_none_or(|m| &a < m) {
                smallest_f = Some(a);
            }
        }
        let value = probe.center().cloned();
        if sign == lo_sign {
            if let Some(v) = f_lo.take() {
                older = Some((b.lo.clone(), v));
            }
            b.lo = x;
            f_lo = value;
        } else {
            if let Some(v) = f_hi.take() {
                older = Some((b.hi.clone(), v));
            }
            b.hi = x;
            f_hi = value;
        }
        observer(&b);
    }
}

/// Inverse quadratic interpolation through three known points, or the
/// secant through the endpoints.
fn interpolate(
    b: &Bracket,
    f_lo: Option<&BigRational>,
    f_hi: Option<&BigRational>,
    older: Option<&(BigRational, BigRational)>,
) -> Option<BigRational> {
    let (fa, fb) = (f_lo?, f_hi?);
    if same(fa, fb) {
        return None;
    }
    if let Some((xc, fc)) = older {
        if !same(fc, fa) && !same(fc, fb) {
            let (xa, xb) = (&b.lo, &b.hi);
            let x = xa * fb * fc / ((fa - fb) * (fa - fc))
                + xb * fa * fc / ((fb - fa) * (fb - fc))
                + xc * fa * fb / ((fc - fa) * (fc - fb));
            if &x > xa && &x < xb {
                return Some(x);
            }
        }
    }
    Some(&b.lo - fa * (&b.hi - &b.lo) / (fb - fa))
}

fn snap(x: &BigRational, b: &Bracket, grid: ProbeGrid) -> BigRational {
    let width = b.width();
    match grid {
        ProbeGrid::Fine => {
            let d = (x - &b.lo).min(&b.hi - x);
            let h = d * pow2(-20);
            simplest_between(&(x - &h), &(x + &h))
        }
        ProbeGrid::Coarse => {
            let lo = (x - &width / int(4)).max(&b.lo + &width / int(8));
            let hi = (x + &width / int(4)).min(&b.hi - &width / int(8));
            if lo <= hi {
                simplest_between(&lo, &hi)
            } else {
                simplest_between(&(&b.lo + &width / int(8)), &(&b.hi - &width / int(8)))
            }
        }
    }
}

/// A probe whose sign never resolved: try to isolate the root around it.
fn flank<F>(sampler: &mut Sampler<F>, x: &BigRational, b: &Bracket, cfg: &RootConfig, lo_sign: Ordering) -> Result<Ball>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Probe>,
{
    let d = &cfg.tolerance / int(2);
    let left = simplest_between(&(x - &d).max(b.lo.clone()), &(x - &d / int(2)));
    let right = simplest_between(&(x + &d / int(2)), &(x + &d).min(b.hi.clone()));
    let eps = &d / int(16);
    let ambiguous = || Error::Ambiguity(format!("sign at {x} could not be resolved"));
    let ls = sampler.resolve(&left, &eps)?.ok_or_else(ambiguous)?.0;
    let rs = sampler.resolve(&right, &eps)?.ok_or_else(ambiguous)?.0;
    let hi_sign = lo_sign.reverse();
    let lo_end = if ls == Ordering::Equal {
        return Ok(Ball::exact(left));
    } else if ls == lo_sign {
        left
    } else {
        return Err(ambiguous());
    };
    let hi_end = if rs == Ordering::Equal {
        return Ok(Ball::exact(right));
    } else if rs == hi_sign {
        right
    } else {
        return Err(ambiguous());
    };
    Ok(Ball::from_bounds(lo_end, hi_end))
}

/// Find `[lower, m]` with `f(m) > target >= f(lower)` for increasing `f`,
/// doubling `m` from 1. `f(x, eps)` is evaluated to accuracy about `eps`.
pub fn expand_upper<F>(f: F, target: &BigRational, cfg: &RootConfig) -> Result<Bracket>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Probe>,
{
    let mut sampler = Sampler {
        f: shifted(f, target.clone()),
        max_refinements: cfg.max_refinements,
    };
    let eps = pow2(-16);
    let zero = BigRational::zero();
    let (mut lower, mut lower_sign) = match sampler.resolve(&zero, &eps)? {
        Some((Ordering::Greater, _)) => {
            return Err(Error::domain("target lies below f(0)"));
        }
        Some((s, _)) => (zero, s),
        None => {
            return Err(Error::Ambiguity("f(0) is indistinguishable from the target".into()));
        }
    };
    if lower_sign == Ordering::Equal {
        return Bracket::new(lower.clone(), lower, Ordering::Equal, Ordering::Equal);
    }
    let mut m = BigRational::one();
    for _ in 0..cfg.max_expansions {
        match sampler.resolve(&m, &eps)? {
            Some((Ordering::Greater, _)) => {
                return Bracket::new(lower, m, lower_sign, Ordering::Greater);
            }
            Some((Ordering::Equal, _)) => {
                return Bracket::new(m.clone(), m, Ordering::Equal, Ordering::Equal);
            }
            Some((Ordering::Less, _)) => {
                lower = m.clone();
                lower_sign = Ordering::Less;
            }
            // undecided here, so certainly below target at the previous
            // lower end and above it somewhere further out
            None => {}
        }
        m *= int(2);
    }
    Err(Error::Convergence(format!(
        "no upper bracket within {} doublings",
        cfg.max_expansions
    )))
}

fn shifted<F>(mut f: F, target: BigRational) -> impl FnMut(&BigRational, &BigRational) -> Result<Probe>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Probe>,
{
    move |x, eps| {
        Ok(match f(x, eps)? {
            Probe::Value(b) => Probe::Value(b.sub(&Ball::exact(target.clone()))),
            other => other,
        })
    }
}
