//! Ranked operations at every level, with the tower ranks (4 and up) built
//! from the rank below.
//!
//! For rank `r >= 4` and height `b`:
//!
//! * `forward(r, a, 0) = 1`, `forward(r, a, 1) = a`, and an integer height
//!   `n` unrolls into `n - 1` applications of rank `r - 1`.
//! * A height `n + p/q` first computes the fractional tower
//!   `x = inverse_minus(r, forward(r, a, p), q)`, i.e. the `x` whose height-`q`
//!   tower equals the height-`p` tower of `a`, then applies `n` more levels.
//! * `inverse_minus(r, a, b)` is the base `x` with `forward(r, x, b) = a`,
//!   found by root finding on `[1, a]`.
//! * `inverse_slash(r, a, b)` is the height `x` with `forward(r, b, x) = a`.
//!
//! Fractional heights need the height-`p` tower of the base as an
//! intermediate, which leaves representable range quickly; such failures
//! surface as resource errors rather than wrong answers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::farey;
use crate::rational::{ceil_log2, floor, int, is_integer, pow2, same, BigRational};
use crate::root::{brent_probes, expand_upper, simplest_between, Bracket, Probe, ProbeGrid, RootConfig};
use crate::series::{log_ball, pow_ball, root_ball, Limits};
use crate::syntax::OpKind;

/// Largest integer height unrolled step by step.
pub const MAX_UNROLL: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HyperKind {
    /// `+` runs.
    Forward,
    /// `-` runs: super-roots.
    InverseMinus,
    /// `/` runs: super-logarithms.
    InverseSlash,
}

impl From<OpKind> for HyperKind {
    fn from(k: OpKind) -> Self {
        match k {
            OpKind::Plus => HyperKind::Forward,
            OpKind::Minus => HyperKind::InverseMinus,
            OpKind::Slash => HyperKind::InverseSlash,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperRequest {
    pub rank: u32,
    pub kind: HyperKind,
    pub a: Ball,
    pub b: Ball,
    pub target: BigRational,
}

#[derive(Clone, Debug)]
pub struct HyperConfig {
    pub limits: Limits,
    pub max_iterations: usize,
    pub max_expansions: usize,
    pub max_refinements: u32,
    /// Fractional heights with larger denominators are refused.
    pub max_height_denominator: u64,
    /// Cross-check every fractional split against the mediant table.
    pub verify_split: bool,
    /// While probing for a root, the outer levels of a tower only need to
    /// show they exceed the target, so they use this smaller cap.
    probe_cap_bits: Option<u64>,
}

impl Default for HyperConfig {
    fn default() -> Self {
        HyperConfig {
            limits: Limits::default(),
            max_iterations: 400,
            max_expansions: 64,
            max_refinements: 24,
            max_height_denominator: 1024,
            verify_split: false,
            probe_cap_bits: None,
        }
    }
}

impl HyperConfig {
    /// Settings for probing against a target no larger than `bound`.
    fn probing(&self, bound: &BigRational) -> HyperConfig {
        let bits = ceil_log2(&bound.abs().max(int(2))).max(0) as u64 + 64;
        HyperConfig {
            probe_cap_bits: Some(bits.min(self.limits.blowup_bits)),
            ..self.clone()
        }
    }

    fn unprobed(&self) -> HyperConfig {
        HyperConfig {
            probe_cap_bits: None,
            ..self.clone()
        }
    }

    fn outer(&self) -> HyperConfig {
        let mut c = self.clone();
        if let Some(bits) = self.probe_cap_bits {
            c.limits.blowup_bits = bits;
        }
        c
    }

    fn root_config(&self, tolerance: BigRational, grid: ProbeGrid) -> RootConfig {
        let mut c = RootConfig::new(tolerance).with_grid(grid);
        c.max_iterations = self.max_iterations;
        c.max_expansions = self.max_expansions;
        c.max_refinements = self.max_refinements;
        c
    }
}

/// Evaluate one request at any rank.
pub fn hyper(req: &HyperRequest, cfg: &HyperConfig) -> Result<Ball> {
    if req.rank == 0 {
        return Err(Error::domain("rank must be at least 1"));
    }
    if !req.target.is_positive() {
        return Err(Error::domain("precision target must be positive"));
    }
    let (a, b, eps) = (&req.a, &req.b, &req.target);
    match (req.rank, req.kind) {
        (1, HyperKind::Forward) => Ok(a.add(b)),
        (1, _) => Ok(a.sub(b)),
        (2, HyperKind::Forward) => Ok(a.mul(b)),
        (2, _) => a.div(b),
        (3, HyperKind::Forward) => pow_ball(a, b, eps, &cfg.limits),
        (3, HyperKind::InverseMinus) => root_ball(a, b, eps, &cfg.limits),
        (3, HyperKind::InverseSlash) => log_ball(a, b, eps, &cfg.limits),
        (r, HyperKind::Forward) => hyper_forward(r, a, exact_height(b)?, eps, cfg),
        (r, HyperKind::InverseMinus) => hyper_inverse_minus(r, a, exact_height(b)?, eps, cfg),
        (r, HyperKind::InverseSlash) => hyper_inverse_slash(r, a, b, eps, cfg),
    }
}

fn exact_height(b: &Ball) -> Result<&BigRational> {
    b.exact_value()
        .ok_or_else(|| Error::Resource("an inexact height above rank 3 cannot be split into a fraction".into()))
}

/// Rerun `f` at tighter working accuracy until its radius is within `eps`,
/// or until tightening stops helping (the inputs' own radius dominates).
fn refine<F>(eps: &BigRational, mut f: F) -> Result<Ball>
where
    F: FnMut(&BigRational) -> Result<Ball>,
{
    let mut w = eps / int(4);
    let mut last = f(&w)?;
    for _ in 0..8 {
        if last.radius() <= eps {
            break;
        }
        let over = last.radius() / eps;
        w /= pow2(ceil_log2(&over) + 4);
        let next = f(&w)?;
        let stalled = next.radius() * int(2) > *last.radius();
        last = next;
        if stalled {
            break;
        }
    }
    Ok(last)
}

fn check_base(a: &Ball, what: &str) -> Result<Option<Ball>> {
    if a.upper() < int(1) {
        return Err(Error::domain(format!("{what} needs a base of at least 1")));
    }
    if a.is_exact() && a.center().is_one() {
        return Ok(Some(Ball::from_integer(1)));
    }
    if a.lower() < int(1) {
        return Err(Error::Precision(format!("{what} base not separated from 1")));
    }
    Ok(None)
}

/// `forward(r, a, b)`; ranks below 4 fall through to the series kernels.
pub fn hyper_forward(rank: u32, a: &Ball, b: &BigRational, eps: &BigRational, cfg: &HyperConfig) -> Result<Ball> {
    if rank <= 3 {
        let req = HyperRequest {
            rank,
            kind: HyperKind::Forward,
            a: a.clone(),
            b: Ball::exact(b.clone()),
            target: eps.clone(),
        };
        return hyper(&req, cfg);
    }
    if b.is_negative() {
        return Err(Error::domain("negative heights are not defined above rank 3"));
    }
    if b.is_zero() {
        return Ok(Ball::from_integer(1));
    }
    if let Some(one) = check_base(a, "tower")? {
        return Ok(one);
    }
    if b.is_one() {
        return Ok(a.clone());
    }
    let n = floor(b);
    let frac = b - BigRational::from_integer(n.clone());
    let n = n
        .to_u64()
        .filter(|&n| n <= MAX_UNROLL)
        .ok_or_else(|| Error::Resource(format!("height {b} is too large to unroll")))?;
    let steps = if frac.is_zero() { n - 1 } else { n };
    let outer = cfg.outer();
    refine(eps, |w| {
        let mut v = if frac.is_zero() {
            a.clone()
        } else {
            fractional_tower(rank, a, &frac, w, &cfg.unprobed())?
        };
        for _ in 0..steps {
            v = step_down(rank - 1, a, &v, w, &outer)?;
        }
        Ok(v)
    })
}

/// `forward(rank, a, v)` where `v` is a computed height.
fn step_down(rank: u32, a: &Ball, v: &Ball, eps: &BigRational, cfg: &HyperConfig) -> Result<Ball> {
    if rank == 3 {
        return pow_ball(a, v, eps, &cfg.limits);
    }
    hyper_forward(rank, a, exact_height(v)?, eps, cfg)
}

/// `forward(rank, a, p/q)` for `0 < p/q < 1`.
fn fractional_tower(rank: u32, a: &Ball, frac: &BigRational, eps: &BigRational, cfg: &HyperConfig) -> Result<Ball> {
    let (p, q) = (frac.numer(), frac.denom());
    if q > &BigInt::from(cfg.max_height_denominator) {
        return Err(Error::Resource(format!(
            "fractional height {frac} is finer than 1/{}",
            cfg.max_height_denominator
        )));
    }
    if cfg.verify_split {
        let (pu, qu) = (p.to_u64(), q.to_u64());
        if let (Some(pu), Some(qu)) = (pu, qu) {
            farey::locate(pu, qu)?;
        }
    }
    let p = BigRational::from_integer(p.clone());
    let q = BigRational::from_integer(q.clone());
    refine(eps, |w| {
        let top = hyper_forward(rank, a, &p, &(w / int(4)), cfg).map_err(|e| {
            if e.is_overflow() {
                Error::Resource(format!(
                    "fractional height {frac} needs a height-{p} tower beyond the blow-up cap"
                ))
            } else {
                e
            }
        })?;
        hyper_inverse_minus(rank, &top, &q, w, cfg)
    })
}

/// The base `x` with `forward(r, x, b) = a`.
pub fn hyper_inverse_minus(rank: u32, a: &Ball, b: &BigRational, eps: &BigRational, cfg: &HyperConfig) -> Result<Ball> {
    if rank <= 3 {
        let req = HyperRequest {
            rank,
            kind: HyperKind::InverseMinus,
            a: a.clone(),
            b: Ball::exact(b.clone()),
            target: eps.clone(),
        };
        return hyper(&req, cfg);
    }
    if !b.is_positive() {
        return Err(Error::domain("super-root needs a positive height"));
    }
    if let Some(one) = check_base(a, "super-root")? {
        return Ok(one);
    }
    if b.is_one() {
        return Ok(a.clone());
    }
    if b < &int(1) && !is_integer(b) {
        // forward(x, p/q) = a  <=>  forward(x, p) = forward(a, q)
        let p = BigRational::from_integer(b.numer().clone());
        let q = BigRational::from_integer(b.denom().clone());
        return refine(eps, |w| {
            let lifted = hyper_forward(rank, a, &q, &(w / int(4)), cfg)?;
            hyper_inverse_minus(rank, &lifted, &p, w, cfg)
        });
    }
    let grid = if rank >= 5 { ProbeGrid::Coarse } else { ProbeGrid::Fine };
    let pc = cfg.probing(&a.upper());
    let f = |x: &BigRational, e: &BigRational| hyper_forward(rank, &Ball::exact(x.clone()), b, e, &pc);
    let mut hi = a.center().clone();
    if b >= &int(2) {
        // x^x >= 2^x once x >= 2, and every tower of height 2 or more
        // dominates x^x
        let k = int(ceil_log2(&hi).max(1) + 1);
        if k < hi {
            hi = k;
        }
    }
    let bracket = Bracket::new(int(1), hi, Ordering::Less, Ordering::Greater)?;
    solve_increasing(f, bracket, a, eps, grid, cfg)
}

/// The height `x` with `forward(r, b, x) = a`.
pub fn hyper_inverse_slash(rank: u32, a: &Ball, b: &Ball, eps: &BigRational, cfg: &HyperConfig) -> Result<Ball> {
    if rank <= 3 {
        let req = HyperRequest {
            rank,
            kind: HyperKind::InverseSlash,
            a: a.clone(),
            b: b.clone(),
            target: eps.clone(),
        };
        return hyper(&req, cfg);
    }
    if a.upper() <= int(1) {
        return Err(Error::domain("super-logarithm needs an argument above 1"));
    }
    if b.upper() <= int(1) {
        return Err(Error::domain("super-logarithm needs a base above 1"));
    }
    if a.lower() <= int(1) || b.lower() <= int(1) {
        return Err(Error::Precision(
            "super-logarithm arguments not separated from 1".into(),
        ));
    }
    if a.is_exact() && b.is_exact() && same(a.center(), b.center()) {
        return Ok(Ball::from_integer(1));
    }
    let pc = cfg.probing(&a.upper());
    let f = |h: &BigRational, e: &BigRational| hyper_forward(rank, b, h, e, &pc);
    let bracket = {
        let rc = cfg.root_config(eps / int(4), ProbeGrid::Coarse);
        expand_upper(as_probe(f), a.center(), &rc)?
    };
    solve_increasing(f, bracket, a, eps, ProbeGrid::Coarse, cfg)
}

/// Blow-ups of an increasing function read as "above the target".
fn as_probe<F>(mut f: F) -> impl FnMut(&BigRational, &BigRational) -> Result<Probe>
where
    F: FnMut(&BigRational, &BigRational) -> Result<Ball>,
{
    move |x, e| match f(x, e) {
        Ok(v) => Ok(Probe::Value(v)),
        Err(err) if err.is_overflow() => Ok(Probe::Above),
        Err(err) => Err(err),
    }
}

/// Solve `f(x) = a` for increasing `f` inside `bracket`, where `a` may carry
/// its own radius. The root is found against the center of `a`, then widened
/// until both flanks are certified against the whole ball.
fn solve_increasing<F>(
    f: F,
    bracket: Bracket,
    a: &Ball,
    eps: &BigRational,
    grid: ProbeGrid,
    cfg: &HyperConfig,
) -> Result<Ball>
where
    F: Fn(&BigRational, &BigRational) -> Result<Ball> + Copy,
{
    let tol = eps / int(4);
    let mut rc = cfg.root_config(tol.clone(), grid);
    // the pair rule halves the bracket every two steps
    if bracket.width().is_positive() {
        let needed = 2 * ceil_log2(&(bracket.width() / &tol)).max(0) as usize + 16;
        rc.max_iterations = rc.max_iterations.max(needed);
    }
    let center = Ball::exact(a.center().clone());
    let mut shifted = as_probe(f);
    let g = |x: &BigRational, e: &BigRational| {
        Ok(match shifted(x, e)? {
            Probe::Value(v) => Probe::Value(v.sub(&center)),
            other => other,
        })
    };
    let r = brent_probes(g, bracket.clone(), &rc, |_| {})?;
    if a.is_exact() {
        return Ok(simplify(f, r, a.center()));
    }
    let mut delta = (a.radius() + &tol) * int(2);
    let e = (a.radius() + &tol) / int(4);
    for _ in 0..16 {
        let lo = r.lower() - &delta;
        let hi = r.upper() + &delta;
        let left = if lo <= bracket.lo {
            let below = bracket.f_lo == Ordering::Less && matches!(f(&bracket.lo, &e), Ok(v) if v.upper() < a.lower());
            below.then(|| bracket.lo.clone())
        } else {
            let x = simplest_between(&lo, &(r.lower() - &delta / int(2)));
            match f(&x, &e) {
                Ok(v) if v.upper() < a.lower() => Some(x),
                Ok(_) => None,
                Err(err) if err.is_overflow() => None,
                Err(err) => return Err(err),
            }
        };
        let right = {
            let x = simplest_between(&(r.upper() + &delta / int(2)), &hi);
            match f(&x, &e) {
                Ok(v) if v.lower() > a.upper() => Some(x),
                Ok(_) => None,
                Err(err) if err.is_overflow() => Some(x),
                Err(err) => return Err(err),
            }
        };
        if let (Some(l), Some(h)) = (left, right) {
            return Ok(Ball::from_bounds(l, h));
        }
        delta *= int(4);
    }
    Err(Error::Precision(
        "inverse could not be certified against its argument's radius".into(),
    ))
}

/// Replace an enclosure by the simple rational inside it when that rational
/// solves the equation exactly.
fn simplify<F>(f: F, r: Ball, target: &BigRational) -> Ball
where
    F: Fn(&BigRational, &BigRational) -> Result<Ball>,
{
    if r.is_exact() {
        return r;
    }
    let s = simplest_between(&r.lower(), &r.upper());
    if s.numer().bits() > 64 || s.denom().bits() > 64 {
        return r;
    }
    match f(&s, &pow2(-64)) {
        Ok(v) if v.exact_value().is_some_and(|v| same(v, target)) => Ball::exact(s),
        _ => r,
    }
}

/// Exact integer towers, for tests and quick checks: `forward(r, a, n)`
/// when every intermediate stays an integer of at most `max_bits` bits.
pub fn exact_integer_tower(rank: u32, a: &BigInt, n: u64, max_bits: u64) -> Option<BigInt> {
    if rank < 3 || a.is_negative() {
        return None;
    }
    if n == 0 {
        return Some(BigInt::one());
    }
    if rank == 3 {
        if n.checked_mul(a.bits())? > max_bits {
            return None;
        }
        return Some(num_traits::pow::Pow::pow(a, n));
    }
    let mut v = a.clone();
    for _ in 1..n {
        v = exact_integer_tower(rank - 1, a, v.to_u64()?, max_bits)?;
    }
    Some(v)
}
