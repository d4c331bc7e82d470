//! Whole-term evaluation with adaptive precision, digit rendering and
//! reduction traces.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::expansion::{certified_expansion, check_base, expand_rational, BasebExpansion};
use crate::hyper::{hyper, HyperConfig, HyperRequest};
use crate::rational::{ceil, ceil_log2, int, is_integer, low_op, pow2, BigRational};
use crate::syntax::{reduction_indices, render_with, Node, NodePath, Term, TraceEvent};

pub const DEFAULT_BASE: u32 = 10;
pub const DEFAULT_DIGITS: usize = 20;
pub const DEFAULT_GUARD: usize = 10;
pub const DEFAULT_MAX_DOUBLINGS: u32 = 8;

/// How many times one evaluation may tighten its working accuracy.
const MAX_TIGHTENINGS: usize = 16;

#[derive(Clone, Debug)]
pub struct NumericContext {
    pub base: u32,
    /// Fractional digits to emit.
    pub digits: usize,
    /// Extra digits of accuracy requested beyond `digits`.
    pub guard: usize,
    pub max_doublings: u32,
    pub hyper: HyperConfig,
}

impl Default for NumericContext {
    fn default() -> Self {
        NumericContext {
            base: DEFAULT_BASE,
            digits: DEFAULT_DIGITS,
            guard: DEFAULT_GUARD,
            max_doublings: DEFAULT_MAX_DOUBLINGS,
            hyper: HyperConfig::default(),
        }
    }
}

impl NumericContext {
    pub fn new(base: u32, digits: usize) -> Result<Self> {
        check_base(base)?;
        Ok(NumericContext {
            base,
            digits,
            ..NumericContext::default()
        })
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    /// `base^-(digits + guard)`.
    pub fn target(&self) -> BigRational {
        let p = num_traits::pow::Pow::pow(BigInt::from(self.base), (self.digits + self.guard) as u32);
        BigRational::new(BigInt::from(1), p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(BigRational),
    Approx(Ball),
}

impl Value {
    fn from_ball(b: Ball) -> Value {
        match b.exact_value() {
            Some(v) => Value::Exact(v.clone()),
            None => Value::Approx(b),
        }
    }

    pub fn ball(&self) -> Ball {
        match self {
            Value::Exact(v) => Ball::exact(v.clone()),
            Value::Approx(b) => b.clone(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Approx(_) => None,
        }
    }

    pub fn radius(&self) -> BigRational {
        match self {
            Value::Exact(_) => BigRational::zero(),
            Value::Approx(b) => b.radius().clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Value,
    pub trace: Option<Vec<TraceEvent>>,
}

/// Evaluate to within `ctx.target()`.
pub fn evaluate(term: &Term, ctx: &NumericContext) -> Result<EvalResult> {
    check_base(ctx.base)?;
    let values = evaluate_nodes(term, ctx, &ctx.target())?;
    Ok(EvalResult {
        value: values[term.root()].clone(),
        trace: None,
    })
}

/// Every node's value, the root within `eps`. Operations are applied in
/// node order, which resolves both operands before their parent.
fn evaluate_nodes(term: &Term, ctx: &NumericContext, eps: &BigRational) -> Result<Vec<Value>> {
    let paths = term.paths();
    let mut w = eps / int(4);
    for _ in 0..MAX_TIGHTENINGS {
        let values = pass(term, &paths, ctx, &w)?;
        let r = values[term.root()].radius();
        if &r <= eps {
            return Ok(values);
        }
        let over = r / eps;
        w /= pow2(ceil_log2(&over) + 4);
    }
    Err(Error::Precision(format!(
        "result did not reach accuracy {} after {MAX_TIGHTENINGS} tightenings",
        crate::rational::format_fraction(eps)
    )))
}

fn pass(term: &Term, paths: &[NodePath], ctx: &NumericContext, w: &BigRational) -> Result<Vec<Value>> {
    let mut values: Vec<Value> = Vec::with_capacity(term.node_count());
    for (i, node) in term.nodes().iter().enumerate() {
        let v = match *node {
            Node::One => Value::Exact(int(1)),
            Node::Op { op, left, right } => {
                apply(op, &values[left], &values[right], ctx, w).map_err(|e| e.at(&paths[i], op))?
            }
        };
        values.push(v);
    }
    Ok(values)
}

fn apply(op: crate::syntax::Operator, a: &Value, b: &Value, ctx: &NumericContext, w: &BigRational) -> Result<Value> {
    if op.rank() <= 2 {
        if let (Value::Exact(x), Value::Exact(y)) = (a, b) {
            return low_op(op, x, y).map(Value::Exact);
        }
    }
    let req = HyperRequest {
        rank: op.rank(),
        kind: op.kind().into(),
        a: a.ball(),
        b: b.ball(),
        target: w.clone(),
    };
    hyper(&req, &ctx.hyper).map(Value::from_ball)
}

/// Certified expansion of an evaluated value at `ctx` precision.
pub fn to_base_b(value: &Value, ctx: &NumericContext) -> Result<BasebExpansion> {
    match value {
        Value::Exact(x) => expand_rational(x, ctx.base, ctx.digits),
        Value::Approx(b) => {
            if b.radius() > &ctx.target() {
                return Err(Error::Precision(format!(
                    "radius {} exceeds the requested accuracy",
                    scientific(b.radius())
                )));
            }
            certified_expansion(&b.lower(), &b.upper(), ctx.base, ctx.digits)
        }
    }
}

/// Evaluate and render, doubling the guard digits whenever the digits
/// cannot be certified.
pub fn adaptive_render(term: &Term, ctx: &NumericContext) -> Result<BasebExpansion> {
    adaptive(term, ctx).map(|(_, e)| e)
}

fn adaptive(term: &Term, ctx: &NumericContext) -> Result<(Vec<Value>, BasebExpansion)> {
    check_base(ctx.base)?;
    let mut c = ctx.clone();
    let mut last = String::new();
    for _ in 0..=ctx.max_doublings {
        let values = evaluate_nodes(term, &c, &c.target());
        match values {
            Ok(values) => match to_base_b(&values[term.root()], &c) {
                Ok(e) => return Ok((values, e)),
                Err(e) if e.kind() == crate::error::ErrorKind::Precision => {
                    let root = &values[term.root()];
                    last = format!("{} ± {}", uncertified(root, &c), scientific(&root.radius()));
                }
                Err(e) => return Err(e),
            },
            Err(e) if e.kind() == crate::error::ErrorKind::Precision => last = e.to_string(),
            Err(e) => return Err(e),
        }
        c.guard = if c.guard == 0 { 1 } else { c.guard * 2 };
    }
    Err(Error::Precision(format!(
        "digits not certified after {} guard doublings (last: {last})",
        ctx.max_doublings
    )))
}

/// Best-effort digits of the center, for diagnostics and traces.
fn uncertified(v: &Value, ctx: &NumericContext) -> String {
    let c = v.ball().center().clone();
    expand_rational(&c, ctx.base, ctx.digits)
        .map(|e| e.to_string())
        .unwrap_or_default()
}

/// How an intermediate value appears in a trace: exact integers plainly,
/// everything else with `ctx.digits` fractional digits.
fn render_value(v: &Value, ctx: &NumericContext) -> String {
    match v {
        Value::Exact(x) if is_integer(x) => expand_rational(x, ctx.base, 0)
            .map(|e| e.to_string())
            .unwrap_or_default(),
        Value::Exact(x) => expand_rational(x, ctx.base, ctx.digits)
            .map(|e| e.to_string())
            .unwrap_or_default(),
        Value::Approx(b) => certified_expansion(&b.lower(), &b.upper(), ctx.base, ctx.digits)
            .map(|e| e.to_string())
            .unwrap_or_else(|_| uncertified(v, ctx)),
    }
}

/// One event per operation in reduction order. Each event's `after` is the
/// whole term with every computed operand substituted; the last one is the
/// certified result.
pub fn trace_reduce(term: &Term, ctx: &NumericContext) -> Result<Vec<TraceEvent>> {
    render_traced(term, ctx).map(|(r, _)| r.trace.unwrap_or_default())
}

/// Evaluate, render and trace in one pass.
pub fn render_traced(term: &Term, ctx: &NumericContext) -> Result<(EvalResult, BasebExpansion)> {
    let (values, expansion) = adaptive(term, ctx)?;
    let paths = term.paths();
    let root = term.root();
    let mut shown: Vec<Option<String>> = vec![None; term.node_count()];
    let mut before = term.to_string();
    let mut events = Vec::with_capacity(term.internal_count());
    for (step, i) in reduction_indices(term).into_iter().enumerate() {
        let after = if i == root {
            expansion.to_string()
        } else {
            shown[i] = Some(render_value(&values[i], ctx));
            render_with(term, |j| shown[j].clone())
        };
        events.push(TraceEvent {
            step: step + 1,
            path: paths[i].clone(),
            before: std::mem::replace(&mut before, after.clone()),
            after,
        });
    }
    let result = EvalResult {
        value: values[root].clone(),
        trace: Some(events),
    };
    Ok((result, expansion))
}

/// A short upward-rounded decimal rendering of a non-negative rational,
/// e.g. `"3.17e-31"`.
pub fn scientific(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    // estimate the decimal exponent from the binary one, then correct it
    let mut e = (crate::rational::floor_log2(r) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |k: i64| -> BigRational {
        let p = BigRational::from_integer(num_traits::pow::Pow::pow(BigInt::from(10), k.unsigned_abs() as u32));
        if k >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while r < &pow10(e) {
        e -= 1;
    }
    while r >= &pow10(e + 1) {
        e += 1;
    }
    let m = ceil(&(r / pow10(e - 2)));
    let (m, e) = if m >= BigInt::from(1000) {
        (ceil(&(r / pow10(e - 1))), e + 1)
    } else {
        (m, e)
    };
    let s = m.to_string();
    let mantissa = if s.len() > 1 {
        format!("{}.{}", &s[..1], &s[1..])
    } else {
        s
    };
    if e == 0 {
        mantissa
    } else {
        format!("{mantissa}e{e}")
    }
}
