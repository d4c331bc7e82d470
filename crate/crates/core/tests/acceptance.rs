//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opax::eval::{adaptive_render, trace_reduce, NumericContext};
use opax::expansion::expand_rational;
use opax::farey::{farey_row, locate, FareyEntry};
use opax::hyper::{hyper_forward, hyper_inverse_minus, hyper_inverse_slash, HyperConfig};
use opax::series::{exp_e, ln_e, SeriesConfig};
use opax::syntax::{render, Style};
use opax::{parse, Ball, OpKind, Operator, Term};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow10(k: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
}

fn eps10(k: u32) -> BigRational {
    pow10(k).recip()
}

fn f64_of(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

// ---------------------------------------------------------------- oracles

/// Random term of depth at most `depth`.
fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::one();
    }
    let kind = [OpKind::Plus, OpKind::Minus, OpKind::Slash][rng.gen_range(0..3)];
    let op = Operator::new(kind, rng.gen_range(1..=7));
    let l = random_term(rng, depth - 1);
    let r = random_term(rng, depth - 1);
    Term::node(op, l, r)
}

/// `sum_{k<=n} 1/k!` with the tail bound `2/(n+1)!`.
fn exp1_partial_sum(n: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..=n {
        if k > 0 {
            term /= BigRational::from_integer(k.into());
        }
        sum += &term;
    }
    let tail = term * q(2, i64::from(n) + 1);
    (sum, tail)
}

/// `ln 2 = sum_{k>=1} 1/(k 2^k)` with the tail bound `2^-n`.
fn ln2_partial_sum(n: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    for k in 1..=n {
        sum += BigRational::new(1.into(), BigInt::from(k) << k as usize);
    }
    (sum, BigRational::new(1.into(), BigInt::one() << n as usize))
}

/// Bisection for the root of an increasing `f` on `[lo, hi]`.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn tower(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, _| x.powf(acc))
}

/// Digits by scaling and integer division.
fn long_division(x: &BigRational, base: u32, n: usize) -> String {
    let scale = num_traits::pow(BigInt::from(base), n);
    let scaled = (x.numer().abs() * scale) / x.denom();
    let mut s = scaled.to_str_radix(base).to_uppercase();
    if s.len() <= n {
        s = format!("{}{}", "0".repeat(n + 1 - s.len()), s);
    }
    let (i, f) = s.split_at(s.len() - n);
    let body = if n == 0 { i.to_string() } else { format!("{i}.{f}") };
    if x.is_negative() && !scaled.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// Consecutive entries `j` and `j+1` of row `k`, built by halving positions.
fn row_pair(k: u64, j: u64) -> (FareyEntry, FareyEntry) {
    let med = |a: FareyEntry, b: FareyEntry| FareyEntry::new(a.top + b.top, a.bottom + b.bottom);
    if k == 1 {
        return (FareyEntry::new(0, 1), FareyEntry::new(1, 1));
    }
    if j % 2 == 1 {
        let (a, b) = row_pair(k - 1, j.div_ceil(2));
        (a, med(a, b))
    } else {
        let (a, b) = row_pair(k - 1, j / 2);
        (med(a, b), b)
    }
}

fn row_entry(k: u64, l: u64) -> FareyEntry {
    if l == 1 {
        row_pair(k, 1).0
    } else {
        row_pair(k, l - 1).1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------- criteria

fn parser_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..10_000 {
        let t = random_term(&mut rng, 12);
        assert!(t.depth() <= 12);
        let text = render(&t, Style::Canonical);
        assert_eq!(parse(&text).unwrap(), t, "term {i}: {text}");
    }
}

fn trace_reproduction() {
    let t = parse("[[1+[1+1]]----[1+1]]").unwrap();
    let ctx = NumericContext::new(10, 10).unwrap();
    let events = trace_reduce(&t, &ctx).unwrap();
    let chain: Vec<&str> = events.iter().map(|e| e.after.as_str()).collect();
    assert_eq!(chain[..3], ["[[1+2]----[1+1]]", "[3----[1+1]]", "[3----2]"]);
    assert_eq!(chain.len(), 4);
    let oracle = bisect(1.0, 2.0, |x| x.powf(x) - 3.0);
    let digits = format!("{:.12}", oracle);
    assert_eq!(chain[3], &digits[..12], "oracle {oracle}");
}

fn middle_ops() {
    let target = eps10(40);
    let cfg = SeriesConfig::new(target.clone());

    let (e, e_err) = exp1_partial_sum(60);
    let got = exp_e(&BigRational::one(), &cfg).unwrap();
    assert!(got.radius() <= &target);
    assert!((got.center() - &e).abs() <= &target + &e_err, "exp(1)");

    let (l2, l2_err) = ln2_partial_sum(200);
    let got = ln_e(&q(2, 1), &cfg).unwrap();
    assert!(got.radius() <= &target);
    assert!((got.center() - &l2).abs() <= &target + &l2_err, "ln(2)");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = SeriesConfig::new(eps10(30));
    for _ in 0..200 {
        let a = q(rng.gen_range(-10_000..=10_000), 1000);
        let ea = exp_e(&a, &cfg).unwrap();
        let back = opax::series::ln_ball(&ea, &eps10(30), &Default::default()).unwrap();
        assert!(back.contains(&a), "ln(exp({a})) = {back}");
    }
}

fn farey_table() {
    let mut prev: Vec<FareyEntry> = Vec::new();
    for k in 1..=12u64 {
        let row = farey_row(k).unwrap();
        assert_eq!(row.len() as u64, (1 << (k - 1)) + 1);
        for w in row.windows(2) {
            assert!(
                w[0].top * w[1].bottom < w[1].top * w[0].bottom,
                "row {k} not increasing"
            );
        }
        assert!(row.iter().all(|e| gcd(e.top, e.bottom) == 1));
        if k > 1 {
            let odd: Vec<FareyEntry> = row.iter().step_by(2).copied().collect();
            assert_eq!(odd, prev, "row {k}");
        }
        prev = row;
    }

    // first occurrence of every entry of row 20, by scanning it once
    const SCAN: u64 = 20;
    let row = farey_row(SCAN).unwrap();
    let mut scanned: HashMap<(u64, u64), (u64, u64)> = HashMap::new();
    for (i, e) in row.iter().enumerate() {
        let offset = i as u64;
        let k = if offset == 0 {
            1
        } else {
            SCAN - u64::from(offset.trailing_zeros()).min(SCAN - 1)
        };
        let l = offset / (1 << (SCAN - k)) + 1;
        scanned.insert((e.top, e.bottom), (k, l));
    }
    for qd in 1..=64u64 {
        for p in 0..=qd {
            if gcd(p, qd) != 1 {
                continue;
            }
            let idx = locate(p, qd).unwrap();
            match scanned.get(&(p, qd)) {
                Some(&(k, l)) => assert_eq!((idx.k, idx.l), (k, l), "{p}/{qd}"),
                None => {
                    // deeper than the scanned row: the entry must sit there
                    // and be new in that row
                    assert!(idx.k > SCAN, "{p}/{qd}");
                    assert_eq!(row_entry(idx.k, idx.l), FareyEntry::new(p, qd));
                    assert_eq!(idx.l % 2, 0);
                }
            }
        }
    }
}

fn identity_suite() {
    let cfg = HyperConfig::default();
    let eps = eps10(12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = BigRational::one();
    for _ in 0..100 {
        let a = BigRational::one() + q(rng.gen_range(1..=400), rng.gen_range(1..=97));
        let b = q(rng.gen_range(0..=12), rng.gen_range(1..=4));
        let ab = Ball::exact(a.clone());
        for r in 4..=6 {
            let exact = |x: opax::Result<Ball>| x.unwrap().exact_value().cloned();
            assert_eq!(
                exact(hyper_forward(r, &ab, &BigRational::zero(), &eps, &cfg)),
                Some(one.clone())
            );
            assert_eq!(exact(hyper_forward(r, &ab, &one, &eps, &cfg)), Some(a.clone()));
            assert_eq!(
                exact(hyper_forward(r, &Ball::exact(one.clone()), &b, &eps, &cfg)),
                Some(one.clone())
            );
            assert_eq!(exact(hyper_inverse_minus(r, &ab, &one, &eps, &cfg)), Some(a.clone()));
        }
    }
}

fn oracle_values() {
    let cfg = HyperConfig::default();
    let eps = eps10(10);
    let int = |n: i64| BigRational::from_integer(n.into());
    let check = |b: Ball, v: i64| {
        assert!(b.contains(&int(v)), "{b} should contain {v}");
        assert!(b.radius() <= &eps);
    };
    check(
        hyper_forward(4, &Ball::from_integer(2), &int(3), &eps, &cfg).unwrap(),
        16,
    );
    check(
        hyper_forward(5, &Ball::from_integer(2), &int(3), &eps, &cfg).unwrap(),
        65536,
    );
    check(
        hyper_inverse_slash(4, &Ball::from_integer(16), &Ball::from_integer(2), &eps, &cfg).unwrap(),
        3,
    );
    check(
        hyper_inverse_minus(4, &Ball::from_integer(16), &int(3), &eps, &cfg).unwrap(),
        2,
    );
}

fn rational_heights() {
    let cfg = HyperConfig::default();
    let eps = eps10(8);
    for a in [q(3, 2), q(2, 1), q(3, 1)] {
        for (p, qq) in [(1i64, 2i64), (1, 3), (2, 3), (3, 4)] {
            let x = hyper_forward(4, &Ball::exact(a.clone()), &q(p, qq), &eps, &cfg).unwrap();
            assert!(x.radius() <= &eps);
            let af = f64_of(&a);
            let target = tower(af, p as u32);
            let direct = bisect(1.0, af.max(2.0), |t| tower(t, qq as u32) - target);
            let slack = 1e-10 * direct.abs().max(1.0);
            assert!(
                (f64_of(x.center()) - direct).abs() <= f64_of(x.radius()) + slack,
                "a = {a}, height {p}/{qq}: {x} vs {direct}"
            );
        }
    }
}

fn monotonicity() {
    let cfg = HyperConfig::default();
    let eps = eps10(15);
    let heights = [q(1, 3), q(1, 2), q(2, 3), q(3, 4), q(1, 1), q(3, 2), q(2, 1), q(3, 1)];
    let mut memo: HashMap<(i64, usize), Ball> = HashMap::new();
    let mut value = |ai: i64, bi: usize| -> Ball {
        memo.entry((ai, bi))
            .or_insert_with(|| {
                hyper_forward(4, &Ball::exact(q(16 + ai, 16)), &heights[bi], &eps, &cfg)
                    .unwrap_or_else(|e| panic!("forward(4, {}, {}): {e}", q(16 + ai, 16), heights[bi]))
            })
            .clone()
    };
    let separated = |lo: &Ball, hi: &Ball| {
        let r = lo.radius().max(hi.radius()).clone();
        hi.center() - lo.center() > r * q(4, 1)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        // base pairs a1 < a2 in (1, 4] at a shared height
        let (mut x, mut y) = (rng.gen_range(1..=48), rng.gen_range(1..=48));
        while x == y {
            y = rng.gen_range(1..=48);
        }
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        let b = rng.gen_range(0..heights.len());
        assert!(
            separated(&value(x, b), &value(y, b)),
            "a order at height {}",
            heights[b]
        );
    }
    for _ in 0..500 {
        let (mut x, mut y) = (rng.gen_range(0..heights.len()), rng.gen_range(0..heights.len()));
        while x == y {
            y = rng.gen_range(0..heights.len());
        }
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        let a = rng.gen_range(1..=48);
        assert!(
            separated(&value(a, x), &value(a, y)),
            "height order at base {}",
            q(16 + a, 16)
        );
    }
}

fn base_b_rendering() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let x = q(
            rng.gen_range(-1_000_000_000..=1_000_000_000),
            rng.gen_range(1..=1_000_000),
        );
        let n = rng.gen_range(0..=30);
        for base in [2u32, 10, 16] {
            let e = expand_rational(&x, base, n).unwrap();
            assert_eq!(e.to_string(), long_division(&x, base, n), "{x} base {base}");
            let ulp = BigRational::from_integer(num_traits::pow(BigInt::from(base), n)).recip();
            assert!((&x - e.to_rational()).abs() < ulp);
        }
    }
}

fn adaptive_prefixes() {
    let t = parse("[[[1+[1+1]]--[1+1]]++++[1--[1+1]]]").unwrap();
    let mut prev = String::new();
    for n in [10, 20, 30] {
        let s = adaptive_render(&t, &NumericContext::new(10, n).unwrap())
            .unwrap()
            .to_string();
        assert!(s.len() > prev.len() && s.starts_with(&prev), "{prev} then {s}");
        prev = s;
    }
    // x^x = 3/2 has its root near 1.3
    let oracle = bisect(1.0, 1.5, |x| x.powf(x) - 1.5);
    assert!((prev[..12].parse::<f64>().unwrap() - oracle).abs() < 1e-10);
}

fn main() {
    type Criterion = (&'static str, fn(), u64);
    let criteria: [Criterion; 10] = [
        ("parser round-trip", parser_round_trip, 10),
        ("reduction trace reproduction", trace_reproduction, 1),
        ("middle-op accuracy", middle_ops, 30),
        ("farey table", farey_table, 5),
        ("hyperop identity suite", identity_suite, 60),
        ("hyperop oracle values", oracle_values, 10),
        ("rational-height consistency", rational_heights, 60),
        ("monotonicity sampling", monotonicity, 60),
        ("base-b rendering", base_b_rendering, 10),
        ("adaptive precision", adaptive_prefixes, 30),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed();
        let within = took <= Duration::from_secs(limit);
        let ok = outcome.is_ok() && within;
        let note = match (&outcome, within) {
            (Err(_), _) => "assertion failed".to_string(),
            (Ok(()), false) => format!("over the {limit} s budget"),
            _ => String::new(),
        };
        println!(
            "{} {name} ({:.2} s){}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if note.is_empty() {
                String::new()
            } else {
                format!(": {note}")
            }
        );
        if !ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
