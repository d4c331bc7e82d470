//! Quick packaging checks: hyperoperation identities and syntax round trips.

use opax::hyper::{hyper_forward, hyper_inverse_minus, HyperConfig};
use opax::rational::parse_fraction;
use opax::syntax::{render, Style};
use opax::{parse, Ball, BigRational, OpKind, Operator, Term};

const BASES: [&str; 6] = ["3/2", "2", "5/2", "3", "7/3", "10"];
const HEIGHTS: [&str; 3] = ["0", "1", "2"];

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(label());
        }
    }

    fn print(&self, name: &str) {
        println!("{name}: {} passed, {} failed", self.passed, self.failed.len());
        for f in &self.failed {
            println!("  FAIL {f}");
        }
    }
}

fn q(s: &str) -> BigRational {
    parse_fraction(s).expect("literal fraction")
}

fn is_exactly(r: opax::Result<Ball>, v: &BigRational) -> bool {
    matches!(r, Ok(b) if b.exact_value() == Some(v))
}

fn identities() -> Tally {
    let cfg = HyperConfig::default();
    let eps = q("1/1000000000000");
    let (zero, one) = (q("0"), q("1"));
    let mut t = Tally::default();
    for rank in 4..=6 {
        for s in BASES {
            let a = q(s);
            let ab = Ball::exact(a.clone());
            t.check(is_exactly(hyper_forward(rank, &ab, &zero, &eps, &cfg), &one), || {
                format!("forward({rank}, {s}, 0) = 1")
            });
            t.check(is_exactly(hyper_forward(rank, &ab, &one, &eps, &cfg), &a), || {
                format!("forward({rank}, {s}, 1) = {s}")
            });
            t.check(is_exactly(hyper_inverse_minus(rank, &ab, &one, &eps, &cfg), &a), || {
                format!("inverse_minus({rank}, {s}, 1) = {s}")
            });
        }
        for h in HEIGHTS {
            let b = q(h);
            t.check(
                is_exactly(hyper_forward(rank, &Ball::exact(one.clone()), &b, &eps, &cfg), &one),
                || format!("forward({rank}, 1, {h}) = 1"),
            );
        }
    }
    t
}

/// Every term with at most two operators drawn from ranks 1 to 4.
fn small_terms() -> Vec<Term> {
    let ops: Vec<Operator> = (1..=4)
        .flat_map(|r| [OpKind::Plus, OpKind::Minus, OpKind::Slash].map(|k| Operator::new(k, r)))
        .collect();
    let leaf = vec![Term::one()];
    let one_op: Vec<Term> = ops.iter().map(|&op| Term::node(op, Term::one(), Term::one())).collect();
    let mut all = leaf.clone();
    all.extend(one_op.iter().cloned());
    for &op in &ops {
        for t in &one_op {
            all.push(Term::node(op, t.clone(), Term::one()));
            all.push(Term::node(op, Term::one(), t.clone()));
        }
    }
    all
}

fn round_trips() -> Tally {
    let mut t = Tally::default();
    for term in small_terms() {
        let text = render(&term, Style::Canonical);
        t.check(matches!(parse(&text), Ok(p) if p == term), || {
            format!("parse(render({text}))")
        });
        let sugared = render(&term, Style::Sugared);
        t.check(matches!(parse(&sugared), Ok(p) if p == term), || {
            format!("parse({sugared})")
        });
    }
    t
}

pub fn run() -> u8 {
    let id = identities();
    id.print("identities");
    let rt = round_trips();
    rt.print("round-trip");
    if id.failed.is_empty() && rt.failed.is_empty() {
        0
    } else {
        3
    }
}
