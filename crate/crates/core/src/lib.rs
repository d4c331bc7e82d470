//! Bracket-notation arithmetic over the hyperoperation ladder.
//!
//! Terms are built from `1` and ranked operators (`+`, `-`, `/` repeated).
//! Ranks 1 and 2 evaluate exactly over the rationals; rank 3 uses power
//! series; ranks 4 and up are tetration-like towers and their inverses,
//! computed with certified root finding.

pub mod ball;
pub mod error;
pub mod eval;
pub mod expansion;
pub mod farey;
pub mod hyper;
pub mod rational;
pub mod root;
pub mod series;
pub mod syntax;

pub use ball::Ball;
pub use error::{Error, ErrorKind, Result};
pub use eval::{adaptive_render, evaluate, to_base_b, trace_reduce, EvalResult, NumericContext, Value};
pub use expansion::BasebExpansion;
pub use rational::BigRational;
pub use syntax::{parse, NodePath, OpKind, Operator, Term};
