//! Bracket-notation terms: operators, the term tree, parsing and rendering.
//!
//! A term is either the constant `1` or a bracketed binary operation
//! `[a op a]`, where `op` is a homogeneous run of `+`, `-` or `/`. The run
//! length is the operator's rank. Terms are stored as a flat post-order node
//! list so that very deep trees never need recursion to clone, compare, drop
//! or render.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default bound on bracket nesting accepted by [`parse`].
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Plus,
    Minus,
    Slash,
}

impl OpKind {
    pub fn symbol(self) -> char {
        match self {
            OpKind::Plus => '+',
            OpKind::Minus => '-',
            OpKind::Slash => '/',
        }
    }

    fn from_symbol(c: u8) -> Option<Self> {
        match c {
            b'+' => Some(OpKind::Plus),
            b'-' => Some(OpKind::Minus),
            b'/' => Some(OpKind::Slash),
            _ => None,
        }
    }
}

/// An operator run: its symbol family and its length (rank).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operator {
    kind: OpKind,
    rank: u32,
}

impl Operator {
    /// Panics if `rank` is zero.
    pub fn new(kind: OpKind, rank: u32) -> Self {
        assert!(rank >= 1, "operator rank must be at least 1");
        Operator { kind, rank }
    }

    pub fn plus(rank: u32) -> Self {
        Self::new(OpKind::Plus, rank)
    }

    pub fn minus(rank: u32) -> Self {
        Self::new(OpKind::Minus, rank)
    }

    pub fn slash(rank: u32) -> Self {
        Self::new(OpKind::Slash, rank)
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.kind.symbol();
        for _ in 0..self.rank {
            fmt::Write::write_char(f, sym)?;
        }
        Ok(())
    }
}

/// One entry of the post-order node list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    One,
    Op { op: Operator, left: usize, right: usize },
}

/// An immutable term tree. The root is the last node; every subtree occupies
/// a contiguous block ending at its root, left block before right block, so
/// structural equality is plain equality of the node lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    nodes: Vec<Node>,
}

impl Term {
    pub fn one() -> Self {
        Term { nodes: vec![Node::One] }
    }

    pub fn node(op: Operator, left: Term, right: Term) -> Self {
        let offset = left.nodes.len();
        let mut nodes = Vec::with_capacity(left.nodes.len() + right.nodes.len() + 1);
        nodes.extend(left.nodes);
        nodes.extend(right.nodes.into_iter().map(|n| match n {
            Node::One => Node::One,
            Node::Op { op, left, right } => Node::Op {
                op,
                left: left + offset,
                right: right + offset,
            },
        }));
        let right_root = nodes.len() - 1;
        nodes.push(Node::Op {
            op,
            left: offset - 1,
            right: right_root,
        });
        Term { nodes }
    }

    /// The canonical desugaring of a non-negative integer literal:
    /// `0` is `[1-1]`, `1` is `1`, and `n` is `[..[[1+1]+1]..+1]`.
    pub fn integer(n: u64) -> Self {
        let mut nodes = Vec::new();
        push_integer(&mut nodes, n);
        Term { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len() / 2
    }

    /// Longest root-to-leaf path counted in operators.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Op { left, right, .. } = *n {
                depth[i] = 1 + depth[left].max(depth[right]);
            }
        }
        depth[self.root()]
    }

    /// The root operator and both operands, or `None` for `1`.
    pub fn split(&self) -> Option<(Operator, Term, Term)> {
        match self.nodes[self.root()] {
            Node::One => None,
            Node::Op { op, left, right } => Some((op, self.subterm(left), self.subterm(right))),
        }
    }

    /// Index of the first node in the block of the subtree rooted at `index`.
    pub fn block_start(&self, mut index: usize) -> usize {
        while let Node::Op { left, .. } = self.nodes[index] {
            index = left;
        }
        index
    }

    pub fn subterm(&self, index: usize) -> Term {
        let start = self.block_start(index);
        let nodes = self.nodes[start..=index]
            .iter()
            .map(|n| match *n {
                Node::One => Node::One,
                Node::Op { op, left, right } => Node::Op {
                    op,
                    left: left - start,
                    right: right - start,
                },
            })
            .collect();
        Term { nodes }
    }

    /// Root-relative path of every node, indexed like [`Term::nodes`].
    pub fn paths(&self) -> Vec<NodePath> {
        let mut paths = vec![NodePath::root(); self.nodes.len()];
        // parents always sit after their children
        for i in (0..self.nodes.len()).rev() {
            if let Node::Op { left, right, .. } = self.nodes[i] {
                paths[left] = paths[i].child(Side::Left);
                paths[right] = paths[i].child(Side::Right);
            }
        }
        paths
    }

    pub fn index_of(&self, path: &NodePath) -> Option<usize> {
        let mut index = self.root();
        for side in path.sides() {
            match self.nodes[index] {
                Node::One => return None,
                Node::Op { left, right, .. } => {
                    index = match side {
                        Side::Left => left,
                        Side::Right => right,
                    }
                }
            }
        }
        Some(index)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Style::Canonical))
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Sequence of left/right choices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(Vec<bool>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, side: Side) -> Self {
        let mut v = self.0.clone();
        v.push(side == Side::Right);
        NodePath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sides(&self) -> impl Iterator<Item = Side> + '_ {
        self.0.iter().map(|&r| if r { Side::Right } else { Side::Left })
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for side in self.sides() {
            f.write_str(match side {
                Side::Left => ".L",
                Side::Right => ".R",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub max_depth: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

pub fn parse(text: &str) -> Result<Term> {
    parse_with(text, &ParseOptions::default())
}

struct Frame {
    depth_below: usize,
    left: Option<(usize, usize)>,
    op: Option<Operator>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Operand,
    Operator,
    Close,
    End,
}

/// Parse one term. Whitespace is insignificant and `#` comments run to the
/// end of the line. Integer literals `n` and decimals `p.q` are desugared.
pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Term> {
    let bytes = text.as_bytes();
    let mut nodes: Vec<Node> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut expect = Expect::Operand;
    let mut pos = 0;

    // Completed operand: (root index, nesting depth). Feeds the open frame.
    let complete = |operand: (usize, usize), stack: &mut Vec<Frame>, expect: &mut Expect| match stack.last_mut() {
        None => *expect = Expect::End,
        Some(frame) if frame.left.is_none() => {
            frame.left = Some(operand);
            *expect = Expect::Operator;
        }
        Some(frame) => {
            frame.depth_below = frame.depth_below.max(operand.1);
            *expect = Expect::Close;
        }
    };

    loop {
        while pos < bytes.len() {
            match bytes[pos] {
                b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        if pos == bytes.len() {
            return match expect {
                Expect::End => Ok(Term { nodes }),
                Expect::Operand if stack.is_empty() && nodes.is_empty() => Err(Error::parse(pos, "empty input")),
                Expect::Operand => Err(Error::parse(pos, "expected operand")),
                Expect::Operator => Err(Error::parse(pos, "expected operator")),
                Expect::Close => Err(Error::parse(pos, "unbalanced bracket: expected `]`")),
            };
        }
        let c = bytes[pos];
        match expect {
            Expect::End => return Err(Error::parse(pos, "unexpected trailing input")),
            Expect::Operand => match c {
                b'[' => {
                    if stack.len() >= opts.max_depth {
                        return Err(Error::parse(pos, "nesting depth limit exceeded"));
                    }
                    stack.push(Frame {
                        depth_below: 0,
                        left: None,
                        op: None,
                    });
                    pos += 1;
                }
                b'0'..=b'9' => {
                    let start = pos;
                    let (root, depth) = parse_literal(bytes, &mut pos, &mut nodes, stack.len(), opts)
                        .map_err(|msg| Error::parse(start, msg))?;
                    complete((root, depth), &mut stack, &mut expect);
                }
                b']' => return Err(Error::parse(pos, "empty operand")),
                _ if OpKind::from_symbol(c).is_some() => {
                    return Err(Error::parse(pos, "expected operand, found operator"))
                }
                _ => return Err(Error::parse(pos, format!("stray character {:?}", c as char))),
            },
            Expect::Operator => {
                let Some(kind) = OpKind::from_symbol(c) else {
                    return Err(if c == b']' {
                        Error::parse(pos, "missing operator")
                    } else {
                        Error::parse(pos, format!("stray character {:?}", c as char))
                    });
                };
                let mut rank = 0u32;
                while pos < bytes.len() && bytes[pos] == c {
                    rank += 1;
                    pos += 1;
                }
                if pos < bytes.len() && OpKind::from_symbol(bytes[pos]).is_some() {
                    return Err(Error::parse(pos, "mixed operator symbols within one run"));
                }
                stack.last_mut().expect("operator inside a bracket").op = Some(Operator::new(kind, rank));
                expect = Expect::Operand;
            }
            Expect::Close => {
                if c != b']' {
                    return Err(Error::parse(pos, "expected `]`"));
                }
                pos += 1;
                let frame = stack.pop().expect("open frame");
                let (left, left_depth) = frame.left.expect("left operand");
                let right = nodes.len() - 1;
                nodes.push(Node::Op {
                    op: frame.op.expect("operator"),
                    left,
                    right,
                });
                let depth = 1 + left_depth.max(frame.depth_below);
                complete((nodes.len() - 1, depth), &mut stack, &mut expect);
            }
        }
    }
}

/// Reads `digits` or `digits.digits` and appends its desugaring.
fn parse_literal(
    bytes: &[u8],
    pos: &mut usize,
    nodes: &mut Vec<Node>,
    open: usize,
    opts: &ParseOptions,
) -> std::result::Result<(usize, usize), String> {
    let int_start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let int_digits = &bytes[int_start..*pos];
    let mut frac_digits: &[u8] = &[];
    if *pos < bytes.len() && bytes[*pos] == b'.' {
        *pos += 1;
        let frac_start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        frac_digits = &bytes[frac_start..*pos];
        if frac_digits.is_empty() {
            return Err("decimal point must be followed by digits".into());
        }
    }
    let budget = opts.max_depth.saturating_sub(open);
    let too_deep = || "literal exceeds the nesting depth limit".to_string();
    let value_of = |digits: &[u8]| -> std::result::Result<u64, String> {
        let mut v: u64 = 0;
        for &d in digits {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
                .filter(|&v| integer_depth(v) <= budget as u64)
                .ok_or_else(too_deep)?;
        }
        Ok(v)
    };
    if frac_digits.is_empty() {
        let n = value_of(int_digits)?;
        push_integer(nodes, n);
        return Ok((nodes.len() - 1, integer_depth(n) as usize));
    }
    let mut all = int_digits.to_vec();
    all.extend_from_slice(frac_digits);
    let numerator = value_of(&all)?;
    let denominator = 10u64
        .checked_pow(frac_digits.len() as u32)
        .filter(|&d| integer_depth(d) < budget as u64)
        .ok_or_else(too_deep)?;
    let depth = 1 + integer_depth(numerator).max(integer_depth(denominator)) as usize;
    if depth > budget {
        return Err(too_deep());
    }
    push_integer(nodes, numerator);
    let left = nodes.len() - 1;
    push_integer(nodes, denominator);
    let right = nodes.len() - 1;
    nodes.push(Node::Op {
        op: Operator::minus(2),
        left,
        right,
    });
    Ok((nodes.len() - 1, depth))
}

fn integer_depth(n: u64) -> u64 {
    match n {
        0 => 1,
        n => n - 1,
    }
}

fn push_integer(nodes: &mut Vec<Node>, n: u64) {
    if n == 0 {
        nodes.push(Node::One);
        nodes.push(Node::One);
        let i = nodes.len();
        nodes.push(Node::Op {
            op: Operator::minus(1),
            left: i - 2,
            right: i - 1,
        });
        return;
    }
    nodes.push(Node::One);
    for _ in 1..n {
        let left = nodes.len() - 1;
        nodes.push(Node::One);
        nodes.push(Node::Op {
            op: Operator::plus(1),
            left,
            right: left + 1,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Style {
    /// Pure notation over `1`; never emits literals.
    Canonical,
    /// Folds canonical integer and decimal desugarings back into literals.
    Sugared,
}

pub fn render(term: &Term, style: Style) -> String {
    match style {
        Style::Canonical => render_with(term, |_| None),
        Style::Sugared => {
            let sugar = sugar_table(term);
            render_with(term, |i| sugar[i].clone())
        }
    }
}

/// Canonical rendering where `substitute(i)` may replace the subtree rooted
/// at node `i` with arbitrary text.
pub fn render_with<F>(term: &Term, substitute: F) -> String
where
    F: Fn(usize) -> Option<String>,
{
    enum Task {
        Node(usize),
        Text(&'static str),
        Op(Operator),
    }
    let mut out = String::new();
    let mut tasks = vec![Task::Node(term.root())];
    while let Some(task) = tasks.pop() {
        match task {
            Task::Text(s) => out.push_str(s),
            Task::Op(op) => out.push_str(&op.to_string()),
            Task::Node(i) => {
                if let Some(text) = substitute(i) {
                    out.push_str(&text);
                    continue;
                }
                match term.nodes[i] {
                    Node::One => out.push('1'),
                    Node::Op { op, left, right } => {
                        tasks.push(Task::Text("]"));
                        tasks.push(Task::Node(right));
                        tasks.push(Task::Op(op));
                        tasks.push(Task::Node(left));
                        tasks.push(Task::Text("["));
                    }
                }
            }
        }
    }
    out
}

fn sugar_table(term: &Term) -> Vec<Option<String>> {
    let nodes = term.nodes();
    let mut ints: Vec<Option<u64>> = vec![None; nodes.len()];
    let mut sugar: Vec<Option<String>> = vec![None; nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        match *n {
            Node::One => ints[i] = Some(1),
            Node::Op { op, left, right } => {
                let leaf_right = matches!(nodes[right], Node::One);
                if op == Operator::plus(1) && leaf_right {
                    ints[i] = ints[left].filter(|&v| v >= 1).and_then(|v| v.checked_add(1));
                } else if op == Operator::minus(1) && matches!(nodes[left], Node::One) && leaf_right {
                    ints[i] = Some(0);
                }
                if let Some(v) = ints[i] {
                    sugar[i] = Some(v.to_string());
                } else if op == Operator::minus(2) {
                    if let (Some(p), Some(q)) = (ints[left], ints[right]) {
                        if let Some(k) = decimal_exponent(q) {
                            let digits = format!("{:0>width$}", p, width = k + 1);
                            let (int_part, frac_part) = digits.split_at(digits.len() - k);
                            sugar[i] = Some(format!("{int_part}.{frac_part}"));
                        }
                    }
                }
            }
        }
    }
    sugar
}

/// `Some(k)` when `q == 10^k` with `k >= 1`.
fn decimal_exponent(mut q: u64) -> Option<usize> {
    let mut k = 0;
    while q >= 10 && q.is_multiple_of(10) {
        q /= 10;
        k += 1;
    }
    (q == 1 && k >= 1).then_some(k)
}

/// Internal nodes in inorder (left subtree, node, right subtree).
pub fn traversal_order(term: &Term) -> Vec<NodePath> {
    let paths = term.paths();
    inorder_indices(term).into_iter().map(|i| paths[i].clone()).collect()
}

pub(crate) fn inorder_indices(term: &Term) -> Vec<usize> {
    let nodes = term.nodes();
    let mut out = Vec::with_capacity(term.internal_count());
    let mut stack = Vec::new();
    let mut current = Some(term.root());
    while current.is_some() || !stack.is_empty() {
        while let Some(i) = current {
            match nodes[i] {
                Node::One => current = None,
                Node::Op { left, .. } => {
                    stack.push(i);
                    current = Some(left);
                }
            }
        }
        if let Some(i) = stack.pop() {
            out.push(i);
            if let Node::Op { right, .. } = nodes[i] {
                current = Some(right);
            }
        }
    }
    out
}

/// The order in which binary operations are actually computed: walk the
/// inorder sequence, and when a node is reached first resolve any of its
/// operands that are still unresolved, innermost first.
pub fn reduction_indices(term: &Term) -> Vec<usize> {
    let nodes = term.nodes();
    let mut resolved = vec![false; nodes.len()];
    let mut out = Vec::with_capacity(term.internal_count());
    for start in inorder_indices(term) {
        let mut stack = vec![(start, false)];
        while let Some((i, expanded)) = stack.pop() {
            if resolved[i] {
                continue;
            }
            match nodes[i] {
                Node::One => resolved[i] = true,
                Node::Op { left, right, .. } => {
                    if expanded {
                        resolved[i] = true;
                        out.push(i);
                    } else {
                        stack.push((i, true));
                        stack.push((right, false));
                        stack.push((left, false));
                    }
                }
            }
        }
    }
    out
}

pub fn reduction_order(term: &Term) -> Vec<NodePath> {
    let paths = term.paths();
    reduction_indices(term).into_iter().map(|i| paths[i].clone()).collect()
}

/// One step of a reduction chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub path: NodePath,
    pub before: String,
    pub after: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf() -> Term {
        Term::one()
    }

    fn plus(l: Term, r: Term) -> Term {
        Term::node(Operator::plus(1), l, r)
    }

    fn super_root_term() -> Term {
        Term::node(
            Operator::minus(4),
            plus(leaf(), plus(leaf(), leaf())),
            plus(leaf(), leaf()),
        )
    }

    #[test]
    fn operator_renders_rank_copies() {
        assert_eq!(Operator::plus(1).to_string(), "+");
        assert_eq!(Operator::minus(4).to_string(), "----");
        assert_eq!(Operator::slash(3).to_string(), "///");
    }

    #[test]
    fn parse_smallest_composite() {
        assert_eq!(parse("[1+1]").unwrap(), plus(leaf(), leaf()));
    }

    #[test]
    fn parse_expression_tree_example() {
        let t = parse("[[1+[1+1]]----[1+1]]").unwrap();
        assert_eq!(t, super_root_term());
        let (op, l, r) = t.split().unwrap();
        assert_eq!(op, Operator::minus(4));
        assert_eq!(l, plus(leaf(), plus(leaf(), leaf())));
        assert_eq!(r, plus(leaf(), leaf()));
    }

    #[test]
    fn parse_missing_right_operand() {
        match parse("[1+]") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_offsets() {
        let offset = |s: &str| match parse(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s}: unexpected {other:?}"),
        };
        assert_eq!(offset("[1+-1]"), 3);
        assert_eq!(offset("[1+1"), 4);
        assert_eq!(offset("[1+1]]"), 5);
        assert_eq!(offset("[1x1]"), 2);
        assert_eq!(offset("[]"), 1);
        assert_eq!(offset("[11]"), 3);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("1.]"), 0);
        assert_eq!(offset("[+1]"), 1);
    }

    #[test]
    fn literal_sugar() {
        assert_eq!(parse("3").unwrap(), plus(plus(leaf(), leaf()), leaf()));
        assert_eq!(parse("2").unwrap(), plus(leaf(), leaf()));
        assert_eq!(parse("1").unwrap(), leaf());
        assert_eq!(parse("0").unwrap(), Term::node(Operator::minus(1), leaf(), leaf()));
        assert_eq!(
            parse("1.5").unwrap(),
            Term::node(Operator::minus(2), Term::integer(15), Term::integer(10))
        );
        assert_eq!(parse(" [ 3 ---- 2 ] # trailing\n").unwrap(), {
            Term::node(Operator::minus(4), Term::integer(3), Term::integer(2))
        });
    }

    #[test]
    fn maximal_munch() {
        let t = parse("[1+++1]").unwrap();
        assert_eq!(t.split().unwrap().0, Operator::plus(3));
    }

    #[test]
    fn slash_and_minus_stay_distinct() {
        let a = parse("[1-1]").unwrap();
        let b = parse("[1/1]").unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn depth_limit() {
        let opts = ParseOptions { max_depth: 3 };
        assert!(parse_with("[[[1+1]+1]+1]", &opts).is_ok());
        assert!(matches!(
            parse_with("[[[[1+1]+1]+1]+1]", &opts),
            Err(Error::Parse { offset: 3, .. })
        ));
        assert!(parse_with("4", &opts).is_ok());
        assert!(parse_with("5", &opts).is_err());
        assert!(parse_with("[1+4]", &opts).is_err());
    }

    #[test]
    fn deep_terms_do_not_recurse() {
        let n = 9_000;
        let text = "[".repeat(n) + "1" + &"+1]".repeat(n);
        let t = parse(&text).unwrap();
        assert_eq!(t.depth(), n);
        assert_eq!(render(&t, Style::Canonical), text);
        assert_eq!(render(&t, Style::Sugared), (n + 1).to_string());
        assert_eq!(t, Term::integer(n as u64 + 1));
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&plus(leaf(), leaf()), Style::Canonical), "[1+1]");
        assert_eq!(render(&super_root_term(), Style::Canonical), "[[1+[1+1]]----[1+1]]");
        assert_eq!(render(&leaf(), Style::Canonical), "1");
        assert_eq!(render(&super_root_term(), Style::Sugared), "[[1+2]----2]");
        assert_eq!(render(&parse("0.05").unwrap(), Style::Sugared), "0.05");
        assert_eq!(render(&parse("[7--10]").unwrap(), Style::Sugared), "0.7");
    }

    #[test]
    fn traversal_is_inorder() {
        let t = super_root_term();
        let order = traversal_order(&t);
        let root = NodePath::root();
        let l = root.child(Side::Left);
        assert_eq!(
            order,
            vec![l.clone(), l.child(Side::Right), root.clone(), root.child(Side::Right)]
        );
        assert!(traversal_order(&leaf()).is_empty());
        assert_eq!(traversal_order(&plus(leaf(), leaf())), vec![root]);
    }

    #[test]
    fn reduction_resolves_operands_first() {
        let t = super_root_term();
        let root = NodePath::root();
        let l = root.child(Side::Left);
        assert_eq!(
            reduction_order(&t),
            vec![l.child(Side::Right), l, root.child(Side::Right), root]
        );
    }

    #[test]
    fn paths_and_indices_agree() {
        let t = super_root_term();
        for (i, p) in t.paths().iter().enumerate() {
            assert_eq!(t.index_of(p), Some(i));
        }
        assert_eq!(NodePath::root().child(Side::Left).to_string(), "root.L");
    }
}
