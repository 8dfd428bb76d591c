//! Forest-machine instructions.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Apply(String),
    Nop,
    Init,
    Term,
    Tree(usize),
    RightDel(usize),
    LeftDel(usize),
    Dist3(usize, usize, usize),
    // Removed by the peephole optimizer.
    Inj1(usize, usize),
    Inj2(usize, usize),
    Proj1(usize, usize),
    Proj2(usize, usize),
    Dist4(usize, usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    Op(Op),
    CompRef(String),
    /// Body, then the sum lengths of the input, local and output spaces.
    Iter(Box<Code>, usize, usize, usize),
    Seq(Box<Code>, Box<Code>),
    PairC(Box<Code>, Box<Code>),
    /// Removed by the peephole optimizer.
    PairIdx(Box<Code>, usize, usize, Box<Code>),
    CaseC(Box<Code>, usize, usize, Box<Code>),
}

impl Code {
    pub fn op(o: Op) -> Code {
        Code::Op(o)
    }

    pub fn seq(a: Code, b: Code) -> Code {
        Code::Seq(Box::new(a), Box::new(b))
    }

    pub fn case(l: Code, p: usize, q: usize, r: Code) -> Code {
        Code::CaseC(Box::new(l), p, q, Box::new(r))
    }

    pub fn pair_idx(l: Code, p: usize, q: usize, r: Code) -> Code {
        Code::PairIdx(Box::new(l), p, q, Box::new(r))
    }

    pub fn iter(body: Code, m: usize, n: usize, p: usize) -> Code {
        Code::Iter(Box::new(body), m, n, p)
    }

    pub fn size(&self) -> usize {
        match self {
            Code::Op(_) | Code::CompRef(_) => 1,
            Code::Iter(b, ..) => 1 + b.size(),
            Code::Seq(a, b) | Code::PairC(a, b) | Code::PairIdx(a, _, _, b) | Code::CaseC(a, _, _, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// True iff some constructor reserved for unoptimized code occurs.
    pub fn has_preopt(&self) -> bool {
        match self {
            Code::Op(o) => matches!(
                o,
                Op::Inj1(..) | Op::Inj2(..) | Op::Proj1(..) | Op::Proj2(..) | Op::Dist4(..)
            ),
            Code::CompRef(_) => false,
            Code::PairIdx(..) => true,
            Code::Iter(b, ..) => b.has_preopt(),
            Code::Seq(a, b) | Code::PairC(a, b) | Code::CaseC(a, _, _, b) => a.has_preopt() || b.has_preopt(),
        }
    }

    pub fn count_iters(&self) -> usize {
        match self {
            Code::Op(_) | Code::CompRef(_) => 0,
            Code::Iter(b, ..) => 1 + b.count_iters(),
            Code::Seq(a, b) | Code::PairC(a, b) | Code::PairIdx(a, _, _, b) | Code::CaseC(a, _, _, b) => {
                a.count_iters() + b.count_iters()
            }
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Apply(a) => write!(f, "(APPLY {a})"),
            Op::Nop => write!(f, "(NOP)"),
            Op::Init => write!(f, "(INIT)"),
            Op::Term => write!(f, "(TERM)"),
            Op::Tree(n) => write!(f, "(TREE {n})"),
            Op::RightDel(n) => write!(f, "(RIGHTDEL {n})"),
            Op::LeftDel(n) => write!(f, "(LEFTDEL {n})"),
            Op::Dist3(q, q2, n) => write!(f, "(DIST {q} {q2} {n})"),
            Op::Inj1(p, q) => write!(f, "(INJ1 {p} {q})"),
            Op::Inj2(p, q) => write!(f, "(INJ2 {p} {q})"),
            Op::Proj1(p, q) => write!(f, "(PROJ1 {p} {q})"),
            Op::Proj2(p, q) => write!(f, "(PROJ2 {p} {q})"),
            Op::Dist4(p, q, q2, n) => write!(f, "(DIST4 {p} {q} {q2} {n})"),
        }
    }
}

/// Parenthesized prefix dump, e.g. `(SEQ (APPLY p) (CASE 1 1 (TREE 0) (NOP)))`.
impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Op(o) => o.fmt(f),
            Code::CompRef(a) => write!(f, "(COMP {a})"),
            Code::Iter(b, m, n, p) => write!(f, "(ITER {m} {n} {p} {b})"),
            Code::Seq(a, b) => write!(f, "(SEQ {a} {b})"),
            Code::PairC(a, b) => write!(f, "(PAIR {a} {b})"),
            Code::PairIdx(a, p, q, b) => write!(f, "(PAIRIDX {p} {q} {a} {b})"),
            Code::CaseC(a, p, q, b) => write!(f, "(CASE {p} {q} {a} {b})"),
        }
    }
}
