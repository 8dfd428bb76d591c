//! Local rewrites of compiled code, applied bottom-up to a fixpoint. Specific
//! rules are tried before the default translations of the pre-optimization
//! constructors.

use crate::code::{Code, Op};

/// Rewrites of a single instruction; the result contains no pre-optimization
/// instruction.
pub fn rewrite_op(op: &Op) -> Code {
    let c = match *op {
        Op::Inj1(p, 0) if p != 0 => Op::Nop,
        Op::Inj2(0, q) if q != 0 => Op::Nop,
        Op::Inj1(0, _) => Op::Init,
        Op::Inj2(_, 0) => Op::Init,
        Op::Proj1(p, 0) if p != 0 => Op::Nop,
        Op::Proj2(0, q) if q != 0 => Op::Nop,
        Op::Proj1(0, _) => Op::Term,
        Op::Proj2(_, 0) => Op::Term,
        Op::Dist4(0, ..) => Op::Nop,
        Op::Dist4(_, 0, _, _) => Op::Tree(1),
        Op::Dist4(_, _, 0, _) => Op::Tree(0),
        // Defaults.
        Op::Inj1(_, _) => Op::Tree(0),
        Op::Inj2(n, _) => Op::Tree(n),
        Op::Proj1(_, q) => Op::RightDel(q),
        Op::Proj2(p, _) => Op::LeftDel(p),
        Op::Dist4(_, q, q2, n) => Op::Dist3(q, q2, n),
        ref other => other.clone(),
    };
    Code::Op(c)
}

fn is_op(c: &Code, op: Op) -> bool {
    matches!(c, Code::Op(o) if *o == op)
}

/// One rule application at the root of an already optimized node.
fn step(c: Code) -> Result<Code, Code> {
    match c {
        Code::Op(ref o) => {
            let r = rewrite_op(o);
            if r == c {
                Err(c)
            } else {
                Ok(r)
            }
        }
        Code::Seq(a, b) => {
            if is_op(&a, Op::Nop) || is_op(&b, Op::Term) {
                Ok(*b)
            } else if is_op(&b, Op::Nop) || is_op(&a, Op::Init) {
                Ok(*a)
            } else {
                Err(Code::Seq(a, b))
            }
        }
        Code::Iter(_, 0, _, _) => Ok(Code::Op(Op::Init)),
        Code::Iter(b, _, 0, _) => Ok(*b),
        Code::PairIdx(_, 0, _, r) => Ok(*r),
        Code::PairIdx(l, _, 0, _) => Ok(*l),
        Code::PairIdx(l, _, _, r) => Ok(Code::PairC(l, r)),
        Code::CaseC(_, 0, _, r) => Ok(*r),
        Code::CaseC(l, _, 0, _) => Ok(*l),
        other => Err(other),
    }
}

pub fn peephole(c: &Code) -> Code {
    let node = match c {
        Code::Op(_) | Code::CompRef(_) => c.clone(),
        Code::Iter(b, m, n, p) => Code::Iter(Box::new(peephole(b)), *m, *n, *p),
        Code::Seq(a, b) => Code::seq(peephole(a), peephole(b)),
        Code::PairC(a, b) => Code::PairC(Box::new(peephole(a)), Box::new(peephole(b))),
        Code::PairIdx(a, p, q, b) => Code::pair_idx(peephole(a), *p, *q, peephole(b)),
        Code::CaseC(a, p, q, b) => Code::case(peephole(a), *p, *q, peephole(b)),
    };
    let mut cur = node;
    loop {
        match step(cur) {
            Ok(next) => cur = next,
            Err(done) => return done,
        }
    }
}
