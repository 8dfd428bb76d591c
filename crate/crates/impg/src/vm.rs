//! The forest machine. Execution is iterative: an explicit frame stack
//! replaces host recursion for sequencing, pairing, iteration and calls.

use crate::code::{Code, Op};
use crate::compiler::{compile_program, CompiledProgram};
use crate::forest::{concat, mk_node, Forest, Tree};
use crate::peephole::rewrite_op;
use crate::signature::Diagnostic;
use crate::syntax::Program;
use crate::typecheck::tc_program;
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("iteration budget exhausted")]
    BudgetExhausted,
    #[error("reached an initial map, which has no execution rule")]
    InitReached,
    #[error("library arrow {0} failed: {1}")]
    Dispatch(String, String),
    #[error("{0} applied to untagged data")]
    Tagless(&'static str),
    #[error("{0} applied to too few trees")]
    Malformed(&'static str),
    #[error("no compiled arrow named {0}")]
    UnknownArrow(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("program does not type-check")]
    Diagnostics(Vec<Diagnostic>),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

pub fn code_of<'p>(name: &str, prog: &'p CompiledProgram) -> Result<&'p Code, RuntimeError> {
    prog.code_of(name)
        .ok_or_else(|| RuntimeError::UnknownArrow(name.to_string()))
}

enum Frame<'c> {
    /// Run code on the current forest.
    Exec(&'c Code),
    /// Left result is current; run the right code on the saved input.
    PairRight(&'c Code, Forest),
    /// Right result is current; prepend the saved left result.
    PairJoin(Forest),
    /// The body returned; decide whether to loop.
    Loop(&'c Code, usize, usize, usize),
    /// End of a compiled arrow reached through a reference.
    Return,
}

fn single_node(d: Forest, what: &'static str) -> Result<(usize, Forest), RuntimeError> {
    let mut it = d.into_iter();
    match (it.next(), it.next()) {
        (Some(Tree::Node(t, c)), None) => Ok((t, c)),
        _ => Err(RuntimeError::Tagless(what)),
    }
}

fn run_op(op: &Op, d: Forest, prog: &CompiledProgram) -> Result<Forest, RuntimeError> {
    Ok(match op {
        Op::Nop => d,
        Op::Init => return Err(RuntimeError::InitReached),
        Op::Term => Vec::new(),
        Op::Tree(n) => vec![mk_node(*n, d)],
        Op::RightDel(n) => {
            let keep = d.len().checked_sub(*n).ok_or(RuntimeError::Malformed("RIGHTDEL"))?;
            let mut d = d;
            d.truncate(keep);
            d
        }
        Op::LeftDel(n) => {
            if d.len() < *n {
                return Err(RuntimeError::Malformed("LEFTDEL"));
            }
            d.into_iter().skip(*n).collect()
        }
        Op::Dist3(q, q2, n) => {
            let mut d = d;
            let (m, inner) = match d.pop() {
                Some(Tree::Node(m, inner)) => (m, inner),
                _ => return Err(RuntimeError::Tagless("DIST")),
            };
            let (q, q2, n) = (*q, *q2, *n);
            if q != 1 && m < q {
                d.push(Tree::Node(m, inner));
                vec![mk_node(0, d)]
            } else if q2 != 1 && m >= q {
                d.push(mk_node(m - q, inner));
                vec![mk_node(n, d)]
            } else if q == 1 && m == 0 {
                vec![mk_node(0, concat(d, inner))]
            } else if q2 == 1 && m == q {
                vec![mk_node(n, concat(d, inner))]
            } else {
                return Err(RuntimeError::Tagless("DIST"));
            }
        }
        Op::Apply(a) => prog
            .lib
            .apply(a, &d)
            .map_err(|e| RuntimeError::Dispatch(a.clone(), e))?,
        Op::Inj1(..) | Op::Inj2(..) | Op::Proj1(..) | Op::Proj2(..) | Op::Dist4(..) => match rewrite_op(op) {
            Code::Op(o) => run_op(&o, d, prog)?,
            _ => unreachable!("single instructions rewrite to single instructions"),
        },
    })
}

fn tick(fuel: &mut u64) -> Result<(), RuntimeError> {
    if *fuel == 0 {
        return Err(RuntimeError::BudgetExhausted);
    }
    *fuel -= 1;
    Ok(())
}

/// Executes `c` on `d`. `budget` bounds the number of loop-body applications
/// and, separately, the depth of compiled-arrow references.
pub fn exec(c: &Code, d: Forest, prog: &CompiledProgram, budget: u64) -> Result<Forest, RuntimeError> {
    let mut fuel = budget;
    let mut depth: u64 = 0;
    let mut cur = d;
    let mut stack: Vec<Frame> = vec![Frame::Exec(c)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Exec(code) => match code {
                Code::Op(op) => cur = run_op(op, cur, prog)?,
                Code::CompRef(a) => {
                    depth += 1;
                    if depth > budget {
                        return Err(RuntimeError::BudgetExhausted);
                    }
                    stack.push(Frame::Return);
                    stack.push(Frame::Exec(code_of(a, prog)?));
                }
                Code::Seq(a, b) => {
                    stack.push(Frame::Exec(b));
                    stack.push(Frame::Exec(a));
                }
                Code::PairC(l, r) | Code::PairIdx(l, _, _, r) => {
                    stack.push(Frame::PairRight(r, cur.clone()));
                    stack.push(Frame::Exec(l));
                }
                Code::CaseC(_, 0, _, r) => stack.push(Frame::Exec(r)),
                Code::CaseC(l, _, 0, _) => stack.push(Frame::Exec(l)),
                Code::CaseC(l, p, q, r) => {
                    let (p, q) = (*p, *q);
                    let (t, inner) = single_node(std::mem::take(&mut cur), "CASE")?;
                    if p != 1 && t < p {
                        cur = vec![Tree::Node(t, inner)];
                        stack.push(Frame::Exec(l));
                    } else if q != 1 && t >= p {
                        cur = vec![mk_node(t - p, inner)];
                        stack.push(Frame::Exec(r));
                    } else if p == 1 && t == 0 {
                        cur = inner;
                        stack.push(Frame::Exec(l));
                    } else if q == 1 && t == p {
                        cur = inner;
                        stack.push(Frame::Exec(r));
                    } else {
                        return Err(RuntimeError::Tagless("CASE"));
                    }
                }
                Code::Iter(_, 0, _, _) => return Err(RuntimeError::InitReached),
                Code::Iter(body, _, 0, _) => stack.push(Frame::Exec(body)),
                Code::Iter(body, m, n, p) => {
                    tick(&mut fuel)?;
                    cur = vec![mk_node(0, std::mem::take(&mut cur))];
                    // The <0, -> wrap is absorbed by an input already tagged below m.
                    debug_assert!(*m == 1 || matches!(cur.as_slice(), [Tree::Node(t, _)] if t < m));
                    stack.push(Frame::Loop(body, *m, *n, *p));
                    stack.push(Frame::Exec(body));
                }
            },
            Frame::PairRight(r, input) => {
                let left = std::mem::replace(&mut cur, input);
                stack.push(Frame::PairJoin(left));
                stack.push(Frame::Exec(r));
            }
            Frame::PairJoin(left) => cur = concat(left, std::mem::take(&mut cur)),
            Frame::Loop(body, m, n, p) => {
                let (q, inner) = single_node(std::mem::take(&mut cur), "ITER")?;
                if q < n {
                    tick(&mut fuel)?;
                    cur = vec![mk_node(q + m, inner)];
                    stack.push(Frame::Loop(body, m, n, p));
                    stack.push(Frame::Exec(body));
                } else if p != 1 {
                    cur = vec![mk_node(q - n, inner)];
                } else {
                    cur = inner;
                }
            }
            Frame::Return => depth -= 1,
        }
    }
    Ok(cur)
}

/// Compiles `p` and runs the def `name` on `d`; when compilation fails the
/// type checker explains why.
pub fn run_arrow(name: &str, d: Forest, p: &Program, budget: u64, optimize: bool) -> Result<Forest, RunError> {
    match compile_program(p, optimize) {
        Ok(prog) => {
            let code = code_of(name, &prog)?;
            Ok(exec(code, d, &prog, budget)?)
        }
        Err(_) => Err(RunError::Diagnostics(tc_program(p, false))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::leaf;
    use crate::stdlib::{Library, Registry};
    use crate::syntax::{parse_data, parse_program};
    use std::sync::Arc;

    fn empty_prog() -> CompiledProgram {
        CompiledProgram {
            codes: Vec::new(),
            sig: Default::default(),
            lib: Registry::standard(),
        }
    }

    fn op(o: Op) -> Code {
        Code::Op(o)
    }

    #[test]
    fn term_then_tree() {
        let c = Code::seq(op(Op::Term), op(Op::Tree(0)));
        assert_eq!(
            exec(&c, vec![leaf(7)], &empty_prog(), 10).unwrap(),
            vec![Tree::Node(0, vec![])]
        );
    }

    #[test]
    fn dist_second_summand() {
        let d = vec![leaf(4), Tree::Node(1, vec![leaf(7)])];
        let r = exec(&op(Op::Dist3(1, 2, 1)), d, &empty_prog(), 10).unwrap();
        assert_eq!(r, vec![Tree::Node(1, vec![leaf(4), Tree::Node(0, vec![leaf(7)])])]);
    }

    struct Countdown;

    impl Library for Countdown {
        fn name(&self) -> &str {
            "countdown"
        }
        fn signature(&self) -> crate::signature::Signature {
            Default::default()
        }
        fn apply(&self, arrow: &str, d: &[Tree]) -> Option<Result<Forest, String>> {
            if arrow != "step" {
                return None;
            }
            let Tree::Node(_, c) = &d[0] else {
                return Some(Err("untagged".into()));
            };
            let Tree::Leaf(k) = &c[0] else {
                return Some(Err("not a number".into()));
            };
            Some(Ok(if *k > 0u32.into() {
                vec![Tree::Node(0, vec![Tree::Leaf(k - 1u32)])]
            } else {
                vec![Tree::Node(1, vec![leaf(0)])]
            }))
        }
    }

    #[test]
    fn countdown_iteration() {
        let mut prog = empty_prog();
        prog.lib = Registry::empty().with(Arc::new(Countdown));
        let c = Code::iter(op(Op::Apply("step".into())), 1, 1, 1);
        assert_eq!(exec(&c, vec![leaf(3)], &prog, 100).unwrap(), vec![leaf(0)]);
        assert_eq!(exec(&c, vec![leaf(3)], &prog, 0), Err(RuntimeError::BudgetExhausted));
        assert_eq!(exec(&c, vec![leaf(3)], &prog, 3), Err(RuntimeError::BudgetExhausted));
        assert_eq!(exec(&c, vec![leaf(3)], &prog, 4).unwrap(), vec![leaf(0)]);
    }

    #[test]
    fn references() {
        let mut prog = empty_prog();
        prog.codes.push(("t".into(), op(Op::Tree(2))));
        prog.codes.push(("t".into(), op(Op::Nop)));
        assert_eq!(code_of("t", &prog).unwrap(), &op(Op::Tree(2)));
        assert!(code_of("u", &prog).is_err());
        let r = exec(&Code::CompRef("t".into()), vec![leaf(1)], &prog, 5).unwrap();
        assert_eq!(r, vec![Tree::Node(2, vec![leaf(1)])]);
        prog.codes.insert(0, ("loop".into(), Code::CompRef("loop".into())));
        assert_eq!(
            exec(&Code::CompRef("loop".into()), vec![], &prog, 1000),
            Err(RuntimeError::BudgetExhausted)
        );
    }

    #[test]
    fn run_through_program() {
        let p = parse_program("obj N; lib s : I + N -> N, p : N -> I + N; def f : N --p--> I+N --s--> N.").unwrap();
        assert_eq!(
            run_arrow("f", parse_data("9").unwrap(), &p, 10, true).unwrap(),
            vec![leaf(9)]
        );
        let bad = parse_program("obj N; lib p : N -> I + N; def f : N --p--> N.").unwrap();
        match run_arrow("f", vec![leaf(1)], &bad, 10, true) {
            Err(RunError::Diagnostics(ds)) => assert_eq!(ds.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unoptimized_instructions_execute() {
        let d = vec![leaf(1), leaf(2)];
        let prog = empty_prog();
        assert_eq!(exec(&op(Op::Proj1(1, 1)), d.clone(), &prog, 1).unwrap(), vec![leaf(1)]);
        assert_eq!(exec(&op(Op::Proj2(1, 1)), d.clone(), &prog, 1).unwrap(), vec![leaf(2)]);
        let c = Code::pair_idx(op(Op::Proj2(1, 1)), 1, 1, op(Op::Proj1(1, 1)));
        assert_eq!(exec(&c, d, &prog, 1).unwrap(), vec![leaf(2), leaf(1)]);
    }
}
