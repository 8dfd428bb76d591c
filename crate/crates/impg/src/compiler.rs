//! Backtracking compilation of arrows against a target domain and codomain.
//!
//! Polymorphic structural arrows are instantiated by splitting the sum or
//! product view of the target objects. Splits are enumerated by increasing
//! prefix length; in a composite the codomain of the left factor is tried
//! before the domain of the right one. Instantiations never produce a
//! degenerate structural arrow (empty side of an injection or projection).

use crate::code::{Code, Op};
use crate::domcod::{self, MaybeFlat};
use crate::objects::{as_prod, as_sum, flatten, plen, prod_of, rebuild_prod, rebuild_sum, slen, sum_of, to_obj, Flat};
use crate::peephole::peephole;
use crate::signature::{ArrowKind, Signature};
use crate::stdlib::Registry;
use crate::syntax::{Arrow, ObjExpr, Program};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    First,
    Exhaustive,
}

/// Bound on the distinct solutions kept per subproblem in exhaustive mode.
pub const MAX_SOLUTIONS: usize = 64;

/// One successful compilation: unoptimized code and the annotated arrow that
/// records the chosen instantiation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub code: Code,
    pub elab: Arrow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompileError {
    NoInstance,
    /// Two or more structurally distinct optimized codes.
    Ambiguous(Vec<Code>),
}

type Key = (usize, Flat, Flat);

struct Solver<'s> {
    sig: &'s Signature,
    mode: Mode,
    memo: HashMap<Key, Rc<Vec<Solution>>>,
    types: HashMap<usize, (MaybeFlat, MaybeFlat)>,
}

fn key_of(f: &Arrow) -> usize {
    f as *const Arrow as usize
}

fn fl(x: &ObjExpr) -> Flat {
    flatten(x)
}

fn op(o: Op) -> Code {
    Code::Op(o)
}

impl<'s> Solver<'s> {
    fn new(sig: &'s Signature, mode: Mode) -> Self {
        Solver {
            sig,
            mode,
            memo: HashMap::new(),
            types: HashMap::new(),
        }
    }

    fn types(&mut self, f: &Arrow) -> &(MaybeFlat, MaybeFlat) {
        let sig = self.sig;
        self.types
            .entry(key_of(f))
            .or_insert_with(|| (domcod::dom(f, sig), domcod::cod(f, sig)))
    }

    fn solve(&mut self, f: &Arrow, dom: &Flat, cod: &Flat) -> Rc<Vec<Solution>> {
        let (d, c) = self.types(f).clone();
        if !d.admits(dom) || !c.admits(cod) {
            return Rc::new(Vec::new());
        }
        let key = (key_of(f), dom.clone(), cod.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.solve_node(f, dom, cod));
        self.memo.insert(key, r.clone());
        r
    }

    fn enough(&self, out: &[Solution]) -> bool {
        match self.mode {
            Mode::First => !out.is_empty(),
            Mode::Exhaustive => out.len() >= MAX_SOLUTIONS,
        }
    }

    fn push(&self, out: &mut Vec<Solution>, s: Solution) {
        if !self.enough(out) && !out.iter().any(|o| o.code == s.code) {
            out.push(s);
        }
    }

    /// Compiles `f` and `g` at their targets and combines every pair.
    fn both(
        &mut self,
        out: &mut Vec<Solution>,
        (f, fd, fc): (&Arrow, &Flat, &Flat),
        (g, gd, gc): (&Arrow, &Flat, &Flat),
        mk: impl Fn(&Solution, &Solution) -> Solution,
    ) {
        let left = self.solve(f, fd, fc);
        if left.is_empty() {
            return;
        }
        let right = self.solve(g, gd, gc);
        for l in left.iter() {
            for r in right.iter() {
                if self.enough(out) {
                    return;
                }
                self.push(out, mk(l, r));
            }
        }
    }

    fn solve_node(&mut self, f: &Arrow, dom: &Flat, cod: &Flat) -> Vec<Solution> {
        let mut out = Vec::new();
        let leaf = |code: Code, elab: Arrow| vec![Solution { code, elab }];
        match f {
            Arrow::Basic(a) => {
                if let Some(e) = self.sig.spec_of(a) {
                    if &e.dom == dom && &e.cod == cod {
                        let code = match e.kind {
                            ArrowKind::Library => op(Op::Apply(a.clone())),
                            ArrowKind::Defined => Code::CompRef(a.clone()),
                        };
                        return leaf(code, f.clone());
                    }
                }
            }
            Arrow::Id(None) => {
                if dom == cod && !dom.is_empty_sum() && !dom.is_unit() {
                    return leaf(op(Op::Nop), Arrow::id(to_obj(dom)));
                }
            }
            Arrow::Id(Some(x)) => {
                if &fl(x) == dom && dom == cod {
                    return leaf(op(Op::Nop), f.clone());
                }
            }
            Arrow::Inj1(None) | Arrow::Inj2(None) => {
                let first = matches!(f, Arrow::Inj1(_));
                let xs = as_sum(dom);
                let cs = as_sum(cod);
                if !xs.is_empty() && cs.len() > xs.len() {
                    let rest = cs.len() - xs.len();
                    if first && &cs[..xs.len()] == xs {
                        let other = to_obj(&sum_of(&cs[xs.len()..]));
                        return leaf(op(Op::Inj1(xs.len(), rest)), Arrow::inj1(to_obj(dom), other));
                    }
                    if !first && &cs[rest..] == xs {
                        let other = to_obj(&sum_of(&cs[..rest]));
                        return leaf(op(Op::Inj2(rest, xs.len())), Arrow::inj2(other, to_obj(dom)));
                    }
                }
            }
            Arrow::Inj1(Some(b)) => {
                let (x, y) = (fl(&b.0), fl(&b.1));
                if &x == dom && &rebuild_sum(vec![x.clone(), y.clone()]) == cod {
                    return leaf(op(Op::Inj1(slen(&x), slen(&y))), f.clone());
                }
            }
            Arrow::Inj2(Some(b)) => {
                let (x, y) = (fl(&b.0), fl(&b.1));
                if &y == dom && &rebuild_sum(vec![x.clone(), y.clone()]) == cod {
                    return leaf(op(Op::Inj2(slen(&x), slen(&y))), f.clone());
                }
            }
            Arrow::Proj1(None) | Arrow::Proj2(None) => {
                let first = matches!(f, Arrow::Proj1(_));
                let xs = as_prod(cod);
                let ds = as_prod(dom);
                if !xs.is_empty() && ds.len() > xs.len() {
                    let rest = ds.len() - xs.len();
                    if first && &ds[..xs.len()] == xs {
                        let other = to_obj(&prod_of(&ds[xs.len()..]));
                        return leaf(op(Op::Proj1(xs.len(), rest)), Arrow::proj1(to_obj(cod), other));
                    }
                    if !first && &ds[rest..] == xs {
                        let other = to_obj(&prod_of(&ds[..rest]));
                        return leaf(op(Op::Proj2(rest, xs.len())), Arrow::proj2(other, to_obj(cod)));
                    }
                }
            }
            Arrow::Proj1(Some(b)) => {
                let (x, y) = (fl(&b.0), fl(&b.1));
                if &rebuild_prod(vec![x.clone(), y.clone()]) == dom && &x == cod {
                    return leaf(op(Op::Proj1(plen(&x), plen(&y))), f.clone());
                }
            }
            Arrow::Proj2(Some(b)) => {
                let (x, y) = (fl(&b.0), fl(&b.1));
                if &rebuild_prod(vec![x.clone(), y.clone()]) == dom && &y == cod {
                    return leaf(op(Op::Proj2(plen(&x), plen(&y))), f.clone());
                }
            }
            Arrow::Bang(None) => {
                if dom.is_empty_sum() && !cod.is_empty_sum() {
                    return leaf(op(Op::Init), Arrow::bang(to_obj(cod)));
                }
            }
            Arrow::Bang(Some(x)) => {
                if dom.is_empty_sum() && &fl(x) == cod {
                    return leaf(op(Op::Init), f.clone());
                }
            }
            Arrow::Term(None) => {
                if cod.is_unit() && !dom.is_unit() {
                    return leaf(op(Op::Term), Arrow::term(to_obj(dom)));
                }
            }
            Arrow::Term(Some(x)) => {
                if &fl(x) == dom && cod.is_unit() {
                    return leaf(op(Op::Term), f.clone());
                }
            }
            Arrow::Dist(None) => {
                let ds = as_prod(dom);
                if ds.len() >= 2 {
                    let (xi, last) = ds.split_at(ds.len() - 1);
                    if let Flat::Sum(items) = &last[0] {
                        for k in 1..items.len() {
                            let (t1, t2) = items.split_at(k);
                            let o1 = rebuild_prod(xi.iter().cloned().chain([sum_of(t1)]).collect());
                            let o2 = rebuild_prod(xi.iter().cloned().chain([sum_of(t2)]).collect());
                            let n = slen(&o1);
                            if &rebuild_sum(vec![o1, o2]) == cod {
                                let elab = Arrow::dist(to_obj(&prod_of(xi)), to_obj(&sum_of(t1)), to_obj(&sum_of(t2)));
                                let code = op(Op::Dist4(xi.len(), t1.len(), t2.len(), n));
                                self.push(&mut out, Solution { code, elab });
                            }
                        }
                    }
                }
            }
            Arrow::Dist(Some(b)) => {
                let (x, y1, y2) = (fl(&b.0), fl(&b.1), fl(&b.2));
                let o1 = rebuild_prod(vec![x.clone(), y1.clone()]);
                let o2 = rebuild_prod(vec![x.clone(), y2.clone()]);
                if &rebuild_prod(vec![x.clone(), rebuild_sum(vec![y1.clone(), y2.clone()])]) == dom
                    && &rebuild_sum(vec![o1.clone(), o2]) == cod
                {
                    let code = op(Op::Dist4(plen(&x), slen(&y1), slen(&y2), slen(&o1)));
                    return leaf(code, f.clone());
                }
            }
            Arrow::Sum(g, h) | Arrow::Prod(g, h) => {
                let is_sum = matches!(f, Arrow::Sum(..));
                let view = if is_sum { as_sum } else { as_prod };
                let build: fn(&[Flat]) -> Flat = if is_sum { sum_of } else { prod_of };
                let ds = view(dom).to_vec();
                let cs = view(cod).to_vec();
                for i in 0..=ds.len() {
                    for j in 0..=cs.len() {
                        if self.enough(&out) {
                            return out;
                        }
                        let (d1, d2) = (build(&ds[..i]), build(&ds[i..]));
                        let (c1, c2) = (build(&cs[..j]), build(&cs[j..]));
                        let (p, q) = (i, ds.len() - i);
                        let (p2, q2) = (j, cs.len() - j);
                        self.both(&mut out, (g, &d1, &c1), (h, &d2, &c2), |l, r| {
                            let code = if is_sum {
                                Code::case(
                                    Code::seq(l.code.clone(), op(Op::Inj1(p2, q2))),
                                    p,
                                    q,
                                    Code::seq(r.code.clone(), op(Op::Inj2(p2, q2))),
                                )
                            } else {
                                Code::pair_idx(
                                    Code::seq(op(Op::Proj1(p, q)), l.code.clone()),
                                    p2,
                                    q2,
                                    Code::seq(op(Op::Proj2(p, q)), r.code.clone()),
                                )
                            };
                            let elab = if is_sum {
                                Arrow::sum(l.elab.clone(), r.elab.clone())
                            } else {
                                Arrow::prod(l.elab.clone(), r.elab.clone())
                            };
                            Solution { code, elab }
                        });
                    }
                }
            }
            Arrow::Case(g, h) => {
                let ds = as_sum(dom).to_vec();
                for i in 0..=ds.len() {
                    if self.enough(&out) {
                        break;
                    }
                    let (d1, d2) = (sum_of(&ds[..i]), sum_of(&ds[i..]));
                    let (p, q) = (i, ds.len() - i);
                    self.both(&mut out, (g, &d1, cod), (h, &d2, cod), |l, r| Solution {
                        code: Code::case(l.code.clone(), p, q, r.code.clone()),
                        elab: Arrow::case(l.elab.clone(), r.elab.clone()),
                    });
                }
            }
            Arrow::Pair(g, h) => {
                let cs = as_prod(cod).to_vec();
                for j in 0..=cs.len() {
                    if self.enough(&out) {
                        break;
                    }
                    let (c1, c2) = (prod_of(&cs[..j]), prod_of(&cs[j..]));
                    let (p, q) = (j, cs.len() - j);
                    self.both(&mut out, (g, dom, &c1), (h, dom, &c2), |l, r| Solution {
                        code: Code::pair_idx(l.code.clone(), p, q, r.code.clone()),
                        elab: Arrow::pair(l.elab.clone(), r.elab.clone()),
                    });
                }
            }
            Arrow::Seq(g, h) => {
                let mut mids: Vec<Flat> = Vec::new();
                for m in [self.types(g).1.clone(), self.types(h).0.clone()] {
                    if let MaybeFlat::Known(m) = m {
                        if !mids.contains(&m) {
                            mids.push(m);
                        }
                    }
                }
                for m in mids {
                    if self.enough(&out) {
                        break;
                    }
                    self.both(&mut out, (g, dom, &m), (h, &m, cod), |l, r| Solution {
                        code: Code::seq(l.code.clone(), r.code.clone()),
                        elab: Arrow::seq(l.elab.clone(), r.elab.clone()),
                    });
                }
            }
            Arrow::Call(None, body) => {
                if cod.is_empty_sum() {
                    return out;
                }
                let (bd, bc) = self.types(body).clone();
                let xs = as_sum(dom);
                // Input summands are a prefix of the body's domain.
                if let MaybeFlat::Known(bd) = &bd {
                    let bs = as_sum(bd);
                    if !xs.is_empty() && bs.len() > xs.len() && &bs[..xs.len()] == xs {
                        let theta = bs[xs.len()..].to_vec();
                        let target = rebuild_sum(theta.iter().cloned().chain([cod.clone()]).collect());
                        let (m, n, p) = (xs.len(), theta.len(), slen(cod));
                        let u = to_obj(&sum_of(&theta));
                        for s in self.solve(body, bd, &target).iter() {
                            let elab = Arrow::call(to_obj(dom), u.clone(), to_obj(cod), s.elab.clone());
                            self.push(
                                &mut out,
                                Solution {
                                    code: Code::iter(s.code.clone(), m, n, p),
                                    elab,
                                },
                            );
                        }
                    }
                }
                if self.enough(&out) {
                    return out;
                }
                // Output summands are a suffix of the body's codomain.
                if let MaybeFlat::Known(bc) = &bc {
                    let os = as_sum(cod);
                    let cs = as_sum(bc);
                    if cs.len() > os.len() && &cs[cs.len() - os.len()..] == os {
                        let theta = cs[..cs.len() - os.len()].to_vec();
                        let source = rebuild_sum(std::iter::once(dom.clone()).chain(theta.iter().cloned()).collect());
                        let (m, n, p) = (slen(dom), theta.len(), os.len());
                        let u = to_obj(&sum_of(&theta));
                        for s in self.solve(body, &source, bc).iter() {
                            let elab = Arrow::call(to_obj(dom), u.clone(), to_obj(cod), s.elab.clone());
                            self.push(
                                &mut out,
                                Solution {
                                    code: Code::iter(s.code.clone(), m, n, p),
                                    elab,
                                },
                            );
                        }
                    }
                }
            }
            Arrow::Call(Some(b), body) => {
                let (x, u, y) = (fl(&b.0), fl(&b.1), fl(&b.2));
                if &x == dom && &y == cod && !cod.is_empty_sum() {
                    let bd = rebuild_sum(vec![x.clone(), u.clone()]);
                    let bc = rebuild_sum(vec![u.clone(), y.clone()]);
                    let (m, n, p) = (slen(&x), slen(&u), slen(&y));
                    for s in self.solve(body, &bd, &bc).iter() {
                        let elab = Arrow::Call(Some(b.clone()), Box::new(s.elab.clone()));
                        self.push(
                            &mut out,
                            Solution {
                                code: Code::iter(s.code.clone(), m, n, p),
                                elab,
                            },
                        );
                    }
                }
            }
        }
        out
    }
}

/// First solution under the deterministic enumeration order, unoptimized.
pub fn compile_raw(f: &Arrow, dom: &Flat, cod: &Flat, sig: &Signature) -> Option<Solution> {
    let mut s = Solver::new(sig, Mode::First);
    let r = s.solve(f, dom, cod);
    r.first().cloned()
}

/// Every solution (up to [`MAX_SOLUTIONS`] per subproblem), unoptimized.
pub fn compile_all_raw(f: &Arrow, dom: &Flat, cod: &Flat, sig: &Signature) -> Vec<Solution> {
    let mut s = Solver::new(sig, Mode::Exhaustive);
    let r = s.solve(f, dom, cod);
    r.as_ref().clone()
}

/// Distinct optimized codes over all solutions, in enumeration order.
pub fn optimized_variants(f: &Arrow, dom: &Flat, cod: &Flat, sig: &Signature) -> Vec<Code> {
    let mut out: Vec<Code> = Vec::new();
    for s in compile_all_raw(f, dom, cod, sig) {
        let c = peephole(&s.code);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Optimized code for `f : dom -> cod`.
pub fn compile_arrow(f: &Arrow, dom: &Flat, cod: &Flat, sig: &Signature, mode: Mode) -> Result<Code, CompileError> {
    match mode {
        Mode::First => compile_raw(f, dom, cod, sig)
            .map(|s| peephole(&s.code))
            .ok_or(CompileError::NoInstance),
        Mode::Exhaustive => {
            let v = optimized_variants(f, dom, cod, sig);
            match v.len() {
                0 => Err(CompileError::NoInstance),
                1 => Ok(v.into_iter().next().unwrap()),
                _ => Err(CompileError::Ambiguous(v)),
            }
        }
    }
}

/// `f` with every structural arrow and call annotated as the first
/// compilation instantiated it.
pub fn elaborate(f: &Arrow, dom: &Flat, cod: &Flat, sig: &Signature) -> Option<Arrow> {
    compile_raw(f, dom, cod, sig).map(|s| s.elab)
}

#[derive(Clone, Debug)]
pub struct CompiledProgram {
    pub codes: Vec<(String, Code)>,
    pub sig: Signature,
    pub lib: Registry,
}

impl CompiledProgram {
    pub fn code_of(&self, name: &str) -> Option<&Code> {
        self.codes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefFailure {
    pub def: String,
    pub step: usize,
}

impl std::fmt::Display for DefFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot compile step {} of definition {}", self.step + 1, self.def)
    }
}

impl std::error::Error for DefFailure {}

/// Signature of the library references, first declaration winning.
pub fn lib_signature(p: &Program) -> Signature {
    let mut sig = Signature::new();
    for r in &p.refs {
        if !sig.contains(&r.name) {
            sig.push(&r.name, flatten(&r.dom), flatten(&r.cod), ArrowKind::Library);
        }
    }
    sig
}

/// Compiles every def in order; each def sees the earlier ones.
pub fn compile_program(p: &Program, optimize: bool) -> Result<CompiledProgram, DefFailure> {
    compile_program_with(p, optimize, Registry::standard())
}

pub fn compile_program_with(p: &Program, optimize: bool, lib: Registry) -> Result<CompiledProgram, DefFailure> {
    let mut sig = lib_signature(p);
    let mut codes = Vec::new();
    for d in &p.defs {
        let mut code: Option<Code> = None;
        let mut src = flatten(&d.dom);
        for (i, st) in d.steps.iter().enumerate() {
            let dst = flatten(&st.cod);
            let sol = compile_raw(&st.arrow, &src, &dst, &sig).ok_or_else(|| DefFailure {
                def: d.name.clone(),
                step: i,
            })?;
            code = Some(match code {
                None => sol.code,
                Some(c) => Code::seq(c, sol.code),
            });
            src = dst;
        }
        let code = code.expect("def without steps");
        let code = if optimize { peephole(&code) } else { code };
        sig.push(&d.name, flatten(&d.dom), flatten(d.cod()), ArrowKind::Defined);
        codes.push((d.name.clone(), code));
    }
    Ok(CompiledProgram { codes, sig, lib })
}

/// The program with every step replaced by its elaboration.
pub fn elaborate_program(p: &Program) -> Result<Program, DefFailure> {
    let mut sig = lib_signature(p);
    let mut out = p.clone();
    for d in out.defs.iter_mut() {
        let mut src = flatten(&d.dom);
        for (i, st) in d.steps.iter_mut().enumerate() {
            let dst = flatten(&st.cod);
            st.arrow = elaborate(&st.arrow, &src, &dst, &sig).ok_or_else(|| DefFailure {
                def: d.name.clone(),
                step: i,
            })?;
            src = dst;
        }
        sig.push(&d.name, flatten(&d.dom), flatten(d.cod()), ArrowKind::Defined);
    }
    Ok(out)
}
