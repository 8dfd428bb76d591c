//! Rewriting an arrow into a single outermost iteration of a call-free body.
//!
//! Every operator has a counterpart on call forms; the reindexings of the
//! sum summands they need are built as case trees of annotated injections.

use crate::objects::flatten;
use crate::refeval::{RefEnv, RefError};
use crate::syntax::{Arrow, ObjExpr, Program};
use std::collections::HashMap;
use thiserror::Error;

/// `call[input, local, output, body]` with `body : input + local -> local + output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallForm {
    pub input: ObjExpr,
    pub local: ObjExpr,
    pub output: ObjExpr,
    pub body: Arrow,
}

impl CallForm {
    pub fn to_arrow(&self) -> Arrow {
        Arrow::call(
            self.input.clone(),
            self.local.clone(),
            self.output.clone(),
            self.body.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NfError {
    #[error("{0} and {1} are different objects")]
    TypeMismatch(String, String),
    #[error(transparent)]
    Ref(#[from] RefError),
    #[error("no definition named {0}")]
    UnknownDef(String),
}

fn same(a: &ObjExpr, b: &ObjExpr) -> Result<(), NfError> {
    if flatten(a) == flatten(b) {
        Ok(())
    } else {
        Err(NfError::TypeMismatch(a.to_string(), b.to_string()))
    }
}

fn sum(a: &ObjExpr, b: &ObjExpr) -> ObjExpr {
    ObjExpr::sum(a.clone(), b.clone())
}

fn prod(a: &ObjExpr, b: &ObjExpr) -> ObjExpr {
    ObjExpr::prod(a.clone(), b.clone())
}

/// Injection of the summand at `pos` into the left-associated sum of `ts`.
fn inject(pos: usize, ts: &[ObjExpr]) -> Arrow {
    let n = ts.len();
    if n == 1 {
        return Arrow::id(ts[0].clone());
    }
    let init = ObjExpr::sum_of(ts[..n - 1].iter().cloned());
    if pos == n - 1 {
        Arrow::inj2(init, ts[n - 1].clone())
    } else {
        Arrow::seq(inject(pos, &ts[..n - 1]), Arrow::inj1(init, ts[n - 1].clone()))
    }
}

/// The isomorphism from the left-associated sum of `src` to the
/// left-associated sum of `src[perm[0]], src[perm[1]], ...`.
pub fn sum_perm_iso(src: &[ObjExpr], perm: &[usize]) -> Arrow {
    let tgt: Vec<ObjExpr> = perm.iter().map(|&k| src[k].clone()).collect();
    let branch = |k: usize| {
        let pos = perm.iter().position(|&p| p == k).expect("perm is a permutation");
        inject(pos, &tgt)
    };
    (1..src.len()).fold(branch(0), |acc, k| Arrow::case(acc, branch(k)))
}

/// `(A, B)` swapped.
pub fn twist(a: &ObjExpr, b: &ObjExpr) -> Arrow {
    Arrow::pair(Arrow::proj2(a.clone(), b.clone()), Arrow::proj1(a.clone(), b.clone()))
}

/// `(A + B) * C -> A * C + B * C`.
fn ldist(a: &ObjExpr, b: &ObjExpr, c: &ObjExpr) -> Arrow {
    Arrow::seq(
        twist(&sum(a, b), c),
        Arrow::seq(
            Arrow::dist(c.clone(), a.clone(), b.clone()),
            Arrow::sum(twist(c, a), twist(c, b)),
        ),
    )
}

/// A call-free `f : X -> Y` as an iteration with empty local space.
pub fn lift(f: &Arrow, env: &RefEnv) -> Result<CallForm, NfError> {
    let (x, y) = (env.obj_dom(f)?, env.obj_cod(f)?);
    let o = ObjExpr::Initial;
    let body = Arrow::seq(
        Arrow::case(f.clone(), Arrow::bang(y.clone())),
        Arrow::inj2(o.clone(), y.clone()),
    );
    Ok(CallForm {
        input: x,
        local: o,
        output: y,
        body,
    })
}

/// Runs `a`, then `b`, in one loop over the union of their states.
pub fn seq_nf(a: &CallForm, b: &CallForm) -> Result<CallForm, NfError> {
    same(&a.output, &b.input)?;
    Ok(CallForm {
        input: a.input.clone(),
        local: sum(&sum(&a.local, &a.output), &b.local),
        output: b.output.clone(),
        body: Arrow::sum(a.body.clone(), b.body.clone()),
    })
}

pub fn sum_nf(a: &CallForm, b: &CallForm) -> CallForm {
    let (x, u, y) = (&a.input, &a.local, &a.output);
    let (x2, u2, y2) = (&b.input, &b.local, &b.output);
    let pre = sum_perm_iso(&[x.clone(), x2.clone(), u.clone(), u2.clone()], &[0, 2, 1, 3]);
    let post = sum_perm_iso(&[u.clone(), y.clone(), u2.clone(), y2.clone()], &[0, 2, 1, 3]);
    CallForm {
        input: sum(x, x2),
        local: sum(u, u2),
        output: sum(y, y2),
        body: Arrow::seq(pre, Arrow::seq(Arrow::sum(a.body.clone(), b.body.clone()), post)),
    }
}

pub fn prod_nf(a: &CallForm, b: &CallForm) -> CallForm {
    let (x, u, y) = (&a.input, &a.local, &a.output);
    let (x2, u2, y2) = (&b.input, &b.local, &b.output);
    let (f, g) = (&a.body, &b.body);
    let f_x = Arrow::seq(Arrow::inj1(x.clone(), u.clone()), f.clone());
    let f_u = Arrow::seq(Arrow::inj2(x.clone(), u.clone()), f.clone());
    let g_x = Arrow::seq(Arrow::inj1(x2.clone(), u2.clone()), g.clone());
    let g_u = Arrow::seq(Arrow::inj2(x2.clone(), u2.clone()), g.clone());
    let step = Arrow::case(
        Arrow::case(
            Arrow::case(Arrow::prod(f_x, g_x), Arrow::prod(f_u.clone(), g_u.clone())),
            Arrow::prod(f_u, Arrow::inj2(u2.clone(), y2.clone())),
        ),
        Arrow::prod(Arrow::inj2(u.clone(), y.clone()), g_u),
    );
    let (uu, uy, yu, yy) = (prod(u, u2), prod(u, y2), prod(y, u2), prod(y, y2));
    let d = Arrow::seq(
        Arrow::dist(sum(u, y), u2.clone(), y2.clone()),
        Arrow::seq(
            Arrow::sum(ldist(u, y, u2), ldist(u, y, y2)),
            sum_perm_iso(&[uu.clone(), yu.clone(), uy.clone(), yy], &[0, 2, 1, 3]),
        ),
    );
    CallForm {
        input: prod(x, x2),
        local: sum(&sum(&uu, &uy), &yu),
        output: prod(y, y2),
        body: Arrow::seq(step, d),
    }
}

pub fn case_nf(a: &CallForm, b: &CallForm) -> Result<CallForm, NfError> {
    same(&a.output, &b.output)?;
    let merge = Arrow::case(Arrow::id(a.output.clone()), Arrow::id(b.output.clone()));
    let s = sum_nf(a, b);
    let m = CallForm {
        input: s.output.clone(),
        local: ObjExpr::Initial,
        output: a.output.clone(),
        body: Arrow::seq(
            Arrow::case(merge, Arrow::bang(a.output.clone())),
            Arrow::inj2(ObjExpr::Initial, a.output.clone()),
        ),
    };
    seq_nf(&s, &m)
}

pub fn pair_nf(a: &CallForm, b: &CallForm) -> Result<CallForm, NfError> {
    same(&a.input, &b.input)?;
    let (x, x2) = (&a.input, &b.input);
    let diag = Arrow::pair(Arrow::id(x.clone()), Arrow::id(x2.clone()));
    let o = ObjExpr::Initial;
    let m = CallForm {
        input: x.clone(),
        local: o.clone(),
        output: prod(x, x2),
        body: Arrow::seq(Arrow::case(diag, Arrow::bang(prod(x, x2))), Arrow::inj2(o, prod(x, x2))),
    };
    seq_nf(&m, &prod_nf(a, b))
}

/// `call[X, V, Y, call[X + V, W, V + Y, h]]` as one call with local `V + W`.
pub fn flatten_nf(x: &ObjExpr, v: &ObjExpr, y: &ObjExpr, inner: &CallForm) -> Result<CallForm, NfError> {
    same(&inner.input, &sum(x, v))?;
    same(&inner.output, &sum(v, y))?;
    let w = &inner.local;
    let i = sum_perm_iso(&[w.clone(), v.clone(), y.clone()], &[1, 0, 2]);
    Ok(CallForm {
        input: x.clone(),
        local: sum(v, w),
        output: y.clone(),
        body: Arrow::seq(inner.body.clone(), i),
    })
}

/// Normal form of an elaborated arrow whose basic arrows are all library
/// arrows (see [`inline_defs`]).
pub fn normalize(f: &Arrow, env: &RefEnv) -> Result<CallForm, NfError> {
    if f.call_count() == 0 {
        return lift(f, env);
    }
    match f {
        Arrow::Seq(g, h) => seq_nf(&normalize(g, env)?, &normalize(h, env)?),
        Arrow::Sum(g, h) => Ok(sum_nf(&normalize(g, env)?, &normalize(h, env)?)),
        Arrow::Prod(g, h) => Ok(prod_nf(&normalize(g, env)?, &normalize(h, env)?)),
        Arrow::Case(g, h) => case_nf(&normalize(g, env)?, &normalize(h, env)?),
        Arrow::Pair(g, h) => pair_nf(&normalize(g, env)?, &normalize(h, env)?),
        Arrow::Call(Some(b), body) => flatten_nf(&b.0, &b.1, &b.2, &normalize(body, env)?),
        _ => Err(RefError::NotElaborated(f.to_string()).into()),
    }
}

/// `f` with every defined arrow of `p` replaced by its steps. `p` must be
/// elaborated; defs only refer to earlier defs, so one pass in order suffices.
pub fn inline_defs(f: &Arrow, p: &Program) -> Arrow {
    let mut defs: HashMap<&str, Arrow> = HashMap::new();
    for d in &p.defs {
        if !defs.contains_key(d.name.as_str()) {
            let body = substitute(&d.arrow(), &defs);
            defs.insert(&d.name, body);
        }
    }
    substitute(f, &defs)
}

fn substitute(f: &Arrow, defs: &HashMap<&str, Arrow>) -> Arrow {
    let two = |g: &Arrow, h: &Arrow| (substitute(g, defs), substitute(h, defs));
    match f {
        Arrow::Basic(a) => defs.get(a.as_str()).cloned().unwrap_or_else(|| f.clone()),
        Arrow::Sum(g, h) => {
            let (g, h) = two(g, h);
            Arrow::sum(g, h)
        }
        Arrow::Prod(g, h) => {
            let (g, h) = two(g, h);
            Arrow::prod(g, h)
        }
        Arrow::Case(g, h) => {
            let (g, h) = two(g, h);
            Arrow::case(g, h)
        }
        Arrow::Pair(g, h) => {
            let (g, h) = two(g, h);
            Arrow::pair(g, h)
        }
        Arrow::Seq(g, h) => {
            let (g, h) = two(g, h);
            Arrow::seq(g, h)
        }
        Arrow::Call(b, body) => Arrow::Call(b.clone(), Box::new(substitute(body, defs))),
        _ => f.clone(),
    }
}

/// Normal form of the def `name` of `p`, as a one-call arrow between the
/// def's declared objects.
pub fn normalize_def(p: &Program, name: &str) -> Result<(ObjExpr, Arrow, ObjExpr), NfError> {
    let env = RefEnv::from_program(p)?;
    let ep = crate::compiler::elaborate_program(p).map_err(RefError::from)?;
    let d = ep.def(name).ok_or_else(|| NfError::UnknownDef(name.to_string()))?;
    let f = inline_defs(&d.arrow(), &ep);
    let nf = normalize(&f, &env)?;
    Ok((d.dom.clone(), nf.to_arrow(), d.cod().clone()))
}
