//! Set-semantics evaluation on structured values, and the representation of
//! values as forests.
//!
//! Values are typed by object expressions, not flat objects, so two
//! flat-equal expressions such as `(A + B) + C` and `A + (B + C)` carry
//! differently nested values. Wherever typing only guarantees flat equality
//! (composition, the branches of case and pairing, iteration) the evaluator
//! converts through [`FVal`], the value shape of a flat object.

use crate::compiler::{elaborate_program, DefFailure};
use crate::forest::{concat, mk_node, Datum, Forest, Tree};
use crate::objects::{flatten, plen, slen, Flat};
use crate::stdlib::Registry;
use crate::syntax::{Arrow, ObjExpr, Program};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Unit,
    Base(Datum),
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
}

impl Value {
    pub fn base(n: u64) -> Value {
        Value::Base(Datum::from(n))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: Value) -> Value {
        Value::Inl(Box::new(a))
    }

    pub fn inr(a: Value) -> Value {
        Value::Inr(Box::new(a))
    }

    /// Structural typing: `Unit : I`, `Base : A`, pairs in products,
    /// injections in sums.
    pub fn has_type(&self, t: &ObjExpr) -> bool {
        match (self, t) {
            (Value::Unit, ObjExpr::Terminal) => true,
            (Value::Base(_), ObjExpr::Basic(_)) => true,
            (Value::Pair(a, b), ObjExpr::Prod(x, y)) => a.has_type(x) && b.has_type(y),
            (Value::Inl(a), ObjExpr::Sum(x, _)) => a.has_type(x),
            (Value::Inr(b), ObjExpr::Sum(_, y)) => b.has_type(y),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "*"),
            Value::Base(n) => write!(f, "{n}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "inl {a}"),
            Value::Inr(b) => write!(f, "inr {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RefError {
    #[error("iteration budget exhausted")]
    BudgetExhausted,
    #[error("value does not match type {0}")]
    Mismatch(String),
    #[error("arrow {0} lacks object annotations")]
    NotElaborated(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("library arrow {0} failed: {1}")]
    Library(String, String),
    #[error(transparent)]
    Elaboration(#[from] DefFailure),
}

fn mismatch(t: &ObjExpr) -> RefError {
    RefError::Mismatch(t.to_string())
}

/// Representation of `v : t` as a forest.
pub fn rep(v: &Value, t: &ObjExpr) -> Result<Forest, RefError> {
    Ok(match (v, t) {
        (Value::Unit, ObjExpr::Terminal) => Vec::new(),
        (Value::Base(n), ObjExpr::Basic(_)) => vec![Tree::Leaf(n.clone())],
        (Value::Pair(a, b), ObjExpr::Prod(x, y)) => concat(rep(a, x)?, rep(b, y)?),
        (Value::Inl(a), ObjExpr::Sum(x, y)) | (Value::Inr(a), ObjExpr::Sum(x, y)) => {
            let (q, r) = (slen(&flatten(x)), slen(&flatten(y)));
            let left = matches!(v, Value::Inl(_));
            let u = rep(a, if left { x } else { y })?;
            if q + r < 2 {
                u
            } else {
                vec![mk_node(if left { 0 } else { q }, u)]
            }
        }
        _ => return Err(mismatch(t)),
    })
}

/// Number of trees representing any value of `t`.
fn width(t: &ObjExpr) -> usize {
    match t {
        ObjExpr::Terminal => 0,
        ObjExpr::Basic(_) => 1,
        _ => plen(&flatten(t)),
    }
}

/// Inverse of [`rep`] at a known type.
pub fn unrep(d: &[Tree], t: &ObjExpr) -> Result<Value, RefError> {
    if d.len() != width(t) {
        return Err(mismatch(t));
    }
    match t {
        ObjExpr::Terminal => Ok(Value::Unit),
        ObjExpr::Initial => Err(mismatch(t)),
        ObjExpr::Basic(_) => match d {
            [Tree::Leaf(n)] => Ok(Value::Base(n.clone())),
            _ => Err(mismatch(t)),
        },
        ObjExpr::Prod(x, y) => {
            let k = width(x);
            Ok(Value::pair(unrep(&d[..k], x)?, unrep(&d[k..], y)?))
        }
        ObjExpr::Sum(x, y) => {
            let (q, r) = (slen(&flatten(x)), slen(&flatten(y)));
            if q + r < 2 {
                return match (q, r) {
                    (1, 0) => Ok(Value::inl(unrep(d, x)?)),
                    (0, 1) => Ok(Value::inr(unrep(d, y)?)),
                    _ => Err(mismatch(t)),
                };
            }
            let [Tree::Node(k, c)] = d else {
                return Err(mismatch(t));
            };
            if *k < q {
                let sub = if q == 1 {
                    c.clone()
                } else {
                    vec![Tree::Node(*k, c.clone())]
                };
                Ok(Value::inl(unrep(&sub, x)?))
            } else if *k < q + r {
                let sub = if r == 1 {
                    c.clone()
                } else {
                    vec![Tree::Node(k - q, c.clone())]
                };
                Ok(Value::inr(unrep(&sub, y)?))
            } else {
                Err(mismatch(t))
            }
        }
    }
}

/// A value shaped by a flat object: atoms, tuples for product lists and
/// summand indices for sum lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FVal {
    Atom(Datum),
    Tup(Vec<FVal>),
    Tag(usize, Box<FVal>),
}

fn tup_items(v: FVal, t: &Flat) -> Vec<FVal> {
    match (v, t) {
        (FVal::Tup(items), Flat::Prod(_)) => items,
        (v, _) => vec![v],
    }
}

/// `v : t` as a value of `flatten(t)`.
pub fn to_flat(v: &Value, t: &ObjExpr) -> Result<FVal, RefError> {
    Ok(match (v, t) {
        (Value::Unit, ObjExpr::Terminal) => FVal::Tup(Vec::new()),
        (Value::Base(n), ObjExpr::Basic(_)) => FVal::Atom(n.clone()),
        (Value::Pair(a, b), ObjExpr::Prod(x, y)) => {
            let mut items = tup_items(to_flat(a, x)?, &flatten(x));
            items.extend(tup_items(to_flat(b, y)?, &flatten(y)));
            if items.len() == 1 {
                items.pop().unwrap()
            } else {
                FVal::Tup(items)
            }
        }
        (Value::Inl(a), ObjExpr::Sum(x, y)) | (Value::Inr(a), ObjExpr::Sum(x, y)) => {
            let left = matches!(v, Value::Inl(_));
            let (fx, fy) = (flatten(x), flatten(y));
            let (side, fs) = if left { (x, &fx) } else { (y, &fy) };
            let offset = if left { 0 } else { slen(&fx) };
            let inner = to_flat(a, side)?;
            if slen(&fx) + slen(&fy) < 2 {
                inner
            } else if let (Flat::Sum(_), FVal::Tag(k, w)) = (fs, &inner) {
                FVal::Tag(offset + k, w.clone())
            } else {
                FVal::Tag(offset, Box::new(inner))
            }
        }
        _ => return Err(mismatch(t)),
    })
}

/// Inverse of [`to_flat`].
pub fn from_flat(v: &FVal, t: &ObjExpr) -> Result<Value, RefError> {
    match t {
        ObjExpr::Terminal => Ok(Value::Unit),
        ObjExpr::Initial => Err(mismatch(t)),
        ObjExpr::Basic(_) => match v {
            FVal::Atom(n) => Ok(Value::Base(n.clone())),
            _ => Err(mismatch(t)),
        },
        ObjExpr::Prod(x, y) => {
            let (fx, fy) = (flatten(x), flatten(y));
            let (m, n) = (plen(&fx), plen(&fy));
            let items: Vec<FVal> = if m + n == 1 {
                vec![v.clone()]
            } else {
                match v {
                    FVal::Tup(items) if items.len() == m + n => items.clone(),
                    _ => return Err(mismatch(t)),
                }
            };
            let part = |items: &[FVal], f: &Flat| match f {
                Flat::Prod(_) => FVal::Tup(items.to_vec()),
                _ => items[0].clone(),
            };
            Ok(Value::pair(
                from_flat(&part(&items[..m], &fx), x)?,
                from_flat(&part(&items[m..], &fy), y)?,
            ))
        }
        ObjExpr::Sum(x, y) => {
            let (fx, fy) = (flatten(x), flatten(y));
            let (q, r) = (slen(&fx), slen(&fy));
            if q + r < 2 {
                return match (q, r) {
                    (1, 0) => Ok(Value::inl(from_flat(v, x)?)),
                    (0, 1) => Ok(Value::inr(from_flat(v, y)?)),
                    _ => Err(mismatch(t)),
                };
            }
            let FVal::Tag(k, w) = v else {
                return Err(mismatch(t));
            };
            let sub = |k: usize, f: &Flat| match f {
                Flat::Sum(_) => FVal::Tag(k, w.clone()),
                _ => (**w).clone(),
            };
            if *k < q {
                Ok(Value::inl(from_flat(&sub(*k, &fx), x)?))
            } else if *k < q + r {
                Ok(Value::inr(from_flat(&sub(k - q, &fy), y)?))
            } else {
                Err(mismatch(t))
            }
        }
    }
}

/// Moves `v` between flat-equal types.
pub fn conv(v: Value, from: &ObjExpr, to: &ObjExpr) -> Result<Value, RefError> {
    if from == to {
        return Ok(v);
    }
    from_flat(&to_flat(&v, from)?, to)
}

#[derive(Clone, Debug)]
enum Entry {
    Library(ObjExpr, ObjExpr),
    Defined(ObjExpr, Vec<(Arrow, ObjExpr)>),
}

/// Typing and meaning of basic arrows.
#[derive(Clone, Debug)]
pub struct RefEnv {
    arrows: HashMap<String, Entry>,
    lib: Registry,
}

impl RefEnv {
    /// Library references of `p` and its defs, elaborated. Earlier
    /// declarations win.
    pub fn from_program(p: &Program) -> Result<RefEnv, RefError> {
        Self::from_program_with(p, Registry::standard())
    }

    pub fn from_program_with(p: &Program, lib: Registry) -> Result<RefEnv, RefError> {
        let p = elaborate_program(p)?;
        let mut arrows = HashMap::new();
        for r in &p.refs {
            arrows
                .entry(r.name.clone())
                .or_insert_with(|| Entry::Library(r.dom.clone(), r.cod.clone()));
        }
        for d in &p.defs {
            let steps = d.steps.iter().map(|s| (s.arrow.clone(), s.cod.clone())).collect();
            arrows
                .entry(d.name.clone())
                .or_insert_with(|| Entry::Defined(d.dom.clone(), steps));
        }
        Ok(RefEnv { arrows, lib })
    }

    fn entry(&self, a: &str) -> Result<&Entry, RefError> {
        self.arrows.get(a).ok_or_else(|| RefError::UnknownArrow(a.to_string()))
    }

    /// Domain of an elaborated arrow.
    pub fn obj_dom(&self, f: &Arrow) -> Result<ObjExpr, RefError> {
        Ok(match f {
            Arrow::Basic(a) => match self.entry(a)? {
                Entry::Library(d, _) | Entry::Defined(d, _) => d.clone(),
            },
            Arrow::Id(Some(x)) | Arrow::Term(Some(x)) => x.clone(),
            Arrow::Inj1(Some(b)) => b.0.clone(),
            Arrow::Inj2(Some(b)) => b.1.clone(),
            Arrow::Proj1(Some(b)) | Arrow::Proj2(Some(b)) => ObjExpr::prod(b.0.clone(), b.1.clone()),
            Arrow::Bang(_) => ObjExpr::Initial,
            Arrow::Dist(Some(b)) => ObjExpr::prod(b.0.clone(), ObjExpr::sum(b.1.clone(), b.2.clone())),
            Arrow::Sum(g, h) | Arrow::Case(g, h) => ObjExpr::sum(self.obj_dom(g)?, self.obj_dom(h)?),
            Arrow::Prod(g, h) => ObjExpr::prod(self.obj_dom(g)?, self.obj_dom(h)?),
            Arrow::Pair(g, _) | Arrow::Seq(g, _) => self.obj_dom(g)?,
            Arrow::Call(Some(b), _) => b.0.clone(),
            _ => return Err(RefError::NotElaborated(f.to_string())),
        })
    }

    /// Codomain of an elaborated arrow.
    pub fn obj_cod(&self, f: &Arrow) -> Result<ObjExpr, RefError> {
        Ok(match f {
            Arrow::Basic(a) => match self.entry(a)? {
                Entry::Library(_, c) => c.clone(),
                Entry::Defined(d, steps) => steps.last().map_or(d, |s| &s.1).clone(),
            },
            Arrow::Id(Some(x)) | Arrow::Bang(Some(x)) => x.clone(),
            Arrow::Term(_) => ObjExpr::Terminal,
            Arrow::Inj1(Some(b)) | Arrow::Inj2(Some(b)) => ObjExpr::sum(b.0.clone(), b.1.clone()),
            Arrow::Proj1(Some(b)) => b.0.clone(),
            Arrow::Proj2(Some(b)) => b.1.clone(),
            Arrow::Dist(Some(b)) => ObjExpr::sum(
                ObjExpr::prod(b.0.clone(), b.1.clone()),
                ObjExpr::prod(b.0.clone(), b.2.clone()),
            ),
            Arrow::Sum(g, h) => ObjExpr::sum(self.obj_cod(g)?, self.obj_cod(h)?),
            Arrow::Prod(g, h) | Arrow::Pair(g, h) => ObjExpr::prod(self.obj_cod(g)?, self.obj_cod(h)?),
            Arrow::Case(g, _) => self.obj_cod(g)?,
            Arrow::Seq(_, h) => self.obj_cod(h)?,
            Arrow::Call(Some(b), _) => b.2.clone(),
            _ => return Err(RefError::NotElaborated(f.to_string())),
        })
    }

    fn eval(&self, f: &Arrow, v: Value, fuel: &mut u64) -> Result<Value, RefError> {
        let bad = || RefError::Mismatch(f.to_string());
        Ok(match f {
            Arrow::Basic(a) => match self.entry(a)? {
                Entry::Library(d, c) => {
                    let out = self
                        .lib
                        .apply(a, &rep(&v, d)?)
                        .map_err(|e| RefError::Library(a.clone(), e))?;
                    unrep(&out, c)?
                }
                Entry::Defined(d, steps) => {
                    let (mut v, mut at) = (v, d);
                    for (g, y) in steps {
                        v = conv(v, at, &self.obj_dom(g)?)?;
                        v = self.eval(g, v, fuel)?;
                        v = conv(v, &self.obj_cod(g)?, y)?;
                        at = y;
                    }
                    v
                }
            },
            Arrow::Id(_) => v,
            Arrow::Inj1(_) => Value::inl(v),
            Arrow::Inj2(_) => Value::inr(v),
            Arrow::Proj1(_) | Arrow::Proj2(_) => match v {
                Value::Pair(a, b) => *if matches!(f, Arrow::Proj1(_)) { a } else { b },
                _ => return Err(bad()),
            },
            Arrow::Bang(_) => return Err(bad()),
            Arrow::Term(_) => Value::Unit,
            Arrow::Dist(_) => match v {
                Value::Pair(x, s) => match *s {
                    Value::Inl(y) => Value::inl(Value::Pair(x, y)),
                    Value::Inr(z) => Value::inr(Value::Pair(x, z)),
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            },
            Arrow::Sum(g, h) => match v {
                Value::Inl(a) => Value::inl(self.eval(g, *a, fuel)?),
                Value::Inr(b) => Value::inr(self.eval(h, *b, fuel)?),
                _ => return Err(bad()),
            },
            Arrow::Prod(g, h) => match v {
                Value::Pair(a, b) => Value::pair(self.eval(g, *a, fuel)?, self.eval(h, *b, fuel)?),
                _ => return Err(bad()),
            },
            Arrow::Case(g, h) => match v {
                Value::Inl(a) => self.eval(g, *a, fuel)?,
                Value::Inr(b) => {
                    let r = self.eval(h, *b, fuel)?;
                    conv(r, &self.obj_cod(h)?, &self.obj_cod(g)?)?
                }
                _ => return Err(bad()),
            },
            Arrow::Pair(g, h) => {
                let w = conv(v.clone(), &self.obj_dom(g)?, &self.obj_dom(h)?)?;
                Value::pair(self.eval(g, v, fuel)?, self.eval(h, w, fuel)?)
            }
            Arrow::Seq(g, h) => {
                let m = self.eval(g, v, fuel)?;
                let m = conv(m, &self.obj_cod(g)?, &self.obj_dom(h)?)?;
                self.eval(h, m, fuel)?
            }
            Arrow::Call(Some(b), body) => {
                let (x, u, y) = (&b.0, &b.1, &b.2);
                let (xu, uy) = (ObjExpr::sum(x.clone(), u.clone()), ObjExpr::sum(u.clone(), y.clone()));
                let (bd, bc) = (self.obj_dom(body)?, self.obj_cod(body)?);
                let mut cur = Value::inl(v);
                loop {
                    if *fuel == 0 {
                        return Err(RefError::BudgetExhausted);
                    }
                    *fuel -= 1;
                    let r = self.eval(body, conv(cur, &xu, &bd)?, fuel)?;
                    match conv(r, &bc, &uy)? {
                        Value::Inl(w) => cur = Value::inr(*w),
                        Value::Inr(out) => break *out,
                        _ => return Err(bad()),
                    }
                }
            }
            Arrow::Call(None, _) => return Err(RefError::NotElaborated(f.to_string())),
        })
    }
}

/// Evaluates an elaborated arrow on a value of its domain.
pub fn eval_ref(f: &Arrow, v: Value, env: &RefEnv, budget: u64) -> Result<Value, RefError> {
    let mut fuel = budget;
    env.eval(f, v, &mut fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::leaf;
    use crate::syntax::{parse_arrow, parse_obj, parse_program};

    fn o(s: &str) -> ObjExpr {
        parse_obj(s).unwrap()
    }

    fn env() -> RefEnv {
        RefEnv::from_program(&parse_program("obj N, A, B, C; lib s : I + N -> N, p : N -> I + N; def .").unwrap())
            .unwrap()
    }

    #[test]
    fn representations() {
        assert_eq!(rep(&Value::Unit, &o("I")).unwrap(), vec![]);
        let five = Value::base(5);
        assert_eq!(
            rep(&Value::inl(five.clone()), &o("N + N")).unwrap(),
            vec![Tree::Node(0, vec![leaf(5)])]
        );
        assert_eq!(
            rep(&Value::inr(five.clone()), &o("N + N")).unwrap(),
            vec![Tree::Node(1, vec![leaf(5)])]
        );
        let v = Value::inr(Value::inl(five));
        let d = rep(&v, &o("N + (N + N)")).unwrap();
        assert_eq!(d, vec![Tree::Node(1, vec![leaf(5)])]);
        assert_eq!(unrep(&d, &o("N + (N + N)")).unwrap(), v);
    }

    #[test]
    fn flat_conversion() {
        let v = Value::inl(Value::inr(Value::base(1)));
        let w = conv(v, &o("(A + B) + C"), &o("A + (B + C)")).unwrap();
        assert_eq!(w, Value::inr(Value::inl(Value::base(1))));
        let p = Value::pair(Value::pair(Value::base(1), Value::Unit), Value::base(2));
        let q = conv(p, &o("(A * I) * B"), &o("A * B")).unwrap();
        assert_eq!(q, Value::pair(Value::base(1), Value::base(2)));
    }

    #[test]
    fn structural_semantics() {
        let e = env();
        let twist = parse_arrow("proj_2(A, B), proj_1(A, B)").unwrap();
        let v = Value::pair(Value::base(1), Value::base(2));
        assert_eq!(
            eval_ref(&twist, v, &e, 10).unwrap(),
            Value::pair(Value::base(2), Value::base(1))
        );
        let dist = parse_arrow("dist(A, B, C)").unwrap();
        let v = Value::pair(Value::base(1), Value::inr(Value::base(3)));
        assert_eq!(
            eval_ref(&dist, v, &e, 10).unwrap(),
            Value::inr(Value::pair(Value::base(1), Value::base(3)))
        );
    }

    #[test]
    fn countdown_call() {
        let e = env();
        let f = parse_arrow("call[N, N, N, (id(N) | id(N)) ; p ; ((inj_1(I, N) ; s ; inj_2(N, N)) | inj_1(N, N))]")
            .unwrap();
        assert_eq!(eval_ref(&f, Value::base(3), &e, 10).unwrap(), Value::base(0));
        assert_eq!(eval_ref(&f, Value::base(3), &e, 3), Err(RefError::BudgetExhausted));
    }
}
