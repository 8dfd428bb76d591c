//! Seeded random generation of types, values and elaborated arrows over the
//! natural numbers and three abstract basic objects. Generated arrows are
//! well typed and total: every loop is one of a few patterns known to
//! terminate.

use crate::objects::{flatten, to_obj};
use crate::refeval::Value;
use crate::stdlib::nat_signature;
use crate::syntax::{Arrow, ObjDecl, ObjExpr, Program, Ref, Span};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BASICS: [&str; 4] = ["N", "A", "B", "C"];

/// `obj N, A, B, C; lib <nat arrows>; def .`
pub fn prelude() -> Program {
    Program {
        objects: BASICS
            .iter()
            .map(|n| ObjDecl {
                name: n.to_string(),
                span: Span::default(),
            })
            .collect(),
        refs: nat_signature()
            .entries()
            .iter()
            .map(|e| Ref {
                name: e.name.clone(),
                dom: to_obj(&e.dom),
                cod: to_obj(&e.cod),
                span: Span::default(),
            })
            .collect(),
        defs: Vec::new(),
    }
}

pub fn inhabited(t: &ObjExpr) -> bool {
    match t {
        ObjExpr::Initial => false,
        ObjExpr::Sum(a, b) => inhabited(a) || inhabited(b),
        ObjExpr::Prod(a, b) => inhabited(a) && inhabited(b),
        _ => true,
    }
}

fn n() -> ObjExpr {
    ObjExpr::basic("N")
}

fn i() -> ObjExpr {
    ObjExpr::Terminal
}

pub struct Gen {
    rng: ChaCha8Rng,
    nat: Vec<(String, ObjExpr, ObjExpr)>,
    /// Largest natural number produced by [`Gen::value`].
    pub max_nat: u64,
    /// Allow `O` as the unused side of an injection.
    pub allow_initial: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        let nat = prelude().refs.into_iter().map(|r| (r.name, r.dom, r.cod)).collect();
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            nat,
            max_nat: 5,
            allow_initial: true,
        }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.rng.gen_range(0..xs.len())].clone()
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// An inhabited type with at most `depth` nested constructors.
    pub fn ty(&mut self, depth: u32) -> ObjExpr {
        let k = if depth == 0 {
            self.rng.gen_range(0..5)
        } else {
            self.rng.gen_range(0..8)
        };
        match k {
            0..=3 => ObjExpr::basic(BASICS[k as usize]),
            4 => i(),
            5 => ObjExpr::sum(self.ty(depth - 1), self.ty(depth - 1)),
            _ => ObjExpr::prod(self.ty(depth - 1), self.ty(depth - 1)),
        }
    }

    /// A type for the unused side of an injection, occasionally `O`.
    fn other_ty(&mut self) -> ObjExpr {
        if self.allow_initial && self.chance(0.08) {
            ObjExpr::Initial
        } else {
            let d = self.rng.gen_range(0..2);
            self.ty(d)
        }
    }

    /// A random value of `t`; `None` when `t` is empty.
    pub fn value(&mut self, t: &ObjExpr) -> Option<Value> {
        Some(match t {
            ObjExpr::Initial => return None,
            ObjExpr::Terminal => Value::Unit,
            ObjExpr::Basic(_) => Value::base(self.rng.gen_range(0..=self.max_nat)),
            ObjExpr::Prod(a, b) => Value::pair(self.value(a)?, self.value(b)?),
            ObjExpr::Sum(a, b) => match (inhabited(a), inhabited(b)) {
                (true, true) if self.chance(0.5) => Value::inl(self.value(a)?),
                (true, true) => Value::inr(self.value(b)?),
                (true, false) => Value::inl(self.value(a)?),
                (false, true) => Value::inr(self.value(b)?),
                _ => return None,
            },
        })
    }

    /// A closed term `I -> t`, when one exists without abstract data.
    fn constant(&mut self, t: &ObjExpr) -> Option<Arrow> {
        Some(match t {
            ObjExpr::Terminal => Arrow::id(i()),
            ObjExpr::Basic(b) if b == "N" => Arrow::seq(Arrow::inj1(i(), n()), Arrow::basic("s")),
            ObjExpr::Prod(a, b) => Arrow::pair(self.constant(a)?, self.constant(b)?),
            ObjExpr::Sum(a, b) => {
                if self.chance(0.5) {
                    Arrow::seq(self.constant(a)?, Arrow::inj1((**a).clone(), (**b).clone()))
                } else {
                    Arrow::seq(self.constant(b)?, Arrow::inj2((**a).clone(), (**b).clone()))
                }
            }
            _ => return None,
        })
    }

    fn nat_basic(&mut self, x: &ObjExpr) -> Option<(Arrow, ObjExpr)> {
        let fx = flatten(x);
        let fits: Vec<_> = self.nat.iter().filter(|(_, d, _)| flatten(d) == fx).cloned().collect();
        if fits.is_empty() {
            return None;
        }
        let (name, _, cod) = self.pick(&fits);
        Some((Arrow::basic(&name), cod))
    }

    fn leaf(&mut self, x: &ObjExpr) -> (Arrow, ObjExpr) {
        loop {
            match self.rng.gen_range(0..8) {
                0 => return (Arrow::id(x.clone()), x.clone()),
                1 => {
                    let y = self.other_ty();
                    return (Arrow::inj1(x.clone(), y.clone()), ObjExpr::sum(x.clone(), y));
                }
                2 => {
                    let y = self.other_ty();
                    return (Arrow::inj2(y.clone(), x.clone()), ObjExpr::sum(y, x.clone()));
                }
                3 if self.chance(0.3) => return (Arrow::term(x.clone()), i()),
                4 | 5 => {
                    if let ObjExpr::Prod(a, b) = x {
                        let (a, b) = ((**a).clone(), (**b).clone());
                        return if self.chance(0.5) {
                            (Arrow::proj1(a.clone(), b), a)
                        } else {
                            (Arrow::proj2(a, b.clone()), b)
                        };
                    }
                }
                6 => {
                    if let Some(r) = self.nat_basic(x) {
                        return r;
                    }
                }
                7 => {
                    if let ObjExpr::Prod(a, s) = x {
                        if let ObjExpr::Sum(b, c) = &**s {
                            let (a, b, c) = ((**a).clone(), (**b).clone(), (**c).clone());
                            let cod =
                                ObjExpr::sum(ObjExpr::prod(a.clone(), b.clone()), ObjExpr::prod(a.clone(), c.clone()));
                            return (Arrow::dist(a, b, c), cod);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    /// A total elaborated arrow out of `x` and its codomain.
    pub fn arrow(&mut self, x: &ObjExpr, depth: u32) -> (Arrow, ObjExpr) {
        if depth == 0 {
            return self.leaf(x);
        }
        let d = depth - 1;
        loop {
            match self.rng.gen_range(0..13) {
                0 | 1 => return self.leaf(x),
                2 | 3 => {
                    let (f, m) = self.arrow(x, d);
                    let (g, y) = self.arrow(&m, d);
                    return (Arrow::seq(f, g), y);
                }
                4 => {
                    let (f, y1) = self.arrow(x, d);
                    let (g, y2) = self.arrow(x, d);
                    return (Arrow::pair(f, g), ObjExpr::prod(y1, y2));
                }
                5 => {
                    if let ObjExpr::Sum(a, b) = x {
                        let (f, y1) = self.arrow(a, d);
                        let (g, y2) = self.arrow(b, d);
                        return (Arrow::sum(f, g), ObjExpr::sum(y1, y2));
                    }
                }
                6 => {
                    if let ObjExpr::Sum(a, b) = x {
                        let (f, y1) = self.arrow(a, d);
                        let (g, y2) = self.arrow(b, d);
                        if self.chance(0.3) {
                            if let Some(k) = self.constant(&y1) {
                                let g = Arrow::seq(Arrow::term((**b).clone()), k);
                                return (Arrow::case(f, g), y1);
                            }
                        }
                        let y = ObjExpr::sum(y1.clone(), y2.clone());
                        let l = Arrow::seq(f, Arrow::inj1(y1.clone(), y2.clone()));
                        let r = Arrow::seq(g, Arrow::inj2(y1, y2));
                        return (Arrow::case(l, r), y);
                    }
                }
                7 => {
                    if let ObjExpr::Prod(a, b) = x {
                        let (f, y1) = self.arrow(a, d);
                        let (g, y2) = self.arrow(b, d);
                        return (Arrow::prod(f, g), ObjExpr::prod(y1, y2));
                    }
                }
                8 => return self.two_step(x, d),
                9 => return self.lifted(x, d),
                10 => {
                    if flatten(x) == flatten(&n()) {
                        let c = countdown();
                        return if x == &n() {
                            (c, n())
                        } else {
                            (Arrow::seq(Arrow::id(x.clone()), c), n())
                        };
                    }
                }
                11 => {
                    if let Some(r) = self.nat_basic(x) {
                        return r;
                    }
                }
                _ => {
                    if let ObjExpr::Prod(_, s) = x {
                        if let ObjExpr::Sum(..) = &**s {
                            let (f, m) = self.leaf_dist(x);
                            let (g, y) = self.arrow(&m, d);
                            return (Arrow::seq(f, g), y);
                        }
                    }
                }
            }
        }
    }

    fn leaf_dist(&mut self, x: &ObjExpr) -> (Arrow, ObjExpr) {
        let ObjExpr::Prod(a, s) = x else { unreachable!() };
        let ObjExpr::Sum(b, c) = &**s else { unreachable!() };
        let (a, b, c) = ((**a).clone(), (**b).clone(), (**c).clone());
        let cod = ObjExpr::sum(ObjExpr::prod(a.clone(), b.clone()), ObjExpr::prod(a.clone(), c.clone()));
        (Arrow::dist(a, b, c), cod)
    }

    /// `call[X, X, Y, inj_1 | f ; inj_2]`: one pass through the local space.
    /// Calls need a nonempty output space, so an empty `Y` yields `f` itself.
    pub fn two_step(&mut self, x: &ObjExpr, depth: u32) -> (Arrow, ObjExpr) {
        let (f, y) = self.arrow(x, depth);
        if flatten(&y).is_empty_sum() {
            return (f, y);
        }
        let body = Arrow::case(
            Arrow::inj1(x.clone(), y.clone()),
            Arrow::seq(f, Arrow::inj2(x.clone(), y.clone())),
        );
        (Arrow::call(x.clone(), x.clone(), y.clone(), body), y)
    }

    /// `call[X, O, Y, (f | !) ; inj_2]`: a call with an empty local space.
    pub fn lifted(&mut self, x: &ObjExpr, depth: u32) -> (Arrow, ObjExpr) {
        let (f, y) = self.arrow(x, depth);
        if flatten(&y).is_empty_sum() {
            return (f, y);
        }
        let o = ObjExpr::Initial;
        let body = Arrow::seq(
            Arrow::case(f, Arrow::bang(y.clone())),
            Arrow::inj2(o.clone(), y.clone()),
        );
        (Arrow::call(x.clone(), o, y.clone(), body), y)
    }

    /// A random type, arrow and input value.
    pub fn case(&mut self, depth: u32) -> (Arrow, ObjExpr, ObjExpr) {
        let td = self.rng.gen_range(0..3);
        let x = self.ty(td);
        let (f, y) = self.arrow(&x, depth);
        (f, x, y)
    }
}

/// `call[N, N, N, -]` counting its input down to zero.
pub fn countdown() -> Arrow {
    let zero = Arrow::seq(Arrow::inj1(i(), n()), Arrow::basic("s"));
    let test = Arrow::case(Arrow::seq(zero, Arrow::inj2(n(), n())), Arrow::inj1(n(), n()));
    let body = Arrow::case(Arrow::inj1(n(), n()), Arrow::seq(Arrow::basic("p"), test));
    Arrow::call(n(), n(), n(), body)
}
