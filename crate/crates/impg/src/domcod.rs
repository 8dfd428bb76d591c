//! Best-effort domain and codomain inference for well-typed arrows.

use crate::objects::{flatten, rebuild_prod, rebuild_sum, Flat};
use crate::signature::Signature;
use crate::syntax::{Arrow, ObjExpr};

/// `Unknown` is absorbing for sums and products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MaybeFlat {
    Known(Flat),
    Unknown,
}

use MaybeFlat::{Known, Unknown};

impl MaybeFlat {
    pub fn known(&self) -> Option<&Flat> {
        match self {
            Known(x) => Some(x),
            Unknown => None,
        }
    }

    /// Either view agrees with `x`: unknown, or known and equal.
    pub fn admits(&self, x: &Flat) -> bool {
        match self {
            Known(y) => y == x,
            Unknown => true,
        }
    }

    fn or(self, other: MaybeFlat) -> MaybeFlat {
        match self {
            Known(_) => self,
            Unknown => other,
        }
    }
}

fn sum2(a: MaybeFlat, b: MaybeFlat) -> MaybeFlat {
    match (a, b) {
        (Known(a), Known(b)) => Known(rebuild_sum(vec![a, b])),
        _ => Unknown,
    }
}

fn prod2(a: MaybeFlat, b: MaybeFlat) -> MaybeFlat {
    match (a, b) {
        (Known(a), Known(b)) => Known(rebuild_prod(vec![a, b])),
        _ => Unknown,
    }
}

fn fl(x: &ObjExpr) -> MaybeFlat {
    Known(flatten(x))
}

fn fsum(x: &ObjExpr, y: &ObjExpr) -> MaybeFlat {
    Known(rebuild_sum(vec![flatten(x), flatten(y)]))
}

fn fprod(x: &ObjExpr, y: &ObjExpr) -> MaybeFlat {
    Known(rebuild_prod(vec![flatten(x), flatten(y)]))
}

pub fn dom(f: &Arrow, sig: &Signature) -> MaybeFlat {
    match f {
        Arrow::Basic(a) => sig.spec_of(a).map_or(Unknown, |e| Known(e.dom.clone())),
        Arrow::Id(Some(x)) => fl(x),
        Arrow::Inj1(Some(b)) => fl(&b.0),
        Arrow::Inj2(Some(b)) => fl(&b.1),
        Arrow::Proj1(Some(b)) | Arrow::Proj2(Some(b)) => fprod(&b.0, &b.1),
        Arrow::Bang(_) => Known(Flat::empty()),
        Arrow::Term(Some(x)) => fl(x),
        Arrow::Dist(Some(b)) => Known(rebuild_prod(vec![
            flatten(&b.0),
            rebuild_sum(vec![flatten(&b.1), flatten(&b.2)]),
        ])),
        Arrow::Id(None)
        | Arrow::Inj1(None)
        | Arrow::Inj2(None)
        | Arrow::Proj1(None)
        | Arrow::Proj2(None)
        | Arrow::Term(None)
        | Arrow::Dist(None)
        | Arrow::Call(None, _) => Unknown,
        Arrow::Sum(f, g) | Arrow::Case(f, g) => sum2(dom(f, sig), dom(g, sig)),
        Arrow::Prod(f, g) => prod2(dom(f, sig), dom(g, sig)),
        Arrow::Pair(f, g) => dom(f, sig).or(dom(g, sig)),
        Arrow::Seq(f, _) => dom(f, sig),
        Arrow::Call(Some(b), _) => fl(&b.0),
    }
}

pub fn cod(f: &Arrow, sig: &Signature) -> MaybeFlat {
    match f {
        Arrow::Basic(a) => sig.spec_of(a).map_or(Unknown, |e| Known(e.cod.clone())),
        Arrow::Id(Some(x)) => fl(x),
        Arrow::Inj1(Some(b)) | Arrow::Inj2(Some(b)) => fsum(&b.0, &b.1),
        Arrow::Proj1(Some(b)) => fl(&b.0),
        Arrow::Proj2(Some(b)) => fl(&b.1),
        Arrow::Bang(Some(x)) => fl(x),
        Arrow::Term(_) => Known(Flat::unit()),
        Arrow::Dist(Some(b)) => Known(rebuild_sum(vec![
            rebuild_prod(vec![flatten(&b.0), flatten(&b.1)]),
            rebuild_prod(vec![flatten(&b.0), flatten(&b.2)]),
        ])),
        Arrow::Id(None)
        | Arrow::Inj1(None)
        | Arrow::Inj2(None)
        | Arrow::Proj1(None)
        | Arrow::Proj2(None)
        | Arrow::Bang(None)
        | Arrow::Dist(None)
        | Arrow::Call(None, _) => Unknown,
        Arrow::Sum(f, g) => sum2(cod(f, sig), cod(g, sig)),
        Arrow::Prod(f, g) | Arrow::Pair(f, g) => prod2(cod(f, sig), cod(g, sig)),
        Arrow::Case(f, g) => cod(f, sig).or(cod(g, sig)),
        Arrow::Seq(_, g) => cod(g, sig),
        Arrow::Call(Some(b), _) => fl(&b.2),
    }
}
