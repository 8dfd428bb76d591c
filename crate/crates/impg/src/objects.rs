//! Flat objects in normal form.
//!
//! Invariants: no list has exactly one item, no sum list directly contains a
//! sum list, no product list directly contains a product list. `Sum([])` is
//! the initial object and `Prod([])` the terminal one. A product with an
//! empty-sum factor is kept as is.

use crate::syntax::ObjExpr;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flat {
    Basic(String),
    Sum(Vec<Flat>),
    Prod(Vec<Flat>),
}

impl Flat {
    pub fn basic(name: &str) -> Flat {
        Flat::Basic(name.to_string())
    }

    pub fn empty() -> Flat {
        Flat::Sum(Vec::new())
    }

    pub fn unit() -> Flat {
        Flat::Prod(Vec::new())
    }

    pub fn is_empty_sum(&self) -> bool {
        matches!(self, Flat::Sum(v) if v.is_empty())
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Flat::Prod(v) if v.is_empty())
    }

    pub fn is_normal(&self) -> bool {
        match self {
            Flat::Basic(_) => true,
            Flat::Sum(v) => v.len() != 1 && v.iter().all(|x| !matches!(x, Flat::Sum(_)) && x.is_normal()),
            Flat::Prod(v) => v.len() != 1 && v.iter().all(|x| !matches!(x, Flat::Prod(_)) && x.is_normal()),
        }
    }
}

pub fn flatten(x: &ObjExpr) -> Flat {
    match x {
        ObjExpr::Basic(n) => Flat::Basic(n.clone()),
        ObjExpr::Terminal => Flat::unit(),
        ObjExpr::Initial => Flat::empty(),
        ObjExpr::Sum(a, b) => rebuild_sum(vec![flatten(a), flatten(b)]),
        ObjExpr::Prod(a, b) => rebuild_prod(vec![flatten(a), flatten(b)]),
    }
}

/// The sum view: the summands of `x` (none for the initial object).
pub fn as_sum(x: &Flat) -> &[Flat] {
    match x {
        Flat::Sum(v) => v,
        _ => std::slice::from_ref(x),
    }
}

/// The product view: the factors of `x` (none for the terminal object).
pub fn as_prod(x: &Flat) -> &[Flat] {
    match x {
        Flat::Prod(v) => v,
        _ => std::slice::from_ref(x),
    }
}

pub fn slen(x: &Flat) -> usize {
    as_sum(x).len()
}

pub fn plen(x: &Flat) -> usize {
    as_prod(x).len()
}

/// Normal form of the sum of `items` (each already normal).
pub fn rebuild_sum(items: Vec<Flat>) -> Flat {
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        match it {
            Flat::Sum(v) => out.extend(v),
            other => out.push(other),
        }
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Flat::Sum(out)
    }
}

/// Normal form of the product of `items` (each already normal).
pub fn rebuild_prod(items: Vec<Flat>) -> Flat {
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        match it {
            Flat::Prod(v) => out.extend(v),
            other => out.push(other),
        }
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Flat::Prod(out)
    }
}

pub fn sum_of(items: &[Flat]) -> Flat {
    rebuild_sum(items.to_vec())
}

pub fn prod_of(items: &[Flat]) -> Flat {
    rebuild_prod(items.to_vec())
}

/// Zero-based list indexing. Panics when `n` is out of range.
pub fn elem(n: usize, items: &[Flat]) -> &Flat {
    assert!(n < items.len(), "elem {n} of a {}-item list", items.len());
    &items[n]
}

/// An object expression whose flattening is `x` (left-associated lists).
pub fn to_obj(x: &Flat) -> ObjExpr {
    match x {
        Flat::Basic(n) => ObjExpr::Basic(n.clone()),
        Flat::Sum(v) => ObjExpr::sum_of(v.iter().map(to_obj)),
        Flat::Prod(v) => ObjExpr::prod_of(v.iter().map(to_obj)),
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, items) = match self {
            Flat::Basic(n) => return f.write_str(n),
            Flat::Sum(v) => ("+(", v),
            Flat::Prod(v) => ("*(", v),
        };
        f.write_str(open)?;
        for (i, x) in items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_obj;

    fn fl(s: &str) -> Flat {
        flatten(&parse_obj(s).unwrap())
    }

    fn b(n: &str) -> Flat {
        Flat::basic(n)
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(fl("A + (B + C)"), Flat::Sum(vec![b("A"), b("B"), b("C")]));
        assert_eq!(fl("I"), Flat::Prod(vec![]));
        assert_eq!(fl("A * I"), b("A"));
        assert_eq!(fl("A * O"), Flat::Prod(vec![b("A"), Flat::empty()]));
        assert_eq!(fl("X*Y+Z"), Flat::Sum(vec![Flat::Prod(vec![b("X"), b("Y")]), b("Z")]));
    }

    #[test]
    fn views_and_lengths() {
        assert_eq!(as_sum(&fl("A + B")), &[b("A"), b("B")]);
        assert_eq!(as_sum(&b("A")), &[b("A")]);
        assert!(as_sum(&Flat::empty()).is_empty());
        assert_eq!(as_prod(&fl("A * B")), &[b("A"), b("B")]);
        assert_eq!(as_prod(&fl("A + B")), &[fl("A + B")]);
        assert!(as_prod(&Flat::unit()).is_empty());
        assert_eq!(slen(&fl("A + B + C")), 3);
        assert_eq!(plen(&Flat::unit()), 0);
        assert_eq!(slen(&Flat::empty()), 0);
        assert_eq!(slen(&b("A")), 1);
    }

    #[test]
    fn rebuild_examples() {
        assert_eq!(rebuild_sum(vec![b("A")]), b("A"));
        assert_eq!(rebuild_sum(vec![b("A"), fl("B + C")]), fl("A + B + C"));
        assert_eq!(rebuild_prod(vec![]), Flat::unit());
    }

    #[test]
    fn elem_indexes_from_zero() {
        let v = [b("A"), b("B")];
        assert_eq!(elem(0, &v), &b("A"));
        assert_eq!(elem(1, &v), &b("B"));
    }

    #[test]
    #[should_panic]
    fn elem_out_of_range_panics() {
        elem(2, &[b("A"), b("B")]);
    }

    #[test]
    fn display_form() {
        assert_eq!(fl("A * (B + C)").to_string(), "*(A +(B C))");
        assert_eq!(Flat::empty().to_string(), "+()");
        assert_eq!(Flat::unit().to_string(), "*()");
    }
}
