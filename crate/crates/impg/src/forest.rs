//! Tagged forests: the data representation the machine computes on.

use crate::objects::Flat;
use num_bigint::BigUint;
use std::fmt;

pub type Datum = BigUint;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(Datum),
    Node(usize, Forest),
}

pub type Forest = Vec<Tree>;

pub fn leaf(n: u64) -> Tree {
    Tree::Leaf(BigUint::from(n))
}

/// `<tag, children>` with `<m, <n, d>> = <m + n, d>` applied.
///
/// Panics if the tag sum overflows a machine word.
pub fn mk_node(tag: usize, mut children: Forest) -> Tree {
    if let [Tree::Node(..)] = children.as_slice() {
        if let Some(Tree::Node(n, d)) = children.pop() {
            let t = tag.checked_add(n).expect("forest tag overflow");
            return Tree::Node(t, d);
        }
    }
    Tree::Node(tag, children)
}

pub fn concat(mut a: Forest, b: Forest) -> Forest {
    a.extend(b);
    a
}

/// Every node is normalized: none has exactly one child that is a node.
pub fn is_normal(d: &[Tree]) -> bool {
    d.iter().all(|t| match t {
        Tree::Leaf(_) => true,
        Tree::Node(_, c) => !matches!(c.as_slice(), [Tree::Node(..)]) && is_normal(c),
    })
}

/// Structural match of a forest against a flat object.
///
/// Leaves match any basic object: the check does not look inside data.
pub fn check_data(d: &[Tree], t: &Flat) -> bool {
    check_data_by(d, t, &|_, _| true)
}

/// [`check_data`] with a predicate deciding which data a basic object admits.
pub fn check_data_by(d: &[Tree], t: &Flat, datum_ok: &dyn Fn(&str, &Datum) -> bool) -> bool {
    match (d, t) {
        ([Tree::Node(n, c)], Flat::Sum(items)) => *n < items.len() && check_data_by(c, &items[*n], datum_ok),
        ([Tree::Leaf(e)], Flat::Basic(a)) => datum_ok(a, e),
        (_, Flat::Prod(items)) => {
            d.len() == items.len()
                && d.iter()
                    .zip(items)
                    .all(|(u, x)| check_data_by(std::slice::from_ref(u), x, datum_ok))
        }
        _ => false,
    }
}

/// Number of leaf and node constructors.
pub fn forest_size(d: &[Tree]) -> usize {
    d.iter()
        .map(|t| match t {
            Tree::Leaf(_) => 1,
            Tree::Node(_, c) => 1 + forest_size(c),
        })
        .sum()
}

pub struct ForestDisplay<'a>(pub &'a [Tree]);

impl fmt::Display for ForestDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(n) => write!(f, "{n}"),
            Tree::Node(n, c) if c.is_empty() => write!(f, "<{n},>"),
            Tree::Node(n, c) => write!(f, "<{n}, {}>", ForestDisplay(c)),
        }
    }
}

pub fn forest_to_string(d: &[Tree]) -> String {
    ForestDisplay(d).to_string()
}
