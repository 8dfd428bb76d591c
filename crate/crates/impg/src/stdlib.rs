//! Basic-arrow libraries. A library contributes a signature and the
//! semantics of its arrows on forests; the registry dispatches `APPLY`.

use crate::forest::{Datum, Forest, Tree};
use crate::objects::{flatten, Flat};
use crate::signature::{ArrowKind, Signature};
use crate::syntax::parse_obj;
use num_traits::{CheckedSub, Zero};
use std::fmt;
use std::sync::Arc;

pub trait Library: Send + Sync {
    fn name(&self) -> &str;
    fn signature(&self) -> Signature;
    /// `None` when the arrow is unknown to this library.
    fn apply(&self, arrow: &str, d: &[Tree]) -> Option<Result<Forest, String>>;
    /// Whether `d` is an element of the basic object `object`; `None` when
    /// the object is not this library's.
    fn datum_ok(&self, _object: &str, _d: &Datum) -> Option<bool> {
        None
    }
}

/// Immutable after construction; cloning shares the libraries.
#[derive(Clone)]
pub struct Registry {
    libs: Vec<Arc<dyn Library>>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.libs.iter().map(|l| l.name())).finish()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { libs: Vec::new() }
    }

    pub fn standard() -> Registry {
        Registry::empty().with(Arc::new(Nat))
    }

    pub fn with(mut self, lib: Arc<dyn Library>) -> Registry {
        self.libs.push(lib);
        self
    }

    pub fn apply(&self, arrow: &str, d: &[Tree]) -> Result<Forest, String> {
        self.libs
            .iter()
            .find_map(|l| l.apply(arrow, d))
            .unwrap_or_else(|| Err(format!("no library implements arrow {arrow}")))
    }

    /// Strict datum check: the first library owning `object` decides;
    /// objects no library owns admit every datum.
    pub fn datum_ok(&self, object: &str, d: &Datum) -> bool {
        self.libs.iter().find_map(|l| l.datum_ok(object, d)).unwrap_or(true)
    }
}

pub struct Nat;

fn obj(s: &str) -> Flat {
    flatten(&parse_obj(s).expect("static object"))
}

pub fn nat_signature() -> Signature {
    let mut s = Signature::new();
    let lib = ArrowKind::Library;
    s.push("s", obj("I + N"), obj("N"), lib);
    s.push("p", obj("N"), obj("I + N"), lib);
    for a in ["plus", "minus", "times"] {
        s.push(a, obj("N * N"), obj("N"), lib);
    }
    for a in ["gt", "ge", "eq"] {
        s.push(a, obj("N * N"), obj("I + I"), lib);
    }
    s
}

fn bool_tree(b: bool) -> Forest {
    vec![Tree::Node(usize::from(b), Vec::new())]
}

fn pair(d: &[Tree]) -> Result<(&Datum, &Datum), String> {
    match d {
        [Tree::Leaf(a), Tree::Leaf(b)] => Ok((a, b)),
        _ => Err("expected two numbers".into()),
    }
}

/// Forest semantics of the Nat arrows; `None` for names outside the library.
pub fn apply_nat(arrow: &str, d: &[Tree]) -> Option<Result<Forest, String>> {
    let r = match arrow {
        "s" => match d {
            [Tree::Node(0, c)] if c.is_empty() => Ok(vec![Tree::Leaf(Datum::zero())]),
            [Tree::Node(1, c)] => match c.as_slice() {
                [Tree::Leaf(n)] => Ok(vec![Tree::Leaf(n + 1u32)]),
                _ => Err("s: malformed successor argument".into()),
            },
            _ => Err("s: expected a tagged argument".into()),
        },
        "p" => match d {
            [Tree::Leaf(n)] => Ok(match n.checked_sub(&Datum::from(1u32)) {
                None => vec![Tree::Node(0, Vec::new())],
                Some(m) => vec![Tree::Node(1, vec![Tree::Leaf(m)])],
            }),
            _ => Err("p: expected a number".into()),
        },
        "plus" | "minus" | "times" | "gt" | "ge" | "eq" => {
            let (a, b) = match pair(d) {
                Ok(x) => x,
                Err(e) => return Some(Err(format!("{arrow}: {e}"))),
            };
            Ok(match arrow {
                "plus" => vec![Tree::Leaf(a + b)],
                "minus" => vec![Tree::Leaf(a.checked_sub(b).unwrap_or_default())],
                "times" => vec![Tree::Leaf(a * b)],
                "gt" => bool_tree(a > b),
                "ge" => bool_tree(a >= b),
                _ => bool_tree(a == b),
            })
        }
        _ => return None,
    };
    Some(r)
}

impl Library for Nat {
    fn name(&self) -> &str {
        "nat"
    }

    fn signature(&self) -> Signature {
        nat_signature()
    }

    fn apply(&self, arrow: &str, d: &[Tree]) -> Option<Result<Forest, String>> {
        apply_nat(arrow, d)
    }

    fn datum_ok(&self, object: &str, _d: &Datum) -> Option<bool> {
        (object == "N").then_some(true)
    }
}
