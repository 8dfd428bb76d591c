//! Symbol tables and the diagnostic vocabulary.

use crate::objects::Flat;
use crate::syntax::{Arrow, ObjExpr, Span};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Library,
    Defined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub dom: Flat,
    pub cod: Flat,
    pub kind: ArrowKind,
}

/// Lookup returns the earliest entry with a given name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    entries: Vec<Entry>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn push(&mut self, name: &str, dom: Flat, cod: Flat, kind: ArrowKind) {
        self.entries.push(Entry {
            name: name.to_string(),
            dom,
            cod,
            kind,
        });
    }

    pub fn spec_of(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.spec_of(name).is_some()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn obj_built_from(x: &ObjExpr, objs: &[&str]) -> bool {
    x.basics().iter().all(|n| objs.contains(n))
}

/// Every basic arrow in `f`, including inside call bodies, is in `sig`.
pub fn arrow_built_from(f: &Arrow, sig: &Signature) -> bool {
    let mut ok = true;
    f.visit(&mut |a| {
        if let Arrow::Basic(n) = a {
            ok &= sig.contains(n);
        }
    });
    ok
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DiagKind {
    DuplicateObject(String),
    DuplicateArrow(String),
    UndeclaredObjects(ObjExpr),
    UndeclaredArrows(Arrow),
    NotFromTo(Arrow, ObjExpr, ObjExpr),
    Ambiguous(Arrow),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub span: Span,
}

impl Diagnostic {
    pub fn new(kind: DiagKind, span: Span) -> Diagnostic {
        Diagnostic { kind, span }
    }
}

impl fmt::Display for DiagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagKind::DuplicateObject(n) => write!(f, "object name {n} already used"),
            DiagKind::DuplicateArrow(n) => write!(f, "arrow name {n} already used"),
            DiagKind::UndeclaredObjects(x) => {
                write!(f, "object {x} contains undeclared basic objects")
            }
            DiagKind::UndeclaredArrows(a) => {
                write!(f, "arrow {a} contains undeclared basic arrows")
            }
            DiagKind::NotFromTo(a, x, y) => write!(f, "arrow {a} is not from {x} to {y}"),
            DiagKind::Ambiguous(a) => write!(f, "arrow {a} is ambiguous"),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::flatten;
    use crate::syntax::{parse_arrow, parse_obj};

    fn sig_sp() -> Signature {
        let mut s = Signature::new();
        let o = |t| flatten(&parse_obj(t).unwrap());
        s.push("s", o("I + N"), o("N"), ArrowKind::Library);
        s.push("p", o("N"), o("I + N"), ArrowKind::Library);
        s
    }

    #[test]
    fn spec_lookup() {
        let s = sig_sp();
        let e = s.spec_of("s").unwrap();
        assert_eq!(e.dom.to_string(), "+(*() N)");
        assert_eq!(e.kind, ArrowKind::Library);
        assert!(Signature::new().spec_of("q").is_none());
    }

    #[test]
    fn first_entry_shadows() {
        let mut s = Signature::new();
        s.push("f", Flat::basic("A"), Flat::basic("A"), ArrowKind::Library);
        s.push("f", Flat::basic("B"), Flat::basic("B"), ArrowKind::Defined);
        assert_eq!(s.spec_of("f").unwrap().dom, Flat::basic("A"));
    }

    #[test]
    fn built_from() {
        assert!(obj_built_from(&parse_obj("A + B").unwrap(), &["A", "B"]));
        assert!(obj_built_from(&parse_obj("I").unwrap(), &[]));
        assert!(!obj_built_from(&parse_obj("A * C").unwrap(), &["A", "B"]));
        assert!(arrow_built_from(&parse_arrow("inj_1").unwrap(), &Signature::new()));
        assert!(arrow_built_from(&parse_arrow("p ; s").unwrap(), &sig_sp()));
        assert!(!arrow_built_from(&parse_arrow("call[f]").unwrap(), &Signature::new()));
    }

    #[test]
    fn diagnostic_shapes() {
        let a = parse_arrow("inj_1 o proj_1").unwrap();
        let x = parse_obj("X * Z").unwrap();
        let y = parse_obj("X + Y").unwrap();
        let d = DiagKind::NotFromTo(a.clone(), x.clone(), y);
        assert_eq!(d.to_string(), "arrow proj_1 ; inj_1 is not from X * Z to X + Y");
        assert_eq!(
            DiagKind::DuplicateObject("N".into()).to_string(),
            "object name N already used"
        );
        assert_eq!(DiagKind::Ambiguous(a).to_string(), "arrow proj_1 ; inj_1 is ambiguous");
    }
}
