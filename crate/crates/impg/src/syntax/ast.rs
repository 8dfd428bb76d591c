use std::hash::{Hash, Hasher};

/// Source position (1-based). Spans never take part in equality or hashing,
/// so round-tripped programs compare equal regardless of layout.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjExpr {
    Basic(String),
    Terminal,
    Initial,
    Sum(Box<ObjExpr>, Box<ObjExpr>),
    Prod(Box<ObjExpr>, Box<ObjExpr>),
}

impl ObjExpr {
    pub fn basic(name: &str) -> ObjExpr {
        ObjExpr::Basic(name.to_string())
    }

    pub fn sum(a: ObjExpr, b: ObjExpr) -> ObjExpr {
        ObjExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: ObjExpr, b: ObjExpr) -> ObjExpr {
        ObjExpr::Prod(Box::new(a), Box::new(b))
    }

    /// Left-associated sum of `items`; the empty sum is `O`.
    pub fn sum_of(items: impl IntoIterator<Item = ObjExpr>) -> ObjExpr {
        items.into_iter().reduce(ObjExpr::sum).unwrap_or(ObjExpr::Initial)
    }

    /// Left-associated product of `items`; the empty product is `I`.
    pub fn prod_of(items: impl IntoIterator<Item = ObjExpr>) -> ObjExpr {
        items.into_iter().reduce(ObjExpr::prod).unwrap_or(ObjExpr::Terminal)
    }

    /// Basic object names in left-to-right order (with repetitions).
    pub fn basics(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_basics(&mut out);
        out
    }

    fn collect_basics<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ObjExpr::Basic(n) => out.push(n),
            ObjExpr::Terminal | ObjExpr::Initial => {}
            ObjExpr::Sum(a, b) | ObjExpr::Prod(a, b) => {
                a.collect_basics(out);
                b.collect_basics(out);
            }
        }
    }
}

pub type Obj2 = Box<(ObjExpr, ObjExpr)>;
pub type Obj3 = Box<(ObjExpr, ObjExpr, ObjExpr)>;

/// Arrow syntax. Structural arrows carry either no annotation (polymorphic)
/// or a complete one; partial annotation is unrepresentable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arrow {
    Basic(String),
    Id(Option<ObjExpr>),
    Inj1(Option<Obj2>),
    Inj2(Option<Obj2>),
    Proj1(Option<Obj2>),
    Proj2(Option<Obj2>),
    Bang(Option<ObjExpr>),
    Term(Option<ObjExpr>),
    Dist(Option<Obj3>),
    Sum(Box<Arrow>, Box<Arrow>),
    Prod(Box<Arrow>, Box<Arrow>),
    Case(Box<Arrow>, Box<Arrow>),
    Pair(Box<Arrow>, Box<Arrow>),
    /// `Seq(f, g)` is "f then g".
    Seq(Box<Arrow>, Box<Arrow>),
    Call(Option<Obj3>, Box<Arrow>),
}

impl Arrow {
    pub fn basic(name: &str) -> Arrow {
        Arrow::Basic(name.to_string())
    }

    pub fn seq(f: Arrow, g: Arrow) -> Arrow {
        Arrow::Seq(Box::new(f), Box::new(g))
    }

    pub fn sum(f: Arrow, g: Arrow) -> Arrow {
        Arrow::Sum(Box::new(f), Box::new(g))
    }

    pub fn prod(f: Arrow, g: Arrow) -> Arrow {
        Arrow::Prod(Box::new(f), Box::new(g))
    }

    pub fn case(f: Arrow, g: Arrow) -> Arrow {
        Arrow::Case(Box::new(f), Box::new(g))
    }

    pub fn pair(f: Arrow, g: Arrow) -> Arrow {
        Arrow::Pair(Box::new(f), Box::new(g))
    }

    pub fn id(x: ObjExpr) -> Arrow {
        Arrow::Id(Some(x))
    }

    pub fn inj1(x: ObjExpr, y: ObjExpr) -> Arrow {
        Arrow::Inj1(Some(Box::new((x, y))))
    }

    pub fn inj2(x: ObjExpr, y: ObjExpr) -> Arrow {
        Arrow::Inj2(Some(Box::new((x, y))))
    }

    pub fn proj1(x: ObjExpr, y: ObjExpr) -> Arrow {
        Arrow::Proj1(Some(Box::new((x, y))))
    }

    pub fn proj2(x: ObjExpr, y: ObjExpr) -> Arrow {
        Arrow::Proj2(Some(Box::new((x, y))))
    }

    pub fn bang(x: ObjExpr) -> Arrow {
        Arrow::Bang(Some(x))
    }

    pub fn term(x: ObjExpr) -> Arrow {
        Arrow::Term(Some(x))
    }

    pub fn dist(x: ObjExpr, y1: ObjExpr, y2: ObjExpr) -> Arrow {
        Arrow::Dist(Some(Box::new((x, y1, y2))))
    }

    pub fn call(x: ObjExpr, u: ObjExpr, y: ObjExpr, body: Arrow) -> Arrow {
        Arrow::Call(Some(Box::new((x, u, y))), Box::new(body))
    }

    /// Left-to-right composition of a nonempty chain.
    pub fn seq_chain(mut steps: Vec<Arrow>) -> Arrow {
        let last = steps.pop().expect("empty chain");
        steps.into_iter().rev().fold(last, |acc, f| Arrow::seq(f, acc))
    }

    /// Number of `Call` nodes.
    pub fn call_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |a| {
            if matches!(a, Arrow::Call(..)) {
                n += 1
            }
        });
        n
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Arrow)) {
        f(self);
        match self {
            Arrow::Sum(a, b) | Arrow::Prod(a, b) | Arrow::Case(a, b) | Arrow::Pair(a, b) | Arrow::Seq(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Arrow::Call(_, body) => body.visit(f),
            _ => {}
        }
    }

    /// True iff no structural leaf or call lacks its object annotation.
    pub fn is_elaborated(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |a| {
            ok &= !matches!(
                a,
                Arrow::Id(None)
                    | Arrow::Inj1(None)
                    | Arrow::Inj2(None)
                    | Arrow::Proj1(None)
                    | Arrow::Proj2(None)
                    | Arrow::Bang(None)
                    | Arrow::Term(None)
                    | Arrow::Dist(None)
                    | Arrow::Call(None, _)
            )
        });
        ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjDecl {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ref {
    pub name: String,
    pub dom: ObjExpr,
    pub cod: ObjExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub arrow: Arrow,
    pub cod: ObjExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Def {
    pub name: String,
    pub dom: ObjExpr,
    /// Nonempty.
    pub steps: Vec<Step>,
    pub span: Span,
}

impl Def {
    pub fn cod(&self) -> &ObjExpr {
        &self.steps.last().expect("def without steps").cod
    }

    /// The def's steps composed into a single arrow.
    pub fn arrow(&self) -> Arrow {
        Arrow::seq_chain(self.steps.iter().map(|s| s.arrow.clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub objects: Vec<ObjDecl>,
    pub refs: Vec<Ref>,
    pub defs: Vec<Def>,
}

impl Program {
    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }
}
