//! Whole-program checking. Diagnostics come out in source order; an empty
//! list means the program is well typed.

use crate::compiler::{compile_raw, optimized_variants};
use crate::forest::{check_data, Tree};
use crate::objects::flatten;
use crate::signature::{arrow_built_from, obj_built_from, ArrowKind, DiagKind, Diagnostic, Signature};
use crate::syntax::{ObjExpr, Program, Span};

struct Checker<'p> {
    objs: Vec<&'p str>,
    sig: Signature,
    out: Vec<Diagnostic>,
    exhaustive: bool,
}

impl<'p> Checker<'p> {
    fn emit(&mut self, kind: DiagKind, span: Span) {
        self.out.push(Diagnostic::new(kind, span));
    }

    fn object(&mut self, x: &ObjExpr, span: Span) {
        if !obj_built_from(x, &self.objs) {
            self.emit(DiagKind::UndeclaredObjects(x.clone()), span);
        }
    }
}

/// With `exhaustive`, steps admitting several distinct optimized codes are
/// additionally reported as ambiguous.
pub fn tc_program(p: &Program, exhaustive: bool) -> Vec<Diagnostic> {
    let mut c = Checker {
        objs: Vec::new(),
        sig: Signature::new(),
        out: Vec::new(),
        exhaustive,
    };
    for o in &p.objects {
        if c.objs.contains(&o.name.as_str()) {
            c.emit(DiagKind::DuplicateObject(o.name.clone()), o.span);
        } else {
            c.objs.push(&o.name);
        }
    }
    for r in &p.refs {
        c.object(&r.dom, r.span);
        c.object(&r.cod, r.span);
        if c.sig.contains(&r.name) {
            c.emit(DiagKind::DuplicateArrow(r.name.clone()), r.span);
        } else {
            c.sig
                .push(&r.name, flatten(&r.dom), flatten(&r.cod), ArrowKind::Library);
        }
    }
    for d in &p.defs {
        let fresh = !c.sig.contains(&d.name);
        if !fresh {
            c.emit(DiagKind::DuplicateArrow(d.name.clone()), d.span);
        }
        let mut src = &d.dom;
        for st in &d.steps {
            c.object(src, st.span);
            if !arrow_built_from(&st.arrow, &c.sig) {
                c.emit(DiagKind::UndeclaredArrows(st.arrow.clone()), st.span);
            } else {
                let (fd, fc) = (flatten(src), flatten(&st.cod));
                if c.exhaustive {
                    match optimized_variants(&st.arrow, &fd, &fc, &c.sig).len() {
                        0 => c.emit(
                            DiagKind::NotFromTo(st.arrow.clone(), src.clone(), st.cod.clone()),
                            st.span,
                        ),
                        1 => {}
                        _ => c.emit(DiagKind::Ambiguous(st.arrow.clone()), st.span),
                    }
                } else if compile_raw(&st.arrow, &fd, &fc, &c.sig).is_none() {
                    c.emit(
                        DiagKind::NotFromTo(st.arrow.clone(), src.clone(), st.cod.clone()),
                        st.span,
                    );
                }
            }
            src = &st.cod;
        }
        c.object(src, d.span);
        if fresh {
            c.sig
                .push(&d.name, flatten(&d.dom), flatten(d.cod()), ArrowKind::Defined);
        }
    }
    c.out
}

pub fn tc_data(d: &[Tree], t: &ObjExpr) -> bool {
    check_data(d, &flatten(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::leaf;
    use crate::syntax::{parse_data, parse_obj, parse_program};

    fn kinds(src: &str) -> Vec<String> {
        tc_program(&parse_program(src).unwrap(), true)
            .into_iter()
            .map(|d| d.to_string())
            .collect()
    }

    #[test]
    fn duplicate_object() {
        assert_eq!(kinds("obj N, N; lib ; def ."), vec!["object name N already used"]);
    }

    #[test]
    fn duplicate_arrows() {
        let src = "obj N; lib p : N -> I + N, p : N -> N; def p : N --id--> N; q : N --id--> N; q : N --id--> N.";
        assert_eq!(
            kinds(src),
            vec![
                "arrow name p already used",
                "arrow name p already used",
                "arrow name q already used"
            ]
        );
    }

    #[test]
    fn undeclared_things() {
        let src = "obj N; lib f : M -> N; def g : N --h--> N.";
        assert_eq!(
            kinds(src),
            vec![
                "object M contains undeclared basic objects",
                "arrow h contains undeclared basic arrows"
            ]
        );
    }

    #[test]
    fn composable_and_artificial() {
        assert!(kinds("obj A; lib ; def f : A --term ; inj_1--> I + I.").is_empty());
        assert_eq!(
            kinds("obj X, Y, Z; lib ; def f : X * Z --inj_1 o proj_1--> X + Y."),
            vec!["arrow proj_1 ; inj_1 is not from X * Z to X + Y"]
        );
    }

    #[test]
    fn ambiguity_only_when_exhaustive() {
        let src = "obj X; lib ; def twist : X + (X + X) --inj_2 | inj_1--> (X + X) + X.";
        let p = parse_program(src).unwrap();
        assert!(tc_program(&p, false).is_empty());
        assert_eq!(kinds(src), vec!["arrow inj_2 | inj_1 is ambiguous"]);
    }

    #[test]
    fn data_checks() {
        assert!(tc_data(&parse_data("<1,5>").unwrap(), &parse_obj("I + N").unwrap()));
        assert!(tc_data(&[], &parse_obj("I").unwrap()));
        assert!(!tc_data(&[leaf(5), leaf(6)], &parse_obj("N").unwrap()));
    }
}
