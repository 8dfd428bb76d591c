use super::ast::*;
use std::fmt::{self, Write};

/// Canonical text of an object: `+` and `*` are spelled out, parentheses
/// appear only where left-associative precedence requires them.
pub fn obj_to_string(o: &ObjExpr) -> String {
    let mut s = String::new();
    write_obj(&mut s, o, 0).unwrap();
    s
}

pub fn arrow_to_string(a: &Arrow) -> String {
    let mut s = String::new();
    write_arrow(&mut s, a, 0).unwrap();
    s
}

fn obj_level(o: &ObjExpr) -> u8 {
    match o {
        ObjExpr::Sum(..) => 0,
        ObjExpr::Prod(..) => 1,
        _ => 2,
    }
}

fn write_obj(w: &mut String, o: &ObjExpr, min: u8) -> fmt::Result {
    let paren = obj_level(o) < min;
    if paren {
        w.push('(');
    }
    match o {
        ObjExpr::Basic(n) => w.push_str(n),
        ObjExpr::Terminal => w.push('I'),
        ObjExpr::Initial => w.push('O'),
        ObjExpr::Sum(a, b) => {
            write_obj(w, a, 0)?;
            w.push_str(" + ");
            write_obj(w, b, 1)?;
        }
        ObjExpr::Prod(a, b) => {
            write_obj(w, a, 1)?;
            w.push_str(" * ");
            write_obj(w, b, 2)?;
        }
    }
    if paren {
        w.push(')');
    }
    Ok(())
}

fn arrow_level(a: &Arrow) -> u8 {
    match a {
        Arrow::Case(..) | Arrow::Pair(..) => 0,
        Arrow::Sum(..) => 1,
        Arrow::Prod(..) => 2,
        Arrow::Seq(..) => 3,
        _ => 4,
    }
}

fn write_objs(w: &mut String, objs: &[&ObjExpr]) -> fmt::Result {
    w.push('(');
    for (i, o) in objs.iter().enumerate() {
        if i > 0 {
            w.push_str(", ");
        }
        write_obj(w, o, 0)?;
    }
    w.push(')');
    Ok(())
}

fn write_arrow(w: &mut String, a: &Arrow, min: u8) -> fmt::Result {
    let paren = arrow_level(a) < min;
    if paren {
        w.push('(');
    }
    match a {
        Arrow::Basic(n) => w.push_str(n),
        Arrow::Id(x) => {
            w.push_str("id");
            if let Some(x) = x {
                write_objs(w, &[x])?;
            }
        }
        Arrow::Bang(x) => {
            w.push('!');
            if let Some(x) = x {
                write_objs(w, &[x])?;
            }
        }
        Arrow::Term(x) => {
            w.push_str("term");
            if let Some(x) = x {
                write_objs(w, &[x])?;
            }
        }
        Arrow::Inj1(x) | Arrow::Inj2(x) | Arrow::Proj1(x) | Arrow::Proj2(x) => {
            w.push_str(match a {
                Arrow::Inj1(_) => "inj_1",
                Arrow::Inj2(_) => "inj_2",
                Arrow::Proj1(_) => "proj_1",
                _ => "proj_2",
            });
            if let Some(b) = x {
                write_objs(w, &[&b.0, &b.1])?;
            }
        }
        Arrow::Dist(x) => {
            w.push_str("dist");
            if let Some(b) = x {
                write_objs(w, &[&b.0, &b.1, &b.2])?;
            }
        }
        Arrow::Case(f, g) | Arrow::Pair(f, g) => {
            write_arrow(w, f, 1)?;
            w.push_str(if matches!(a, Arrow::Case(..)) { " | " } else { ", " });
            write_arrow(w, g, 1)?;
        }
        Arrow::Sum(f, g) => {
            write_arrow(w, f, 1)?;
            w.push_str(" + ");
            write_arrow(w, g, 2)?;
        }
        Arrow::Prod(f, g) => {
            write_arrow(w, f, 2)?;
            w.push_str(" * ");
            write_arrow(w, g, 3)?;
        }
        Arrow::Seq(f, g) => {
            write_arrow(w, f, 4)?;
            w.push_str(" ; ");
            write_arrow(w, g, 3)?;
        }
        Arrow::Call(annot, body) => {
            w.push_str("call[");
            if let Some(b) = annot {
                for o in [&b.0, &b.1, &b.2] {
                    write_obj(w, o, 0)?;
                    w.push_str(", ");
                }
            }
            write_arrow(w, body, 0)?;
            w.push(']');
        }
    }
    if paren {
        w.push(')');
    }
    Ok(())
}

pub fn program_to_string(p: &Program) -> String {
    let mut s = String::new();
    s.push_str("obj");
    for (i, o) in p.objects.iter().enumerate() {
        s.push_str(if i == 0 { " " } else { ", " });
        s.push_str(&o.name);
    }
    s.push_str(";\n");
    s.push_str("lib");
    for (i, r) in p.refs.iter().enumerate() {
        s.push_str(if i == 0 { "\n  " } else { ",\n  " });
        let _ = write!(s, "{} : {} -> {}", r.name, obj_to_string(&r.dom), obj_to_string(&r.cod));
    }
    s.push_str(";\n");
    s.push_str("def");
    if p.defs.is_empty() {
        s.push_str(" .\n");
        return s;
    }
    for (i, d) in p.defs.iter().enumerate() {
        s.push_str(if i == 0 { "\n  " } else { ";\n  " });
        let _ = write!(s, "{} : {}", d.name, obj_to_string(&d.dom));
        for st in &d.steps {
            let _ = write!(s, " --{}--> {}", arrow_to_string(&st.arrow), obj_to_string(&st.cod));
        }
    }
    s.push_str(".\n");
    s
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&obj_to_string(self))
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&arrow_to_string(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&program_to_string(self))
    }
}
