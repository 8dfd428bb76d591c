use super::ast::*;
use super::lexer::{lex, Kw, Tok};
use super::ParseError;

pub struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(text: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::new(
            self.span(),
            format!("unexpected {}", self.peek().describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        ))
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> PResult<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.error(&[&format!("`{c}`")])
        }
    }

    fn expect_kw(&mut self, k: Kw) -> PResult<()> {
        if *self.peek() == Tok::Kw(k) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{}`", k.text())])
        }
    }

    pub fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    fn lower_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Lower(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["arrow name"]),
        }
    }

    pub fn program(&mut self) -> PResult<Program> {
        let mut p = Program::default();
        self.expect_kw(Kw::Obj)?;
        if !self.is_punct(';') {
            loop {
                let span = self.span();
                match self.peek().clone() {
                    Tok::Upper(name) => {
                        self.bump();
                        p.objects.push(ObjDecl { name, span });
                    }
                    _ => return self.error(&["object name"]),
                }
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(';')?;
        self.expect_kw(Kw::Lib)?;
        if !self.is_punct(';') {
            loop {
                let span = self.span();
                let name = self.lower_name()?;
                self.expect_punct(':')?;
                let dom = self.obj()?;
                self.dart_end()?;
                let cod = self.obj()?;
                p.refs.push(Ref { name, dom, cod, span });
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(';')?;
        self.expect_kw(Kw::Def)?;
        if !self.is_punct('.') {
            loop {
                p.defs.push(self.def()?);
                if !self.eat_punct(';') {
                    break;
                }
            }
        }
        self.expect_punct('.')?;
        self.expect_eof()?;
        Ok(p)
    }

    fn def(&mut self) -> PResult<Def> {
        let span = self.span();
        let name = self.lower_name()?;
        self.expect_punct(':')?;
        let dom = self.obj()?;
        let mut steps = Vec::new();
        while self.is_punct('-') {
            let span = self.span();
            while self.eat_punct('-') {}
            let arrow = self.arrow()?;
            self.dart_end()?;
            let cod = self.obj()?;
            steps.push(Step { arrow, cod, span });
        }
        if steps.is_empty() {
            return self.error(&["`-`"]);
        }
        Ok(Def { name, dom, steps, span })
    }

    fn dart_end(&mut self) -> PResult<()> {
        if !self.is_punct('-') {
            return self.error(&["`-`"]);
        }
        while self.eat_punct('-') {}
        self.expect_punct('>')
    }

    fn starts_obj_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Upper(_) | Tok::Kw(Kw::Terminal) | Tok::Kw(Kw::Initial) | Tok::Punct('(')
        )
    }

    pub fn obj(&mut self) -> PResult<ObjExpr> {
        let mut acc = self.obj_prod()?;
        while self.eat_punct('+') {
            let rhs = self.obj_prod()?;
            acc = ObjExpr::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn obj_prod(&mut self) -> PResult<ObjExpr> {
        let mut acc = self.obj_atom()?;
        loop {
            // Juxtaposition also denotes product.
            if self.eat_punct('*') || self.starts_obj_atom() {
                let rhs = self.obj_atom()?;
                acc = ObjExpr::prod(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn obj_atom(&mut self) -> PResult<ObjExpr> {
        match self.peek().clone() {
            Tok::Upper(n) => {
                self.bump();
                Ok(ObjExpr::Basic(n))
            }
            Tok::Kw(Kw::Terminal) => {
                self.bump();
                Ok(ObjExpr::Terminal)
            }
            Tok::Kw(Kw::Initial) => {
                self.bump();
                Ok(ObjExpr::Initial)
            }
            Tok::Punct('(') => {
                self.bump();
                let o = self.obj()?;
                self.expect_punct(')')?;
                Ok(o)
            }
            _ => self.error(&["object"]),
        }
    }

    pub fn arrow(&mut self) -> PResult<Arrow> {
        let lhs = self.arrow_sum()?;
        let op = if self.is_punct('|') {
            '|'
        } else if self.is_punct(',') {
            ','
        } else {
            return Ok(lhs);
        };
        self.bump();
        let rhs = self.arrow_sum()?;
        if self.is_punct('|') || self.is_punct(',') {
            return Err(ParseError::new(
                self.span(),
                "case and pairing do not associate; add parentheses".to_string(),
                vec![],
            ));
        }
        Ok(if op == '|' {
            Arrow::case(lhs, rhs)
        } else {
            Arrow::pair(lhs, rhs)
        })
    }

    fn arrow_sum(&mut self) -> PResult<Arrow> {
        let mut acc = self.arrow_prod()?;
        while self.eat_punct('+') {
            let rhs = self.arrow_prod()?;
            acc = Arrow::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn arrow_prod(&mut self) -> PResult<Arrow> {
        let mut acc = self.arrow_seq()?;
        while self.eat_punct('*') {
            let rhs = self.arrow_seq()?;
            acc = Arrow::prod(acc, rhs);
        }
        Ok(acc)
    }

    fn arrow_seq(&mut self) -> PResult<Arrow> {
        let lhs = self.arrow_atom()?;
        if self.eat_punct(';') {
            let rhs = self.arrow_seq()?;
            Ok(Arrow::seq(lhs, rhs))
        } else if *self.peek() == Tok::Kw(Kw::Compose) {
            self.bump();
            let rhs = self.arrow_seq()?;
            Ok(Arrow::seq(rhs, lhs))
        } else {
            Ok(lhs)
        }
    }

    fn objs_in_parens(&mut self, n: usize) -> PResult<Option<Vec<ObjExpr>>> {
        if !self.eat_punct('(') {
            return Ok(None);
        }
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect_punct(',')?;
            }
            v.push(self.obj()?);
        }
        self.expect_punct(')')?;
        Ok(Some(v))
    }

    fn arrow_atom(&mut self) -> PResult<Arrow> {
        let tok = self.peek().clone();
        let two = |v: Vec<ObjExpr>| {
            let mut it = v.into_iter();
            Box::new((it.next().unwrap(), it.next().unwrap()))
        };
        match tok {
            Tok::Lower(n) => {
                self.bump();
                Ok(Arrow::Basic(n))
            }
            Tok::Punct('!') => {
                self.bump();
                Ok(Arrow::Bang(self.objs_in_parens(1)?.map(|mut v| v.remove(0))))
            }
            Tok::Kw(Kw::Id) => {
                self.bump();
                Ok(Arrow::Id(self.objs_in_parens(1)?.map(|mut v| v.remove(0))))
            }
            Tok::Kw(Kw::Term) => {
                self.bump();
                Ok(Arrow::Term(self.objs_in_parens(1)?.map(|mut v| v.remove(0))))
            }
            Tok::Kw(Kw::Inj1) => {
                self.bump();
                Ok(Arrow::Inj1(self.objs_in_parens(2)?.map(two)))
            }
            Tok::Kw(Kw::Inj2) => {
                self.bump();
                Ok(Arrow::Inj2(self.objs_in_parens(2)?.map(two)))
            }
            Tok::Kw(Kw::Proj1) => {
                self.bump();
                Ok(Arrow::Proj1(self.objs_in_parens(2)?.map(two)))
            }
            Tok::Kw(Kw::Proj2) => {
                self.bump();
                Ok(Arrow::Proj2(self.objs_in_parens(2)?.map(two)))
            }
            Tok::Kw(Kw::Dist) => {
                self.bump();
                Ok(Arrow::Dist(self.objs_in_parens(3)?.map(|v| {
                    let mut it = v.into_iter();
                    Box::new((it.next().unwrap(), it.next().unwrap(), it.next().unwrap()))
                })))
            }
            Tok::Kw(Kw::Call) => {
                self.bump();
                self.expect_punct('[')?;
                let annot = self.try_call_annotation();
                let body = self.arrow()?;
                self.expect_punct(']')?;
                Ok(Arrow::Call(annot, Box::new(body)))
            }
            Tok::Punct('(') => {
                self.bump();
                let a = self.arrow()?;
                self.expect_punct(')')?;
                Ok(a)
            }
            _ => self.error(&["arrow"]),
        }
    }

    /// `X, U, Y,` prefix of an annotated call; restores the position when absent.
    fn try_call_annotation(&mut self) -> Option<Obj3> {
        let save = self.pos;
        let mut objs = Vec::with_capacity(3);
        for _ in 0..3 {
            match self.obj() {
                Ok(o) if self.eat_punct(',') => objs.push(o),
                _ => {
                    self.pos = save;
                    return None;
                }
            }
        }
        let mut it = objs.into_iter();
        Some(Box::new((it.next().unwrap(), it.next().unwrap(), it.next().unwrap())))
    }
}
