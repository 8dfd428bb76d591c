use super::ast::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Lower(String),
    Upper(String),
    Num(String),
    Kw(Kw),
    Punct(char),
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kw {
    Obj,
    Lib,
    Def,
    Call,
    Id,
    Inj1,
    Inj2,
    Proj1,
    Proj2,
    Term,
    Dist,
    /// `I`
    Terminal,
    /// `O`
    Initial,
    /// `o`
    Compose,
}

impl Kw {
    pub fn text(self) -> &'static str {
        match self {
            Kw::Obj => "obj",
            Kw::Lib => "lib",
            Kw::Def => "def",
            Kw::Call => "call",
            Kw::Id => "id",
            Kw::Inj1 => "inj_1",
            Kw::Inj2 => "inj_2",
            Kw::Proj1 => "proj_1",
            Kw::Proj2 => "proj_2",
            Kw::Term => "term",
            Kw::Dist => "dist",
            Kw::Terminal => "I",
            Kw::Initial => "O",
            Kw::Compose => "o",
        }
    }

    fn from_word(w: &str) -> Option<Kw> {
        Some(match w {
            "obj" => Kw::Obj,
            "lib" => Kw::Lib,
            "def" => Kw::Def,
            "call" => Kw::Call,
            "id" => Kw::Id,
            "inj_1" => Kw::Inj1,
            "inj_2" => Kw::Inj2,
            "proj_1" => Kw::Proj1,
            "proj_2" => Kw::Proj2,
            "term" => Kw::Term,
            "dist" => Kw::Dist,
            "I" => Kw::Terminal,
            "O" => Kw::Initial,
            "o" => Kw::Compose,
            _ => return None,
        })
    }
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Num(s) => format!("`{s}`"),
            Tok::Kw(k) => format!("`{}`", k.text()),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

pub fn is_reserved(word: &str) -> bool {
    Kw::from_word(word).is_some()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '^' || c == '\''
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if !c.is_ascii() {
            return Err(ParseError::new(span, format!("non-ASCII character {c:?}"), vec![]));
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let tok = match Kw::from_word(&word) {
                Some(k) => Tok::Kw(k),
                None if c.is_ascii_uppercase() => Tok::Upper(word),
                None => Tok::Lower(word),
            };
            out.push((tok, span));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += (i - start) as u32;
            out.push((Tok::Num(chars[start..i].iter().collect()), span));
            continue;
        }
        if ";:,.()[]<>{}+*|!-".contains(c) {
            out.push((Tok::Punct(c), span));
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError::new(span, format!("unexpected character {c:?}"), vec![]));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
