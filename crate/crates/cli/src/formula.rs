//! Parser for the CLI formula syntax.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! formula := expr ('==' | '!=' | '<=') expr
//!          | 'universal' '(' expr ')' | 'empty' '(' expr ')'
//! expr    := term (('|' | '^') term)*
//! term    := factor ('&' factor)*
//! factor  := atom ('.' atom)*            concatenation
//! atom    := '~' atom | 'star' '(' expr ')' | '(' expr ')'
//!          | 'ALL' | 'EMPTY' | NAME
//! ```
//!
//! `~` is complement, `|` union, `&` intersection, `^` symmetric
//! difference, `.` concatenation (needs --allow-concat), `<=` subset.

use uafa_core::{Formula, LangExpr};

#[derive(Debug, PartialEq)]
enum Tok {
    Name(String),
    All,
    Empty,
    Star,
    Universal,
    EmptyPred,
    LParen,
    RParen,
    Tilde,
    Amp,
    Pipe,
    Caret,
    Dot,
    EqEq,
    NotEq,
    SubsetEq,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '~' => {
                chars.next();
                out.push(Tok::Tilde);
            }
            '&' => {
                chars.next();
                out.push(Tok::Amp);
            }
            '|' => {
                chars.next();
                out.push(Tok::Pipe);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot);
            }
            '=' => {
                chars.next();
                if chars.next() != Some('=') {
                    return Err("expected '=='".into());
                }
                out.push(Tok::EqEq);
            }
            '!' => {
                chars.next();
                if chars.next() != Some('=') {
                    return Err("expected '!='".into());
                }
                out.push(Tok::NotEq);
            }
            '<' => {
                chars.next();
                if chars.next() != Some('=') {
                    return Err("expected '<='".into());
                }
                out.push(Tok::SubsetEq);
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(match name.as_str() {
                    "ALL" => Tok::All,
                    "EMPTY" => Tok::Empty,
                    "star" => Tok::Star,
                    "universal" => Tok::Universal,
                    "empty" => Tok::EmptyPred,
                    _ => Tok::Name(name),
                });
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), String> {
        match self.next() {
            Some(t) if *t == want => Ok(()),
            other => Err(format!("expected {want:?}, got {other:?}")),
        }
    }

    fn atom(&mut self) -> Result<LangExpr, String> {
        match self.next() {
            Some(Tok::Tilde) => Ok(LangExpr::Complement(Box::new(self.atom()?))),
            Some(Tok::Star) => {
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(LangExpr::Star(Box::new(e)))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::All) => Ok(LangExpr::All),
            Some(Tok::Empty) => Ok(LangExpr::Empty),
            Some(Tok::Name(n)) => Ok(LangExpr::Name(n.clone())),
            other => Err(format!("unexpected token {other:?}")),
        }
    }

    fn factor(&mut self) -> Result<LangExpr, String> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Dot) {
            self.next();
            e = LangExpr::Concat(Box::new(e), Box::new(self.atom()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<LangExpr, String> {
        let mut e = self.factor()?;
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            e = LangExpr::Intersect(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<LangExpr, String> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Pipe) => {
                    self.next();
                    e = LangExpr::Union(Box::new(e), Box::new(self.term()?));
                }
                Some(Tok::Caret) => {
                    self.next();
                    e = LangExpr::SymDiff(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, String> {
        match self.peek() {
            Some(Tok::Universal) => {
                self.next();
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                self.end()?;
                Ok(Formula::Universal(e))
            }
            Some(Tok::EmptyPred) => {
                self.next();
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                self.end()?;
                Ok(Formula::IsEmpty(e))
            }
            _ => {
                let left = self.expr()?;
                let f = match self.next() {
                    Some(Tok::EqEq) => Formula::Equal(left, self.expr_owned()?),
                    Some(Tok::NotEq) => Formula::NotEqual(left, self.expr_owned()?),
                    Some(Tok::SubsetEq) => Formula::Subset(left, self.expr_owned()?),
                    other => return Err(format!("expected comparison, got {other:?}")),
                };
                self.end()?;
                Ok(f)
            }
        }
    }

    fn expr_owned(&mut self) -> Result<LangExpr, String> {
        self.expr()
    }

    fn end(&mut self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("trailing token {t:?}")),
        }
    }
}

/// Parses a boolean formula over named languages.
pub fn parse_formula(s: &str) -> Result<Formula, String> {
    let toks = tokenize(s)?;
    Parser { toks, pos: 0 }.formula()
}
