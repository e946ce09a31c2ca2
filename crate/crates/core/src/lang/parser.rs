//! Recursive-descent parser.
//!
//! ```text
//! program := item (';' item)* ';'?
//! item    := ident '=' expr | command | expr (':eq' expr)?
//! expr    := '{' [expr (',' expr)*] '}' | ident | nat
//!          | builtin '(' args ')' | ('μ' | 'mu') ident '.' expr
//! command := ':min' expr | ':solve' | ':pow' expr | ':exp' expr ',' expr
//!          | ':check' [ident] (ident '=' nat)* | ':print' ['depth' '=' nat] expr
//!          | ':reset'
//! ```

use std::collections::HashMap;

use super::lexer::{lex, Tok};
use super::{ParseError, Span};

/// Nesting deeper than this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Pair,
    Union,
    Cup,
    Inter,
    Pow,
    Exp,
    Kpair,
    Succ,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "pair" => Builtin::Pair,
            "union" => Builtin::Union,
            "cup" => Builtin::Cup,
            "inter" => Builtin::Inter,
            "pow" => Builtin::Pow,
            "exp" => Builtin::Exp,
            "kpair" => Builtin::Kpair,
            "succ" => Builtin::Succ,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Pair => "pair",
            Builtin::Union => "union",
            Builtin::Cup => "cup",
            Builtin::Inter => "inter",
            Builtin::Pow => "pow",
            Builtin::Exp => "exp",
            Builtin::Kpair => "kpair",
            Builtin::Succ => "succ",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Union | Builtin::Pow | Builtin::Succ => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Set(Vec<Expr>, Span),
    Name(String, Span),
    Nat(u64, Span),
    Call(Builtin, Vec<Expr>, Span),
    Mu(String, Box<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Set(_, s) | Expr::Name(_, s) | Expr::Nat(_, s) | Expr::Call(_, _, s) => *s,
            Expr::Mu(_, _, s) => *s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Eq(Expr, Expr),
    Min(Expr),
    Solve,
    Pow(Expr),
    Exp(Expr, Expr),
    Check {
        axiom: Option<String>,
        samples: Option<u64>,
        seed: Option<u64>,
        max_nodes: Option<u64>,
    },
    Print {
        depth: Option<usize>,
        expr: Expr,
    },
    Reset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Def(Definition),
    Expr(Expr),
    Command(Command, Span),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub items: Vec<Item>,
}

impl Program {
    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.items.iter().filter_map(|i| match i {
            Item::Def(d) => Some(d),
            _ => None,
        })
    }
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        depth: 0,
    };
    let program = p.program()?;
    let mut seen: HashMap<&str, Span> = HashMap::new();
    for d in program.definitions() {
        if seen.insert(&d.name, d.span).is_some() {
            return Err(ParseError::new(
                format!("`{}` is defined twice", d.name),
                d.span,
                src,
            ));
        }
    }
    Ok(program)
}

/// Parses a single expression, with nothing after it.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if let Some((t, span)) = p.toks.get(p.pos) {
        return Err(p.error_at(format!("unexpected {t} after expression"), *span));
    }
    Ok(e)
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some((_, s)) => *s,
            None => Span::new(self.src.len(), self.src.len()),
        }
    }

    fn error_at(&self, msg: impl Into<String>, span: Span) -> ParseError {
        ParseError::new(msg, span, self.src)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, span)) => self.error_at(format!("expected {wanted}, found {t}"), *span),
            None => self.error_at(
                format!("expected {wanted}, found end of input"),
                self.here(),
            ),
        }
    }

    fn bump(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Span, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().expect("peeked").1)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some((Tok::Ident(s), span)) => Ok((s, span)),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut items = Vec::new();
        while self.peek().is_some() {
            if self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
                continue;
            }
            items.push(self.item()?);
            match self.peek() {
                None => break,
                Some(Tok::Semi) => self.pos += 1,
                Some(_) => return Err(self.unexpected("`;` between items")),
            }
        }
        Ok(Program { items })
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let start = self.here();
        if let (Some(Tok::Ident(_)), Some(Tok::Equals)) = (self.peek(), self.peek_at(1)) {
            let (name, _) = self.ident()?;
            self.pos += 1;
            let expr = self.expr()?;
            let span = start.to(expr.span());
            return Ok(Item::Def(Definition { name, expr, span }));
        }
        if let Some(Tok::Command(_)) = self.peek() {
            let cmd = self.command()?;
            let span = start.to(self.prev_span());
            return Ok(Item::Command(cmd, span));
        }
        let e = self.expr()?;
        if let Some(Tok::Command(c)) = self.peek() {
            if c == "eq" {
                self.pos += 1;
                let rhs = self.expr()?;
                let span = start.to(rhs.span());
                return Ok(Item::Command(Command::Eq(e, rhs), span));
            }
            return Err(self.unexpected("`;` or `:eq`"));
        }
        Ok(Item::Expr(e))
    }

    fn prev_span(&self) -> Span {
        self.toks
            .get(self.pos.wrapping_sub(1))
            .map_or(self.here(), |(_, s)| *s)
    }

    fn command(&mut self) -> Result<Command, ParseError> {
        let (name, span) = match self.bump() {
            Some((Tok::Command(n), s)) => (n, s),
            _ => unreachable!("caller checked"),
        };
        Ok(match name.as_str() {
            "min" => Command::Min(self.expr()?),
            "solve" => Command::Solve,
            "reset" => Command::Reset,
            "pow" => Command::Pow(self.expr()?),
            "exp" => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,` between the two arguments of `:exp`")?;
                Command::Exp(a, self.expr()?)
            }
            "check" => {
                let mut axiom = None;
                let (mut samples, mut seed, mut max_nodes) = (None, None, None);
                if let (Some(Tok::Ident(_)), next) = (self.peek(), self.peek_at(1)) {
                    if next != Some(&Tok::Equals) {
                        axiom = Some(self.ident()?.0);
                    }
                }
                while let Some(Tok::Ident(_)) = self.peek() {
                    let (key, kspan) = self.ident()?;
                    self.expect(Tok::Equals, "`=`")?;
                    let v = self.nat()?;
                    match key.as_str() {
                        "samples" => samples = Some(v),
                        "seed" => seed = Some(v),
                        "nodes" => max_nodes = Some(v),
                        _ => {
                            return Err(self.error_at(
                                format!("unknown option `{key}` (expected samples, seed or nodes)"),
                                kspan,
                            ))
                        }
                    }
                }
                Command::Check {
                    axiom,
                    samples,
                    seed,
                    max_nodes,
                }
            }
            "print" => {
                let mut depth = None;
                if let (Some(Tok::Ident(k)), Some(Tok::Equals)) = (self.peek(), self.peek_at(1)) {
                    if k == "depth" {
                        self.pos += 2;
                        depth = Some(self.nat()? as usize);
                    }
                }
                Command::Print {
                    depth,
                    expr: self.expr()?,
                }
            }
            "eq" => return Err(self.error_at("`:eq` goes between two expressions", span)),
            other => return Err(self.error_at(format!("unknown command `:{other}`"), span)),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.depth >= MAX_DEPTH {
            return Err(self.error_at("expression nested too deeply", self.here()));
        }
        self.depth += 1;
        let e = self.expr_inner();
        self.depth -= 1;
        e
    }

    fn expr_inner(&mut self) -> Result<Expr, ParseError> {
        let start = self.here();
        match self.peek() {
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        items.push(self.expr()?);
                        match self.peek() {
                            Some(Tok::Comma) => self.pos += 1,
                            Some(Tok::RBrace) => break,
                            _ => return Err(self.unexpected("`,` or `}`")),
                        }
                    }
                }
                let end = self.expect(Tok::RBrace, "`}`")?;
                Ok(Expr::Set(items, start.to(end)))
            }
            Some(Tok::Nat(_)) => {
                let n = self.nat()?;
                Ok(Expr::Nat(n, start))
            }
            Some(Tok::Mu) => {
                self.pos += 1;
                let (name, _) = self.ident()?;
                self.expect(Tok::Dot, "`.` after the binder")?;
                let body = self.expr()?;
                let span = start.to(body.span());
                Ok(Expr::Mu(name, Box::new(body), span))
            }
            Some(Tok::Ident(_)) => {
                let (name, span) = self.ident()?;
                if self.peek() != Some(&Tok::LParen) {
                    return Ok(Expr::Name(name, span));
                }
                let Some(b) = Builtin::from_name(&name) else {
                    return Err(self.error_at(format!("unknown function `{name}`"), span));
                };
                self.pos += 1;
                let mut args = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(self.expr()?);
                        match self.peek() {
                            Some(Tok::Comma) => self.pos += 1,
                            Some(Tok::RParen) => break,
                            _ => return Err(self.unexpected("`,` or `)`")),
                        }
                    }
                }
                let end = self.expect(Tok::RParen, "`)`")?;
                if args.len() != b.arity() {
                    return Err(self.error_at(
                        format!(
                            "`{}` takes {} argument{}, got {}",
                            b.name(),
                            b.arity(),
                            if b.arity() == 1 { "" } else { "s" },
                            args.len()
                        ),
                        span.to(end),
                    ));
                }
                Ok(Expr::Call(b, args, span.to(end)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
