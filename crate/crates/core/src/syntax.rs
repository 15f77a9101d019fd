//! Concrete text syntax.
//!
//! ```text
//! type    := prod ('->' type)?            right-associative
//! prod    := tatom ('*' tatom)*           left-associative, binds tighter
//! tatom   := 'T' | 'Top' | '(' type ')'
//!
//! witness := 'comm' | 'asso' | 'dist' | 'curry' | 'idx' | 'idarr' | 'abs'
//!          | ('sym' | 'cx1' | 'cx2' | 'ca1' | 'ca2') witness | '(' witness ')'
//!
//! term    := '\' ident ':' type '.' term | app
//! app     := prefix+ lam?
//! prefix  := '[' witness ']' operand
//!          | ('pi1' | 'pi2' | 'pi') '[' type ']' operand
//!          | atom
//! operand := lam | prefix
//! atom    := '*' | ident | '<' term ',' term '>' | '(' term (':' type)? ')'
//!
//! file    := ('assume' ident ':' type ';')* term
//! ```
//!
//! Unicode spellings `⊤ × → ⇒ λ ⋆ π π₁ π₂ ⟨ ⟩` are accepted on input and
//! never printed. `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::ast::{Context, Side, Term, Type, Witness};
use crate::iso::{apply_iso, check_iso, ApplyResult};
use crate::typing::{apply_iso_shape, Shape, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("`pi[{projected}]` matches neither component of {subject}")]
    AmbiguityUnresolvable { projected: Type, subject: Type },
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl ElabError {
    pub fn code(&self) -> &'static str {
        match self {
            ElabError::UnboundName(_) => "unbound-name",
            ElabError::AmbiguityUnresolvable { .. } => "projection-unresolvable",
            ElabError::Type(e) => e.code(),
        }
    }
}

/// Terms with named variables, as written by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceTerm {
    Star,
    Var(String),
    Lam(String, Type, Box<SurfaceTerm>),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Pair(Box<SurfaceTerm>, Box<SurfaceTerm>),
    /// A projection whose side is `None` is resolved during elaboration.
    Proj(Type, Option<Side>, Box<SurfaceTerm>),
    Iso(Witness, Box<SurfaceTerm>),
    Ascribe(Box<SurfaceTerm>, Type),
}

/// A source file: free-variable assumptions followed by one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub assumptions: Vec<(String, Type)>,
    pub body: SurfaceTerm,
}

impl Program {
    pub fn context(&self) -> Context {
        Context::from_types(self.assumptions.iter().map(|(_, ty)| ty.clone()))
    }

    pub fn names(&self) -> Vec<String> {
        self.assumptions.iter().map(|(n, _)| n.clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Colon,
    Semi,
    Dot,
    Comma,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Star,
    Times,
    Arrow,
    TopSym,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Times => f.write_str("`×`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::TopSym => f.write_str("`⊤`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            })
        };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    push(&mut out, Tok::Arrow);
                } else {
                    return Err(SyntaxError {
                        line: l,
                        column: col,
                        message: "expected `->`".into(),
                    });
                }
            }
            'π' => {
                bump!();
                let name = match chars.peek() {
                    Some('1') | Some('₁') => {
                        bump!();
                        "pi1"
                    }
                    Some('2') | Some('₂') => {
                        bump!();
                        "pi2"
                    }
                    _ => "pi",
                };
                push(&mut out, Tok::Ident(name.into()));
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    name.push(c);
                    bump!();
                }
                push(&mut out, Tok::Ident(name));
            }
            _ => {
                let tok = match c {
                    '\\' | 'λ' => Tok::Lambda,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '.' => Tok::Dot,
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' | '⟨' => Tok::LAngle,
                    '>' | '⟩' => Tok::RAngle,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '*' | '⋆' | '★' => Tok::Star,
                    '×' => Tok::Times,
                    '→' | '⇒' => Tok::Arrow,
                    '⊤' => Tok::TopSym,
                    other => {
                        return Err(SyntaxError {
                            line: l,
                            column: col,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                };
                bump!();
                push(&mut out, tok);
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

const KEYWORDS: &[&str] = &["pi", "pi1", "pi2", "assume"];

// Deeply nested input would otherwise overflow the stack.
const MAX_DEPTH: usize = 256;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let here = &self.toks[self.pos];
        Err(SyntaxError {
            line: here.line,
            column: here.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.error(format!("unexpected {other} after the end of input")),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error("nesting too deep");
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.advance();
                Ok(name)
            }
            other => self.error(format!("expected an identifier, found {other}")),
        }
    }

    // types

    fn ty(&mut self) -> PResult<Type> {
        self.enter()?;
        let left = self.prod_ty()?;
        let out = if *self.peek() == Tok::Arrow {
            self.advance();
            Type::arrow(left, self.ty()?)
        } else {
            left
        };
        self.leave();
        Ok(out)
    }

    fn prod_ty(&mut self) -> PResult<Type> {
        let mut acc = self.atom_ty()?;
        while matches!(self.peek(), Tok::Star | Tok::Times) {
            self.advance();
            acc = Type::product(acc, self.atom_ty()?);
        }
        Ok(acc)
    }

    fn atom_ty(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::TopSym => {
                self.advance();
                Ok(Type::Top)
            }
            Tok::Ident(name) if name == "T" || name == "Top" => {
                self.advance();
                Ok(Type::Top)
            }
            Tok::LParen => {
                self.advance();
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            other => self.error(format!("expected a type, found {other}")),
        }
    }

    // witnesses

    fn witness(&mut self) -> PResult<Witness> {
        self.enter()?;
        let out = match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let w = self.witness()?;
                self.expect(Tok::RParen)?;
                w
            }
            Tok::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "comm" => Witness::Comm,
                    "asso" => Witness::Asso,
                    "dist" => Witness::Dist,
                    "curry" => Witness::Curry,
                    "idx" => Witness::IdProd,
                    "idarr" => Witness::IdArrow,
                    "abs" => Witness::Abs,
                    "sym" => Witness::sym(self.witness()?),
                    "cx1" => Witness::cong_prod1(self.witness()?),
                    "cx2" => Witness::cong_prod2(self.witness()?),
                    "ca1" => Witness::cong_arrow1(self.witness()?),
                    "ca2" => Witness::cong_arrow2(self.witness()?),
                    _ => {
                        self.pos -= 1;
                        return self.error(format!("unknown witness `{name}`"));
                    }
                }
            }
            other => return self.error(format!("expected a witness, found {other}")),
        };
        self.leave();
        Ok(out)
    }

    // terms

    fn term(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let out = if *self.peek() == Tok::Lambda {
            self.lam()?
        } else {
            self.app()?
        };
        self.leave();
        Ok(out)
    }

    fn lam(&mut self) -> PResult<SurfaceTerm> {
        self.expect(Tok::Lambda)?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(SurfaceTerm::Lam(name, ty, Box::new(body)))
    }

    fn starts_prefix(&self) -> bool {
        match self.peek() {
            Tok::Star | Tok::LAngle | Tok::LParen | Tok::LBracket => true,
            Tok::Ident(name) => name != "assume",
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<SurfaceTerm> {
        let mut acc = self.prefix()?;
        loop {
            if self.starts_prefix() {
                let arg = self.prefix()?;
                acc = SurfaceTerm::App(Box::new(acc), Box::new(arg));
            } else if *self.peek() == Tok::Lambda {
                let arg = self.lam()?;
                acc = SurfaceTerm::App(Box::new(acc), Box::new(arg));
                break;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn operand(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let out = if *self.peek() == Tok::Lambda {
            self.lam()
        } else {
            self.prefix()
        };
        self.leave();
        out
    }

    fn prefix(&mut self) -> PResult<SurfaceTerm> {
        match self.peek().clone() {
            Tok::LBracket => {
                self.advance();
                let w = self.witness()?;
                self.expect(Tok::RBracket)?;
                let subject = self.operand()?;
                Ok(SurfaceTerm::Iso(w, Box::new(subject)))
            }
            Tok::Ident(name) if matches!(name.as_str(), "pi" | "pi1" | "pi2") => {
                self.advance();
                let side = match name.as_str() {
                    "pi1" => Some(Side::Left),
                    "pi2" => Some(Side::Right),
                    _ => None,
                };
                self.expect(Tok::LBracket)?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket)?;
                let subject = self.operand()?;
                Ok(SurfaceTerm::Proj(ty, side, Box::new(subject)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<SurfaceTerm> {
        match self.peek().clone() {
            Tok::Star => {
                self.advance();
                Ok(SurfaceTerm::Star)
            }
            Tok::Ident(_) => Ok(SurfaceTerm::Var(self.ident()?)),
            Tok::LAngle => {
                self.advance();
                let l = self.term()?;
                self.expect(Tok::Comma)?;
                let r = self.term()?;
                self.expect(Tok::RAngle)?;
                Ok(SurfaceTerm::Pair(Box::new(l), Box::new(r)))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                let out = if *self.peek() == Tok::Colon {
                    self.advance();
                    let ty = self.ty()?;
                    SurfaceTerm::Ascribe(Box::new(t), ty)
                } else {
                    t
                };
                self.expect(Tok::RParen)?;
                Ok(out)
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut assumptions = Vec::new();
        while matches!(self.peek(), Tok::Ident(k) if k == "assume") {
            self.advance();
            let name = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Semi)?;
            assumptions.push((name, ty));
        }
        let body = self.term()?;
        Ok(Program { assumptions, body })
    }

    fn context(&mut self) -> PResult<Vec<(String, Type)>> {
        let mut out = Vec::new();
        if *self.peek() == Tok::Eof {
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            self.expect(Tok::Colon)?;
            out.push((name, self.ty()?));
            if *self.peek() != Tok::Comma {
                break;
            }
            self.advance();
        }
        Ok(out)
    }
}

fn parse_all<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(text)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_type(text: &str) -> Result<Type, SyntaxError> {
    parse_all(text, Parser::ty)
}

pub fn parse_witness(text: &str) -> Result<Witness, SyntaxError> {
    parse_all(text, Parser::witness)
}

/// Whitespace-separated witnesses, e.g. `idx sym abs`.
pub fn parse_witness_seq(text: &str) -> Result<Vec<Witness>, SyntaxError> {
    parse_all(text, |p| {
        let mut out = Vec::new();
        while *p.peek() != Tok::Eof {
            out.push(p.witness()?);
        }
        Ok(out)
    })
}

pub fn parse_term(text: &str) -> Result<SurfaceTerm, SyntaxError> {
    parse_all(text, Parser::term)
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    parse_all(text, Parser::program)
}

/// Comma-separated `name: Type` bindings, leftmost first.
pub fn parse_context(text: &str) -> Result<Vec<(String, Type)>, SyntaxError> {
    parse_all(text, Parser::context)
}

// ---------------------------------------------------------------------------
// Elaboration

/// Converts a surface term to a core term under `scope` (leftmost binding
/// first).
pub fn elaborate(s: &SurfaceTerm, scope: &[(String, Type)]) -> Result<Term, ElabError> {
    elaborate_typed(s, scope).map(|(t, _)| t)
}

/// Like [`elaborate`] but also returns the type of the result.
pub fn elaborate_typed(
    s: &SurfaceTerm,
    scope: &[(String, Type)],
) -> Result<(Term, Type), ElabError> {
    let mut e = Elaborator {
        names: scope.iter().map(|(n, _)| n.clone()).collect(),
        types: scope.iter().map(|(_, t)| t.clone()).collect(),
    };
    e.elab(s, &Shape::Hole)
}

pub fn elaborate_program(p: &Program) -> Result<(Term, Type), ElabError> {
    elaborate_typed(&p.body, &p.assumptions)
}

struct Elaborator {
    names: Vec<String>,
    types: Vec<Type>,
}

impl Elaborator {
    fn with_binding<T>(&mut self, name: &str, ty: &Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.names.push(name.to_string());
        self.types.push(ty.clone());
        let out = f(self);
        self.names.pop();
        self.types.pop();
        out
    }

    fn elab(&mut self, s: &SurfaceTerm, expect: &Shape) -> Result<(Term, Type), ElabError> {
        match s {
            SurfaceTerm::Star => Ok((Term::Star, Type::Top)),
            SurfaceTerm::Var(name) => {
                let pos = self
                    .names
                    .iter()
                    .rposition(|n| n == name)
                    .ok_or_else(|| ElabError::UnboundName(name.clone()))?;
                let index = self.names.len() - 1 - pos;
                Ok((Term::Var(index), self.types[pos].clone()))
            }
            SurfaceTerm::Lam(name, domain, body) => {
                let (b, cod) =
                    self.with_binding(name, domain, |e| e.elab(body, &expect.codomain()))?;
                Ok((
                    Term::lam(domain.clone(), b),
                    Type::arrow(domain.clone(), cod),
                ))
            }
            SurfaceTerm::Pair(l, r) => {
                let (lt, lty) = self.elab(l, &expect.left())?;
                let (rt, rty) = self.elab(r, &expect.right())?;
                Ok((Term::pair(lt, rt), Type::product(lty, rty)))
            }
            SurfaceTerm::App(f, a) => self.elab_app(f, a, expect),
            SurfaceTerm::Proj(projected, side, subject) => {
                let hint = match side {
                    Some(Side::Left) => Shape::product(Shape::from(projected), Shape::Hole),
                    Some(Side::Right) => Shape::product(Shape::Hole, Shape::from(projected)),
                    None => Shape::Hole,
                };
                let (st, sty) = self.elab(subject, &hint)?;
                let side = match (side, &sty) {
                    (Some(side), _) => *side,
                    (None, Type::Product(a, b)) => {
                        if **a == *projected {
                            Side::Left
                        } else if **b == *projected {
                            Side::Right
                        } else {
                            return Err(ElabError::AmbiguityUnresolvable {
                                projected: projected.clone(),
                                subject: sty,
                            });
                        }
                    }
                    (None, _) => return Err(TypeError::NotAPair { got: sty }.into()),
                };
                let t = Term::proj(projected.clone(), side, st);
                let ty = crate::typing::infer(&Context::from_types(self.types.clone()), &t)?;
                Ok((t, ty))
            }
            SurfaceTerm::Iso(witness, subject) => {
                let (st, source) = self.elab(subject, &Shape::Hole)?;
                match apply_iso(witness, &source) {
                    ApplyResult::Determined(b) => Ok((Term::iso(witness.clone(), st), b)),
                    ApplyResult::NotApplicable => Err(TypeError::IsoNotApplicable {
                        witness: witness.clone(),
                        from: source,
                    }
                    .into()),
                    ApplyResult::Ambiguous => {
                        let resolved = apply_iso_shape(witness, &source)
                            .and_then(|shape| shape.unify(expect))
                            .and_then(|shape| shape.to_type());
                        match resolved {
                            Some(b) if check_iso(witness, &source, &b) => {
                                Ok((Term::iso_to(witness.clone(), b.clone(), st), b))
                            }
                            _ => Err(TypeError::AscriptionRequired {
                                witness: witness.clone(),
                                from: source,
                            }
                            .into()),
                        }
                    }
                }
            }
            SurfaceTerm::Ascribe(inner, ty) => {
                let (t, got) = self.elab(inner, &Shape::from(ty))?;
                if got == *ty {
                    Ok((t, got))
                } else {
                    Err(TypeError::Mismatch {
                        expected: ty.clone(),
                        got,
                    }
                    .into())
                }
            }
        }
    }

    fn elab_app(
        &mut self,
        f: &SurfaceTerm,
        a: &SurfaceTerm,
        expect: &Shape,
    ) -> Result<(Term, Type), ElabError> {
        let (ft, fty, at, aty) = match self.elab(f, &Shape::arrow(Shape::Hole, expect.clone())) {
            Ok((ft, fty)) => {
                let (at, aty) = self.elab(a, &Shape::from(&fty).domain())?;
                (ft, fty, at, aty)
            }
            // The function's own coercion may be resolvable once the
            // argument type is known.
            Err(ElabError::Type(TypeError::AscriptionRequired { .. })) => {
                let (at, aty) = self.elab(a, &Shape::Hole)?;
                let (ft, fty) = self.elab(f, &Shape::arrow(Shape::from(&aty), expect.clone()))?;
                (ft, fty, at, aty)
            }
            Err(e) => return Err(e),
        };
        match fty {
            Type::Arrow(dom, cod) if *dom == aty => Ok((Term::app(ft, at), *cod)),
            Type::Arrow(dom, _) => Err(TypeError::DomainMismatch {
                expected: *dom,
                got: aty,
            }
            .into()),
            other => Err(TypeError::NotAFunction { got: other }.into()),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

pub fn print_type(a: &Type) -> String {
    let mut out = String::new();
    write_type(&mut out, a);
    out
}

fn write_type(out: &mut String, a: &Type) {
    match a {
        Type::Top => out.push('T'),
        Type::Arrow(d, c) => {
            write_type_paren(out, d, matches!(**d, Type::Arrow(..)));
            out.push_str(" -> ");
            write_type(out, c);
        }
        Type::Product(l, r) => {
            write_type_paren(out, l, matches!(**l, Type::Arrow(..)));
            out.push_str(" * ");
            write_type_paren(out, r, !matches!(**r, Type::Top));
        }
    }
}

fn write_type_paren(out: &mut String, a: &Type, paren: bool) {
    if paren {
        out.push('(');
        write_type(out, a);
        out.push(')');
    } else {
        write_type(out, a);
    }
}

pub fn print_witness(w: &Witness) -> String {
    let mut out = String::new();
    let mut cur = w;
    loop {
        let (word, inner) = match cur {
            Witness::Comm => ("comm", None),
            Witness::Asso => ("asso", None),
            Witness::Dist => ("dist", None),
            Witness::Curry => ("curry", None),
            Witness::IdProd => ("idx", None),
            Witness::IdArrow => ("idarr", None),
            Witness::Abs => ("abs", None),
            Witness::Sym(i) => ("sym", Some(i)),
            Witness::CongProd1(i) => ("cx1", Some(i)),
            Witness::CongProd2(i) => ("cx2", Some(i)),
            Witness::CongArrow1(i) => ("ca1", Some(i)),
            Witness::CongArrow2(i) => ("ca2", Some(i)),
        };
        out.push_str(word);
        match inner {
            Some(i) => {
                out.push(' ');
                cur = i;
            }
            None => return out,
        }
    }
}

/// Space-separated witnesses, the serialization of a chain.
pub fn print_witness_seq(ws: &[Witness]) -> String {
    ws.iter().map(print_witness).collect::<Vec<_>>().join(" ")
}

/// Prints a term in the empty context. Binders are named `x0`, `x1`, … by
/// binding depth.
pub fn print_term(t: &Term) -> String {
    print_term_in(t, &[])
}

/// Prints a term whose free variables are named by `context` (leftmost
/// binding first).
pub fn print_term_in(t: &Term, context: &[String]) -> String {
    let mut p = Printer {
        names: context.to_vec(),
        reserved: context.len(),
        out: String::new(),
    };
    p.full(t);
    p.out
}

pub fn print_program(p: &Program, body: &Term) -> String {
    let mut out = String::new();
    for (name, ty) in &p.assumptions {
        out.push_str(&format!("assume {name} : {};\n", print_type(ty)));
    }
    out.push_str(&print_term_in(body, &p.names()));
    out.push('\n');
    out
}

struct Printer {
    names: Vec<String>,
    reserved: usize,
    out: String,
}

impl Printer {
    fn fresh(&self) -> String {
        let mut name = format!("x{}", self.names.len());
        while self.names[..self.reserved].contains(&name) || KEYWORDS.contains(&name.as_str()) {
            name.push('\'');
        }
        name
    }

    fn var(&mut self, i: usize) {
        if i < self.names.len() {
            let name = &self.names[self.names.len() - 1 - i];
            self.out.push_str(name);
        } else {
            let k = i - self.names.len();
            self.out.push_str(&format!("free{k}"));
        }
    }

    fn full(&mut self, t: &Term) {
        match t {
            Term::Lam(ty, body) => {
                let name = self.fresh();
                self.out.push('\\');
                self.out.push_str(&name);
                self.out.push(':');
                write_type(&mut self.out, ty);
                self.out.push_str(". ");
                self.names.push(name);
                self.full(body);
                self.names.pop();
            }
            _ => self.app(t),
        }
    }

    fn app(&mut self, t: &Term) {
        match t {
            Term::App(f, a) => {
                match **f {
                    Term::Lam(..) => self.parens(f),
                    _ => self.app(f),
                }
                self.out.push(' ');
                self.atom(a);
            }
            _ => self.prefix(t),
        }
    }

    fn prefix(&mut self, t: &Term) {
        match t {
            Term::Proj(ty, side, s) => {
                self.out.push_str(match side {
                    Side::Left => "pi1[",
                    Side::Right => "pi2[",
                });
                write_type(&mut self.out, ty);
                self.out.push_str("] ");
                self.operand(s);
            }
            Term::Iso {
                witness,
                target: None,
                subject,
            } => {
                self.out.push('[');
                self.out.push_str(&print_witness(witness));
                self.out.push_str("] ");
                self.operand(subject);
            }
            _ => self.atom(t),
        }
    }

    fn operand(&mut self, t: &Term) {
        match t {
            Term::Proj(..) | Term::Iso { target: None, .. } => self.prefix(t),
            _ => self.atom(t),
        }
    }

    fn atom(&mut self, t: &Term) {
        match t {
            Term::Star => self.out.push('*'),
            Term::Var(i) => self.var(*i),
            Term::Pair(l, r) => {
                self.out.push('<');
                self.full(l);
                self.out.push_str(", ");
                self.full(r);
                self.out.push('>');
            }
            Term::Iso {
                witness,
                target: Some(ty),
                subject,
            } => {
                self.out.push_str("([");
                self.out.push_str(&print_witness(witness));
                self.out.push_str("] ");
                self.operand(subject);
                self.out.push_str(" : ");
                write_type(&mut self.out, ty);
                self.out.push(')');
            }
            _ => self.parens(t),
        }
    }

    fn parens(&mut self, t: &Term) {
        self.out.push('(');
        self.full(t);
        self.out.push(')');
    }
}
