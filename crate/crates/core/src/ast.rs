//! Core data model: types, isomorphism witnesses, nameless terms and
//! typing contexts.

use std::fmt;

use thiserror::Error;

/// Simple types over the single base type `Top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Top,
    Arrow(Box<Type>, Box<Type>),
    Product(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), Box::new(codomain))
    }

    pub fn product(left: Type, right: Type) -> Type {
        Type::Product(Box::new(left), Box::new(right))
    }

    /// Height of the type tree; `Top` has height 0.
    pub fn height(&self) -> usize {
        match self {
            Type::Top => 0,
            Type::Arrow(a, b) | Type::Product(a, b) => 1 + a.height().max(b.height()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Top => 1,
            Type::Arrow(a, b) | Type::Product(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Structural equality of types.
pub fn type_eq(a: &Type, b: &Type) -> bool {
    a == b
}

/// Proof objects for the isomorphism relation. Each primitive is oriented
/// left-to-right as follows:
///
/// - `Comm`:    `A × B ≡ B × A`
/// - `Asso`:    `A × (B × C) ≡ (A × B) × C`
/// - `Dist`:    `(A → B) × (A → C) ≡ A → (B × C)`
/// - `Curry`:   `A → B → C ≡ (A × B) → C`
/// - `IdProd`:  `A × ⊤ ≡ A`
/// - `IdArrow`: `⊤ → A ≡ A`
/// - `Abs`:     `A → ⊤ ≡ ⊤`
///
/// There is no transitivity constructor; chains are nested coercions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Comm,
    Asso,
    Dist,
    Curry,
    IdProd,
    IdArrow,
    Abs,
    Sym(Box<Witness>),
    CongArrow1(Box<Witness>),
    CongArrow2(Box<Witness>),
    CongProd1(Box<Witness>),
    CongProd2(Box<Witness>),
}

impl Witness {
    pub fn sym(inner: Witness) -> Witness {
        Witness::Sym(Box::new(inner))
    }

    pub fn cong_arrow1(inner: Witness) -> Witness {
        Witness::CongArrow1(Box::new(inner))
    }

    pub fn cong_arrow2(inner: Witness) -> Witness {
        Witness::CongArrow2(Box::new(inner))
    }

    pub fn cong_prod1(inner: Witness) -> Witness {
        Witness::CongProd1(Box::new(inner))
    }

    pub fn cong_prod2(inner: Witness) -> Witness {
        Witness::CongProd2(Box::new(inner))
    }

    pub fn is_primitive(&self) -> bool {
        matches!(
            self,
            Witness::Comm
                | Witness::Asso
                | Witness::Dist
                | Witness::Curry
                | Witness::IdProd
                | Witness::IdArrow
                | Witness::Abs
        )
    }

    pub fn size(&self) -> usize {
        match self {
            Witness::Sym(w)
            | Witness::CongArrow1(w)
            | Witness::CongArrow2(w)
            | Witness::CongProd1(w)
            | Witness::CongProd2(w) => 1 + w.size(),
            _ => 1,
        }
    }

    pub fn height(&self) -> usize {
        self.size() - 1
    }
}

/// Which component of a pair a projection selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Nameless core terms. Variables are de Bruijn indices.
///
/// A coercion node may cache its target type. The cache is only needed when
/// the witness does not determine the target from the source (a `sym abs`
/// leaf has to invent an arrow domain); [`crate::iso::coerce`] fills it in
/// exactly in that case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Star,
    Var(usize),
    Lam(Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(Type, Side, Box<Term>),
    Iso {
        witness: Witness,
        target: Option<Type>,
        subject: Box<Term>,
    },
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn lam(domain: Type, body: Term) -> Term {
        Term::Lam(domain, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn proj(projected: Type, side: Side, subject: Term) -> Term {
        Term::Proj(projected, side, Box::new(subject))
    }

    /// Coercion node with no cached target.
    pub fn iso(witness: Witness, subject: Term) -> Term {
        Term::Iso {
            witness,
            target: None,
            subject: Box::new(subject),
        }
    }

    /// Coercion node with an explicit target type.
    pub fn iso_to(witness: Witness, target: Type, subject: Term) -> Term {
        Term::Iso {
            witness,
            target: Some(target),
            subject: Box::new(subject),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Star | Term::Var(_) => 1,
            Term::Lam(_, b) | Term::Proj(_, _, b) => 1 + b.size(),
            Term::Iso { subject, .. } => 1 + subject.size(),
            Term::App(f, a) | Term::Pair(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// True when every variable is bound within the term itself, i.e. the
    /// term is well-scoped in the empty context.
    pub fn is_closed(&self) -> bool {
        self.is_closed_under(0)
    }

    /// True when every variable index is below `depth` at its binding depth.
    pub fn is_closed_under(&self, depth: usize) -> bool {
        match self {
            Term::Star => true,
            Term::Var(i) => *i < depth,
            Term::Lam(_, b) => b.is_closed_under(depth + 1),
            Term::App(f, a) | Term::Pair(f, a) => {
                f.is_closed_under(depth) && a.is_closed_under(depth)
            }
            Term::Proj(_, _, s) => s.is_closed_under(depth),
            Term::Iso { subject, .. } => subject.is_closed_under(depth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable index {index} out of range for a context of length {len}")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub len: usize,
}

/// Typing context. Entries grow on the right; index 0 names the rightmost
/// entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<Type>,
}

impl Context {
    pub fn empty() -> Context {
        Context::default()
    }

    /// Builds a context from types listed left to right.
    pub fn from_types(types: impl IntoIterator<Item = Type>) -> Context {
        Context {
            entries: types.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns a new context with `ty` appended on the right.
    pub fn snoc(&self, ty: Type) -> Context {
        let mut entries = self.entries.clone();
        entries.push(ty);
        Context { entries }
    }

    pub fn push(&mut self, ty: Type) {
        self.entries.push(ty);
    }

    pub fn pop(&mut self) -> Option<Type> {
        self.entries.pop()
    }

    pub fn lookup(&self, index: usize) -> Result<&Type, IndexOutOfRange> {
        let len = self.entries.len();
        if index < len {
            Ok(&self.entries[len - 1 - index])
        } else {
            Err(IndexOutOfRange { index, len })
        }
    }

    /// Entries from left to right.
    pub fn types(&self) -> &[Type] {
        &self.entries
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_witness(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}
