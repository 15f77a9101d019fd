//! Renamings and substitutions on de Bruijn terms, the root-level β and
//! term-isomorphism steps, and the progress strategy that finds the next
//! redex.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Context, Side, Term, Type, Witness};
use crate::iso::{coerce, sym_normalize};
use crate::typing::{infer, iso_target, NormalKind, TypeError};

/// A map from variable indices to variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Renaming {
    Id,
    /// `i ↦ i + k`
    Shift(usize),
    /// `0 ↦ 0`, `i + 1 ↦ r(i) + 1`
    Lift(Box<Renaming>),
}

impl Renaming {
    pub fn shift() -> Renaming {
        Renaming::Shift(1)
    }

    pub fn lift(self) -> Renaming {
        Renaming::Lift(Box::new(self))
    }

    pub fn apply(&self, i: usize) -> usize {
        match self {
            Renaming::Id => i,
            Renaming::Shift(k) => i + k,
            Renaming::Lift(_) if i == 0 => 0,
            Renaming::Lift(r) => r.apply(i - 1) + 1,
        }
    }
}

/// Applies a renaming to every free variable of `t`.
pub fn rename(r: &Renaming, t: &Term) -> Term {
    rename_at(r, t, 0)
}

// Variables below `depth` are bound inside the term and left alone.
fn rename_at(r: &Renaming, t: &Term, depth: usize) -> Term {
    map_vars(t, depth, &mut |i, d| Term::Var(r.apply(i - d) + d))
}

/// Shifts every free variable up by `k`.
pub fn shift_by(k: usize, t: &Term) -> Term {
    if k == 0 {
        return t.clone();
    }
    rename_at(&Renaming::Shift(k), t, 0)
}

pub fn shift(t: &Term) -> Term {
    shift_by(1, t)
}

// Rebuilds `t`, replacing each free variable `i` (seen at binder depth `d`,
// so `i >= d`) by `f(i, d)`.
fn map_vars(t: &Term, depth: usize, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
    match t {
        Term::Star => Term::Star,
        Term::Var(i) if *i < depth => Term::Var(*i),
        Term::Var(i) => f(*i, depth),
        Term::Lam(ty, b) => Term::lam(ty.clone(), map_vars(b, depth + 1, f)),
        Term::App(x, y) => Term::app(map_vars(x, depth, f), map_vars(y, depth, f)),
        Term::Pair(x, y) => Term::pair(map_vars(x, depth, f), map_vars(y, depth, f)),
        Term::Proj(ty, side, s) => Term::proj(ty.clone(), *side, map_vars(s, depth, f)),
        Term::Iso {
            witness,
            target,
            subject,
        } => Term::Iso {
            witness: witness.clone(),
            target: target.clone(),
            subject: Box::new(map_vars(subject, depth, f)),
        },
    }
}

/// A map from variable indices to terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitution {
    /// `i ↦ Var i`
    Id,
    /// `0 ↦ t`, `i + 1 ↦ σ(i)`
    Cons(Term, Box<Substitution>),
    /// `0 ↦ Var 0`, `i + 1 ↦ shift(σ(i))`
    Exts(Box<Substitution>),
    /// `i ↦ Var(r(i))`, i.e. `ids ∘ r`
    Rename(Renaming),
    /// `i ↦ head[i]` for `i < head.len()`, then
    /// `i ↦ Var(i - head.len() + tail_base)`.
    Table { head: Vec<Term>, tail_base: usize },
}

impl Substitution {
    pub fn cons(t: Term, rest: Substitution) -> Substitution {
        Substitution::Cons(t, Box::new(rest))
    }

    pub fn exts(self) -> Substitution {
        Substitution::Exts(Box::new(self))
    }

    pub fn lookup(&self, i: usize) -> Term {
        match self {
            Substitution::Id => Term::Var(i),
            Substitution::Cons(t, _) if i == 0 => t.clone(),
            Substitution::Cons(_, rest) => rest.lookup(i - 1),
            Substitution::Exts(_) if i == 0 => Term::Var(0),
            Substitution::Exts(s) => shift(&s.lookup(i - 1)),
            Substitution::Rename(r) => Term::Var(r.apply(i)),
            Substitution::Table { head, tail_base } => match head.get(i) {
                Some(t) => t.clone(),
                None => Term::Var(i - head.len() + tail_base),
            },
        }
    }
}

/// Applies `s` to every free variable of `t`, lifting it under binders.
pub fn subst_apply(s: &Substitution, t: &Term) -> Term {
    // Under `d` binders the substitution is exts^d(s): bound variables stay,
    // and the image of a free variable is shifted past the binders.
    map_vars(t, 0, &mut |i, d| shift_by(d, &s.lookup(i - d)))
}

/// `t[s]`: replaces variable 0 of `t` by `s` and lowers the others.
pub fn subst_one(t: &Term, s: &Term) -> Term {
    subst_apply(&Substitution::cons(s.clone(), Substitution::Id), t)
}

/// Fuses two binders of types `a` (outer) and `b` (inner) into one binder of
/// type `a × b`.
pub fn sigma_curry(a: &Type, b: &Type) -> Substitution {
    Substitution::Table {
        head: vec![
            Term::proj(b.clone(), Side::Right, Term::Var(0)),
            Term::proj(a.clone(), Side::Left, Term::Var(0)),
        ],
        tail_base: 1,
    }
}

/// Splits a binder of pair type into two binders.
pub fn sigma_uncurry() -> Substitution {
    Substitution::Table {
        head: vec![Term::pair(Term::Var(1), Term::Var(0))],
        tail_base: 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    /// `⇌`, eliminates or simplifies a coercion
    #[serde(rename = "iso")]
    Iso,
    /// `↪`, β-reduction
    #[serde(rename = "beta")]
    Beta,
}

impl StepKind {
    pub fn glyph(self) -> &'static str {
        match self {
            StepKind::Iso => "<=>",
            StepKind::Beta => "|->",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    BetaLam,
    BetaProj1,
    BetaProj2,
    Comm,
    Asso,
    SplitAsso,
    SymAsso,
    SplitSymAsso,
    DistLam,
    DistLamEtaR,
    DistLamEtaL,
    EtaDistApp,
    SplitDistLam,
    SplitDistLamEta,
    Curry,
    EtaCurry,
    Uncurry,
    IdProd,
    IdProdIntro,
    IdArrow,
    IdArrowIntro,
    Abs,
    AbsIntro,
    CongProd1,
    CongProd2,
    CongArrow2,
    TSubst,
}

impl Rule {
    pub const ALL: [Rule; 27] = [
        Rule::BetaLam,
        Rule::BetaProj1,
        Rule::BetaProj2,
        Rule::Comm,
        Rule::Asso,
        Rule::SplitAsso,
        Rule::SymAsso,
        Rule::SplitSymAsso,
        Rule::DistLam,
        Rule::DistLamEtaR,
        Rule::DistLamEtaL,
        Rule::EtaDistApp,
        Rule::SplitDistLam,
        Rule::SplitDistLamEta,
        Rule::Curry,
        Rule::EtaCurry,
        Rule::Uncurry,
        Rule::IdProd,
        Rule::IdProdIntro,
        Rule::IdArrow,
        Rule::IdArrowIntro,
        Rule::Abs,
        Rule::AbsIntro,
        Rule::CongProd1,
        Rule::CongProd2,
        Rule::CongArrow2,
        Rule::TSubst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::BetaLam => "β-λ",
            Rule::BetaProj1 => "β-π₁",
            Rule::BetaProj2 => "β-π₂",
            Rule::Comm => "comm",
            Rule::Asso => "asso",
            Rule::SplitAsso => "split-asso",
            Rule::SymAsso => "sym-asso",
            Rule::SplitSymAsso => "split-sym-asso",
            Rule::DistLam => "dist-λ",
            Rule::DistLamEtaR => "dist-λη-r",
            Rule::DistLamEtaL => "dist-λη-l",
            Rule::EtaDistApp => "η-dist-app",
            Rule::SplitDistLam => "split-dist-λ",
            Rule::SplitDistLamEta => "split-dist-λ-η",
            Rule::Curry => "curry",
            Rule::EtaCurry => "η-curry",
            Rule::Uncurry => "uncurry",
            Rule::IdProd => "id-×",
            Rule::IdProdIntro => "id-×-i",
            Rule::IdArrow => "id-⇒",
            Rule::IdArrowIntro => "id-⇒-i",
            Rule::Abs => "abs",
            Rule::AbsIntro => "abs-i",
            Rule::CongProd1 => "cong-×₁",
            Rule::CongProd2 => "cong-×₂",
            Rule::CongArrow2 => "cong-⇒₂",
            Rule::TSubst => "t-subst",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn kind(self) -> StepKind {
        match self {
            Rule::BetaLam | Rule::BetaProj1 | Rule::BetaProj2 => StepKind::Beta,
            _ => StepKind::Iso,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Child positions along a congruence path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathTag {
    AppLeft,
    AppRight,
    PairLeft,
    PairRight,
    ProjBody,
    IsoBody,
    LamBody,
}

impl fmt::Display for PathTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PathTag::AppLeft => "AppLeft",
            PathTag::AppRight => "AppRight",
            PathTag::PairLeft => "PairLeft",
            PathTag::PairRight => "PairRight",
            PathTag::ProjBody => "ProjBody",
            PathTag::IsoBody => "IsoBody",
            PathTag::LamBody => "LamBody",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Step {
        kind: StepKind,
        rule: Rule,
        path: Vec<PathTag>,
        result: Term,
    },
    Done(NormalKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no reduction rule applies to the well-typed term {0}")]
    StuckTerm(Term),
    #[error("witness `{witness}` cannot relate {from} to any type")]
    IllFormedRedex { witness: Witness, from: Type },
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl RewriteError {
    pub fn code(&self) -> &'static str {
        match self {
            RewriteError::StuckTerm(_) => "stuck-term",
            RewriteError::IllFormedRedex { .. } => "ill-formed-redex",
            RewriteError::Type(e) => e.code(),
        }
    }
}

/// Root-level β step: `(λ b) s`, `π₁⟨r, s⟩` or `π₂⟨r, s⟩`.
pub fn step_beta_root(_g: &Context, t: &Term) -> Option<(Term, Rule)> {
    match t {
        Term::App(f, s) => match &**f {
            Term::Lam(_, body) => Some((subst_one(body, s), Rule::BetaLam)),
            _ => None,
        },
        Term::Proj(_, side, subject) => match (&**subject, side) {
            (Term::Pair(r, _), Side::Left) => Some(((**r).clone(), Rule::BetaProj1)),
            (Term::Pair(_, s), Side::Right) => Some(((**s).clone(), Rule::BetaProj2)),
            _ => None,
        },
        _ => None,
    }
}

/// Root-level term-isomorphism step on `[ρ] v` with `v` normal.
///
/// Returns `Ok(None)` when no rule applies, which for a neutral `v` means the
/// whole coercion is neutral.
pub fn step_iso_root(g: &Context, t: &Term) -> Result<Option<(Term, Rule)>, RewriteError> {
    let Term::Iso {
        witness,
        target,
        subject,
    } = t
    else {
        return Ok(None);
    };
    let source = infer(g, subject)?;
    let target = iso_target(witness, target.as_ref(), &source).map_err(|e| match e {
        TypeError::IsoNotApplicable { witness, from }
        | TypeError::IsoMismatch { witness, from, .. } => {
            RewriteError::IllFormedRedex { witness, from }
        }
        other => RewriteError::Type(other),
    })?;
    let w = sym_normalize(witness);
    let v = &**subject;
    Ok(iso_row(g, &w, v, &source, &target))
}

fn components(ty: &Type) -> (Type, Type) {
    match ty {
        Type::Product(a, b) | Type::Arrow(a, b) => ((**a).clone(), (**b).clone()),
        Type::Top => (Type::Top, Type::Top),
    }
}

fn eta_app(n: &Term) -> Term {
    Term::app(shift(n), Term::Var(0))
}

// The decision table. `source` is the type of `v`, `target` the type of the
// whole coercion; `w` is sym-normalized.
fn iso_row(
    g: &Context,
    w: &Witness,
    v: &Term,
    source: &Type,
    target: &Type,
) -> Option<(Term, Rule)> {
    use Witness as W;

    let lam_body_type = |domain: &Type, body: &Term| infer(&g.snoc(domain.clone()), body).ok();

    let out = match (w, v) {
        (W::Comm, Term::Pair(r, s)) => (Term::pair((**s).clone(), (**r).clone()), Rule::Comm),

        (W::Asso, Term::Pair(r, rest)) => match &**rest {
            Term::Pair(s, u) => (
                Term::pair(Term::pair((**r).clone(), (**s).clone()), (**u).clone()),
                Rule::Asso,
            ),
            n => {
                let (b, c) = components(&components(source).1);
                (
                    Term::pair(
                        Term::pair((**r).clone(), Term::proj(b, Side::Left, n.clone())),
                        Term::proj(c, Side::Right, n.clone()),
                    ),
                    Rule::SplitAsso,
                )
            }
        },

        (W::Sym(p), Term::Pair(first, u)) if **p == W::Asso => match &**first {
            Term::Pair(r, s) => (
                Term::pair((**r).clone(), Term::pair((**s).clone(), (**u).clone())),
                Rule::SymAsso,
            ),
            n => {
                let (a, b) = components(&components(source).0);
                (
                    Term::pair(
                        Term::proj(a, Side::Left, n.clone()),
                        Term::pair(Term::proj(b, Side::Right, n.clone()), (**u).clone()),
                    ),
                    Rule::SplitSymAsso,
                )
            }
        },

        (W::Dist, Term::Pair(l, r)) => match (&**l, &**r) {
            (Term::Lam(a, rb), Term::Lam(_, sb)) => (
                Term::lam(a.clone(), Term::pair((**rb).clone(), (**sb).clone())),
                Rule::DistLam,
            ),
            (Term::Lam(a, rb), n) => (
                Term::lam(a.clone(), Term::pair((**rb).clone(), eta_app(n))),
                Rule::DistLamEtaR,
            ),
            (n, Term::Lam(a, sb)) => (
                Term::lam(a.clone(), Term::pair(eta_app(n), (**sb).clone())),
                Rule::DistLamEtaL,
            ),
            (n1, n2) => {
                let a = components(&components(source).0).0;
                (
                    Term::lam(a, Term::pair(eta_app(n1), eta_app(n2))),
                    Rule::EtaDistApp,
                )
            }
        },

        (W::Sym(p), Term::Lam(a, body)) if **p == W::Dist => match &**body {
            Term::Pair(r, s) => (
                Term::pair(
                    Term::lam(a.clone(), (**r).clone()),
                    Term::lam(a.clone(), (**s).clone()),
                ),
                Rule::SplitDistLam,
            ),
            n => {
                let (b, c) = components(&components(source).1);
                (
                    Term::pair(
                        Term::lam(a.clone(), Term::proj(b, Side::Left, n.clone())),
                        Term::lam(a.clone(), Term::proj(c, Side::Right, n.clone())),
                    ),
                    Rule::SplitDistLamEta,
                )
            }
        },

        (W::Curry, Term::Lam(a, body)) => match &**body {
            Term::Lam(b, inner) => (
                Term::lam(
                    Type::product(a.clone(), b.clone()),
                    subst_apply(&sigma_curry(a, b), inner),
                ),
                Rule::Curry,
            ),
            n => {
                let b = components(&lam_body_type(a, n)?).0;
                (
                    Term::lam(
                        Type::product(a.clone(), b.clone()),
                        subst_apply(&sigma_curry(a, &b), &eta_app(n)),
                    ),
                    Rule::EtaCurry,
                )
            }
        },

        (W::Sym(p), Term::Lam(ab, body)) if **p == W::Curry => {
            let (a, b) = components(ab);
            (
                Term::lam(a, Term::lam(b, subst_apply(&sigma_uncurry(), body))),
                Rule::Uncurry,
            )
        }

        (W::IdProd, Term::Pair(r, _)) => ((**r).clone(), Rule::IdProd),
        (W::Sym(p), v) if **p == W::IdProd => {
            (Term::pair(v.clone(), Term::Star), Rule::IdProdIntro)
        }
        (W::IdArrow, v) => (Term::app(v.clone(), Term::Star), Rule::IdArrow),
        (W::Sym(p), v) if **p == W::IdArrow => (Term::lam(Type::Top, shift(v)), Rule::IdArrowIntro),
        (W::Abs, _) => (Term::Star, Rule::Abs),
        (W::Sym(p), v) if **p == W::Abs => {
            let a = components(target).0;
            (Term::lam(a, shift(v)), Rule::AbsIntro)
        }

        (W::CongProd1(inner), Term::Pair(r, s)) => {
            let (from, _) = components(source);
            let (to, _) = components(target);
            (
                Term::pair(
                    coerce((**inner).clone(), &from, &to, (**r).clone()),
                    (**s).clone(),
                ),
                Rule::CongProd1,
            )
        }
        (W::CongProd2(inner), Term::Pair(r, s)) => {
            let (_, from) = components(source);
            let (_, to) = components(target);
            (
                Term::pair(
                    (**r).clone(),
                    coerce((**inner).clone(), &from, &to, (**s).clone()),
                ),
                Rule::CongProd2,
            )
        }
        (W::CongArrow2(inner), Term::Lam(a, body)) => {
            let (_, from) = components(source);
            let (_, to) = components(target);
            (
                Term::lam(
                    a.clone(),
                    coerce((**inner).clone(), &from, &to, (**body).clone()),
                ),
                Rule::CongArrow2,
            )
        }
        (W::CongArrow1(inner), Term::Lam(a, body)) => {
            // The new binder has the converted domain; occurrences of the old
            // variable see it through the inverse coercion.
            let (b, _) = components(target);
            let back = sym_normalize(&Witness::sym((**inner).clone()));
            let sigma = Substitution::Table {
                head: vec![coerce(back, &b, a, Term::Var(0))],
                tail_base: 1,
            };
            (Term::lam(b, subst_apply(&sigma, body)), Rule::TSubst)
        }
        _ => return None,
    };
    Some(out)
}

/// Finds the next step of the deterministic strategy, or reports that `t`
/// is normal.
///
/// Subterms are normalized left to right (also under binders) before a root
/// step fires.
pub fn progress(g: &Context, t: &Term) -> Result<StepResult, RewriteError> {
    let mut g = g.clone();
    let mut path = Vec::new();
    let out = progress_in(&mut g, t, &mut path)?;
    Ok(match out {
        Found::Step(rule, result) => StepResult::Step {
            kind: rule.kind(),
            rule,
            path,
            result,
        },
        Found::Done(kind) => StepResult::Done(kind),
    })
}

enum Found {
    Step(Rule, Term),
    Done(NormalKind),
}

// On a step, `path` holds the position of the redex (outermost first) and the
// returned term is `t` with the redex contracted.
fn progress_in(g: &mut Context, t: &Term, path: &mut Vec<PathTag>) -> Result<Found, RewriteError> {
    macro_rules! descend {
        ($tag:expr, $sub:expr, $rebuild:expr) => {{
            path.push($tag);
            match progress_in(g, $sub, path)? {
                Found::Step(rule, r) => return Ok(Found::Step(rule, $rebuild(r))),
                Found::Done(kind) => {
                    path.pop();
                    kind
                }
            }
        }};
    }

    match t {
        Term::Star => Ok(Found::Done(NormalKind::NfStar)),
        Term::Var(_) => Ok(Found::Done(NormalKind::NfNeutral)),
        Term::Lam(ty, body) => {
            g.push(ty.clone());
            path.push(PathTag::LamBody);
            let inner = progress_in(g, body, path);
            g.pop();
            match inner? {
                Found::Step(rule, r) => Ok(Found::Step(rule, Term::lam(ty.clone(), r))),
                Found::Done(_) => {
                    path.pop();
                    Ok(Found::Done(NormalKind::NfLam))
                }
            }
        }
        Term::Pair(l, r) => {
            let lk = descend!(PathTag::PairLeft, l, |x| Term::pair(x, (**r).clone()));
            let rk = descend!(PathTag::PairRight, r, |x| Term::pair((**l).clone(), x));
            Ok(Found::Done(NormalKind::NfPair(Box::new(lk), Box::new(rk))))
        }
        Term::App(f, a) => {
            let fk = descend!(PathTag::AppLeft, f, |x| Term::app(x, (**a).clone()));
            descend!(PathTag::AppRight, a, |x| Term::app((**f).clone(), x));
            if let Some((r, rule)) = step_beta_root(g, t) {
                Ok(Found::Step(rule, r))
            } else if fk == NormalKind::NfNeutral {
                Ok(Found::Done(NormalKind::NfNeutral))
            } else {
                Err(RewriteError::StuckTerm(t.clone()))
            }
        }
        Term::Proj(ty, side, s) => {
            let sk = descend!(PathTag::ProjBody, s, |x| Term::proj(ty.clone(), *side, x));
            if let Some((r, rule)) = step_beta_root(g, t) {
                Ok(Found::Step(rule, r))
            } else if sk == NormalKind::NfNeutral {
                Ok(Found::Done(NormalKind::NfNeutral))
            } else {
                Err(RewriteError::StuckTerm(t.clone()))
            }
        }
        Term::Iso {
            witness,
            target,
            subject,
        } => {
            let sk = descend!(PathTag::IsoBody, subject, |x| Term::Iso {
                witness: witness.clone(),
                target: target.clone(),
                subject: Box::new(x),
            });
            match step_iso_root(g, t)? {
                Some((r, rule)) => Ok(Found::Step(rule, r)),
                None if sk == NormalKind::NfNeutral => Ok(Found::Done(NormalKind::NfNeutral)),
                None => Err(RewriteError::StuckTerm(t.clone())),
            }
        }
    }
}
