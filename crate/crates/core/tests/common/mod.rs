//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use isocalc::ast::{Context, Side, Term, Type, Witness};
use isocalc::metatheory::{gen_term, gen_type, GenConfig};
use isocalc::rewrite::PathTag;

// ---------------------------------------------------------------------------
// Enumeration

/// Every type of height at most `depth`.
pub fn all_types(depth: usize) -> Vec<Type> {
    let mut level = vec![Type::Top];
    for _ in 0..depth {
        let mut next = vec![Type::Top];
        for a in &level {
            for b in &level {
                next.push(Type::arrow(a.clone(), b.clone()));
                next.push(Type::product(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

pub const PRIMITIVES: [Witness; 7] = [
    Witness::Comm,
    Witness::Asso,
    Witness::Dist,
    Witness::Curry,
    Witness::IdProd,
    Witness::IdArrow,
    Witness::Abs,
];

/// Every witness of height at most `depth`.
pub fn all_witnesses(depth: usize) -> Vec<Witness> {
    let mut level = PRIMITIVES.to_vec();
    for _ in 0..depth {
        let mut next = PRIMITIVES.to_vec();
        for w in &level {
            next.push(Witness::sym(w.clone()));
            next.push(Witness::cong_arrow1(w.clone()));
            next.push(Witness::cong_arrow2(w.clone()));
            next.push(Witness::cong_prod1(w.clone()));
            next.push(Witness::cong_prod2(w.clone()));
        }
        level = next;
    }
    level
}

// ---------------------------------------------------------------------------
// Relational reading of witnesses, straight from the inference rules.
// `related(w, a)` is the set of `b` with `a ≡_w b`; the free arrow domain
// introduced by an inverted `abs` ranges over `domains`.

pub fn related(w: &Witness, a: &Type, domains: &[Type]) -> HashSet<Type> {
    use Type::*;
    let one = |t: Type| HashSet::from([t]);
    match (w, a) {
        (Witness::Sym(p), _) => related_inv(p, a, domains),
        (Witness::Comm, Product(x, y)) => one(Type::product((**y).clone(), (**x).clone())),
        (Witness::Asso, Product(x, yz)) => match &**yz {
            Product(y, z) => one(Type::product(
                Type::product((**x).clone(), (**y).clone()),
                (**z).clone(),
            )),
            _ => HashSet::new(),
        },
        (Witness::Dist, Product(l, r)) => match (&**l, &**r) {
            (Arrow(x, y), Arrow(x2, z)) if x == x2 => one(Type::arrow(
                (**x).clone(),
                Type::product((**y).clone(), (**z).clone()),
            )),
            _ => HashSet::new(),
        },
        (Witness::Curry, Arrow(x, yz)) => match &**yz {
            Arrow(y, z) => one(Type::arrow(
                Type::product((**x).clone(), (**y).clone()),
                (**z).clone(),
            )),
            _ => HashSet::new(),
        },
        (Witness::IdProd, Product(x, t)) if **t == Top => one((**x).clone()),
        (Witness::IdArrow, Arrow(t, x)) if **t == Top => one((**x).clone()),
        (Witness::Abs, Arrow(_, t)) if **t == Top => one(Top),
        (Witness::CongArrow1(p), Arrow(x, c)) => related(p, x, domains)
            .into_iter()
            .map(|b| Type::arrow(b, (**c).clone()))
            .collect(),
        (Witness::CongArrow2(p), Arrow(c, x)) => related(p, x, domains)
            .into_iter()
            .map(|b| Type::arrow((**c).clone(), b))
            .collect(),
        (Witness::CongProd1(p), Product(x, c)) => related(p, x, domains)
            .into_iter()
            .map(|b| Type::product(b, (**c).clone()))
            .collect(),
        (Witness::CongProd2(p), Product(c, x)) => related(p, x, domains)
            .into_iter()
            .map(|b| Type::product((**c).clone(), b))
            .collect(),
        _ => HashSet::new(),
    }
}

/// The set of `a` with `a ≡_w b`.
pub fn related_inv(w: &Witness, b: &Type, domains: &[Type]) -> HashSet<Type> {
    use Type::*;
    let one = |t: Type| HashSet::from([t]);
    match (w, b) {
        (Witness::Sym(p), _) => related(p, b, domains),
        (Witness::Comm, Product(x, y)) => one(Type::product((**y).clone(), (**x).clone())),
        (Witness::Asso, Product(xy, z)) => match &**xy {
            Product(x, y) => one(Type::product(
                (**x).clone(),
                Type::product((**y).clone(), (**z).clone()),
            )),
            _ => HashSet::new(),
        },
        (Witness::Dist, Arrow(x, yz)) => match &**yz {
            Product(y, z) => one(Type::product(
                Type::arrow((**x).clone(), (**y).clone()),
                Type::arrow((**x).clone(), (**z).clone()),
            )),
            _ => HashSet::new(),
        },
        (Witness::Curry, Arrow(xy, z)) => match &**xy {
            Product(x, y) => one(Type::arrow(
                (**x).clone(),
                Type::arrow((**y).clone(), (**z).clone()),
            )),
            _ => HashSet::new(),
        },
        (Witness::IdProd, x) => one(Type::product(x.clone(), Top)),
        (Witness::IdArrow, x) => one(Type::arrow(Top, x.clone())),
        (Witness::Abs, Top) => domains
            .iter()
            .map(|d| Type::arrow(d.clone(), Top))
            .collect(),
        (Witness::CongArrow1(p), Arrow(x, c)) => related_inv(p, x, domains)
            .into_iter()
            .map(|a| Type::arrow(a, (**c).clone()))
            .collect(),
        (Witness::CongArrow2(p), Arrow(c, x)) => related_inv(p, x, domains)
            .into_iter()
            .map(|a| Type::arrow((**c).clone(), a))
            .collect(),
        (Witness::CongProd1(p), Product(x, c)) => related_inv(p, x, domains)
            .into_iter()
            .map(|a| Type::product(a, (**c).clone()))
            .collect(),
        (Witness::CongProd2(p), Product(c, x)) => related_inv(p, x, domains)
            .into_iter()
            .map(|a| Type::product((**c).clone(), a))
            .collect(),
        _ => HashSet::new(),
    }
}

// ---------------------------------------------------------------------------
// Named terms with textbook capture-avoiding substitution.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Named {
    Star,
    Var(String),
    Lam(String, Type, Box<Named>),
    App(Box<Named>, Box<Named>),
    Pair(Box<Named>, Box<Named>),
    Proj(Type, Side, Box<Named>),
    Iso(Witness, Option<Type>, Box<Named>),
}

pub fn free_name(k: usize) -> String {
    format!("v{k}")
}

/// Converts to named form. Free variable `i` in a context of length `n` is
/// `v{n-1-i}`. Binders reuse the smallest `v{k}` that is not free in their
/// body, so shadowing and name clashes with free variables are common.
pub fn to_named(t: &Term, env: &mut Vec<String>) -> Named {
    match t {
        Term::Star => Named::Star,
        Term::Var(i) => Named::Var(env[env.len() - 1 - i].clone()),
        Term::Lam(ty, body) => {
            let used = free_names_of(body, env, 1);
            let name = (0..).map(free_name).find(|n| !used.contains(n)).unwrap();
            env.push(name.clone());
            let b = to_named(body, env);
            env.pop();
            Named::Lam(name, ty.clone(), Box::new(b))
        }
        Term::App(f, a) => Named::App(Box::new(to_named(f, env)), Box::new(to_named(a, env))),
        Term::Pair(l, r) => Named::Pair(Box::new(to_named(l, env)), Box::new(to_named(r, env))),
        Term::Proj(ty, side, s) => Named::Proj(ty.clone(), *side, Box::new(to_named(s, env))),
        Term::Iso {
            witness,
            target,
            subject,
        } => Named::Iso(
            witness.clone(),
            target.clone(),
            Box::new(to_named(subject, env)),
        ),
    }
}

// Names in `env` referred to by variables of `t` that escape `depth` binders.
fn free_names_of(t: &Term, env: &[String], depth: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect(t, depth, &mut |i| {
        if let Some(n) = env.len().checked_sub(1 + i) {
            out.insert(env[n].clone());
        }
    });
    out
}

fn collect(t: &Term, depth: usize, f: &mut impl FnMut(usize)) {
    match t {
        Term::Star => {}
        Term::Var(i) if *i >= depth => f(i - depth),
        Term::Var(_) => {}
        Term::Lam(_, b) => collect(b, depth + 1, f),
        Term::App(x, y) | Term::Pair(x, y) => {
            collect(x, depth, f);
            collect(y, depth, f);
        }
        Term::Proj(_, _, s) => collect(s, depth, f),
        Term::Iso { subject, .. } => collect(subject, depth, f),
    }
}

pub fn from_named(t: &Named, env: &mut Vec<String>) -> Term {
    match t {
        Named::Star => Term::Star,
        Named::Var(x) => {
            let pos = env.iter().rposition(|n| n == x).expect("bound name");
            Term::Var(env.len() - 1 - pos)
        }
        Named::Lam(x, ty, b) => {
            env.push(x.clone());
            let body = from_named(b, env);
            env.pop();
            Term::lam(ty.clone(), body)
        }
        Named::App(f, a) => Term::app(from_named(f, env), from_named(a, env)),
        Named::Pair(l, r) => Term::pair(from_named(l, env), from_named(r, env)),
        Named::Proj(ty, side, s) => Term::proj(ty.clone(), *side, from_named(s, env)),
        Named::Iso(w, target, s) => Term::Iso {
            witness: w.clone(),
            target: target.clone(),
            subject: Box::new(from_named(s, env)),
        },
    }
}

pub fn fv(t: &Named) -> BTreeSet<String> {
    match t {
        Named::Star => BTreeSet::new(),
        Named::Var(x) => BTreeSet::from([x.clone()]),
        Named::Lam(x, _, b) => {
            let mut s = fv(b);
            s.remove(x);
            s
        }
        Named::App(a, b) | Named::Pair(a, b) => {
            let mut s = fv(a);
            s.extend(fv(b));
            s
        }
        Named::Proj(_, _, s) | Named::Iso(_, _, s) => fv(s),
    }
}

/// `t[x := s]`, renaming binders that would capture a free name of `s`.
pub fn subst_named(t: &Named, x: &str, s: &Named) -> Named {
    let go = |u: &Named| Box::new(subst_named(u, x, s));
    match t {
        Named::Star => Named::Star,
        Named::Var(y) if y == x => s.clone(),
        Named::Var(_) => t.clone(),
        Named::Lam(y, _, _) if y == x => t.clone(),
        Named::Lam(y, ty, b) => {
            let fs = fv(s);
            if fs.contains(y) && fv(b).contains(x) {
                let mut avoid = fs;
                avoid.extend(fv(b));
                avoid.insert(x.to_string());
                let fresh = (0..)
                    .map(|k| format!("{y}'{k}"))
                    .find(|n| !avoid.contains(n))
                    .unwrap();
                let b2 = subst_named(b, y, &Named::Var(fresh.clone()));
                Named::Lam(fresh, ty.clone(), Box::new(subst_named(&b2, x, s)))
            } else {
                Named::Lam(y.clone(), ty.clone(), go(b))
            }
        }
        Named::App(a, b) => Named::App(go(a), go(b)),
        Named::Pair(a, b) => Named::Pair(go(a), go(b)),
        Named::Proj(ty, side, u) => Named::Proj(ty.clone(), *side, go(u)),
        Named::Iso(w, target, u) => Named::Iso(w.clone(), target.clone(), go(u)),
    }
}

/// Oracle for `subst_one`: `t` lives in `g·A` and `s` in `g`, where `g` has
/// `n` entries.
pub fn oracle_subst_one(n: usize, t: &Term, s: &Term) -> Term {
    let mut env: Vec<String> = (0..=n).map(free_name).collect();
    let nt = to_named(t, &mut env);
    env.pop();
    let ns = to_named(s, &mut env);
    let r = subst_named(&nt, &free_name(n), &ns);
    from_named(&r, &mut env)
}

// ---------------------------------------------------------------------------
// Generated open terms

/// `(g, A, t, s)` with `g·A ⊢ t` and `g ⊢ s : A`.
pub fn gen_open(config: &GenConfig, index: u64) -> (Context, Type, Term, Term) {
    let mut rng = config.rng_for(index);
    let n = (index % 4) as usize;
    let mut g = Context::empty();
    for _ in 0..n {
        g.push(gen_type(&mut rng, 2));
    }
    let a = gen_type(&mut rng, 2);
    let t_ty = gen_type(&mut rng, config.type_depth);
    let t = gen_term(
        &mut rng,
        config,
        &g.snoc(a.clone()),
        &t_ty,
        config.term_fuel,
    );
    let s = gen_term(&mut rng, config, &g, &a, config.term_fuel.min(3));
    (g, a, t, s)
}

// ---------------------------------------------------------------------------
// Paths

pub fn subterm_at<'a>(t: &'a Term, path: &[PathTag]) -> Option<&'a Term> {
    let Some((first, rest)) = path.split_first() else {
        return Some(t);
    };
    let next = match (first, t) {
        (PathTag::AppLeft, Term::App(f, _)) => f,
        (PathTag::AppRight, Term::App(_, a)) => a,
        (PathTag::PairLeft, Term::Pair(l, _)) => l,
        (PathTag::PairRight, Term::Pair(_, r)) => r,
        (PathTag::ProjBody, Term::Proj(_, _, s)) => s,
        (PathTag::IsoBody, Term::Iso { subject, .. }) => subject,
        (PathTag::LamBody, Term::Lam(_, b)) => b,
        _ => return None,
    };
    subterm_at(next, rest)
}

/// The Ω term, built by hand; each `sym abs` caches its target `T -> T`.
pub fn omega() -> Term {
    let top_to_top = Type::arrow(Type::Top, Type::Top);
    let half = Term::lam(
        Type::Top,
        Term::app(
            Term::iso_to(Witness::sym(Witness::Abs), top_to_top, Term::var(0)),
            Term::var(0),
        ),
    );
    Term::app(half.clone(), Term::iso(Witness::Abs, half))
}

pub const OMEGA_TEXT: &str = "(\\x:T. ([sym abs] x) x) ([abs] (\\x:T. ([sym abs] x) x))";
