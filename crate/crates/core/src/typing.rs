//! Type inference for core terms, checking against expected types, and the
//! normal / neutral / value classifiers.

use thiserror::Error;

use crate::ast::{Context, Side, Term, Type, Witness};
use crate::iso::{apply_iso, check_iso, sym_normalize, ApplyResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable #{index} in a context of length {len}")]
    UnboundVariable { index: usize, len: usize },
    #[error("cannot apply a term of type {got}, which is not a function")]
    NotAFunction { got: Type },
    #[error("argument type mismatch: expected {expected}, got {got}")]
    DomainMismatch { expected: Type, got: Type },
    #[error("cannot project from a term of type {got}, which is not a pair")]
    NotAPair { got: Type },
    #[error("projection mismatch: {projected} is not the {side:?} component of {subject}")]
    ProjectionMismatch {
        projected: Type,
        side: Side,
        subject: Type,
    },
    #[error("witness `{witness}` does not apply to {from}")]
    IsoNotApplicable { witness: Witness, from: Type },
    #[error("witness `{witness}` does not relate {from} to {target}")]
    IsoMismatch {
        witness: Witness,
        from: Type,
        target: Type,
    },
    #[error("witness `{witness}` leaves the target of {from} undetermined; add an ascription")]
    IsoAmbiguous { witness: Witness, from: Type },
    #[error("type mismatch: expected {expected}, got {got}")]
    Mismatch { expected: Type, got: Type },
    #[error("cannot resolve the target of `{witness}` from {from}; add an ascription")]
    AscriptionRequired { witness: Witness, from: Type },
}

impl TypeError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            TypeError::UnboundVariable { .. } => "unbound-variable",
            TypeError::NotAFunction { .. } => "not-a-function",
            TypeError::DomainMismatch { .. } => "domain-mismatch",
            TypeError::NotAPair { .. } => "not-a-pair",
            TypeError::ProjectionMismatch { .. } => "projection-mismatch",
            TypeError::IsoNotApplicable { .. } => "iso-not-applicable",
            TypeError::IsoMismatch { .. } => "iso-mismatch",
            TypeError::IsoAmbiguous { .. } => "iso-ambiguous",
            TypeError::Mismatch { .. } => "type-mismatch",
            TypeError::AscriptionRequired { .. } => "ascription-required",
        }
    }
}

/// Infers the unique type of `t` in `g`.
pub fn infer(g: &Context, t: &Term) -> Result<Type, TypeError> {
    let mut g = g.clone();
    infer_in(&mut g, t)
}

fn infer_in(g: &mut Context, t: &Term) -> Result<Type, TypeError> {
    match t {
        Term::Star => Ok(Type::Top),
        Term::Var(i) => g
            .lookup(*i)
            .cloned()
            .map_err(|e| TypeError::UnboundVariable {
                index: e.index,
                len: e.len,
            }),
        Term::Lam(domain, body) => {
            g.push(domain.clone());
            let codomain = infer_in(g, body);
            g.pop();
            Ok(Type::arrow(domain.clone(), codomain?))
        }
        Term::App(f, a) => {
            let fun_ty = infer_in(g, f)?;
            let arg_ty = infer_in(g, a)?;
            match fun_ty {
                Type::Arrow(dom, cod) if *dom == arg_ty => Ok(*cod),
                Type::Arrow(dom, _) => Err(TypeError::DomainMismatch {
                    expected: *dom,
                    got: arg_ty,
                }),
                other => Err(TypeError::NotAFunction { got: other }),
            }
        }
        Term::Pair(l, r) => Ok(Type::product(infer_in(g, l)?, infer_in(g, r)?)),
        Term::Proj(projected, side, s) => {
            let subject = infer_in(g, s)?;
            check_projection(projected, *side, subject)
        }
        Term::Iso {
            witness,
            target,
            subject,
        } => {
            let source = infer_in(g, subject)?;
            iso_target(witness, target.as_ref(), &source)
        }
    }
}

fn check_projection(projected: &Type, side: Side, subject: Type) -> Result<Type, TypeError> {
    match &subject {
        Type::Product(a, b) => {
            let selected = match side {
                Side::Left => a,
                Side::Right => b,
            };
            if **selected == *projected {
                Ok(projected.clone())
            } else {
                Err(TypeError::ProjectionMismatch {
                    projected: projected.clone(),
                    side,
                    subject,
                })
            }
        }
        _ => Err(TypeError::NotAPair { got: subject }),
    }
}

/// Target type of a coercion node, given the type of its subject.
pub fn iso_target(
    witness: &Witness,
    cached: Option<&Type>,
    source: &Type,
) -> Result<Type, TypeError> {
    if let Some(target) = cached {
        return if check_iso(witness, source, target) {
            Ok(target.clone())
        } else {
            Err(TypeError::IsoMismatch {
                witness: witness.clone(),
                from: source.clone(),
                target: target.clone(),
            })
        };
    }
    match apply_iso(witness, source) {
        ApplyResult::Determined(b) => Ok(b),
        ApplyResult::Ambiguous => Err(TypeError::IsoAmbiguous {
            witness: witness.clone(),
            from: source.clone(),
        }),
        ApplyResult::NotApplicable => Err(TypeError::IsoNotApplicable {
            witness: witness.clone(),
            from: source.clone(),
        }),
    }
}

/// Checks `t` against `expected`. Coercions whose witness is ambiguous are
/// resolved against the expected type flowing in from the enclosing
/// ascription, lambda/pair spine or application site.
pub fn check_with_ascription(g: &Context, t: &Term, expected: &Type) -> Result<Type, TypeError> {
    let mut g = g.clone();
    check_in(&mut g, t, expected)?;
    Ok(expected.clone())
}

fn check_in(g: &mut Context, t: &Term, expected: &Type) -> Result<(), TypeError> {
    match (t, expected) {
        (
            Term::Iso {
                witness,
                target: None,
                subject,
            },
            _,
        ) => {
            let source = infer_in(g, subject)?;
            match apply_iso(witness, &source) {
                ApplyResult::Ambiguous => {
                    if check_iso(witness, &source, expected) {
                        Ok(())
                    } else {
                        Err(TypeError::IsoMismatch {
                            witness: witness.clone(),
                            from: source,
                            target: expected.clone(),
                        })
                    }
                }
                _ => {
                    let got = iso_target(witness, None, &source)?;
                    same(expected, got)
                }
            }
        }
        (Term::Lam(domain, body), Type::Arrow(dom, cod)) if domain == &**dom => {
            g.push(domain.clone());
            let r = check_in(g, body, cod);
            g.pop();
            r
        }
        (Term::Pair(l, r), Type::Product(a, b)) => {
            check_in(g, l, a)?;
            check_in(g, r, b)
        }
        (Term::App(f, a), _) => match infer_in(g, f) {
            Ok(Type::Arrow(dom, cod)) => {
                check_in(g, a, &dom)?;
                same(expected, *cod)
            }
            Ok(other) => Err(TypeError::NotAFunction { got: other }),
            Err(TypeError::IsoAmbiguous { .. }) => {
                let arg = infer_in(g, a)?;
                check_in(g, f, &Type::arrow(arg, expected.clone()))
            }
            Err(e) => Err(e),
        },
        _ => {
            let got = infer_in(g, t)?;
            same(expected, got)
        }
    }
}

fn same(expected: &Type, got: Type) -> Result<(), TypeError> {
    if *expected == got {
        Ok(())
    } else {
        Err(TypeError::Mismatch {
            expected: expected.clone(),
            got,
        })
    }
}

/// A type with holes, used while resolving ambiguous coercions during
/// elaboration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Hole,
    Top,
    Arrow(Box<Shape>, Box<Shape>),
    Product(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn arrow(a: Shape, b: Shape) -> Shape {
        Shape::Arrow(Box::new(a), Box::new(b))
    }

    pub fn product(a: Shape, b: Shape) -> Shape {
        Shape::Product(Box::new(a), Box::new(b))
    }

    pub fn to_type(&self) -> Option<Type> {
        match self {
            Shape::Hole => None,
            Shape::Top => Some(Type::Top),
            Shape::Arrow(a, b) => Some(Type::arrow(a.to_type()?, b.to_type()?)),
            Shape::Product(a, b) => Some(Type::product(a.to_type()?, b.to_type()?)),
        }
    }

    /// Most specific shape compatible with both, if any.
    pub fn unify(&self, other: &Shape) -> Option<Shape> {
        match (self, other) {
            (Shape::Hole, s) | (s, Shape::Hole) => Some(s.clone()),
            (Shape::Top, Shape::Top) => Some(Shape::Top),
            (Shape::Arrow(a, b), Shape::Arrow(c, d)) => {
                Some(Shape::arrow(a.unify(c)?, b.unify(d)?))
            }
            (Shape::Product(a, b), Shape::Product(c, d)) => {
                Some(Shape::product(a.unify(c)?, b.unify(d)?))
            }
            _ => None,
        }
    }

    pub fn domain(&self) -> Shape {
        match self {
            Shape::Arrow(a, _) => (**a).clone(),
            _ => Shape::Hole,
        }
    }

    pub fn codomain(&self) -> Shape {
        match self {
            Shape::Arrow(_, b) => (**b).clone(),
            _ => Shape::Hole,
        }
    }

    pub fn left(&self) -> Shape {
        match self {
            Shape::Product(a, _) => (**a).clone(),
            _ => Shape::Hole,
        }
    }

    pub fn right(&self) -> Shape {
        match self {
            Shape::Product(_, b) => (**b).clone(),
            _ => Shape::Hole,
        }
    }
}

impl From<&Type> for Shape {
    fn from(ty: &Type) -> Shape {
        match ty {
            Type::Top => Shape::Top,
            Type::Arrow(a, b) => Shape::arrow(Shape::from(&**a), Shape::from(&**b)),
            Type::Product(a, b) => Shape::product(Shape::from(&**a), Shape::from(&**b)),
        }
    }
}

/// Everything the witness could map `source` to, with a hole for each domain
/// a `sym abs` leaf invents. `None` when the witness does not apply.
pub fn apply_iso_shape(witness: &Witness, source: &Type) -> Option<Shape> {
    shape_of(&sym_normalize(witness), source)
}

fn shape_of(w: &Witness, source: &Type) -> Option<Shape> {
    match (w, source) {
        (Witness::Sym(p), Type::Top) if **p == Witness::Abs => {
            Some(Shape::arrow(Shape::Hole, Shape::Top))
        }
        (Witness::CongArrow1(inner), Type::Arrow(a, c)) => {
            Some(Shape::arrow(shape_of(inner, a)?, Shape::from(&**c)))
        }
        (Witness::CongArrow2(inner), Type::Arrow(c, a)) => {
            Some(Shape::arrow(Shape::from(&**c), shape_of(inner, a)?))
        }
        (Witness::CongProd1(inner), Type::Product(a, c)) => {
            Some(Shape::product(shape_of(inner, a)?, Shape::from(&**c)))
        }
        (Witness::CongProd2(inner), Type::Product(c, a)) => {
            Some(Shape::product(Shape::from(&**c), shape_of(inner, a)?))
        }
        _ => apply_iso(w, source).determined().map(|b| Shape::from(&b)),
    }
}

/// Shape of a normal form, mirroring the normal-form grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalKind {
    NfLam,
    NfStar,
    NfPair(Box<NormalKind>, Box<NormalKind>),
    NfNeutral,
}

/// `neu := var | neu · norm | π neu | [iso] ≡ neu`
pub fn is_neutral(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, a) => is_neutral(f) && is_normal(a),
        Term::Proj(_, _, s) => is_neutral(s),
        Term::Iso { subject, .. } => is_neutral(subject),
        _ => false,
    }
}

/// `norm := ⟨norm, norm⟩ | λx.norm | ⋆ | neu`
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Star => true,
        Term::Lam(_, b) => is_normal(b),
        Term::Pair(l, r) => is_normal(l) && is_normal(r),
        _ => is_neutral(t),
    }
}

/// Lambdas, star, and pairs of values.
pub fn is_value(t: &Term) -> bool {
    match t {
        Term::Lam(..) | Term::Star => true,
        Term::Pair(l, r) => is_value(l) && is_value(r),
        _ => false,
    }
}

/// Classifies a normal term; `None` if it is not normal.
pub fn normal_kind(t: &Term) -> Option<NormalKind> {
    match t {
        Term::Star => Some(NormalKind::NfStar),
        Term::Lam(_, b) => is_normal(b).then_some(NormalKind::NfLam),
        Term::Pair(l, r) => Some(NormalKind::NfPair(
            Box::new(normal_kind(l)?),
            Box::new(normal_kind(r)?),
        )),
        _ => is_neutral(t).then_some(NormalKind::NfNeutral),
    }
}
