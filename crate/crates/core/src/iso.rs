//! Type isomorphism engine: applying and checking witnesses, normalizing
//! `sym`, and synthesizing witness chains between arbitrary types.

use crate::ast::{Term, Type, Witness};

/// Outcome of applying a witness to a source type in the forward direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApplyResult {
    Determined(Type),
    /// The witness relates the source to more than one type. This happens
    /// exactly when a `sym abs` leaf has to invent an arrow domain.
    Ambiguous,
    NotApplicable,
}

impl ApplyResult {
    pub fn determined(self) -> Option<Type> {
        match self {
            ApplyResult::Determined(ty) => Some(ty),
            _ => None,
        }
    }
}

/// Pushes `sym` down to primitive leaves.
///
/// Afterwards `Sym` only occurs directly above `Asso`, `Dist`, `Curry`,
/// `IdProd`, `IdArrow` or `Abs`.
pub fn sym_normalize(w: &Witness) -> Witness {
    normalize(w, false)
}

fn normalize(w: &Witness, flipped: bool) -> Witness {
    match w {
        Witness::Sym(inner) => normalize(inner, !flipped),
        Witness::Comm => Witness::Comm,
        Witness::CongArrow1(inner) => Witness::cong_arrow1(normalize(inner, flipped)),
        Witness::CongArrow2(inner) => Witness::cong_arrow2(normalize(inner, flipped)),
        Witness::CongProd1(inner) => Witness::cong_prod1(normalize(inner, flipped)),
        Witness::CongProd2(inner) => Witness::cong_prod2(normalize(inner, flipped)),
        prim if flipped => Witness::sym(prim.clone()),
        prim => prim.clone(),
    }
}

/// Applies `w` forward to `source`. The witness is sym-normalized first.
pub fn apply_iso(w: &Witness, source: &Type) -> ApplyResult {
    apply_normal(&sym_normalize(w), source)
}

fn apply_normal(w: &Witness, source: &Type) -> ApplyResult {
    use ApplyResult::*;
    use Type::*;

    let found = |ty: Type| Determined(ty);
    match (w, source) {
        (Witness::Comm, Product(x, y)) => found(Type::product((**y).clone(), (**x).clone())),
        (Witness::Asso, Product(x, yz)) => match &**yz {
            Product(y, z) => found(Type::product(
                Type::product((**x).clone(), (**y).clone()),
                (**z).clone(),
            )),
            _ => NotApplicable,
        },
        (Witness::Dist, Product(l, r)) => match (&**l, &**r) {
            (Arrow(x, y), Arrow(x2, z)) if x == x2 => found(Type::arrow(
                (**x).clone(),
                Type::product((**y).clone(), (**z).clone()),
            )),
            _ => NotApplicable,
        },
        (Witness::Curry, Arrow(x, yz)) => match &**yz {
            Arrow(y, z) => found(Type::arrow(
                Type::product((**x).clone(), (**y).clone()),
                (**z).clone(),
            )),
            _ => NotApplicable,
        },
        (Witness::IdProd, Product(x, t)) if **t == Top => found((**x).clone()),
        (Witness::IdArrow, Arrow(t, x)) if **t == Top => found((**x).clone()),
        (Witness::Abs, Arrow(_, t)) if **t == Top => found(Top),
        (Witness::Sym(p), _) => apply_inverse(p, source),
        (Witness::CongArrow1(inner), Arrow(a, c)) => {
            rebuild(apply_normal(inner, a), |b| Type::arrow(b, (**c).clone()))
        }
        (Witness::CongArrow2(inner), Arrow(c, a)) => {
            rebuild(apply_normal(inner, a), |b| Type::arrow((**c).clone(), b))
        }
        (Witness::CongProd1(inner), Product(a, c)) => {
            rebuild(apply_normal(inner, a), |b| Type::product(b, (**c).clone()))
        }
        (Witness::CongProd2(inner), Product(c, a)) => {
            rebuild(apply_normal(inner, a), |b| Type::product((**c).clone(), b))
        }
        _ => NotApplicable,
    }
}

fn rebuild(inner: ApplyResult, f: impl FnOnce(Type) -> Type) -> ApplyResult {
    match inner {
        ApplyResult::Determined(b) => ApplyResult::Determined(f(b)),
        other => other,
    }
}

// Inverse clause of a primitive.
fn apply_inverse(p: &Witness, source: &Type) -> ApplyResult {
    use ApplyResult::*;
    use Type::*;

    match (p, source) {
        (Witness::Comm, _) => apply_normal(&Witness::Comm, source),
        (Witness::Asso, Product(xy, z)) => match &**xy {
            Product(x, y) => Determined(Type::product(
                (**x).clone(),
                Type::product((**y).clone(), (**z).clone()),
            )),
            _ => NotApplicable,
        },
        (Witness::Dist, Arrow(x, yz)) => match &**yz {
            Product(y, z) => Determined(Type::product(
                Type::arrow((**x).clone(), (**y).clone()),
                Type::arrow((**x).clone(), (**z).clone()),
            )),
            _ => NotApplicable,
        },
        (Witness::Curry, Arrow(xy, z)) => match &**xy {
            Product(x, y) => Determined(Type::arrow(
                (**x).clone(),
                Type::arrow((**y).clone(), (**z).clone()),
            )),
            _ => NotApplicable,
        },
        (Witness::IdProd, x) => Determined(Type::product(x.clone(), Top)),
        (Witness::IdArrow, x) => Determined(Type::arrow(Top, x.clone())),
        (Witness::Abs, Top) => Ambiguous,
        (Witness::Asso | Witness::Dist | Witness::Curry | Witness::Abs, _) => NotApplicable,
        // Not reachable for normalized witnesses; fall back to normalizing.
        (other, _) => apply_normal(&sym_normalize(&Witness::sym(other.clone())), source),
    }
}

/// True iff the single-step relation denoted by `w` relates `source` to
/// `target`.
pub fn check_iso(w: &Witness, source: &Type, target: &Type) -> bool {
    check_normal(&sym_normalize(w), source, target)
}

fn check_normal(w: &Witness, source: &Type, target: &Type) -> bool {
    use Type::*;

    match w {
        Witness::Sym(p) => match &**p {
            Witness::Abs => *source == Top && matches!(target, Arrow(_, t) if **t == Top),
            _ => apply_normal(p, target) == ApplyResult::Determined(source.clone()),
        },
        Witness::CongArrow1(inner) => match (source, target) {
            (Arrow(a, c), Arrow(b, c2)) => c == c2 && check_normal(inner, a, b),
            _ => false,
        },
        Witness::CongArrow2(inner) => match (source, target) {
            (Arrow(c, a), Arrow(c2, b)) => c == c2 && check_normal(inner, a, b),
            _ => false,
        },
        Witness::CongProd1(inner) => match (source, target) {
            (Product(a, c), Product(b, c2)) => c == c2 && check_normal(inner, a, b),
            _ => false,
        },
        Witness::CongProd2(inner) => match (source, target) {
            (Product(c, a), Product(c2, b)) => c == c2 && check_normal(inner, a, b),
            _ => false,
        },
        prim => apply_normal(prim, source) == ApplyResult::Determined(target.clone()),
    }
}

/// Builds a coercion node from `source` to `target`, caching the target only
/// when the witness leaves it undetermined.
///
/// The caller guarantees `check_iso(witness, source, target)`.
pub fn coerce(witness: Witness, source: &Type, target: &Type, subject: Term) -> Term {
    debug_assert!(check_iso(&witness, source, target));
    match apply_iso(&witness, source) {
        ApplyResult::Determined(_) => Term::iso(witness, subject),
        _ => Term::iso_to(witness, target.clone(), subject),
    }
}

/// One element of a chain, together with the type it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub witness: Witness,
    pub target: Type,
}

/// A sequence of witnesses applied left to right, starting at `source`.
///
/// Every link records the type it produces, so links whose witness alone
/// is ambiguous (`sym abs`) still have a fixed target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessChain {
    pub source: Type,
    pub links: Vec<Link>,
}

impl WitnessChain {
    pub fn empty(source: Type) -> WitnessChain {
        WitnessChain {
            source,
            links: Vec::new(),
        }
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        self.links.iter().map(|l| l.witness.clone()).collect()
    }

    /// The type at the end of the chain.
    pub fn target(&self) -> &Type {
        self.links.last().map_or(&self.source, |l| &l.target)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    fn push(&mut self, witness: Witness, target: Type) {
        self.links.push(Link { witness, target });
    }

    fn append(&mut self, other: WitnessChain) {
        debug_assert_eq!(self.target(), &other.source);
        self.links.extend(other.links);
    }

    /// Lifts every link through a type-former context.
    fn lift(
        self,
        wrap_witness: impl Fn(Witness) -> Witness,
        wrap_type: impl Fn(Type) -> Type,
    ) -> WitnessChain {
        WitnessChain {
            source: wrap_type(self.source),
            links: self
                .links
                .into_iter()
                .map(|l| Link {
                    witness: wrap_witness(l.witness),
                    target: wrap_type(l.target),
                })
                .collect(),
        }
    }

    /// The chain running backwards, each witness replaced by its
    /// sym-normalized inverse.
    pub fn inverse(&self) -> WitnessChain {
        let mut types: Vec<&Type> = vec![&self.source];
        types.extend(self.links.iter().map(|l| &l.target));
        let mut out = WitnessChain::empty(self.target().clone());
        for (i, link) in self.links.iter().enumerate().rev() {
            out.push(
                sym_normalize(&Witness::sym(link.witness.clone())),
                types[i].clone(),
            );
        }
        out
    }
}

/// Collapses any type to `Top`.
///
/// Products collapse the left component, then the right, then drop the unit
/// with `IdProd`; arrows collapse the codomain and finish with `Abs`.
pub fn chain_to_top(a: &Type) -> WitnessChain {
    match a {
        Type::Top => WitnessChain::empty(Type::Top),
        Type::Product(x, y) => {
            let y_ty = (**y).clone();
            let mut chain =
                chain_to_top(x).lift(Witness::cong_prod1, |t| Type::product(t, y_ty.clone()));
            chain
                .append(chain_to_top(y).lift(Witness::cong_prod2, |t| Type::product(Type::Top, t)));
            chain.push(Witness::IdProd, Type::Top);
            chain
        }
        Type::Arrow(x, y) => {
            let x_ty = (**x).clone();
            let mut chain =
                chain_to_top(y).lift(Witness::cong_arrow2, |t| Type::arrow(x_ty.clone(), t));
            chain.push(Witness::Abs, Type::Top);
            chain
        }
    }
}

/// A chain from `a` to `b`, going through `Top`.
pub fn synth_chain(a: &Type, b: &Type) -> WitnessChain {
    let mut chain = chain_to_top(a);
    chain.append(chain_to_top(b).inverse());
    chain
}

/// Folds `apply_iso` over bare witnesses, stopping at the first outcome that
/// is not `Determined`.
pub fn apply_witnesses(witnesses: &[Witness], source: &Type) -> ApplyResult {
    let mut current = source.clone();
    for w in witnesses {
        match apply_iso(w, &current) {
            ApplyResult::Determined(next) => current = next,
            other => return other,
        }
    }
    ApplyResult::Determined(current)
}

/// Folds a chain over `source`. Ambiguous links are resolved by checking
/// against the target they record; a link whose witness does not relate the
/// current type to its recorded target yields `NotApplicable`.
pub fn apply_chain(chain: &WitnessChain, source: &Type) -> ApplyResult {
    if *source != chain.source {
        return ApplyResult::NotApplicable;
    }
    let mut current = source.clone();
    for link in &chain.links {
        match apply_iso(&link.witness, &current) {
            ApplyResult::Determined(next) if next == link.target => current = next,
            ApplyResult::Ambiguous if check_iso(&link.witness, &current, &link.target) => {
                current = link.target.clone()
            }
            _ => return ApplyResult::NotApplicable,
        }
    }
    ApplyResult::Determined(current)
}

/// Wraps `term` (of the chain's source type) in one coercion per link; the
/// outermost node carries the last witness.
pub fn wrap_chain(chain: &WitnessChain, term: Term) -> Term {
    let mut current = chain.source.clone();
    let mut out = term;
    for link in &chain.links {
        out = coerce(link.witness.clone(), &current, &link.target, out);
        current = link.target.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Witness::*;

    fn top() -> Type {
        Type::Top
    }
    fn arr(a: Type, b: Type) -> Type {
        Type::arrow(a, b)
    }
    fn prod(a: Type, b: Type) -> Type {
        Type::product(a, b)
    }

    #[test]
    fn sym_normalize_examples() {
        assert_eq!(sym_normalize(&Witness::sym(Witness::sym(Comm))), Comm);
        assert_eq!(
            sym_normalize(&Witness::sym(Witness::cong_prod1(Curry))),
            Witness::cong_prod1(Witness::sym(Curry))
        );
        assert_eq!(sym_normalize(&Witness::sym(Comm)), Comm);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            apply_iso(&Comm, &prod(top(), arr(top(), top()))),
            ApplyResult::Determined(prod(arr(top(), top()), top()))
        );
        assert_eq!(
            apply_iso(&Witness::sym(Abs), &top()),
            ApplyResult::Ambiguous
        );
        assert_eq!(apply_iso(&Abs, &top()), ApplyResult::NotApplicable);
        assert_eq!(
            apply_iso(&Curry, &arr(top(), arr(top(), top()))),
            ApplyResult::Determined(arr(prod(top(), top()), top()))
        );
    }

    #[test]
    fn sym_abs_has_several_targets() {
        let sa = Witness::sym(Abs);
        assert!(check_iso(&sa, &top(), &arr(top(), top())));
        assert!(check_iso(&sa, &top(), &arr(prod(top(), top()), top())));
    }

    #[test]
    fn ambiguity_propagates_through_congruence() {
        let w = Witness::cong_prod1(Witness::sym(Abs));
        assert_eq!(apply_iso(&w, &prod(top(), top())), ApplyResult::Ambiguous);
        let w = Witness::cong_arrow2(Abs);
        assert_eq!(apply_iso(&w, &top()), ApplyResult::NotApplicable);
    }

    #[test]
    fn dist_requires_equal_domains() {
        let ok = prod(arr(top(), top()), arr(top(), prod(top(), top())));
        assert_eq!(
            apply_iso(&Dist, &ok),
            ApplyResult::Determined(arr(top(), prod(top(), prod(top(), top()))))
        );
        let bad = prod(arr(top(), top()), arr(arr(top(), top()), top()));
        assert_eq!(apply_iso(&Dist, &bad), ApplyResult::NotApplicable);
    }

    #[test]
    fn inverses_on_the_wrong_shape_do_not_apply() {
        for p in [Asso, Dist, Curry, Abs] {
            let w = Witness::sym(p);
            assert_eq!(
                apply_iso(&w, &prod(top(), top())),
                ApplyResult::NotApplicable
            );
            assert!(!check_iso(&w, &prod(top(), top()), &top()));
        }
    }

    #[test]
    fn check_examples() {
        assert!(check_iso(&Abs, &arr(prod(top(), top()), top()), &top()));
        assert!(check_iso(
            &Witness::sym(Abs),
            &top(),
            &arr(arr(top(), top()), top())
        ));
        assert!(check_iso(&Comm, &prod(top(), top()), &prod(top(), top())));
        assert!(!check_iso(&IdProd, &top(), &top()));
    }

    #[test]
    fn chain_to_top_examples() {
        assert!(chain_to_top(&top()).is_empty());
        assert_eq!(chain_to_top(&arr(top(), top())).witnesses(), vec![Abs]);
        assert_eq!(chain_to_top(&prod(top(), top())).witnesses(), vec![IdProd]);
    }

    #[test]
    fn synth_chain_examples() {
        assert!(synth_chain(&top(), &top()).is_empty());
        assert_eq!(
            synth_chain(&top(), &arr(top(), top())).witnesses(),
            vec![Witness::sym(Abs)]
        );
        let c = synth_chain(&prod(top(), top()), &arr(top(), top()));
        assert_eq!(c.witnesses(), vec![IdProd, Witness::sym(Abs)]);
        assert_eq!(
            apply_chain(&c, &prod(top(), top())),
            ApplyResult::Determined(arr(top(), top()))
        );
    }

    #[test]
    fn chain_folds() {
        assert_eq!(
            apply_chain(&WitnessChain::empty(top()), &top()),
            ApplyResult::Determined(top())
        );
        let c = chain_to_top(&arr(top(), top()));
        assert_eq!(
            apply_chain(&c, &arr(top(), top())),
            ApplyResult::Determined(top())
        );
        // Bare witness folds cannot see past sym abs.
        assert_eq!(
            apply_witnesses(&[Witness::sym(Abs)], &top()),
            ApplyResult::Ambiguous
        );
        assert_eq!(apply_witnesses(&[Abs], &top()), ApplyResult::NotApplicable);
    }

    #[test]
    fn wrap_chain_caches_ambiguous_targets() {
        let c = synth_chain(&top(), &arr(top(), top()));
        assert_eq!(
            wrap_chain(&c, Term::var(0)),
            Term::iso_to(Witness::sym(Abs), arr(top(), top()), Term::var(0))
        );
        let c = chain_to_top(&arr(top(), top()));
        assert_eq!(wrap_chain(&c, Term::var(0)), Term::iso(Abs, Term::var(0)));
    }
}
