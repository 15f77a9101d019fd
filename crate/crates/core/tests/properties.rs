mod common;

use isocalc::ast::{type_eq, Context, Term, Type, Witness};
use isocalc::eval::{evaluate, format_trace, trace_to_json, JsonTrace, TraceFormat};
use isocalc::iso::{
    apply_chain, apply_iso, check_iso, sym_normalize, synth_chain, wrap_chain, ApplyResult,
};
use isocalc::metatheory::{gen_sample, gen_type, GenConfig};
use isocalc::rewrite::{
    progress, rename, subst_apply, subst_one, Renaming, StepKind, StepResult, Substitution,
};
use isocalc::syntax::{
    elaborate, parse_term, parse_type, parse_witness, print_term, print_term_in, print_type,
    print_witness,
};
use isocalc::typing::{infer, is_normal, is_value};
use proptest::prelude::*;

use common::*;

fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = Just(Type::Top);
    leaf.prop_recursive(5, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::product(a, b)),
        ]
    })
}

fn arb_witness() -> impl Strategy<Value = Witness> {
    let leaf = prop::sample::select(PRIMITIVES.to_vec());
    leaf.prop_recursive(4, 16, 1, |inner| {
        prop_oneof![
            inner.clone().prop_map(Witness::sym),
            inner.clone().prop_map(Witness::cong_arrow1),
            inner.clone().prop_map(Witness::cong_arrow2),
            inner.clone().prop_map(Witness::cong_prod1),
            inner.prop_map(Witness::cong_prod2),
        ]
    })
}

fn arb_renaming() -> impl Strategy<Value = Renaming> {
    prop_oneof![Just(Renaming::Id), (1usize..4).prop_map(Renaming::Shift),].prop_recursive(
        3,
        4,
        1,
        |inner| inner.prop_map(Renaming::lift),
    )
}

fn occurs_in(needle: &Term, t: &Term) -> bool {
    needle == t
        || match t {
            Term::Star | Term::Var(_) => false,
            Term::Lam(_, b) | Term::Proj(_, _, b) => occurs_in(needle, b),
            Term::Iso { subject, .. } => occurs_in(needle, subject),
            Term::App(x, y) | Term::Pair(x, y) => occurs_in(needle, x) || occurs_in(needle, y),
        }
}

fn config() -> GenConfig {
    GenConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn type_eq_is_an_equivalence(a in arb_type(), b in arb_type(), c in arb_type()) {
        prop_assert!(type_eq(&a, &a));
        prop_assert_eq!(type_eq(&a, &b), type_eq(&b, &a));
        if type_eq(&a, &b) && type_eq(&b, &c) {
            prop_assert!(type_eq(&a, &c));
        }
        prop_assert_eq!(type_eq(&a, &b), print_type(&a) == print_type(&b));
    }

    #[test]
    fn lookup_counts_from_the_right(types in prop::collection::vec(arb_type(), 0..6), i in 0usize..8) {
        let g = Context::from_types(types.clone());
        match g.lookup(i) {
            Ok(ty) => prop_assert_eq!(ty, &types[types.len() - 1 - i]),
            Err(e) => {
                prop_assert!(i >= types.len());
                prop_assert_eq!((e.index, e.len), (i, types.len()));
            }
        }
        let ty = Type::Top;
        let extended = g.snoc(ty.clone());
        prop_assert_eq!(extended.lookup(0), Ok(&ty));
    }

    #[test]
    fn types_round_trip(a in arb_type()) {
        prop_assert_eq!(parse_type(&print_type(&a)), Ok(a));
    }

    #[test]
    fn witnesses_round_trip(w in arb_witness()) {
        prop_assert_eq!(parse_witness(&print_witness(&w)), Ok(w));
    }

    #[test]
    fn sym_swaps_source_and_target(w in arb_witness(), a in arb_type()) {
        if let ApplyResult::Determined(b) = apply_iso(&w, &a) {
            prop_assert!(check_iso(&w, &a, &b));
            prop_assert!(check_iso(&Witness::sym(w.clone()), &b, &a));
            prop_assert_eq!(apply_iso(&sym_normalize(&w), &a), ApplyResult::Determined(b));
        }
    }

    #[test]
    fn sym_normalize_is_idempotent_and_involutive(w in arb_witness()) {
        let n = sym_normalize(&w);
        prop_assert_eq!(sym_normalize(&n), n.clone());
        prop_assert_eq!(sym_normalize(&Witness::sym(Witness::sym(w))), n);
    }

    #[test]
    fn normalization_preserves_the_relation(w in arb_witness(), a in arb_type()) {
        let domains = all_types(2);
        let n = sym_normalize(&w);
        let rel = related(&w, &a, &domains);
        prop_assert_eq!(&rel, &related(&n, &a, &domains));
        for b in &rel {
            prop_assert!(check_iso(&w, &a, b));
        }
    }

    #[test]
    fn synthesized_chains_verify(a in arb_type(), b in arb_type()) {
        let chain = synth_chain(&a, &b);
        let mut cur = a.clone();
        for link in &chain.links {
            prop_assert!(check_iso(&link.witness, &cur, &link.target));
            cur = link.target.clone();
        }
        prop_assert_eq!(&cur, &b);
        prop_assert_eq!(apply_chain(&chain, &a), ApplyResult::Determined(b.clone()));
        let g = Context::from_types([a.clone()]);
        prop_assert_eq!(infer(&g, &wrap_chain(&chain, Term::var(0))), Ok(b));
    }

    #[test]
    fn generated_terms_have_their_target(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (ty, t) = gen_sample(&cfg, index);
        prop_assert_eq!(infer(&Context::empty(), &t), Ok(ty));
    }

    #[test]
    fn terms_round_trip(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (_, t) = gen_sample(&cfg, index);
        let text = print_term(&t);
        let back = elaborate(&parse_term(&text).unwrap(), &[]);
        prop_assert_eq!(back, Ok(t), "{}", text);
    }

    #[test]
    fn open_terms_round_trip(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (g, a, t, _) = gen_open(&cfg, index);
        let g = g.snoc(a);
        let scope: Vec<(String, Type)> = g
            .types()
            .iter()
            .enumerate()
            .map(|(k, ty)| (format!("y{k}"), ty.clone()))
            .collect();
        let names: Vec<String> = scope.iter().map(|(n, _)| n.clone()).collect();
        let text = print_term_in(&t, &names);
        prop_assert_eq!(elaborate(&parse_term(&text).unwrap(), &scope), Ok(t), "{}", text);
    }

    #[test]
    fn identity_substitution(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (_, _, t, _) = gen_open(&cfg, index);
        prop_assert_eq!(subst_apply(&Substitution::Id, &t), t);
    }

    #[test]
    fn renaming_is_substitution_by_variables(
        seed in any::<u64>(),
        index in 0u64..1000,
        r in arb_renaming(),
    ) {
        let cfg = GenConfig { seed, ..config() };
        let (_, _, t, _) = gen_open(&cfg, index);
        prop_assert_eq!(rename(&r, &t), subst_apply(&Substitution::Rename(r), &t));
    }

    #[test]
    fn subst_split(seed in any::<u64>(), index in 0u64..1000, shift in 0usize..3) {
        let cfg = GenConfig { seed, ..config() };
        let (_, _, t, s) = gen_open(&cfg, index);
        let sigma = match shift {
            0 => Substitution::Id,
            k => Substitution::Rename(Renaming::Shift(k)),
        };
        let lhs = subst_one(&subst_apply(&sigma.clone().exts(), &t), &s);
        let rhs = subst_apply(&Substitution::cons(s, sigma), &t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subst_one_matches_named_oracle(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (g, _, t, s) = gen_open(&cfg, index);
        prop_assert_eq!(subst_one(&t, &s), oracle_subst_one(g.len(), &t, &s));
    }

    #[test]
    fn steps_preserve_types_and_shrink_witnesses(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (g, a, t, _) = gen_open(&cfg, index);
        let g = g.snoc(a);
        let ty = infer(&g, &t).unwrap();
        let mut cur = t;
        for _ in 0..10_000 {
            let r = progress(&g, &cur).unwrap();
            prop_assert_eq!(&r, &progress(&g, &cur).unwrap());
            match r {
                StepResult::Done(_) => {
                    prop_assert!(is_normal(&cur));
                    break;
                }
                StepResult::Step { kind, path, result, .. } => {
                    prop_assert_ne!(&result, &cur);
                    prop_assert_eq!(infer(&g, &result), Ok(ty.clone()));
                    if kind == StepKind::Iso {
                        let before = subterm_at(&cur, &path).unwrap();
                        let after = subterm_at(&result, &path).unwrap();
                        let Term::Iso { witness: w0, subject, .. } = before else {
                            panic!("iso step at a non-coercion");
                        };
                        // Either the root coercion is gone (what is left, if a
                        // coercion, came out of the subject) or its witness shrank.
                        if let Term::Iso { witness: w1, .. } = after {
                            prop_assert!(
                                sym_normalize(w1).size() < sym_normalize(w0).size()
                                    || occurs_in(after, subject),
                                "{} -> {}", print_term(before), print_term(after)
                            );
                        }
                    }
                    cur = result;
                }
            }
        }
    }

    #[test]
    fn closed_runs_end_in_values(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig { seed, ..config() };
        let (ty, t) = gen_sample(&cfg, index);
        let tr = evaluate(&Context::empty(), &t, cfg.fuel).unwrap();
        prop_assert!(is_value(&tr.final_term));
        prop_assert_eq!(infer(&Context::empty(), &tr.final_term), Ok(ty));
        for pair in tr.steps.windows(2) {
            prop_assert_eq!(&pair[0].after, &pair[1].before);
        }
    }

    #[test]
    fn json_traces_reparse(seed in any::<u64>(), index in 0u64..200) {
        let cfg = GenConfig { seed, ..config() };
        let (_, t) = gen_sample(&cfg, index);
        let tr = evaluate(&Context::empty(), &t, cfg.fuel).unwrap();
        let back: JsonTrace = serde_json::from_str(&format_trace(&tr, TraceFormat::Json)).unwrap();
        prop_assert_eq!(back, trace_to_json(&Context::empty(), &[], &tr));
    }

    #[test]
    fn parsers_never_panic(
        tokens in prop::collection::vec(
            prop::sample::select(vec![
                "\\", "x", "y", ":", "T", ".", "(", ")", "<", ">", ",", "*", "->", "[",
                "]", "sym", "abs", "curry", "cx1", "pi1", "pi", "assume", ";", "⊤", "λ", "#",
                "\n", "é", "0",
            ]),
            0..40,
        ),
        junk in ".{0,20}",
    ) {
        let text = format!("{}{junk}", tokens.join(" "));
        let _ = parse_type(&text);
        let _ = isocalc::syntax::parse_witness_seq(&text);
        let _ = isocalc::syntax::parse_context(&text);
        if let Ok(p) = isocalc::syntax::parse_program(&text) {
            let _ = isocalc::syntax::elaborate_program(&p);
        }
        if let Ok(s) = parse_term(&text) {
            let _ = elaborate(&s, &[]);
        }
    }

    #[test]
    fn gen_type_respects_depth(seed in any::<u64>(), depth in 0usize..7) {
        let cfg = GenConfig { seed, ..config() };
        let ty = gen_type(&mut cfg.rng_for(0), depth);
        prop_assert!(ty.height() <= depth);
    }
}
