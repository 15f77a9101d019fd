//! Random generation of well-typed terms and executable checks of
//! preservation, progress, termination and closed-normal-is-value.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`). Sample `i` of
//! a suite run uses the generator seeded with `seed` via `seed_from_u64` and
//! switched to stream `i`, so every sample is reproducible on its own and
//! the report does not depend on how samples are spread across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ast::{Context, Side, Term, Type};
use crate::eval::DEFAULT_FUEL;
use crate::iso::{synth_chain, wrap_chain};
use crate::rewrite::{progress, StepResult};
use crate::syntax::print_term;
use crate::typing::{infer, is_value};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenConfig {
    pub seed: u64,
    pub type_depth: usize,
    pub term_fuel: usize,
    /// Probability of wrapping a generated subterm in a synthesized
    /// coercion chain.
    pub iso_rate: f64,
    pub count: usize,
    /// Step budget for each evaluation.
    pub fuel: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            type_depth: 4,
            term_fuel: 6,
            iso_rate: 0.3,
            count: 10_000,
            fuel: DEFAULT_FUEL,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.iso_rate) {
            return Err(format!("iso rate {} is not in [0, 1]", self.iso_rate));
        }
        if self.count == 0 {
            return Err("count must be at least 1".into());
        }
        Ok(())
    }

    /// Generator for sample `index`.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Random type of height at most `depth`; each level picks uniformly among
/// `Top`, arrow and product.
pub fn gen_type<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Type {
    if depth == 0 {
        return Type::Top;
    }
    match rng.gen_range(0..3) {
        0 => Type::Top,
        1 => Type::arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1)),
        _ => Type::product(gen_type(rng, depth - 1), gen_type(rng, depth - 1)),
    }
}

/// The canonical closed inhabitant of `ty`.
pub fn canonical(ty: &Type) -> Term {
    match ty {
        Type::Top => Term::Star,
        Type::Arrow(a, b) => Term::lam((**a).clone(), canonical(b)),
        Type::Product(a, b) => Term::pair(canonical(a), canonical(b)),
    }
}

/// Type-directed generator: the result has type `target` in `g`.
pub struct TermGen<'a, R: Rng + ?Sized> {
    pub rng: &'a mut R,
    pub type_depth: usize,
    pub iso_rate: f64,
}

impl<R: Rng + ?Sized> TermGen<'_, R> {
    pub fn term(&mut self, g: &Context, target: &Type, fuel: usize) -> Term {
        if fuel == 0 {
            return self.leaf(g, target);
        }
        if self.iso_rate > 0.0 && self.rng.gen_bool(self.iso_rate) {
            let source = gen_type(self.rng, self.type_depth.min(2));
            let inner = self.term(g, &source, fuel - 1);
            return wrap_chain(&synth_chain(&source, target), inner);
        }
        match self.rng.gen_range(0..6) {
            0..=2 => self.intro(g, target, fuel),
            3 => {
                let arg_ty = gen_type(self.rng, self.type_depth.min(2));
                let f = self.term(g, &Type::arrow(arg_ty.clone(), target.clone()), fuel - 1);
                let a = self.term(g, &arg_ty, fuel - 1);
                Term::app(f, a)
            }
            4 => {
                let other = gen_type(self.rng, self.type_depth.min(2));
                let side = if self.rng.gen_bool(0.5) {
                    Side::Left
                } else {
                    Side::Right
                };
                let pair_ty = match side {
                    Side::Left => Type::product(target.clone(), other),
                    Side::Right => Type::product(other, target.clone()),
                };
                let s = self.term(g, &pair_ty, fuel - 1);
                Term::proj(target.clone(), side, s)
            }
            _ => self.leaf(g, target),
        }
    }

    fn intro(&mut self, g: &Context, target: &Type, fuel: usize) -> Term {
        match target {
            Type::Top => self.leaf(g, target),
            Type::Arrow(a, b) => Term::lam(
                (**a).clone(),
                self.term(&g.snoc((**a).clone()), b, fuel - 1),
            ),
            Type::Product(a, b) => Term::pair(self.term(g, a, fuel - 1), self.term(g, b, fuel - 1)),
        }
    }

    // A variable of the right type when one exists (half the time), otherwise
    // an introduction-only inhabitant that may still use variables.
    fn leaf(&mut self, g: &Context, target: &Type) -> Term {
        let candidates: Vec<usize> = (0..g.len())
            .filter(|&i| g.lookup(i).is_ok_and(|ty| ty == target))
            .collect();
        if !candidates.is_empty() && self.rng.gen_bool(0.5) {
            return Term::Var(candidates[self.rng.gen_range(0..candidates.len())]);
        }
        match target {
            Type::Top => Term::Star,
            Type::Arrow(a, b) => Term::lam((**a).clone(), self.leaf(&g.snoc((**a).clone()), b)),
            Type::Product(a, b) => Term::pair(self.leaf(g, a), self.leaf(g, b)),
        }
    }
}

pub fn gen_term<R: Rng + ?Sized>(
    rng: &mut R,
    config: &GenConfig,
    g: &Context,
    target: &Type,
    fuel: usize,
) -> Term {
    TermGen {
        rng,
        type_depth: config.type_depth,
        iso_rate: config.iso_rate,
    }
    .term(g, target, fuel)
}

/// Generates sample `index` of a suite run: a target type and a closed term
/// of that type.
pub fn gen_sample(config: &GenConfig, index: u64) -> (Type, Term) {
    let mut rng = config.rng_for(index);
    let target = gen_type(&mut rng, config.type_depth);
    let term = gen_term(
        &mut rng,
        config,
        &Context::empty(),
        &target,
        config.term_fuel,
    );
    (target, term)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FailureKind {
    Generation,
    Preservation,
    Progress,
    Termination,
    Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub kind: FailureKind,
    pub detail: String,
}

/// Evaluates a closed term, checking every meta-level property on the way.
/// Returns the number of steps taken.
pub fn check_term(t: &Term, expected: Option<&Type>, fuel: usize) -> Result<usize, Failure> {
    let g = Context::empty();
    let fail = |kind, detail: String| Failure { kind, detail };
    let ty = infer(&g, t).map_err(|e| fail(FailureKind::Generation, e.to_string()))?;
    if let Some(want) = expected {
        if *want != ty {
            return Err(fail(
                FailureKind::Generation,
                format!("generated at {want} but infers {ty}"),
            ));
        }
    }
    let mut current = t.clone();
    let mut steps = 0;
    loop {
        match progress(&g, &current) {
            Err(e) => {
                return Err(fail(
                    FailureKind::Progress,
                    format!("after {steps} steps: {e}"),
                ))
            }
            Ok(StepResult::Done(_)) => {
                if is_value(&current) {
                    return Ok(steps);
                }
                return Err(fail(
                    FailureKind::Value,
                    format!("closed normal form {} is not a value", print_term(&current)),
                ));
            }
            Ok(StepResult::Step {
                rule, path, result, ..
            }) => {
                if steps == fuel {
                    return Err(fail(
                        FailureKind::Termination,
                        format!(
                            "fuel {fuel} exhausted; partial trace ends at {}",
                            print_term(&current)
                        ),
                    ));
                }
                steps += 1;
                match infer(&g, &result) {
                    Ok(after) if after == ty => {}
                    other => {
                        let got = match other {
                            Ok(after) => after.to_string(),
                            Err(e) => e.to_string(),
                        };
                        let path: Vec<String> = path.iter().map(|p| p.to_string()).collect();
                        return Err(fail(
                            FailureKind::Preservation,
                            format!(
                                "step {steps} ({rule} @ {}) turns {ty} into {got}: {} ~> {}",
                                path.join("."),
                                print_term(&current),
                                print_term(&result)
                            ),
                        ));
                    }
                }
                current = result;
            }
        }
    }
}

// Preorder traversal that replaces the `n`-th subterm.
fn replace_nth(
    g: &mut Context,
    t: &Term,
    n: &mut usize,
    f: &dyn Fn(&Context, &Term) -> Option<Term>,
) -> Option<Term> {
    if *n == 0 {
        return f(g, t);
    }
    *n -= 1;
    match t {
        Term::Star | Term::Var(_) => None,
        Term::Lam(ty, b) => {
            g.push(ty.clone());
            let r = replace_nth(g, b, n, f);
            g.pop();
            r.map(|b| Term::lam(ty.clone(), b))
        }
        Term::App(x, y) => match replace_nth(g, x, n, f) {
            Some(x) => Some(Term::app(x, (**y).clone())),
            None => replace_nth(g, y, n, f).map(|y| Term::app((**x).clone(), y)),
        },
        Term::Pair(x, y) => match replace_nth(g, x, n, f) {
            Some(x) => Some(Term::pair(x, (**y).clone())),
            None => replace_nth(g, y, n, f).map(|y| Term::pair((**x).clone(), y)),
        },
        Term::Proj(ty, side, s) => {
            replace_nth(g, s, n, f).map(|s| Term::proj(ty.clone(), *side, s))
        }
        Term::Iso {
            witness,
            target,
            subject,
        } => replace_nth(g, subject, n, f).map(|s| Term::Iso {
            witness: witness.clone(),
            target: target.clone(),
            subject: Box::new(s),
        }),
    }
}

/// Shrinks a failing term by replacing subterms with canonical inhabitants
/// of their type while the failure of the same kind persists.
pub fn shrink(t: &Term, kind: FailureKind, fuel: usize) -> Term {
    let still_fails = |c: &Term| matches!(check_term(c, None, fuel), Err(f) if f.kind == kind);
    let replace = |g: &Context, sub: &Term| -> Option<Term> {
        let ty = infer(g, sub).ok()?;
        let c = canonical(&ty);
        (c != *sub).then_some(c)
    };
    let mut current = t.clone();
    'outer: loop {
        for i in 0..current.size() {
            let mut n = i;
            let candidate = replace_nth(&mut Context::empty(), &current, &mut n, &replace);
            if let Some(c) = candidate {
                if c.size() < current.size() && still_fails(&c) {
                    current = c;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: FailureKind,
    /// Sample index, or `None` for a fixed corpus term.
    pub sample: Option<u64>,
    pub term: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub generated: usize,
    pub generation_failures: usize,
    pub preservation_failures: usize,
    pub progress_failures: usize,
    pub termination_failures: usize,
    pub value_failures: usize,
    pub total_steps: usize,
    pub max_steps: usize,
    pub counterexamples: Vec<Counterexample>,
}

const MAX_COUNTEREXAMPLES: usize = 8;

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.generation_failures
            + self.preservation_failures
            + self.progress_failures
            + self.termination_failures
            + self.value_failures
    }

    pub fn is_clean(&self) -> bool {
        self.failures() == 0
    }

    fn add(&mut self, outcome: SampleOutcome) {
        self.generated += 1;
        match outcome.result {
            Ok(steps) => {
                self.total_steps += steps;
                self.max_steps = self.max_steps.max(steps);
            }
            Err(cx) => {
                match cx.kind {
                    FailureKind::Generation => self.generation_failures += 1,
                    FailureKind::Preservation => self.preservation_failures += 1,
                    FailureKind::Progress => self.progress_failures += 1,
                    FailureKind::Termination => self.termination_failures += 1,
                    FailureKind::Value => self.value_failures += 1,
                }
                if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    self.counterexamples.push(cx);
                }
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "generated {}: {} steps total, {} max\n\
             generation failures:   {}\n\
             preservation failures: {}\n\
             progress failures:     {}\n\
             termination failures:  {}\n\
             value failures:        {}\n",
            self.generated,
            self.total_steps,
            self.max_steps,
            self.generation_failures,
            self.preservation_failures,
            self.progress_failures,
            self.termination_failures,
            self.value_failures,
        );
        for cx in &self.counterexamples {
            let origin = cx
                .sample
                .map_or_else(|| "corpus".to_string(), |i| format!("sample {i}"));
            out.push_str(&format!(
                "{:?} failure ({origin}): {}\n  term: {}\n",
                cx.kind, cx.detail, cx.term
            ));
        }
        out
    }
}

struct SampleOutcome {
    result: Result<usize, Counterexample>,
}

fn run_one(t: &Term, expected: Option<&Type>, fuel: usize, sample: Option<u64>) -> SampleOutcome {
    let result = check_term(t, expected, fuel).map_err(|f| {
        let (term, detail) = if f.kind == FailureKind::Generation {
            (print_term(t), f.detail)
        } else {
            let small = shrink(t, f.kind, fuel);
            let detail = match check_term(&small, None, fuel) {
                Err(g) => g.detail,
                Ok(_) => f.detail,
            };
            (print_term(&small), detail)
        };
        Counterexample {
            kind: f.kind,
            sample,
            term,
            detail,
        }
    });
    SampleOutcome { result }
}

/// Runs the suite over `config.count` generated terms.
pub fn run_suite(config: &GenConfig) -> SuiteReport {
    run_suite_with(config, &[])
}

/// Runs the suite over fixed `corpus` terms followed by `config.count`
/// generated ones.
pub fn run_suite_with(config: &GenConfig, corpus: &[Term]) -> SuiteReport {
    let fixed: Vec<SampleOutcome> = corpus
        .par_iter()
        .map(|t| run_one(t, None, config.fuel, None))
        .collect();
    let generated: Vec<SampleOutcome> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| {
            let (ty, t) = gen_sample(config, i);
            run_one(&t, Some(&ty), config.fuel, Some(i))
        })
        .collect();
    let mut report = SuiteReport::default();
    for outcome in fixed.into_iter().chain(generated) {
        report.add(outcome);
    }
    report
}
