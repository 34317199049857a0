//! Seeded random structures, formulas and search constraints.

use gradekit_core::structure::all_tuples;
use gradekit_core::symmetry::SearchConstraint;
use gradekit_core::{Formula, Language, Signature, Structure, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsl::RandomSpec;

pub const MAX_RANDOM_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomError {
    #[error("random: size {0} is outside 1..={MAX_RANDOM_SIZE}")]
    Size(usize),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A structure on elements `1..=size`: each tuple is in a predicate
/// independently with that predicate's density, and each function value is
/// uniform.
pub fn random_structure(seed: u64, size: usize, spec: &RandomSpec) -> Result<Structure, RandomError> {
    random_structure_with(&mut rng(seed), size, spec)
}

pub fn random_structure_with<R: Rng>(rng: &mut R, size: usize, spec: &RandomSpec) -> Result<Structure, RandomError> {
    if !(1..=MAX_RANDOM_SIZE).contains(&size) {
        return Err(RandomError::Size(size));
    }
    let sig = spec.signature.clone();
    let relations = sig
        .predicates()
        .iter()
        .map(|p| {
            let d = spec.density_of(&p.name);
            all_tuples(size, p.arity).filter(|_| rng.gen_bool(d)).collect()
        })
        .collect();
    let functions = sig
        .functions()
        .iter()
        .map(|f| all_tuples(size, f.arity).map(|_| rng.gen_range(0..size)).collect())
        .collect();
    let names = (1..=size).map(|i| i.to_string()).collect();
    Ok(Structure::from_parts(sig, names, relations, functions).expect("generated structure is valid"))
}

fn random_term<R: Rng>(rng: &mut R, sig: &Signature, vars: &[String], depth: usize) -> Term {
    let funcs = sig.functions();
    if depth > 0 && !funcs.is_empty() && rng.gen_bool(0.3) {
        let f = &funcs[rng.gen_range(0..funcs.len())];
        let args = (0..f.arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect();
        return Term::App(f.name.clone(), args);
    }
    match vars.choose(rng) {
        Some(v) => Term::Var(v.clone()),
        None => {
            let c = funcs.iter().find(|f| f.arity == 0).expect("a closed term needs a constant");
            Term::App(c.name.clone(), Vec::new())
        }
    }
}

fn random_atom<R: Rng>(rng: &mut R, sig: &Signature, vars: &[String], lang: Language) -> Formula {
    let preds = sig.predicates();
    let eq = lang.identity_permitted() && (preds.is_empty() || rng.gen_bool(0.25));
    if eq {
        return Formula::Eq(random_term(rng, sig, vars, 1), random_term(rng, sig, vars, 1));
    }
    if preds.is_empty() {
        return Formula::True;
    }
    let p = &preds[rng.gen_range(0..preds.len())];
    Formula::Atom(p.name.clone(), (0..p.arity).map(|_| random_term(rng, sig, vars, 1)).collect())
}

fn random_formula_in<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    vars: &mut Vec<String>,
    depth: usize,
    size: usize,
    lang: Language,
) -> Formula {
    if size == 0 || rng.gen_bool(0.2) {
        return random_atom(rng, sig, vars, lang);
    }
    let choice = rng.gen_range(0..if depth > 0 { 7 } else { 5 });
    match choice {
        0 => Formula::not(random_formula_in(rng, sig, vars, depth, size - 1, lang)),
        1..=4 => {
            let a = random_formula_in(rng, sig, vars, depth, size / 2, lang);
            let b = random_formula_in(rng, sig, vars, depth, size / 2, lang);
            match choice {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                3 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
        _ => {
            let v = format!("v{}", vars.len() + 1);
            vars.push(v.clone());
            let body = random_formula_in(rng, sig, vars, depth - 1, size - 1, lang);
            vars.pop();
            if choice == 5 {
                Formula::forall(&v, body)
            } else {
                Formula::exists(&v, body)
            }
        }
    }
}

/// A formula of quantifier depth at most `depth` whose free variables are
/// among `free`. Function terms are nested at most once.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, free: &[&str], depth: usize, lang: Language) -> Formula {
    let mut vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    if vars.is_empty() && sig.functions().iter().all(|f| f.arity != 0) {
        // Sentences still need a variable to talk about.
        let v = "v1".to_string();
        vars.push(v.clone());
        let body = random_formula_in(rng, sig, &mut vars, depth.saturating_sub(1), 6, lang);
        return Formula::exists(&v, body);
    }
    random_formula_in(rng, sig, &mut vars, depth, 6, lang)
}

/// A constraint of one of four shapes: no pins, one pin, a swap, or a swap
/// fixing everything else. Pins may be unsatisfiable.
pub fn random_constraint<R: Rng>(rng: &mut R, n: usize) -> SearchConstraint {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    match rng.gen_range(0..5) {
        0 => SearchConstraint::none(),
        1 => SearchConstraint::map(a, b),
        2 => SearchConstraint::swap(a, b),
        3 => SearchConstraint { required: vec![(a, b), (b, a)], fix_outside: Some((a, b)) },
        _ => {
            let c = rng.gen_range(0..n);
            let d = rng.gen_range(0..n);
            SearchConstraint { required: vec![(a, b), (c, d)], fix_outside: None }
        }
    }
}
