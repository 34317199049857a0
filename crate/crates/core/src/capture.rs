//! Formula sets that capture grades, and checking capture on a structure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::{Compiled, Formula, FormulaError, Language, Term};
use crate::grade::GradeId;
use crate::indisc::{defining_formula, IndiscError};
use crate::lattice::{grade_matrix, LatticeError};
use crate::signature::Signature;
use crate::structure::{all_tuples, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaptureError {
    #[error(transparent)]
    Indisc(#[from] IndiscError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("capture: {0}")]
    Formula(#[from] FormulaError),
}

/// A finite set of formulas in the free variables `x`, `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSet {
    pub formulas: Vec<Formula>,
    pub language: Language,
    /// Which construction produced the set and with which bounds.
    pub note: String,
    /// Whether the set is known to be complete for its construction (no
    /// bound was hit).
    pub complete: bool,
}

/// Outcome of [`verify_capture`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaptureOutcome {
    Captured,
    /// The grade and the joint truth of the set disagree on `(a, b)`.
    Counterexample { a: usize, b: usize, grade_holds: bool, set_holds: bool, failing: Option<Formula> },
}

impl CaptureOutcome {
    pub fn is_captured(&self) -> bool {
        matches!(self, CaptureOutcome::Captured)
    }
}

fn var(n: &str) -> Term {
    Term::Var(n.into())
}

fn param(i: usize) -> String {
    format!("v{i}")
}

/// Argument placements over `x`, `y` and parameters, with parameters
/// introduced in order (`v2` only after `v1`), keeping those mentioning `x`
/// or `y`. Returns `(terms, number of parameters used)`.
fn placements(slots: usize, params: usize) -> Vec<(Vec<Term>, usize)> {
    let mut out = Vec::new();
    let width = 2 + params;
    for idx in all_tuples(width, slots) {
        let mut next = 0;
        let mut ok = true;
        for &k in &idx {
            if k >= 2 {
                if k - 2 > next {
                    ok = false;
                    break;
                }
                if k - 2 == next {
                    next += 1;
                }
            }
        }
        if !ok || !idx.iter().any(|&k| k < 2) {
            continue;
        }
        let terms = idx
            .iter()
            .map(|&k| match k {
                0 => var("x"),
                1 => var("y"),
                _ => Term::Var(param(k - 1)),
            })
            .collect();
        out.push((terms, next));
    }
    out
}

/// `∀v₁..vₖ (⋀ guard(vᵢ) → body)`; just `body` when `k = 0`.
fn guarded(k: usize, guard: impl Fn(&str) -> Formula, body: Formula) -> Formula {
    if k == 0 {
        return body;
    }
    let g = Formula::conj((1..=k).map(|i| guard(&param(i))));
    let mut f = Formula::implies(g, body);
    for i in (1..=k).rev() {
        f = Formula::forall(&param(i), f);
    }
    f
}

fn swap_xy(f: &Formula) -> Formula {
    f.substitute_all(&[("x", var("y")), ("y", var("x"))])
}

/// The formulas `∀v̄ (⋀ᵢ (vᵢ ≠ x ∧ vᵢ ≠ y) → (φ(x,y,v̄) ↔ φ(y,x,v̄)))` for
/// every atomic `φ` with at most `param_bound` parameters.
///
/// Atoms are predicate atoms and, for function symbols, graph atoms
/// `f(ū) = w` over the variables. The set is complete once `param_bound`
/// reaches the largest number of parameter slots an atom needs.
pub fn capture_set_sym_total(sig: &Signature, param_bound: usize) -> FormulaSet {
    let mut atoms: Vec<(Formula, usize)> = Vec::new();
    for p in sig.predicates() {
        for (ts, k) in placements(p.arity, param_bound) {
            atoms.push((Formula::Atom(p.name.clone(), ts), k));
        }
    }
    for f in sig.functions() {
        for (mut ts, k) in placements(f.arity + 1, param_bound) {
            let w = ts.pop().unwrap();
            atoms.push((Formula::Eq(Term::App(f.name.clone(), ts), w), k));
        }
    }
    let formulas = atoms
        .into_iter()
        .map(|(phi, k)| {
            let body = Formula::iff(phi.clone(), swap_xy(&phi));
            guarded(
                k,
                |v| {
                    Formula::and(
                        Formula::not(Formula::Eq(var(v), var("x"))),
                        Formula::not(Formula::Eq(var(v), var("y"))),
                    )
                },
                body,
            )
        })
        .collect();
    let needed = sig
        .predicates()
        .iter()
        .map(|p| p.arity.saturating_sub(1))
        .chain(sig.functions().iter().map(|f| f.arity))
        .max()
        .unwrap_or(0);
    FormulaSet {
        formulas,
        language: Language::WithIdentity,
        note: format!("total symmetry, atomic placements with up to {param_bound} parameter(s)"),
        complete: param_bound >= needed,
    }
}

/// A set of formulas without identity capturing total relativity on `s`.
///
/// With `ε(x,y)` the defining formula of ≈⁻ on `s`, each member has the
/// shape `∀v̄ (⋀ᵢ (¬ε(vᵢ,x) ∧ ¬ε(vᵢ,y)) → (θ(x,y,v̄) ↔ θ(y,x,v̄)))` where `θ`
/// ranges over predicate atoms and over `ε(f(ū), w)` for function symbols
/// `f`. These express that swapping the classes of `x` and `y` preserves the
/// quotient.
pub fn capture_set_rel_total(s: &Structure, depth_cap: usize) -> Result<FormulaSet, IndiscError> {
    let sig = s.signature();
    let eps = defining_formula(s, depth_cap)?;
    let eps_at = |a: Term, b: Term| eps.substitute_all(&[("x", a), ("y", b)]);
    let params = sig
        .predicates()
        .iter()
        .map(|p| p.arity.saturating_sub(1))
        .chain(sig.functions().iter().map(|f| f.arity))
        .max()
        .unwrap_or(0);
    let mut thetas: Vec<(Formula, usize)> = Vec::new();
    for p in sig.predicates() {
        for (ts, k) in placements(p.arity, params) {
            thetas.push((Formula::Atom(p.name.clone(), ts), k));
        }
    }
    for f in sig.functions() {
        for (mut ts, k) in placements(f.arity + 1, params) {
            let w = ts.pop().unwrap();
            thetas.push((eps_at(Term::App(f.name.clone(), ts), w), k));
        }
    }
    let formulas = thetas
        .into_iter()
        .map(|(theta, k)| {
            let body = Formula::iff(theta.clone(), swap_xy(&theta));
            guarded(
                k,
                |v| Formula::and(Formula::not(eps_at(var(v), var("x"))), Formula::not(eps_at(var(v), var("y")))),
                body,
            )
        })
        .collect();
    Ok(FormulaSet {
        formulas,
        language: Language::WithoutIdentity,
        note: format!("total relativity, guards and function atoms through the defining formula (depth cap {depth_cap})"),
        complete: true,
    })
}

/// The single-formula set `{ε}` capturing ≈⁻.
pub fn capture_set_indisc_full(s: &Structure, depth_cap: usize) -> Result<FormulaSet, IndiscError> {
    Ok(FormulaSet {
        formulas: alloc::vec![defining_formula(s, depth_cap)?],
        language: Language::WithoutIdentity,
        note: format!("defining formula of complete indiscernibility (depth cap {depth_cap})"),
        complete: true,
    })
}

/// Checks that `g(a,b)` holds exactly when every member of `set` holds at
/// `(a,b)`, for every ordered pair.
pub fn verify_capture(s: &Structure, g: GradeId, set: &FormulaSet) -> Result<CaptureOutcome, CaptureError> {
    let m = grade_matrix(s, usize::MAX)?;
    let compiled: Vec<Compiled> =
        set.formulas.iter().map(|f| Compiled::new(s.signature(), f, &["x", "y"])).collect::<Result<_, _>>()?;
    let mut env = Vec::new();
    for a in 0..s.size() {
        for b in 0..s.size() {
            let failing = compiled.iter().position(|c| !c.eval_with(s, &[a, b], &mut env));
            let set_holds = failing.is_none();
            let grade_holds = m.get(g, a, b);
            if set_holds != grade_holds {
                return Ok(CaptureOutcome::Counterexample {
                    a,
                    b,
                    grade_holds,
                    set_holds,
                    failing: failing.map(|i| set.formulas[i].clone()),
                });
            }
        }
    }
    Ok(CaptureOutcome::Captured)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn four_atoms_without_parameters() {
        let sig = Signature::relational(&[("R", 2)]).unwrap();
        let set = capture_set_sym_total(&sig, 0);
        let shown: Vec<String> = set.formulas.iter().map(|f| format!("{f}")).collect();
        assert_eq!(
            shown,
            vec!["R(x,x) <-> R(y,y)", "R(x,y) <-> R(y,x)", "R(y,x) <-> R(x,y)", "R(y,y) <-> R(x,x)"]
        );
        assert!(!set.complete);
        assert!(capture_set_sym_total(&sig, 1).complete);
    }

    #[test]
    fn sym_total_captured_on_relational_gallery() {
        for (name, s) in gallery::all() {
            let set = capture_set_sym_total(s.signature(), 3);
            assert!(verify_capture(&s, GradeId::SymTotal, &set).unwrap().is_captured(), "{name}");
        }
    }

    #[test]
    fn rel_total_captured_on_gallery() {
        for (name, s) in gallery::all() {
            let set = capture_set_rel_total(&s, 3).unwrap();
            assert!(set.formulas.iter().all(|f| !f.uses_identity()));
            assert!(verify_capture(&s, GradeId::RelTotal, &set).unwrap().is_captured(), "{name}");
        }
    }

    #[test]
    fn identity_captures_itself() {
        let s = gallery::c();
        let set = FormulaSet {
            formulas: alloc::vec![Formula::Eq(var("x"), var("y"))],
            language: Language::WithIdentity,
            note: String::new(),
            complete: true,
        };
        assert!(verify_capture(&s, GradeId::Id, &set).unwrap().is_captured());
        let eps = capture_set_indisc_full(&gallery::a(), 3).unwrap();
        assert!(verify_capture(&gallery::a(), GradeId::IndiscNeqFull, &eps).unwrap().is_captured());
    }

    #[test]
    fn counterexample_reported() {
        let s = gallery::c();
        let set = FormulaSet { formulas: alloc::vec![], language: Language::WithIdentity, note: String::new(), complete: true };
        match verify_capture(&s, GradeId::Id, &set).unwrap() {
            CaptureOutcome::Counterexample { grade_holds, set_holds, failing, .. } => {
                assert!(!grade_holds && set_holds && failing.is_none());
            }
            CaptureOutcome::Captured => panic!("empty set cannot capture identity"),
        }
    }
}
