//! Complete indiscernibility without identity (≈⁻), the quotient it induces,
//! and the indiscernibility grades.
//!
//! `a ≈⁻ b` is decided through the set `C(a,b)` of pairs `(t(a,ē), t(b,ē))`
//! over all terms `t` and parameters `ē`: the least set containing `(a,b)`
//! and the diagonal that is closed under applying each function symbol
//! coordinatewise. `a ≈⁻ b` holds iff every predicate agrees on the left and
//! right projections of every sequence of pairs from `C(a,b)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::types::TypeOracle;
use crate::formula::{Compiled, Formula, FormulaError, Language, Term};
use crate::grade::GradeId;
use crate::partition::Partition;
use crate::structure::{all_tuples, tuple_count, tuple_index, Structure};
use crate::{relativity, symmetry};

/// Largest predicate arity handled by the general closure test.
pub const MAX_CLOSURE_ARITY: usize = 3;

/// Default quantifier-depth cap for discerning formulas.
pub const DEFAULT_DEPTH_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndiscError {
    #[error("indiscernibility: predicate `{0}` has arity {1}; with function symbols at most {MAX_CLOSURE_ARITY} is supported")]
    ArityCap(String, usize),
    #[error("indiscernibility: no discerning formula for ({0}, {1}) within quantifier depth {2}")]
    DepthCap(String, String, usize),
    #[error("indiscernibility: `{0}` is not an indiscernibility grade")]
    NotIndiscGrade(GradeId),
    #[error("indiscernibility: quotient function `{0}` is not well defined")]
    IllDefined(String),
    #[error("indiscernibility: {0}")]
    Formula(#[from] FormulaError),
}

/// The pairs `(t(a,ē), t(b,ē))` as an `n × n` membership matrix.
pub fn closure_pairs(s: &Structure, a: usize, b: usize) -> Vec<bool> {
    let n = s.size();
    let mut c = vec![false; n * n];
    for e in 0..n {
        c[e * n + e] = true;
    }
    c[a * n + b] = true;
    let sig = s.signature();
    if sig.is_relational() {
        return c;
    }
    let mut list: Vec<(usize, usize)> = (0..n * n).filter(|&i| c[i]).map(|i| (i / n, i % n)).collect();
    let mut left = Vec::new();
    let mut right = Vec::new();
    loop {
        let before = list.len();
        for (f, sym) in sig.functions().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let snapshot = list.len();
            for seq in all_tuples(snapshot, sym.arity) {
                left.clear();
                right.clear();
                for &k in &seq {
                    left.push(list[k].0);
                    right.push(list[k].1);
                }
                let (x, y) = (s.apply(f, &left), s.apply(f, &right));
                if !c[x * n + y] {
                    c[x * n + y] = true;
                    list.push((x, y));
                }
            }
        }
        if list.len() == before {
            return c;
        }
    }
}

fn relational_indisc(s: &Structure, a: usize, b: usize) -> bool {
    let n = s.size();
    let mut t = Vec::new();
    for (p, sym) in s.signature().predicates().iter().enumerate() {
        let r = sym.arity;
        for mask in 1u32..(1 << r) {
            for base in all_tuples(n, r) {
                t.clear();
                t.extend_from_slice(&base);
                let ok = (0..r).all(|i| mask >> i & 1 == 0 || base[i] == 0);
                if !ok {
                    continue;
                }
                for (i, slot) in t.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *slot = a;
                    }
                }
                let with_a = s.holds(p, &t);
                for (i, slot) in t.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *slot = b;
                    }
                }
                if with_a != s.holds(p, &t) {
                    return false;
                }
            }
        }
    }
    true
}

fn closure_indisc(s: &Structure, a: usize, b: usize) -> Result<bool, IndiscError> {
    let n = s.size();
    let c = closure_pairs(s, a, b);
    let pairs: Vec<(usize, usize)> = (0..n * n).filter(|&i| c[i]).map(|i| (i / n, i % n)).collect();
    for (p, sym) in s.signature().predicates().iter().enumerate() {
        if sym.arity > MAX_CLOSURE_ARITY {
            return Err(IndiscError::ArityCap(sym.name.clone(), sym.arity));
        }
        for seq in all_tuples(pairs.len(), sym.arity) {
            let l = seq.iter().fold(0, |acc, &k| acc * n + pairs[k].0);
            let r = seq.iter().fold(0, |acc, &k| acc * n + pairs[k].1);
            if s.holds_at(p, l) != s.holds_at(p, r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decides `a ≈⁻ b`.
pub fn indisc_pair(s: &Structure, a: usize, b: usize) -> Result<bool, IndiscError> {
    if a == b {
        return Ok(true);
    }
    if s.signature().is_relational() {
        Ok(relational_indisc(s, a, b))
    } else {
        closure_indisc(s, a, b)
    }
}

/// Decides `a ≈⁻ b` with the general closure test even on relational
/// signatures. Exposed for cross-checking the relational fast path.
pub fn indisc_pair_by_closure(s: &Structure, a: usize, b: usize) -> Result<bool, IndiscError> {
    closure_indisc(s, a, b)
}

/// The partition of the domain into ≈⁻-classes.
pub fn full_indisc(s: &Structure) -> Result<Partition, IndiscError> {
    let mut err = None;
    let p = Partition::from_relation(s.size(), |a, b| match indisc_pair(s, a, b) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(p),
    }
}

/// A structure divided by ≈⁻.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    /// Elements are named after the first member of their class.
    pub quotient: Structure,
    /// Element of the base structure to quotient element.
    pub class_of: Vec<usize>,
    pub partition: Partition,
}

/// Builds the quotient by ≈⁻, checking that every function is well defined
/// on classes.
pub fn quotient(s: &Structure) -> Result<QuotientResult, IndiscError> {
    let part = full_indisc(s)?;
    quotient_by(s, &part)
}

/// Quotient by an arbitrary partition; fails if a function does not respect it.
pub fn quotient_by(s: &Structure, part: &Partition) -> Result<QuotientResult, IndiscError> {
    let n = s.size();
    let k = part.num_classes();
    let sig = s.signature().clone();
    let names = part.representatives().iter().map(|&r| String::from(s.name(r))).collect();
    let relations = (0..sig.predicates().len())
        .map(|p| {
            let mut ts: Vec<Vec<usize>> = s.tuples(p).map(|t| t.iter().map(|&e| part.class_of(e)).collect()).collect();
            ts.sort();
            ts.dedup();
            ts
        })
        .collect();
    let mut functions = Vec::new();
    for (f, sym) in sig.functions().iter().enumerate() {
        let mut table = vec![usize::MAX; tuple_count(k, sym.arity)];
        for args in all_tuples(n, sym.arity) {
            let cls: Vec<usize> = args.iter().map(|&e| part.class_of(e)).collect();
            let slot = &mut table[tuple_index(k, &cls)];
            let v = part.class_of(s.apply(f, &args));
            if *slot == usize::MAX {
                *slot = v;
            } else if *slot != v {
                return Err(IndiscError::IllDefined(sym.name.clone()));
            }
        }
        functions.push(table);
    }
    let quotient = Structure::from_parts(sig, names, relations, functions)
        .map_err(|d| IndiscError::Formula(FormulaError::Unsupported(format!("{d}"))))?;
    Ok(QuotientResult { quotient, class_of: part.class_map().to_vec(), partition: part.clone() })
}

/// Decides one of the six indiscernibility grades (or identity).
///
/// On finite structures the grades with identity coincide with the
/// corresponding symmetry grades and the pairwise and monadic grades without
/// identity with the corresponding relativity grades; those are decided
/// through the symmetry and relativity engines.
pub fn indisc_grade(s: &Structure, g: GradeId, a: usize, b: usize) -> Result<bool, IndiscError> {
    match g {
        GradeId::Id => Ok(a == b),
        GradeId::IndiscNeqFull => indisc_pair(s, a, b),
        GradeId::IndiscEqPair => Ok(symmetry::sym_grade(s, GradeId::SymPair, a, b).is_some()),
        GradeId::IndiscEqMon => Ok(symmetry::sym_grade(s, GradeId::SymBare, a, b).is_some()),
        GradeId::IndiscNeqPair => Ok(relativity::rel_grade(s, GradeId::RelPair, a, b)?.is_some()),
        GradeId::IndiscNeqMon => Ok(relativity::rel_grade(s, GradeId::RelBare, a, b)?.is_some()),
        other => Err(IndiscError::NotIndiscGrade(other)),
    }
}

/// A formula `φ(x,y)` without identity with `φ(a,a)` true and `φ(a,b)` false
/// (or the reverse), found by deepening the quantifier depth from 0 to
/// `depth_cap`.
///
/// Returns `None` when `a ≈⁻ b`. Fails with [`IndiscError::DepthCap`] when
/// `a ≉⁻ b` but no formula is found within the cap.
pub fn discerning_formula(s: &Structure, a: usize, b: usize, depth_cap: usize) -> Result<Option<Formula>, IndiscError> {
    if indisc_pair(s, a, b)? {
        return Ok(None);
    }
    for d in 0..=depth_cap {
        let oracle = TypeOracle::new(s, Language::WithoutIdentity, 2, d)?;
        if let Some(f) = oracle.separator(&[a, a], &[a, b]) {
            let c = Compiled::new(s.signature(), &f, &["x", "y"])?;
            debug_assert!(c.eval(s, &[a, a]) != c.eval(s, &[a, b]));
            return Ok(Some(f));
        }
    }
    Err(IndiscError::DepthCap(s.name(a).into(), s.name(b).into(), depth_cap))
}

fn v(i: usize) -> Term {
    Term::Var(format!("v{i}"))
}

/// A formula `ε(x,y)` without identity whose extension on `s` is ≈⁻.
///
/// On relational signatures this is the conjunction, over every predicate
/// `R` and every nonempty set `S` of argument positions, of
/// `∀v̄ (R(x at S, v̄ elsewhere) ↔ R(y at S, v̄ elsewhere))`; it defines ≈⁻ on
/// every structure of the signature. Otherwise it is the conjunction over
/// ordered pairs of distinct classes `(i, j)` of `φᵢⱼ(x,x) ↔ φᵢⱼ(x,y)`,
/// where `φᵢⱼ` discerns the class representatives.
pub fn defining_formula(s: &Structure, depth_cap: usize) -> Result<Formula, IndiscError> {
    if s.signature().is_relational() {
        return Ok(relational_defining_formula(s.signature()));
    }
    let part = full_indisc(s)?;
    let reps = part.representatives().to_vec();
    let mut parts = Vec::new();
    for &ri in &reps {
        for &rj in &reps {
            if ri == rj {
                continue;
            }
            let phi = discerning_formula(s, ri, rj, depth_cap)?.expect("distinct classes are discernible");
            let diag = phi.substitute("y", &Term::Var("x".into()));
            parts.push(Formula::iff(diag, phi));
        }
    }
    Ok(Formula::conj_dedup(parts))
}

/// The relational defining formula; depends only on the signature.
pub fn relational_defining_formula(sig: &crate::Signature) -> Formula {
    let mut parts = Vec::new();
    for p in sig.predicates() {
        let r = p.arity;
        for mask in 1u32..(1 << r) {
            let mut params = 0;
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for i in 0..r {
                if mask >> i & 1 == 1 {
                    lhs.push(Term::Var("x".into()));
                    rhs.push(Term::Var("y".into()));
                } else {
                    params += 1;
                    lhs.push(v(params));
                    rhs.push(v(params));
                }
            }
            let mut f = Formula::iff(Formula::Atom(p.name.clone(), lhs), Formula::Atom(p.name.clone(), rhs));
            for k in (1..=params).rev() {
                f = Formula::forall(&format!("v{k}"), f);
            }
            parts.push(f);
        }
    }
    Formula::conj(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn gallery_classes() {
        assert_eq!(full_indisc(&gallery::a()).unwrap().num_classes(), 1);
        assert!(full_indisc(&gallery::b()).unwrap().is_discrete());
        assert_eq!(full_indisc(&gallery::c()).unwrap().classes(), vec![vec![0, 2], vec![1]]);
        assert_eq!(full_indisc(&gallery::f()).unwrap().num_classes(), 1);
        assert!(full_indisc(&gallery::d()).unwrap().is_discrete());
        let i = full_indisc(&gallery::i()).unwrap();
        let multi: Vec<Vec<usize>> = i.classes().into_iter().filter(|c| c.len() > 1).collect();
        assert_eq!(multi, vec![vec![2, 5], vec![6, 8]]);
    }

    #[test]
    fn quotient_of_c_is_an_edge() {
        let q = quotient(&gallery::c()).unwrap();
        assert_eq!(q.quotient.size(), 2);
        assert_eq!(q.quotient.elements(), &["1".to_string(), "2".to_string()]);
        assert_eq!(q.quotient.relation_lists()[0], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(q.class_of, vec![0, 1, 0]);
    }

    #[test]
    fn quotient_of_b_is_b() {
        let b = gallery::b();
        assert_eq!(quotient(&b).unwrap().quotient, b);
    }

    #[test]
    fn discerning_formulas() {
        let c = gallery::c();
        let f = discerning_formula(&c, 0, 1, 3).unwrap().unwrap();
        let k = Compiled::new(c.signature(), &f, &["x", "y"]).unwrap();
        assert_ne!(k.eval(&c, &[0, 0]), k.eval(&c, &[0, 1]));
        assert!(f.quantifier_depth() <= 1);
        assert_eq!(discerning_formula(&c, 0, 2, 3).unwrap(), None);
        assert_eq!(discerning_formula(&c, 1, 1, 3).unwrap(), None);
        assert!(discerning_formula(&gallery::b(), 0, 1, 3).unwrap().is_some());
    }

    #[test]
    fn defining_formula_on_gallery() {
        for (name, s) in gallery::all() {
            let eps = defining_formula(&s, 3).unwrap();
            assert!(!eps.uses_identity());
            let part = full_indisc(&s).unwrap();
            let c = Compiled::new(s.signature(), &eps, &["x", "y"]).unwrap();
            for a in 0..s.size() {
                for b in 0..s.size() {
                    assert_eq!(c.eval(&s, &[a, b]), part.same(a, b), "{name} {a} {b}");
                }
            }
        }
        assert_eq!(defining_formula(&gallery::f(), 3).unwrap(), Formula::True);
    }

    #[test]
    fn relational_fast_path_matches_closure() {
        for (_, s) in gallery::all() {
            if !s.signature().is_relational() {
                continue;
            }
            for a in 0..s.size() {
                for b in 0..s.size() {
                    assert_eq!(indisc_pair(&s, a, b).unwrap(), indisc_pair_by_closure(&s, a, b).unwrap());
                }
            }
        }
    }
}
