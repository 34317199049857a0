use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Formula, FormulaError, Language, Term};
use crate::signature::Signature;

/// Bounds for [`enumerate_formulas`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_quant_depth: usize,
    /// Counts ¬, ∧, ∨, →, ↔; quantifiers are not connectives.
    pub max_connectives: usize,
    /// Maximum nesting of function symbols inside atoms.
    pub term_depth: usize,
    /// Maximum number of formulas generated before giving up.
    pub cap: usize,
}

impl EnumBounds {
    pub fn new(max_quant_depth: usize, max_connectives: usize) -> Self {
        EnumBounds { max_quant_depth, max_connectives, term_depth: 0, cap: 500_000 }
    }
}

struct Gen<'a> {
    sig: &'a Signature,
    lang: Language,
    free: Vec<String>,
    term_depth: usize,
    cap: usize,
    produced: usize,
    memo: BTreeMap<(usize, usize, usize), Vec<Formula>>,
}

fn bound_name(level: usize) -> String {
    format!("v{level}")
}

impl Gen<'_> {
    fn vars(&self, level: usize) -> Vec<String> {
        let mut v = self.free.clone();
        v.extend((1..=level).map(bound_name));
        v
    }

    fn terms(&self, level: usize) -> Vec<Term> {
        let mut all: Vec<Term> = self.vars(level).into_iter().map(Term::Var).collect();
        for c in self.sig.functions().iter().filter(|f| f.arity == 0) {
            all.push(Term::App(c.name.clone(), Vec::new()));
        }
        let mut frontier_start = 0;
        for _ in 0..self.term_depth {
            let existing = all.len();
            let mut next = Vec::new();
            for f in self.sig.functions().iter().filter(|f| f.arity > 0) {
                for idx in crate::structure::all_tuples(existing, f.arity) {
                    // Only tuples reaching the newest layer, to avoid repeats.
                    if idx.iter().all(|&i| i < frontier_start) {
                        continue;
                    }
                    next.push(Term::App(f.name.clone(), idx.iter().map(|&i| all[i].clone()).collect()));
                }
            }
            frontier_start = existing;
            all.extend(next);
        }
        all
    }

    fn atoms(&self, level: usize) -> Vec<Formula> {
        let terms = self.terms(level);
        let mut out = Vec::new();
        for p in self.sig.predicates() {
            for idx in crate::structure::all_tuples(terms.len(), p.arity) {
                out.push(Formula::Atom(p.name.clone(), idx.iter().map(|&i| terms[i].clone()).collect()));
            }
        }
        if self.lang.identity_permitted() {
            for i in 0..terms.len() {
                for j in i..terms.len() {
                    out.push(Formula::Eq(terms[i].clone(), terms[j].clone()));
                }
            }
        }
        out
    }

    fn count(&mut self, k: usize) -> Result<(), FormulaError> {
        self.produced += k;
        if self.produced > self.cap {
            Err(FormulaError::Overflow(self.cap))
        } else {
            Ok(())
        }
    }

    /// Formulas with exactly `c` connectives and quantifier depth at most `q`
    /// over the free variables plus `v1..v{level}`.
    fn gen(&mut self, level: usize, q: usize, c: usize) -> Result<Vec<Formula>, FormulaError> {
        if let Some(v) = self.memo.get(&(level, q, c)) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        if c == 0 {
            out.extend(self.atoms(level));
        } else {
            for f in self.gen(level, q, c - 1)? {
                if !matches!(f, Formula::Not(_)) {
                    out.push(Formula::not(f));
                }
            }
            for c1 in 0..c {
                let c2 = c - 1 - c1;
                let left = self.gen(level, q, c1)?;
                let right = self.gen(level, q, c2)?;
                self.count(left.len() * right.len() * 2)?;
                for (i, a) in left.iter().enumerate() {
                    for (j, b) in right.iter().enumerate() {
                        out.push(Formula::implies(a.clone(), b.clone()));
                        if c1 < c2 || (c1 == c2 && i < j) {
                            out.push(Formula::and(a.clone(), b.clone()));
                            out.push(Formula::or(a.clone(), b.clone()));
                            out.push(Formula::iff(a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        if q > 0 {
            let v = bound_name(level + 1);
            for body in self.gen(level + 1, q - 1, c)? {
                if body.free_vars().contains(&v) {
                    out.push(Formula::forall(&v, body.clone()));
                    out.push(Formula::exists(&v, body));
                }
            }
        }
        self.count(out.len())?;
        self.memo.insert((level, q, c), out.clone());
        Ok(out)
    }
}

/// Every formula within `bounds` whose free variables are exactly `free`,
/// up to the generator's normal form: bound variables are named `v1, v2, ...`
/// by nesting level, vacuous quantifiers and double negations are omitted,
/// and only one operand order of ∧, ∨ and ↔ is produced.
///
/// The order is deterministic: by connective count, then generation order.
pub fn enumerate_formulas(
    sig: &Signature,
    free: &[&str],
    bounds: &EnumBounds,
    lang: Language,
) -> Result<Vec<Formula>, FormulaError> {
    if free.iter().any(|v| v.strip_prefix('v').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))) {
        return Err(FormulaError::Unsupported("free variables named v1, v2, ... clash with bound names".to_string()));
    }
    let mut g = Gen {
        sig,
        lang,
        free: free.iter().map(|s| s.to_string()).collect(),
        term_depth: bounds.term_depth,
        cap: bounds.cap,
        produced: 0,
        memo: BTreeMap::new(),
    };
    let want: BTreeSet<String> = g.free.iter().cloned().collect();
    let mut out = Vec::new();
    for c in 0..=bounds.max_connectives {
        for f in g.gen(0, bounds.max_quant_depth, c)? {
            if f.free_vars() == want {
                out.push(f);
            }
        }
    }
    Ok(out)
}
