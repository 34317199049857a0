//! First-order formulas with or without identity.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::signature::Signature;

mod enumerate;
mod eval;
mod parse;
pub mod types;

pub use enumerate::{enumerate_formulas, EnumBounds};
pub use eval::{evaluate, Compiled};
pub use parse::{parse_formula, parse_formula_unchecked};

/// ℒ⁼ (identity permitted) or ℒ⁻ (no identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Language {
    WithIdentity,
    WithoutIdentity,
}

impl Language {
    pub fn identity_permitted(self) -> bool {
        self == Language::WithIdentity
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::WithIdentity => "L=",
            Language::WithoutIdentity => "L-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    /// Function application; constants have no arguments.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|t| t.substitute(var, by)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) if args.is_empty() => f.write_str(name),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// The empty conjunction.
    True,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("identity is not available in a language without identity")]
    IdentityInNeq,
    #[error("variable `{0}` is free but has no value")]
    Unbound(String),
    #[error("`{0}` is a constant and cannot be quantified")]
    BindsConstant(String),
    #[error("formula count exceeds the cap of {0}")]
    Overflow(usize),
    #[error("{0}")]
    Unsupported(String),
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(p.into(), args)
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::True;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    /// Conjunction with duplicate conjuncts removed, keeping first occurrences.
    pub fn conj_dedup(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut seen = BTreeSet::new();
        let kept: Vec<Formula> = parts.into_iter().filter(|p| seen.insert(p.clone())).collect();
        Formula::conj(kept)
    }

    pub fn uses_identity(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(..) => false,
            Formula::Eq(..) => true,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.uses_identity(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.uses_identity() || b.uses_identity()
            }
        }
    }

    pub fn in_language(&self, lang: Language) -> bool {
        lang.identity_permitted() || !self.uses_identity()
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
        }
    }

    /// Number of propositional connectives.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(a) => 1 + a.connectives(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.connectives(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.connectives() + b.connectives()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(..) | Formula::Eq(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let terms = |ts: &[&Term], bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            ts.iter().for_each(|t| t.collect_vars(&mut vs));
            for v in vs {
                if !bound.iter().any(|b| b == v) {
                    out.insert(v.to_string());
                }
            }
        };
        match self {
            Formula::True => {}
            Formula::Atom(_, args) => terms(&args.iter().collect::<Vec<_>>(), bound, out),
            Formula::Eq(l, r) => terms(&[l, r], bound, out),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        let mut add = |t: &Term| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().map(String::from));
        };
        match self {
            Formula::True => {}
            Formula::Atom(_, args) => args.iter().for_each(&mut add),
            Formula::Eq(l, r) => {
                add(l);
                add(r);
            }
            Formula::Not(a) => a.all_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                out.insert(v.clone());
                a.all_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of `by` for the free occurrences of `var`.
    pub fn substitute(&self, var: &str, by: &Term) -> Formula {
        let mut avoid = BTreeSet::new();
        by.collect_vars(&mut avoid);
        let avoid: BTreeSet<String> = avoid.into_iter().map(String::from).collect();
        self.subst(var, by, &avoid)
    }

    /// Simultaneous substitution; each replacement is applied to the original formula.
    pub fn substitute_all(&self, pairs: &[(&str, Term)]) -> Formula {
        // Route through fresh placeholders so that replacements cannot feed
        // into one another.
        let mut names = BTreeSet::new();
        self.all_names(&mut names);
        for (v, t) in pairs {
            names.insert(String::from(*v));
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            names.extend(vs.into_iter().map(String::from));
        }
        let holders: Vec<String> = (0..pairs.len()).map(|i| fresh(&format!("s{i}"), &names)).collect();
        let mut out = self.clone();
        for ((v, _), h) in pairs.iter().zip(&holders) {
            out = out.substitute(v, &Term::Var(h.clone()));
        }
        for ((_, t), h) in pairs.iter().zip(&holders) {
            out = out.substitute(h, t);
        }
        out
    }

    fn subst(&self, var: &str, by: &Term, avoid: &BTreeSet<String>) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, by)).collect()),
            Formula::Eq(l, r) => Formula::Eq(l.substitute(var, by), r.substitute(var, by)),
            Formula::Not(a) => Formula::not(a.subst(var, by, avoid)),
            Formula::And(a, b) => Formula::and(a.subst(var, by, avoid), b.subst(var, by, avoid)),
            Formula::Or(a, b) => Formula::or(a.subst(var, by, avoid), b.subst(var, by, avoid)),
            Formula::Implies(a, b) => Formula::implies(a.subst(var, by, avoid), b.subst(var, by, avoid)),
            Formula::Iff(a, b) => Formula::iff(a.subst(var, by, avoid), b.subst(var, by, avoid)),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let rebuild = |v: &str, body: Formula| match self {
                    Formula::Forall(..) => Formula::forall(v, body),
                    _ => Formula::exists(v, body),
                };
                if v == var || !a.free_vars().contains(var) {
                    return self.clone();
                }
                if avoid.contains(v) {
                    let mut taken = avoid.clone();
                    a.all_names(&mut taken);
                    taken.insert(var.into());
                    let nv = fresh(v, &taken);
                    let renamed = a.subst(v, &Term::Var(nv.clone()), &BTreeSet::new());
                    rebuild(&nv, renamed.subst(var, by, avoid))
                } else {
                    rebuild(v, a.subst(var, by, avoid))
                }
            }
        }
    }

    /// Checks symbol arities and, for ℒ⁻, the absence of identity.
    pub fn check(&self, sig: &Signature, lang: Language) -> Result<(), FormulaError> {
        fn term(t: &Term, sig: &Signature) -> Result<(), FormulaError> {
            if let Term::App(f, args) = t {
                let i = sig.function(f).ok_or_else(|| FormulaError::UnknownSymbol(f.clone()))?;
                let expected = sig.functions()[i].arity;
                if expected != args.len() {
                    return Err(FormulaError::Arity { name: f.clone(), expected, got: args.len() });
                }
                for a in args {
                    term(a, sig)?;
                }
            }
            Ok(())
        }
        match self {
            Formula::True => Ok(()),
            Formula::Atom(p, args) => {
                let i = sig.predicate(p).ok_or_else(|| FormulaError::UnknownSymbol(p.clone()))?;
                let expected = sig.predicates()[i].arity;
                if expected != args.len() {
                    return Err(FormulaError::Arity { name: p.clone(), expected, got: args.len() });
                }
                args.iter().try_for_each(|a| term(a, sig))
            }
            Formula::Eq(l, r) => {
                if !lang.identity_permitted() {
                    return Err(FormulaError::IdentityInNeq);
                }
                term(l, sig)?;
                term(r, sig)
            }
            Formula::Not(a) => a.check(sig, lang),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                if sig.function(v).is_some() {
                    return Err(FormulaError::BindsConstant(v.clone()));
                }
                a.check(sig, lang)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.check(sig, lang)?;
                b.check(sig, lang)
            }
        }
    }

    /// Renames bound variables to `v1, v2, ...` by nesting level, so that
    /// alpha-equivalent formulas compare equal.
    pub fn canonical(&self) -> Formula {
        fn go(f: &Formula, level: usize) -> Formula {
            match f {
                Formula::Forall(v, a) | Formula::Exists(v, a) => {
                    let nv = format!("#{}", level + 1);
                    let body = go(&a.subst(v, &Term::Var(nv.clone()), &BTreeSet::new()), level + 1);
                    match f {
                        Formula::Forall(..) => Formula::forall(&nv, body),
                        _ => Formula::exists(&nv, body),
                    }
                }
                Formula::Not(a) => Formula::not(go(a, level)),
                Formula::And(a, b) => Formula::and(go(a, level), go(b, level)),
                Formula::Or(a, b) => Formula::or(go(a, level), go(b, level)),
                Formula::Implies(a, b) => Formula::implies(go(a, level), go(b, level)),
                Formula::Iff(a, b) => Formula::iff(go(a, level), go(b, level)),
                _ => f.clone(),
            }
        }
        go(self, 0)
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    (1..).map(|i| format!("{base}_{i}")).find(|c| !taken.contains(c)).unwrap()
}

/// Operand printing: quantifiers are always parenthesized, other operands
/// whenever their precedence is below `min`.
fn operand(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    let p = x.precedence();
    if p == 0 || p < min {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                operand(f, a, 5)
            }
            // And, Or and Iff associate to the left, Implies to the right.
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                let (p, op) = match self {
                    Formula::And(..) => (4, " & "),
                    Formula::Or(..) => (3, " | "),
                    _ => (1, " <-> "),
                };
                operand(f, a, p)?;
                f.write_str(op)?;
                operand(f, b, p + 1)
            }
            Formula::Implies(a, b) => {
                operand(f, a, 3)?;
                f.write_str(" -> ")?;
                operand(f, b, 2)
            }
            Formula::Forall(v, a) => write!(f, "forall {v}. {a}"),
            Formula::Exists(v, a) => write!(f, "exists {v}. {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn substitution_avoids_capture() {
        // exists y. R(x,y)  with x := y
        let f = Formula::exists("y", Formula::atom("R", vec![v("x"), v("y")]));
        let g = f.substitute("x", &v("y"));
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(g.alpha_eq(&Formula::exists("z", Formula::atom("R", vec![v("y"), v("z")]))));
    }

    #[test]
    fn simultaneous_swap() {
        let f = Formula::atom("R", vec![v("x"), v("y")]);
        let g = f.substitute_all(&[("x", v("y")), ("y", v("x"))]);
        assert_eq!(g, Formula::atom("R", vec![v("y"), v("x")]));
    }

    #[test]
    fn printing_parenthesizes_quantified_operands() {
        let f = Formula::and(Formula::exists("z", Formula::atom("P", vec![v("z")])), Formula::atom("P", vec![v("x")]));
        assert_eq!(f.to_string(), "(exists z. P(z)) & P(x)");
        let g = Formula::implies(Formula::implies(Formula::True, Formula::True), Formula::True);
        assert_eq!(g.to_string(), "(true -> true) -> true");
    }

    #[test]
    fn empty_conjunction_is_true() {
        assert_eq!(Formula::conj(Vec::new()), Formula::True);
    }
}
