//! Bounded formula types.
//!
//! Two `k`-tuples have the same depth-`d` type iff they satisfy the same
//! formulas with `k` free variables and quantifier depth at most `d` whose
//! atoms use terms of bounded depth. Types are computed bottom-up:
//! the type of `ā` is its atomic diagram together with the set of types of
//! the one-element extensions `ā c`. This decides agreement on the whole
//! (infinite, up to equivalence finite) bounded fragment without listing
//! formulas, and yields a separating formula whenever two types differ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Formula, FormulaError, Language, Term};
use crate::structure::{decode_tuple, tuple_count, tuple_index, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Nesting bound for function symbols in atoms; `None` picks the domain
    /// size when every function is at most unary, else 1.
    pub term_depth: Option<usize>,
    /// Maximum number of distinct term patterns per tuple length.
    pub max_terms: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { term_depth: None, max_terms: 256 }
    }
}

#[derive(Debug, Clone)]
enum TermPat {
    Slot(usize),
    App(usize, Vec<usize>),
}

#[derive(Debug, Clone)]
enum AtomPat {
    Pred(usize, Vec<usize>),
    Eq(usize, usize),
}

#[derive(Debug, Clone)]
struct Level {
    terms: Vec<TermPat>,
    atoms: Vec<AtomPat>,
    atom_keys: Vec<Vec<u64>>,
    /// Per type: atomic diagram id and sorted child types.
    types: Vec<(u32, Vec<u32>)>,
    of: Vec<u32>,
}

/// Depth-bounded types of `free`-tuples on one structure.
#[derive(Debug, Clone)]
pub struct TypeOracle<'s> {
    s: &'s Structure,
    lang: Language,
    free: usize,
    depth: usize,
    names: Vec<String>,
    levels: Vec<Level>,
}

fn default_free_name(i: usize) -> String {
    match i {
        0 => "x".to_string(),
        1 => "y".to_string(),
        2 => "z".to_string(),
        _ => format!("x{i}"),
    }
}

fn term_patterns(s: &Structure, slots: usize, depth: usize, cap: usize) -> Result<Vec<TermPat>, FormulaError> {
    let sig = s.signature();
    let mut all: Vec<TermPat> = (0..slots).map(TermPat::Slot).collect();
    for (f, sym) in sig.functions().iter().enumerate() {
        if sym.arity == 0 {
            all.push(TermPat::App(f, Vec::new()));
        }
    }
    let mut frontier = 0;
    for _ in 0..depth {
        let existing = all.len();
        for (f, sym) in sig.functions().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            for idx in crate::structure::all_tuples(existing, sym.arity) {
                if idx.iter().all(|&i| i < frontier) {
                    continue;
                }
                all.push(TermPat::App(f, idx));
                if all.len() > cap {
                    return Err(FormulaError::Unsupported(format!(
                        "more than {cap} term patterns at term depth {depth}"
                    )));
                }
            }
        }
        frontier = existing;
        if all.len() == existing {
            break;
        }
    }
    Ok(all)
}

impl<'s> TypeOracle<'s> {
    pub fn new(s: &'s Structure, lang: Language, free: usize, depth: usize) -> Result<Self, FormulaError> {
        Self::with_options(s, lang, free, depth, OracleOptions::default())
    }

    pub fn with_options(
        s: &'s Structure,
        lang: Language,
        free: usize,
        depth: usize,
        opts: OracleOptions,
    ) -> Result<Self, FormulaError> {
        let n = s.size();
        let sig = s.signature();
        let term_depth = match opts.term_depth {
            Some(d) => d,
            None if sig.functions().iter().all(|f| f.arity <= 1) => n,
            None => 1,
        };
        let top = free + depth;
        let mut levels: Vec<Level> = Vec::with_capacity(depth + 1);
        for m in free..=top {
            let terms = term_patterns(s, m, term_depth, opts.max_terms)?;
            let mut atoms = Vec::new();
            for (p, sym) in sig.predicates().iter().enumerate() {
                for idx in crate::structure::all_tuples(terms.len(), sym.arity) {
                    atoms.push(AtomPat::Pred(p, idx));
                }
            }
            if lang.identity_permitted() {
                for i in 0..terms.len() {
                    for j in i + 1..terms.len() {
                        atoms.push(AtomPat::Eq(i, j));
                    }
                }
            }
            levels.push(Level { terms, atoms, atom_keys: Vec::new(), types: Vec::new(), of: Vec::new() });
        }

        let mut tuple = Vec::new();
        let mut vals = Vec::new();
        let mut args = Vec::new();
        for j in (0..=depth).rev() {
            let m = free + j;
            let count = tuple_count(n, m);
            let mut atom_ids: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
            let mut type_ids: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
            let mut of = Vec::with_capacity(count);
            let (lower, upper) = levels.split_at_mut(j + 1);
            let lv = &mut lower[j];
            let child = upper.first();
            for idx in 0..count {
                decode_tuple(n, m, idx, &mut tuple);
                vals.clear();
                for t in &lv.terms {
                    let v = match t {
                        TermPat::Slot(i) => tuple[*i],
                        TermPat::App(f, a) => {
                            args.clear();
                            args.extend(a.iter().map(|&i| vals[i]));
                            s.apply(*f, &args)
                        }
                    };
                    vals.push(v);
                }
                let mut key = alloc::vec![0u64; lv.atoms.len().div_ceil(64)];
                for (b, a) in lv.atoms.iter().enumerate() {
                    let holds = match a {
                        AtomPat::Pred(p, ts) => {
                            let i = ts.iter().fold(0, |acc, &t| acc * n + vals[t]);
                            s.holds_at(*p, i)
                        }
                        AtomPat::Eq(x, y) => vals[*x] == vals[*y],
                    };
                    if holds {
                        key[b / 64] |= 1 << (b % 64);
                    }
                }
                let next = atom_ids.len() as u32;
                let aid = *atom_ids.entry(key.clone()).or_insert_with(|| {
                    lv.atom_keys.push(key);
                    next
                });
                let mut children: Vec<u32> = match child {
                    Some(c) => (0..n).map(|e| c.of[idx * n + e]).collect(),
                    None => Vec::new(),
                };
                children.sort_unstable();
                children.dedup();
                let next = type_ids.len() as u32;
                let tid = *type_ids.entry((aid, children.clone())).or_insert_with(|| {
                    lv.types.push((aid, children));
                    next
                });
                of.push(tid);
            }
            lv.of = of;
        }
        let names = (0..free).map(default_free_name).collect();
        Ok(TypeOracle { s, lang, free, depth, names, levels })
    }

    /// Renames the free variables used in separating formulas.
    pub fn with_free_names(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.free);
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn structure(&self) -> &'s Structure {
        self.s
    }

    pub fn language(&self) -> Language {
        self.lang
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn type_of(&self, tuple: &[usize]) -> u32 {
        assert_eq!(tuple.len(), self.free);
        self.levels[0].of[tuple_index(self.s.size(), tuple)]
    }

    pub fn num_types(&self) -> usize {
        self.levels[0].types.len()
    }

    pub fn agree(&self, t1: &[usize], t2: &[usize]) -> bool {
        self.type_of(t1) == self.type_of(t2)
    }

    /// A formula of quantifier depth at most `depth` true at `t1` and false
    /// at `t2`, or `None` when the tuples have the same type.
    pub fn separator(&self, t1: &[usize], t2: &[usize]) -> Option<Formula> {
        let (a, b) = (self.type_of(t1), self.type_of(t2));
        (a != b).then(|| self.sep(0, a, b))
    }

    fn slot_name(&self, i: usize) -> String {
        if i < self.free {
            self.names[i].clone()
        } else {
            format!("v{}", i - self.free + 1)
        }
    }

    fn term(&self, lv: &Level, t: usize) -> Term {
        match &lv.terms[t] {
            TermPat::Slot(i) => Term::Var(self.slot_name(*i)),
            TermPat::App(f, args) => Term::App(
                self.s.signature().functions()[*f].name.clone(),
                args.iter().map(|&a| self.term(lv, a)).collect(),
            ),
        }
    }

    fn atom(&self, lv: &Level, a: usize) -> Formula {
        match &lv.atoms[a] {
            AtomPat::Pred(p, ts) => Formula::Atom(
                self.s.signature().predicates()[*p].name.clone(),
                ts.iter().map(|&t| self.term(lv, t)).collect(),
            ),
            AtomPat::Eq(x, y) => Formula::Eq(self.term(lv, *x), self.term(lv, *y)),
        }
    }

    fn sep(&self, j: usize, t1: u32, t2: u32) -> Formula {
        let lv = &self.levels[j];
        let (a1, ch1) = &lv.types[t1 as usize];
        let (a2, ch2) = &lv.types[t2 as usize];
        if a1 != a2 {
            let (k1, k2) = (&lv.atom_keys[*a1 as usize], &lv.atom_keys[*a2 as usize]);
            let (w, diff) = k1.iter().zip(k2).enumerate().find(|(_, (x, y))| x != y).map(|(w, (x, y))| (w, x ^ y)).unwrap();
            let bit = w * 64 + diff.trailing_zeros() as usize;
            let atom = self.atom(lv, bit);
            return if k1[w] >> (bit % 64) & 1 == 1 { atom } else { Formula::not(atom) };
        }
        let v = self.slot_name(self.free + j);
        if let Some(&c1) = ch1.iter().find(|c| !ch2.contains(c)) {
            let body = Formula::conj_dedup(ch2.iter().map(|&c2| self.sep(j + 1, c1, c2)));
            Formula::exists(&v, body)
        } else {
            let c2 = *ch2.iter().find(|c| !ch1.contains(c)).expect("distinct types differ somewhere");
            let body = Formula::conj_dedup(ch1.iter().map(|&c1| self.sep(j + 1, c2, c1)));
            Formula::not(Formula::exists(&v, body))
        }
    }
}
