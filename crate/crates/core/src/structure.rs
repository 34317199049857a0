//! Finite structures over a [`Signature`].
//!
//! Elements are identified by their position in the domain (declaration
//! order); names are kept only for input and output. Relations are stored as
//! dense bitsets over `domain^arity` and functions as dense tables, both
//! indexed in mixed radix with the first coordinate most significant.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::signature::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.location, self.message)
    }
}

/// A list of problems found in a structure description. Empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn new() -> Self {
        Diagnostics(Vec::new())
    }

    pub fn error(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.0.push(Diagnostic {
            severity: Severity::Error,
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn has_errors(&self) -> bool {
        self.0.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl core::error::Error for Diagnostics {}

/// Number of tuples of length `arity` over a domain of `n` elements.
pub fn tuple_count(n: usize, arity: usize) -> usize {
    n.pow(arity as u32)
}

/// Mixed-radix index of `tuple` over a domain of `n` elements.
pub fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * n + x)
}

/// Inverse of [`tuple_index`].
pub fn decode_tuple(n: usize, arity: usize, mut index: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(arity, 0);
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

/// All tuples of length `arity` over `0..n` in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = tuple_count(n, arity);
    (0..total).map(move |i| {
        let mut t = Vec::with_capacity(arity);
        decode_tuple(n, arity, i, &mut t);
        t
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

/// A finite structure: nonempty domain, predicate extensions and total
/// function tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Signature,
    elements: Vec<String>,
    relations: Vec<Bits>,
    functions: Vec<Vec<usize>>,
}

impl Structure {
    /// Builds a structure from index-based data, checking every invariant.
    ///
    /// `relations[p]` lists the tuples of predicate `p`; `functions[f]` is the
    /// dense table of function `f` in [`tuple_index`] order.
    pub fn from_parts(
        signature: Signature,
        elements: Vec<String>,
        relations: Vec<Vec<Vec<usize>>>,
        functions: Vec<Vec<usize>>,
    ) -> Result<Self, Diagnostics> {
        let mut diags = Diagnostics::new();
        let n = elements.len();
        if n == 0 {
            diags.error("domain", "domain is empty");
        }
        let mut seen = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if !crate::signature::is_identifier(e) {
                diags.error("domain", format!("element name `{e}` is not an identifier"));
            }
            if let Some(j) = seen.insert(e.as_str(), i) {
                diags.error("domain", format!("element `{e}` declared twice (positions {j} and {i})"));
            }
        }
        if relations.len() != signature.predicates().len() {
            diags.error(
                "relations",
                format!(
                    "expected {} predicate extensions, got {}",
                    signature.predicates().len(),
                    relations.len()
                ),
            );
        }
        if functions.len() != signature.functions().len() {
            diags.error(
                "functions",
                format!(
                    "expected {} function tables, got {}",
                    signature.functions().len(),
                    functions.len()
                ),
            );
        }
        if !diags.is_empty() {
            return Err(diags);
        }

        let mut rels = Vec::with_capacity(relations.len());
        for (sym, tuples) in signature.predicates().iter().zip(relations) {
            let mut bits = Bits::new(tuple_count(n, sym.arity));
            for (k, t) in tuples.iter().enumerate() {
                if t.len() != sym.arity {
                    diags.error(
                        format!("{} tuple #{}", sym.name, k + 1),
                        format!("wrong arity: expected {}, got {}", sym.arity, t.len()),
                    );
                } else if let Some(&bad) = t.iter().find(|&&x| x >= n) {
                    diags.error(
                        format!("{} tuple #{}", sym.name, k + 1),
                        format!("coordinate {bad} is outside the domain"),
                    );
                } else {
                    bits.set(tuple_index(n, t));
                }
            }
            rels.push(bits);
        }
        for (sym, table) in signature.functions().iter().zip(functions.iter()) {
            let expected = tuple_count(n, sym.arity);
            if table.len() != expected {
                diags.error(
                    sym.name.clone(),
                    format!("partial function: table has {} of {expected} entries", table.len()),
                );
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= n) {
                diags.error(sym.name.clone(), format!("value {bad} is outside the domain"));
            }
        }
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Structure { signature, elements, relations: rels, functions })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, e: usize) -> &str {
        &self.elements[e]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    #[inline]
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple_index(self.size(), tuple)
    }

    #[inline]
    pub fn holds(&self, pred: usize, tuple: &[usize]) -> bool {
        self.relations[pred].get(self.index_of(tuple))
    }

    #[inline]
    pub fn holds_at(&self, pred: usize, index: usize) -> bool {
        self.relations[pred].get(index)
    }

    #[inline]
    pub fn apply(&self, func: usize, args: &[usize]) -> usize {
        self.functions[func][self.index_of(args)]
    }

    #[inline]
    pub fn apply_at(&self, func: usize, index: usize) -> usize {
        self.functions[func][index]
    }

    pub fn function_table(&self, func: usize) -> &[usize] {
        &self.functions[func]
    }

    pub fn relation_len(&self, pred: usize) -> usize {
        self.relations[pred].count()
    }

    /// The tuples of predicate `pred` in lexicographic order.
    pub fn tuples(&self, pred: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.size();
        let arity = self.signature.predicates()[pred].arity;
        self.relations[pred].ones().map(move |i| {
            let mut t = Vec::with_capacity(arity);
            decode_tuple(n, arity, i, &mut t);
            t
        })
    }

    /// Tuple lists for every predicate, suitable for [`Structure::from_parts`].
    pub fn relation_lists(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.relations.len()).map(|p| self.tuples(p).collect()).collect()
    }

    pub fn function_tables(&self) -> Vec<Vec<usize>> {
        self.functions.clone()
    }

    /// Whether the binary predicate `pred` is a symmetric relation.
    pub fn is_symmetric(&self, pred: usize) -> bool {
        self.signature.predicates()[pred].arity == 2
            && self.tuples(pred).all(|t| self.holds(pred, &[t[1], t[0]]))
    }

    /// Re-checks every invariant; a constructed structure always passes.
    pub fn diagnostics(&self) -> Diagnostics {
        match Structure::from_parts(
            self.signature.clone(),
            self.elements.clone(),
            self.relation_lists(),
            self.functions.clone(),
        ) {
            Ok(_) => Diagnostics::new(),
            Err(d) => d,
        }
    }

    /// Same structure with the domain renamed; `names` must be valid and distinct.
    pub fn renamed(&self, names: Vec<String>) -> Result<Structure, Diagnostics> {
        Structure::from_parts(self.signature.clone(), names, self.relation_lists(), self.functions.clone())
    }

    pub fn to_raw(&self) -> RawStructure {
        let mut raw = RawStructure::new(self.signature.clone());
        raw.domain = self.elements.clone();
        for (p, sym) in self.signature.predicates().iter().enumerate() {
            let tuples = self
                .tuples(p)
                .map(|t| t.iter().map(|&e| self.elements[e].clone()).collect())
                .collect();
            raw.predicates.insert(sym.name.clone(), tuples);
        }
        for (f, sym) in self.signature.functions().iter().enumerate() {
            let entries = all_tuples(self.size(), sym.arity)
                .map(|args| {
                    let v = self.apply(f, &args);
                    (args.iter().map(|&e| self.elements[e].clone()).collect(), self.elements[v].clone())
                })
                .collect();
            raw.functions.insert(sym.name.clone(), entries);
        }
        raw
    }
}

/// A structure described by element names, possibly invalid.
///
/// This is what parsers produce; [`validate_structure`] reports every problem
/// and [`RawStructure::build`] turns a valid description into a [`Structure`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawStructure {
    pub signature: Signature,
    pub domain: Vec<String>,
    pub predicates: BTreeMap<String, Vec<Vec<String>>>,
    pub functions: BTreeMap<String, Vec<(Vec<String>, String)>>,
}

impl RawStructure {
    pub fn new(signature: Signature) -> Self {
        RawStructure { signature, ..Default::default() }
    }

    pub fn build(&self) -> Result<Structure, Diagnostics> {
        let diags = validate_structure(self);
        if !diags.is_empty() {
            return Err(diags);
        }
        let n = self.domain.len();
        let index: BTreeMap<&str, usize> =
            self.domain.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let lookup = |e: &String| index[e.as_str()];
        let relations = self
            .signature
            .predicates()
            .iter()
            .map(|p| {
                self.predicates
                    .get(&p.name)
                    .map(|ts| ts.iter().map(|t| t.iter().map(lookup).collect()).collect())
                    .unwrap_or_default()
            })
            .collect();
        let functions = self
            .signature
            .functions()
            .iter()
            .map(|f| {
                let mut table = vec![0; tuple_count(n, f.arity)];
                for (args, v) in &self.functions[&f.name] {
                    let args: Vec<usize> = args.iter().map(lookup).collect();
                    table[tuple_index(n, &args)] = lookup(v);
                }
                table
            })
            .collect();
        Structure::from_parts(self.signature.clone(), self.domain.clone(), relations, functions)
    }
}

/// Reports every violated structure invariant. Empty iff the description is valid.
pub fn validate_structure(raw: &RawStructure) -> Diagnostics {
    let mut diags = Diagnostics::new();
    let sig = &raw.signature;
    if raw.domain.is_empty() {
        diags.error("domain", "domain is empty");
    }
    let mut index = BTreeMap::new();
    for e in &raw.domain {
        if !crate::signature::is_identifier(e) {
            diags.error("domain", format!("element name `{e}` is not an identifier"));
        }
        if index.insert(e.as_str(), ()).is_some() {
            diags.error("domain", format!("element `{e}` declared twice"));
        }
    }
    let in_domain = |e: &String| index.contains_key(e.as_str());

    for (name, tuples) in &raw.predicates {
        let Some(p) = sig.predicate(name) else {
            diags.error(name.clone(), format!("unknown predicate `{name}`"));
            continue;
        };
        let arity = sig.predicates()[p].arity;
        for (k, t) in tuples.iter().enumerate() {
            let loc = format!("{name} tuple #{}", k + 1);
            if t.len() != arity {
                diags.error(loc, format!("wrong arity: `{name}` takes {arity}, got {}", t.len()));
            } else if let Some(bad) = t.iter().find(|e| !in_domain(e)) {
                diags.error(loc, format!("element `{bad}` is not in the domain"));
            }
        }
    }
    for (name, entries) in &raw.functions {
        if sig.function(name).is_none() {
            diags.error(name.clone(), format!("unknown function `{name}`"));
            let _ = entries;
        }
    }
    let n = raw.domain.len();
    for f in sig.functions() {
        let entries = raw.functions.get(&f.name).map(Vec::as_slice).unwrap_or(&[]);
        let mut defined: BTreeMap<Vec<&str>, &str> = BTreeMap::new();
        for (k, (args, v)) in entries.iter().enumerate() {
            let loc = format!("{} entry #{}", f.name, k + 1);
            if args.len() != f.arity {
                diags.error(loc, format!("wrong arity: `{}` takes {}, got {}", f.name, f.arity, args.len()));
                continue;
            }
            if let Some(bad) = args.iter().chain(core::iter::once(v)).find(|e| !in_domain(e)) {
                diags.error(loc, format!("element `{bad}` is not in the domain"));
                continue;
            }
            let key: Vec<&str> = args.iter().map(String::as_str).collect();
            match defined.get(&key) {
                Some(old) if *old != v.as_str() => {
                    diags.error(loc, format!("`{}` given two values at ({})", f.name, key.join(",")));
                }
                _ => {
                    defined.insert(key, v.as_str());
                }
            }
        }
        if n > 0 && index.len() == n {
            for args in all_tuples(n, f.arity) {
                let key: Vec<&str> = args.iter().map(|&i| raw.domain[i].as_str()).collect();
                if !defined.contains_key(&key) {
                    diags.error(
                        f.name.clone(),
                        format!("partial function: `{}` has no value at ({})", f.name, key.join(",")),
                    );
                }
            }
        }
    }
    diags
}

/// Names `1..=n`, the convention used by the gallery and the random generator.
pub fn numeric_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}
