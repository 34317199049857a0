//! Inflation by clones, and finite checks of elementary extension without
//! identity.
//!
//! On a finite structure ≈⁻ is definable without identity, so a formula
//! without identity can speak about classes as if they were elements. An
//! extension `M ⊆ N` is therefore elementary for formulas without identity
//! exactly when the embedding induces an isomorphism of the ≈⁻-quotients:
//! preservation of the quotient gives one direction, and the defining
//! formula turns any quotient difference into a sentence that tells the two
//! structures apart.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::grade::GradeId;
use crate::indisc::{full_indisc, quotient, IndiscError};
use crate::structure::{all_tuples, tuple_count, Structure};
use crate::symmetry::{self, sym_grade};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("extensions: element index {0} is outside the domain")]
    NoSuchElement(usize),
    #[error("extensions: at least one copy is required")]
    ZeroCopies,
    #[error("extensions: `{0}` and `{1}` are completely indiscernible")]
    Indiscernible(String, String),
    #[error("extensions: embedding is not a homomorphic injection ({0})")]
    NotEmbedding(String),
    #[error(transparent)]
    Indisc(#[from] IndiscError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationResult {
    /// Base elements keep their indices; clones follow them.
    pub extended: Structure,
    pub clones: Vec<usize>,
    /// `σ`: extended element to base element.
    pub retraction: Vec<usize>,
}

fn fresh_name(s: &Structure, base: &str, taken: &[String], k: &mut usize) -> String {
    loop {
        *k += 1;
        let name = format!("{base}${k}");
        if s.element(&name).is_none() && !taken.contains(&name) {
            return name;
        }
    }
}

/// Adds `k` clones of `a`: a tuple is in a relation, and a function takes a
/// value, exactly as its image under the retraction does in `s`.
pub fn inflate(s: &Structure, a: usize, k: usize) -> Result<InflationResult, ExtError> {
    if a >= s.size() {
        return Err(ExtError::NoSuchElement(a));
    }
    if k == 0 {
        return Err(ExtError::ZeroCopies);
    }
    let n = s.size();
    let mut names: Vec<String> = s.elements().to_vec();
    let mut counter = 0;
    for _ in 0..k {
        let name = fresh_name(s, s.name(a), &names, &mut counter);
        names.push(name);
    }
    let m = names.len();
    let sigma: Vec<usize> = (0..m).map(|e| if e < n { e } else { a }).collect();
    let sig = s.signature().clone();
    let relations = sig
        .predicates()
        .iter()
        .enumerate()
        .map(|(p, sym)| {
            all_tuples(m, sym.arity)
                .filter(|t| {
                    let image: Vec<usize> = t.iter().map(|&e| sigma[e]).collect();
                    s.holds(p, &image)
                })
                .collect()
        })
        .collect();
    let functions = sig
        .functions()
        .iter()
        .enumerate()
        .map(|(f, sym)| {
            let mut table = Vec::with_capacity(tuple_count(m, sym.arity));
            for t in all_tuples(m, sym.arity) {
                let image: Vec<usize> = t.iter().map(|&e| sigma[e]).collect();
                table.push(s.apply(f, &image));
            }
            table
        })
        .collect();
    let extended = Structure::from_parts(sig, names, relations, functions)
        .expect("inflation of a valid structure is valid");
    Ok(InflationResult { extended, clones: (n..m).collect(), retraction: sigma })
}

fn check_embedding(m: &Structure, n: &Structure, emb: &[usize]) -> Result<(), ExtError> {
    if m.signature() != n.signature() {
        return Err(ExtError::NotEmbedding("signatures differ".into()));
    }
    if emb.len() != m.size() {
        return Err(ExtError::NotEmbedding(format!("map has {} entries for {} elements", emb.len(), m.size())));
    }
    let mut hit = alloc::vec![false; n.size()];
    for (e, &t) in emb.iter().enumerate() {
        if t >= n.size() {
            return Err(ExtError::NotEmbedding(format!("image of `{}` is outside the target", m.name(e))));
        }
        if core::mem::replace(&mut hit[t], true) {
            return Err(ExtError::NotEmbedding(format!("`{}` shares its image", n.name(t))));
        }
    }
    let sig = m.signature();
    for (p, sym) in sig.predicates().iter().enumerate() {
        for t in all_tuples(m.size(), sym.arity) {
            let image: Vec<usize> = t.iter().map(|&e| emb[e]).collect();
            if m.holds(p, &t) != n.holds(p, &image) {
                return Err(ExtError::NotEmbedding(format!("`{}` is not preserved", sym.name)));
            }
        }
    }
    for (f, sym) in sig.functions().iter().enumerate() {
        for t in all_tuples(m.size(), sym.arity) {
            let image: Vec<usize> = t.iter().map(|&e| emb[e]).collect();
            if emb[m.apply(f, &t)] != n.apply(f, &image) {
                return Err(ExtError::NotEmbedding(format!("`{}` is not preserved", sym.name)));
            }
        }
    }
    Ok(())
}

/// Whether `n` is an elementary extension of `m` for formulas without
/// identity, along `embedding`. Decided by checking that the embedding
/// induces an isomorphism of the ≈⁻-quotients.
pub fn is_elementary_ext_noid(m: &Structure, n: &Structure, embedding: &[usize]) -> Result<bool, ExtError> {
    check_embedding(m, n, embedding)?;
    let qm = quotient(m)?;
    let qn = quotient(n)?;
    let (km, kn) = (qm.quotient.size(), qn.quotient.size());
    if km != kn {
        return Ok(false);
    }
    let mut map = alloc::vec![usize::MAX; km];
    for (&c, &t) in qm.class_of.iter().zip(embedding) {
        let d = qn.class_of[t];
        if map[c] == usize::MAX {
            map[c] = d;
        } else if map[c] != d {
            return Ok(false);
        }
    }
    let mut hit = alloc::vec![false; kn];
    for &d in &map {
        if core::mem::replace(&mut hit[d], true) {
            return Ok(false);
        }
    }
    Ok(symmetry::is_isomorphism(&qm.quotient, &qn.quotient, &map))
}

/// For `a ≉⁻ b`: inflates `a` by `|[b]| + 1` clones and reports whether
/// bare symmetry between `a` and `b` then fails, as it must.
pub fn check_ext_main(s: &Structure, a: usize, b: usize) -> Result<bool, ExtError> {
    for e in [a, b] {
        if e >= s.size() {
            return Err(ExtError::NoSuchElement(e));
        }
    }
    let part = full_indisc(s)?;
    if part.same(a, b) {
        return Err(ExtError::Indiscernible(s.name(a).into(), s.name(b).into()));
    }
    let inf = inflate(s, a, part.class_size(part.class_of(b)) + 1)?;
    Ok(sym_grade(&inf.extended, GradeId::SymBare, a, b).is_none())
}

/// Inflates `a` by one clone and reports whether total symmetry of `a` and
/// `b` there implies `a ≈⁻ b` in `s`.
pub fn check_ext_total(s: &Structure, a: usize, b: usize) -> Result<bool, ExtError> {
    for e in [a, b] {
        if e >= s.size() {
            return Err(ExtError::NoSuchElement(e));
        }
    }
    let inf = inflate(s, a, 1)?;
    if sym_grade(&inf.extended, GradeId::SymTotal, a, b).is_none() {
        return Ok(true);
    }
    Ok(full_indisc(s)?.same(a, b))
}
