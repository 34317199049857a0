//! Relativeness correspondences, near-correspondences and the Galois maps
//! between near-correspondences and isomorphisms of ≈⁻-quotients.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use thiserror::Error;

use crate::grade::GradeId;
use crate::indisc::{quotient, IndiscError, QuotientResult};
use crate::structure::{all_tuples, Structure};
use crate::symmetry::{self, Permutation, SearchConstraint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("relativity: the relation is not a near-correspondence")]
    NotNear,
    #[error("relativity: the map is not an isomorphism of the quotients")]
    NotQuotientIso,
    #[error("relativity: the structures have different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Indisc(#[from] IndiscError),
}

/// A binary relation between the domains of two structures.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Correspondence {
    pairs: BTreeSet<(usize, usize)>,
}

impl Correspondence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Correspondence { pairs: pairs.into_iter().collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs((0..n).map(|e| (e, e)))
    }

    pub fn total(m: usize, n: usize) -> Self {
        Self::from_pairs((0..m).flat_map(|a| (0..n).map(move |b| (a, b))))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        self.pairs.insert((a, b))
    }

    pub fn remove(&mut self, a: usize, b: usize) -> bool {
        self.pairs.remove(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset(&self, other: &Correspondence) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Every element of `0..m` is related to something.
    pub fn is_total(&self, m: usize) -> bool {
        let mut hit = vec![false; m];
        for &(a, _) in &self.pairs {
            if a < m {
                hit[a] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Every element of `0..n` has something related to it.
    pub fn is_surjective(&self, n: usize) -> bool {
        let mut hit = vec![false; n];
        for &(_, b) in &self.pairs {
            if b < n {
                hit[b] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    fn within(&self, m: usize, n: usize) -> bool {
        self.pairs.iter().all(|&(a, b)| a < m && b < n)
    }
}

impl FromIterator<(usize, usize)> for Correspondence {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

/// Whether `pi` is a relativeness correspondence from `m` to `n`: total,
/// surjective, preserving every predicate across linked tuples, and closed
/// under applying each function coordinatewise.
pub fn is_relativeness_correspondence(m: &Structure, n: &Structure, pi: &Correspondence) -> bool {
    if m.signature() != n.signature() || !pi.within(m.size(), n.size()) {
        return false;
    }
    if !pi.is_total(m.size()) || !pi.is_surjective(n.size()) {
        return false;
    }
    let pairs: Vec<(usize, usize)> = pi.iter().collect();
    let (sm, sn) = (m.size(), n.size());
    for (p, sym) in m.signature().predicates().iter().enumerate() {
        for seq in all_tuples(pairs.len(), sym.arity) {
            let l = seq.iter().fold(0, |acc, &k| acc * sm + pairs[k].0);
            let r = seq.iter().fold(0, |acc, &k| acc * sn + pairs[k].1);
            if m.holds_at(p, l) != n.holds_at(p, r) {
                return false;
            }
        }
    }
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for seq in all_tuples(pairs.len(), sym.arity) {
            let l = seq.iter().fold(0, |acc, &k| acc * sm + pairs[k].0);
            let r = seq.iter().fold(0, |acc, &k| acc * sn + pairs[k].1);
            if !pi.contains(m.apply_at(f, l), n.apply_at(f, r)) {
                return false;
            }
        }
    }
    true
}

/// A structure together with its ≈⁻-quotient, computed once.
#[derive(Debug, Clone)]
pub struct QuotientView<'a> {
    pub base: &'a Structure,
    pub q: QuotientResult,
}

impl<'a> QuotientView<'a> {
    pub fn new(base: &'a Structure) -> Result<Self, IndiscError> {
        Ok(QuotientView { base, q: quotient(base)? })
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.q.class_of[e]
    }

    pub fn quotient(&self) -> &Structure {
        &self.q.quotient
    }
}

/// A bijection between the quotient domains of two structures.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientIso(pub Vec<usize>);

impl QuotientIso {
    pub fn identity(n: usize) -> Self {
        QuotientIso((0..n).collect())
    }
}

/// Whether `pi` is an isomorphism between the quotients.
pub fn is_quotient_iso(vm: &QuotientView<'_>, vn: &QuotientView<'_>, pi: &QuotientIso) -> bool {
    symmetry::is_isomorphism(vm.quotient(), vn.quotient(), &pi.0)
}

/// The class map induced by `pi`, if it is a well-defined injective map
/// defined on every class.
fn class_map(vm: &QuotientView<'_>, vn: &QuotientView<'_>, pi: &Correspondence) -> Option<Vec<usize>> {
    let (km, kn) = (vm.quotient().size(), vn.quotient().size());
    let mut map = vec![usize::MAX; km];
    for (a, b) in pi.iter() {
        let (ca, cb) = (vm.class_of(a), vn.class_of(b));
        if map[ca] == usize::MAX {
            map[ca] = cb;
        } else if map[ca] != cb {
            return None;
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    let mut hit = vec![false; kn];
    for &c in &map {
        if core::mem::replace(&mut hit[c], true) {
            return None;
        }
    }
    Some(map)
}

/// Whether `pi` is a near-correspondence: total, surjective, and inducing a
/// well-defined isomorphism between the ≈⁻-quotients.
pub fn is_near_correspondence(vm: &QuotientView<'_>, vn: &QuotientView<'_>, pi: &Correspondence) -> bool {
    let (m, n) = (vm.base, vn.base);
    if m.signature() != n.signature() || !pi.within(m.size(), n.size()) {
        return false;
    }
    if !pi.is_total(m.size()) || !pi.is_surjective(n.size()) {
        return false;
    }
    match class_map(vm, vn, pi) {
        Some(map) => symmetry::is_isomorphism(vm.quotient(), vn.quotient(), &map),
        None => false,
    }
}

/// `π^e`: relates `a` to `b` iff `π([a]) = [b]`.
pub fn galois_e(vm: &QuotientView<'_>, vn: &QuotientView<'_>, pi: &QuotientIso) -> Result<Correspondence, RelError> {
    if !is_quotient_iso(vm, vn, pi) {
        return Err(RelError::NotQuotientIso);
    }
    let mut out = Correspondence::new();
    for a in 0..vm.base.size() {
        for b in 0..vn.base.size() {
            if pi.0[vm.class_of(a)] == vn.class_of(b) {
                out.insert(a, b);
            }
        }
    }
    Ok(out)
}

/// `Π^c`: the quotient isomorphism induced by a near-correspondence.
pub fn galois_c(vm: &QuotientView<'_>, vn: &QuotientView<'_>, pi: &Correspondence) -> Result<QuotientIso, RelError> {
    if !is_near_correspondence(vm, vn, pi) {
        return Err(RelError::NotNear);
    }
    Ok(QuotientIso(class_map(vm, vn, pi).expect("checked above")))
}

/// `(Π^c)^e`, the largest relativeness correspondence extending `pi`.
pub fn maximal_extension(
    vm: &QuotientView<'_>,
    vn: &QuotientView<'_>,
    pi: &Correspondence,
) -> Result<Correspondence, RelError> {
    let c = galois_c(vm, vn, pi)?;
    galois_e(vm, vn, &c)
}

/// Up to `limit` automorphisms of the quotient, in lexicographic order.
pub fn quotient_automorphisms(v: &QuotientView<'_>, limit: usize) -> Vec<QuotientIso> {
    symmetry::automorphisms(v.quotient(), limit).into_iter().map(|p| QuotientIso(p.0)).collect()
}

/// Up to `limit` isomorphisms between the quotients of two structures.
pub fn quotient_isomorphisms(vm: &QuotientView<'_>, vn: &QuotientView<'_>, limit: usize) -> Vec<QuotientIso> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    symmetry::for_each_isomorphism(vm.quotient(), vn.quotient(), &SearchConstraint::none(), |map| {
        out.push(QuotientIso(map.to_vec()));
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Decides a relativity grade through the corresponding symmetry grade of
/// the quotient; the witness is the lift of the quotient automorphism.
///
/// # Panics
/// If `g` is not a relativity grade.
pub fn rel_grade_in(v: &QuotientView<'_>, g: GradeId, a: usize, b: usize) -> Option<Correspondence> {
    let sg = match g {
        GradeId::RelTotal => GradeId::SymTotal,
        GradeId::RelPair => GradeId::SymPair,
        GradeId::RelBare => GradeId::SymBare,
        other => panic!("{other} is not a relativity grade"),
    };
    let p: Permutation = symmetry::sym_grade(v.quotient(), sg, v.class_of(a), v.class_of(b))?;
    Some(galois_e(v, v, &QuotientIso(p.0)).expect("automorphisms are quotient isomorphisms"))
}

/// [`rel_grade_in`] on a fresh quotient of `s`.
pub fn rel_grade(s: &Structure, g: GradeId, a: usize, b: usize) -> Result<Option<Correspondence>, IndiscError> {
    let v = QuotientView::new(s)?;
    Ok(rel_grade_in(&v, g, a, b))
}
