//! Automorphisms and isomorphisms of finite structures.
//!
//! The search assigns images to domain elements in declaration order.
//! Candidates are restricted by a joint color refinement of both structures
//! and every assignment is checked against all predicate and function
//! entries whose coordinates are already assigned.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::grade::GradeId;
use crate::partition::{Partition, UnionFind};
use crate::structure::{all_tuples, Structure};

/// A bijection of a domain, as the image of each element in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(a, b);
        Permutation(p)
    }

    pub fn apply(&self, e: usize) -> usize {
        self.0[e]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&x| x < seen.len() && !core::mem::replace(&mut seen[x], true))
    }

    /// Nontrivial cycles, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle notation using the structure's element names.
    pub fn display<'a>(&'a self, s: &'a Structure) -> impl fmt::Display + 'a {
        CycleDisplay { p: self, s }
    }
}

struct CycleDisplay<'a> {
    p: &'a Permutation,
    s: &'a Structure,
}

impl fmt::Display for CycleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.p.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, &e) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(self.s.name(e))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Point conditions for a search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchConstraint {
    /// Pinned images `(x, π(x))`.
    pub required: Vec<(usize, usize)>,
    /// `Some((a, b))` forces `π(x) = x` for every `x` outside `{a, b}`.
    pub fix_outside: Option<(usize, usize)>,
}

impl SearchConstraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn map(a: usize, b: usize) -> Self {
        SearchConstraint { required: vec![(a, b)], fix_outside: None }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        SearchConstraint { required: vec![(a, b), (b, a)], fix_outside: None }
    }

    /// Whether `p` satisfies the constraint.
    pub fn admits(&self, p: &Permutation) -> bool {
        self.required.iter().all(|&(x, y)| p.0.get(x) == Some(&y))
            && self.fix_outside.is_none_or(|(a, b)| (0..p.len()).all(|x| x == a || x == b || p.0[x] == x))
    }

    /// Pins as a partial map, or `None` if inconsistent.
    fn pins(&self, n: usize) -> Option<Vec<Option<usize>>> {
        let mut pin = vec![None; n];
        let mut target = vec![false; n];
        let mut extra = Vec::new();
        if let Some((a, b)) = self.fix_outside {
            extra.extend((0..n).filter(|&x| x != a && x != b).map(|x| (x, x)));
        }
        for &(x, y) in self.required.iter().chain(&extra) {
            if x >= n || y >= n {
                return None;
            }
            match pin[x] {
                Some(z) if z != y => return None,
                Some(_) => {}
                None => {
                    if target[y] {
                        return None;
                    }
                    pin[x] = Some(y);
                    target[y] = true;
                }
            }
        }
        Some(pin)
    }
}

/// Whether `map` is an isomorphism from `m` onto `n` (same signature).
pub fn is_isomorphism(m: &Structure, n: &Structure, map: &[usize]) -> bool {
    let size = m.size();
    if n.size() != size || map.len() != size || m.signature() != n.signature() {
        return false;
    }
    if !Permutation(map.to_vec()).is_bijection() {
        return false;
    }
    let mut img = Vec::new();
    for (p, sym) in m.signature().predicates().iter().enumerate() {
        for t in all_tuples(size, sym.arity) {
            img.clear();
            img.extend(t.iter().map(|&e| map[e]));
            if m.holds(p, &t) != n.holds(p, &img) {
                return false;
            }
        }
    }
    for (f, sym) in m.signature().functions().iter().enumerate() {
        for t in all_tuples(size, sym.arity) {
            img.clear();
            img.extend(t.iter().map(|&e| map[e]));
            if map[m.apply(f, &t)] != n.apply(f, &img) {
                return false;
            }
        }
    }
    true
}

pub fn is_automorphism(s: &Structure, p: &Permutation) -> bool {
    is_isomorphism(s, s, &p.0)
}

type ColorSig = (usize, Vec<Vec<usize>>);

fn color_signatures(s: &Structure, colors: &[usize]) -> Vec<ColorSig> {
    let n = s.size();
    let mut items: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for p in 0..s.signature().predicates().len() {
        for t in s.tuples(p) {
            let cols: Vec<usize> = t.iter().map(|&e| colors[e]).collect();
            for (i, &e) in t.iter().enumerate() {
                let mut item = vec![0, p, i];
                // The equality pattern of the tuple is invariant too.
                item.extend(t.iter().map(|&x| usize::from(x == e)));
                item.extend_from_slice(&cols);
                items[e].push(item);
            }
        }
    }
    for (f, sym) in s.signature().functions().iter().enumerate() {
        for t in all_tuples(n, sym.arity) {
            let o = s.apply(f, &t);
            let mut cols: Vec<usize> = t.iter().map(|&e| colors[e]).collect();
            cols.push(colors[o]);
            for (i, &e) in t.iter().enumerate() {
                let mut item = vec![1, f, i];
                item.extend(t.iter().map(|&x| usize::from(x == e)));
                item.push(usize::from(o == e));
                item.extend_from_slice(&cols);
                items[e].push(item);
            }
            let mut item = vec![2, f];
            item.extend(t.iter().map(|&x| usize::from(x == o)));
            item.extend_from_slice(&cols);
            items[o].push(item);
        }
    }
    items
        .into_iter()
        .enumerate()
        .map(|(e, mut it)| {
            it.sort_unstable();
            (colors[e], it)
        })
        .collect()
}

/// Stable colorings of `m` and `n` refined jointly, so that equal colors in
/// the two structures mean the same thing.
fn joint_colors(m: &Structure, n: &Structure) -> (Vec<usize>, Vec<usize>) {
    let mut cm = vec![0; m.size()];
    let mut cn = vec![0; n.size()];
    let mut classes = 1;
    loop {
        let sm = color_signatures(m, &cm);
        let sn = color_signatures(n, &cn);
        let mut dict: BTreeMap<&ColorSig, usize> = BTreeMap::new();
        for s in sm.iter().chain(&sn) {
            dict.insert(s, 0);
        }
        for (i, v) in dict.values_mut().enumerate() {
            *v = i;
        }
        let nm: Vec<usize> = sm.iter().map(|s| dict[s]).collect();
        let nn: Vec<usize> = sn.iter().map(|s| dict[s]).collect();
        let count = dict.len();
        cm = nm;
        cn = nn;
        if count == classes {
            return (cm, cn);
        }
        classes = count;
    }
}

struct Search<'a> {
    m: &'a Structure,
    n: &'a Structure,
    cm: Vec<usize>,
    cn: Vec<usize>,
    pin: Vec<Option<usize>>,
    pinned_target: Vec<bool>,
    map: Vec<usize>,
    used: Vec<bool>,
    /// `pre[f][o]`: argument tuples of `f` in `m` with value `o`.
    pre: Vec<Vec<Vec<Vec<usize>>>>,
    scratch: Vec<usize>,
}

impl Search<'_> {
    fn consistent(&mut self, i: usize, j: usize) -> bool {
        let size = self.m.size();
        let sig = self.m.signature();
        self.map[i] = j;
        for (p, sym) in sig.predicates().iter().enumerate() {
            for t in all_tuples(i + 1, sym.arity) {
                if !t.contains(&i) {
                    continue;
                }
                self.scratch.clear();
                self.scratch.extend(t.iter().map(|&e| self.map[e]));
                if self.m.holds(p, &t) != self.n.holds(p, &self.scratch) {
                    return false;
                }
            }
        }
        for (f, sym) in sig.functions().iter().enumerate() {
            for t in all_tuples(i + 1, sym.arity) {
                if !t.contains(&i) {
                    continue;
                }
                self.scratch.clear();
                self.scratch.extend(t.iter().map(|&e| self.map[e]));
                let o = self.m.apply(f, &t);
                let target = self.n.apply(f, &self.scratch);
                if o <= i {
                    if self.map[o] != target {
                        return false;
                    }
                } else if self.used[target] || self.cm[o] != self.cn[target] || self.pin[o].is_some_and(|q| q != target) {
                    return false;
                }
            }
            for t in &self.pre[f][i] {
                if t.iter().any(|&e| e > i) {
                    continue;
                }
                let idx = t.iter().fold(0, |acc, &e| acc * size + self.map[e]);
                if self.n.apply_at(f, idx) != j {
                    return false;
                }
            }
        }
        true
    }

    fn run<B>(&mut self, i: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>) -> ControlFlow<B> {
        let size = self.m.size();
        if i == size {
            return visit(&self.map);
        }
        let candidates: Vec<usize> = match self.pin[i] {
            Some(j) => vec![j],
            None => (0..size).filter(|&j| !self.pinned_target[j]).collect(),
        };
        for j in candidates {
            if self.used[j] || self.cm[i] != self.cn[j] {
                continue;
            }
            if !self.consistent(i, j) {
                continue;
            }
            self.used[j] = true;
            let r = self.run(i + 1, visit);
            self.used[j] = false;
            r?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every isomorphism from `m` onto `n` satisfying `c`, in
/// lexicographic order of image vectors, until `visit` breaks.
pub fn for_each_isomorphism<B>(
    m: &Structure,
    n: &Structure,
    c: &SearchConstraint,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    let size = m.size();
    if n.size() != size || m.signature() != n.signature() {
        return None;
    }
    let pin = c.pins(size)?;
    let (cm, cn) = joint_colors(m, n);
    let mut hist: BTreeMap<usize, isize> = BTreeMap::new();
    for &x in &cm {
        *hist.entry(x).or_default() += 1;
    }
    for &x in &cn {
        *hist.entry(x).or_default() -= 1;
    }
    if hist.values().any(|&v| v != 0) {
        return None;
    }
    let mut pinned_target = vec![false; size];
    for &q in pin.iter().flatten() {
        pinned_target[q] = true;
    }
    let pre = m
        .signature()
        .functions()
        .iter()
        .enumerate()
        .map(|(f, sym)| {
            let mut v = vec![Vec::new(); size];
            for t in all_tuples(size, sym.arity) {
                v[m.apply(f, &t)].push(t);
            }
            v
        })
        .collect();
    let mut s = Search {
        m,
        n,
        cm,
        cn,
        pin,
        pinned_target,
        map: vec![0; size],
        used: vec![false; size],
        pre,
        scratch: Vec::new(),
    };
    match s.run(0, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

/// The lexicographically first isomorphism from `m` onto `n` satisfying `c`.
pub fn find_isomorphism(m: &Structure, n: &Structure, c: &SearchConstraint) -> Option<Vec<usize>> {
    for_each_isomorphism(m, n, c, |map| ControlFlow::Break(map.to_vec()))
}

/// The lexicographically first automorphism satisfying `c`.
pub fn find_automorphism(s: &Structure, c: &SearchConstraint) -> Option<Permutation> {
    find_isomorphism(s, s, c).map(Permutation)
}

/// Up to `limit` automorphisms in lexicographic order.
pub fn automorphisms(s: &Structure, limit: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_isomorphism(s, s, &SearchConstraint::none(), |map| {
        out.push(Permutation(map.to_vec()));
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Decides a symmetry grade, returning a witness when it holds.
///
/// Total symmetry is decided by testing the transposition of `a` and `b`
/// directly.
///
/// # Panics
/// If `g` is not a symmetry grade.
pub fn sym_grade(s: &Structure, g: GradeId, a: usize, b: usize) -> Option<Permutation> {
    match g {
        GradeId::SymTotal => {
            let t = Permutation::transposition(s.size(), a, b);
            is_automorphism(s, &t).then_some(t)
        }
        GradeId::SymPair => find_automorphism(s, &SearchConstraint::swap(a, b)),
        GradeId::SymBare => find_automorphism(s, &SearchConstraint::map(a, b)),
        other => panic!("{other} is not a symmetry grade"),
    }
}

/// The orbits of the automorphism group.
pub fn orbits(s: &Structure) -> Partition {
    let n = s.size();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if uf.same(i, j) {
                continue;
            }
            if let Some(p) = find_automorphism(s, &SearchConstraint::map(i, j)) {
                for (x, &y) in p.0.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
    }
    uf.partition()
}
