use alloc::vec::Vec;

/// An equivalence relation on `0..n`, stored as a class map.
///
/// Class ids are numbered in order of first occurrence, so the representative
/// of a class (its first member) always precedes the representatives of
/// later classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class: Vec<usize>,
    reps: Vec<usize>,
}

impl Partition {
    /// Every element alone in its class.
    pub fn discrete(n: usize) -> Self {
        Partition { class: (0..n).collect(), reps: (0..n).collect() }
    }

    /// A single class.
    pub fn total(n: usize) -> Self {
        Partition { class: alloc::vec![0; n], reps: if n == 0 { Vec::new() } else { alloc::vec![0] } }
    }

    /// Builds the partition from any class labelling.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut class = Vec::with_capacity(labels.len());
        let mut reps: Vec<usize> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match reps.iter().position(|&r| labels[r] == *l) {
                Some(c) => class.push(c),
                None => {
                    class.push(reps.len());
                    reps.push(i);
                }
            }
        }
        Partition { class, reps }
    }

    /// Builds the partition of an equivalence relation given as a predicate.
    ///
    /// Each element joins the class of the first earlier representative it is
    /// related to; the predicate is only queried against representatives.
    pub fn from_relation(n: usize, mut related: impl FnMut(usize, usize) -> bool) -> Self {
        let mut class = Vec::with_capacity(n);
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            match reps.iter().position(|&r| related(r, i)) {
                Some(c) => class.push(c),
                None => {
                    class.push(reps.len());
                    reps.push(i);
                }
            }
        }
        Partition { class, reps }
    }

    /// The finest partition in which every listed pair shares a class.
    pub fn from_unions(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.partition()
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class[e]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    /// The first member of class `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.class[e] == c).collect()
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.class.iter().filter(|&&k| k == c).count()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.num_classes()];
        for (e, &c) in self.class.iter().enumerate() {
            out[c].push(e);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes() == self.len()
    }
}

/// Union-find with path halving; `partition` renumbers by first occurrence.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        Partition::from_labels(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reps_come_first() {
        let p = Partition::from_labels(&['b', 'a', 'b', 'c', 'a']);
        assert_eq!(p.representatives(), &[0, 1, 3]);
        assert_eq!(p.classes(), vec![vec![0, 2], vec![1, 4], vec![3]]);
    }

    proptest! {
        #[test]
        fn unions_agree_with_labels(pairs in prop::collection::vec((0usize..8, 0usize..8), 0..10)) {
            let p = Partition::from_unions(8, pairs.iter().copied());
            for &(a, b) in &pairs {
                prop_assert!(p.same(a, b));
            }
            let q = Partition::from_relation(8, |a, b| p.same(a, b));
            prop_assert_eq!(p, q);
        }
    }
}
