//! Small structures that separate the grades.
//!
//! Elements are named `1..=n`. Undirected graphs are stored as symmetric
//! binary relations.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::signature::{Signature, Symbol};
use crate::structure::{numeric_names, Structure};

pub const NAMES: [&str; 7] = ["A", "B", "C", "D", "F", "G", "I"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStructure(pub String);

impl fmt::Display for UnknownStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown gallery structure `{}` (expected one of {})", self.0, NAMES.join(", "))
    }
}

/// Looks a gallery structure up by its one-letter name.
pub fn gallery(name: &str) -> Result<Structure, UnknownStructure> {
    match name {
        "A" => Ok(a()),
        "B" => Ok(b()),
        "C" => Ok(c()),
        "D" => Ok(d()),
        "F" => Ok(f()),
        "G" => Ok(g()),
        "I" => Ok(i()),
        _ => Err(UnknownStructure(name.into())),
    }
}

/// All gallery structures with their names.
pub fn all() -> Vec<(&'static str, Structure)> {
    NAMES.iter().map(|&n| (n, gallery(n).unwrap())).collect()
}

fn graph(n: usize, preds: &[(&str, &[(usize, usize)], bool)]) -> Structure {
    let sig = Signature::new(preds.iter().map(|(p, _, _)| Symbol::new(*p, 2)).collect(), vec![]).unwrap();
    let rels = preds
        .iter()
        .map(|(_, edges, undirected)| {
            let mut ts = Vec::new();
            for &(x, y) in edges.iter() {
                ts.push(vec![x - 1, y - 1]);
                if *undirected {
                    ts.push(vec![y - 1, x - 1]);
                }
            }
            ts
        })
        .collect();
    Structure::from_parts(sig, numeric_names(n), rels, vec![]).unwrap()
}

/// Two isolated vertices.
pub fn a() -> Structure {
    graph(2, &[("R", &[], true)])
}

/// A single undirected edge.
pub fn b() -> Structure {
    graph(2, &[("R", &[(1, 2)], true)])
}

/// The path 1-2-3.
pub fn c() -> Structure {
    graph(3, &[("R", &[(1, 2), (2, 3)], true)])
}

/// The directed 4-cycle 1→2→3→4→1.
pub fn d() -> Structure {
    graph(4, &[("R", &[(1, 2), (2, 3), (3, 4), (4, 1)], false)])
}

/// Two elements, no predicates, `f(1) = f(2) = 2`.
pub fn f() -> Structure {
    let sig = Signature::new(vec![], vec![Symbol::new("f", 1)]).unwrap();
    Structure::from_parts(sig, numeric_names(2), vec![], vec![vec![1, 1]]).unwrap()
}

/// A 6-cycle whose edges alternate between `S` and `Dt`.
pub fn g() -> Structure {
    graph(6, &[("S", &[(1, 2), (3, 4), (5, 6)], true), ("Dt", &[(2, 3), (4, 5), (6, 1)], true)])
}

/// Nine vertices: edges 1-2, 4-5 and the path 7-8-9; 3 and 6 isolated.
pub fn i() -> Structure {
    graph(9, &[("R", &[(1, 2), (4, 5), (7, 8), (8, 9)], true)])
}

/// A finite stand-in for the two-component example used to show that the
/// single-clone extension lemma is specific to total symmetry.
///
/// Elements `a, b, b2, c, d` with undirected edges `a-c`, `b-d`, `b2-d`.
/// Cloning `a` once makes `a` and `b` pairwise but not totally symmetric,
/// although `a` and `b` are discernible without identity.
pub fn finite_k_analogue() -> Structure {
    let sig = Signature::relational(&[("R", 2)]).unwrap();
    let names = ["a", "b", "b2", "c", "d"].iter().map(|s| String::from(*s)).collect();
    let mut ts = Vec::new();
    for (x, y) in [(0, 3), (1, 4), (2, 4)] {
        ts.push(vec![x, y]);
        ts.push(vec![y, x]);
    }
    Structure::from_parts(sig, names, vec![ts], vec![]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_of_i() {
        let s = i();
        let deg: Vec<usize> = (0..9).map(|v| (0..9).filter(|&w| s.holds(0, &[v, w])).count()).collect();
        assert_eq!(deg, vec![1, 1, 0, 1, 1, 0, 1, 2, 1]);
    }

    #[test]
    fn undirected_graphs_are_symmetric() {
        for name in ["A", "B", "C", "G", "I"] {
            let s = gallery(name).unwrap();
            for p in 0..s.signature().predicates().len() {
                assert!(s.is_symmetric(p), "{name}");
            }
        }
        assert!(!d().is_symmetric(0));
        assert_eq!(d().relation_len(0), 4);
    }

    #[test]
    fn every_gallery_structure_is_valid() {
        for (_, s) in all() {
            assert!(s.diagnostics().is_empty());
        }
        assert!(gallery("Z").is_err());
    }
}
