//! Grade matrices, entailment diagrams and conformance checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::grade::GradeId;
use crate::indisc::{full_indisc, IndiscError};
use crate::partition::Partition;
use crate::relativity::QuotientView;
use crate::structure::Structure;
use crate::symmetry::{self, orbits, Permutation};

/// Default largest domain for [`grade_matrix`].
pub const DEFAULT_SIZE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice: structure has {0} elements, above the cap of {1}")]
    SizeCap(usize, usize),
    #[error("lattice: a relational regime was requested for a signature with function symbols")]
    RegimeMismatch,
    #[error("lattice: unknown regime `{0}`")]
    UnknownRegime(String),
    #[error(transparent)]
    Indisc(#[from] IndiscError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    GeneralArbitrary,
    GeneralRelational,
    FiniteArbitrary,
    FiniteRelational,
}

impl Regime {
    pub const ALL: [Regime; 4] =
        [Regime::GeneralArbitrary, Regime::GeneralRelational, Regime::FiniteArbitrary, Regime::FiniteRelational];

    pub fn name(self) -> &'static str {
        match self {
            Regime::GeneralArbitrary => "general-arbitrary",
            Regime::GeneralRelational => "general-relational",
            Regime::FiniteArbitrary => "finite-arbitrary",
            Regime::FiniteRelational => "finite-relational",
        }
    }

    pub fn is_relational(self) -> bool {
        matches!(self, Regime::GeneralRelational | Regime::FiniteRelational)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Regime::FiniteArbitrary | Regime::FiniteRelational)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Regime::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| LatticeError::UnknownRegime(s.into()))
    }
}

/// A Hasse diagram of entailments between grades. Nodes are classes of
/// grades that coincide in the regime; an edge `(i, j)` means every grade in
/// node `i` entails every grade in node `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentDiagram {
    pub regime: Regime,
    pub nodes: Vec<Vec<GradeId>>,
    pub edges: Vec<(usize, usize)>,
}

use GradeId::*;

fn build(regime: Regime, nodes: &[&[GradeId]], edges: &[(GradeId, GradeId)]) -> EntailmentDiagram {
    let nodes: Vec<Vec<GradeId>> = nodes.iter().map(|n| n.to_vec()).collect();
    let node = |g: GradeId| nodes.iter().position(|n| n.contains(&g)).unwrap();
    let edges = edges.iter().map(|&(a, b)| (node(a), node(b))).collect();
    EntailmentDiagram { regime, nodes, edges }
}

const SHARED_LOWER: [(GradeId, GradeId); 11] = [
    (SymPair, IndiscEqPair),
    (SymPair, SymBare),
    (SymPair, RelPair),
    (RelTotal, RelPair),
    (SymBare, IndiscEqMon),
    (SymBare, RelBare),
    (RelPair, IndiscNeqPair),
    (RelPair, RelBare),
    (IndiscEqPair, IndiscEqMon),
    (IndiscEqPair, IndiscNeqPair),
    (RelBare, IndiscNeqMon),
];

/// The entailment diagram of `regime`.
pub fn lattice(regime: Regime) -> EntailmentDiagram {
    let singletons: Vec<[GradeId; 1]> = GradeId::ALL.iter().map(|&g| [g]).collect();
    let single: Vec<&[GradeId]> = singletons.iter().map(|g| g.as_slice()).collect();
    match regime {
        Regime::GeneralArbitrary | Regime::GeneralRelational => {
            let mut edges: Vec<(GradeId, GradeId)> = if regime == Regime::GeneralArbitrary {
                vec![(Id, SymTotal), (Id, IndiscNeqFull), (IndiscNeqFull, RelTotal)]
            } else {
                vec![(Id, IndiscNeqFull), (IndiscNeqFull, SymTotal)]
            };
            edges.extend([(SymTotal, SymPair), (SymTotal, RelTotal)]);
            edges.extend(SHARED_LOWER);
            edges.extend([(IndiscEqMon, IndiscNeqMon), (IndiscNeqPair, IndiscNeqMon)]);
            build(regime, &single, &edges)
        }
        Regime::FiniteArbitrary | Regime::FiniteRelational => {
            let nodes: [&[GradeId]; 8] = [
                &[Id],
                &[SymTotal],
                &[IndiscNeqFull],
                &[IndiscEqPair, SymPair],
                &[RelTotal],
                &[IndiscEqMon, SymBare],
                &[IndiscNeqPair, RelPair],
                &[IndiscNeqMon, RelBare],
            ];
            let mut edges = if regime == Regime::FiniteArbitrary {
                vec![(Id, SymTotal), (Id, IndiscNeqFull), (IndiscNeqFull, RelTotal)]
            } else {
                vec![(Id, IndiscNeqFull), (IndiscNeqFull, SymTotal)]
            };
            edges.extend([
                (SymTotal, SymPair),
                (SymTotal, RelTotal),
                (SymPair, SymBare),
                (SymPair, RelPair),
                (RelTotal, RelPair),
                (SymBare, RelBare),
                (RelPair, RelBare),
            ]);
            build(regime, &nodes, &edges)
        }
    }
}

impl EntailmentDiagram {
    pub fn node_of(&self, g: GradeId) -> usize {
        self.nodes.iter().position(|n| n.contains(&g)).expect("every grade has a node")
    }

    /// Reflexive-transitive closure of the edges, between grades.
    pub fn entails(&self, from: GradeId, to: GradeId) -> bool {
        let (s, t) = (self.node_of(from), self.node_of(to));
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if x == t {
                return true;
            }
            if core::mem::replace(&mut seen[x], true) {
                continue;
            }
            stack.extend(self.edges.iter().filter(|e| e.0 == x).map(|e| e.1));
        }
        false
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.nodes.len()).all(|i| !self.edges.iter().any(|&(a, b)| a == i && self.reaches(b, i)))
    }

    fn reaches(&self, s: usize, t: usize) -> bool {
        self.entails(self.nodes[s][0], self.nodes[t][0])
    }

    fn label(&self, i: usize) -> String {
        self.nodes[i].iter().map(|g| g.symbol()).collect::<Vec<_>>().join(" = ")
    }

    /// Graphviz rendering, one node per coincidence class.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"{}\" {{\n  rankdir=TB;\n", self.regime.name());
        for (i, n) in self.nodes.iter().enumerate() {
            let id = n.iter().map(|g| g.name()).collect::<Vec<_>>().join("_");
            out += &format!("  n{i} [label=\"{}\", id=\"{id}\"];\n", self.label(i));
        }
        for &(a, b) in &self.edges {
            out += &format!("  n{a} -> n{b};\n");
        }
        out += "}\n";
        out
    }
}

/// All twelve grades for every ordered pair of a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeMatrix {
    n: usize,
    cells: Vec<[bool; 12]>,
}

impl GradeMatrix {
    pub fn from_cells(n: usize, cells: Vec<[bool; 12]>) -> Self {
        assert_eq!(cells.len(), n * n);
        GradeMatrix { n, cells }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, g: GradeId, a: usize, b: usize) -> bool {
        self.cells[a * self.n + b][g.index()]
    }

    pub fn set(&mut self, g: GradeId, a: usize, b: usize, v: bool) {
        self.cells[a * self.n + b][g.index()] = v;
    }

    pub fn row(&self, a: usize, b: usize) -> &[bool; 12] {
        &self.cells[a * self.n + b]
    }

    /// The extension of one grade as an `n × n` table.
    pub fn relation(&self, g: GradeId) -> Vec<bool> {
        self.cells.iter().map(|c| c[g.index()]).collect()
    }
}

/// Engines shared across the cells of one matrix.
struct Engines<'a> {
    s: &'a Structure,
    indisc: Partition,
    orbits: Partition,
    view: QuotientView<'a>,
    q_orbits: Partition,
}

impl<'a> Engines<'a> {
    fn new(s: &'a Structure) -> Result<Self, IndiscError> {
        let view = QuotientView::new(s)?;
        let q_orbits = orbits(view.quotient());
        Ok(Engines { s, indisc: full_indisc(s)?, orbits: orbits(s), view, q_orbits })
    }

    fn row(&self, a: usize, b: usize) -> [bool; 12] {
        let s = self.s;
        let q = self.view.quotient();
        let (qa, qb) = (self.view.class_of(a), self.view.class_of(b));
        let sym_pair = symmetry::sym_grade(s, SymPair, a, b).is_some();
        let rel_pair = symmetry::sym_grade(q, SymPair, qa, qb).is_some();
        let mut r = [false; 12];
        r[Id.index()] = a == b;
        r[IndiscNeqFull.index()] = self.indisc.same(a, b);
        r[SymTotal.index()] = symmetry::is_automorphism(s, &Permutation::transposition(s.size(), a, b));
        r[SymPair.index()] = sym_pair;
        r[SymBare.index()] = self.orbits.same(a, b);
        r[RelTotal.index()] = symmetry::is_automorphism(q, &Permutation::transposition(q.size(), qa, qb));
        r[RelPair.index()] = rel_pair;
        r[RelBare.index()] = self.q_orbits.same(qa, qb);
        r[IndiscEqPair.index()] = sym_pair;
        r[IndiscEqMon.index()] = r[SymBare.index()];
        r[IndiscNeqPair.index()] = rel_pair;
        r[IndiscNeqMon.index()] = r[RelBare.index()];
        r
    }
}

/// The full grade matrix; refuses structures above `size_cap` elements.
pub fn grade_matrix(s: &Structure, size_cap: usize) -> Result<GradeMatrix, LatticeError> {
    if s.size() > size_cap {
        return Err(LatticeError::SizeCap(s.size(), size_cap));
    }
    let e = Engines::new(s)?;
    let n = s.size();
    let mut cells = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            cells.push(e.row(a, b));
        }
    }
    Ok(GradeMatrix { n, cells })
}

/// The twelve grades for a single pair.
pub fn grade_row(s: &Structure, a: usize, b: usize) -> Result<[bool; 12], LatticeError> {
    Ok(Engines::new(s)?.row(a, b))
}

/// One edge or coincidence of a diagram that fails on a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub from: GradeId,
    pub to: GradeId,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): {} holds but {} fails", self.a, self.b, self.from, self.to)
    }
}

/// Every pair on which some edge or coincidence of `d` fails.
pub fn matrix_violations(m: &GradeMatrix, d: &EntailmentDiagram) -> Vec<Violation> {
    let mut implications: Vec<(GradeId, GradeId)> = Vec::new();
    for node in &d.nodes {
        for &g in node {
            for &h in node {
                if g != h {
                    implications.push((g, h));
                }
            }
        }
    }
    for &(i, j) in &d.edges {
        for &g in &d.nodes[i] {
            for &h in &d.nodes[j] {
                implications.push((g, h));
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..m.size() {
        for b in 0..m.size() {
            for &(g, h) in &implications {
                if m.get(g, a, b) && !m.get(h, a, b) {
                    out.push(Violation { a, b, from: g, to: h });
                }
            }
        }
    }
    out
}

/// Checks every pair of `s` against the diagram of `regime`.
pub fn check_conformance(s: &Structure, regime: Regime, size_cap: usize) -> Result<Vec<Violation>, LatticeError> {
    if regime.is_relational() && !s.signature().is_relational() {
        return Err(LatticeError::RegimeMismatch);
    }
    let m = grade_matrix(s, size_cap)?;
    Ok(matrix_violations(&m, &lattice(regime)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceStatus {
    pub grade: GradeId,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    /// `(a, b, c)` with `a ~ b`, `b ~ c` and not `a ~ c`.
    pub transitivity_counterexample: Option<(usize, usize, usize)>,
}

impl EquivalenceStatus {
    pub fn is_equivalence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

/// Reflexivity, symmetry and transitivity of every grade on the matrix.
pub fn equivalence_report(m: &GradeMatrix) -> Vec<EquivalenceStatus> {
    let n = m.size();
    GradeId::ALL
        .iter()
        .map(|&g| {
            let reflexive = (0..n).all(|a| m.get(g, a, a));
            let symmetric = (0..n).all(|a| (0..n).all(|b| m.get(g, a, b) == m.get(g, b, a)));
            let mut cex = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    if !m.get(g, a, b) {
                        continue;
                    }
                    for c in 0..n {
                        if m.get(g, b, c) && !m.get(g, a, c) {
                            cex = Some((a, b, c));
                            break 'outer;
                        }
                    }
                }
            }
            EquivalenceStatus { grade: g, reflexive, symmetric, transitive: cex.is_none(), transitivity_counterexample: cex }
        })
        .collect()
}

/// Grade pairs `(g, h)` with `g ⇏ h` in general, each witnessed by a named
/// gallery pair `(structure, a, b)` with `g(a,b)` and not `h(a,b)`, using
/// 1-based element names.
pub const NON_ENTAILMENT_WITNESSES: [(GradeId, GradeId, &str, &str, &str); 8] = [
    (IndiscNeqFull, Id, "A", "1", "2"),
    (IndiscNeqFull, IndiscEqMon, "F", "1", "2"),
    (SymTotal, IndiscNeqFull, "B", "1", "2"),
    (RelTotal, IndiscEqMon, "C", "1", "2"),
    (SymBare, IndiscNeqPair, "D", "1", "2"),
    (SymPair, RelTotal, "D", "1", "3"),
    (SymPair, SymTotal, "D", "1", "3"),
    (IndiscEqPair, IndiscNeqFull, "D", "1", "3"),
];
