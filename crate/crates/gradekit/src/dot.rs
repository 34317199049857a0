//! Graphviz output for structures with predicates of arity at most 2.

use std::fmt::Write as _;

use gradekit_core::Structure;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dot: predicate `{0}` has arity {1}; only arities 1 and 2 can be drawn")]
pub struct DotError(pub String, pub usize);

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per element, labelled with the unary predicates it satisfies.
/// Binary predicates become labelled edges; a symmetric one is drawn once
/// per unordered pair. Functions are not drawn.
pub fn structure_to_dot(s: &Structure) -> Result<String, DotError> {
    let sig = s.signature();
    if let Some(p) = sig.predicates().iter().find(|p| p.arity > 2) {
        return Err(DotError(p.name.clone(), p.arity));
    }
    let binary: Vec<usize> = (0..sig.predicates().len()).filter(|&p| sig.predicates()[p].arity == 2).collect();
    let undirected = binary.iter().all(|&p| s.is_symmetric(p));
    let (kind, arrow) = if undirected { ("graph", "--") } else { ("digraph", "->") };
    let mut out = format!("{kind} structure {{\n");
    for e in 0..s.size() {
        let unary: Vec<&str> = sig
            .predicates()
            .iter()
            .enumerate()
            .filter(|(p, sym)| sym.arity == 1 && s.holds(*p, &[e]))
            .map(|(_, sym)| sym.name.as_str())
            .collect();
        let label = if unary.is_empty() { s.name(e).to_string() } else { format!("{} [{}]", s.name(e), unary.join(",")) };
        let _ = writeln!(out, "  {} [label={}];", quote(s.name(e)), quote(&label));
    }
    for &p in &binary {
        let name = &sig.predicates()[p].name;
        let sym = s.is_symmetric(p);
        for t in s.tuples(p) {
            if sym && t[0] > t[1] {
                continue;
            }
            let extra = if sym && !undirected { ", dir=none" } else { "" };
            let _ = writeln!(
                out,
                "  {} {arrow} {} [label={}{extra}];",
                quote(s.name(t[0])),
                quote(s.name(t[1])),
                quote(name)
            );
        }
    }
    out += "}\n";
    Ok(out)
}
