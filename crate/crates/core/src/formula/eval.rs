use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Formula, FormulaError, Term};
use crate::signature::Signature;
use crate::structure::Structure;

#[derive(Debug, Clone)]
enum CTerm {
    Slot(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Debug, Clone)]
enum Node {
    True,
    Atom(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula with symbols and variables resolved to indices, ready for
/// repeated evaluation on structures over one signature.
#[derive(Debug, Clone)]
pub struct Compiled {
    root: Node,
    free: usize,
    slots: usize,
}

struct Resolver<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize)>,
    max_slot: usize,
}

impl Resolver<'_> {
    fn term(&self, t: &Term) -> Result<CTerm, FormulaError> {
        match t {
            Term::Var(v) => {
                if let Some((_, s)) = self.scope.iter().rev().find(|(n, _)| n == v) {
                    return Ok(CTerm::Slot(*s));
                }
                match self.sig.function(v) {
                    Some(f) if self.sig.functions()[f].arity == 0 => Ok(CTerm::App(f, Vec::new())),
                    _ => Err(FormulaError::Unbound(v.clone())),
                }
            }
            Term::App(name, args) => {
                let f = self.sig.function(name).ok_or_else(|| FormulaError::UnknownSymbol(name.clone()))?;
                let expected = self.sig.functions()[f].arity;
                if expected != args.len() {
                    return Err(FormulaError::Arity { name: name.clone(), expected, got: args.len() });
                }
                Ok(CTerm::App(f, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?))
            }
        }
    }

    fn node(&mut self, f: &Formula) -> Result<Node, FormulaError> {
        let bin = |r: &mut Self, a: &Formula, b: &Formula| -> Result<(Box<Node>, Box<Node>), FormulaError> {
            Ok((Box::new(r.node(a)?), Box::new(r.node(b)?)))
        };
        Ok(match f {
            Formula::True => Node::True,
            Formula::Atom(p, args) => {
                let i = self.sig.predicate(p).ok_or_else(|| FormulaError::UnknownSymbol(p.clone()))?;
                let expected = self.sig.predicates()[i].arity;
                if expected != args.len() {
                    return Err(FormulaError::Arity { name: p.clone(), expected, got: args.len() });
                }
                Node::Atom(i, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
            }
            Formula::Eq(l, r) => Node::Eq(self.term(l)?, self.term(r)?),
            Formula::Not(a) => Node::Not(Box::new(self.node(a)?)),
            Formula::And(a, b) => {
                let (a, b) = bin(self, a, b)?;
                Node::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(self, a, b)?;
                Node::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(self, a, b)?;
                Node::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(self, a, b)?;
                Node::Iff(a, b)
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let slot = self.scope.len();
                self.max_slot = self.max_slot.max(slot + 1);
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.node(a)?);
                self.scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    Node::Forall(slot, body)
                } else {
                    Node::Exists(slot, body)
                }
            }
        })
    }
}

impl Compiled {
    /// Resolves `formula` against `sig`; `free` fixes the order of the
    /// arguments later passed to [`Compiled::eval`]. Every free variable of
    /// the formula must be listed; extra names are allowed.
    pub fn new(sig: &Signature, formula: &Formula, free: &[&str]) -> Result<Compiled, FormulaError> {
        let mut r = Resolver {
            sig,
            scope: free.iter().enumerate().map(|(i, v)| (v.to_string(), i)).collect(),
            max_slot: free.len(),
        };
        let root = r.node(formula)?;
        Ok(Compiled { root, free: free.len(), slots: r.max_slot })
    }

    pub fn arity(&self) -> usize {
        self.free
    }

    /// Truth value on `s` with the free variables bound to `args` in order.
    pub fn eval(&self, s: &Structure, args: &[usize]) -> bool {
        assert_eq!(args.len(), self.free, "wrong number of arguments");
        let mut env = vec![0; self.slots];
        env[..args.len()].copy_from_slice(args);
        eval_node(&self.root, s, &mut env)
    }

    /// Like [`Compiled::eval`], reusing the caller's scratch environment.
    pub fn eval_with(&self, s: &Structure, args: &[usize], env: &mut Vec<usize>) -> bool {
        env.clear();
        env.extend_from_slice(args);
        env.resize(self.slots.max(args.len()), 0);
        eval_node(&self.root, s, env)
    }
}

fn eval_term(t: &CTerm, s: &Structure, env: &[usize]) -> usize {
    match t {
        CTerm::Slot(i) => env[*i],
        CTerm::App(f, args) => {
            let n = s.size();
            let idx = args.iter().fold(0, |acc, a| acc * n + eval_term(a, s, env));
            s.apply_at(*f, idx)
        }
    }
}

fn eval_node(node: &Node, s: &Structure, env: &mut [usize]) -> bool {
    match node {
        Node::True => true,
        Node::Atom(p, args) => {
            let n = s.size();
            let idx = args.iter().fold(0, |acc, a| acc * n + eval_term(a, s, env));
            s.holds_at(*p, idx)
        }
        Node::Eq(l, r) => eval_term(l, s, env) == eval_term(r, s, env),
        Node::Not(a) => !eval_node(a, s, env),
        Node::And(a, b) => eval_node(a, s, env) && eval_node(b, s, env),
        Node::Or(a, b) => eval_node(a, s, env) || eval_node(b, s, env),
        Node::Implies(a, b) => !eval_node(a, s, env) || eval_node(b, s, env),
        Node::Iff(a, b) => eval_node(a, s, env) == eval_node(b, s, env),
        Node::Forall(slot, body) => {
            let saved = env[*slot];
            let r = (0..s.size()).all(|e| {
                env[*slot] = e;
                eval_node(body, s, env)
            });
            env[*slot] = saved;
            r
        }
        Node::Exists(slot, body) => {
            let saved = env[*slot];
            let r = (0..s.size()).any(|e| {
                env[*slot] = e;
                eval_node(body, s, env)
            });
            env[*slot] = saved;
            r
        }
    }
}

/// Tarskian truth of `formula` on `s` under `assignment` (variable name to
/// element index). Variables not free in the formula are ignored.
pub fn evaluate(s: &Structure, formula: &Formula, assignment: &BTreeMap<String, usize>) -> Result<bool, FormulaError> {
    let names: Vec<&str> = assignment.keys().map(String::as_str).collect();
    let args: Vec<usize> = assignment.values().copied().collect();
    if let Some(&bad) = args.iter().find(|&&e| e >= s.size()) {
        return Err(FormulaError::Unsupported(alloc::format!("element index {bad} is outside the domain")));
    }
    Ok(Compiled::new(s.signature(), formula, &names)?.eval(s, &args))
}
