use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// A predicate or function symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` declared more than once")]
    DuplicateSymbol(String),
    #[error("predicate `{0}` must have arity at least 1")]
    NullaryPredicate(String),
    #[error("symbol name `{0}` is not an identifier")]
    BadName(String),
}

/// A first-order signature. Constants are 0-place function symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    predicates: Vec<Symbol>,
    functions: Vec<Symbol>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

impl Signature {
    pub fn new(predicates: Vec<Symbol>, functions: Vec<Symbol>) -> Result<Self, SignatureError> {
        let mut seen = BTreeSet::new();
        for sym in predicates.iter().chain(functions.iter()) {
            if !is_identifier(&sym.name) {
                return Err(SignatureError::BadName(sym.name.clone()));
            }
            if !seen.insert(sym.name.as_str()) {
                return Err(SignatureError::DuplicateSymbol(sym.name.clone()));
            }
        }
        if let Some(p) = predicates.iter().find(|p| p.arity == 0) {
            return Err(SignatureError::NullaryPredicate(p.name.clone()));
        }
        Ok(Signature { predicates, functions })
    }

    /// Signature with predicates only.
    pub fn relational(predicates: &[(&str, usize)]) -> Result<Self, SignatureError> {
        Self::new(predicates.iter().map(|&(n, a)| Symbol::new(n, a)).collect(), Vec::new())
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn predicate(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn is_relational(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.predicate(name).is_some() || self.function(name).is_some()
    }

    pub fn max_predicate_arity(&self) -> usize {
        self.predicates.iter().map(|p| p.arity).max().unwrap_or(0)
    }

    pub fn max_function_arity(&self) -> usize {
        self.functions.iter().map(|f| f.arity).max().unwrap_or(0)
    }
}
