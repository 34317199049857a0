//! Grades of discrimination on finite first-order structures.
//!
//! The crate decides all twelve grades (identity, the six grades of
//! indiscernibility, three grades of symmetry and three grades of relativity)
//! for pairs of elements of a finite structure, and provides the machinery the
//! decision procedures rest on: a first-order formula language with and without
//! identity, quotients by complete indiscernibility, constrained automorphism
//! search, relativeness correspondences with their Galois maps, entailment
//! diagrams, capturing formula sets and the inflation construction.
//!
//! Everything here is `no_std` + `alloc`. File formats, random generation and
//! the command-line tool live in the companion `gradekit` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod capture;
pub mod extensions;
pub mod formula;
pub mod gallery;
pub mod grade;
pub mod indisc;
pub mod lattice;
pub mod partition;
pub mod relativity;
pub mod signature;
pub mod structure;
pub mod symmetry;

pub use formula::{Formula, Language, Term};
pub use grade::GradeId;
pub use partition::Partition;
pub use signature::{Signature, Symbol};
pub use structure::{Diagnostic, Diagnostics, RawStructure, Severity, Structure};
