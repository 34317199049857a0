//! Text formats, random generation and the command-line front end for
//! `gradekit-core`.

pub mod cli;
pub mod dot;
pub mod dsl;
pub mod json;
pub mod random;

pub use gradekit_core as core;
