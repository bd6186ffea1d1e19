//! Library surface of the workbench CLI; the binary in `main.rs` is a thin
//! wrapper so integration tests can drive the same code paths.

pub mod experiment;
pub mod solver;
