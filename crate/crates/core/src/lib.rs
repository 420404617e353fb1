//! Staged two-handed tile self-assembly.
//!
//! [`assembly`] holds tiles, glues and supertiles, [`engine`] computes the produced and terminal
//! sets of a bin, [`staged`] runs multi-stage mix graphs, [`verify`] checks connectivity,
//! planarity and shapes, [`constructions`] emits staged systems for lines, squares and general
//! shapes, and [`dsl`] reads and writes the text format used by the `staged` binary.

pub mod assembly;
pub mod engine;
pub mod staged;
pub mod verify;
pub mod constructions;
pub mod dsl;

#[cfg(test)]
pub(crate) mod testutil;
