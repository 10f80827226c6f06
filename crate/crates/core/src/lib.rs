//! Correctness checking for unit-free MLL proof nets.
//!
//! Four checkers decide whether a [`ProofStructure`] is a proof net:
//!
//! * [`dr::check_all_switchings`] enumerates every switching (exponential; the oracle),
//! * [`denm::check_denm`] tests the extreme-left tree, par consistency and
//!   acyclicity of the par dependency digraph,
//! * [`rewrite::algorithm_a`] rewrites the translated tree with par
//!   elimination, union and local jump,
//! * [`linear::check_linear`] runs the same rewriting under a queue and
//!   union-find strategy in linear time.

pub mod bench;
pub mod denm;
pub mod difftest;
pub mod dr;
pub mod families;
pub mod format;
pub mod formula;
pub mod generate;
pub mod linear;
pub mod report;
pub mod rewrite;
pub mod sequent;
pub mod structure;

pub use formula::Formula;
pub use structure::{Link, LinkId, OccId, Occurrence, ParId, ProofStructure, StructureBuilder};
