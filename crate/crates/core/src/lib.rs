//! Construction and analysis of semisymmetric graphs as bi-coset graphs over
//! finite permutation groups, together with certified Hamilton-cycle search.
//!
//! The crate is organised around five subsystems:
//!
//! * [`perm`] — permutation arithmetic, stabilizer chains, cosets and double
//!   cosets;
//! * [`bicoset`] — bi-coset graph construction, derived graphs and block
//!   graphs;
//! * [`autiso`] — graph automorphisms and isomorphism by
//!   individualization–refinement, semisymmetry decisions;
//! * [`hamilton`] — Hamilton-cycle producers (block lifts, bi-Cayley paths,
//!   a pruned backtracking solver) and an independent certificate verifier;
//! * [`zoo`] — concrete group and graph families (projective, symmetric,
//!   metacyclic, file-backed) and census ingestion.

pub mod autiso;
pub mod bicoset;
pub mod error;
pub mod graph;
pub mod hamilton;
pub mod perm;
pub mod zoo;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, SimpleGraph};
pub use perm::{Perm, PermGroup};
