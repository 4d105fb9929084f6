//! Free and unconfined Steiner triple systems.
//!
//! The crate works with finite partial Steiner triple systems ([`PartialSts`])
//! and provides:
//!
//! - free Steiner quasigroup terms and their level truncations ([`free`]);
//! - hyperfree (HF) orderings, greedy search with confined-core certificates,
//!   order closure and exhaustive oracles ([`ordering`], [`oracle`]);
//! - the predimension, well-embedding and orientations ([`predim`]);
//! - strong and n-strong substructures and minimal pairs ([`strong`]);
//! - free amalgams and the strong amalgamation procedure ([`amalgam`]);
//! - binary trees and strong extensions inside free truncations ([`trees`], [`generic`]);
//! - text formats and a command-line front end ([`format`], [`cli`]).

pub mod amalgam;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod free;
pub mod generic;
pub mod map;
pub mod named;
pub mod oracle;
pub mod ordering;
pub mod predim;
pub mod pstss;
pub mod strong;
pub mod trees;

pub use error::{Error, Result};
pub use pstss::{Block, PartialSts, VertexId, VertexSet};
