//! Exact combinatorics of non-crossing partitions and the chain conditions
//! used to rule out turning faces in the seven-strand braid complex.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`]: set partitions of `{1..n}`, crossing, order, Kreweras dual.
//! * [`chain`]: chains of NC(n), the families `F_i`/`F_i′`, conditions I–III.
//! * [`enumeration`]: exhaustive generators and dihedral orbit classes.
//! * [`condition_four`]: condition IV, neighbour patterns and exclusions.
//! * [`certificate`]: refutation certificates and their independent replay.
//! * [`apartments`]: non-crossing spanning trees and dominant vertices.
//! * [`pipeline`], [`fixtures`], [`svg`]: the end-to-end verification run,
//!   the transcribed case table, and chord-diagram rendering.

pub mod apartments;
pub mod certificate;
pub mod chain;
pub mod condition_four;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod partition;
pub mod patterns;
pub mod pipeline;
pub mod svg;
pub mod universe;

pub use chain::{Chain, RankSet, SmallestBlockFamily};
pub use error::{NcpError, Result};
pub use partition::{blocks_cross, Block, CrossingWitness, DualOrientation, Partition};
pub use universe::{Mask, Symmetry, Universe};
