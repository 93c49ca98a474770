//! Decision and witness procedures for spindle subdivisions in digraphs.
//!
//! A `(l_1, ..., l_k)`-spindle is a union of `k` directed paths from a common
//! tail to a common head that meet only at their ends, path `i` having length
//! `l_i`. A digraph contains a *subdivision* of such a spindle exactly when it
//! contains internally vertex-disjoint tail-to-head paths of lengths at least
//! `l_1, ..., l_k`.
//!
//! The crate provides:
//!
//! * [`digraph`]: the multidigraph type, its text format and witness validation;
//! * [`disjoint`]: flow and blossom-matching engines for disjoint path systems;
//! * [`poly`]: polynomial solvers for `(k x l)`-spindles with `l <= 3`;
//! * [`repsets`]: q-representative families over uniform matroids;
//! * [`fpt`]: the representative-family algorithms for 2-spindles and a
//!   colour-coding search;
//! * [`dag`]: a dynamic program for `(k x l)`-spindles in acyclic digraphs;
//! * [`oracle`]: exhaustive ground truth for small instances;
//! * [`generators`]: hardness reductions as instance generators.

pub mod counter;
pub mod dag;
pub mod digraph;
pub mod disjoint;
mod error;
pub mod fpt;
pub mod generators;
pub mod oracle;
pub mod poly;
pub mod repsets;

pub use counter::Counter;
pub use digraph::{
    parse_digraph, serialize_digraph, topological_order, validate_witness, ArcId, DiPath, Digraph, Mode, SpindleSpec,
    SpindleWitness, Vertex,
};
pub use error::{Error, Result};
