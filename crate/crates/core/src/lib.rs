//! Greedy f-fold transversals of hypergraphs with exact arithmetic, LP and
//! branch-and-bound oracles, bound checking, and a planar covering pipeline.

pub mod bench;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod generate;
pub mod geometry;
pub mod greedy;
pub mod hypergraph;
pub mod io;
pub mod lambda;
pub mod lp;
pub mod scaled;

pub use error::{Error, ParseError, Result};
pub use greedy::{greedy_solve, GreedyTrace};
pub use hypergraph::{Hypergraph, Multiset};
pub use lambda::RationalLambda;
