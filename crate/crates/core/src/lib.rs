//! Equitable 2-colorings of random k-uniform hypergraphs: generators,
//! threshold formulas, a greedy recoloring procedure and experiment drivers.

pub mod error;
pub mod exact;
pub mod experiment;
pub mod hypergraph;
pub mod io;
pub mod models;
pub mod oracle;
pub mod plot;
pub mod recoloring;
pub mod rng;
pub mod special;
pub mod threshold;

pub use error::{Error, Result};
pub use hypergraph::{Color, Coloring, Hypergraph, Vertex};
