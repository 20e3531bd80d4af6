//! Combinatorial machinery for atomic right-angled Artin groups.

pub mod cycles;
pub mod diagram;
pub mod word;
pub mod error;
pub mod flat;
pub mod graph;
pub mod iso;
pub mod rigidity;

pub use error::{Error, Result};
pub use graph::{DefiningGraph, Vertex};
pub use iso::GraphIsomorphism;
