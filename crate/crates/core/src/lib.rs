//! Rainbow clique tilings in edge-coloured graphs.

pub mod closedness;
pub mod constructions;
pub mod convert;
pub mod error;
pub mod fractional;
pub mod graph;
pub mod harness;
pub mod io;
pub mod matching;
pub mod packing;
pub mod rainbow;
pub mod random;
pub mod rational;
pub mod simplex;
pub mod thresholds;
pub mod tiling;

pub use error::{Error, Result};
pub use graph::{Colour, DegreeProfile, Digraph, EdgeColouredGraph, Graph};
