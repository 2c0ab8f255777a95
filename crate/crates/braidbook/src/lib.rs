//! Combinatorial and numerical tools for braided open books in the 3-sphere:
//! band-generator braid words, Rampichini diagrams and their search, cacti of
//! simple branched covers, ladder-diagram braid axes and polynomial loops.

pub mod braid;
pub mod cactus;
pub mod error;
pub mod ladder;
pub mod polyloop;
pub mod rampichini;
pub mod svg;

pub use error::{Error, Result};
