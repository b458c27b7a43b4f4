pub mod alternating;
pub mod canon;
pub mod cli;
pub mod error;
pub mod family;
pub mod graph;
pub mod matching;
pub mod reduction;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Multigraph};
