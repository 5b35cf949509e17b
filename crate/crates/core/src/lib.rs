//! Online learning with directed feedback graphs.
//!
//! - [`graph`]: feedback graphs, observability classes, independence and
//!   weak domination numbers, rate prediction.
//! - [`learners`]: Hedge and Exp3.G with their parameter presets.
//! - [`environments`]: oblivious loss (and graph) sequences, including the
//!   lower-bound adversaries.
//! - [`harness`]: the game loop, regret accounting and sweeps.
//! - [`partial_monitoring`]: encoding a graph as a partial-monitoring game
//!   and checking its observability conditions.

pub mod environments;
pub mod error;
pub mod graph;
pub mod harness;
pub mod learners;
pub mod partial_monitoring;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{FeedbackGraph, GraphProfile, Observability, VertexTag};
