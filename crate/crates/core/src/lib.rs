//! Coloring the intersection of matroids: exact single-matroid coloring,
//! iterative LP refinement with conflict-graph coloring for `k` matroids,
//! and a swap-rounding peeling scheme for two matroids.

pub mod coloring;
pub mod conflict;
pub mod error;
pub mod fpras;
pub mod graph;
pub mod harness;
pub mod intersection;
pub mod losz;
pub mod lp;
pub mod matroid;
pub mod rational;
pub mod rng;
pub mod subset;
pub mod swap;
pub mod union;

pub use error::{Error, Result};
pub use matroid::Matroid;
pub use rational::Q;
pub use subset::{GroundSet, Subset};
