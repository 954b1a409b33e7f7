//! Weak metric dimension of strongly connected digraphs.
//!
//! The two-way distance between `x` and `y` is the pair `(∂(x,y), ∂(y,x))`.
//! A vertex set is weakly resolving when the vectors of two-way distances
//! from its members tell every two vertices apart; the weak metric dimension
//! is the least size of such a set.

pub mod codec;
pub mod constructions;
pub mod dimension;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod products;
pub mod symmetry;
pub mod verify;

pub use dimension::{weak_metric_dimension, DimensionResult};
pub use error::{Error, Result};
pub use graph::{Digraph, TwoWay, TwoWayDistanceMatrix, VertexSet};
pub use symmetry::{Fingerprint, VertexPermutation};
pub use verify::{verify, TheoremId, Verdict, VerificationReport, VerifyParams};
