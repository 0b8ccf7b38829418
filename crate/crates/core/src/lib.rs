//! Analysis of finite discrete-time Markov chains and random walks on
//! weighted graphs.

// NaN-rejecting guards read as `!(x > 0.0)`; dense kernels index directly
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod absorbing;
pub mod chain;
pub mod demo;
pub mod error;
pub mod graph;
pub mod laplacian;
pub mod numlin;
pub mod reversal;
pub mod spectral;
pub mod stationary;
pub mod structure;
pub mod surfer;

pub use chain::{build_chain, Distribution, StateSpace, TransitionMatrix};
pub use error::{Error, Result};
pub use numlin::DenseMatrix;
