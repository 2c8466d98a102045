//! Finite combinatorics of the ternary cube and separated unit vectors in
//! finite-dimensional normed spaces.
//!
//! The crate has four layers:
//!
//! * [`ternary`]: packed cube vectors, admissible sets and their enumeration;
//! * [`freeset`]: difference-free and sum-free subsets, the extension chain,
//!   arrow-relation certificates for `K(l)` and `S(l)`, and the grid lemma;
//! * [`gaussian_bridge`]: the Gaussian cube, the real-ification map and `K_C(l)`;
//! * [`normed`]: norm oracles, Auerbach bases and the separated-point pipelines.

pub mod config;
pub mod error;
pub mod freeset;
pub mod gaussian_bridge;
pub mod normed;
pub mod ternary;

pub use config::Budgets;
pub use error::{Error, Result};
pub use freeset::{FreeMode, FreeSetCertificate};
pub use ternary::{GaussianSet, GaussianVector, SymmetricCubeSet, TernaryVector};
