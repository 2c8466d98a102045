//! Ternary and Gaussian cube vectors, cube subsets, and orbit enumeration.

mod enumerate;
mod gaussian;
mod set;
mod vector;

pub use enumerate::{admissible_count, cube_vectors, is_canonical, random_admissible, AdmissibleSets};
pub use gaussian::{GaussianSet, GaussianVector};
pub use set::{SetRecord, SymmetricCubeSet};
pub use vector::{IntegerVector, TernaryVector, MAX_DIM};
