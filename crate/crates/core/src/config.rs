use serde::{Deserialize, Serialize};

/// Every search cap in one place. Exceeding a cap is reported as a budget
/// failure, never as silent truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Maximum number of admissible sets an exhaustive certification may enumerate.
    pub enumeration_max_sets: u64,
    /// Vertex cap for the exact maximum-free-subset oracle.
    pub mis_max_vertices: usize,
    /// Vertex cap for fixed-size free-subset searches (Gaussian augmentation, fallbacks).
    pub search_max_vertices: usize,
    /// Largest grid size for the exhaustive grid-lemma check.
    pub grid_max_n: usize,
    /// Largest real dimension for the `3^N` unit-combination enumeration.
    pub unit_ternary_max_dim: usize,
    /// Largest complex dimension for the `5^n` Gaussian coefficient enumeration.
    pub gaussian_coeff_max_dim: usize,
    /// Cap on `(vertex count)^n` for exhaustive Auerbach enumeration.
    pub auerbach_enumeration_max: u64,
    /// Random restarts of the determinant ascent.
    pub auerbach_restarts: usize,
    /// Cap on linear systems solved when converting between facet and vertex descriptions.
    pub polar_enumeration_max: u64,
    /// Random admissible sets examined as evidence for theorem-backed certificates.
    pub random_trials: usize,
    /// Tolerance for float norm equalities.
    pub tau: f64,
    /// Minimum separation margin accepted for float families.
    pub mu_min: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            enumeration_max_sets: 4096,
            mis_max_vertices: 64,
            search_max_vertices: 4096,
            grid_max_n: 5,
            unit_ternary_max_dim: 18,
            gaussian_coeff_max_dim: 8,
            auerbach_enumeration_max: 1_000_000,
            auerbach_restarts: 32,
            polar_enumeration_max: 200_000,
            random_trials: 200,
            tau: 1e-9,
            mu_min: 1e-6,
        }
    }
}
