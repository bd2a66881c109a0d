use serde::{Deserialize, Serialize};

/// Numerical tolerances and search budgets shared by every operation.
///
/// Relative tolerances are multiplied by the natural scale of the quantity
/// they guard (usually a norm); the field docs say which.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Accuracy of analytic supporting functionals: `|f(x) - |x||` and `|f|_* - 1`.
    pub tol_exact: f64,
    /// Active-set threshold, relative to `|x|`, for max-type norms and zero coordinates of l1.
    pub tol_active: f64,
    /// Orthogonality tolerance, relative to `|x|` for the line test and to `|y|` for the
    /// derivative-interval test.
    pub tol_orth: f64,
    /// Golden-section width, relative to `1 + B` where `B` is the search bracket.
    pub tol_lambda: f64,
    /// Norm-attainment threshold relative to `|T|`.
    pub tol_attain: f64,
    /// Euclidean separation between distinct attainment representatives.
    pub tol_cluster: f64,
    /// Operator orthogonality tolerance relative to `|T|`.
    pub tol_oporth: f64,
    /// Pivot threshold for null-space elimination, relative to the largest matrix entry.
    pub tol_pivot: f64,
    /// Eigenvector and kernel-membership residual threshold relative to `|T|`.
    pub tol_eigen: f64,
    /// A defect at or below this value is reported as zero, without a witness.
    pub tol_defect: f64,
    /// Required gap `|T| - min |T + lA|` for a non-orthogonality certificate.
    pub witness_margin: f64,
    /// Coordinate-ascent iterations of the local refinement stage.
    pub refine_iterations: usize,
    /// Sphere probes for grid-based operator norms in dimension <= 3 (scaled up for dimension 4+).
    pub norm_grid: usize,
    /// Maximum retries of the right-symmetry construction after a degenerate step.
    pub max_retries: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_exact: 1e-12,
            tol_active: 1e-9,
            tol_orth: 1e-8,
            tol_lambda: 1e-10,
            tol_attain: 1e-6,
            tol_cluster: 1e-3,
            tol_oporth: 1e-7,
            tol_pivot: 1e-10,
            tol_eigen: 1e-8,
            tol_defect: 1e-9,
            witness_margin: 1e-3,
            refine_iterations: 20,
            norm_grid: 10_000,
            max_retries: 5,
        }
    }
}

impl Tolerances {
    /// Grid size for a sphere scan in the given dimension.
    pub fn grid_for_dim(&self, dim: usize) -> usize {
        match dim {
            0..=3 => self.norm_grid,
            _ => self.norm_grid * 4,
        }
    }
}
