use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every check.
///
/// `tol_rank` is relative: a singular value counts toward the rank when it
/// exceeds `tol_rank * sigma_max`. `residual_tol` is relative to
/// `max(1, |R|_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_zero: f64,
    pub tol_rank: f64,
    pub lp_threshold: f64,
    pub residual_tol: f64,
    /// Depth bound of the sequential recursion; `None` means `r - 1`.
    pub max_depth: Option<usize>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_zero: 1e-9,
            tol_rank: 1e-10,
            lp_threshold: 1e-6,
            residual_tol: 1e-9,
            max_depth: None,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let named = [
            ("tol_zero", self.tol_zero),
            ("tol_rank", self.tol_rank),
            ("lp_threshold", self.lp_threshold),
            ("residual_tol", self.residual_tol),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(crate::Error::PreconditionViolated(format!(
                    "tolerance {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn depth_limit(&self, r: usize) -> usize {
        self.max_depth.unwrap_or(r.saturating_sub(1))
    }
}
