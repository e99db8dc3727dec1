use serde::{Deserialize, Serialize};

/// Expected cut fraction together with the two derived views used when
/// comparing algorithms across degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutStats {
    pub cut_fraction: f64,
    /// `cut_fraction - 1/2`.
    pub improvement: f64,
    /// `improvement * sqrt(D)`, so that `cut_fraction = 1/2 + b / sqrt(D)`.
    pub scaled_b: f64,
    pub degree: u32,
}

impl CutStats {
    pub fn from_cut_fraction(degree: u32, cut_fraction: f64) -> Self {
        Self::from_improvement(degree, cut_fraction - 0.5)
    }

    pub fn from_improvement(degree: u32, improvement: f64) -> Self {
        CutStats {
            cut_fraction: 0.5 + improvement,
            improvement,
            scaled_b: improvement * f64::from(degree).sqrt(),
            degree,
        }
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        (self.cut_fraction - 0.5 - self.improvement).abs() <= tol
            && (self.improvement * f64::from(self.degree).sqrt() - self.scaled_b).abs() <= tol
    }
}
