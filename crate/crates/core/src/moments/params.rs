use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which stable components are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// Both weights positive.
    Mixed,
    /// `c2 = 0`: inverse alpha1-stable subordinator.
    PureFirst,
    /// `c1 = 0`: inverse alpha2-stable subordinator.
    PureSecond,
}

/// Parameters of the mixed stable subordinator with Laplace exponent
/// `c1 u^alpha1 + c2 u^alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedStableParams {
    alpha1: f64,
    alpha2: f64,
    c1: f64,
    c2: f64,
}

impl MixedStableParams {
    /// Requires `0 < alpha2 < alpha1 < 1`, `c1, c2 >= 0` and `c1 + c2 = 1` (to 1e-12).
    pub fn new(alpha1: f64, alpha2: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(alpha2 > 0.0 && alpha2 < alpha1 && alpha1 < 1.0) {
            return Err(invalid(format!("need 0 < alpha2 < alpha1 < 1 (got alpha1={alpha1}, alpha2={alpha2})")));
        }
        if !(c1 >= 0.0 && c2 >= 0.0) || !c1.is_finite() || !c2.is_finite() {
            return Err(invalid(format!("weights must be non-negative (got c1={c1}, c2={c2})")));
        }
        if (c1 + c2 - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("weights must sum to 1 (got c1 + c2 = {})", c1 + c2)));
        }
        Ok(MixedStableParams { alpha1, alpha2, c1, c2 })
    }

    /// Weights `(c1, 1 - c1)`.
    pub fn with_c1(alpha1: f64, alpha2: f64, c1: f64) -> Result<Self> {
        Self::new(alpha1, alpha2, c1, 1.0 - c1)
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn composition(&self) -> Composition {
        if self.c2 == 0.0 {
            Composition::PureFirst
        } else if self.c1 == 0.0 {
            Composition::PureSecond
        } else {
            Composition::Mixed
        }
    }

    /// `alpha1 - alpha2`, the step of the Mittag-Leffler series.
    pub fn index_gap(&self) -> f64 {
        self.alpha1 - self.alpha2
    }

    /// Mittag-Leffler argument `-(c2/c1) t^(alpha1 - alpha2)` (mixed case only).
    pub fn ml_argument(&self, t: f64) -> f64 {
        -(self.c2 / self.c1) * t.powf(self.index_gap())
    }

    /// Index and weight of the single component when the process is pure stable.
    pub fn pure_component(&self) -> Option<(f64, f64)> {
        match self.composition() {
            Composition::PureFirst => Some((self.alpha1, self.c1)),
            Composition::PureSecond => Some((self.alpha2, self.c2)),
            Composition::Mixed => None,
        }
    }

    /// Index governing the large-time behaviour: alpha2 unless `c2 = 0`.
    pub fn tail_index(&self) -> f64 {
        if self.c2 > 0.0 {
            self.alpha2
        } else {
            self.alpha1
        }
    }
}

/// Process parameters plus Poisson rate and noise lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfppConfig {
    pub params: MixedStableParams,
    pub lambda: f64,
    pub delta: f64,
}

impl MfppConfig {
    /// `lambda >= 0` (zero gives the trivial process) and `delta > 0`.
    pub fn new(params: MixedStableParams, lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("lambda must be non-negative (got {lambda})")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid(format!("delta must be positive (got {delta})")));
        }
        Ok(MfppConfig { params, lambda, delta })
    }
}
