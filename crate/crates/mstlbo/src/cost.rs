//! The three-term path cost: total length, obstacle clearance sampled at
//! segment midpoints, and the altitude corridor penalty.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{segment_midpoint, Bounds, Obstacle, Point3, Scenario};

/// Weights for the aggregate cost, plus the finite stand-in for the
/// "infinitely bad" below-ground case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostWeights {
    /// Term weights for (length, obstacle, altitude).
    pub beta: [f64; 3],
    /// Charged per below-ground segment and once more on the aggregate, so
    /// violating candidates always lose to non-violating ones. Must dominate
    /// any achievable non-violating cost; the default is 1e6.
    pub violation_cost: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            beta: [1.0, 100.0, 10.0],
            violation_cost: 1e6,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightsError {
    #[error("cost weights must be finite and non-negative")]
    NegativeWeight,
    #[error("at least one cost weight must be positive")]
    AllZero,
    #[error("violation cost must be finite and positive")]
    BadViolationCost,
}

impl CostWeights {
    pub fn validate(&self) -> Result<(), WeightsError> {
        if self.beta.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(WeightsError::NegativeWeight);
        }
        if self.beta.iter().all(|b| *b == 0.0) {
            return Err(WeightsError::AllZero);
        }
        if !self.violation_cost.is_finite() || self.violation_cost <= 0.0 {
            return Err(WeightsError::BadViolationCost);
        }
        Ok(())
    }
}

/// Per-term cost values for one candidate path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Total path length in meters.
    pub j1: f64,
    /// Normalized obstacle-clearance penalty in `[0, 1]`.
    pub j2: f64,
    /// Altitude penalty in meters, plus the violation surcharge per
    /// below-ground segment.
    pub j3: f64,
    /// Weighted aggregate the optimizer minimizes.
    pub total: f64,
    /// Whether any segment midpoint sits at or below ground level.
    pub violated: bool,
}

/// Total Euclidean length of a polyline.
pub fn path_length(path: &[Point3]) -> f64 {
    path.windows(2).map(|pair| pair[0].distance(pair[1])).sum()
}

/// Mean clamped clearance penalty over all (segment, obstacle) pairs. Each
/// pair contributes `max(1 - d / safe_radius, 0)` where `d` is the distance
/// from the obstacle center to the segment midpoint, so the result lies in
/// `[0, 1]` and is zero exactly when every midpoint clears every obstacle.
/// An empty obstacle set costs nothing.
pub fn obstacle_cost(path: &[Point3], obstacles: &[Obstacle]) -> f64 {
    let segments = path.len().saturating_sub(1);
    if segments == 0 || obstacles.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for pair in path.windows(2) {
        let midpoint = segment_midpoint(pair[0], pair[1]);
        for obstacle in obstacles {
            let d = midpoint.distance(obstacle.center);
            sum += (1.0 - d / obstacle.safe_radius).max(0.0);
        }
    }
    sum / (segments as f64 * obstacles.len() as f64)
}

/// Altitude penalty summed over segment midpoints: zero inside
/// `[z_min, z_max]`, distance to the nearest corridor edge outside it, and
/// `violation_cost` per midpoint at or below ground. Also reports whether
/// any midpoint violated.
pub fn altitude_cost(path: &[Point3], bounds: &Bounds, violation_cost: f64) -> (f64, bool) {
    let mut sum = 0.0;
    let mut violated = false;
    for pair in path.windows(2) {
        let z = segment_midpoint(pair[0], pair[1]).z;
        if z > bounds.z_max {
            sum += z - bounds.z_max;
        } else if z >= bounds.z_min {
            // inside the corridor
        } else if z > 0.0 {
            sum += bounds.z_min - z;
        } else {
            sum += violation_cost;
            violated = true;
        }
    }
    (sum, violated)
}

/// Decodes `genes` against `scenario` and aggregates the weighted cost
/// terms. Violating candidates pay `violation_cost` once more on top of the
/// weighted sum. Pure and deterministic: equal inputs give bitwise-equal
/// breakdowns.
///
/// Panics when the gene count does not match the scenario; the optimizer
/// never produces such candidates.
pub fn evaluate(genes: &[f64], scenario: &Scenario, weights: &CostWeights) -> CostBreakdown {
    let path = scenario
        .decode(genes)
        .expect("gene count matches the scenario");
    let j1 = path_length(&path);
    let j2 = obstacle_cost(&path, scenario.obstacles());
    let (j3, violated) = altitude_cost(&path, scenario.bounds(), weights.violation_cost);
    let [b1, b2, b3] = weights.beta;
    let mut total = b1 * j1 + b2 * j2 + b3 * j3;
    if violated {
        total += weights.violation_cost;
    }
    CostBreakdown {
        j1,
        j2,
        j3,
        total,
        violated,
    }
}
