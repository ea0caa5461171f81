//! The fitness interface shared by the path-planning problem and the
//! analytic benchmark functions.

use crate::cost::{self, CostBreakdown, CostWeights};
use crate::scenario::Scenario;

/// Inclusive per-gene bounds; every optimizer update clamps to these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneBounds {
    pub lo: f64,
    pub hi: f64,
}

impl GeneBounds {
    /// Requires `lo <= hi` and finite endpoints.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(
            lo.is_finite() && hi.is_finite() && lo <= hi,
            "gene bounds must be finite with lo <= hi, got [{lo}, {hi}]"
        );
        Self { lo, hi }
    }

    pub fn clamp(self, value: f64) -> f64 {
        value.clamp(self.lo, self.hi)
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }
}

/// Anything the optimizer can minimize: a boxed decision space plus a cost.
///
/// The cost must be deterministic in `genes`; every variant relies on
/// re-evaluation being free of surprises when comparing candidates.
pub trait Objective {
    fn dimension(&self) -> usize;

    /// Per-gene bounds; the slice length equals [`Objective::dimension`].
    fn gene_bounds(&self) -> &[GeneBounds];

    /// Cost of a decision vector of length [`Objective::dimension`].
    fn evaluate(&self, genes: &[f64]) -> CostBreakdown;
}

/// The path-planning objective: the three-term cost over a fixed scenario.
///
/// Waypoint x and y genes range over the full operating volume while z genes
/// are confined to the altitude corridor, so clamped candidates can never
/// pay an altitude penalty through their interior waypoints.
pub struct PathObjective<'a> {
    scenario: &'a Scenario,
    weights: CostWeights,
    bounds: Vec<GeneBounds>,
}

impl<'a> PathObjective<'a> {
    pub fn new(scenario: &'a Scenario, weights: CostWeights) -> Self {
        let b = scenario.bounds();
        let per_axis = [
            GeneBounds::new(b.lower.x, b.upper.x),
            GeneBounds::new(b.lower.y, b.upper.y),
            GeneBounds::new(b.z_min, b.z_max),
        ];
        let bounds = (0..scenario.dimension()).map(|k| per_axis[k % 3]).collect();
        Self {
            scenario,
            weights,
            bounds,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    pub fn weights(&self) -> &CostWeights {
        &self.weights
    }
}

impl Objective for PathObjective<'_> {
    fn dimension(&self) -> usize {
        self.scenario.dimension()
    }

    fn gene_bounds(&self) -> &[GeneBounds] {
        &self.bounds
    }

    fn evaluate(&self, genes: &[f64]) -> CostBreakdown {
        cost::evaluate(genes, self.scenario, &self.weights)
    }
}
