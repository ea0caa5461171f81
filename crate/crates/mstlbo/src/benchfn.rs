//! Analytic benchmark functions for exercising the optimizers independently
//! of the path cost.

use crate::cost::CostBreakdown;
use crate::objective::{GeneBounds, Objective};

/// A named analytic minimization target with its known optimum value.
#[derive(Debug, Clone)]
pub struct BenchFunction {
    name: &'static str,
    kind: BenchKind,
    bounds: Vec<GeneBounds>,
    optimum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BenchKind {
    Sphere,
    Rastrigin,
}

impl BenchFunction {
    /// `f(x) = sum(x_k^2)`: unimodal, minimum 0 at the origin, searched in
    /// `[-100, 100]^D`.
    pub fn sphere(dimension: usize) -> Self {
        Self {
            name: "sphere",
            kind: BenchKind::Sphere,
            bounds: vec![GeneBounds::new(-100.0, 100.0); dimension],
            optimum: 0.0,
        }
    }

    /// `f(x) = 10 D + sum(x_k^2 - 10 cos(2 pi x_k))`: highly multimodal,
    /// minimum 0 at the origin, searched in `[-5.12, 5.12]^D`.
    pub fn rastrigin(dimension: usize) -> Self {
        Self {
            name: "rastrigin",
            kind: BenchKind::Rastrigin,
            bounds: vec![GeneBounds::new(-5.12, 5.12); dimension],
            optimum: 0.0,
        }
    }

    /// Looks a function up by its CLI name.
    pub fn by_name(name: &str, dimension: usize) -> Option<Self> {
        match name {
            "sphere" => Some(Self::sphere(dimension)),
            "rastrigin" => Some(Self::rastrigin(dimension)),
            _ => None,
        }
    }

    /// Replaces every gene's range, e.g. to pin the initial population in a
    /// test.
    pub fn with_bounds(mut self, bounds: GeneBounds) -> Self {
        for b in &mut self.bounds {
            *b = bounds;
        }
        self
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    /// Raw function value.
    pub fn value(&self, genes: &[f64]) -> f64 {
        match self.kind {
            BenchKind::Sphere => genes.iter().map(|x| x * x).sum(),
            BenchKind::Rastrigin => {
                let two_pi = 2.0 * std::f64::consts::PI;
                10.0 * genes.len() as f64
                    + genes
                        .iter()
                        .map(|x| x * x - 10.0 * (two_pi * x).cos())
                        .sum::<f64>()
            }
        }
    }
}

impl Objective for BenchFunction {
    fn dimension(&self) -> usize {
        self.bounds.len()
    }

    fn gene_bounds(&self) -> &[GeneBounds] {
        &self.bounds
    }

    /// The raw value rides in `j1` and `total`; the other terms stay zero so
    /// every cost consumer works unchanged.
    fn evaluate(&self, genes: &[f64]) -> CostBreakdown {
        let value = self.value(genes);
        CostBreakdown {
            j1: value,
            j2: 0.0,
            j3: 0.0,
            total: value,
            violated: false,
        }
    }
}
