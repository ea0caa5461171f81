//! Shared test support: an independent transcription of the path-cost model
//! used to cross-check the library, scripted RNGs for forcing exact draws
//! through the update rules, and an evaluation-counting objective wrapper.
//!
//! The oracle functions below are written from the cost definitions alone,
//! with index loops over raw arrays and no library calls, so the library and
//! the oracle can only agree by both being right. Frozen; do not refactor
//! them to share code with the crate.
#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};

use mstlbo::cost::CostBreakdown;
use mstlbo::objective::{GeneBounds, Objective};
use rand::RngCore;

/// Sum of segment lengths of `path`, each segment measured with the plain
/// three-term Euclidean formula.
pub fn oracle_length(path: &[[f64; 3]]) -> f64 {
    let mut total = 0.0;
    for l in 1..path.len() {
        let dx = path[l][0] - path[l - 1][0];
        let dy = path[l][1] - path[l - 1][1];
        let dz = path[l][2] - path[l - 1][2];
        total += (dx * dx + dy * dy + dz * dz).sqrt();
    }
    total
}

/// Mean over all (segment, obstacle) pairs of `max(1 - d / safe_radius, 0)`,
/// where `d` is the distance from the obstacle center to the segment
/// midpoint. Obstacles are `(center, safe_radius)` pairs.
pub fn oracle_obstacle(path: &[[f64; 3]], obstacles: &[([f64; 3], f64)]) -> f64 {
    let segments = path.len() - 1;
    if segments == 0 || obstacles.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for l in 1..path.len() {
        let mx = (path[l][0] + path[l - 1][0]) / 2.0;
        let my = (path[l][1] + path[l - 1][1]) / 2.0;
        let mz = (path[l][2] + path[l - 1][2]) / 2.0;
        for &(center, safe_radius) in obstacles {
            let dx = mx - center[0];
            let dy = my - center[1];
            let dz = mz - center[2];
            let d = (dx * dx + dy * dy + dz * dz).sqrt();
            let penalty = 1.0 - d / safe_radius;
            if penalty > 0.0 {
                sum += penalty;
            }
        }
    }
    sum / (segments as f64 * obstacles.len() as f64)
}

/// Per-segment-midpoint altitude penalty: zero inside `[z_min, z_max]`,
/// linear outside it, and `violation_cost` per at-or-below-ground midpoint.
/// Returns the summed penalty and whether any midpoint violated.
pub fn oracle_altitude(
    path: &[[f64; 3]],
    z_min: f64,
    z_max: f64,
    violation_cost: f64,
) -> (f64, bool) {
    let mut sum = 0.0;
    let mut violated = false;
    for l in 1..path.len() {
        let z = (path[l][2] + path[l - 1][2]) / 2.0;
        if z <= 0.0 {
            sum += violation_cost;
            violated = true;
        } else if z < z_min {
            sum += z_min - z;
        } else if z > z_max {
            sum += z - z_max;
        }
    }
    (sum, violated)
}

/// Weighted aggregate of the three terms, with `violation_cost` added once
/// more on top when any midpoint sits at or below ground.
pub fn oracle_total(
    path: &[[f64; 3]],
    obstacles: &[([f64; 3], f64)],
    z_min: f64,
    z_max: f64,
    beta: [f64; 3],
    violation_cost: f64,
) -> f64 {
    let j1 = oracle_length(path);
    let j2 = oracle_obstacle(path, obstacles);
    let (j3, violated) = oracle_altitude(path, z_min, z_max, violation_cost);
    let mut total = beta[0] * j1 + beta[1] * j2 + beta[2] * j3;
    if violated {
        total += violation_cost;
    }
    total
}

/// An RNG that replays a fixed sequence of `[0, 1)` unit draws, so tests can
/// force exact coefficients through the update rules. Values must be exactly
/// representable with at most 53 fraction bits (0.5, 0.25, ...) to survive
/// the round trip. Panics when the script runs out unless built with
/// [`ScriptRng::repeating`].
pub struct ScriptRng {
    values: Vec<f64>,
    next: usize,
    repeat_last: bool,
}

impl ScriptRng {
    pub fn new(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "script must contain at least one value");
        Self {
            values: values.to_vec(),
            next: 0,
            repeat_last: false,
        }
    }

    /// Yields `value` forever.
    pub fn repeating(value: f64) -> Self {
        Self {
            values: vec![value],
            next: 0,
            repeat_last: true,
        }
    }
}

impl RngCore for ScriptRng {
    fn next_u32(&mut self) -> u32 {
        panic!("scripted rng only supports unit f64 draws");
    }

    fn next_u64(&mut self) -> u64 {
        if self.next >= self.values.len() {
            assert!(self.repeat_last, "scripted rng ran out of values");
            self.next = self.values.len() - 1;
        }
        let u = self.values[self.next];
        self.next += 1;
        assert!((0.0..1.0).contains(&u), "scripted draw must lie in [0, 1)");
        // Unit f64 sampling takes the top 53 bits of next_u64 and scales by
        // 2^-53; placing round(u * 2^53) there reproduces u exactly.
        ((u * (1u64 << 53) as f64) as u64) << 11
    }

    fn fill_bytes(&mut self, _dest: &mut [u8]) {
        panic!("scripted rng only supports unit f64 draws");
    }
}

/// Wraps an objective and counts evaluations, for pinning down exactly how
/// many cost calls a run spends.
pub struct CountingObjective<O> {
    inner: O,
    calls: AtomicUsize,
}

impl<O> CountingObjective<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<O: Objective> Objective for CountingObjective<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn gene_bounds(&self) -> &[GeneBounds] {
        self.inner.gene_bounds()
    }

    fn evaluate(&self, genes: &[f64]) -> CostBreakdown {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(genes)
    }
}
