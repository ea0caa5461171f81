//! World model for waypoint planning: the operating volume, spherical
//! keep-out zones, fixed endpoints, and the translation between waypoint
//! paths and flat decision vectors.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::CostBreakdown;

/// Errors from loading or validating a scenario, or from translating between
/// waypoints and decision vectors.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to read scenario file {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse scenario JSON")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("expected {expected} interior waypoints, got {got}")]
    WaypointCount { expected: usize, got: usize },
    #[error("expected {expected} genes, got {got}")]
    GeneLength { expected: usize, got: usize },
}

impl ScenarioError {
    fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// A position in local metric coordinates; `z` is altitude above ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Euclidean distance to `other`.
    pub fn distance(self, other: Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(p: [f64; 3]) -> Self {
        Self::new(p[0], p[1], p[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

/// Midpoint of the segment from `a` to `b`. Obstacle clearance and altitude
/// penalties are both sampled at segment midpoints.
pub fn segment_midpoint(a: Point3, b: Point3) -> Point3 {
    Point3::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, (a.z + b.z) / 2.0)
}

/// A spherical keep-out zone; `safe_radius` is the physical extent plus the
/// required clearance margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub center: Point3,
    pub safe_radius: f64,
}

/// The operating volume plus the preferred altitude corridor
/// `[z_min, z_max]` inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub lower: Point3,
    pub upper: Point3,
    pub z_min: f64,
    pub z_max: f64,
}

/// A validated world model: bounds, obstacles, endpoints, and the number of
/// interior waypoints each candidate path carries.
///
/// Fields are private so that every reachable `Scenario` satisfies the
/// construction invariants (finite geometry, endpoints inside the volume and
/// clear of all obstacles, a sane altitude corridor).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    bounds: Bounds,
    obstacles: Vec<Obstacle>,
    start: Point3,
    goal: Point3,
    num_interior_waypoints: usize,
}

/// On-disk schema; `notes` is free-form provenance text and otherwise
/// ignored.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    #[allow(dead_code)]
    notes: Option<String>,
    bounds: Bounds,
    obstacles: Vec<Obstacle>,
    start: Point3,
    goal: Point3,
    num_interior_waypoints: usize,
}

const CANONICAL_JSON: &str = include_str!("../../../scenarios/canonical.json");

impl Scenario {
    /// Validates and builds a scenario. Every error names the offending
    /// field.
    pub fn new(
        bounds: Bounds,
        obstacles: Vec<Obstacle>,
        start: Point3,
        goal: Point3,
        num_interior_waypoints: usize,
    ) -> Result<Self, ScenarioError> {
        if !bounds.lower.is_finite() {
            return Err(ScenarioError::invalid("bounds.lower", "must be finite"));
        }
        if !bounds.upper.is_finite() {
            return Err(ScenarioError::invalid("bounds.upper", "must be finite"));
        }
        if bounds.lower.x >= bounds.upper.x
            || bounds.lower.y >= bounds.upper.y
            || bounds.lower.z >= bounds.upper.z
        {
            return Err(ScenarioError::invalid(
                "bounds",
                "lower must be strictly below upper on every axis",
            ));
        }
        if !bounds.z_min.is_finite() || bounds.z_min <= 0.0 {
            return Err(ScenarioError::invalid("bounds.z_min", "must be positive"));
        }
        if !bounds.z_max.is_finite() || bounds.z_max <= bounds.z_min {
            return Err(ScenarioError::invalid(
                "bounds.z_max",
                "must exceed z_min",
            ));
        }
        if bounds.z_min < bounds.lower.z || bounds.z_max > bounds.upper.z {
            return Err(ScenarioError::invalid(
                "bounds.z_max",
                "altitude corridor must lie inside the volume's z range",
            ));
        }
        for (i, obstacle) in obstacles.iter().enumerate() {
            if !obstacle.center.is_finite() {
                return Err(ScenarioError::invalid(
                    format!("obstacles[{i}].center"),
                    "must be finite",
                ));
            }
            if !obstacle.safe_radius.is_finite() || obstacle.safe_radius <= 0.0 {
                return Err(ScenarioError::invalid(
                    format!("obstacles[{i}].safe_radius"),
                    "must be positive",
                ));
            }
        }
        for (field, point) in [("start", start), ("goal", goal)] {
            if !point.is_finite() {
                return Err(ScenarioError::invalid(field, "must be finite"));
            }
            if !bounds.contains(point) {
                return Err(ScenarioError::invalid(
                    field,
                    "must lie inside the operating volume",
                ));
            }
            for (i, obstacle) in obstacles.iter().enumerate() {
                if point.distance(obstacle.center) < obstacle.safe_radius {
                    return Err(ScenarioError::invalid(
                        field,
                        format!("lies inside the safe radius of obstacles[{i}]"),
                    ));
                }
            }
        }
        if start == goal {
            return Err(ScenarioError::invalid("goal", "coincides with start"));
        }
        if num_interior_waypoints == 0 {
            return Err(ScenarioError::invalid(
                "num_interior_waypoints",
                "must be at least 1",
            ));
        }
        Ok(Self {
            bounds,
            obstacles,
            start,
            goal,
            num_interior_waypoints,
        })
    }

    /// Parses and validates a scenario from JSON text.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        Self::new(
            file.bounds,
            file.obstacles,
            file.start,
            file.goal,
            file.num_interior_waypoints,
        )
    }

    /// Loads and validates a scenario from a JSON file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// The bundled reference scenario used by the examples and the test
    /// suite: a 90.5 x 50.5 x 20 m volume with six spherical obstacles,
    /// three of which block the straight start-goal line.
    pub fn canonical() -> Self {
        Self::from_json(CANONICAL_JSON).expect("bundled scenario is valid")
    }

    /// The canonical scenario's raw JSON text, for writing scenario files
    /// in examples and tests.
    pub fn canonical_json() -> &'static str {
        CANONICAL_JSON
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn start(&self) -> Point3 {
        self.start
    }

    pub fn goal(&self) -> Point3 {
        self.goal
    }

    /// Number of free waypoints between the fixed endpoints.
    pub fn num_interior_waypoints(&self) -> usize {
        self.num_interior_waypoints
    }

    /// Decision-vector length: three genes per interior waypoint.
    pub fn dimension(&self) -> usize {
        3 * self.num_interior_waypoints
    }

    /// A copy with every obstacle removed; useful as a sanity baseline where
    /// near-straight paths are optimal.
    pub fn without_obstacles(&self) -> Self {
        Self {
            obstacles: Vec::new(),
            ..self.clone()
        }
    }

    /// Flattens interior waypoints into a decision vector
    /// `[x1, y1, z1, x2, ...]`.
    pub fn encode(&self, waypoints: &[Point3]) -> Result<Vec<f64>, ScenarioError> {
        if waypoints.len() != self.num_interior_waypoints {
            return Err(ScenarioError::WaypointCount {
                expected: self.num_interior_waypoints,
                got: waypoints.len(),
            });
        }
        Ok(waypoints
            .iter()
            .flat_map(|&p| <[f64; 3]>::from(p))
            .collect())
    }

    /// Expands a decision vector into the full path from start to goal.
    pub fn decode(&self, genes: &[f64]) -> Result<Vec<Point3>, ScenarioError> {
        if genes.len() != self.dimension() {
            return Err(ScenarioError::GeneLength {
                expected: self.dimension(),
                got: genes.len(),
            });
        }
        let mut path = Vec::with_capacity(self.num_interior_waypoints + 2);
        path.push(self.start);
        for waypoint in genes.chunks_exact(3) {
            path.push(Point3::new(waypoint[0], waypoint[1], waypoint[2]));
        }
        path.push(self.goal);
        Ok(path)
    }
}

impl Bounds {
    /// Whether `point` lies inside the volume, boundary included.
    pub fn contains(&self, point: Point3) -> bool {
        (self.lower.x..=self.upper.x).contains(&point.x)
            && (self.lower.y..=self.upper.y).contains(&point.y)
            && (self.lower.z..=self.upper.z).contains(&point.z)
    }
}

/// One member of the optimizer's population: a decision vector plus its cost
/// once evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub genes: Vec<f64>,
    pub cost: Option<CostBreakdown>,
}

impl Candidate {
    pub fn unevaluated(genes: Vec<f64>) -> Self {
        Self { genes, cost: None }
    }

    /// Aggregate cost. Panics when the candidate has not been evaluated;
    /// the optimizer only compares evaluated candidates.
    pub fn total(&self) -> f64 {
        self.breakdown().total
    }

    /// Full cost breakdown. Panics when the candidate has not been
    /// evaluated.
    pub fn breakdown(&self) -> &CostBreakdown {
        self.cost.as_ref().expect("candidate has been evaluated")
    }
}
