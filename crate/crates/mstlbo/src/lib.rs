//! Waypoint path planning with teaching-learning-based optimization.
//!
//! The crate plans 3D paths as fixed-length waypoint sequences between a
//! start and a goal, scored by a three-term cost (length, obstacle
//! clearance, altitude corridor). Three optimizer variants minimize that
//! cost under a shared evaluation budget:
//!
//! * [`Variant::Tlbo`]: the classic two-phase teacher/learner scheme;
//! * [`Variant::MsTlbo`]: the enhanced scheme with chaotic teacher
//!   mutation, elite replacement, and a per-subject learner phase;
//! * [`Variant::RandomSearch`]: uniform sampling as a baseline.
//!
//! Runs are deterministic per seed, and the [`harness`] module executes
//! seeded batches and writes comparable trace artifacts.
//!
//! ```
//! use mstlbo::{run, CostWeights, OptimizerConfig, PathObjective, Scenario};
//!
//! let scenario = Scenario::canonical();
//! let objective = PathObjective::new(&scenario, CostWeights::default());
//! let config = OptimizerConfig {
//!     max_fes: 3_000,
//!     ..OptimizerConfig::default()
//! };
//! let outcome = run(&objective, &config).unwrap();
//!
//! assert_eq!(outcome.fes, 3_000);
//! assert!(outcome.trace.best_cost_is_monotone());
//! let path = scenario.decode(&outcome.best.genes).unwrap();
//! assert_eq!(path.len(), scenario.num_interior_waypoints() + 2);
//! ```

pub mod benchfn;
pub mod cost;
pub mod harness;
pub mod mstlbo;
pub mod objective;
pub mod scenario;
pub mod tlbo;

pub use benchfn::BenchFunction;
pub use cost::{CostBreakdown, CostWeights};
pub use objective::{GeneBounds, Objective, PathObjective};
pub use scenario::{Candidate, Point3, Scenario, ScenarioError};
pub use tlbo::{
    run, ConvergenceTrace, LearnerStyle, OptimizerConfig, RunOutcome, SubjectLayoutKind, Variant,
};
