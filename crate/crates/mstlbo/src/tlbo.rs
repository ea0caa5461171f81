//! Classic teaching-learning-based optimization: population setup, the
//! teacher and learner phases with greedy acceptance, evaluation budgeting,
//! and the run loop shared by every variant.
//!
//! Determinism contract: a run draws from a single `ChaCha8Rng` seeded with
//! `config.seed`. Draw order is fixed as (1) population genes,
//! candidate-major and gene-minor, (2) the chaos start value when the
//! variant uses one, (3) per-iteration draws in candidate order, each update
//! drawing its teaching factor before its step coefficients. Equal seed and
//! config therefore reproduce a run bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mstlbo::{self, ChaosState};
use crate::objective::{GeneBounds, Objective};
use crate::scenario::Candidate;

/// Which update rules drive the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "tlbo")]
    Tlbo,
    #[serde(rename = "mstlbo")]
    MsTlbo,
    #[serde(rename = "random_search")]
    RandomSearch,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Tlbo, Variant::MsTlbo, Variant::RandomSearch];

    /// Stable identifier used in config files, CLI arguments, and artifact
    /// file names.
    pub fn token(self) -> &'static str {
        match self {
            Variant::Tlbo => "tlbo",
            Variant::MsTlbo => "mstlbo",
            Variant::RandomSearch => "random_search",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown variant `{0}` (expected tlbo, mstlbo, or random_search)")]
pub struct ParseVariantError(String);

impl FromStr for Variant {
    type Err = ParseVariantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.token() == s)
            .ok_or_else(|| ParseVariantError(s.to_string()))
    }
}

/// How the multi-subject learner phase pairs candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerStyle {
    /// Each learner exchanges with one random partner.
    #[default]
    TwoSolution,
    /// Each learner steps along the difference of two random classmates.
    Classic,
}

/// How genes are grouped into subjects for the multi-subject learner phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubjectLayoutKind {
    /// One subject per coordinate axis: all x genes, all y genes, all z
    /// genes.
    #[default]
    Axis,
    /// One subject per waypoint: consecutive (x, y, z) triples.
    PerWaypoint,
}

/// Run parameters shared by every variant.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Population (class) size.
    pub population: usize,
    /// Evaluation budget; a run stops once exactly this many cost
    /// evaluations have been spent.
    pub max_fes: usize,
    pub seed: u64,
    pub variant: Variant,
    /// Draw one shared step coefficient per update instead of one per gene.
    pub scalar_r: bool,
    /// Subject grouping for the multi-subject learner phase.
    pub subject_layout: SubjectLayoutKind,
    /// When set, overrides `subject_layout` with a strided grouping into
    /// this many subjects.
    pub number_of_subject: Option<usize>,
    /// Teacher-mutation step size as a fraction of each gene's range.
    pub mutation_scale: f64,
    /// Pairing rule for the multi-subject learner phase.
    pub learner_style: LearnerStyle,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population: 30,
            max_fes: 20_000,
            seed: 0,
            variant: Variant::MsTlbo,
            scalar_r: false,
            subject_layout: SubjectLayoutKind::Axis,
            number_of_subject: None,
            mutation_scale: 0.1,
            learner_style: LearnerStyle::TwoSolution,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("population must be at least 4, got {0}")]
    PopulationTooSmall(usize),
    #[error("max_fes ({max_fes}) must cover at least the initial population ({population})")]
    BudgetTooSmall { max_fes: usize, population: usize },
    #[error("mutation_scale must be finite and positive")]
    BadMutationScale,
    #[error("objective dimension must be at least 1")]
    EmptyDimension,
    #[error("subject count {requested} does not fit dimension {dimension}")]
    SubjectCount { requested: usize, dimension: usize },
}

impl OptimizerConfig {
    /// Checks the configuration against a concrete objective dimension,
    /// including that the subject layout can be built when the variant
    /// needs one.
    pub fn validate(&self, dimension: usize) -> Result<(), ConfigError> {
        if dimension == 0 {
            return Err(ConfigError::EmptyDimension);
        }
        if self.population < 4 {
            return Err(ConfigError::PopulationTooSmall(self.population));
        }
        if self.max_fes < self.population {
            return Err(ConfigError::BudgetTooSmall {
                max_fes: self.max_fes,
                population: self.population,
            });
        }
        if !self.mutation_scale.is_finite() || self.mutation_scale <= 0.0 {
            return Err(ConfigError::BadMutationScale);
        }
        if self.variant == Variant::MsTlbo {
            mstlbo::build_subject_layout(self, dimension)?;
        }
        Ok(())
    }
}

/// One per-iteration record of the running best and the population mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    /// Cumulative cost evaluations when the row was recorded.
    pub fes: usize,
    pub best_cost: f64,
    pub mean_cost: f64,
}

/// Best and mean cost per outer iteration, indexed by cumulative
/// evaluations. Row 0 describes the freshly initialized population.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    rows: Vec<TraceRow>,
}

impl ConvergenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// True when `best_cost` never increases from row to row.
    pub fn best_cost_is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|pair| pair[1].best_cost <= pair[0].best_cost)
    }

    /// True when `fes` never decreases from row to row.
    pub fn fes_is_non_decreasing(&self) -> bool {
        self.rows.windows(2).all(|pair| pair[1].fes >= pair[0].fes)
    }
}

/// Everything a run mutates: the class, the running best, the spent budget,
/// and the RNG and chaos streams.
pub struct OptimizerState {
    pub population: Vec<Candidate>,
    /// Best candidate seen so far; always one of the cheapest the run has
    /// evaluated, never worse than any population member.
    pub best: Candidate,
    /// Cost evaluations spent so far.
    pub fes: usize,
    pub rng: ChaCha8Rng,
    /// Present only for the variant that mutates the teacher chaotically.
    pub chaos: Option<ChaosState>,
    pub trace: ConvergenceTrace,
}

impl OptimizerState {
    /// Appends a trace row describing the current population.
    pub fn record_trace_row(&mut self, iteration: usize) {
        let mean = self.population.iter().map(Candidate::total).sum::<f64>()
            / self.population.len() as f64;
        self.trace.push(TraceRow {
            iteration,
            fes: self.fes,
            best_cost: self.best.total(),
            mean_cost: mean,
        });
    }
}

/// Index of the first cheapest candidate.
pub(crate) fn best_index(population: &[Candidate]) -> usize {
    let mut index = 0;
    for (i, candidate) in population.iter().enumerate().skip(1) {
        if candidate.total() < population[index].total() {
            index = i;
        }
    }
    index
}

/// Maps a unit draw into `bounds`: 0 lands on the lower bound, 1 on the
/// upper.
pub fn sample_gene(unit: f64, bounds: GeneBounds) -> f64 {
    bounds.lo + unit * (bounds.hi - bounds.lo)
}

/// Draws `config.population` candidates uniformly inside the per-gene
/// bounds, evaluates them all (spending that many evaluations), and points
/// `best` at the cheapest. The chaos stream is initialized after the
/// population draws, and only for the variant that uses it.
pub fn init_population<O: Objective>(
    objective: &O,
    config: &OptimizerConfig,
) -> Result<OptimizerState, ConfigError> {
    config.validate(objective.dimension())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bounds = objective.gene_bounds();
    let mut population = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let genes: Vec<f64> = bounds
            .iter()
            .map(|&b| sample_gene(rng.random(), b))
            .collect();
        let mut candidate = Candidate::unevaluated(genes);
        candidate.cost = Some(objective.evaluate(&candidate.genes));
        population.push(candidate);
    }
    let chaos = (config.variant == Variant::MsTlbo).then(|| ChaosState::init(&mut rng));
    let best = population[best_index(&population)].clone();
    Ok(OptimizerState {
        fes: population.len(),
        population,
        best,
        rng,
        chaos,
        trace: ConvergenceTrace::new(),
    })
}

/// Gene-wise arithmetic mean of the class. Panics on an empty population.
pub fn class_mean(population: &[Candidate]) -> Vec<f64> {
    let mut mean = vec![0.0; population[0].genes.len()];
    for candidate in population {
        for (m, g) in mean.iter_mut().zip(&candidate.genes) {
            *m += g;
        }
    }
    let n = population.len() as f64;
    for m in &mut mean {
        *m /= n;
    }
    mean
}

/// Pulls `candidate` toward the teacher and away from the scaled class
/// mean: each gene moves by `r * (teacher - tf * mean)` where the teaching
/// factor `tf` is 1 or 2 with equal probability. The factor is drawn once
/// per update, then `r` per gene (or one shared `r` when `scalar_r`).
/// Clamped to bounds, returned unevaluated.
pub fn teacher_phase_step<R: Rng + ?Sized>(
    candidate: &Candidate,
    teacher: &[f64],
    mean: &[f64],
    rng: &mut R,
    scalar_r: bool,
    bounds: &[GeneBounds],
) -> Candidate {
    let tf = (1.0 + rng.random::<f64>()).round();
    let shared_r = scalar_r.then(|| rng.random::<f64>());
    let genes = candidate
        .genes
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let r = shared_r.unwrap_or_else(|| rng.random());
            bounds[k].clamp(g + r * (teacher[k] - tf * mean[k]))
        })
        .collect();
    Candidate::unevaluated(genes)
}

/// Moves `candidate` along the difference of two classmates, oriented
/// toward the better one: each gene moves by `r * (first - second)` when
/// `first` is cheaper and by `r * (second - first)` otherwise. Clamped to
/// bounds, returned unevaluated.
pub fn learner_phase_step<R: Rng + ?Sized>(
    candidate: &Candidate,
    first: &Candidate,
    second: &Candidate,
    rng: &mut R,
    scalar_r: bool,
    bounds: &[GeneBounds],
) -> Candidate {
    let first_better = first.total() < second.total();
    let shared_r = scalar_r.then(|| rng.random::<f64>());
    let genes = candidate
        .genes
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let r = shared_r.unwrap_or_else(|| rng.random());
            let diff = if first_better {
                first.genes[k] - second.genes[k]
            } else {
                second.genes[k] - first.genes[k]
            };
            bounds[k].clamp(g + r * diff)
        })
        .collect();
    Candidate::unevaluated(genes)
}

/// What a budgeted acceptance attempt did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted,
    Rejected,
    /// The budget was already spent; the proposal was dropped unevaluated.
    BudgetExhausted,
}

/// Evaluates `proposed` (spending one evaluation) and keeps it only when it
/// strictly beats the incumbent at `index`; ties keep the incumbent. When
/// the budget is already spent, nothing is evaluated.
pub fn greedy_accept<O: Objective>(
    state: &mut OptimizerState,
    index: usize,
    mut proposed: Candidate,
    objective: &O,
    max_fes: usize,
) -> StepOutcome {
    if state.fes >= max_fes {
        return StepOutcome::BudgetExhausted;
    }
    proposed.cost = Some(objective.evaluate(&proposed.genes));
    state.fes += 1;
    if proposed.total() < state.population[index].total() {
        if proposed.total() < state.best.total() {
            state.best = proposed.clone();
        }
        state.population[index] = proposed;
        StepOutcome::Accepted
    } else {
        StepOutcome::Rejected
    }
}

/// Uniform index in `0..n` different from `exclude`.
pub(crate) fn draw_partner<R: Rng + ?Sized>(rng: &mut R, n: usize, exclude: usize) -> usize {
    loop {
        let j = rng.random_range(0..n);
        if j != exclude {
            return j;
        }
    }
}

/// Two distinct uniform indices in `0..n`, both different from `exclude`.
pub(crate) fn draw_distinct_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    exclude: usize,
) -> (usize, usize) {
    let first = draw_partner(rng, n, exclude);
    loop {
        let second = rng.random_range(0..n);
        if second != exclude && second != first {
            return (first, second);
        }
    }
}

/// One classic iteration: a teacher sweep then a learner sweep, each with
/// greedy acceptance. The class mean and teacher genes are frozen at the
/// start of the teacher sweep. Returns early the moment the budget runs
/// out.
pub fn tlbo_iteration<O: Objective>(
    state: &mut OptimizerState,
    objective: &O,
    config: &OptimizerConfig,
) {
    let n = state.population.len();
    let bounds = objective.gene_bounds();
    let mean = class_mean(&state.population);
    let teacher = state.best.genes.clone();
    for i in 0..n {
        if state.fes >= config.max_fes {
            return;
        }
        let proposed = teacher_phase_step(
            &state.population[i],
            &teacher,
            &mean,
            &mut state.rng,
            config.scalar_r,
            bounds,
        );
        if greedy_accept(state, i, proposed, objective, config.max_fes)
            == StepOutcome::BudgetExhausted
        {
            return;
        }
    }
    for i in 0..n {
        if state.fes >= config.max_fes {
            return;
        }
        let (m, k) = draw_distinct_pair(&mut state.rng, n, i);
        let proposed = learner_phase_step(
            &state.population[i],
            &state.population[m],
            &state.population[k],
            &mut state.rng,
            config.scalar_r,
            bounds,
        );
        if greedy_accept(state, i, proposed, objective, config.max_fes)
            == StepOutcome::BudgetExhausted
        {
            return;
        }
    }
}

/// Baseline sweep: every slot proposes a fresh uniform sample under the same
/// greedy acceptance, which keeps the running best exactly the minimum over
/// all samples ever drawn.
fn random_search_iteration<O: Objective>(
    state: &mut OptimizerState,
    objective: &O,
    config: &OptimizerConfig,
) {
    let n = state.population.len();
    let bounds = objective.gene_bounds();
    for i in 0..n {
        if state.fes >= config.max_fes {
            return;
        }
        let genes: Vec<f64> = bounds
            .iter()
            .map(|&b| sample_gene(state.rng.random(), b))
            .collect();
        if greedy_accept(state, i, Candidate::unevaluated(genes), objective, config.max_fes)
            == StepOutcome::BudgetExhausted
        {
            return;
        }
    }
}

/// A finished run: the champion, its convergence trace, and the final class.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best: Candidate,
    pub trace: ConvergenceTrace,
    pub population: Vec<Candidate>,
    /// Evaluations actually spent; always equals the configured budget.
    pub fes: usize,
    /// Outer iterations executed after initialization.
    pub iterations: usize,
}

/// Runs the configured variant until the evaluation budget is spent
/// exactly. The trace holds one row for the initial population and one per
/// outer iteration, including a final partial one if the budget ends
/// mid-sweep.
pub fn run<O: Objective>(objective: &O, config: &OptimizerConfig) -> Result<RunOutcome, ConfigError> {
    config.validate(objective.dimension())?;
    let layout = match config.variant {
        Variant::MsTlbo => Some(mstlbo::build_subject_layout(config, objective.dimension())?),
        _ => None,
    };
    let mut state = init_population(objective, config)?;
    state.record_trace_row(0);
    let mut iterations = 0;
    while state.fes < config.max_fes {
        iterations += 1;
        match config.variant {
            Variant::Tlbo => tlbo_iteration(&mut state, objective, config),
            Variant::MsTlbo => mstlbo::mstlbo_iteration(
                &mut state,
                objective,
                config,
                layout.as_ref().expect("layout built for this variant"),
            ),
            Variant::RandomSearch => random_search_iteration(&mut state, objective, config),
        }
        state.record_trace_row(iterations);
    }
    Ok(RunOutcome {
        best: state.best,
        trace: state.trace,
        population: state.population,
        fes: state.fes,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchfn::BenchFunction;
    use approx::assert_abs_diff_eq;

    fn evaluated(genes: Vec<f64>, total: f64) -> Candidate {
        let mut candidate = Candidate::unevaluated(genes);
        candidate.cost = Some(crate::cost::CostBreakdown {
            j1: total,
            j2: 0.0,
            j3: 0.0,
            total,
            violated: false,
        });
        candidate
    }

    #[test]
    fn variant_tokens_round_trip() {
        for variant in Variant::ALL {
            assert_eq!(variant.token().parse::<Variant>().unwrap(), variant);
        }
        assert!("simulated_annealing".parse::<Variant>().is_err());
    }

    #[test]
    fn config_validation_catches_bad_parameters() {
        let base = OptimizerConfig::default();
        base.validate(15).unwrap();
        let small = OptimizerConfig {
            population: 3,
            ..base.clone()
        };
        assert_eq!(small.validate(15), Err(ConfigError::PopulationTooSmall(3)));
        let tight = OptimizerConfig {
            max_fes: 29,
            ..base.clone()
        };
        assert_eq!(
            tight.validate(15),
            Err(ConfigError::BudgetTooSmall {
                max_fes: 29,
                population: 30
            })
        );
        let flat = OptimizerConfig {
            mutation_scale: 0.0,
            ..base.clone()
        };
        assert_eq!(flat.validate(15), Err(ConfigError::BadMutationScale));
        assert_eq!(base.validate(0), Err(ConfigError::EmptyDimension));
    }

    #[test]
    fn class_mean_averages_each_gene() {
        let population = vec![
            evaluated(vec![1.0, 10.0], 0.0),
            evaluated(vec![3.0, 20.0], 0.0),
            evaluated(vec![5.0, 30.0], 0.0),
        ];
        assert_eq!(class_mean(&population), vec![3.0, 20.0]);
    }

    #[test]
    fn init_population_draws_within_bounds_and_spends_budget() {
        let function = BenchFunction::sphere(6);
        let config = OptimizerConfig {
            population: 10,
            max_fes: 100,
            variant: Variant::Tlbo,
            ..OptimizerConfig::default()
        };
        let state = init_population(&function, &config).unwrap();
        assert_eq!(state.population.len(), 10);
        assert_eq!(state.fes, 10);
        assert!(state.chaos.is_none());
        let best = state.best.total();
        for candidate in &state.population {
            assert!(candidate.cost.is_some());
            assert!(candidate.total() >= best);
            for (gene, bounds) in candidate.genes.iter().zip(function.gene_bounds()) {
                assert!(*gene >= bounds.lo && *gene <= bounds.hi);
            }
        }
    }

    #[test]
    fn init_population_is_seed_deterministic() {
        let function = BenchFunction::sphere(4);
        let config = OptimizerConfig {
            population: 8,
            max_fes: 80,
            seed: 42,
            variant: Variant::MsTlbo,
            ..OptimizerConfig::default()
        };
        let a = init_population(&function, &config).unwrap();
        let b = init_population(&function, &config).unwrap();
        assert_eq!(a.population, b.population);
        assert_eq!(a.chaos, b.chaos);
    }

    #[test]
    fn teacher_step_matches_hand_computation() {
        // Scripted draws: tf = round(1 + 0.25) = 1, then r = 0.5.
        // 2 + 0.5 * (5 - 1 * 3) = 3.
        let mut rng = crate::test_support::script(&[0.25, 0.5]);
        let candidate = evaluated(vec![2.0], 0.0);
        let bounds = [GeneBounds::new(-100.0, 100.0)];
        let stepped = teacher_phase_step(&candidate, &[5.0], &[3.0], &mut rng, false, &bounds);
        assert_eq!(stepped.genes, vec![3.0]);
        assert!(stepped.cost.is_none());
    }

    #[test]
    fn teacher_step_with_tf_two() {
        // tf = round(1 + 0.75) = 2, r = 0.5: 2 + 0.5 * (5 - 2 * 3) = 1.5.
        let mut rng = crate::test_support::script(&[0.75, 0.5]);
        let candidate = evaluated(vec![2.0], 0.0);
        let bounds = [GeneBounds::new(-100.0, 100.0)];
        let stepped = teacher_phase_step(&candidate, &[5.0], &[3.0], &mut rng, false, &bounds);
        assert_eq!(stepped.genes, vec![1.5]);
    }

    #[test]
    fn teacher_step_clamps_to_bounds() {
        let mut rng = crate::test_support::script(&[0.25, 0.5]);
        let candidate = evaluated(vec![2.0], 0.0);
        let bounds = [GeneBounds::new(0.0, 2.5)];
        let stepped = teacher_phase_step(&candidate, &[5.0], &[3.0], &mut rng, false, &bounds);
        assert_eq!(stepped.genes, vec![2.5]);
    }

    #[test]
    fn learner_step_moves_toward_the_better_classmate() {
        // r = 0.5, first (cost 1) beats second (cost 4):
        // 1 + 0.5 * (4 - 2) = 2.
        let mut rng = crate::test_support::script(&[0.5]);
        let candidate = evaluated(vec![1.0], 9.0);
        let first = evaluated(vec![4.0], 1.0);
        let second = evaluated(vec![2.0], 4.0);
        let bounds = [GeneBounds::new(-100.0, 100.0)];
        let stepped = learner_phase_step(&candidate, &first, &second, &mut rng, false, &bounds);
        assert_eq!(stepped.genes, vec![2.0]);

        // Swapping the arguments flips the sign of the difference.
        let mut rng = crate::test_support::script(&[0.5]);
        let flipped = learner_phase_step(&candidate, &second, &first, &mut rng, false, &bounds);
        assert_eq!(flipped.genes, vec![2.0]);
    }

    #[test]
    fn scalar_r_uses_one_draw_for_all_genes() {
        let mut rng = crate::test_support::script(&[0.25, 0.5]);
        let candidate = evaluated(vec![0.0, 0.0, 0.0], 0.0);
        let bounds = [GeneBounds::new(-100.0, 100.0); 3];
        let stepped =
            teacher_phase_step(&candidate, &[2.0, 4.0, 6.0], &[0.0; 3], &mut rng, true, &bounds);
        assert_eq!(stepped.genes, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn greedy_accept_keeps_incumbent_on_tie() {
        let function = BenchFunction::sphere(2);
        let config = OptimizerConfig {
            population: 4,
            max_fes: 100,
            variant: Variant::Tlbo,
            ..OptimizerConfig::default()
        };
        let mut state = init_population(&function, &config).unwrap();
        let incumbent = state.population[0].clone();
        let tie = Candidate::unevaluated(incumbent.genes.clone());
        let fes_before = state.fes;
        assert_eq!(
            greedy_accept(&mut state, 0, tie, &function, config.max_fes),
            StepOutcome::Rejected
        );
        assert_eq!(state.fes, fes_before + 1);
        assert_eq!(state.population[0], incumbent);

        let better = Candidate::unevaluated(vec![0.0, 0.0]);
        assert_eq!(
            greedy_accept(&mut state, 0, better, &function, config.max_fes),
            StepOutcome::Accepted
        );
        assert_eq!(state.population[0].total(), 0.0);
        assert_eq!(state.best.total(), 0.0);
    }

    #[test]
    fn greedy_accept_stops_at_the_budget() {
        let function = BenchFunction::sphere(2);
        let config = OptimizerConfig {
            population: 4,
            max_fes: 4,
            variant: Variant::Tlbo,
            ..OptimizerConfig::default()
        };
        let mut state = init_population(&function, &config).unwrap();
        assert_eq!(state.fes, 4);
        let proposal = Candidate::unevaluated(vec![0.0, 0.0]);
        assert_eq!(
            greedy_accept(&mut state, 0, proposal, &function, config.max_fes),
            StepOutcome::BudgetExhausted
        );
        assert_eq!(state.fes, 4);
        assert!(state.population[0].total() > 0.0);
    }

    #[test]
    fn draw_pair_respects_exclusions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let i = rng.random_range(0..10);
            let (m, k) = draw_distinct_pair(&mut rng, 10, i);
            assert_ne!(m, i);
            assert_ne!(k, i);
            assert_ne!(m, k);
        }
    }

    #[test]
    fn run_spends_the_budget_exactly_for_every_variant() {
        let function = BenchFunction::sphere(5);
        for variant in Variant::ALL {
            // 157 is deliberately not a multiple of the population, so the
            // final iteration is partial.
            let config = OptimizerConfig {
                population: 10,
                max_fes: 157,
                seed: 3,
                variant,
                ..OptimizerConfig::default()
            };
            let outcome = run(&function, &config).unwrap();
            assert_eq!(outcome.fes, 157, "variant {variant}");
            assert_eq!(outcome.trace.last().unwrap().fes, 157);
            assert!(outcome.trace.best_cost_is_monotone());
            assert!(outcome.trace.fes_is_non_decreasing());
            assert_eq!(outcome.trace.len(), outcome.iterations + 1);
        }
    }

    #[test]
    fn run_is_deterministic_per_seed() {
        let function = BenchFunction::rastrigin(4);
        for variant in Variant::ALL {
            let config = OptimizerConfig {
                population: 8,
                max_fes: 400,
                seed: 11,
                variant,
                ..OptimizerConfig::default()
            };
            let a = run(&function, &config).unwrap();
            let b = run(&function, &config).unwrap();
            assert_eq!(a.best, b.best, "variant {variant}");
            assert_eq!(a.trace, b.trace);
            assert_eq!(a.population, b.population);
        }
    }

    #[test]
    fn different_seeds_give_different_runs() {
        let function = BenchFunction::sphere(5);
        let config_a = OptimizerConfig {
            max_fes: 600,
            seed: 0,
            ..OptimizerConfig::default()
        };
        let config_b = OptimizerConfig {
            seed: 1,
            ..config_a.clone()
        };
        let a = run(&function, &config_a).unwrap();
        let b = run(&function, &config_b).unwrap();
        assert_ne!(a.best.genes, b.best.genes);
    }

    #[test]
    fn best_never_worse_than_population_minimum() {
        let function = BenchFunction::rastrigin(6);
        for variant in Variant::ALL {
            let config = OptimizerConfig {
                population: 12,
                max_fes: 500,
                seed: 9,
                variant,
                ..OptimizerConfig::default()
            };
            let outcome = run(&function, &config).unwrap();
            let population_min = outcome
                .population
                .iter()
                .map(Candidate::total)
                .fold(f64::INFINITY, f64::min);
            assert!(outcome.best.total() <= population_min, "variant {variant}");
        }
    }

    #[test]
    fn tlbo_improves_on_the_initial_population() {
        let function = BenchFunction::sphere(10);
        let config = OptimizerConfig {
            max_fes: 6_000,
            seed: 1,
            variant: Variant::Tlbo,
            ..OptimizerConfig::default()
        };
        let outcome = run(&function, &config).unwrap();
        let initial_best = outcome.trace.rows()[0].best_cost;
        assert!(outcome.best.total() < initial_best / 100.0);
    }

    #[test]
    fn mean_cost_tracks_the_population() {
        let function = BenchFunction::sphere(3);
        let config = OptimizerConfig {
            population: 6,
            max_fes: 60,
            variant: Variant::Tlbo,
            ..OptimizerConfig::default()
        };
        let outcome = run(&function, &config).unwrap();
        let last = outcome.trace.last().unwrap();
        let mean = outcome.population.iter().map(Candidate::total).sum::<f64>() / 6.0;
        assert_abs_diff_eq!(last.mean_cost, mean, epsilon = 1e-12);
    }
}
