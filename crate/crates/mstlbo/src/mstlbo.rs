//! Enhancements layered on the classic loop: chaotic mutation of the
//! teacher, elite replacement of the worst learner, and the per-subject
//! learner phase.

use rand::Rng;

use crate::objective::{GeneBounds, Objective};
use crate::scenario::Candidate;
use crate::tlbo::{
    draw_distinct_pair, draw_partner, greedy_accept, ConfigError, LearnerStyle, OptimizerConfig,
    OptimizerState, StepOutcome, SubjectLayoutKind,
};

/// Logistic-map state driving the teacher mutation offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosState {
    x: f64,
}

impl ChaosState {
    /// Wraps a value in `[0, 1]`.
    pub fn new(x: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&x),
            "chaos value must lie in [0, 1], got {x}"
        );
        Self { x }
    }

    /// Draws a start value in (0.01, 0.99), rejecting the map's fixed and
    /// short-period points (0.25, 0.5, 0.75) so the sequence never
    /// collapses.
    pub fn init<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = 0.01 + 0.98 * rng.random::<f64>();
            let near_degenerate = [0.25, 0.5, 0.75]
                .iter()
                .any(|p| (x - p).abs() <= 1e-6);
            if x > 0.01 && !near_degenerate {
                return Self { x };
            }
        }
    }

    /// One logistic-map update `x' = 4 x (1 - x)`.
    #[must_use]
    pub fn step(self) -> Self {
        Self {
            x: 4.0 * self.x * (1.0 - self.x),
        }
    }

    /// Current value in `[0, 1]`.
    pub fn value(self) -> f64 {
        self.x
    }
}

/// Probability that a teacher gene mutates: 1 with the budget untouched,
/// decaying linearly to 0 as evaluations are spent.
pub fn mutation_probability(fes: usize, max_fes: usize) -> f64 {
    assert!(
        max_fes > 0 && fes <= max_fes,
        "fes must lie in 0..=max_fes"
    );
    1.0 - fes as f64 / max_fes as f64
}

/// Maps a chaos value to a signed unit offset in `[-1, 1]`.
pub fn mutation_offset(chaos: ChaosState) -> f64 {
    2.0 * chaos.value() - 1.0
}

/// Perturbs the teacher gene-wise: each gene mutates with the current decay
/// probability (one gate draw per gene). A mutating gene advances the chaos
/// stream once and moves by the resulting offset scaled by `mutation_scale`
/// of that gene's range; others are copied. Clamped to bounds, returned
/// unevaluated.
#[allow(clippy::too_many_arguments)]
pub fn mutate_teacher<R: Rng + ?Sized>(
    teacher: &Candidate,
    chaos: &mut ChaosState,
    fes: usize,
    max_fes: usize,
    rng: &mut R,
    bounds: &[GeneBounds],
    mutation_scale: f64,
) -> Candidate {
    let mu = mutation_probability(fes, max_fes);
    let genes = teacher
        .genes
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            if rng.random::<f64>() < mu {
                *chaos = chaos.step();
                let offset = mutation_offset(*chaos) * mutation_scale * bounds[k].width();
                bounds[k].clamp(g + offset)
            } else {
                g
            }
        })
        .collect();
    Candidate::unevaluated(genes)
}

/// Evaluates `proposed` (spending one evaluation) and swaps it for the worst
/// learner when strictly better; ties keep the class unchanged. The budget
/// gate mirrors greedy acceptance.
pub fn elite_replace_worst<O: Objective>(
    state: &mut OptimizerState,
    mut proposed: Candidate,
    objective: &O,
    max_fes: usize,
) -> StepOutcome {
    if state.fes >= max_fes {
        return StepOutcome::BudgetExhausted;
    }
    proposed.cost = Some(objective.evaluate(&proposed.genes));
    state.fes += 1;
    let worst = worst_index(&state.population);
    if proposed.total() < state.population[worst].total() {
        if proposed.total() < state.best.total() {
            state.best = proposed.clone();
        }
        state.population[worst] = proposed;
        StepOutcome::Accepted
    } else {
        StepOutcome::Rejected
    }
}

/// Index of the first most expensive candidate.
fn worst_index(population: &[Candidate]) -> usize {
    let mut index = 0;
    for (i, candidate) in population.iter().enumerate().skip(1) {
        if candidate.total() > population[index].total() {
            index = i;
        }
    }
    index
}

/// A partition of gene indices into subjects that the learner phase updates
/// independently.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectLayout {
    subjects: Vec<Vec<usize>>,
}

impl SubjectLayout {
    /// Subject `j` takes every gene index congruent to `j` modulo `count`.
    /// With 3-gene waypoints and a count of 3 this groups all x, all y, and
    /// all z genes.
    pub fn strided(dimension: usize, count: usize) -> Result<Self, ConfigError> {
        if count == 0 || count > dimension {
            return Err(ConfigError::SubjectCount {
                requested: count,
                dimension,
            });
        }
        let mut subjects = vec![Vec::new(); count];
        for k in 0..dimension {
            subjects[k % count].push(k);
        }
        Ok(Self { subjects })
    }

    /// Consecutive runs of `chunk` genes (the last may be shorter). With
    /// 3-gene waypoints and a chunk of 3, each waypoint gets its own
    /// subject.
    pub fn chunked(dimension: usize, chunk: usize) -> Result<Self, ConfigError> {
        if chunk == 0 || chunk > dimension {
            return Err(ConfigError::SubjectCount {
                requested: chunk,
                dimension,
            });
        }
        let subjects = (0..dimension)
            .collect::<Vec<_>>()
            .chunks(chunk)
            .map(<[usize]>::to_vec)
            .collect();
        Ok(Self { subjects })
    }

    /// Every gene in one subject; reduces the per-subject update to the
    /// whole-vector one.
    pub fn single(dimension: usize) -> Self {
        Self::strided(dimension, 1).expect("one subject always fits")
    }

    pub fn subject_count(&self) -> usize {
        self.subjects.len()
    }

    pub fn subjects(&self) -> &[Vec<usize>] {
        &self.subjects
    }

    /// True when the subjects cover `0..dimension` exactly once.
    pub fn is_partition_of(&self, dimension: usize) -> bool {
        let mut seen = vec![false; dimension];
        for subject in &self.subjects {
            for &k in subject {
                if k >= dimension || seen[k] {
                    return false;
                }
                seen[k] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Resolves the configured subject grouping against a concrete dimension.
/// An explicit `number_of_subject` wins and maps to a strided layout;
/// otherwise the layout kind decides, with the subject size capped at the
/// dimension so low-dimensional problems still work.
pub fn build_subject_layout(
    config: &OptimizerConfig,
    dimension: usize,
) -> Result<SubjectLayout, ConfigError> {
    if let Some(count) = config.number_of_subject {
        return SubjectLayout::strided(dimension, count);
    }
    let size = dimension.min(3);
    match config.subject_layout {
        SubjectLayoutKind::Axis => SubjectLayout::strided(dimension, size),
        SubjectLayoutKind::PerWaypoint => SubjectLayout::chunked(dimension, size),
    }
}

/// Shared body of the per-subject learner updates: `base` steps along the
/// `head - tail` gene difference, toward `head` when `head_better` and away
/// from it otherwise, with coefficients drawn per gene (or one per subject
/// when `scalar_r`).
#[allow(clippy::too_many_arguments)]
fn subject_update<R: Rng + ?Sized>(
    base: &Candidate,
    head: &Candidate,
    tail: &Candidate,
    head_better: bool,
    layout: &SubjectLayout,
    rng: &mut R,
    scalar_r: bool,
    bounds: &[GeneBounds],
) -> Candidate {
    let mut genes = base.genes.clone();
    for subject in layout.subjects() {
        let shared_r = scalar_r.then(|| rng.random::<f64>());
        for &k in subject {
            let r = shared_r.unwrap_or_else(|| rng.random());
            let diff = if head_better {
                head.genes[k] - tail.genes[k]
            } else {
                tail.genes[k] - head.genes[k]
            };
            genes[k] = bounds[k].clamp(genes[k] + r * diff);
        }
    }
    Candidate::unevaluated(genes)
}

/// Per-subject exchange between `candidate` and one `partner`: each subject
/// steps along their gene difference, away from the partner when the
/// candidate is the cheaper of the two and toward it otherwise. The
/// orientation is decided once from the whole-candidate costs. Clamped,
/// returned unevaluated.
pub fn multi_subject_learner_step<R: Rng + ?Sized>(
    candidate: &Candidate,
    partner: &Candidate,
    layout: &SubjectLayout,
    rng: &mut R,
    scalar_r: bool,
    bounds: &[GeneBounds],
) -> Candidate {
    let candidate_better = candidate.total() < partner.total();
    subject_update(
        candidate,
        candidate,
        partner,
        candidate_better,
        layout,
        rng,
        scalar_r,
        bounds,
    )
}

/// Per-subject form of the classic three-candidate exchange: `candidate`
/// steps along the `first - second` difference, oriented toward the better
/// of the two. With a single all-gene subject this reproduces
/// [`crate::tlbo::learner_phase_step`] draw for draw.
pub fn multi_subject_classic_step<R: Rng + ?Sized>(
    candidate: &Candidate,
    first: &Candidate,
    second: &Candidate,
    layout: &SubjectLayout,
    rng: &mut R,
    scalar_r: bool,
    bounds: &[GeneBounds],
) -> Candidate {
    let first_better = first.total() < second.total();
    subject_update(
        candidate, first, second, first_better, layout, rng, scalar_r, bounds,
    )
}

/// One enhanced iteration: advance the chaos stream once, probe a mutated
/// copy of the best candidate against the worst class slot (one
/// evaluation), then run the per-subject learner sweep with greedy
/// acceptance. Returns early the moment the budget runs out, so an
/// iteration spends at most `1 + population` evaluations.
pub fn mstlbo_iteration<O: Objective>(
    state: &mut OptimizerState,
    objective: &O,
    config: &OptimizerConfig,
    layout: &SubjectLayout,
) {
    let bounds = objective.gene_bounds();
    {
        let chaos = state
            .chaos
            .as_mut()
            .expect("chaos stream initialized for this variant");
        *chaos = chaos.step();
    }
    if state.fes >= config.max_fes {
        return;
    }
    let teacher = state.best.clone();
    let fes_now = state.fes;
    let mutated = {
        let OptimizerState { rng, chaos, .. } = state;
        mutate_teacher(
            &teacher,
            chaos.as_mut().expect("chaos stream present"),
            fes_now,
            config.max_fes,
            rng,
            bounds,
            config.mutation_scale,
        )
    };
    if elite_replace_worst(state, mutated, objective, config.max_fes)
        == StepOutcome::BudgetExhausted
    {
        return;
    }
    let n = state.population.len();
    for i in 0..n {
        if state.fes >= config.max_fes {
            return;
        }
        let proposed = match config.learner_style {
            LearnerStyle::TwoSolution => {
                let partner = draw_partner(&mut state.rng, n, i);
                multi_subject_learner_step(
                    &state.population[i],
                    &state.population[partner],
                    layout,
                    &mut state.rng,
                    config.scalar_r,
                    bounds,
                )
            }
            LearnerStyle::Classic => {
                let (m, k) = draw_distinct_pair(&mut state.rng, n, i);
                multi_subject_classic_step(
                    &state.population[i],
                    &state.population[m],
                    &state.population[k],
                    layout,
                    &mut state.rng,
                    config.scalar_r,
                    bounds,
                )
            }
        };
        if greedy_accept(state, i, proposed, objective, config.max_fes)
            == StepOutcome::BudgetExhausted
        {
            return;
        }
    }
}
