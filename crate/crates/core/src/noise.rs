//! Controlled noise injection into routine executions.
//!
//! Per iteration over the input segment, with probability `0.5 * level` the
//! current action is skipped, with probability `0.5 * level` a uniformly
//! random action from the insert pool is emitted without advancing, and
//! otherwise the current action is copied. At level 0 the output is the
//! input, byte for byte.
//!
//! With `preserve_finals` (the default) the segment's final completion
//! action is held out of the loop and re-appended unmodified, so noisy logs
//! re-segment into the same number of executions as long as the insert pool
//! avoids completion actions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::model::{ActionId, ExecutionMultiset, RoutineExecution};

/// Configuration for one noise pass.
#[derive(Debug, Clone)]
pub struct NoiseConfig {
    /// Noise level l in [0, 1].
    pub level: f64,
    pub seed: u64,
    /// Pool random insertions are drawn from; usually the alphabet minus
    /// the completion set.
    pub insert_pool: Vec<ActionId>,
    /// Hold the trailing completion action out of the loop.
    pub preserve_finals: bool,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.level) || self.level.is_nan() {
            return Err(CoreError::InvalidNoiseConfig(format!(
                "level {} outside [0, 1]",
                self.level
            )));
        }
        if self.level > 0.0 && self.insert_pool.is_empty() {
            return Err(CoreError::InvalidNoiseConfig(
                "insert pool is empty at a positive noise level".into(),
            ));
        }
        Ok(())
    }
}

fn inject_with_rng(
    actions: &[ActionId],
    level: f64,
    pool: &[ActionId],
    rng: &mut ChaCha8Rng,
) -> Vec<ActionId> {
    let mut out = Vec::with_capacity(actions.len());
    let mut i = 0usize;
    while i < actions.len() {
        if rng.gen::<f64>() < level {
            if rng.gen::<f64>() < 0.5 {
                // Simulate a missing action by skipping it.
                i += 1;
            } else {
                // Emit a random action; the current one may still be copied
                // on a later iteration.
                out.push(pool[rng.gen_range(0..pool.len())]);
            }
        } else {
            out.push(actions[i]);
            i += 1;
        }
    }
    out
}

/// Perturbs one segment. Deterministic for a fixed `config.seed`.
pub fn inject(segment: &RoutineExecution, config: &NoiseConfig) -> Result<RoutineExecution> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(inject_segment(segment, config, &mut rng))
}

fn inject_segment(
    segment: &RoutineExecution,
    config: &NoiseConfig,
    rng: &mut ChaCha8Rng,
) -> RoutineExecution {
    let actions = segment.actions();
    let (body, held_out) = if config.preserve_finals && !actions.is_empty() {
        (&actions[..actions.len() - 1], Some(actions[actions.len() - 1]))
    } else {
        (actions, None)
    };
    let mut noisy = inject_with_rng(body, config.level, &config.insert_pool, rng);
    if let Some(f) = held_out {
        noisy.push(f);
    }
    match segment.provenance() {
        Some(t) => RoutineExecution::with_provenance(noisy, t),
        None => RoutineExecution::new(noisy),
    }
}

/// Perturbs every segment of the multiset, one ChaCha stream per segment
/// split off `config.seed`, so segments can be processed independently.
pub fn inject_log(
    executions: &ExecutionMultiset,
    config: &NoiseConfig,
) -> Result<ExecutionMultiset> {
    config.validate()?;
    let noisy = executions
        .iter()
        .enumerate()
        .map(|(j, segment)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(j as u64);
            inject_segment(segment, config, &mut rng)
        })
        .collect();
    Ok(ExecutionMultiset::new(noisy))
}
