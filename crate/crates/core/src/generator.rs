//! Synthetic ground-truth benchmarks: plays out routine-type Petri nets
//! into labeled executions and concatenates them into an identifier-free
//! UI log.
//!
//! Executions are concatenated, never interleaved, and every execution ends
//! in its type's completion action. Nets that lack a completion-labeled
//! transition are augmented with one firing into a fresh sink place, so
//! played-out traces replay on the (augmented) ground-truth model at cost
//! zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeSet;

use crate::conformance::{PetriNet, PetriNetBuilder};
use crate::error::{CoreError, Result};
use crate::metrics::{GroundTruthActionSets, ModelSet};
use crate::model::{
    ActionAlphabet, ActionId, CompletionSet, ExecutionMultiset, RoutineExecution, UILog,
};
use crate::seeds::derive_seed;

/// One routine type of a benchmark: its model and completion label.
#[derive(Debug, Clone)]
pub struct RoutineType {
    pub name: String,
    pub net: PetriNet,
    pub completion_label: String,
}

/// Specification of a generated benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub types: Vec<RoutineType>,
    pub executions_per_type: usize,
    pub shuffle_seed: u64,
    /// Playout step cap per execution.
    pub max_len: usize,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.types.is_empty() {
            return Err(CoreError::InvalidBenchmark("no routine types".into()));
        }
        if self.executions_per_type == 0 {
            return Err(CoreError::InvalidBenchmark(
                "executions_per_type must be >= 1".into(),
            ));
        }
        let completions: BTreeSet<&str> = self
            .types
            .iter()
            .map(|t| t.completion_label.as_str())
            .collect();
        if completions.len() != self.types.len() {
            return Err(CoreError::InvalidBenchmark(
                "completion labels must be distinct per type".into(),
            ));
        }
        Ok(())
    }
}

/// Everything the evaluation needs about one generated benchmark.
#[derive(Debug, Clone)]
pub struct GeneratedBenchmark {
    pub log: UILog,
    pub alphabet: ActionAlphabet,
    /// Ground-truth type id per execution, in log order.
    pub truth_types: Vec<usize>,
    /// The generated executions themselves, in log order.
    pub executions: ExecutionMultiset,
    pub action_sets: GroundTruthActionSets,
    pub completion_set: CompletionSet,
    /// Augmented ground-truth models, one per type.
    pub models: ModelSet,
}

/// Plays out one complete firing sequence from the initial to the final
/// marking, sampling uniformly among enabled transitions, and returns the
/// visible labels along the way.
pub fn playout(net: &PetriNet, seed: u64, max_len: usize) -> Result<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    playout_with_rng(net, &mut rng, max_len)
}

fn playout_with_rng(net: &PetriNet, rng: &mut ChaCha8Rng, max_len: usize) -> Result<Vec<String>> {
    let mut marking = net.initial_marking().clone();
    let mut labels = Vec::new();
    let mut steps = 0usize;
    while marking != *net.final_marking() {
        if steps >= max_len {
            return Err(CoreError::PlayoutCap(max_len));
        }
        let enabled = net.enabled(&marking);
        if enabled.is_empty() {
            return Err(CoreError::PlayoutDeadlock);
        }
        let t = enabled[rng.gen_range(0..enabled.len())];
        marking = net.fire(&marking, t)?;
        if let Some(label) = &net.transitions()[t].label {
            labels.push(label.clone());
        }
        steps += 1;
    }
    Ok(labels)
}

/// Extends a net whose language does not already end in `completion_label`
/// with a final transition carrying that label. Nets that contain the
/// label anywhere are returned unchanged.
pub fn augment_with_completion(net: &PetriNet, completion_label: &str) -> Result<PetriNet> {
    if net
        .transitions()
        .iter()
        .any(|t| t.label.as_deref() == Some(completion_label))
    {
        return Ok(net.clone());
    }
    let mut b = PetriNetBuilder::new(&net.name);
    for p in net.places() {
        b.place(&p.id);
    }
    for t in net.transitions() {
        let idx = b.transition(&t.id, t.label.as_deref());
        for &p in &t.inputs {
            b.arc_pt(p, idx);
        }
        for &p in &t.outputs {
            b.arc_tp(idx, p);
        }
    }
    let done = b.place("p_done");
    let complete = b.transition("t_complete", Some(completion_label));
    for (p, &count) in net.final_marking().counts().iter().enumerate() {
        if count > 1 {
            return Err(CoreError::InvalidBenchmark(
                "cannot augment a net whose final marking holds multiple tokens on one place"
                    .into(),
            ));
        }
        if count == 1 {
            b.arc_pt(p, complete);
        }
    }
    b.arc_tp(complete, done);
    for (p, &count) in net.initial_marking().counts().iter().enumerate() {
        for _ in 0..count {
            b.initial_token(p);
        }
    }
    b.final_token(done);
    b.build()
}

/// Builds the identifier-free UI log: plays out every type, shuffles the
/// executions, and concatenates them. Ground truth is returned out of band.
pub fn build_ui_log(spec: &BenchmarkSpec) -> Result<GeneratedBenchmark> {
    spec.validate()?;
    let augmented: Vec<RoutineType> = spec
        .types
        .iter()
        .map(|t| {
            Ok(RoutineType {
                name: t.name.clone(),
                net: augment_with_completion(&t.net, &t.completion_label)?,
                completion_label: t.completion_label.clone(),
            })
        })
        .collect::<Result<_>>()?;

    // Alphabet: visible labels in type order, then completion labels (the
    // augmented nets already contain them; intern is idempotent).
    let mut alphabet = ActionAlphabet::empty();
    for t in &augmented {
        for label in t.net.visible_labels() {
            alphabet.intern(label.to_string());
        }
    }
    for t in &augmented {
        alphabet.intern(t.completion_label.clone());
    }
    if alphabet.is_empty() {
        return Err(CoreError::EmptyAlphabet);
    }

    let mut generated: Vec<(usize, RoutineExecution)> = Vec::new();
    for (type_id, t) in augmented.iter().enumerate() {
        for j in 0..spec.executions_per_type {
            let seed = derive_seed(spec.shuffle_seed, &[1, type_id as u64, j as u64]);
            let labels = playout(&t.net, seed, spec.max_len)?;
            let mut actions: Vec<ActionId> = labels
                .iter()
                .map(|l| alphabet.require(l))
                .collect::<Result<_>>()?;
            if actions.last() != Some(&alphabet.require(&t.completion_label)?) {
                actions.push(alphabet.require(&t.completion_label)?);
            }
            generated.push((type_id, RoutineExecution::with_provenance(actions, type_id)));
        }
    }

    // Deterministic Fisher-Yates shuffle of execution order.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.shuffle_seed, &[0]));
    for i in (1..generated.len()).rev() {
        let j = rng.gen_range(0..=i);
        generated.swap(i, j);
    }

    let truth_types: Vec<usize> = generated.iter().map(|(t, _)| *t).collect();
    let executions: Vec<RoutineExecution> = generated.into_iter().map(|(_, e)| e).collect();
    let log = UILog::new(
        executions
            .iter()
            .flat_map(|e| e.actions().iter().copied())
            .collect(),
    );

    let action_sets = GroundTruthActionSets::new(
        augmented
            .iter()
            .map(|t| {
                let mut set: BTreeSet<ActionId> = t
                    .net
                    .visible_labels()
                    .map(|l| alphabet.require(l))
                    .collect::<Result<_>>()?;
                set.insert(alphabet.require(&t.completion_label)?);
                Ok((t.name.clone(), set))
            })
            .collect::<Result<_>>()?,
    )?;
    let completion_set = CompletionSet::from_labels(
        &augmented
            .iter()
            .map(|t| t.completion_label.clone())
            .collect::<Vec<_>>(),
        &alphabet,
    )?;
    let models = ModelSet {
        models: augmented
            .iter()
            .map(|t| (t.name.clone(), t.net.clone()))
            .collect(),
    };

    Ok(GeneratedBenchmark {
        log,
        alphabet,
        truth_types,
        executions: ExecutionMultiset::new(executions),
        action_sets,
        completion_set,
        models,
    })
}

/// A routine-type model over a disjoint label block: a chain of visible
/// steps with one parallel pair in the middle (when the block is large
/// enough), ending in the type's completion action. Every execution of the
/// type contains exactly the same multiset of actions.
pub fn synthetic_type(type_id: usize, n_actions: usize) -> Result<RoutineType> {
    if n_actions < 1 {
        return Err(CoreError::InvalidBenchmark(
            "each type needs at least one action".into(),
        ));
    }
    let label = |j: usize| format!("t{type_id}_a{j}");
    let completion = format!("t{type_id}_done");
    let mut b = PetriNetBuilder::new(format!("type{type_id}"));
    let mut prev = b.place("p0");
    b.initial_token(prev);
    let mut next_place = 1usize;
    let mut j = 0usize;
    while j < n_actions {
        if n_actions >= 4 && j == n_actions / 2 && j + 1 < n_actions {
            // Parallel pair: both actions always occur, order varies.
            let split = b.transition(format!("split{j}"), None);
            let la = b.place(format!("p{next_place}"));
            let lb = b.place(format!("p{}", next_place + 1));
            let ra = b.place(format!("p{}", next_place + 2));
            let rb = b.place(format!("p{}", next_place + 3));
            next_place += 4;
            let ta = b.transition(format!("t{j}"), Some(&label(j)));
            let tb = b.transition(format!("t{}", j + 1), Some(&label(j + 1)));
            let join = b.transition(format!("join{j}"), None);
            let after = b.place(format!("p{next_place}"));
            next_place += 1;
            b.arc_pt(prev, split).arc_tp(split, la).arc_tp(split, lb);
            b.arc_pt(la, ta).arc_tp(ta, ra);
            b.arc_pt(lb, tb).arc_tp(tb, rb);
            b.arc_pt(ra, join).arc_pt(rb, join).arc_tp(join, after);
            prev = after;
            j += 2;
        } else {
            let t = b.transition(format!("t{j}"), Some(&label(j)));
            let p = b.place(format!("p{next_place}"));
            next_place += 1;
            b.arc_pt(prev, t).arc_tp(t, p);
            prev = p;
            j += 1;
        }
    }
    let done = b.transition("t_done", Some(&completion));
    let sink = b.place(format!("p{next_place}"));
    b.arc_pt(prev, done).arc_tp(done, sink);
    b.final_token(sink);
    Ok(RoutineType {
        name: format!("type{type_id}"),
        net: b.build()?,
        completion_label: completion,
    })
}

/// Benchmark of `n_types` synthetic routine types with pairwise disjoint
/// alphabets.
pub fn synthetic_benchmark(
    n_types: usize,
    actions_per_type: usize,
    executions_per_type: usize,
    seed: u64,
) -> Result<BenchmarkSpec> {
    let types = (0..n_types)
        .map(|i| synthetic_type(i, actions_per_type))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkSpec {
        types,
        executions_per_type,
        shuffle_seed: seed,
        max_len: 10 * (actions_per_type + 2),
    })
}

/// A two-branch exclusive-choice net: fires `left` or `right`, then `last`.
/// Used by tests that need behavioral variety.
pub fn xor_net(name: &str, left: &str, right: &str, last: &str) -> Result<PetriNet> {
    let mut b = PetriNetBuilder::new(name);
    let p0 = b.place("p0");
    let p1 = b.place("p1");
    let p2 = b.place("p2");
    let tl = b.transition("tl", Some(left));
    let tr = b.transition("tr", Some(right));
    let tf = b.transition("tf", Some(last));
    b.arc_pt(p0, tl).arc_tp(tl, p1);
    b.arc_pt(p0, tr).arc_tp(tr, p1);
    b.arc_pt(p1, tf).arc_tp(tf, p2);
    b.initial_token(p0).final_token(p2);
    b.build()
}
