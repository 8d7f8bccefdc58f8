//! Optimal trace/model alignments and log-model fitness.
//!
//! Alignments are found by uniform-cost search over (trace position,
//! marking) states with unit costs: synchronous and silent moves are free,
//! log-only and visible model-only moves cost 1. Ties are broken by move
//! kind (sync, silent, model, log) then transition index, which makes the
//! returned alignment deterministic.

use std::collections::{BinaryHeap, HashMap};

use super::{Marking, PetriNet};
use crate::error::{CoreError, Result};
use crate::model::{ActionAlphabet, ActionId, RoutineLog};

/// Settled-state limit guarding against unbounded nets.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// One move of an alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentMove {
    /// Trace and model advance together.
    Sync { action: ActionId, transition: usize },
    /// Trace-only move (the model cannot mimic this action).
    Log { action: ActionId },
    /// Visible model-only move (the trace skipped this step).
    Model { transition: usize },
    /// Silent model move; free.
    ModelSilent { transition: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub moves: Vec<AlignmentMove>,
    pub cost: u32,
}

impl Alignment {
    /// Projection of sync/log moves onto actions; must equal the trace.
    pub fn trace_projection(&self) -> Vec<ActionId> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                AlignmentMove::Sync { action, .. } | AlignmentMove::Log { action } => Some(*action),
                _ => None,
            })
            .collect()
    }

    /// Projection of sync/model/silent moves onto transitions; must be a
    /// firing sequence from the initial to the final marking.
    pub fn model_projection(&self) -> Vec<usize> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                AlignmentMove::Sync { transition, .. }
                | AlignmentMove::Model { transition }
                | AlignmentMove::ModelSilent { transition } => Some(*transition),
                AlignmentMove::Log { .. } => None,
            })
            .collect()
    }

    /// Checks both projection invariants against the net and trace.
    pub fn is_valid_for(&self, net: &PetriNet, trace: &[ActionId]) -> bool {
        if self.trace_projection() != trace {
            return false;
        }
        let mut marking = net.initial_marking().clone();
        for t in self.model_projection() {
            match net.fire(&marking, t) {
                Ok(next) => marking = next,
                Err(_) => return false,
            }
        }
        if marking != *net.final_marking() {
            return false;
        }
        let recomputed: u32 = self
            .moves
            .iter()
            .map(|m| match m {
                AlignmentMove::Sync { .. } | AlignmentMove::ModelSilent { .. } => 0,
                AlignmentMove::Log { .. } | AlignmentMove::Model { .. } => 1,
            })
            .sum();
        recomputed == self.cost
    }
}

/// Maps each transition to the alphabet id of its label, if resolvable.
fn resolve_labels(net: &PetriNet, alphabet: &ActionAlphabet) -> Vec<Option<ActionId>> {
    net.transitions()
        .iter()
        .map(|t| t.label.as_deref().and_then(|l| alphabet.id(l)))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    pos: usize,
    marking: Marking,
}

struct HeapEntry {
    cost: u32,
    seq: u64,
    state: State,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.seq == other.seq
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap on (cost, insertion order) via reversal.
        other
            .cost
            .cmp(&self.cost)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Minimum-cost alignment of `trace` against `net` under unit costs.
pub fn optimal_alignment(
    net: &PetriNet,
    trace: &[ActionId],
    alphabet: &ActionAlphabet,
) -> Result<Alignment> {
    optimal_alignment_with_budget(net, trace, alphabet, DEFAULT_STATE_BUDGET)
}

pub fn optimal_alignment_with_budget(
    net: &PetriNet,
    trace: &[ActionId],
    alphabet: &ActionAlphabet,
    state_budget: usize,
) -> Result<Alignment> {
    let labels = resolve_labels(net, alphabet);
    let start = State {
        pos: 0,
        marking: net.initial_marking().clone(),
    };
    let goal_pos = trace.len();
    let goal_marking = net.final_marking();

    let mut best: HashMap<State, u32> = HashMap::new();
    let mut parent: HashMap<State, (State, AlignmentMove)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    best.insert(start.clone(), 0);
    heap.push(HeapEntry {
        cost: 0,
        seq,
        state: start,
    });
    let mut settled = 0usize;

    while let Some(HeapEntry { cost, state, .. }) = heap.pop() {
        if best.get(&state).is_some_and(|&b| cost > b) {
            continue; // stale entry
        }
        if state.pos == goal_pos && state.marking == *goal_marking {
            let mut moves = Vec::new();
            let mut cur = state;
            while let Some((prev, mv)) = parent.get(&cur) {
                moves.push(*mv);
                cur = prev.clone();
            }
            moves.reverse();
            return Ok(Alignment { moves, cost });
        }
        settled += 1;
        if settled > state_budget {
            return Err(CoreError::StateBudgetExhausted(state_budget));
        }

        let mut push = |next: State,
                        step: u32,
                        mv: AlignmentMove,
                        best: &mut HashMap<State, u32>,
                        parent: &mut HashMap<State, (State, AlignmentMove)>,
                        heap: &mut BinaryHeap<HeapEntry>,
                        from: &State| {
            let next_cost = cost + step;
            let improved = best.get(&next).is_none_or(|&b| next_cost < b);
            if improved {
                best.insert(next.clone(), next_cost);
                parent.insert(next.clone(), (from.clone(), mv));
                seq += 1;
                heap.push(HeapEntry {
                    cost: next_cost,
                    seq,
                    state: next,
                });
            }
        };

        // Successors in tie-break order: sync, silent, visible model, log.
        let enabled = net.enabled(&state.marking);
        if state.pos < goal_pos {
            let current = trace[state.pos];
            for &t in &enabled {
                if labels[t] == Some(current) {
                    let next = State {
                        pos: state.pos + 1,
                        marking: net.fire(&state.marking, t).expect("enabled"),
                    };
                    push(
                        next,
                        0,
                        AlignmentMove::Sync {
                            action: current,
                            transition: t,
                        },
                        &mut best,
                        &mut parent,
                        &mut heap,
                        &state,
                    );
                }
            }
        }
        for &t in &enabled {
            if net.transitions()[t].is_silent() {
                let next = State {
                    pos: state.pos,
                    marking: net.fire(&state.marking, t).expect("enabled"),
                };
                push(
                    next,
                    0,
                    AlignmentMove::ModelSilent { transition: t },
                    &mut best,
                    &mut parent,
                    &mut heap,
                    &state,
                );
            }
        }
        for &t in &enabled {
            if !net.transitions()[t].is_silent() {
                let next = State {
                    pos: state.pos,
                    marking: net.fire(&state.marking, t).expect("enabled"),
                };
                push(
                    next,
                    1,
                    AlignmentMove::Model { transition: t },
                    &mut best,
                    &mut parent,
                    &mut heap,
                    &state,
                );
            }
        }
        if state.pos < goal_pos {
            let next = State {
                pos: state.pos + 1,
                marking: state.marking.clone(),
            };
            push(
                next,
                1,
                AlignmentMove::Log {
                    action: trace[state.pos],
                },
                &mut best,
                &mut parent,
                &mut heap,
                &state,
            );
        }
    }
    Err(CoreError::FinalMarkingUnreachable)
}

/// Exhaustive oracle: iterative deepening on cost, plain DFS bounded by
/// `depth_cap` moves. Independent of the search above; intended for small
/// nets and short traces.
pub fn brute_force_alignment_cost(
    net: &PetriNet,
    trace: &[ActionId],
    alphabet: &ActionAlphabet,
    depth_cap: usize,
) -> Result<u32> {
    let labels = resolve_labels(net, alphabet);
    let max_budget = trace.len() + depth_cap;
    for budget in 0..=max_budget as u32 {
        if dfs(
            net,
            trace,
            &labels,
            0,
            net.initial_marking().clone(),
            budget,
            depth_cap,
        ) {
            return Ok(budget);
        }
    }
    Err(CoreError::DepthCapExceeded(depth_cap))
}

fn dfs(
    net: &PetriNet,
    trace: &[ActionId],
    labels: &[Option<ActionId>],
    pos: usize,
    marking: Marking,
    budget: u32,
    depth_left: usize,
) -> bool {
    if pos == trace.len() && marking == *net.final_marking() {
        return true;
    }
    if depth_left == 0 {
        return false;
    }
    for t in net.enabled(&marking) {
        let next = net.fire(&marking, t).expect("enabled");
        if pos < trace.len() && labels[t] == Some(trace[pos]) {
            // Synchronous move, free.
            if dfs(net, trace, labels, pos + 1, next.clone(), budget, depth_left - 1) {
                return true;
            }
        }
        let step = if net.transitions()[t].is_silent() { 0 } else { 1 };
        if budget >= step
            && dfs(net, trace, labels, pos, next, budget - step, depth_left - 1)
        {
            return true;
        }
    }
    if pos < trace.len() && budget >= 1 {
        // Log-only move.
        return dfs(net, trace, labels, pos + 1, marking, budget - 1, depth_left - 1);
    }
    false
}

/// Minimal cost of a complete firing sequence, counting visible
/// transitions: the alignment cost of the empty trace.
pub fn minimal_model_cost(net: &PetriNet, alphabet: &ActionAlphabet) -> Result<u32> {
    optimal_alignment(net, &[], alphabet).map(|a| a.cost)
}

/// Alignment-based fitness of a routine log against one net:
/// `1 - total_cost / sum(|trace| + c_min)`, aggregated over the whole log.
/// Identical traces are aligned once and weighted by multiplicity.
pub fn log_model_fitness(
    log: &RoutineLog,
    net: &PetriNet,
    alphabet: &ActionAlphabet,
) -> Result<f64> {
    if log.is_empty() {
        return Err(CoreError::EmptyLog);
    }
    let c_min = u64::from(minimal_model_cost(net, alphabet)?);
    let mut groups: HashMap<&[ActionId], u64> = HashMap::new();
    for exec in log.executions() {
        *groups.entry(exec.actions()).or_insert(0) += 1;
    }
    let mut total_cost = 0u64;
    let mut denominator = 0u64;
    for (trace, count) in groups {
        let alignment = optimal_alignment(net, trace, alphabet)?;
        total_cost += u64::from(alignment.cost) * count;
        denominator += (trace.len() as u64 + c_min) * count;
    }
    if denominator == 0 {
        // Only possible when every trace is empty and c_min is zero; all
        // costs are zero too.
        return Ok(1.0);
    }
    Ok(1.0 - total_cost as f64 / denominator as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformance::sequence_net;
    use crate::model::{build_alphabet, RoutineExecution};

    fn trace(alphabet: &ActionAlphabet, labels: &[&str]) -> Vec<ActionId> {
        labels.iter().map(|l| alphabet.id(l).unwrap()).collect()
    }

    #[test]
    fn perfect_fit_costs_zero() {
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let t = trace(&alphabet, &["a", "b"]);
        let al = optimal_alignment(&net, &t, &alphabet).unwrap();
        assert_eq!(al.cost, 0);
        assert_eq!(
            al.moves,
            vec![
                AlignmentMove::Sync {
                    action: ActionId(0),
                    transition: 0
                },
                AlignmentMove::Sync {
                    action: ActionId(1),
                    transition: 1
                },
            ]
        );
        assert!(al.is_valid_for(&net, &t));
    }

    #[test]
    fn missing_action_costs_one_model_move() {
        // Frozen against the brute-force oracle below.
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let t = trace(&alphabet, &["a"]);
        let al = optimal_alignment(&net, &t, &alphabet).unwrap();
        assert_eq!(al.cost, 1);
        assert_eq!(
            brute_force_alignment_cost(&net, &t, &alphabet, 8).unwrap(),
            1
        );
        assert!(al
            .moves
            .contains(&AlignmentMove::Model { transition: 1 }));
        assert!(al.is_valid_for(&net, &t));
    }

    #[test]
    fn extra_action_costs_one_log_move() {
        let alphabet = build_alphabet(&["a", "x", "b"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let t = trace(&alphabet, &["a", "x", "b"]);
        let al = optimal_alignment(&net, &t, &alphabet).unwrap();
        assert_eq!(al.cost, 1);
        assert_eq!(
            brute_force_alignment_cost(&net, &t, &alphabet, 8).unwrap(),
            1
        );
        assert!(al.moves.contains(&AlignmentMove::Log {
            action: alphabet.id("x").unwrap()
        }));
        assert!(al.is_valid_for(&net, &t));
    }

    #[test]
    fn silent_transitions_are_free() {
        // p0 -t(a)-> p1 -tau-> p2 -t(b)-> p3
        let mut b = crate::conformance::PetriNetBuilder::new("n");
        let p0 = b.place("p0");
        let p1 = b.place("p1");
        let p2 = b.place("p2");
        let p3 = b.place("p3");
        let ta = b.transition("ta", Some("a"));
        let tau = b.transition("tau", None);
        let tb = b.transition("tb", Some("b"));
        b.arc_pt(p0, ta).arc_tp(ta, p1);
        b.arc_pt(p1, tau).arc_tp(tau, p2);
        b.arc_pt(p2, tb).arc_tp(tb, p3);
        b.initial_token(p0).final_token(p3);
        let net = b.build().unwrap();

        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let t = trace(&alphabet, &["a", "b"]);
        let al = optimal_alignment(&net, &t, &alphabet).unwrap();
        assert_eq!(al.cost, 0);
        assert!(al
            .moves
            .contains(&AlignmentMove::ModelSilent { transition: 1 }));
        assert!(al.is_valid_for(&net, &t));
    }

    #[test]
    fn empty_trace_cost_equals_minimal_model_cost() {
        let alphabet = build_alphabet(&["a", "b", "c"]).unwrap();
        let net = sequence_net("n", &["a", "b", "c"]).unwrap();
        assert_eq!(minimal_model_cost(&net, &alphabet).unwrap(), 3);
    }

    #[test]
    fn unreachable_final_marking_errors() {
        let mut b = crate::conformance::PetriNetBuilder::new("n");
        let p0 = b.place("p0");
        let p1 = b.place("p1");
        let p2 = b.place("p2");
        let t = b.transition("t", Some("a"));
        b.arc_pt(p0, t).arc_tp(t, p1);
        b.initial_token(p0).final_token(p2);
        let net = b.build().unwrap();
        let alphabet = build_alphabet(&["a"]).unwrap();
        assert!(matches!(
            optimal_alignment(&net, &[], &alphabet),
            Err(CoreError::FinalMarkingUnreachable)
        ));
    }

    #[test]
    fn state_budget_is_enforced() {
        // A self-loop producing tokens without bound.
        let mut b = crate::conformance::PetriNetBuilder::new("n");
        let p0 = b.place("p0");
        let p1 = b.place("p1");
        let p2 = b.place("p2");
        let grow = b.transition("grow", Some("g"));
        b.arc_pt(p0, grow).arc_tp(grow, p0).arc_tp(grow, p1);
        b.initial_token(p0).final_token(p2);
        let net = b.build().unwrap();
        let alphabet = build_alphabet(&["g"]).unwrap();
        assert!(matches!(
            optimal_alignment_with_budget(&net, &[], &alphabet, 100),
            Err(CoreError::StateBudgetExhausted(100))
        ));
    }

    #[test]
    fn worst_case_alignment_is_fully_asynchronous() {
        // Trace shares no labels with the net: cost = |trace| + c_min.
        let alphabet = build_alphabet(&["a", "b", "x", "y"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let t = trace(&alphabet, &["x", "y", "x"]);
        let al = optimal_alignment(&net, &t, &alphabet).unwrap();
        assert_eq!(al.cost, 3 + 2);
        assert_eq!(
            brute_force_alignment_cost(&net, &t, &alphabet, 10).unwrap(),
            5
        );
    }

    #[test]
    fn fitness_of_perfect_log_is_exactly_one() {
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let log = RoutineLog::new(vec![
            RoutineExecution::new(trace(&alphabet, &["a", "b"])),
            RoutineExecution::new(trace(&alphabet, &["a", "b"])),
        ]);
        let f = log_model_fitness(&log, &net, &alphabet).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn fitness_formula_on_partial_trace() {
        // Net accepts only <a,b> (c_min = 2); log = [<a>]:
        // 1 - 1/(1+2) = 2/3.
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let log = RoutineLog::new(vec![RoutineExecution::new(trace(&alphabet, &["a"]))]);
        let f = log_model_fitness(&log, &net, &alphabet).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fitness_rejects_empty_log() {
        let alphabet = build_alphabet(&["a"]).unwrap();
        let net = sequence_net("n", &["a"]).unwrap();
        assert!(matches!(
            log_model_fitness(&RoutineLog::default(), &net, &alphabet),
            Err(CoreError::EmptyLog)
        ));
    }

    #[test]
    fn adding_perfect_trace_never_decreases_fitness() {
        let alphabet = build_alphabet(&["a", "b", "x"]).unwrap();
        let net = sequence_net("n", &["a", "b"]).unwrap();
        let noisy = RoutineExecution::new(trace(&alphabet, &["a", "x"]));
        let perfect = RoutineExecution::new(trace(&alphabet, &["a", "b"]));
        let f1 = log_model_fitness(&RoutineLog::new(vec![noisy.clone()]), &net, &alphabet).unwrap();
        let f2 =
            log_model_fitness(&RoutineLog::new(vec![noisy, perfect]), &net, &alphabet).unwrap();
        assert!(f2 >= f1);
    }
}
