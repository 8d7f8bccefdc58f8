//! Petri net semantics and alignment-based conformance checking.
//!
//! Nets are plain place/transition nets with unit arc weights, an initial
//! marking, and a final marking. Visible transitions carry a label;
//! silent transitions fire without emitting anything.

mod alignment;

pub use alignment::{
    brute_force_alignment_cost, log_model_fitness, optimal_alignment, Alignment, AlignmentMove,
    DEFAULT_STATE_BUDGET,
};

use crate::error::{CoreError, Result};

/// Token counts per place index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn empty(n_places: usize) -> Self {
        Marking(vec![0; n_places])
    }

    pub fn tokens(&self, place: usize) -> u32 {
        self.0[place]
    }

    pub fn set(&mut self, place: usize, count: u32) {
        self.0[place] = count;
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub id: String,
    /// None marks a silent transition.
    pub label: Option<String>,
    /// Input place indices, sorted.
    pub inputs: Vec<usize>,
    /// Output place indices, sorted.
    pub outputs: Vec<usize>,
}

impl Transition {
    pub fn is_silent(&self) -> bool {
        self.label.is_none()
    }
}

/// Place/transition net with initial and final markings.
#[derive(Debug, Clone, PartialEq)]
pub struct PetriNet {
    pub name: String,
    places: Vec<Place>,
    transitions: Vec<Transition>,
    initial: Marking,
    final_marking: Marking,
}

impl PetriNet {
    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn final_marking(&self) -> &Marking {
        &self.final_marking
    }

    pub fn place_index(&self, id: &str) -> Option<usize> {
        self.places.iter().position(|p| p.id == id)
    }

    /// Visible labels in transition order, duplicates preserved.
    pub fn visible_labels(&self) -> impl Iterator<Item = &str> {
        self.transitions.iter().filter_map(|t| t.label.as_deref())
    }

    /// Transitions enabled at `marking`: every input place holds a token.
    pub fn enabled(&self, marking: &Marking) -> Vec<usize> {
        self.transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| t.inputs.iter().all(|&p| marking.tokens(p) >= 1))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_enabled(&self, marking: &Marking, transition: usize) -> bool {
        self.transitions[transition]
            .inputs
            .iter()
            .all(|&p| marking.tokens(p) >= 1)
    }

    /// Fires `transition`, consuming input tokens and producing outputs.
    pub fn fire(&self, marking: &Marking, transition: usize) -> Result<Marking> {
        if !self.is_enabled(marking, transition) {
            return Err(CoreError::TransitionNotEnabled(
                self.transitions[transition].id.clone(),
            ));
        }
        let mut next = marking.clone();
        for &p in &self.transitions[transition].inputs {
            next.0[p] -= 1;
        }
        for &p in &self.transitions[transition].outputs {
            next.0[p] += 1;
        }
        Ok(next)
    }
}

/// Incremental construction of a [`PetriNet`]; indices returned by
/// `place`/`transition` are stable.
#[derive(Debug, Default)]
pub struct PetriNetBuilder {
    name: String,
    places: Vec<Place>,
    transitions: Vec<Transition>,
    initial: Vec<(usize, u32)>,
    final_marking: Vec<(usize, u32)>,
}

impl PetriNetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        PetriNetBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn place(&mut self, id: impl Into<String>) -> usize {
        self.places.push(Place { id: id.into() });
        self.places.len() - 1
    }

    pub fn transition(&mut self, id: impl Into<String>, label: Option<&str>) -> usize {
        self.transitions.push(Transition {
            id: id.into(),
            label: label.map(str::to_string),
            inputs: Vec::new(),
            outputs: Vec::new(),
        });
        self.transitions.len() - 1
    }

    pub fn arc_pt(&mut self, place: usize, transition: usize) -> &mut Self {
        self.transitions[transition].inputs.push(place);
        self
    }

    pub fn arc_tp(&mut self, transition: usize, place: usize) -> &mut Self {
        self.transitions[transition].outputs.push(place);
        self
    }

    pub fn initial_token(&mut self, place: usize) -> &mut Self {
        self.initial.push((place, 1));
        self
    }

    pub fn final_token(&mut self, place: usize) -> &mut Self {
        self.final_marking.push((place, 1));
        self
    }

    pub fn build(mut self) -> Result<PetriNet> {
        if self.transitions.is_empty() {
            return Err(CoreError::InvalidBenchmark(
                "net must have at least one transition".into(),
            ));
        }
        let n = self.places.len();
        let mut initial = Marking::empty(n);
        for (p, c) in self.initial {
            initial.set(p, initial.tokens(p) + c);
        }
        let mut final_marking = Marking::empty(n);
        for (p, c) in self.final_marking {
            final_marking.set(p, final_marking.tokens(p) + c);
        }
        for t in &mut self.transitions {
            t.inputs.sort_unstable();
            t.outputs.sort_unstable();
        }
        Ok(PetriNet {
            name: self.name,
            places: self.places,
            transitions: self.transitions,
            initial,
            final_marking,
        })
    }
}

/// Convenience: a chain net firing the given labels in order.
pub fn sequence_net(name: &str, labels: &[&str]) -> Result<PetriNet> {
    let mut b = PetriNetBuilder::new(name);
    let mut prev = b.place("p0");
    b.initial_token(prev);
    for (i, label) in labels.iter().enumerate() {
        let t = b.transition(format!("t{i}"), Some(label));
        let next = b.place(format!("p{}", i + 1));
        b.arc_pt(prev, t);
        b.arc_tp(t, next);
        prev = next;
    }
    b.final_token(prev);
    b.build()
}
