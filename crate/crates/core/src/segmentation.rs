//! Splits a UI log into the multiset of routine executions at completion
//! actions.
//!
//! Each segment contains exactly one completion action, as its last element,
//! and the concatenation of all segments followed by the (possibly empty)
//! trailing remainder reproduces the input log. Trailing actions after the
//! last completion action never form a segment; they are reported as an
//! incomplete remainder and excluded from the multiset.

use crate::model::{ActionId, CompletionSet, ExecutionMultiset, RoutineExecution, UILog};

/// Result of segmenting a UI log: the extracted multiset plus any
/// incomplete trailing remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub segments: ExecutionMultiset,
    /// Suffix after the last completion action; empty when the log ends in
    /// a completion action.
    pub remainder: Vec<ActionId>,
}

impl Segmentation {
    pub fn has_remainder(&self) -> bool {
        !self.remainder.is_empty()
    }
}

/// Segments `log` at occurrences of actions in `finals`.
///
/// An empty log yields an empty multiset. A log without any completion
/// action yields an empty multiset with the whole log as remainder.
pub fn segment(log: &UILog, finals: &CompletionSet) -> Segmentation {
    let mut segments = Vec::new();
    let mut current = Vec::new();
    for &action in log.actions() {
        current.push(action);
        if finals.contains(action) {
            segments.push(RoutineExecution::new(std::mem::take(&mut current)));
        }
    }
    Segmentation {
        segments: ExecutionMultiset::new(segments),
        remainder: current,
    }
}

/// Checks that `segments` is a valid segmentation of `log` modulo a trailing
/// remainder: concatenating the segments reproduces a prefix of the log,
/// the suffix beyond that prefix contains no completion action, and every
/// segment contains exactly one completion action, at its last position.
pub fn validate_segmentation(
    segments: &ExecutionMultiset,
    log: &UILog,
    finals: &CompletionSet,
) -> bool {
    for seg in segments.iter() {
        let actions = seg.actions();
        let n_finals = actions.iter().filter(|&&a| finals.contains(a)).count();
        if n_finals != 1 || !actions.last().is_some_and(|&a| finals.contains(a)) {
            return false;
        }
    }
    let concat: Vec<ActionId> = segments
        .iter()
        .flat_map(|s| s.actions().iter().copied())
        .collect();
    if concat.len() > log.len() || concat[..] != log.actions()[..concat.len()] {
        return false;
    }
    log.actions()[concat.len()..]
        .iter()
        .all(|&a| !finals.contains(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_alphabet;

    fn ids(xs: &[usize]) -> Vec<ActionId> {
        xs.iter().map(|&i| ActionId(i)).collect()
    }

    /// Brute-force splitter: enumerates every cut-point set and keeps the
    /// (unique) one where each piece has exactly one final, at its end.
    /// Leftover suffix without finals is the remainder.
    fn brute_force_segment(log: &[ActionId], finals: &CompletionSet) -> (Vec<Vec<ActionId>>, Vec<ActionId>) {
        let n = log.len();
        // Cut after every completion action; anything else fails the
        // one-final-at-end condition, so enumeration reduces to this set.
        // Verify by checking all subsets on small inputs instead.
        let mut best: Option<(Vec<Vec<ActionId>>, Vec<ActionId>)> = None;
        for mask in 0..(1u32 << n) {
            let mut pieces = Vec::new();
            let mut start = 0usize;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    pieces.push(log[start..=i].to_vec());
                    start = i + 1;
                }
            }
            let remainder = log[start..].to_vec();
            let pieces_ok = pieces.iter().all(|p| {
                p.iter().filter(|&&a| finals.contains(a)).count() == 1
                    && p.last().is_some_and(|&a| finals.contains(a))
            });
            let remainder_ok = remainder.iter().all(|&a| !finals.contains(a));
            // Maximal split: every final must close a piece.
            let all_finals_cut = log
                .iter()
                .enumerate()
                .filter(|(_, &a)| finals.contains(a))
                .all(|(i, _)| mask & (1 << i) != 0);
            if pieces_ok && remainder_ok && all_finals_cut {
                assert!(best.is_none(), "segmentation should be unique");
                best = Some((pieces, remainder));
            }
        }
        best.expect("a valid segmentation always exists")
    }

    #[test]
    fn splits_at_completion_actions() {
        let alphabet = build_alphabet(&["a", "b", "F", "c"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 1, 2, 3, 2]));
        let seg = segment(&log, &finals);
        assert_eq!(seg.segments.len(), 2);
        assert_eq!(seg.segments.executions()[0].actions(), &ids(&[0, 1, 2])[..]);
        assert_eq!(seg.segments.executions()[1].actions(), &ids(&[3, 2])[..]);
        assert!(seg.remainder.is_empty());
    }

    #[test]
    fn minimal_segments_of_bare_finals() {
        let alphabet = build_alphabet(&["F", "x"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 0]));
        let seg = segment(&log, &finals);
        assert_eq!(seg.segments.len(), 2);
        for s in seg.segments.iter() {
            assert_eq!(s.actions(), &ids(&[0])[..]);
        }
    }

    #[test]
    fn trailing_actions_become_remainder() {
        // Frozen from the brute-force splitter below on the same input.
        let alphabet = build_alphabet(&["a", "F", "b"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 1, 2]));
        let seg = segment(&log, &finals);
        assert_eq!(seg.segments.len(), 1);
        assert_eq!(seg.segments.executions()[0].actions(), &ids(&[0, 1])[..]);
        assert_eq!(seg.remainder, ids(&[2]));

        let (bf_pieces, bf_rem) = brute_force_segment(log.actions(), &finals);
        assert_eq!(bf_pieces.len(), 1);
        assert_eq!(bf_pieces[0], ids(&[0, 1]));
        assert_eq!(bf_rem, ids(&[2]));
    }

    #[test]
    fn empty_log_yields_empty_multiset() {
        let alphabet = build_alphabet(&["a", "F"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let seg = segment(&UILog::default(), &finals);
        assert!(seg.segments.is_empty());
        assert!(seg.remainder.is_empty());
    }

    #[test]
    fn no_completion_anywhere_yields_full_remainder() {
        let alphabet = build_alphabet(&["a", "b", "F"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 1, 0]));
        let seg = segment(&log, &finals);
        assert!(seg.segments.is_empty());
        assert_eq!(seg.remainder, ids(&[0, 1, 0]));
    }

    #[test]
    fn validate_accepts_own_output() {
        let alphabet = build_alphabet(&["a", "b", "F"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 2, 1, 1, 2, 0]));
        let seg = segment(&log, &finals);
        assert!(validate_segmentation(&seg.segments, &log, &finals));
    }

    #[test]
    fn validate_rejects_mid_segment_final_and_reordering() {
        let alphabet = build_alphabet(&["a", "F"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        let log = UILog::new(ids(&[0, 1, 1]));

        // One segment holding both finals: completion action mid-segment.
        let bad = ExecutionMultiset::new(vec![RoutineExecution::new(ids(&[0, 1, 1]))]);
        assert!(!validate_segmentation(&bad, &log, &finals));

        // Reordered segments no longer concatenate to the log.
        let seg = segment(&UILog::new(ids(&[0, 1, 1])), &finals);
        let mut reordered: Vec<_> = seg.segments.executions().to_vec();
        reordered.reverse();
        assert!(!validate_segmentation(
            &ExecutionMultiset::new(reordered),
            &log,
            &finals
        ));
    }

    #[test]
    fn matches_brute_force_on_exhaustive_small_logs() {
        // All logs of length <= 8 over {a, F}: oracle agreement.
        let alphabet = build_alphabet(&["a", "F"]).unwrap();
        let finals = CompletionSet::from_labels(&["F"], &alphabet).unwrap();
        for len in 0..=8usize {
            for word in 0..(1u32 << len) {
                let actions: Vec<ActionId> = (0..len)
                    .map(|i| ActionId(((word >> i) & 1) as usize))
                    .collect();
                let log = UILog::new(actions.clone());
                let seg = segment(&log, &finals);
                if len <= 8 && !actions.is_empty() {
                    let (bf_pieces, bf_rem) = brute_force_segment(&actions, &finals);
                    let got: Vec<Vec<ActionId>> = seg
                        .segments
                        .iter()
                        .map(|s| s.actions().to_vec())
                        .collect();
                    assert_eq!(got, bf_pieces);
                    assert_eq!(seg.remainder, bf_rem);
                }
                // Length conservation and per-segment final count.
                let total: usize = seg.segments.iter().map(|s| s.len()).sum();
                assert_eq!(total + seg.remainder.len(), len);
                let n_finals = actions.iter().filter(|&&a| finals.contains(a)).count();
                assert_eq!(seg.segments.len(), n_finals);
                assert!(validate_segmentation(&seg.segments, &log, &finals));
            }
        }
    }
}
