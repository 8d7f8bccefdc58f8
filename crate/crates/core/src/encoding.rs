//! Action-count encoding of routine executions.
//!
//! Each execution maps to a vector whose i-th entry counts the occurrences
//! of the i-th alphabet action. Counts stay integral here; they are widened
//! to `f64` only at the clustering boundary.

use crate::error::{CoreError, Result};
use crate::model::{ActionAlphabet, ExecutionMultiset, RoutineExecution};

/// Count vector of one execution over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    counts: Vec<u32>,
}

impl FeatureVector {
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| f64::from(c)).collect()
    }
}

/// One row per execution, in multiset order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureMatrix {
    rows: Vec<FeatureVector>,
    dim: usize,
}

impl FeatureMatrix {
    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows widened to `f64` for distance computations.
    pub fn to_points(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(FeatureVector::as_f64).collect()
    }
}

/// Encodes one execution as its action-count vector.
pub fn encode_execution(
    execution: &RoutineExecution,
    alphabet: &ActionAlphabet,
) -> Result<FeatureVector> {
    let mut counts = vec![0u32; alphabet.len()];
    for &a in execution.actions() {
        if !alphabet.contains_id(a) {
            return Err(CoreError::ActionOutOfRange(a.0, alphabet.len()));
        }
        counts[a.0] += 1;
    }
    Ok(FeatureVector { counts })
}

/// Encodes the whole multiset; row j is the count vector of execution j.
pub fn encode(executions: &ExecutionMultiset, alphabet: &ActionAlphabet) -> Result<FeatureMatrix> {
    let rows = executions
        .iter()
        .map(|e| encode_execution(e, alphabet))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMatrix {
        rows,
        dim: alphabet.len(),
    })
}

/// Debug dump: the matrix as CSV with action labels as the header.
pub fn write_matrix_csv(
    path: impl AsRef<std::path::Path>,
    matrix: &FeatureMatrix,
    alphabet: &ActionAlphabet,
) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| CoreError::csv(path, e))?;
    writer
        .write_record(alphabet.labels())
        .map_err(|e| CoreError::csv(path, e))?;
    for row in matrix.rows() {
        writer
            .write_record(row.counts().iter().map(|c| c.to_string()))
            .map_err(|e| CoreError::csv(path, e))?;
    }
    writer.flush().map_err(|e| CoreError::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_alphabet, ActionId};

    fn exec(alphabet: &ActionAlphabet, labels: &[&str]) -> RoutineExecution {
        RoutineExecution::new(labels.iter().map(|l| alphabet.id(l).unwrap()).collect())
    }

    #[test]
    fn worked_example_counts() {
        // lambda1 = <a,b>, lambda2 = <a,c,c>, lambda3 = <b,c> over <a,b,c>
        let alphabet = build_alphabet(&["a", "b", "c"]).unwrap();
        let w = ExecutionMultiset::new(vec![
            exec(&alphabet, &["a", "b"]),
            exec(&alphabet, &["a", "c", "c"]),
            exec(&alphabet, &["b", "c"]),
        ]);
        let m = encode(&w, &alphabet).unwrap();
        assert_eq!(m.rows()[0].counts(), &[1, 1, 0]);
        assert_eq!(m.rows()[1].counts(), &[1, 0, 2]);
        assert_eq!(m.rows()[2].counts(), &[0, 1, 1]);
    }

    #[test]
    fn repeated_single_action() {
        let alphabet = build_alphabet(&["a"]).unwrap();
        let w = ExecutionMultiset::new(vec![exec(&alphabet, &["a", "a", "a"])]);
        let m = encode(&w, &alphabet).unwrap();
        assert_eq!(m.rows()[0].counts(), &[3]);
    }

    #[test]
    fn empty_multiset_encodes_to_zero_rows() {
        let alphabet = build_alphabet(&["a"]).unwrap();
        let m = encode(&ExecutionMultiset::default(), &alphabet).unwrap();
        assert_eq!(m.n_rows(), 0);
        assert_eq!(m.dim(), 1);
    }

    #[test]
    fn out_of_alphabet_action_errors() {
        let alphabet = build_alphabet(&["a"]).unwrap();
        let w = ExecutionMultiset::new(vec![RoutineExecution::new(vec![ActionId(3)])]);
        assert!(matches!(
            encode(&w, &alphabet),
            Err(CoreError::ActionOutOfRange(3, 1))
        ));
    }

    #[test]
    fn entry_sum_equals_execution_length() {
        let alphabet = build_alphabet(&["a", "b", "c", "d"]).unwrap();
        let e = exec(&alphabet, &["d", "a", "a", "c", "d", "d"]);
        let v = encode_execution(&e, &alphabet).unwrap();
        assert_eq!(v.total(), e.len() as u64);
        assert_eq!(v.dim(), alphabet.len());
    }

    #[test]
    fn encoding_is_order_insensitive_within_execution() {
        let alphabet = build_alphabet(&["a", "b", "c"]).unwrap();
        let forward = exec(&alphabet, &["a", "b", "c", "b"]);
        let shuffled = exec(&alphabet, &["b", "c", "b", "a"]);
        assert_eq!(
            encode_execution(&forward, &alphabet).unwrap(),
            encode_execution(&shuffled, &alphabet).unwrap()
        );
    }

    #[test]
    fn matrix_csv_dump() {
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let w = ExecutionMultiset::new(vec![exec(&alphabet, &["a", "b", "b"])]);
        let m = encode(&w, &alphabet).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("matrix.csv");
        write_matrix_csv(&path, &m, &alphabet).unwrap();
        let content = std::fs::read_to_string(&path).unwrap();
        assert_eq!(content.trim(), "a,b\n1,2");
    }

    #[test]
    fn permuting_executions_permutes_rows() {
        let alphabet = build_alphabet(&["a", "b"]).unwrap();
        let e1 = exec(&alphabet, &["a"]);
        let e2 = exec(&alphabet, &["b", "b"]);
        let m12 = encode(&ExecutionMultiset::new(vec![e1.clone(), e2.clone()]), &alphabet).unwrap();
        let m21 = encode(&ExecutionMultiset::new(vec![e2, e1]), &alphabet).unwrap();
        assert_eq!(m12.rows()[0], m21.rows()[1]);
        assert_eq!(m12.rows()[1], m21.rows()[0]);
    }
}
