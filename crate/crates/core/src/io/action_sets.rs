//! Action-set files: a JSON object mapping each routine-type name to its
//! list of action labels. Entry order in the file is the type order used
//! for nearest-vector tie-breaking.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{CoreError, Result};
use crate::metrics::GroundTruthActionSets;
use crate::model::{ActionAlphabet, ActionId};

pub fn read_action_sets(
    path: impl AsRef<Path>,
    alphabet: &ActionAlphabet,
) -> Result<GroundTruthActionSets> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
    let value: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&text).map_err(|e| CoreError::json(path, e))?;
    let mut sets: Vec<(String, BTreeSet<ActionId>)> = Vec::new();
    for (name, labels) in value {
        let labels = labels.as_array().ok_or_else(|| CoreError::Format {
            file: path.display().to_string(),
            msg: format!("action set `{name}` is not an array"),
        })?;
        let mut set = BTreeSet::new();
        for l in labels {
            let label = l.as_str().ok_or_else(|| CoreError::Format {
                file: path.display().to_string(),
                msg: format!("non-string label in action set `{name}`"),
            })?;
            set.insert(alphabet.require(label)?);
        }
        sets.push((name, set));
    }
    GroundTruthActionSets::new(sets)
}

pub fn write_action_sets(
    path: impl AsRef<Path>,
    sets: &GroundTruthActionSets,
    alphabet: &ActionAlphabet,
) -> Result<()> {
    let path = path.as_ref();
    let mut map = serde_json::Map::new();
    for (name, set) in sets.sets() {
        let labels: Vec<serde_json::Value> = set
            .iter()
            .map(|&a| serde_json::Value::String(alphabet.label(a).to_string()))
            .collect();
        map.insert(name.clone(), serde_json::Value::Array(labels));
    }
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(map))
        .map_err(|e| CoreError::json(path, e))?;
    std::fs::write(path, text).map_err(|e| CoreError::io(path, e))
}
