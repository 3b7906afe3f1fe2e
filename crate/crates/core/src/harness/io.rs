//! Instance and coloring files.
//!
//! An instance names its elements and describes each matroid over them:
//!
//! ```json
//! {"ground_set": ["a", "b", "c"],
//!  "matroids": [{"type": "uniform", "rank": 2},
//!               {"type": "partition", "parts": [["a", "b"], ["c"]], "capacities": [1, 1]}]}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::{GroundSet, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MatroidDesc {
    Uniform { rank: usize },
    Partition { parts: Vec<Vec<String>>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize, String)> },
    Linear { field: u64, columns: BTreeMap<String, Vec<i64>> },
    Free {},
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub ground_set: Vec<String>,
    pub matroids: Vec<MatroidDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A parsed instance: labels plus matroids over ids `0..n`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ground: GroundSet,
    pub matroids: Vec<Matroid>,
}

impl Instance {
    pub fn full(&self) -> Subset {
        self.ground.full()
    }
}

fn ids_for<'a>(ground: &GroundSet, labels: impl Iterator<Item = &'a String>, what: &str) -> Result<Vec<usize>> {
    let ids = labels.map(|l| ground.id(l)).collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; ground.len()];
    for &i in &ids {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Parse(format!("{what} lists element {:?} twice", ground.label(i))));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Parse(format!("{what} does not mention element {:?}", ground.label(missing))));
    }
    Ok(ids)
}

impl MatroidDesc {
    pub fn build(&self, ground: &GroundSet) -> Result<Matroid> {
        let n = ground.len();
        match self {
            MatroidDesc::Uniform { rank } => Matroid::uniform(n, *rank),
            MatroidDesc::Free {} => Ok(Matroid::free(n)),
            MatroidDesc::Partition { parts, capacities } => {
                ids_for(ground, parts.iter().flatten(), "partition matroid")?;
                let parts = parts
                    .iter()
                    .map(|p| p.iter().map(|l| ground.id(l)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Matroid::partition(n, &parts, capacities)
            }
            MatroidDesc::Graphic { vertices, edges } => {
                let ids = ids_for(ground, edges.iter().map(|e| &e.2), "graphic matroid")?;
                let mut ends = vec![(0, 0); n];
                for (&id, &(u, w, _)) in ids.iter().zip(edges) {
                    ends[id] = (u, w);
                }
                Matroid::graphic(*vertices, &ends)
            }
            MatroidDesc::Linear { field, columns } => {
                let ids = ids_for(ground, columns.keys(), "linear matroid")?;
                let mut cols = vec![Vec::new(); n];
                for (&id, col) in ids.iter().zip(columns.values()) {
                    cols[id] = col.clone();
                }
                Matroid::linear(*field, &cols)
            }
        }
    }
}

impl InstanceFile {
    pub fn build(&self) -> Result<Instance> {
        let ground = GroundSet::new(self.ground_set.iter().cloned())?;
        let matroids = self.matroids.iter().map(|m| m.build(&ground)).collect::<Result<Vec<_>>>()?;
        Ok(Instance { ground, matroids })
    }

    pub fn from_json(text: &str) -> Result<InstanceFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(path: &Path) -> Result<InstanceFile> {
        InstanceFile::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Coloring as lists of labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub classes: Vec<Vec<String>>,
}

impl ColoringFile {
    pub fn from_coloring(ground: &GroundSet, c: &Coloring) -> ColoringFile {
        ColoringFile { classes: c.classes.iter().map(|s| ground.labels_of(s)).collect() }
    }

    pub fn to_coloring(&self, ground: &GroundSet) -> Result<Coloring> {
        let classes = self.classes.iter().map(|c| ground.subset_of_labels(c)).collect::<Result<Vec<_>>>()?;
        Ok(Coloring::new(classes))
    }
}
