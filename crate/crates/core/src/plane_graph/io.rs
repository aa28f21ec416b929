use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{GraphError, PlaneGraph, Vertex};

/// On-disk JSON form of a plane graph.
///
/// ```json
/// {"vertices": ["a", "b"], "rotation": {"a": ["b"], "b": ["a"]}, "outer_face": ["a", "b"]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub rotation: BTreeMap<String, Vec<String>>,
    pub outer_face: Vec<String>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<PlaneGraph, GraphError> {
        let mut index = HashMap::new();
        for (i, name) in self.vertices.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex { vertex: name.clone() });
            }
        }
        let lookup = |s: &String| -> Result<Vertex, GraphError> {
            index.get(s).copied().ok_or_else(|| GraphError::UnknownVertex { vertex: s.clone() })
        };
        for key in self.rotation.keys() {
            lookup(key)?;
        }
        let mut rotation = Vec::with_capacity(self.vertices.len());
        for name in &self.vertices {
            let list = self.rotation.get(name).ok_or_else(|| GraphError::MissingRotation { vertex: name.clone() })?;
            rotation.push(list.iter().map(lookup).collect::<Result<Vec<_>, _>>()?);
        }
        let walk = self.outer_face.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        PlaneGraph::with_outer_walk(self.vertices, rotation, &walk)
    }
}

impl From<&PlaneGraph> for GraphFile {
    fn from(g: &PlaneGraph) -> Self {
        let rotation = (0..g.names().len())
            .map(|v| (g.name(v).to_owned(), g.rotation(v).iter().map(|&u| g.name(u).to_owned()).collect()))
            .collect();
        let outer = &g.faces()[g.outer_face()];
        let outer_face = if outer.is_empty() {
            vec![g.name(0).to_owned()]
        } else {
            outer.vertices().into_iter().map(|v| g.name(v).to_owned()).collect()
        };
        GraphFile { vertices: g.names().to_vec(), rotation, outer_face }
    }
}

impl PlaneGraph {
    /// Parses and fully validates the JSON graph format.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph file serialises")
    }
}
