//! Problem instances and their JSON document form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{input, Error, Result};
use crate::graph::{Graph, RootedTree};
use crate::profile::{ValueMatrix, ValueProfile};
use crate::rational::Rational;

/// Version written into every instance and report document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// Every agent values the houses the same way.
    Identical(ValueProfile),
    /// `matrix.get(agent, house)`.
    General(ValueMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub valuation: Valuation,
    /// Root for rooted-tree semantics, if the instance declares one.
    pub root: Option<usize>,
    /// Free-form provenance (generator, parameters, seed).
    pub metadata: BTreeMap<String, Value>,
}

/// On-disk layout. Exactly one of `values` and `value_matrix` is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_matrix: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, Value>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

impl Instance {
    pub fn identical(graph: Graph, profile: ValueProfile) -> Result<Self> {
        if graph.vertex_count() != profile.len() {
            return input(format!(
                "graph has {} vertices but {} values were given",
                graph.vertex_count(),
                profile.len()
            ));
        }
        Ok(Instance {
            graph,
            valuation: Valuation::Identical(profile),
            root: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn general(graph: Graph, matrix: ValueMatrix) -> Result<Self> {
        if graph.vertex_count() != matrix.len() {
            return input(format!(
                "graph has {} vertices but the value matrix is {}x{}",
                graph.vertex_count(),
                matrix.len(),
                matrix.len()
            ));
        }
        Ok(Instance {
            graph,
            valuation: Valuation::General(matrix),
            root: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.graph.vertex_count() {
            return input(format!("root {root} out of range"));
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    /// The shared value profile; errors for per-agent valuations.
    pub fn profile(&self) -> Result<&ValueProfile> {
        match &self.valuation {
            Valuation::Identical(p) => Ok(p),
            Valuation::General(_) => {
                input("this instance has per-agent valuations, not a single value list")
            }
        }
    }

    /// The rooted tree declared by `root`.
    pub fn rooted_tree(&self) -> Result<RootedTree> {
        let root = self
            .root
            .ok_or_else(|| Error::Input("instance declares no root".into()))?;
        RootedTree::new(self.graph.clone(), root)
    }

    pub fn to_file(&self) -> InstanceFile {
        let (values, value_matrix) = match &self.valuation {
            Valuation::Identical(p) => (Some(p.values_by_house()), None),
            Valuation::General(m) => (None, Some(m.rows().to_vec())),
        };
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            n: self.n(),
            edges: self.graph.edges().to_vec(),
            values,
            value_matrix,
            root: self.root,
            metadata: self.metadata.clone(),
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return input(format!(
                "unsupported schema_version {}",
                file.schema_version
            ));
        }
        let graph = Graph::new(file.n, file.edges)?;
        let mut inst = match (file.values, file.value_matrix) {
            (Some(values), None) => {
                if values.len() != file.n {
                    return input(format!(
                        "n = {} but {} values were given",
                        file.n,
                        values.len()
                    ));
                }
                Instance::identical(graph, ValueProfile::new(values)?)?
            }
            (None, Some(rows)) => Instance::general(graph, ValueMatrix::new(rows)?)?,
            _ => return input("exactly one of `values` and `value_matrix` must be present"),
        };
        if let Some(r) = file.root {
            inst = inst.with_root(r)?;
        }
        inst.metadata = file.metadata;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Instance::from_file(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let p = ValueProfile::new(vec![
            Rational::frac(1, 3),
            Rational::from_integer(2),
            Rational::frac(7, 2),
        ])
        .unwrap();
        let inst = Instance::identical(g, p)
            .unwrap()
            .with_metadata("generator", "test");
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"1/3\""));
    }

    #[test]
    fn decimals_and_integers_parse_exactly() {
        let text = r#"{"n": 2, "edges": [[0, 1]], "values": ["0.25", 3]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.profile().unwrap().value(0), &Rational::frac(1, 4));
        assert_eq!(inst.profile().unwrap().value(1), &Rational::from_integer(3));
    }

    #[test]
    fn rejects_inconsistent_documents() {
        assert!(Instance::from_json(r#"{"n": 2, "edges": [], "values": ["1"]}"#).is_err());
        assert!(Instance::from_json(r#"{"n": 1, "edges": []}"#).is_err());
        assert!(
            Instance::from_json(r#"{"n": 2, "edges": [[0, 2]], "values": ["1", "2"]}"#).is_err()
        );
        assert!(
            Instance::from_json(r#"{"n": 1, "values": ["1"], "value_matrix": [["1"]]}"#).is_err()
        );
    }

    #[test]
    fn matrix_documents() {
        let text = r#"{"n": 2, "edges": [[0, 1]], "value_matrix": [["5", "0"], ["0", "5"]]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert!(inst.profile().is_err());
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }
}
