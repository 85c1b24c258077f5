use serde::Serialize;
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A file produced alongside a report; only its name appears in the JSON.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: Map<String, Value>,
    pub measured: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    #[serde(rename = "artifacts", serialize_with = "artifact_names")]
    pub artifacts: Vec<Artifact>,
}

fn artifact_names<S: serde::Serializer>(a: &[Artifact], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(a.iter().map(|x| &x.name))
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            inputs: Map::new(),
            measured: Map::new(),
            assertions: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.to_string(), serde_json::to_value(v).expect("serializable input"));
    }

    pub fn measure(&mut self, key: &str, v: impl Serialize) {
        self.measured.insert(key.to_string(), serde_json::to_value(v).expect("serializable measurement"));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.assertions.push(Assertion { name: name.to_string(), passed, detail: detail.into() });
        passed
    }

    pub fn attach(&mut self, name: &str, content: String) {
        self.artifacts.push(Artifact { name: name.to_string(), content });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `report.json` and the artifacts into `dir`, returning the paths written.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let path = dir.join("report.json");
        std::fs::write(&path, self.to_json())?;
        written.push(path);
        for a in &self.artifacts {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.content)?;
            written.push(path);
        }
        Ok(written)
    }
}
