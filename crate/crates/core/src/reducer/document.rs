//! The JSON form of an emitted system.

use serde::{Deserialize, Serialize};

use super::EquationSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationDocument {
    pub poly: String,
    pub gadget: String,
    pub slots: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub variables: Vec<String>,
    pub equations: Vec<EquationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folded: Option<String>,
}

impl SystemDocument {
    pub fn new(sys: &EquationSystem) -> Self {
        SystemDocument {
            variables: sys.variables.clone(),
            equations: sys
                .equations
                .iter()
                .map(|e| EquationDocument {
                    poly: e.poly.to_string(),
                    gadget: e.provenance.to_string(),
                    slots: sys.gadgets[e.gadget].slots.clone(),
                })
                .collect(),
            folded: sys.folded.as_ref().map(|f| f.render(&sys.equations)),
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}
