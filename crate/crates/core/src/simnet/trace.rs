use serde::{Deserialize, Serialize};

use crate::block::Tick;

/// One state transition observed during a simulation run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub tick: Tick,
    pub node: String,
    pub action: String,
    pub detail: String,
}

/// The replayable event log of a run. Identical `(scenario, seed)` inputs
/// produce byte-identical exports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn push(&mut self, tick: Tick, node: &str, action: &str, detail: String) {
        self.records.push(TraceRecord {
            tick,
            node: node.to_string(),
            action: action.to_string(),
            detail,
        });
    }

    /// Line-delimited export: one JSON object per line, fields always in
    /// `tick, node, action, detail` order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("trace record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn contains_action(&self, action: &str) -> bool {
        self.records.iter().any(|r| r.action == action)
    }
}
