use std::time::Instant;

use serde::Serialize;

use crate::bdd::ReducedDiagram;
use crate::extmem::{Engine, IoCounters};

/// Statistics of one task, serialized as the `--stats-json` output.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TaskReport {
    pub task: String,
    pub model: String,
    pub wall_ms: u64,
    pub iterations: u64,
    /// Exact decimal count.
    pub state_count: String,
    pub result_nodes: u64,
    pub peak_resident_records: u64,
    pub largest_intermediate_nodes: u64,
    pub io: IoCounters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scc_count: Option<String>,
}

impl TaskReport {
    pub(crate) fn new(
        task: &str,
        model: &str,
        engine: &Engine,
        started: Instant,
        iterations: u64,
        state_count: u128,
        result: &ReducedDiagram,
    ) -> TaskReport {
        TaskReport {
            task: task.to_string(),
            model: model.to_string(),
            wall_ms: started.elapsed().as_millis() as u64,
            iterations,
            state_count: state_count.to_string(),
            result_nodes: result.node_count(),
            peak_resident_records: engine.peak_resident_records(),
            largest_intermediate_nodes: engine.largest_intermediate_nodes(),
            io: engine.counters(),
            scc_count: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
