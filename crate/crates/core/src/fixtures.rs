//! Example data shipped with the crate, usable offline.

use crate::ingest::{build_abox, emit_problem, parse_annotations, parse_mapping, IngestError};
use crate::learner::LearningProblem;
use crate::model::KnowledgeBase;
use crate::text::parse_kb;

pub const WAREHOUSE_BACKGROUND: &str = include_str!("../fixtures/warehouse/sumo_fragment.dlkb");
pub const WAREHOUSE_ANNOTATIONS: &str = include_str!("../fixtures/warehouse/annotations.tsv");
pub const WAREHOUSE_MAPPING: &str = include_str!("../fixtures/warehouse/mapping.tsv");
/// Background plus the ingested annotations.
pub const WAREHOUSE_KB: &str = include_str!("../fixtures/warehouse/warehouse.dlkb");
pub const WAREHOUSE_PROBLEM: &str = include_str!("../fixtures/warehouse/warehouse.prob");
/// Ten accuracy-1 expressions for the warehouse problem, one per line.
pub const WAREHOUSE_SOLUTIONS: &str = include_str!("../fixtures/warehouse/solutions.txt");
/// Expressions over the other classes of the background fragment.
pub const WAREHOUSE_EXPERIMENTS: &str = include_str!("../fixtures/warehouse/experiments.txt");
pub const WAREHOUSE_POSITIVES: [&str; 3] = ["p1", "p2", "p3"];
pub const WAREHOUSE_ROLE: &str = "contains";

pub const TRAINS_KB: &str = include_str!("../fixtures/trains/trains.dlkb");
pub const TRAINS_PROBLEM: &str = include_str!("../fixtures/trains/trains.prob");

pub const PROP_KB: &str = include_str!("../fixtures/prop/prop.dlkb");
pub const PROP_PROBLEM: &str = include_str!("../fixtures/prop/prop.prob");

/// Non-comment, non-blank lines.
pub fn lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Run the warehouse ingest from the raw annotation and mapping tables.
pub fn ingest_warehouse() -> Result<(KnowledgeBase, LearningProblem), IngestError> {
    let background = parse_kb(WAREHOUSE_BACKGROUND).expect("shipped background parses");
    let records = parse_annotations(WAREHOUSE_ANNOTATIONS)?;
    let mapping = parse_mapping(WAREHOUSE_MAPPING)?;
    let kb = build_abox(&records, &mapping, WAREHOUSE_ROLE, &background)?;
    let positives = WAREHOUSE_POSITIVES.iter().map(|s| s.to_string()).collect();
    let problem = emit_problem(&records, &positives)?;
    Ok((kb, problem))
}
