//! Turn per-input object annotations into ABox facts linked to a background
//! ontology through a single role, plus the matching learning problem.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::learner::LearningProblem;
use crate::model::{is_identifier, Assertion, KnowledgeBase};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unmapped terms: {}", .0.join(", "))]
    Unmapped(Vec<String>),
    #[error("mapped classes missing from the background ontology: {}", .0.join(", "))]
    UnknownClass(Vec<String>),
    #[error("role `{0}` is not a valid identifier or is declared with another kind")]
    BadRole(String),
    #[error("generated individual `{0}` collides with an existing name")]
    Collision(String),
    #[error("generated individual `{0}` is not a valid identifier")]
    BadName(String),
    #[error("positive ids not among the records: {}", .0.join(", "))]
    UnknownIds(Vec<String>),
    #[error("learning problem would have no {0} examples")]
    EmptySide(&'static str),
}

/// Objects recorded for one classified input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub input_id: String,
    pub terms: Vec<String>,
}

/// Term to atomic class name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MappingTable {
    pub entries: BTreeMap<String, String>,
}

impl MappingTable {
    pub fn get(&self, term: &str) -> Option<&str> {
        self.entries.get(term).map(String::as_str)
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for MappingTable {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        MappingTable { entries: iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect() }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// One record per line: `input_id<TAB>term, term, ...`.
pub fn parse_annotations(text: &str) -> Result<Vec<AnnotationRecord>, IngestError> {
    let mut records = Vec::new();
    for (line, raw) in content_lines(text) {
        let syntax = |message: &str| IngestError::Syntax { line, message: message.to_string() };
        let (id, terms) = raw.split_once('\t').ok_or_else(|| syntax("expected `id<TAB>terms`"))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(syntax("blank input id"));
        }
        let terms: Vec<String> = terms.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
        if terms.is_empty() {
            return Err(syntax("empty term list"));
        }
        records.push(AnnotationRecord { input_id: id.to_string(), terms });
    }
    Ok(records)
}

/// One entry per line: `term<TAB>ClassName`.
pub fn parse_mapping(text: &str) -> Result<MappingTable, IngestError> {
    let mut table = MappingTable::default();
    for (line, raw) in content_lines(text) {
        let syntax = |message: String| IngestError::Syntax { line, message };
        let (term, class) = raw.split_once('\t').ok_or_else(|| syntax("expected `term<TAB>ClassName`".into()))?;
        let (term, class) = (term.trim(), class.trim());
        if term.is_empty() || class.is_empty() {
            return Err(syntax("blank term or class".into()));
        }
        if let Some(previous) = table.entries.get(term) {
            if previous != class {
                return Err(syntax(format!("term `{term}` mapped to both {previous} and {class}")));
            }
        }
        table.entries.insert(term.to_string(), class.to_string());
    }
    Ok(table)
}

/// Name of the k-th (1-based) occurrence of `term` in record `input_id`.
pub fn object_individual(term: &str, input_id: &str, occurrence: usize) -> String {
    if occurrence > 1 {
        format!("{term}_{input_id}_{occurrence}")
    } else {
        format!("{term}_{input_id}")
    }
}

/// Add one individual per record and per term occurrence, type each object
/// with its mapped class and link it to its record through `role`.
pub fn build_abox(
    records: &[AnnotationRecord],
    mapping: &MappingTable,
    role: &str,
    background: &KnowledgeBase,
) -> Result<KnowledgeBase, IngestError> {
    let unmapped: BTreeSet<String> =
        records.iter().flat_map(|r| &r.terms).filter(|t| mapping.get(t).is_none()).cloned().collect();
    if !unmapped.is_empty() {
        return Err(IngestError::Unmapped(unmapped.into_iter().collect()));
    }
    let missing: BTreeSet<String> = records
        .iter()
        .flat_map(|r| &r.terms)
        .filter_map(|t| mapping.get(t))
        .filter(|c| !background.signature.is_class(c))
        .map(str::to_string)
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::UnknownClass(missing.into_iter().collect()));
    }
    let role_kinds = background.signature.kinds_of(role);
    if !is_identifier(role) || role_kinds.iter().any(|k| *k != crate::model::NameKind::Role) {
        return Err(IngestError::BadRole(role.to_string()));
    }

    let mut kb = background.clone();
    kb.signature.roles.insert(role.to_string());
    let mut fresh: BTreeSet<String> = BTreeSet::new();
    let mut claim = |name: String, kb: &KnowledgeBase| -> Result<String, IngestError> {
        if !is_identifier(&name) {
            return Err(IngestError::BadName(name));
        }
        if !kb.signature.kinds_of(&name).is_empty() || !fresh.insert(name.clone()) {
            return Err(IngestError::Collision(name));
        }
        Ok(name)
    };

    for record in records {
        let image = claim(record.input_id.clone(), &kb)?;
        kb.signature.individuals.insert(image.clone());
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for term in &record.terms {
            let k = seen.entry(term).or_insert(0);
            *k += 1;
            let object = claim(object_individual(term, &record.input_id, *k), &kb)?;
            kb.signature.individuals.insert(object.clone());
            kb.abox.insert(Assertion::class(mapping.get(term).expect("checked above"), object.clone()));
            kb.abox.insert(Assertion::role(role, image.clone(), object));
        }
    }
    Ok(kb)
}

/// Positives are `positive_ids`; every other record id is a negative.
pub fn emit_problem(
    records: &[AnnotationRecord],
    positive_ids: &BTreeSet<String>,
) -> Result<LearningProblem, IngestError> {
    let ids: BTreeSet<&String> = records.iter().map(|r| &r.input_id).collect();
    let unknown: Vec<String> = positive_ids.iter().filter(|p| !ids.contains(p)).cloned().collect();
    if !unknown.is_empty() {
        return Err(IngestError::UnknownIds(unknown));
    }
    let negatives: Vec<String> = ids.into_iter().filter(|id| !positive_ids.contains(*id)).cloned().collect();
    if positive_ids.is_empty() {
        return Err(IngestError::EmptySide("positive"));
    }
    if negatives.is_empty() {
        return Err(IngestError::EmptySide("negative"));
    }
    Ok(LearningProblem::new(positive_ids.iter().cloned(), negatives).expect("sides are disjoint and non-empty"))
}
