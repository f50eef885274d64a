//! Closed-world instance retrieval over a materialized knowledge base.
//!
//! The individuals of the knowledge base are the whole domain. An individual
//! has a class iff the class is asserted for it or is a declared superclass of
//! an asserted class; role edges are exactly the asserted ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_rational::Rational64;
use thiserror::Error;

use crate::learner::LearningProblem;
use crate::model::{Assertion, ClassExpression, ClassHierarchy, Diagnostic, KnowledgeBase};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
}

#[derive(Clone, Debug)]
pub struct MaterializedKb {
    base: KnowledgeBase,
    hierarchy: ClassHierarchy,
    individuals: Vec<String>,
    index: HashMap<String, usize>,
    types: Vec<BTreeSet<String>>,
    members: HashMap<String, FixedBitSet>,
    successors: HashMap<String, Vec<Vec<usize>>>,
}

/// Build the closed-world structure for `kb`.
pub fn materialize(kb: &KnowledgeBase) -> MaterializedKb {
    MaterializedKb::new(kb.clone())
}

impl MaterializedKb {
    pub fn new(base: KnowledgeBase) -> Self {
        let hierarchy = ClassHierarchy::from_kb(&base);

        let mut names: BTreeSet<&str> = base.signature.individuals.iter().map(String::as_str).collect();
        for assertion in &base.abox {
            match assertion {
                Assertion::Class { individual, .. } => {
                    names.insert(individual);
                }
                Assertion::Role { subject, object, .. } => {
                    names.insert(subject);
                    names.insert(object);
                }
            }
        }
        let individuals: Vec<String> = names.into_iter().map(str::to_string).collect();
        let index: HashMap<String, usize> = individuals.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = individuals.len();

        let mut types = vec![BTreeSet::new(); n];
        let mut members: HashMap<String, FixedBitSet> = HashMap::new();
        let mut successors: HashMap<String, Vec<Vec<usize>>> = HashMap::new();
        for assertion in &base.abox {
            match assertion {
                Assertion::Class { class, individual } => {
                    let i = index[individual];
                    let supers = hierarchy.supers_of(class).cloned().unwrap_or_else(|| BTreeSet::from([class.clone()]));
                    for sup in supers {
                        members.entry(sup.clone()).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(i);
                        types[i].insert(sup);
                    }
                }
                Assertion::Role { role, subject, object } => {
                    let succ = successors.entry(role.clone()).or_insert_with(|| vec![Vec::new(); n]);
                    succ[index[subject]].push(index[object]);
                }
            }
        }
        for per_role in successors.values_mut() {
            for list in per_role.iter_mut() {
                list.sort_unstable();
                list.dedup();
            }
        }

        MaterializedKb { base, hierarchy, individuals, index, types, members, successors }
    }

    pub fn base(&self) -> &KnowledgeBase {
        &self.base
    }

    pub fn hierarchy(&self) -> &ClassHierarchy {
        &self.hierarchy
    }

    /// Axioms not used for retrieval and hierarchy cycles.
    pub fn diagnostics(&self) -> &[Diagnostic] {
        self.hierarchy.diagnostics()
    }

    pub fn universe(&self) -> impl Iterator<Item = &str> {
        self.individuals.iter().map(String::as_str)
    }

    pub fn universe_size(&self) -> usize {
        self.individuals.len()
    }

    pub fn contains_individual(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub(crate) fn individual_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Asserted and inherited classes of `individual`.
    pub fn types(&self, individual: &str) -> Option<&BTreeSet<String>> {
        self.index.get(individual).map(|&i| &self.types[i])
    }

    pub fn role_successors(&self, role: &str, individual: &str) -> Vec<&str> {
        let (Some(per_role), Some(&i)) = (self.successors.get(role), self.index.get(individual)) else {
            return Vec::new();
        };
        per_role[i].iter().map(|&j| self.individuals[j].as_str()).collect()
    }

    /// The input knowledge base with every inherited type written out as an assertion.
    pub fn to_knowledge_base(&self) -> KnowledgeBase {
        let mut kb = self.base.clone();
        for (i, classes) in self.types.iter().enumerate() {
            for class in classes {
                kb.abox.insert(Assertion::class(class.clone(), self.individuals[i].clone()));
            }
        }
        kb
    }

    fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.individuals.len())
    }

    fn full_set(&self) -> FixedBitSet {
        let mut all = self.empty_set();
        all.insert_range(..);
        all
    }

    /// Extension of `expr` as a bit set over individual indices.
    pub(crate) fn extension_bits(&self, expr: &ClassExpression) -> FixedBitSet {
        let mut memo = HashMap::new();
        self.eval(expr, &mut memo)
    }

    fn eval<'e>(&self, expr: &'e ClassExpression, memo: &mut HashMap<&'e ClassExpression, FixedBitSet>) -> FixedBitSet {
        if let Some(hit) = memo.get(expr) {
            return hit.clone();
        }
        let result = match expr {
            ClassExpression::Top => self.full_set(),
            ClassExpression::Bottom => self.empty_set(),
            ClassExpression::Atomic(a) => self.members.get(a).cloned().unwrap_or_else(|| self.empty_set()),
            ClassExpression::Not(c) => {
                let mut s = self.eval(c, memo);
                s.toggle_range(..);
                s
            }
            ClassExpression::And(l, r) => {
                let mut s = self.eval(l, memo);
                s.intersect_with(&self.eval(r, memo));
                s
            }
            ClassExpression::Or(l, r) => {
                let mut s = self.eval(l, memo);
                s.union_with(&self.eval(r, memo));
                s
            }
            ClassExpression::Exists(role, c) => {
                let filler = self.eval(c, memo);
                let mut s = self.empty_set();
                if let Some(per_role) = self.successors.get(role) {
                    for (i, succ) in per_role.iter().enumerate() {
                        if succ.iter().any(|&j| filler.contains(j)) {
                            s.insert(i);
                        }
                    }
                }
                s
            }
            ClassExpression::Forall(role, c) => {
                let filler = self.eval(c, memo);
                match self.successors.get(role) {
                    None => self.full_set(),
                    Some(per_role) => {
                        let mut s = self.empty_set();
                        for (i, succ) in per_role.iter().enumerate() {
                            if succ.iter().all(|&j| filler.contains(j)) {
                                s.insert(i);
                            }
                        }
                        s
                    }
                }
            }
        };
        memo.insert(expr, result.clone());
        result
    }

    /// All individuals falling under `expr`.
    pub fn retrieve(&self, expr: &ClassExpression) -> BTreeSet<String> {
        let canonical = expr.canonicalize();
        self.extension_bits(&canonical).ones().map(|i| self.individuals[i].clone()).collect()
    }

    pub fn instance_check(&self, individual: &str, expr: &ClassExpression) -> Result<bool, ReasonerError> {
        let i = self
            .individual_index(individual)
            .ok_or_else(|| ReasonerError::UnknownIndividual(individual.to_string()))?;
        Ok(self.holds(i, expr))
    }

    // Point evaluation; never builds a full extension.
    fn holds(&self, i: usize, expr: &ClassExpression) -> bool {
        match expr {
            ClassExpression::Top => true,
            ClassExpression::Bottom => false,
            ClassExpression::Atomic(a) => self.types[i].contains(a),
            ClassExpression::Not(c) => !self.holds(i, c),
            ClassExpression::And(l, r) => self.holds(i, l) && self.holds(i, r),
            ClassExpression::Or(l, r) => self.holds(i, l) || self.holds(i, r),
            ClassExpression::Exists(role, c) => {
                self.successors.get(role).is_some_and(|s| s[i].iter().any(|&j| self.holds(j, c)))
            }
            ClassExpression::Forall(role, c) => {
                self.successors.get(role).is_none_or(|s| s[i].iter().all(|&j| self.holds(j, c)))
            }
        }
    }

    /// Confusion counts of `expr` over the problem's examples.
    pub fn coverage(&self, expr: &ClassExpression, problem: &LearningProblem) -> Result<Coverage, ReasonerError> {
        let mut cov = Coverage::default();
        for p in &problem.positives {
            if self.instance_check(p, expr)? {
                cov.true_pos.insert(p.clone());
            } else {
                cov.false_neg.insert(p.clone());
            }
        }
        for n in &problem.negatives {
            if self.instance_check(n, expr)? {
                cov.false_pos.insert(n.clone());
            } else {
                cov.true_neg.insert(n.clone());
            }
        }
        cov.accuracy = accuracy(cov.true_pos.len() + cov.true_neg.len(), problem.len());
        Ok(cov)
    }

    /// Every individual the problem mentions must be in the universe.
    pub fn check_problem(&self, problem: &LearningProblem) -> Result<(), ReasonerError> {
        match problem.examples().find(|e| !self.contains_individual(e)) {
            Some(missing) => Err(ReasonerError::UnknownIndividual(missing.to_string())),
            None => Ok(()),
        }
    }
}

pub(crate) fn accuracy(correct: usize, total: usize) -> Rational64 {
    if total == 0 {
        return Rational64::from_integer(0);
    }
    Rational64::new(correct as i64, total as i64)
}

/// Partition of the examples by an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub true_pos: BTreeSet<String>,
    pub false_pos: BTreeSet<String>,
    pub true_neg: BTreeSet<String>,
    pub false_neg: BTreeSet<String>,
    pub accuracy: Rational64,
}

impl Default for Coverage {
    fn default() -> Self {
        Coverage {
            true_pos: BTreeSet::new(),
            false_pos: BTreeSet::new(),
            true_neg: BTreeSet::new(),
            false_neg: BTreeSet::new(),
            accuracy: Rational64::from_integer(0),
        }
    }
}

impl Coverage {
    pub fn tp(&self) -> usize {
        self.true_pos.len()
    }

    pub fn fp(&self) -> usize {
        self.false_pos.len()
    }

    pub fn tn(&self) -> usize {
        self.true_neg.len()
    }

    pub fn fn_(&self) -> usize {
        self.false_neg.len()
    }

    /// Covered examples, positive or negative.
    pub fn covered(&self) -> BTreeSet<String> {
        self.true_pos.union(&self.false_pos).cloned().collect()
    }
}

/// Per-class member counts, mostly useful for debugging fixtures.
pub fn class_sizes(mkb: &MaterializedKb) -> BTreeMap<String, usize> {
    mkb.base
        .signature
        .atomic_classes
        .iter()
        .map(|c| (c.clone(), mkb.members.get(c).map_or(0, |b| b.count_ones(..))))
        .collect()
}
