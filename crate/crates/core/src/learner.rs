//! Top-down class expression learning from positive and negative examples.
//!
//! The refinement operator only specializes: every refinement of `C` has an
//! extension contained in that of `C`. Search is best-first from `Thing`.
//! Nodes are refined incrementally: the k-th expansion of a node of length
//! `L` produces refinements of length at most `L + k`, and each expansion
//! lowers the node's priority by `expansion_penalty`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::ClassExpression;
use crate::reasoner::{accuracy, Coverage, MaterializedKb, ReasonerError};
use crate::text::render_raw;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("problem has no positive examples")]
    NoPositives,
    #[error("problem has no negative examples")]
    NoNegatives,
    #[error("`{0}` is both a positive and a negative example")]
    Overlap(String),
}

/// Positive and negative example individuals; disjoint and both non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearningProblem {
    pub positives: BTreeSet<String>,
    pub negatives: BTreeSet<String>,
}

impl LearningProblem {
    pub fn new<P, N, S, T>(positives: P, negatives: N) -> Result<Self, ProblemError>
    where
        P: IntoIterator<Item = S>,
        N: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let positives: BTreeSet<String> = positives.into_iter().map(Into::into).collect();
        let negatives: BTreeSet<String> = negatives.into_iter().map(Into::into).collect();
        if positives.is_empty() {
            return Err(ProblemError::NoPositives);
        }
        if negatives.is_empty() {
            return Err(ProblemError::NoNegatives);
        }
        if let Some(both) = positives.intersection(&negatives).next() {
            return Err(ProblemError::Overlap(both.clone()));
        }
        Ok(LearningProblem { positives, negatives })
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn examples(&self) -> impl Iterator<Item = &str> {
        self.positives.iter().chain(&self.negatives).map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("{0} must not be negative")]
    Negative(&'static str),
    #[error("noise must be in [0, 1)")]
    Noise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_expansions: usize,
    pub max_length: usize,
    pub top_k: usize,
    /// Weight of expression length in a solution's score.
    pub length_penalty: Rational64,
    /// Accuracy below 1 still accepted as a solution.
    pub noise: Rational64,
    pub enable_disjunction: bool,
    /// Priority lost per unit of a node's refinement horizon (length plus expansions so far).
    pub expansion_penalty: Rational64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_expansions: 10_000,
            max_length: 10,
            top_k: 10,
            length_penalty: Rational64::new(1, 100),
            noise: Rational64::zero(),
            enable_disjunction: false,
            expansion_penalty: Rational64::new(1, 10),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_expansions == 0 {
            return Err(ConfigError::Zero("max_expansions"));
        }
        if self.max_length == 0 {
            return Err(ConfigError::Zero("max_length"));
        }
        if self.top_k == 0 {
            return Err(ConfigError::Zero("top_k"));
        }
        if self.length_penalty < Rational64::zero() {
            return Err(ConfigError::Negative("length_penalty"));
        }
        if self.expansion_penalty < Rational64::zero() {
            return Err(ConfigError::Negative("expansion_penalty"));
        }
        if self.noise < Rational64::zero() || self.noise >= Rational64::one() {
            return Err(ConfigError::Noise);
        }
        Ok(())
    }
}

/// Parse "0.01", "1/100" or "3" into an exact rational.
pub fn parse_ratio(text: &str) -> Option<Rational64> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational64::new(num.trim().parse().ok()?, den));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int.checked_mul(scale)?.checked_add(frac)?;
    Some(Rational64::new(if negative { -num } else { num }, scale))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub expression: ClassExpression,
    pub coverage: Coverage,
    pub length: usize,
    pub score: Rational64,
    /// Set when the accuracy falls short of `1 - noise`.
    pub approximate: bool,
}

impl Solution {
    pub fn rendered(&self) -> String {
        render_raw(&self.expression)
    }
}

/// `accuracy - length_penalty * length`.
pub fn score(cov: &Coverage, length: usize, cfg: &SearchConfig) -> Rational64 {
    score_of(cov.accuracy, length, cfg)
}

fn score_of(acc: Rational64, length: usize, cfg: &SearchConfig) -> Rational64 {
    acc - cfg.length_penalty * Rational64::from_integer(length as i64)
}

fn qualifies(acc: Rational64, cfg: &SearchConfig) -> bool {
    acc >= Rational64::one() - cfg.noise
}

/// Re-score a given expression against a problem.
pub fn verify_solution(
    mkb: &MaterializedKb,
    expr: &ClassExpression,
    problem: &LearningProblem,
    cfg: &SearchConfig,
) -> Result<Solution, ReasonerError> {
    let expression = expr.canonicalize();
    let coverage = mkb.coverage(&expression, problem)?;
    let length = expression.length();
    Ok(Solution {
        score: score(&coverage, length, cfg),
        approximate: !qualifies(coverage.accuracy, cfg),
        expression,
        coverage,
        length,
    })
}

/// The downward refinement operator over one materialized knowledge base.
pub struct Refiner<'a> {
    mkb: &'a MaterializedKb,
    top: Vec<(ClassExpression, usize)>,
}

impl<'a> Refiner<'a> {
    pub fn new(mkb: &'a MaterializedKb, cfg: &SearchConfig) -> Self {
        let hierarchy = mkb.hierarchy();
        let roots: Vec<ClassExpression> = hierarchy.roots().map(ClassExpression::atomic).collect();
        let negated_leaves: Vec<ClassExpression> =
            hierarchy.leaves().map(|l| ClassExpression::not(ClassExpression::atomic(l))).collect();

        let mut top: BTreeSet<ClassExpression> = BTreeSet::new();
        top.extend(roots.iter().cloned());
        top.extend(negated_leaves.iter().cloned());
        for role in &mkb.base().signature.roles {
            top.insert(ClassExpression::exists(role.clone(), ClassExpression::Top));
            for filler in roots.iter().chain(&negated_leaves) {
                top.insert(ClassExpression::forall(role.clone(), filler.clone()));
            }
        }
        if cfg.enable_disjunction {
            for (i, a) in roots.iter().enumerate() {
                for b in &roots[i + 1..] {
                    top.insert(ClassExpression::or(a.clone(), b.clone()).canonicalize());
                }
            }
        }
        let top = top.into_iter().map(|e| {
            let len = e.length();
            (e, len)
        });
        Refiner { mkb, top: top.collect() }
    }

    /// ρ(⊤) restricted to length `budget`.
    fn top_within(&self, budget: usize) -> impl Iterator<Item = &ClassExpression> {
        self.top.iter().filter(move |(_, len)| *len <= budget).map(|(e, _)| e)
    }

    fn conjoin_top(&self, expr: &ClassExpression, budget: usize, out: &mut Vec<ClassExpression>) {
        let used = expr.length() + 1;
        if budget > used {
            for x in self.top_within(budget - used) {
                out.push(ClassExpression::and(expr.clone(), x.clone()));
            }
        }
    }

    fn refine_raw(&self, expr: &ClassExpression, budget: usize, out: &mut Vec<ClassExpression>) {
        if budget == 0 {
            return;
        }
        let hierarchy = self.mkb.hierarchy();
        match expr {
            ClassExpression::Top => out.extend(self.top_within(budget).cloned()),
            ClassExpression::Bottom => {}
            ClassExpression::Atomic(a) => {
                out.extend(hierarchy.direct_subs(a).map(ClassExpression::atomic));
                self.conjoin_top(expr, budget, out);
            }
            ClassExpression::Not(inner) => {
                if let ClassExpression::Atomic(a) = inner.as_ref() {
                    if budget >= 2 {
                        out.extend(
                            hierarchy.direct_supers(a).map(|s| ClassExpression::not(ClassExpression::atomic(s))),
                        );
                    }
                }
                self.conjoin_top(expr, budget, out);
            }
            ClassExpression::And(l, r) | ClassExpression::Or(l, r) => {
                let conjunction = matches!(expr, ClassExpression::And(..));
                let rebuild = |a: ClassExpression, b: ClassExpression| {
                    if conjunction {
                        ClassExpression::and(a, b)
                    } else {
                        ClassExpression::or(a, b)
                    }
                };
                let (l_len, r_len) = (l.length(), r.length());
                let mut tmp = Vec::new();
                if budget > r_len + 1 {
                    self.refine_raw(l, budget - r_len - 1, &mut tmp);
                    out.extend(tmp.drain(..).map(|l2| rebuild(l2, (**r).clone())));
                }
                if budget > l_len + 1 {
                    self.refine_raw(r, budget - l_len - 1, &mut tmp);
                    out.extend(tmp.drain(..).map(|r2| rebuild((**l).clone(), r2)));
                }
                if !conjunction {
                    out.push((**l).clone());
                    out.push((**r).clone());
                }
            }
            ClassExpression::Exists(role, filler) | ClassExpression::Forall(role, filler) => {
                let existential = matches!(expr, ClassExpression::Exists(..));
                if budget > 2 {
                    let mut tmp = Vec::new();
                    self.refine_raw(filler, budget - 2, &mut tmp);
                    out.extend(tmp.into_iter().map(|f| {
                        if existential {
                            ClassExpression::exists(role.clone(), f)
                        } else {
                            ClassExpression::forall(role.clone(), f)
                        }
                    }));
                }
                self.conjoin_top(expr, budget, out);
            }
        }
    }

    /// Canonical refinements of `expr` with length at most `budget`, excluding `expr` itself.
    pub fn refinements(&self, expr: &ClassExpression, budget: usize) -> BTreeSet<ClassExpression> {
        let mut raw = Vec::new();
        self.refine_raw(expr, budget, &mut raw);
        raw.iter().map(ClassExpression::canonicalize).filter(|c| c != expr && c.length() <= budget).collect()
    }
}

/// ρ(expr): all refinements up to `cfg.max_length`.
pub fn rho(expr: &ClassExpression, mkb: &MaterializedKb, cfg: &SearchConfig) -> BTreeSet<ClassExpression> {
    Refiner::new(mkb, cfg).refinements(expr, cfg.max_length)
}

/// One visited expression in the search tree.
#[derive(Clone, Debug)]
pub struct SearchNode {
    pub expression: ClassExpression,
    pub rendered: Rc<str>,
    pub length: usize,
    pub accuracy: Rational64,
    pub score: Rational64,
    pub expansion_count: usize,
}

impl SearchNode {
    fn priority(&self, cfg: &SearchConfig) -> Rational64 {
        let horizon = (self.length + self.expansion_count) as i64;
        self.score - cfg.expansion_penalty * Rational64::from_integer(horizon)
    }
}

#[derive(PartialEq, Eq)]
struct FrontierEntry {
    priority: Rational64,
    length: usize,
    rendered: Rc<str>,
    node: usize,
}

impl Ord for FrontierEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .cmp(&other.priority)
            .then_with(|| other.length.cmp(&self.length))
            .then_with(|| other.rendered.cmp(&self.rendered))
    }
}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solutions: Vec<Solution>,
    pub expansions_used: usize,
    /// True when the frontier ran empty before the expansion budget did.
    pub exhausted: bool,
    pub nodes_visited: usize,
}

pub fn search(
    mkb: &MaterializedKb,
    problem: &LearningProblem,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, LearnError> {
    search_with(mkb, problem, cfg, &mut |_, _| {})
}

/// Like [`search`], reporting every (node, refinement) pair the operator produces.
pub fn search_with(
    mkb: &MaterializedKb,
    problem: &LearningProblem,
    cfg: &SearchConfig,
    observer: &mut dyn FnMut(&ClassExpression, &ClassExpression),
) -> Result<SearchOutcome, LearnError> {
    cfg.validate()?;
    mkb.check_problem(problem)?;

    let bits = |names: &BTreeSet<String>| {
        let mut b = FixedBitSet::with_capacity(mkb.universe_size());
        for n in names {
            b.insert(mkb.individual_index(n).expect("checked above"));
        }
        b
    };
    let pos = bits(&problem.positives);
    let neg = bits(&problem.negatives);
    let total = problem.len();

    let refiner = Refiner::new(mkb, cfg);
    let mut nodes: Vec<SearchNode> = Vec::new();
    let mut visited: HashMap<ClassExpression, usize> = HashMap::new();
    let mut frontier = BinaryHeap::new();

    let mut visit = |expr: ClassExpression, nodes: &mut Vec<SearchNode>, frontier: &mut BinaryHeap<FrontierEntry>| {
        if visited.contains_key(&expr) {
            return;
        }
        let ext = mkb.extension_bits(&expr);
        let tp = ext.intersection(&pos).count();
        let fp = ext.intersection(&neg).count();
        let acc = accuracy(tp + problem.negatives.len() - fp, total);
        let length = expr.length();
        let node = SearchNode {
            rendered: render_raw(&expr).into(),
            score: score_of(acc, length, cfg),
            accuracy: acc,
            length,
            expansion_count: 0,
            expression: expr.clone(),
        };
        frontier.push(FrontierEntry {
            priority: node.priority(cfg),
            length,
            rendered: node.rendered.clone(),
            node: nodes.len(),
        });
        visited.insert(expr, nodes.len());
        nodes.push(node);
    };

    visit(ClassExpression::Top, &mut nodes, &mut frontier);
    let mut expansions = 0;
    while expansions < cfg.max_expansions {
        let Some(entry) = frontier.pop() else { break };
        let idx = entry.node;
        let bound = (nodes[idx].length + nodes[idx].expansion_count + 1).min(cfg.max_length);
        let parent = nodes[idx].expression.clone();
        let children = refiner.refinements(&parent, bound);
        expansions += 1;
        nodes[idx].expansion_count += 1;
        for child in children {
            observer(&parent, &child);
            visit(child, &mut nodes, &mut frontier);
        }
        if bound < cfg.max_length {
            let node = &nodes[idx];
            frontier.push(FrontierEntry {
                priority: node.priority(cfg),
                length: node.length,
                rendered: node.rendered.clone(),
                node: idx,
            });
        }
    }
    let exhausted = frontier.is_empty();

    let mut ranked: Vec<&SearchNode> = nodes.iter().filter(|n| qualifies(n.accuracy, cfg)).collect();
    let approximate = ranked.is_empty();
    if approximate {
        ranked = nodes.iter().collect();
        ranked.sort_by_key(|n| (Reverse(n.score), n.length, n.rendered.clone()));
    } else {
        ranked.sort_by_key(|n| (Reverse(n.accuracy), n.length, n.rendered.clone()));
    }

    let solutions = ranked
        .into_iter()
        .take(cfg.top_k)
        .map(|n| verify_solution(mkb, &n.expression, problem, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SearchOutcome { solutions, expansions_used: expansions, exhausted, nodes_visited: nodes.len() })
}
