//! Independent reference implementations used as test oracles. None of these
//! go through `MaterializedKb`; they work on the raw knowledge base.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dlexplain::fixtures;
use dlexplain::fol::{FolFormula, Var};
use dlexplain::model::{Assertion, ClassExpression, KnowledgeBase};
use dlexplain::text::{parse_kb, parse_problem};
use dlexplain::LearningProblem;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub name: &'static str,
    pub kb: KnowledgeBase,
    pub problem: LearningProblem,
}

pub fn fixture(name: &'static str, kb: &str, problem: &str) -> Fixture {
    let kb = parse_kb(kb).unwrap_or_else(|e| panic!("{name}: {e}"));
    let problem = parse_problem(problem, &kb.signature).unwrap_or_else(|e| panic!("{name}: {e}"));
    Fixture { name, kb, problem }
}

pub fn warehouse() -> Fixture {
    fixture("warehouse", fixtures::WAREHOUSE_KB, fixtures::WAREHOUSE_PROBLEM)
}

pub fn trains() -> Fixture {
    fixture("trains", fixtures::TRAINS_KB, fixtures::TRAINS_PROBLEM)
}

pub fn prop() -> Fixture {
    fixture("prop", fixtures::PROP_KB, fixtures::PROP_PROBLEM)
}

/// Declared but unused role `idle`, isolated individuals, a diamond hierarchy.
pub const SPARSE_KB: &str = "\
class A
class B
class C
class D
role r
role idle
ind a
ind b
ind c
ind d
sub B A
sub C A
sub D B
sub D C
type a D
type b B
rel r a b
rel r b b
rel r c a
";

pub fn sparse() -> Fixture {
    fixture("sparse", SPARSE_KB, "+ a\n+ b\n- c\n- d\n")
}

pub fn all_fixtures() -> Vec<Fixture> {
    vec![warehouse(), trains(), prop(), sparse()]
}

/// Superclasses of every class by repeated rule application until nothing
/// changes (reflexive).
pub fn naive_closure(kb: &KnowledgeBase) -> BTreeMap<String, BTreeSet<String>> {
    let edges: Vec<(String, String)> = kb
        .tbox
        .iter()
        .filter_map(|ax| match (&ax.sub, &ax.sup) {
            (ClassExpression::Atomic(a), ClassExpression::Atomic(b)) => Some((a.clone(), b.clone())),
            _ => None,
        })
        .collect();
    let mut sup: BTreeMap<String, BTreeSet<String>> =
        kb.signature.atomic_classes.iter().map(|c| (c.clone(), BTreeSet::from([c.clone()]))).collect();
    loop {
        let mut changed = false;
        for (a, b) in &edges {
            let from_b = sup.get(b).cloned().unwrap_or_default();
            let entry = sup.entry(a.clone()).or_default();
            for x in from_b.into_iter().chain([b.clone()]) {
                changed |= entry.insert(x);
            }
        }
        if !changed {
            return sup;
        }
    }
}

/// Finite structure induced by the knowledge base under the closed-world reading.
pub struct Structure {
    pub domain: Vec<String>,
    pub classes: BTreeMap<String, BTreeSet<String>>,
    pub roles: BTreeMap<String, BTreeSet<(String, String)>>,
}

impl Structure {
    pub fn new(kb: &KnowledgeBase) -> Self {
        let closure = naive_closure(kb);
        let mut classes: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut roles: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
        for a in &kb.abox {
            match a {
                Assertion::Class { class, individual } => {
                    for c in closure.get(class).into_iter().flatten() {
                        classes.entry(c.clone()).or_default().insert(individual.clone());
                    }
                }
                Assertion::Role { role, subject, object } => {
                    roles.entry(role.clone()).or_default().insert((subject.clone(), object.clone()));
                }
            }
        }
        Structure { domain: kb.signature.individuals.iter().cloned().collect(), classes, roles }
    }

    fn has(&self, class: &str, a: &str) -> bool {
        self.classes.get(class).is_some_and(|s| s.contains(a))
    }

    fn related(&self, role: &str, a: &str, b: &str) -> bool {
        self.roles.get(role).is_some_and(|s| s.contains(&(a.to_string(), b.to_string())))
    }

    /// Straight recursion over the grammar, one individual at a time.
    pub fn holds(&self, a: &str, expr: &ClassExpression) -> bool {
        match expr {
            ClassExpression::Top => true,
            ClassExpression::Bottom => false,
            ClassExpression::Atomic(c) => self.has(c, a),
            ClassExpression::Not(c) => !self.holds(a, c),
            ClassExpression::And(l, r) => self.holds(a, l) && self.holds(a, r),
            ClassExpression::Or(l, r) => self.holds(a, l) || self.holds(a, r),
            ClassExpression::Exists(r, c) => self.domain.iter().any(|b| self.related(r, a, b) && self.holds(b, c)),
            ClassExpression::Forall(r, c) => self.domain.iter().all(|b| !self.related(r, a, b) || self.holds(b, c)),
        }
    }

    pub fn extension(&self, expr: &ClassExpression) -> BTreeSet<String> {
        self.domain.iter().filter(|a| self.holds(a, expr)).cloned().collect()
    }

    /// Tarskian evaluation of a first-order formula under `env`.
    pub fn models(&self, f: &FolFormula, env: &mut BTreeMap<Var, String>) -> bool {
        match f {
            FolFormula::True => true,
            FolFormula::False => false,
            FolFormula::Pred1(p, v) => self.has(p, &env[v]),
            FolFormula::Pred2(r, v, w) => self.related(r, &env[v], &env[w]),
            FolFormula::Not(g) => !self.models(g, env),
            FolFormula::And(l, r) => self.models(l, env) && self.models(r, env),
            FolFormula::Or(l, r) => self.models(l, env) || self.models(r, env),
            FolFormula::Implies(l, r) => !self.models(l, env) || self.models(r, env),
            FolFormula::ForallVar(v, g) | FolFormula::ExistsVar(v, g) => {
                let universal = matches!(f, FolFormula::ForallVar(..));
                let saved = env.get(v).cloned();
                let mut result = universal;
                for d in &self.domain {
                    env.insert(*v, d.clone());
                    if self.models(g, env) != universal {
                        result = !universal;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(*v, s),
                    None => env.remove(v),
                };
                result
            }
        }
    }

    /// Individuals `a` with `f[x0 := a]` true.
    pub fn fol_extension(&self, f: &FolFormula) -> BTreeSet<String> {
        self.domain
            .iter()
            .filter(|a| {
                let mut env = BTreeMap::from([(Var(0), a.to_string())]);
                self.models(f, &mut env)
            })
            .cloned()
            .collect()
    }
}

/// Random expression of at most `depth` nested constructors over the
/// knowledge base's class and role names.
pub fn random_expression(rng: &mut ChaCha8Rng, kb: &KnowledgeBase, depth: u32) -> ClassExpression {
    let classes: Vec<&String> = kb.signature.atomic_classes.iter().collect();
    let roles: Vec<&String> = kb.signature.roles.iter().collect();
    gen(rng, &classes, &roles, depth)
}

fn gen(rng: &mut ChaCha8Rng, classes: &[&String], roles: &[&String], depth: u32) -> ClassExpression {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => ClassExpression::Top,
            1 => ClassExpression::Bottom,
            _ => ClassExpression::atomic(classes.choose(rng).unwrap().as_str()),
        };
    }
    let pick = if roles.is_empty() { rng.gen_range(0..3) } else { rng.gen_range(0..5) };
    let sub = |rng: &mut ChaCha8Rng| gen(rng, classes, roles, depth - 1);
    match pick {
        0 => ClassExpression::not(sub(rng)),
        1 => ClassExpression::and(sub(rng), sub(rng)),
        2 => ClassExpression::or(sub(rng), sub(rng)),
        3 => ClassExpression::exists(roles.choose(rng).unwrap().as_str(), sub(rng)),
        _ => ClassExpression::forall(roles.choose(rng).unwrap().as_str(), sub(rng)),
    }
}

/// Proptest strategy over fixed class and role names.
pub fn expression_strategy(classes: Vec<String>, roles: Vec<String>) -> impl Strategy<Value = ClassExpression> {
    let leaf = prop_oneof![
        1 => Just(ClassExpression::Top),
        1 => Just(ClassExpression::Bottom),
        8 => proptest::sample::select(classes).prop_map(ClassExpression::Atomic),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let roles = roles.clone();
        let mut options: Vec<BoxedStrategy<ClassExpression>> = vec![
            inner.clone().prop_map(ClassExpression::not).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ClassExpression::and(l, r)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ClassExpression::or(l, r)).boxed(),
        ];
        if !roles.is_empty() {
            options.push(
                (proptest::sample::select(roles.clone()), inner.clone())
                    .prop_map(|(r, c)| ClassExpression::exists(r, c))
                    .boxed(),
            );
            options.push(
                (proptest::sample::select(roles), inner).prop_map(|(r, c)| ClassExpression::forall(r, c)).boxed(),
            );
        }
        proptest::strategy::Union::new(options)
    })
}

pub fn fixture_strategy(f: &Fixture) -> impl Strategy<Value = ClassExpression> {
    expression_strategy(
        f.kb.signature.atomic_classes.iter().cloned().collect(),
        f.kb.signature.roles.iter().cloned().collect(),
    )
}

/// Generic names, including some that are keyword prefixes.
pub fn generic_strategy() -> impl Strategy<Value = ClassExpression> {
    expression_strategy(
        ["A", "B", "C", "some_thing", "notable", "Things", "onlyX"].map(String::from).to_vec(),
        ["r", "hasPart", "ors"].map(String::from).to_vec(),
    )
}

/// Every quantifier on a root-to-leaf path binds exactly one more than the
/// enclosing variable; every predicate uses the innermost one (and, for a
/// role, the one just outside it).
pub fn check_vars(f: &FolFormula, current: Var) -> Result<(), String> {
    match f {
        FolFormula::True | FolFormula::False => Ok(()),
        FolFormula::Pred1(_, v) if *v == current => Ok(()),
        FolFormula::Pred2(_, v, w) if w.0 == current.0 && v.0 + 1 == current.0 => Ok(()),
        FolFormula::Not(g) => check_vars(g, current),
        FolFormula::And(l, r) | FolFormula::Or(l, r) | FolFormula::Implies(l, r) => {
            check_vars(l, current)?;
            check_vars(r, current)
        }
        FolFormula::ForallVar(v, g) | FolFormula::ExistsVar(v, g) if v.0 == current.0 + 1 => check_vars(g, *v),
        other => Err(format!("bad variable use in {other} under {current}")),
    }
}

/// Expected shapes, one rule per constructor.
pub fn follows_rules(e: &ClassExpression, f: &FolFormula, x: Var) -> bool {
    use ClassExpression as C;
    match (e, f) {
        (C::Top, FolFormula::True) | (C::Bottom, FolFormula::False) => true,
        (C::Atomic(a), FolFormula::Pred1(p, v)) => a == p && *v == x,
        (C::Not(c), FolFormula::Not(g)) => follows_rules(c, g, x),
        (C::And(l, r), FolFormula::And(fl, fr)) | (C::Or(l, r), FolFormula::Or(fl, fr)) => {
            follows_rules(l, fl, x) && follows_rules(r, fr, x)
        }
        (C::Exists(r, c), FolFormula::ExistsVar(y, body)) => match body.as_ref() {
            FolFormula::And(rel, g) => {
                **rel == FolFormula::Pred2(r.clone(), x, *y) && *y == x.next() && follows_rules(c, g, *y)
            }
            _ => false,
        },
        (C::Forall(r, c), FolFormula::ForallVar(y, body)) => match body.as_ref() {
            FolFormula::Implies(rel, g) => {
                **rel == FolFormula::Pred2(r.clone(), x, *y) && *y == x.next() && follows_rules(c, g, *y)
            }
            _ => false,
        },
        _ => false,
    }
}
