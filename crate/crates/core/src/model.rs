//! ALC signatures, class expressions, axioms, assertions and knowledge bases.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::text;

/// Words reserved by the expression grammar; never valid as names.
pub const KEYWORDS: [&str; 7] = ["some", "only", "and", "or", "not", "Thing", "Nothing"];

/// First char alphabetic, then alphanumerics or underscore, and not a keyword.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameKind {
    Class,
    Role,
    Individual,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Class => "class",
            NameKind::Role => "role",
            NameKind::Individual => "individual",
        })
    }
}

/// The vocabulary of a knowledge base: atomic classes, roles and individuals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub atomic_classes: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_classes<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atomic_classes.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn with_roles<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.roles.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn with_individuals<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.individuals.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn is_class(&self, name: &str) -> bool {
        self.atomic_classes.contains(name)
    }

    pub fn is_role(&self, name: &str) -> bool {
        self.roles.contains(name)
    }

    pub fn is_individual(&self, name: &str) -> bool {
        self.individuals.contains(name)
    }

    /// All kinds under which `name` is declared (more than one means the signature is broken).
    pub fn kinds_of(&self, name: &str) -> Vec<NameKind> {
        let mut kinds = Vec::new();
        if self.is_class(name) {
            kinds.push(NameKind::Class);
        }
        if self.is_role(name) {
            kinds.push(NameKind::Role);
        }
        if self.is_individual(name) {
            kinds.push(NameKind::Individual);
        }
        kinds
    }

    pub fn is_empty(&self) -> bool {
        self.atomic_classes.is_empty() && self.roles.is_empty() && self.individuals.is_empty()
    }
}

/// An ALC class expression, extended with Top and Bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpression {
    Top,
    Bottom,
    Atomic(String),
    Not(Box<ClassExpression>),
    And(Box<ClassExpression>, Box<ClassExpression>),
    Or(Box<ClassExpression>, Box<ClassExpression>),
    Exists(String, Box<ClassExpression>),
    Forall(String, Box<ClassExpression>),
}

impl ClassExpression {
    pub fn atomic(name: impl Into<String>) -> Self {
        ClassExpression::Atomic(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ClassExpression) -> Self {
        ClassExpression::Not(Box::new(inner))
    }

    pub fn and(left: ClassExpression, right: ClassExpression) -> Self {
        ClassExpression::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: ClassExpression, right: ClassExpression) -> Self {
        ClassExpression::Or(Box::new(left), Box::new(right))
    }

    pub fn exists(role: impl Into<String>, filler: ClassExpression) -> Self {
        ClassExpression::Exists(role.into(), Box::new(filler))
    }

    pub fn forall(role: impl Into<String>, filler: ClassExpression) -> Self {
        ClassExpression::Forall(role.into(), Box::new(filler))
    }

    /// Syntactic length: 1 per class/Top/Bottom, 1 per boolean connective,
    /// 2 per quantifier (the quantifier plus its role name).
    pub fn length(&self) -> usize {
        match self {
            ClassExpression::Top | ClassExpression::Bottom | ClassExpression::Atomic(_) => 1,
            ClassExpression::Not(c) => 1 + c.length(),
            ClassExpression::And(l, r) | ClassExpression::Or(l, r) => 1 + l.length() + r.length(),
            ClassExpression::Exists(_, c) | ClassExpression::Forall(_, c) => 2 + c.length(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, ClassExpression::Atomic(_))
    }

    /// Visit every class name and role name used in the expression.
    pub fn for_each_name(&self, f: &mut impl FnMut(NameKind, &str)) {
        match self {
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Atomic(a) => f(NameKind::Class, a),
            ClassExpression::Not(c) => c.for_each_name(f),
            ClassExpression::And(l, r) | ClassExpression::Or(l, r) => {
                l.for_each_name(f);
                r.for_each_name(f);
            }
            ClassExpression::Exists(role, c) | ClassExpression::Forall(role, c) => {
                f(NameKind::Role, role);
                c.for_each_name(f);
            }
        }
    }

    /// Equal-extension normal form: And/Or chains flattened, sorted by rendered
    /// text, deduplicated and rebuilt right-leaning; double negation removed.
    pub fn canonicalize(&self) -> ClassExpression {
        match self {
            ClassExpression::Top | ClassExpression::Bottom | ClassExpression::Atomic(_) => self.clone(),
            ClassExpression::Not(c) => match c.canonicalize() {
                ClassExpression::Not(inner) => *inner,
                other => ClassExpression::not(other),
            },
            ClassExpression::And(..) => canonical_chain(self, true),
            ClassExpression::Or(..) => canonical_chain(self, false),
            ClassExpression::Exists(role, c) => ClassExpression::exists(role.clone(), c.canonicalize()),
            ClassExpression::Forall(role, c) => ClassExpression::forall(role.clone(), c.canonicalize()),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_raw(self))
    }
}

fn canonical_chain(expr: &ClassExpression, conjunction: bool) -> ClassExpression {
    let mut operands = Vec::new();
    collect_operands(expr, conjunction, &mut operands);
    let mut keyed: Vec<(String, ClassExpression)> =
        operands.into_iter().map(|op| (text::render_raw(&op), op)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);

    let mut iter = keyed.into_iter().rev().map(|(_, op)| op);
    let mut acc = iter.next().expect("chain has at least one operand");
    for op in iter {
        acc = if conjunction { ClassExpression::and(op, acc) } else { ClassExpression::or(op, acc) };
    }
    acc
}

fn collect_operands(expr: &ClassExpression, conjunction: bool, out: &mut Vec<ClassExpression>) {
    match (expr, conjunction) {
        (ClassExpression::And(l, r), true) | (ClassExpression::Or(l, r), false) => {
            collect_operands(l, conjunction, out);
            collect_operands(r, conjunction, out);
        }
        _ => {
            let canon = expr.canonicalize();
            match (&canon, conjunction) {
                (ClassExpression::And(..), true) | (ClassExpression::Or(..), false) => {
                    collect_operands(&canon, conjunction, out)
                }
                _ => out.push(canon),
            }
        }
    }
}

/// General class inclusion `sub ⊑ sup`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub sub: ClassExpression,
    pub sup: ClassExpression,
}

impl Axiom {
    pub fn new(sub: ClassExpression, sup: ClassExpression) -> Self {
        Axiom { sub, sup }
    }

    pub fn atomic(sub: impl Into<String>, sup: impl Into<String>) -> Self {
        Axiom::new(ClassExpression::atomic(sub), ClassExpression::atomic(sup))
    }

    /// Both sides are class names.
    pub fn as_atomic(&self) -> Option<(&str, &str)> {
        match (&self.sub, &self.sup) {
            (ClassExpression::Atomic(a), ClassExpression::Atomic(b)) => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.sub, self.sup)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Class { class: String, individual: String },
    Role { role: String, subject: String, object: String },
}

impl Assertion {
    pub fn class(class: impl Into<String>, individual: impl Into<String>) -> Self {
        Assertion::Class { class: class.into(), individual: individual.into() }
    }

    pub fn role(role: impl Into<String>, subject: impl Into<String>, object: impl Into<String>) -> Self {
        Assertion::Role { role: role.into(), subject: subject.into(), object: object.into() }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Class { class, individual } => write!(f, "{class}({individual})"),
            Assertion::Role { role, subject, object } => write!(f, "{role}({subject},{object})"),
        }
    }
}

/// Signature plus TBox and ABox. Both boxes have set semantics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub signature: Signature,
    pub tbox: BTreeSet<Axiom>,
    pub abox: BTreeSet<Assertion>,
}

/// A well-formedness or hierarchy problem. `subject` is the offending
/// axiom/assertion (or declaration) and `name` the name at fault.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub subject: String,
    pub name: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.subject, self.message, self.name)
    }
}

impl KnowledgeBase {
    pub fn new(signature: Signature) -> Self {
        KnowledgeBase { signature, ..Default::default() }
    }

    pub fn add_axiom(&mut self, axiom: Axiom) -> bool {
        self.tbox.insert(axiom)
    }

    pub fn add_assertion(&mut self, assertion: Assertion) -> bool {
        self.abox.insert(assertion)
    }

    pub fn is_empty(&self) -> bool {
        self.signature.is_empty() && self.tbox.is_empty() && self.abox.is_empty()
    }

    /// Every name used in the TBox/ABox must be declared with the right kind;
    /// the three name sets must be disjoint and hold valid identifiers.
    pub fn check_well_formed(&self) -> Vec<Diagnostic> {
        let sig = &self.signature;
        let mut out = Vec::new();

        let declared = sig
            .atomic_classes
            .iter()
            .map(|n| (NameKind::Class, n))
            .chain(sig.roles.iter().map(|n| (NameKind::Role, n)))
            .chain(sig.individuals.iter().map(|n| (NameKind::Individual, n)));
        for (kind, name) in declared {
            if !is_identifier(name) {
                out.push(Diagnostic {
                    subject: format!("{kind} {name}"),
                    name: name.clone(),
                    message: "not a valid identifier".into(),
                });
            }
            let kinds = sig.kinds_of(name);
            if kinds.len() > 1 && kinds[0] == kind {
                out.push(Diagnostic {
                    subject: format!("{kind} {name}"),
                    name: name.clone(),
                    message: format!(
                        "declared with several kinds: {}",
                        kinds.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    ),
                });
            }
        }

        for axiom in &self.tbox {
            let mut check = |kind: NameKind, name: &str| {
                let ok = match kind {
                    NameKind::Class => sig.is_class(name),
                    NameKind::Role => sig.is_role(name),
                    NameKind::Individual => sig.is_individual(name),
                };
                if !ok {
                    out.push(Diagnostic {
                        subject: axiom.to_string(),
                        name: name.to_string(),
                        message: format!("undeclared {kind}"),
                    });
                }
            };
            axiom.sub.for_each_name(&mut check);
            axiom.sup.for_each_name(&mut check);
        }

        for assertion in &self.abox {
            let mut expect = |kind: NameKind, name: &str, ok: bool| {
                if !ok {
                    out.push(Diagnostic {
                        subject: assertion.to_string(),
                        name: name.to_string(),
                        message: format!("undeclared {kind}"),
                    });
                }
            };
            match assertion {
                Assertion::Class { class, individual } => {
                    expect(NameKind::Class, class, sig.is_class(class));
                    expect(NameKind::Individual, individual, sig.is_individual(individual));
                }
                Assertion::Role { role, subject, object } => {
                    expect(NameKind::Role, role, sig.is_role(role));
                    expect(NameKind::Individual, subject, sig.is_individual(subject));
                    expect(NameKind::Individual, object, sig.is_individual(object));
                }
            }
        }
        out
    }

    pub fn subclass_closure(&self) -> SubclassClosure {
        ClassHierarchy::from_kb(self).into_closure()
    }
}

/// Reflexive-transitive closure of the atomic subsumption axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubclassClosure {
    pub supers: BTreeMap<String, BTreeSet<String>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SubclassClosure {
    pub fn of(&self, class: &str) -> Option<&BTreeSet<String>> {
        self.supers.get(class)
    }
}

/// Declared atomic hierarchy: direct edges from `sub A B` axioms and their closure.
#[derive(Clone, Debug, Default)]
pub struct ClassHierarchy {
    direct_supers: BTreeMap<String, BTreeSet<String>>,
    direct_subs: BTreeMap<String, BTreeSet<String>>,
    closure: BTreeMap<String, BTreeSet<String>>,
    diagnostics: Vec<Diagnostic>,
}

impl ClassHierarchy {
    pub fn from_kb(kb: &KnowledgeBase) -> Self {
        let mut h = ClassHierarchy::default();
        for class in &kb.signature.atomic_classes {
            h.direct_supers.entry(class.clone()).or_default();
            h.direct_subs.entry(class.clone()).or_default();
        }
        for axiom in &kb.tbox {
            match axiom.as_atomic() {
                Some((sub, sup)) => {
                    h.direct_subs.entry(sub.to_string()).or_default();
                    h.direct_supers.entry(sup.to_string()).or_default();
                    if sub != sup {
                        h.direct_supers.get_mut(sub).unwrap().insert(sup.to_string());
                        h.direct_subs.get_mut(sup).unwrap().insert(sub.to_string());
                    }
                }
                None => h.diagnostics.push(Diagnostic {
                    subject: axiom.to_string(),
                    name: String::new(),
                    message: "complex axiom not used for retrieval".into(),
                }),
            }
        }

        for class in h.direct_supers.keys() {
            let mut seen = BTreeSet::from([class.clone()]);
            let mut queue = VecDeque::from([class.as_str()]);
            while let Some(current) = queue.pop_front() {
                for sup in &h.direct_supers[current] {
                    if seen.insert(sup.clone()) {
                        queue.push_back(sup);
                    }
                }
            }
            h.closure.insert(class.clone(), seen);
        }

        let mut cycles = Vec::new();
        for (class, supers) in &h.closure {
            for sup in supers {
                if sup > class && h.closure.get(sup).is_some_and(|s| s.contains(class)) {
                    cycles.push(Diagnostic {
                        subject: format!("sub {class} ... {sup}"),
                        name: class.clone(),
                        message: format!("cycle in class hierarchy: {class} and {sup} subsume each other"),
                    });
                }
            }
        }
        h.diagnostics.extend(cycles);
        h
    }

    pub fn direct_supers(&self, class: &str) -> impl Iterator<Item = &str> {
        self.direct_supers.get(class).into_iter().flatten().map(String::as_str)
    }

    pub fn direct_subs(&self, class: &str) -> impl Iterator<Item = &str> {
        self.direct_subs.get(class).into_iter().flatten().map(String::as_str)
    }

    /// Classes with no declared superclass.
    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.direct_supers.iter().filter(|(_, s)| s.is_empty()).map(|(c, _)| c.as_str())
    }

    /// Classes with no declared subclass.
    pub fn leaves(&self) -> impl Iterator<Item = &str> {
        self.direct_subs.iter().filter(|(_, s)| s.is_empty()).map(|(c, _)| c.as_str())
    }

    /// All superclasses of `class`, including itself.
    pub fn supers_of(&self, class: &str) -> Option<&BTreeSet<String>> {
        self.closure.get(class)
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn into_closure(self) -> SubclassClosure {
        SubclassClosure { supers: self.closure, diagnostics: self.diagnostics }
    }
}
