//! Learn short ALC class expressions that separate the positive from the
//! negative outputs of a classifier, over a background knowledge base.
//!
//! The pipeline: [`ingest`] turns per-input object annotations into an ABox,
//! [`reasoner`] evaluates class expressions under the closed-world reading of
//! the materialized ABox, and [`learner`] searches top-down for expressions
//! that cover exactly the positive examples. [`fol`] translates axioms into
//! first-order logic.

pub mod cli;
pub mod fixtures;
pub mod fol;
pub mod ingest;
pub mod learner;
pub mod model;
pub mod reasoner;
pub mod report;
pub mod text;

pub use fol::{render_fol, translate_expression, translate_gci, FolFormula, Var};
pub use learner::{search, LearningProblem, SearchConfig, SearchOutcome, Solution};
pub use model::{Assertion, Axiom, ClassExpression, KnowledgeBase, Signature};
pub use reasoner::{materialize, Coverage, MaterializedKb};
pub use text::{parse_expression, parse_kb, parse_problem, render_expression, ParseError};
