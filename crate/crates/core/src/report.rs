//! JSON renderings of results. Objects use serde_json's default map, so keys
//! come out sorted.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::learner::{SearchConfig, SearchOutcome, Solution};
use crate::text::render_expression;

pub fn ratio(r: Rational64) -> Value {
    if r.is_integer() {
        json!(*r.numer())
    } else {
        json!(r.to_f64().expect("finite ratio"))
    }
}

/// `"3/100"`-style exact text.
pub fn ratio_text(r: Rational64) -> String {
    r.to_string()
}

pub fn config_json(cfg: &SearchConfig) -> Value {
    json!({
        "enable_disjunction": cfg.enable_disjunction,
        "expansion_penalty": ratio_text(cfg.expansion_penalty),
        "length_penalty": ratio_text(cfg.length_penalty),
        "max_expansions": cfg.max_expansions,
        "max_length": cfg.max_length,
        "noise": ratio_text(cfg.noise),
        "top_k": cfg.top_k,
    })
}

pub fn solution_json(s: &Solution) -> Value {
    json!({
        "accuracy": ratio(s.coverage.accuracy),
        "approximate": s.approximate,
        "expression": render_expression(&s.expression),
        "fn": s.coverage.fn_(),
        "fp": s.coverage.fp(),
        "length": s.length,
        "score": ratio(s.score),
        "tn": s.coverage.tn(),
        "tp": s.coverage.tp(),
    })
}

pub fn learn_json(cfg: &SearchConfig, outcome: &SearchOutcome) -> Value {
    json!({
        "config": config_json(cfg),
        "exhausted": outcome.exhausted,
        "expansions_used": outcome.expansions_used,
        "solutions": outcome.solutions.iter().map(solution_json).collect::<Vec<_>>(),
        "subcommand": "learn",
    })
}

/// Counts, member lists and score of one expression.
pub fn verify_json(s: &Solution) -> Value {
    let mut obj = match solution_json(s) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let list = |set: &std::collections::BTreeSet<String>| json!(set.iter().collect::<Vec<_>>());
    obj.insert("truePositives".into(), list(&s.coverage.true_pos));
    obj.insert("falsePositives".into(), list(&s.coverage.false_pos));
    obj.insert("trueNegatives".into(), list(&s.coverage.true_neg));
    obj.insert("falseNegatives".into(), list(&s.coverage.false_neg));
    obj.insert("subcommand".into(), json!("verify"));
    Value::Object(obj)
}

/// Structured error payload for stderr.
pub fn diagnostic(kind: &str, message: &str, extra: Map<String, Value>) -> Value {
    let mut obj = extra;
    obj.insert("error".into(), json!(kind));
    obj.insert("message".into(), json!(message));
    Value::Object(obj)
}

/// One line of compact JSON.
pub fn to_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("json values serialize");
    s.push('\n');
    s
}
