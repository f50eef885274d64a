//! Translation of TBox axioms into first-order predicate logic.
//!
//! `C ⊑ D` becomes `forall x0.(π_x0(C) -> π_x0(D))`; each quantifier over a
//! role moves from `x_i` to the fresh variable `x_{i+1}`.

use std::fmt;

use crate::model::{Axiom, ClassExpression};

/// Variable `x_i` of the indexed family x0, x1, x2, …
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn next(self) -> Var {
        Var(self.0 + 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FolFormula {
    True,
    False,
    Pred1(String, Var),
    Pred2(String, Var, Var),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    ForallVar(Var, Box<FolFormula>),
    ExistsVar(Var, Box<FolFormula>),
}

impl FolFormula {
    /// Variables occurring in predicates that no enclosing quantifier binds.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        match self {
            FolFormula::True | FolFormula::False => {}
            FolFormula::Pred1(_, v) => {
                if !bound.contains(v) {
                    out.push(*v);
                }
            }
            FolFormula::Pred2(_, v, w) => {
                for x in [v, w] {
                    if !bound.contains(x) {
                        out.push(*x);
                    }
                }
            }
            FolFormula::Not(f) => f.collect_free(bound, out),
            FolFormula::And(l, r) | FolFormula::Or(l, r) | FolFormula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FolFormula::ForallVar(v, f) | FolFormula::ExistsVar(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolFormula::True => f.write_str("true"),
            FolFormula::False => f.write_str("false"),
            FolFormula::Pred1(name, v) => write!(f, "{name}({v})"),
            FolFormula::Pred2(name, v, w) => write!(f, "{name}({v},{w})"),
            FolFormula::Not(inner) => write!(f, "~{inner}"),
            FolFormula::And(l, r) => write!(f, "({l} & {r})"),
            FolFormula::Or(l, r) => write!(f, "({l} | {r})"),
            FolFormula::Implies(l, r) => write!(f, "({l} -> {r})"),
            FolFormula::ForallVar(v, body) => write!(f, "forall {v}.{body}"),
            FolFormula::ExistsVar(v, body) => write!(f, "exists {v}.{body}"),
        }
    }
}

/// `π_{x_i}(C)`.
pub fn translate_expression(expr: &ClassExpression, var: Var) -> FolFormula {
    match expr {
        ClassExpression::Top => FolFormula::True,
        ClassExpression::Bottom => FolFormula::False,
        ClassExpression::Atomic(a) => FolFormula::Pred1(a.clone(), var),
        ClassExpression::Not(c) => FolFormula::Not(Box::new(translate_expression(c, var))),
        ClassExpression::And(l, r) => {
            FolFormula::And(Box::new(translate_expression(l, var)), Box::new(translate_expression(r, var)))
        }
        ClassExpression::Or(l, r) => {
            FolFormula::Or(Box::new(translate_expression(l, var)), Box::new(translate_expression(r, var)))
        }
        ClassExpression::Forall(role, c) => {
            let fresh = var.next();
            FolFormula::ForallVar(
                fresh,
                Box::new(FolFormula::Implies(
                    Box::new(FolFormula::Pred2(role.clone(), var, fresh)),
                    Box::new(translate_expression(c, fresh)),
                )),
            )
        }
        ClassExpression::Exists(role, c) => {
            let fresh = var.next();
            FolFormula::ExistsVar(
                fresh,
                Box::new(FolFormula::And(
                    Box::new(FolFormula::Pred2(role.clone(), var, fresh)),
                    Box::new(translate_expression(c, fresh)),
                )),
            )
        }
    }
}

/// `π(C ⊑ D) = (∀x0)(π_x0(C) → π_x0(D))`.
pub fn translate_gci(axiom: &Axiom) -> FolFormula {
    let x0 = Var(0);
    FolFormula::ForallVar(
        x0,
        Box::new(FolFormula::Implies(
            Box::new(translate_expression(&axiom.sub, x0)),
            Box::new(translate_expression(&axiom.sup, x0)),
        )),
    )
}

pub fn render_fol(formula: &FolFormula) -> String {
    formula.to_string()
}
