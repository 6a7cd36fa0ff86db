//! Predicate formulae: the right-hand sides of fixpoint equations.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{collect_term_vars, DataTerm, Var};

/// An occurrence `X(e1, ..., en)` of a predicate variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PropInst {
    pub name: String,
    pub args: Vec<DataTerm>,
}

impl PropInst {
    pub fn new(name: impl Into<String>, args: Vec<DataTerm>) -> PropInst {
        PropInst {
            name: name.into(),
            args,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Val(DataTerm),
    PredVar(PropInst),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula::Val(DataTerm::Bool(true))
    }

    pub fn ff() -> Formula {
        Formula::Val(DataTerm::Bool(false))
    }

    pub fn call(name: &str, args: Vec<DataTerm>) -> Formula {
        Formula::PredVar(PropInst::new(name, args))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        Formula::Forall(vars, Box::new(body))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        Formula::Exists(vars, Box::new(body))
    }

    /// Left-associated conjunction; `true` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::tt)
    }

    /// Left-associated disjunction; `false` for an empty list.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::ff)
    }

    /// A formula without predicate variables.
    pub fn is_simple(&self) -> bool {
        match self {
            Formula::Val(_) => true,
            Formula::PredVar(_) => false,
            Formula::Neg(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_simple(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_simple() && b.is_simple()
            }
        }
    }

    pub fn as_pred_var(&self) -> Option<&PropInst> {
        match self {
            Formula::PredVar(p) => Some(p),
            _ => None,
        }
    }

    /// Leaves of the top-level conjunction tree. Simple subtrees are kept whole.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        spine(self, true, &mut out);
        out
    }

    /// Leaves of the top-level disjunction tree. Simple subtrees are kept whole.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        spine(self, false, &mut out);
        out
    }
}

fn spine<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) if conj && !f.is_simple() => {
            spine(a, conj, out);
            spine(b, conj, out);
        }
        Formula::Or(a, b) if !conj && !f.is_simple() => {
            spine(a, conj, out);
            spine(b, conj, out);
        }
        _ => out.push(f),
    }
}

/// Free data variables of a formula.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let add_term = |t: &DataTerm, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
        let mut vars = BTreeSet::new();
        collect_term_vars(t, &mut vars);
        out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
    };
    match f {
        Formula::Val(t) => add_term(t, bound, out),
        Formula::PredVar(p) => {
            for a in &p.args {
                add_term(a, bound, out);
            }
        }
        Formula::Neg(a) => collect_free(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let depth = bound.len();
            bound.extend(vars.iter().cloned());
            collect_free(body, bound, out);
            bound.truncate(depth);
        }
    }
}

/// Names of the predicate variables occurring in a formula.
pub fn occ(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    visit_pred_vars(f, &mut |p| {
        out.insert(p.name.clone());
    });
    out
}

pub fn visit_pred_vars<'a>(f: &'a Formula, visit: &mut impl FnMut(&'a PropInst)) {
    match f {
        Formula::Val(_) => {}
        Formula::PredVar(p) => visit(p),
        Formula::Neg(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => visit_pred_vars(a, visit),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            visit_pred_vars(a, visit);
            visit_pred_vars(b, visit);
        }
    }
}

/// Structural equality up to consistent renaming of quantifier-bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha_formula(a, b, &mut Vec::new())
}

type Pairs = Vec<(Var, Var)>;

fn alpha_formula(a: &Formula, b: &Formula, env: &mut Pairs) -> bool {
    match (a, b) {
        (Formula::Val(x), Formula::Val(y)) => alpha_term(x, y, env),
        (Formula::PredVar(p), Formula::PredVar(q)) => {
            p.name == q.name
                && p.args.len() == q.args.len()
                && p.args.iter().zip(&q.args).all(|(x, y)| alpha_term(x, y, env))
        }
        (Formula::Neg(x), Formula::Neg(y)) => alpha_formula(x, y, env),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            alpha_formula(a1, b1, env) && alpha_formula(a2, b2, env)
        }
        (Formula::Forall(va, x), Formula::Forall(vb, y))
        | (Formula::Exists(va, x), Formula::Exists(vb, y)) => {
            if va.len() != vb.len() || va.iter().zip(vb).any(|(p, q)| p.sort != q.sort) {
                return false;
            }
            let depth = env.len();
            env.extend(va.iter().cloned().zip(vb.iter().cloned()));
            let ok = alpha_formula(x, y, env);
            env.truncate(depth);
            ok
        }
        _ => false,
    }
}

fn alpha_term(a: &DataTerm, b: &DataTerm, env: &Pairs) -> bool {
    match (a, b) {
        (DataTerm::Var(x), DataTerm::Var(y)) => {
            // innermost binding wins
            for (p, q) in env.iter().rev() {
                if p == x || q == y {
                    return p == x && q == y;
                }
            }
            x == y
        }
        (DataTerm::List(s, xs), DataTerm::List(t, ys)) => {
            s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        (DataTerm::Apply(o, xs), DataTerm::Apply(p, ys)) => {
            o == p && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        _ => a == b,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

impl fmt::Display for PropInst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(&Formula::PredVar(self.clone())))
    }
}
