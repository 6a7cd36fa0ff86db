//! Recognition of the bounded quantifier normal form (BQNF) and of
//! parameterised parity games (PPG), and the transformation from the former
//! to the latter.
//!
//! A PPG right-hand side is either conjunctive,
//!
//! ```text
//! f_1 && ... && (forall v . g_1 => X_1(e_1)) && ...
//! ```
//!
//! or disjunctive,
//!
//! ```text
//! f_1 || ... || (exists v . g_1 && X_1(e_1)) || ...
//! ```
//!
//! with simple `f_i` and `g_j`. Quantifiers and guards may be absent.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{free_vars, Formula, PropInst};
use crate::pbes::{Equation, Pbes};
use crate::rewrite::{fresh_name, subst_formula};
use crate::term::{DataTerm, Var};

/// Where and why a formula leaves a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Path from the right-hand side, e.g. `rhs.0.1.body`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn violation<T>(path: &str, message: impl Into<String>) -> Result<T, Violation> {
    Err(Violation {
        path: path.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Conjunctive,
    Disjunctive,
}

/// `forall vars . guard => target(args)` in a conjunctive right-hand side,
/// `exists vars . guard && target(args)` in a disjunctive one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantPart {
    pub vars: Vec<Var>,
    /// `None` when the source has no guard, which reads as `true`.
    pub guard: Option<Formula>,
    pub target: String,
    pub args: Vec<DataTerm>,
}

impl QuantPart {
    pub fn guard_formula(&self) -> Formula {
        self.guard.clone().unwrap_or_else(Formula::tt)
    }

    /// Whether the guard is something other than the constant `true`.
    pub fn is_guarded(&self) -> bool {
        matches!(&self.guard, Some(g) if *g != Formula::tt())
    }

    fn to_formula(&self, polarity: Polarity) -> Formula {
        let call = Formula::call(&self.target, self.args.clone());
        let body = match (&self.guard, polarity) {
            (None, _) => call,
            (Some(g), Polarity::Conjunctive) => Formula::implies(g.clone(), call),
            (Some(g), Polarity::Disjunctive) => Formula::and(g.clone(), call),
        };
        match (self.vars.is_empty(), polarity) {
            (true, _) => body,
            (false, Polarity::Conjunctive) => Formula::forall(self.vars.clone(), body),
            (false, Polarity::Disjunctive) => Formula::exists(self.vars.clone(), body),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part {
    Simple(Formula),
    Quant(QuantPart),
}

/// A right-hand side in PPG form, decomposed into its parts in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpgRhsShape {
    pub polarity: Polarity,
    pub parts: Vec<Part>,
}

impl PpgRhsShape {
    pub fn simple_parts(&self) -> impl Iterator<Item = &Formula> {
        self.parts.iter().filter_map(|p| match p {
            Part::Simple(f) => Some(f),
            Part::Quant(_) => None,
        })
    }

    pub fn recursive_parts(&self) -> impl Iterator<Item = &QuantPart> {
        self.parts.iter().filter_map(|p| match p {
            Part::Quant(q) => Some(q),
            Part::Simple(_) => None,
        })
    }

    /// Rebuilds the formula, associating to the left. The empty conjunction
    /// is `true` and the empty disjunction `false`.
    pub fn to_formula(&self) -> Formula {
        let parts = self.parts.iter().map(|p| match p {
            Part::Simple(f) => f.clone(),
            Part::Quant(q) => q.to_formula(self.polarity),
        });
        match self.polarity {
            Polarity::Conjunctive => Formula::conjunction(parts),
            Polarity::Disjunctive => Formula::disjunction(parts),
        }
    }
}

/// Leaves of the top-level conjunction (or disjunction) spine with their
/// paths. Simple subtrees are leaves.
fn spine<'a>(f: &'a Formula, conj: bool, path: String, out: &mut Vec<(&'a Formula, String)>) {
    match f {
        Formula::And(a, b) if conj && !f.is_simple() => {
            spine(a, conj, format!("{path}.0"), out);
            spine(b, conj, format!("{path}.1"), out);
        }
        Formula::Or(a, b) if !conj && !f.is_simple() => {
            spine(a, conj, format!("{path}.0"), out);
            spine(b, conj, format!("{path}.1"), out);
        }
        _ => out.push((f, path)),
    }
}

fn leaves<'a>(f: &'a Formula, conj: bool, path: &str) -> Vec<(&'a Formula, String)> {
    let mut out = Vec::new();
    spine(f, conj, path.to_string(), &mut out);
    out
}

/// Splits `g => rest` with simple `g`; otherwise the guard is absent.
fn split_implies(body: &Formula) -> (Option<&Formula>, &Formula, &'static str) {
    match body {
        Formula::Implies(g, rest) if g.is_simple() => (Some(g), rest, ".1"),
        _ => (None, body, ""),
    }
}

/// Splits `g && rest` with simple `g`; otherwise the guard is absent.
fn split_and(body: &Formula) -> (Option<&Formula>, &Formula, &'static str) {
    match body {
        Formula::And(g, rest) if g.is_simple() => (Some(g), rest, ".1"),
        _ => (None, body, ""),
    }
}

/// Checks that a right-hand side is in BQNF.
///
/// Boundary cases are accepted: a simple formula, a bare predicate variable,
/// and conjunctions mixing simple formulas with disjunctive parts that carry
/// no quantifier or guard.
pub fn check_bqnf(rhs: &Formula) -> Result<(), Violation> {
    bqnf(rhs, "rhs")
}

pub fn is_bqnf(e: &Equation) -> Result<(), Violation> {
    check_bqnf(&e.rhs)
}

fn bqnf(f: &Formula, path: &str) -> Result<(), Violation> {
    if f.is_simple() {
        return Ok(());
    }
    match f {
        Formula::Forall(_, body) => {
            let (_, rest, step) = split_implies(body);
            bqnf(rest, &format!("{path}.body{step}"))
        }
        Formula::Exists(_, body) => {
            let (_, rest, step) = split_and(body);
            bqnf(rest, &format!("{path}.body{step}"))
        }
        _ => conj(f, path),
    }
}

fn conj(f: &Formula, path: &str) -> Result<(), Violation> {
    for (leaf, p) in leaves(f, true, path) {
        if leaf.is_simple() {
            continue;
        }
        match leaf {
            Formula::Forall(_, body) => {
                let (_, rest, step) = split_implies(body);
                disj(rest, &format!("{p}.body{step}"))?;
            }
            Formula::Implies(g, rest) if g.is_simple() => disj(rest, &format!("{p}.1"))?,
            _ => disj(leaf, &p)?,
        }
    }
    Ok(())
}

fn disj(f: &Formula, path: &str) -> Result<(), Violation> {
    for (leaf, p) in leaves(f, false, path) {
        if leaf.is_simple() || leaf.as_pred_var().is_some() {
            continue;
        }
        match leaf {
            Formula::Exists(_, body) => {
                let (_, rest, step) = split_and(body);
                if rest.as_pred_var().is_none() {
                    return violation(
                        &format!("{p}.body{step}"),
                        "an existential disjunct must end in a predicate variable",
                    );
                }
            }
            Formula::And(g, x) if g.is_simple() && x.as_pred_var().is_some() => {}
            _ => {
                return violation(
                    &p,
                    "expected a simple formula, a predicate variable or `exists v . g && X(e)` \
                     inside a disjunction",
                )
            }
        }
    }
    Ok(())
}

/// Decomposes a right-hand side into PPG form.
///
/// A top-level disjunction or existential quantifier makes the right-hand
/// side disjunctive; everything else, including a simple formula or a bare
/// predicate variable, is read as conjunctive.
pub fn ppg_shape(rhs: &Formula) -> Result<PpgRhsShape, Violation> {
    if rhs.is_simple() {
        return Ok(PpgRhsShape {
            polarity: Polarity::Conjunctive,
            parts: vec![Part::Simple(rhs.clone())],
        });
    }
    let polarity = match rhs {
        Formula::Or(..) | Formula::Exists(..) => Polarity::Disjunctive,
        _ => Polarity::Conjunctive,
    };
    let conj = polarity == Polarity::Conjunctive;
    let mut parts = Vec::new();
    for (leaf, p) in leaves(rhs, conj, "rhs") {
        if leaf.is_simple() {
            parts.push(Part::Simple(leaf.clone()));
            continue;
        }
        let (vars, body) = match (leaf, conj) {
            (Formula::Forall(vars, body), true) | (Formula::Exists(vars, body), false) => {
                (vars.clone(), &**body)
            }
            _ => (Vec::new(), leaf),
        };
        let (guard, target, _) = if conj { split_implies(body) } else { split_and(body) };
        let Some(call) = target.as_pred_var() else {
            let expected = if conj {
                "`forall v . g => X(e)`"
            } else {
                "`exists v . g && X(e)`"
            };
            return violation(&p, format!("expected a simple formula or {expected}"));
        };
        parts.push(Part::Quant(QuantPart {
            vars,
            guard: guard.cloned(),
            target: call.name.clone(),
            args: call.args.clone(),
        }));
    }
    Ok(PpgRhsShape { polarity, parts })
}

/// Shapes of all equations, or the first equation that is not in PPG form.
pub fn is_ppg(p: &Pbes) -> Result<Vec<PpgRhsShape>, (usize, Violation)> {
    p.equations
        .iter()
        .enumerate()
        .map(|(i, e)| ppg_shape(&e.rhs).map_err(|v| (i, v)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("equation `{equation}` is not in BQNF: {violation}")]
pub struct NotBqnf {
    pub equation: String,
    pub violation: Violation,
}

/// Generates `base_1`, `base_2`, ... skipping reserved names.
#[derive(Clone, Debug)]
pub struct FreshNamer {
    base: String,
    counter: usize,
    reserved: BTreeSet<String>,
}

impl FreshNamer {
    pub fn new(base: impl Into<String>, reserved: BTreeSet<String>) -> FreshNamer {
        FreshNamer {
            base: base.into(),
            counter: 0,
            reserved,
        }
    }

    pub fn next_name(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("{}_{}", self.base, self.counter);
            if self.reserved.insert(name.clone()) {
                return name;
            }
        }
    }

    fn into_reserved(self) -> BTreeSet<String> {
        self.reserved
    }
}

/// Transforms a system whose right-hand sides are in BQNF into a PPG.
///
/// Subformulas that are not already predicate variables are replaced by calls
/// to fresh equations, placed directly after their parent with the parent's
/// fixpoint. A fresh equation takes the parent's parameters followed by the
/// variables quantified above the replaced subformula.
pub fn to_ppg(p: &Pbes) -> Result<Pbes, NotBqnf> {
    for e in &p.equations {
        is_bqnf(e).map_err(|violation| NotBqnf {
            equation: e.name.clone(),
            violation,
        })?;
    }
    let mut reserved: BTreeSet<String> = p.equations.iter().map(|e| e.name.clone()).collect();
    let mut equations = Vec::new();
    for e in &p.equations {
        let mut namer = FreshNamer::new(e.name.clone(), reserved);
        transform(e.clone(), &mut namer, &mut equations);
        reserved = namer.into_reserved();
    }
    Ok(Pbes {
        sorts: p.sorts.clone(),
        equations,
        init: p.init.clone(),
    })
}

struct Pending {
    name: String,
    params: Vec<Var>,
    rhs: Formula,
}

struct Clause<'a> {
    params: &'a [Var],
    namer: &'a mut FreshNamer,
    pending: Vec<Pending>,
}

impl Clause<'_> {
    /// Replaces `phi` by a fresh call unless it already is a predicate variable.
    fn t(&mut self, bound: &[Var], phi: &Formula) -> Formula {
        if phi.as_pred_var().is_some() {
            return phi.clone();
        }
        let name = self.namer.next_name();
        let params: Vec<Var> = self.params.iter().chain(bound).cloned().collect();
        let call = Formula::call(&name, params.iter().cloned().map(DataTerm::Var).collect());
        self.pending.push(Pending {
            name,
            params,
            rhs: phi.clone(),
        });
        call
    }

    /// Renames quantified variables whose names clash with parameters, so
    /// that the parameters of a fresh equation are distinct.
    fn unclash(&self, vars: &[Var], body: &Formula) -> (Vec<Var>, Formula) {
        if !vars.iter().any(|v| self.params.iter().any(|d| d.name == v.name)) {
            return (vars.to_vec(), body.clone());
        }
        let mut avoid: BTreeSet<String> = self.params.iter().map(|d| d.name.clone()).collect();
        avoid.extend(vars.iter().map(|v| v.name.clone()));
        avoid.extend(free_vars(body).into_iter().map(|v| v.name));
        let mut renaming = Vec::new();
        let mut out = Vec::new();
        for v in vars {
            if self.params.iter().any(|d| d.name == v.name) {
                let w = Var::new(fresh_name(&v.name, &avoid), v.sort.clone());
                avoid.insert(w.name.clone());
                renaming.push((v.clone(), DataTerm::Var(w.clone())));
                out.push(w);
            } else {
                out.push(v.clone());
            }
        }
        (out, subst_formula(body, &renaming))
    }

    /// `forall v . g => phi` (or `exists v . g && phi`) with `phi` replaced.
    fn quantified(&mut self, vars: &[Var], body: &Formula, universal: bool) -> Formula {
        let (_, rest, _) = if universal {
            split_implies(body)
        } else {
            split_and(body)
        };
        if rest.as_pred_var().is_some() {
            return if universal {
                Formula::forall(vars.to_vec(), body.clone())
            } else {
                Formula::exists(vars.to_vec(), body.clone())
            };
        }
        let (vars, body) = self.unclash(vars, body);
        let (guard, rest, _) = if universal {
            split_implies(&body)
        } else {
            split_and(&body)
        };
        let call = self.t(&vars, rest);
        let body = match (guard, universal) {
            (None, _) => call,
            (Some(g), true) => Formula::implies(g.clone(), call),
            (Some(g), false) => Formula::and(g.clone(), call),
        };
        if universal {
            Formula::forall(vars, body)
        } else {
            Formula::exists(vars, body)
        }
    }

    /// Rewrites the leaves of a conjunctive or disjunctive spine in place.
    fn clause(&mut self, f: &Formula, conj: bool) -> Formula {
        if f.is_simple() {
            return f.clone();
        }
        match (f, conj) {
            (Formula::And(a, b), true) => {
                let a = self.clause(a, conj);
                Formula::and(a, self.clause(b, conj))
            }
            (Formula::Or(a, b), false) => {
                let a = self.clause(a, conj);
                Formula::or(a, self.clause(b, conj))
            }
            (Formula::Forall(vars, body), true) => self.quantified(vars, body, true),
            (Formula::Exists(vars, body), false) => self.quantified(vars, body, false),
            (Formula::Implies(g, rest), true) if g.is_simple() => {
                Formula::implies((**g).clone(), self.t(&[], rest))
            }
            (Formula::And(g, rest), false) if g.is_simple() => {
                Formula::and((**g).clone(), self.t(&[], rest))
            }
            _ => self.t(&[], f),
        }
    }
}

fn transform(e: Equation, namer: &mut FreshNamer, out: &mut Vec<Equation>) {
    let conj = !matches!(e.rhs, Formula::Or(..) | Formula::Exists(..));
    let mut clause = Clause {
        params: &e.params,
        namer,
        pending: Vec::new(),
    };
    let rhs = clause.clause(&e.rhs, conj);
    let pending = std::mem::take(&mut clause.pending);
    out.push(Equation {
        rhs,
        ..e.clone()
    });
    for fresh in pending {
        let eq = Equation::new(e.fixpoint, fresh.name, fresh.params, fresh.rhs);
        transform(eq, namer, out);
    }
}

/// Replaces every call to an equation not named in `keep` by that equation's
/// right-hand side and drops those equations: the inverse of [`to_ppg`].
pub fn inline_fresh(p: &Pbes, keep: &BTreeSet<String>) -> Pbes {
    let equations = p
        .equations
        .iter()
        .filter(|e| keep.contains(&e.name))
        .map(|e| Equation {
            rhs: inline(&e.rhs, p, keep),
            ..e.clone()
        })
        .collect();
    Pbes {
        sorts: p.sorts.clone(),
        equations,
        init: p.init.clone(),
    }
}

fn inline(f: &Formula, p: &Pbes, keep: &BTreeSet<String>) -> Formula {
    match f {
        Formula::PredVar(PropInst { name, args }) if !keep.contains(name) => {
            let Some(eq) = p.equation(name) else {
                return f.clone();
            };
            let s: Vec<(Var, DataTerm)> = eq.params.iter().cloned().zip(args.iter().cloned()).collect();
            subst_formula(&inline(&eq.rhs, p, keep), &s)
        }
        Formula::Val(_) | Formula::PredVar(_) => f.clone(),
        Formula::Neg(a) => Formula::neg(inline(a, p, keep)),
        Formula::And(a, b) => Formula::and(inline(a, p, keep), inline(b, p, keep)),
        Formula::Or(a, b) => Formula::or(inline(a, p, keep), inline(b, p, keep)),
        Formula::Implies(a, b) => Formula::implies(inline(a, p, keep), inline(b, p, keep)),
        Formula::Forall(v, a) => Formula::forall(v.clone(), inline(a, p, keep)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), inline(a, p, keep)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::alpha_eq;
    use crate::pbes::blocks;
    use crate::syntax::parse_pbes;

    const EXAMPLE1: &str = include_str!("../tests/fixtures/example1.pbes");
    const EXAMPLE3: &str = include_str!("../tests/fixtures/example3.pbes");
    const EXAMPLE3_PPG: &str = include_str!("../tests/fixtures/example3_ppg.pbes");
    const EXAMPLE5: &str = include_str!("../tests/fixtures/example5.pbes");

    fn rhs(text: &str) -> Formula {
        let src = format!(
            "sort D = d1 | d2;\npbes nu X(a: Bool, q: List(D)) = {text};\n\
             nu Y(a: Bool) = Y(a);\ninit X(true, []);"
        );
        parse_pbes(&src).unwrap().equations[0].rhs.clone()
    }

    #[test]
    fn bqnf_examples() {
        assert!(is_bqnf(&parse_pbes(EXAMPLE1).unwrap().equations[0]).is_ok());
        assert!(is_bqnf(&parse_pbes(EXAMPLE3).unwrap().equations[0]).is_ok());
        let v = check_bqnf(&rhs("(Y(a) && a) || (Y(a) && q == [])")).unwrap_err();
        assert_eq!(v.path, "rhs.0");
    }

    #[test]
    fn bqnf_boundary_cases() {
        for ok in [
            "a",
            "Y(a)",
            "a && Y(a)",
            "forall d: D . Y(a)",
            "exists d: D . q == [d] && (forall e: D . e != d => Y(a) || (exists f: D . Y(f == d)))",
            "forall b: Bool . b => (a && Y(b) || (exists c: Bool . c && Y(c)) || b)",
        ] {
            assert!(check_bqnf(&rhs(ok)).is_ok(), "{ok}");
        }
        for (bad, path) in [
            ("a && (Y(a) && a || Y(a))", "rhs.1.0"),
            ("forall d: D . a => (forall e: D . Y(a)) || Y(a)", "rhs.body.1.0"),
            ("a || (exists d: D . Y(a) && a)", "rhs.1.body"),
        ] {
            let v = check_bqnf(&rhs(bad)).unwrap_err();
            assert_eq!(v.path, path, "{bad}");
        }
    }

    #[test]
    fn ppg_examples() {
        let shapes = is_ppg(&parse_pbes(EXAMPLE1).unwrap()).unwrap();
        let s = &shapes[0];
        assert_eq!(s.polarity, Polarity::Conjunctive);
        assert_eq!(s.simple_parts().count(), 1);
        assert_eq!(s.recursive_parts().count(), 2);
        assert!(matches!(s.parts[0], Part::Simple(_)));

        let (i, _) = is_ppg(&parse_pbes(EXAMPLE3).unwrap()).unwrap_err();
        assert_eq!(i, 0);

        let shapes = is_ppg(&parse_pbes(EXAMPLE3_PPG).unwrap()).unwrap();
        let polarities: Vec<_> = shapes.iter().map(|s| s.polarity).collect();
        assert_eq!(
            polarities,
            [Polarity::Conjunctive, Polarity::Disjunctive, Polarity::Disjunctive]
        );
        assert_eq!(shapes[1].parts.len(), 1);

        let shapes = is_ppg(&parse_pbes(EXAMPLE5).unwrap()).unwrap();
        assert_eq!(shapes[0].parts.len(), 4);
        assert_eq!(shapes[1].parts.len(), 4);
    }

    #[test]
    fn shapes_reconstruct() {
        for text in [EXAMPLE1, EXAMPLE3_PPG, EXAMPLE5] {
            let p = parse_pbes(text).unwrap();
            for (e, s) in p.equations.iter().zip(is_ppg(&p).unwrap()) {
                assert_eq!(s.to_formula(), e.rhs);
            }
        }
    }

    #[test]
    fn transforms_example3() {
        let p = parse_pbes(EXAMPLE3).unwrap();
        let q = to_ppg(&p).unwrap();
        assert_eq!(q, parse_pbes(EXAMPLE3_PPG).unwrap());
        assert!(is_ppg(&q).is_ok());
    }

    #[test]
    fn ppg_input_is_unchanged() {
        for text in [EXAMPLE1, EXAMPLE3_PPG, EXAMPLE5] {
            let p = parse_pbes(text).unwrap();
            assert_eq!(to_ppg(&p).unwrap(), p);
        }
    }

    #[test]
    fn fresh_equations_stay_in_block() {
        let text = "sort D = d1 | d2;\npbes\n\
            mu X(n: Nat) = exists d: D . n < 2 && (X(n + 1) && Z(d));\n\
            mu W(n: Nat) = forall n: Nat . n < 3 => X(n) || W(n);\n\
            nu Z(d: D) = Z(d);\ninit X(0);";
        let p = parse_pbes(text).unwrap();
        let q = to_ppg(&p).unwrap();
        let names: Vec<_> = q.equations.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["X", "X_1", "W", "W_1", "Z"]);
        let fix = |p: &Pbes| blocks(p).iter().map(|b| b.fixpoint).collect::<Vec<_>>();
        assert_eq!(fix(&p), fix(&q));
        // the bound n clashes with W's parameter and is renamed
        let w1 = q.equation("W_1").unwrap();
        let params: Vec<_> = w1.params.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(params, ["n", "n'"]);
        assert!(is_ppg(&q).is_ok());
        assert_eq!(to_ppg(&q).unwrap(), q);
        let keep = p.equations.iter().map(|e| e.name.clone()).collect();
        let back = inline_fresh(&q, &keep);
        for (a, b) in back.equations.iter().zip(&p.equations) {
            assert!(alpha_eq(&a.rhs, &b.rhs), "{}\nvs\n{}", a.rhs, b.rhs);
        }
    }

    #[test]
    fn rejects_non_bqnf() {
        let text = "pbes nu X(a: Bool) = a && (X(a) && a || X(a)); init X(true);";
        let err = to_ppg(&parse_pbes(text).unwrap()).unwrap_err();
        assert_eq!(err.equation, "X");
        assert_eq!(err.violation.path, "rhs.1.0");
    }

    #[test]
    fn fresh_names_skip_reserved() {
        let mut n = FreshNamer::new("X", ["X_1".to_string(), "X_3".to_string()].into());
        assert_eq!(n.next_name(), "X_2");
        assert_eq!(n.next_name(), "X_4");
    }
}
