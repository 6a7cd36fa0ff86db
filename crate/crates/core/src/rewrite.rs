//! Substitution, evaluation of data terms and enumeration of quantified
//! variables over finite domains.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{free_vars, Formula, PropInst};
use crate::sort::{Sort, Value};
use crate::term::{collect_term_vars, DataTerm, Op, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no finite bound for quantified variable `{0}`")]
    UnboundedQuantifier(Var),
    #[error("{0} of an empty list")]
    EmptyList(&'static str),
    #[error("natural number subtraction below zero")]
    NatUnderflow,
    #[error("natural number overflow")]
    Overflow,
    #[error("free variable `{0}` during evaluation")]
    FreeVariable(Var),
    #[error("variable `{var}` bound to a value of sort {found}")]
    SortMismatch { var: Var, found: Sort },
    #[error("predicate variable `{0}` in a formula that must be simple")]
    NotSimple(String),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// Assignment of closed values to data variables. Later entries shadow
/// earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    entries: Vec<(Var, Value)>,
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    /// Binds `vars` positionally to `values`.
    pub fn from_pairs(vars: &[Var], values: &[Value]) -> Binding {
        Binding {
            entries: vars.iter().cloned().zip(values.iter().cloned()).collect(),
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Value> {
        self.entries
            .iter()
            .rev()
            .find(|(w, _)| w.name == v.name && w.sort == v.sort)
            .map(|(_, x)| x)
    }

    pub fn insert(&mut self, v: Var, x: Value) {
        self.entries.push((v, x));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Value)> {
        self.entries.iter()
    }

    fn check_sorts(&self) -> Result<()> {
        for (v, x) in &self.entries {
            let found = x.sort();
            if found != v.sort {
                return Err(EvalError::SortMismatch {
                    var: v.clone(),
                    found,
                });
            }
        }
        Ok(())
    }

    fn as_subst(&self) -> Vec<(Var, DataTerm)> {
        // Reverse so that the most recent binding of a variable is found first.
        self.entries
            .iter()
            .rev()
            .map(|(v, x)| (v.clone(), DataTerm::from(x)))
            .collect()
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, x)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{x}", v.name)?;
        }
        write!(f, "}}")
    }
}

/// Replaces variables by closed values in a term.
pub fn substitute(t: &DataTerm, b: &Binding) -> Result<DataTerm> {
    b.check_sorts()?;
    Ok(subst_term(t, &b.as_subst()))
}

/// Replaces free variables by closed values in a formula; quantifiers shadow.
pub fn substitute_formula(f: &Formula, b: &Binding) -> Result<Formula> {
    b.check_sorts()?;
    Ok(subst_formula(f, &b.as_subst()))
}

/// Simultaneous substitution of terms for variables in a term.
pub fn subst_term(t: &DataTerm, s: &[(Var, DataTerm)]) -> DataTerm {
    match t {
        DataTerm::Var(v) => s
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, r)| r.clone())
            .unwrap_or_else(|| t.clone()),
        DataTerm::List(e, items) => {
            DataTerm::List(e.clone(), items.iter().map(|x| subst_term(x, s)).collect())
        }
        DataTerm::Apply(op, args) => {
            DataTerm::Apply(*op, args.iter().map(|x| subst_term(x, s)).collect())
        }
        _ => t.clone(),
    }
}

/// Simultaneous capture-avoiding substitution in a formula. Bound variables
/// that would capture a variable of a substituted term are renamed.
pub fn subst_formula(f: &Formula, s: &[(Var, DataTerm)]) -> Formula {
    if s.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Val(t) => Formula::Val(subst_term(t, s)),
        Formula::PredVar(p) => Formula::PredVar(PropInst::new(
            p.name.clone(),
            p.args.iter().map(|a| subst_term(a, s)).collect(),
        )),
        Formula::Neg(a) => Formula::neg(subst_formula(a, s)),
        Formula::And(a, b) => Formula::and(subst_formula(a, s), subst_formula(b, s)),
        Formula::Or(a, b) => Formula::or(subst_formula(a, s), subst_formula(b, s)),
        Formula::Implies(a, b) => Formula::implies(subst_formula(a, s), subst_formula(b, s)),
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let body_free = free_vars(body);
            let inner: Vec<(Var, DataTerm)> = s
                .iter()
                .filter(|(v, _)| !vars.contains(v) && body_free.contains(v))
                .cloned()
                .collect();
            let mut range = BTreeSet::new();
            for (_, t) in &inner {
                collect_term_vars(t, &mut range);
            }
            let mut avoid: BTreeSet<String> = range.iter().map(|v| v.name.clone()).collect();
            avoid.extend(body_free.iter().map(|v| v.name.clone()));
            avoid.extend(vars.iter().map(|v| v.name.clone()));
            let mut renaming = Vec::new();
            let mut new_vars = Vec::with_capacity(vars.len());
            for v in vars {
                if range.iter().any(|r| r.name == v.name) {
                    let fresh = fresh_name(&v.name, &avoid);
                    avoid.insert(fresh.clone());
                    let w = Var::new(fresh, v.sort.clone());
                    renaming.push((v.clone(), DataTerm::Var(w.clone())));
                    new_vars.push(w);
                } else {
                    new_vars.push(v.clone());
                }
            }
            let mut all = renaming;
            all.extend(inner);
            let body = subst_formula(body, &all);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(new_vars, body)
            } else {
                Formula::exists(new_vars, body)
            }
        }
    }
}

/// `base'`, `base''`, ... the first one not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Evaluates a term whose free variables are all bound in `env`.
///
/// Conjunction, disjunction and implication are evaluated tolerantly: a
/// failing operand is ignored when the other one decides the result, so
/// `head(q) != d && q != []` is false for `q = []`.
pub fn eval(t: &DataTerm, env: &Binding) -> Result<Value> {
    Ok(match t {
        DataTerm::Bool(b) => Value::Bool(*b),
        DataTerm::Nat(n) => Value::Nat(*n),
        DataTerm::Enum(e, i) => Value::Enum(e.clone(), *i),
        DataTerm::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::FreeVariable(v.clone()))?,
        DataTerm::List(e, items) => Value::List(
            e.clone(),
            items.iter().map(|x| eval(x, env)).collect::<Result<_>>()?,
        ),
        DataTerm::Apply(op, args) => apply(*op, args, env)?,
    })
}

pub fn eval_bool(t: &DataTerm, env: &Binding) -> Result<bool> {
    match eval(t, env)? {
        Value::Bool(b) => Ok(b),
        other => unreachable!("well-sorted boolean term evaluated to {other}"),
    }
}

/// Combines two fallible booleans; `absorbing` decides the result on its own.
fn tolerant(a: Result<bool>, b: impl FnOnce() -> Result<bool>, absorbing: bool) -> Result<bool> {
    match a {
        Ok(x) if x == absorbing => Ok(absorbing),
        Ok(_) => b(),
        Err(e) => match b() {
            Ok(y) if y == absorbing => Ok(absorbing),
            _ => Err(e),
        },
    }
}

fn nat(v: Value) -> u64 {
    match v {
        Value::Nat(n) => n,
        other => unreachable!("expected a natural number, got {other}"),
    }
}

fn list(v: Value) -> (Sort, Vec<Value>) {
    match v {
        Value::List(e, items) => (e, items),
        other => unreachable!("expected a list, got {other}"),
    }
}

fn apply(op: Op, args: &[DataTerm], env: &Binding) -> Result<Value> {
    let arg = |i: usize| eval(&args[i], env);
    let boolean = |i: usize| eval_bool(&args[i], env);
    Ok(match op {
        Op::And => Value::Bool(tolerant(boolean(0), || boolean(1), false)?),
        Op::Or => Value::Bool(tolerant(boolean(0), || boolean(1), true)?),
        Op::Implies => Value::Bool(tolerant(boolean(0).map(|x| !x), || boolean(1), true)?),
        Op::Not => Value::Bool(!boolean(0)?),
        Op::Eq => Value::Bool(arg(0)? == arg(1)?),
        Op::Neq => Value::Bool(arg(0)? != arg(1)?),
        Op::Lt => Value::Bool(nat(arg(0)?) < nat(arg(1)?)),
        Op::Leq => Value::Bool(nat(arg(0)?) <= nat(arg(1)?)),
        Op::Gt => Value::Bool(nat(arg(0)?) > nat(arg(1)?)),
        Op::Geq => Value::Bool(nat(arg(0)?) >= nat(arg(1)?)),
        Op::Plus => Value::Nat(
            nat(arg(0)?)
                .checked_add(nat(arg(1)?))
                .ok_or(EvalError::Overflow)?,
        ),
        Op::Minus => Value::Nat(
            nat(arg(0)?)
                .checked_sub(nat(arg(1)?))
                .ok_or(EvalError::NatUnderflow)?,
        ),
        Op::Size => Value::Nat(list(arg(0)?).1.len() as u64),
        Op::Head => list(arg(0)?)
            .1
            .into_iter()
            .next()
            .ok_or(EvalError::EmptyList("head"))?,
        Op::Tail => {
            let (e, mut items) = list(arg(0)?);
            if items.is_empty() {
                return Err(EvalError::EmptyList("tail"));
            }
            items.remove(0);
            Value::List(e, items)
        }
        Op::Snoc => {
            let (e, mut items) = list(arg(0)?);
            items.push(arg(1)?);
            Value::List(e, items)
        }
    })
}

/// Evaluates closed subterms and applies the unit and absorption laws of the
/// connectives. Closed terms become values.
pub fn simplify(t: &DataTerm) -> Result<DataTerm> {
    if t.is_closed() {
        return eval(t, &Binding::new()).map(DataTerm::from);
    }
    let DataTerm::Apply(op, args) = t else {
        return Ok(t.clone());
    };
    let op = *op;
    if matches!(op, Op::And | Op::Or | Op::Implies) {
        return simplify_connective(op, &args[0], &args[1]);
    }
    let args = args.iter().map(simplify).collect::<Result<Vec<_>>>()?;
    if op == Op::Not {
        if let DataTerm::Bool(b) = args[0] {
            return Ok(DataTerm::Bool(!b));
        }
    }
    Ok(DataTerm::Apply(op, args))
}

fn simplify_connective(op: Op, a: &DataTerm, b: &DataTerm) -> Result<DataTerm> {
    let (x, y) = (simplify(a), simplify(b));
    let lit = |r: &Result<DataTerm>| match r {
        Ok(DataTerm::Bool(v)) => Some(*v),
        _ => None,
    };
    let (lx, ly) = (lit(&x), lit(&y));
    // absorbing operands decide the result even if the other side fails
    match op {
        Op::And if lx == Some(false) || ly == Some(false) => return Ok(DataTerm::Bool(false)),
        Op::Or if lx == Some(true) || ly == Some(true) => return Ok(DataTerm::Bool(true)),
        Op::Implies if lx == Some(false) || ly == Some(true) => return Ok(DataTerm::Bool(true)),
        _ => {}
    }
    let (x, y) = (x?, y?);
    Ok(match (op, lx, ly) {
        (Op::And, Some(true), _) | (Op::Or, Some(false), _) | (Op::Implies, Some(true), _) => y,
        (Op::And, _, Some(true)) | (Op::Or, _, Some(false)) => x,
        (Op::Implies, _, Some(false)) => simplify(&DataTerm::unary(Op::Not, x))?,
        _ => DataTerm::binary(op, x, y),
    })
}

/// Leaves of the data-level conjunction spine of a boolean term.
fn data_conjuncts<'a>(t: &'a DataTerm, out: &mut Vec<&'a DataTerm>) {
    match t {
        DataTerm::Apply(Op::And, args) => {
            data_conjuncts(&args[0], out);
            data_conjuncts(&args[1], out);
        }
        _ => out.push(t),
    }
}

/// Conjuncts of a simple formula that may carry bounds: leaves of the
/// formula-level and data-level conjunction spines.
fn formula_conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a DataTerm>) {
    match f {
        Formula::And(a, b) => {
            formula_conjuncts(a, out);
            formula_conjuncts(b, out);
        }
        Formula::Val(t) => data_conjuncts(t, out),
        _ => {}
    }
}

/// Upper bound (exclusive) for `v` from a conjunct `v < e` or `v <= e`.
fn bound_from(c: &DataTerm, v: &Var, env: &Binding) -> Option<u64> {
    let DataTerm::Apply(op @ (Op::Lt | Op::Leq), args) = c else {
        return None;
    };
    if !matches!(&args[0], DataTerm::Var(w) if w == v) {
        return None;
    }
    let n = match eval(&args[1], env) {
        Ok(Value::Nat(n)) => n,
        _ => return None,
    };
    if *op == Op::Lt {
        Some(n)
    } else {
        n.checked_add(1)
    }
}

/// The values each variable ranges over. Natural-number variables need a
/// bound among `conjuncts`.
pub fn domains(vars: &[Var], conjuncts: &[&DataTerm], env: &Binding) -> Result<Vec<Vec<Value>>> {
    vars.iter()
        .map(|v| match &v.sort {
            Sort::Bool | Sort::Enum(_) => Ok(v.sort.finite_values().unwrap_or_default()),
            Sort::Nat => conjuncts
                .iter()
                .filter_map(|c| bound_from(c, v, env))
                .min()
                .map(|n| (0..n).map(Value::Nat).collect())
                .ok_or_else(|| EvalError::UnboundedQuantifier(v.clone())),
            Sort::List(_) => Err(EvalError::UnboundedQuantifier(v.clone())),
        })
        .collect()
}

/// Calls `visit` for every combination of values, with `env` extended by the
/// variables. Stops at the first error.
pub fn for_each_assignment(
    vars: &[Var],
    domains: &[Vec<Value>],
    env: &mut Binding,
    visit: &mut dyn FnMut(&mut Binding) -> Result<()>,
) -> Result<()> {
    if vars.is_empty() {
        return visit(env);
    }
    for x in &domains[0] {
        let depth = env.len();
        env.insert(vars[0].clone(), x.clone());
        let r = for_each_assignment(&vars[1..], &domains[1..], env, visit);
        env.truncate(depth);
        r?;
    }
    Ok(())
}

/// All assignments to `vars` under which `guard` holds, in lexicographic
/// order of the domains.
pub fn enumerate(vars: &[Var], guard: &DataTerm, env: &Binding) -> Result<Vec<Binding>> {
    let mut conjuncts = Vec::new();
    data_conjuncts(guard, &mut conjuncts);
    let doms = domains(vars, &conjuncts, env)?;
    collect(vars, &doms, env, |b| eval_bool(guard, b))
}

/// [`enumerate`] for a guard given as a simple formula.
pub fn enumerate_formula(vars: &[Var], guard: &Formula, env: &Binding) -> Result<Vec<Binding>> {
    let mut conjuncts = Vec::new();
    formula_conjuncts(guard, &mut conjuncts);
    let doms = domains(vars, &conjuncts, env)?;
    collect(vars, &doms, env, |b| eval_simple(guard, b))
}

fn collect(
    vars: &[Var],
    doms: &[Vec<Value>],
    env: &Binding,
    holds: impl Fn(&Binding) -> Result<bool>,
) -> Result<Vec<Binding>> {
    let mut out = Vec::new();
    let mut scratch = env.clone();
    let base = scratch.len();
    for_each_assignment(vars, doms, &mut scratch, &mut |b| {
        if holds(b)? {
            out.push(Binding {
                entries: b.entries[base..].to_vec(),
            });
        }
        Ok(())
    })?;
    Ok(out)
}

/// Bound-carrying conjuncts of a quantifier body: the antecedent of `=>` for
/// universal quantification, the body itself for existential.
pub fn guard_conjuncts(body: &Formula, universal: bool) -> Vec<&DataTerm> {
    let mut out = Vec::new();
    match (body, universal) {
        (Formula::Implies(g, _), true) => formula_conjuncts(g, &mut out),
        _ => formula_conjuncts(body, &mut out),
    }
    out
}

/// Truth value of a formula without predicate variables.
pub fn eval_simple(f: &Formula, env: &Binding) -> Result<bool> {
    match f {
        Formula::Val(t) => eval_bool(t, env),
        Formula::PredVar(p) => Err(EvalError::NotSimple(p.name.clone())),
        Formula::Neg(a) => eval_simple(a, env).map(|x| !x),
        Formula::And(a, b) => tolerant(eval_simple(a, env), || eval_simple(b, env), false),
        Formula::Or(a, b) => tolerant(eval_simple(a, env), || eval_simple(b, env), true),
        Formula::Implies(a, b) => {
            tolerant(eval_simple(a, env).map(|x| !x), || eval_simple(b, env), true)
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let doms = domains(vars, &guard_conjuncts(body, universal), env)?;
            let mut result = universal;
            let mut scratch = env.clone();
            for_each_assignment(vars, &doms, &mut scratch, &mut |b| {
                if result == universal && eval_simple(body, b)? != universal {
                    result = !universal;
                }
                Ok(())
            })?;
            Ok(result)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sort::EnumSort;
    use proptest::prelude::*;

    fn d_sort() -> Sort {
        Sort::Enum(EnumSort::new("D", &["d1", "d2"]))
    }

    fn d(i: usize) -> Value {
        match d_sort() {
            Sort::Enum(e) => Value::Enum(e, i),
            _ => unreachable!(),
        }
    }

    fn list_of(items: Vec<Value>) -> Value {
        Value::List(d_sort(), items)
    }

    fn lit(v: Value) -> DataTerm {
        DataTerm::from(v)
    }

    fn var(name: &str, sort: Sort) -> Var {
        Var::new(name, sort)
    }

    #[test]
    fn substitute_examples() {
        let dv = var("d", Sort::Nat);
        let f = Formula::and(
            Formula::call("X", vec![DataTerm::binary(Op::Minus, DataTerm::Var(dv.clone()), DataTerm::Nat(1))]),
            Formula::call("X", vec![DataTerm::binary(Op::Plus, DataTerm::Var(dv.clone()), DataTerm::Nat(1))]),
        );
        let b = Binding::from_pairs(std::slice::from_ref(&dv), &[Value::Nat(5)]);
        let g = substitute_formula(&f, &b).unwrap();
        assert_eq!(g.to_string(), "X(5 - 1) && X(5 + 1)");

        let dd = var("d", d_sort());
        let body = Formula::Val(DataTerm::binary(Op::Eq, DataTerm::Var(dd.clone()), lit(d(1))));
        let q = Formula::forall(vec![dd.clone()], body);
        let b = Binding::from_pairs(&[dd], &[d(0)]);
        assert_eq!(substitute_formula(&q, &b).unwrap(), q);

        let qv = var("q", Sort::list(d_sort()));
        let t = DataTerm::binary(Op::Lt, DataTerm::unary(Op::Size, DataTerm::Var(qv.clone())), DataTerm::Nat(2));
        let b = Binding::from_pairs(&[qv], &[list_of(vec![d(0)])]);
        assert_eq!(substitute(&t, &b).unwrap().to_string(), "#[d1] < 2");
    }

    #[test]
    fn substitute_rejects_ill_sorted_binding() {
        let n = var("n", Sort::Nat);
        let b = Binding::from_pairs(std::slice::from_ref(&n), &[Value::Bool(true)]);
        assert!(matches!(
            substitute(&DataTerm::Var(n), &b),
            Err(EvalError::SortMismatch { .. })
        ));
    }

    #[test]
    fn substitution_avoids_capture() {
        let n = var("n", Sort::Nat);
        let m = var("m", Sort::Nat);
        // exists m . n < m  with n := m + 1
        let f = Formula::exists(
            vec![m.clone()],
            Formula::Val(DataTerm::binary(Op::Lt, DataTerm::Var(n.clone()), DataTerm::Var(m.clone()))),
        );
        let r = subst_formula(
            &f,
            &[(n, DataTerm::binary(Op::Plus, DataTerm::Var(m.clone()), DataTerm::Nat(1)))],
        );
        assert_eq!(r.to_string(), "exists m': Nat . m + 1 < m'");
    }

    #[test]
    fn simplify_examples() {
        let empty = DataTerm::empty_list(d_sort());
        let t = DataTerm::binary(Op::Lt, DataTerm::unary(Op::Size, empty.clone()), DataTerm::Nat(2));
        assert_eq!(simplify(&t).unwrap(), DataTerm::Bool(true));

        let l = lit(list_of(vec![d(0), d(1)]));
        let t = DataTerm::binary(Op::Eq, DataTerm::unary(Op::Head, l), lit(d(0)));
        assert_eq!(simplify(&t).unwrap(), DataTerm::Bool(true));

        let one = lit(list_of(vec![d(0)]));
        let t = DataTerm::binary(
            Op::Or,
            DataTerm::binary(Op::Neq, one.clone(), empty.clone()),
            DataTerm::binary(Op::Lt, DataTerm::unary(Op::Size, one), DataTerm::Nat(2)),
        );
        assert_eq!(simplify(&t).unwrap(), DataTerm::Bool(true));

        assert_eq!(
            simplify(&DataTerm::unary(Op::Head, empty.clone())),
            Err(EvalError::EmptyList("head"))
        );
        assert_eq!(
            simplify(&DataTerm::binary(Op::Minus, DataTerm::Nat(0), DataTerm::Nat(1))),
            Err(EvalError::NatUnderflow)
        );
    }

    #[test]
    fn simplify_open_terms() {
        let x = DataTerm::Var(var("x", Sort::Bool));
        let t = DataTerm::binary(Op::And, DataTerm::Bool(true), x.clone());
        assert_eq!(simplify(&t).unwrap(), x);
        let t = DataTerm::binary(Op::Or, x.clone(), DataTerm::Bool(true));
        assert_eq!(simplify(&t).unwrap(), DataTerm::Bool(true));
        let t = DataTerm::binary(Op::Implies, x.clone(), DataTerm::Bool(false));
        assert_eq!(simplify(&t).unwrap(), DataTerm::unary(Op::Not, x.clone()));
        // a false conjunct absorbs a failing one
        let head = DataTerm::binary(
            Op::Eq,
            DataTerm::unary(Op::Head, DataTerm::empty_list(d_sort())),
            lit(d(0)),
        );
        let t = DataTerm::binary(Op::And, head, DataTerm::binary(Op::And, x, DataTerm::Bool(false)));
        assert_eq!(simplify(&t).unwrap(), DataTerm::Bool(false));
    }

    #[test]
    fn enumerate_examples() {
        let q_in = var("q_in", Sort::list(d_sort()));
        let q_out = var("q_out", Sort::list(d_sort()));
        let dv = var("d", d_sort());
        let env = Binding::from_pairs(&[q_in.clone(), q_out.clone()], &[list_of(vec![]), list_of(vec![])]);

        let g = DataTerm::binary(Op::Lt, DataTerm::unary(Op::Size, DataTerm::Var(q_in)), DataTerm::Nat(2));
        let r = enumerate(std::slice::from_ref(&dv), &g, &env).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].to_string(), "{d↦d1}");
        assert_eq!(r[1].to_string(), "{d↦d2}");

        let g = DataTerm::binary(Op::Neq, DataTerm::Var(q_out), DataTerm::empty_list(d_sort()));
        assert!(enumerate(&[dv], &g, &env).unwrap().is_empty());

        let j = var("j", Sort::Nat);
        let g = DataTerm::binary(Op::Lt, DataTerm::Var(j.clone()), DataTerm::Nat(3));
        let r = enumerate(std::slice::from_ref(&j), &g, &Binding::new()).unwrap();
        let shown: Vec<String> = r.iter().map(Binding::to_string).collect();
        assert_eq!(shown, ["{j↦0}", "{j↦1}", "{j↦2}"]);

        let g = DataTerm::binary(Op::Gt, DataTerm::Var(j.clone()), DataTerm::Nat(3));
        assert_eq!(
            enumerate(std::slice::from_ref(&j), &g, &Binding::new()),
            Err(EvalError::UnboundedQuantifier(j))
        );
    }

    #[test]
    fn eval_simple_quantifiers() {
        let n = var("n", Sort::Nat);
        let nv = DataTerm::Var(n.clone());
        // forall n . n < 4 => n + n < 7
        let f = Formula::forall(
            vec![n.clone()],
            Formula::implies(
                Formula::Val(DataTerm::binary(Op::Lt, nv.clone(), DataTerm::Nat(4))),
                Formula::Val(DataTerm::binary(
                    Op::Lt,
                    DataTerm::binary(Op::Plus, nv.clone(), nv.clone()),
                    DataTerm::Nat(7),
                )),
            ),
        );
        assert!(eval_simple(&f, &Binding::new()).unwrap());
        // exists n . n <= 3 && n + n == 6
        let g = Formula::exists(
            vec![n],
            Formula::and(
                Formula::Val(DataTerm::binary(Op::Leq, nv.clone(), DataTerm::Nat(3))),
                Formula::Val(DataTerm::binary(
                    Op::Eq,
                    DataTerm::binary(Op::Plus, nv.clone(), nv),
                    DataTerm::Nat(6),
                )),
            ),
        );
        assert!(eval_simple(&g, &Binding::new()).unwrap());
    }

    fn closed_term(depth: u32) -> BoxedStrategy<(DataTerm, Sort)> {
        let leaf = prop_oneof![
            any::<bool>().prop_map(|b| (DataTerm::Bool(b), Sort::Bool)),
            (0u64..6).prop_map(|n| (DataTerm::Nat(n), Sort::Nat)),
            (0usize..2).prop_map(|i| (lit(d(i)), d_sort())),
            proptest::collection::vec(0usize..2, 0..3)
                .prop_map(|xs| (lit(list_of(xs.into_iter().map(d).collect())), Sort::list(d_sort()))),
        ];
        if depth == 0 {
            return leaf.boxed();
        }
        let sub = closed_term(depth - 1);
        prop_oneof![
            leaf,
            (sub.clone(), sub.clone(), 0usize..12).prop_map(|((a, sa), (b, _), k)| {
                let ops = [
                    Op::And, Op::Or, Op::Implies, Op::Eq, Op::Neq, Op::Lt, Op::Leq, Op::Gt, Op::Geq,
                    Op::Plus, Op::Minus, Op::Snoc,
                ];
                let t = DataTerm::binary(ops[k], a.clone(), b);
                match t.sort() {
                    Ok(s) => (t, s),
                    Err(_) => (a, sa),
                }
            }),
            (sub, 0usize..4).prop_map(|((a, sa), k)| {
                let ops = [Op::Not, Op::Size, Op::Head, Op::Tail];
                let t = DataTerm::unary(ops[k], a.clone());
                match t.sort() {
                    Ok(s) => (t, s),
                    Err(_) => (a, sa),
                }
            }),
        ]
        .boxed()
    }

    proptest! {
        #[test]
        fn closed_terms_evaluate_to_values((t, s) in closed_term(4)) {
            match simplify(&t) {
                Ok(v) => {
                    let value = v.as_value();
                    prop_assert!(value.is_some(), "{v}");
                    prop_assert_eq!(value.unwrap().sort(), s);
                    prop_assert_eq!(simplify(&v).unwrap(), v);
                }
                Err(e) => prop_assert!(matches!(
                    e,
                    EvalError::EmptyList(_) | EvalError::NatUnderflow | EvalError::Overflow
                )),
            }
        }

        #[test]
        fn simplify_is_idempotent_on_open_terms(
            (t, _) in closed_term(3),
            flip in any::<bool>(),
        ) {
            let x = DataTerm::Var(Var::new("x", Sort::Bool));
            let open = if t.sort() == Ok(Sort::Bool) {
                if flip { DataTerm::binary(Op::And, t, x) } else { DataTerm::binary(Op::Implies, x, t) }
            } else {
                x
            };
            if let Ok(once) = simplify(&open) {
                prop_assert_eq!(simplify(&once).unwrap(), once);
            }
        }

        #[test]
        fn enumerate_matches_brute_force(bound in 0u64..5, lo in 0u64..4, pick in 0usize..2) {
            let n = Var::new("n", Sort::Nat);
            let e = Var::new("e", d_sort());
            let guard = DataTerm::binary(
                Op::And,
                DataTerm::binary(Op::Lt, DataTerm::Var(n.clone()), DataTerm::Nat(bound)),
                DataTerm::binary(
                    Op::Or,
                    DataTerm::binary(Op::Geq, DataTerm::Var(n.clone()), DataTerm::Nat(lo)),
                    DataTerm::binary(Op::Eq, DataTerm::Var(e.clone()), lit(d(pick))),
                ),
            );
            let vars = [n.clone(), e.clone()];
            let got = enumerate(&vars, &guard, &Binding::new()).unwrap();
            let mut expected = Vec::new();
            for i in 0..10u64 {
                for j in 0..2 {
                    let b = Binding::from_pairs(&vars, &[Value::Nat(i), d(j)]);
                    if eval_bool(&guard, &b).unwrap() {
                        expected.push(b);
                    }
                }
            }
            prop_assert_eq!(got, expected);
        }
    }
}
