//! Resolves names and sorts of a raw syntax tree.
//!
//! Empty lists take their sort from the context: a parameter position, the
//! other side of an equation, the list a `<|` extends. Where no context is
//! available the text must ascribe one, as in `[]: List(D)`.

use std::collections::HashMap;
use std::sync::Arc;

use super::parser::{BinOp, Raw, RawFile, RawKind, RawParam, RawSort, UnOp};
use super::{ErrorKind, ParseError, Pos, SourceMap};
use crate::formula::{Formula, PropInst};
use crate::pbes::{Equation, Fixpoint, Pbes};
use crate::sort::{EnumSort, Sort};
use crate::term::{DataTerm, Op, Var};

type Result<T> = std::result::Result<T, ParseError>;

fn err<T>(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> Result<T> {
    Err(ParseError::single(pos, kind, message.into()))
}

pub fn elaborate(raw: RawFile) -> Result<(Pbes, SourceMap)> {
    let mut map = SourceMap::default();
    let mut sorts: Vec<Arc<EnumSort>> = Vec::new();
    for decl in &raw.sorts {
        map.sorts.push(decl.pos);
        sorts.push(Arc::new(EnumSort {
            name: decl.name.clone(),
            constructors: decl.constructors.iter().map(|(c, _)| c.clone()).collect(),
        }));
    }
    let mut elab = Elab {
        sorts,
        signatures: HashMap::new(),
        map,
        equation: 0,
    };

    let mut headers = Vec::new();
    for eq in &raw.equations {
        let params = elab.params(&eq.params)?;
        elab.signatures
            .entry(eq.name.clone())
            .or_insert_with(|| params.iter().map(|p| p.sort.clone()).collect());
        headers.push(params);
    }

    let mut equations = Vec::new();
    for (i, (eq, params)) in raw.equations.iter().zip(headers).enumerate() {
        elab.equation = i;
        elab.map.equations.push(eq.pos);
        for (j, p) in eq.params.iter().enumerate() {
            elab.map.paths.insert((i, format!("param.{j}")), p.pos);
        }
        let mut env = params.clone();
        let rhs = elab.formula(&eq.rhs, &mut env, "rhs".to_string())?;
        equations.push(Equation {
            fixpoint: if eq.mu { Fixpoint::Mu } else { Fixpoint::Nu },
            name: eq.name.clone(),
            params,
            rhs,
        });
    }

    elab.map.init = raw.init_pos;
    let init = elab.call(&raw.init_name, &raw.init_args, raw.init_pos, &mut Vec::new())?;
    let Elab { sorts, map, .. } = elab;
    Ok((
        Pbes {
            sorts,
            equations,
            init,
        },
        map,
    ))
}

struct Elab {
    sorts: Vec<Arc<EnumSort>>,
    signatures: HashMap<String, Vec<Sort>>,
    map: SourceMap,
    equation: usize,
}

/// Whether the sort of a term can be determined without context.
fn synthesizes(raw: &Raw) -> bool {
    match &raw.kind {
        RawKind::EmptyList(None) => false,
        RawKind::Binary(BinOp::Snoc, l, _) => synthesizes(l),
        RawKind::Unary(UnOp::Head | UnOp::Tail, x) => synthesizes(x),
        _ => true,
    }
}

impl Elab {
    fn sort(&self, raw: &RawSort) -> Result<Sort> {
        Ok(match raw {
            RawSort::Bool => Sort::Bool,
            RawSort::Nat => Sort::Nat,
            RawSort::List(e) => Sort::list(self.sort(e)?),
            RawSort::Named(name, pos) => match self.sorts.iter().find(|s| &s.name == name) {
                Some(s) => Sort::Enum(s.clone()),
                None => {
                    return err(*pos, ErrorKind::UnknownIdentifier, format!("unknown sort `{name}`"))
                }
            },
        })
    }

    fn params(&self, raw: &[RawParam]) -> Result<Vec<Var>> {
        raw.iter()
            .map(|p| Ok(Var::new(p.name.clone(), self.sort(&p.sort)?)))
            .collect()
    }

    fn constructor(&self, name: &str, expected: Option<&Sort>) -> Option<DataTerm> {
        if let Some(Sort::Enum(e)) = expected {
            if let Some(i) = e.index_of(name) {
                return Some(DataTerm::Enum(e.clone(), i));
            }
        }
        self.sorts
            .iter()
            .find_map(|s| s.index_of(name).map(|i| DataTerm::Enum(s.clone(), i)))
    }

    fn call(&mut self, name: &str, args: &[Raw], pos: Pos, env: &mut Vec<Var>) -> Result<PropInst> {
        let Some(sorts) = self.signatures.get(name).cloned() else {
            return err(
                pos,
                ErrorKind::UnknownIdentifier,
                format!("unknown predicate variable `{name}`"),
            );
        };
        if sorts.len() != args.len() {
            return err(
                pos,
                ErrorKind::Sort,
                format!("`{name}` expects {} argument(s), got {}", sorts.len(), args.len()),
            );
        }
        let args = args
            .iter()
            .zip(&sorts)
            .map(|(a, s)| self.data(a, Some(s), env))
            .collect::<Result<Vec<_>>>()?;
        Ok(PropInst::new(name, args))
    }

    fn formula(&mut self, raw: &Raw, env: &mut Vec<Var>, path: String) -> Result<Formula> {
        self.map.paths.insert((self.equation, path.clone()), raw.pos);
        let f = match &raw.kind {
            RawKind::Quant { forall, vars, body } => {
                let vars = self.params(vars)?;
                let depth = env.len();
                env.extend(vars.iter().cloned());
                let body = self.formula(body, env, format!("{path}.body"));
                env.truncate(depth);
                if *forall {
                    Formula::forall(vars, body?)
                } else {
                    Formula::exists(vars, body?)
                }
            }
            RawKind::Binary(op @ (BinOp::Implies | BinOp::And | BinOp::Or), a, b) => {
                let a = self.formula(a, env, format!("{path}.0"))?;
                let b = self.formula(b, env, format!("{path}.1"))?;
                match op {
                    BinOp::Implies => Formula::implies(a, b),
                    BinOp::And => Formula::and(a, b),
                    _ => Formula::or(a, b),
                }
            }
            RawKind::Unary(UnOp::Not, a) => Formula::neg(self.formula(a, env, format!("{path}.not"))?),
            RawKind::Val(inner) => Formula::Val(self.data(inner, Some(&Sort::Bool), env)?),
            RawKind::Call(name, args) => Formula::PredVar(self.call(name, args, raw.pos, env)?),
            RawKind::Name(name)
                if !env.iter().any(|v| &v.name == name)
                    && self.constructor(name, None).is_none()
                    && self.signatures.contains_key(name) =>
            {
                Formula::PredVar(self.call(name, &[], raw.pos, env)?)
            }
            _ => Formula::Val(self.data(raw, Some(&Sort::Bool), env)?),
        };
        Ok(f)
    }

    fn data(&mut self, raw: &Raw, expected: Option<&Sort>, env: &mut Vec<Var>) -> Result<DataTerm> {
        let pos = raw.pos;
        let term = match &raw.kind {
            RawKind::Name(name) => {
                if let Some(v) = env.iter().rev().find(|v| &v.name == name) {
                    DataTerm::Var(v.clone())
                } else if let Some(c) = self.constructor(name, expected) {
                    c
                } else if self.signatures.contains_key(name) {
                    return err(
                        pos,
                        ErrorKind::Sort,
                        format!("predicate variable `{name}` used inside a data expression"),
                    );
                } else {
                    return err(pos, ErrorKind::UnknownIdentifier, format!("unknown identifier `{name}`"));
                }
            }
            RawKind::Num(n) => DataTerm::Nat(*n),
            RawKind::Bool(b) => DataTerm::Bool(*b),
            RawKind::EmptyList(Some(s)) => match self.sort(s)? {
                Sort::List(e) => DataTerm::empty_list(*e),
                other => {
                    return err(pos, ErrorKind::Sort, format!("`[]` ascribed non-list sort {other}"))
                }
            },
            RawKind::EmptyList(None) => match expected {
                Some(Sort::List(e)) => DataTerm::empty_list((**e).clone()),
                Some(other) => {
                    return err(pos, ErrorKind::Sort, format!("`[]` used where {other} is expected"))
                }
                None => {
                    return err(
                        pos,
                        ErrorKind::Sort,
                        "cannot infer the sort of `[]`; write `[]: List(S)`",
                    )
                }
            },
            RawKind::List(items) => {
                let elem_expected = expected.and_then(Sort::element).cloned();
                let first = self.data(&items[0], elem_expected.as_ref(), env)?;
                let elem = first
                    .sort()
                    .map_err(|e| ParseError::single(items[0].pos, ErrorKind::Sort, e.to_string()))?;
                let mut out = vec![first];
                for item in &items[1..] {
                    out.push(self.data(item, Some(&elem), env)?);
                }
                DataTerm::List(elem, out)
            }
            RawKind::Unary(op, a) => match op {
                UnOp::Not => DataTerm::unary(Op::Not, self.data(a, Some(&Sort::Bool), env)?),
                UnOp::Size => DataTerm::unary(Op::Size, self.data(a, None, env)?),
                UnOp::Head => {
                    let list = expected.map(|s| Sort::list(s.clone()));
                    DataTerm::unary(Op::Head, self.data(a, list.as_ref(), env)?)
                }
                UnOp::Tail => DataTerm::unary(Op::Tail, self.data(a, expected, env)?),
            },
            RawKind::Binary(op, a, b) => {
                let op = match op {
                    BinOp::Implies => Op::Implies,
                    BinOp::Or => Op::Or,
                    BinOp::And => Op::And,
                    BinOp::Eq => Op::Eq,
                    BinOp::Neq => Op::Neq,
                    BinOp::Lt => Op::Lt,
                    BinOp::Leq => Op::Leq,
                    BinOp::Gt => Op::Gt,
                    BinOp::Geq => Op::Geq,
                    BinOp::Snoc => Op::Snoc,
                    BinOp::Plus => Op::Plus,
                    BinOp::Minus => Op::Minus,
                };
                match op {
                    Op::Implies | Op::Or | Op::And => DataTerm::binary(
                        op,
                        self.data(a, Some(&Sort::Bool), env)?,
                        self.data(b, Some(&Sort::Bool), env)?,
                    ),
                    Op::Lt | Op::Leq | Op::Gt | Op::Geq | Op::Plus | Op::Minus => DataTerm::binary(
                        op,
                        self.data(a, Some(&Sort::Nat), env)?,
                        self.data(b, Some(&Sort::Nat), env)?,
                    ),
                    Op::Eq | Op::Neq => {
                        if synthesizes(a) {
                            let l = self.data(a, None, env)?;
                            let s = self.sort_at(&l, a.pos)?;
                            let r = self.data(b, Some(&s), env)?;
                            DataTerm::binary(op, l, r)
                        } else {
                            let r = self.data(b, None, env)?;
                            let s = self.sort_at(&r, b.pos)?;
                            let l = self.data(a, Some(&s), env)?;
                            DataTerm::binary(op, l, r)
                        }
                    }
                    _ => {
                        let l = self.data(a, expected, env)?;
                        let elem = match self.sort_at(&l, a.pos)? {
                            Sort::List(e) => *e,
                            other => {
                                return err(
                                    a.pos,
                                    ErrorKind::Sort,
                                    format!("`<|` extends a list, found {other}"),
                                )
                            }
                        };
                        let r = self.data(b, Some(&elem), env)?;
                        DataTerm::binary(Op::Snoc, l, r)
                    }
                }
            }
            RawKind::Call(name, _) => {
                return err(
                    pos,
                    ErrorKind::Sort,
                    format!("predicate variable `{name}` used inside a data expression"),
                )
            }
            RawKind::Quant { .. } => {
                return err(pos, ErrorKind::Sort, "quantifier inside a data expression")
            }
            RawKind::Val(_) => return err(pos, ErrorKind::Sort, "`val` inside a data expression"),
        };
        let sort = self.sort_at(&term, pos)?;
        if let Some(e) = expected {
            if &sort != e {
                return err(pos, ErrorKind::Sort, format!("expected {e}, found {sort}"));
            }
        }
        Ok(term)
    }

    fn sort_at(&self, term: &DataTerm, pos: Pos) -> Result<Sort> {
        term.sort()
            .map_err(|e| ParseError::single(pos, ErrorKind::Sort, e.to_string()))
    }
}
