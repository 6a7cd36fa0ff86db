//! Data terms over the sorts in [`crate::sort`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::sort::{EnumSort, Sort, Value};

/// A typed data variable. Two variables are the same iff name and sort agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Var {
        Var {
            name: name.into(),
            sort,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.sort)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    And,
    Or,
    Not,
    Implies,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    Plus,
    Minus,
    Size,
    Head,
    Tail,
    Snoc,
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::Not | Op::Size | Op::Head | Op::Tail => 1,
            _ => 2,
        }
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Op::And | Op::Or | Op::Not | Op::Implies)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::And => "&&",
            Op::Or => "||",
            Op::Not => "!",
            Op::Implies => "=>",
            Op::Eq => "==",
            Op::Neq => "!=",
            Op::Lt => "<",
            Op::Leq => "<=",
            Op::Gt => ">",
            Op::Geq => ">=",
            Op::Plus => "+",
            Op::Minus => "-",
            Op::Size => "#",
            Op::Head => "head",
            Op::Tail => "tail",
            Op::Snoc => "<|",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataTerm {
    Bool(bool),
    Nat(u64),
    Enum(Arc<EnumSort>, usize),
    /// Element sort and elements.
    List(Sort, Vec<DataTerm>),
    Var(Var),
    Apply(Op, Vec<DataTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("operator `{op}` expects {expected} argument(s), got {got}")]
    Arity { op: &'static str, expected: usize, got: usize },
    #[error("operator `{op}` applied to {found}, expected {expected}")]
    Mismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("list element of sort {found} in a list of {expected}")]
    Element { expected: Sort, found: Sort },
    #[error("lists of lists are not supported")]
    NestedList,
}

impl DataTerm {
    pub fn var(name: &str, sort: Sort) -> DataTerm {
        DataTerm::Var(Var::new(name, sort))
    }

    pub fn apply(op: Op, args: Vec<DataTerm>) -> DataTerm {
        DataTerm::Apply(op, args)
    }

    pub fn binary(op: Op, a: DataTerm, b: DataTerm) -> DataTerm {
        DataTerm::Apply(op, vec![a, b])
    }

    pub fn unary(op: Op, a: DataTerm) -> DataTerm {
        DataTerm::Apply(op, vec![a])
    }

    pub fn empty_list(element: Sort) -> DataTerm {
        DataTerm::List(element, Vec::new())
    }

    pub fn is_closed(&self) -> bool {
        match self {
            DataTerm::Var(_) => false,
            DataTerm::List(_, items) | DataTerm::Apply(_, items) => {
                items.iter().all(DataTerm::is_closed)
            }
            _ => true,
        }
    }

    /// Returns the value if the term is a literal in normal form.
    pub fn as_value(&self) -> Option<Value> {
        match self {
            DataTerm::Bool(b) => Some(Value::Bool(*b)),
            DataTerm::Nat(n) => Some(Value::Nat(*n)),
            DataTerm::Enum(e, i) => Some(Value::Enum(e.clone(), *i)),
            DataTerm::List(s, items) => {
                let values = items
                    .iter()
                    .map(DataTerm::as_value)
                    .collect::<Option<Vec<_>>>()?;
                Some(Value::List(s.clone(), values))
            }
            _ => None,
        }
    }

    /// Computes the sort, checking every operator application on the way.
    pub fn sort(&self) -> Result<Sort, SortError> {
        match self {
            DataTerm::Bool(_) => Ok(Sort::Bool),
            DataTerm::Nat(_) => Ok(Sort::Nat),
            DataTerm::Enum(e, _) => Ok(Sort::Enum(e.clone())),
            DataTerm::Var(v) => Ok(v.sort.clone()),
            DataTerm::List(elem, items) => {
                if matches!(elem, Sort::List(_)) {
                    return Err(SortError::NestedList);
                }
                for item in items {
                    let s = item.sort()?;
                    if &s != elem {
                        return Err(SortError::Element {
                            expected: elem.clone(),
                            found: s,
                        });
                    }
                }
                Ok(Sort::list(elem.clone()))
            }
            DataTerm::Apply(op, args) => apply_sort(*op, args),
        }
    }
}

fn apply_sort(op: Op, args: &[DataTerm]) -> Result<Sort, SortError> {
    if args.len() != op.arity() {
        return Err(SortError::Arity {
            op: op.symbol(),
            expected: op.arity(),
            got: args.len(),
        });
    }
    let sorts = args
        .iter()
        .map(DataTerm::sort)
        .collect::<Result<Vec<_>, _>>()?;
    let mismatch = |expected: &str, found: &[Sort]| SortError::Mismatch {
        op: op.symbol(),
        expected: expected.to_string(),
        found: found
            .iter()
            .map(Sort::to_string)
            .collect::<Vec<_>>()
            .join(", "),
    };
    match op {
        Op::And | Op::Or | Op::Implies | Op::Not => {
            if sorts.iter().all(|s| *s == Sort::Bool) {
                Ok(Sort::Bool)
            } else {
                Err(mismatch("Bool", &sorts))
            }
        }
        Op::Eq | Op::Neq => {
            if sorts[0] == sorts[1] {
                Ok(Sort::Bool)
            } else {
                Err(mismatch("two arguments of equal sort", &sorts))
            }
        }
        Op::Lt | Op::Leq | Op::Gt | Op::Geq => {
            if sorts.iter().all(|s| *s == Sort::Nat) {
                Ok(Sort::Bool)
            } else {
                Err(mismatch("Nat", &sorts))
            }
        }
        Op::Plus | Op::Minus => {
            if sorts.iter().all(|s| *s == Sort::Nat) {
                Ok(Sort::Nat)
            } else {
                Err(mismatch("Nat", &sorts))
            }
        }
        Op::Size => match &sorts[0] {
            Sort::List(_) => Ok(Sort::Nat),
            _ => Err(mismatch("a list", &sorts)),
        },
        Op::Head => match &sorts[0] {
            Sort::List(e) => Ok((**e).clone()),
            _ => Err(mismatch("a list", &sorts)),
        },
        Op::Tail => match &sorts[0] {
            Sort::List(_) => Ok(sorts[0].clone()),
            _ => Err(mismatch("a list", &sorts)),
        },
        Op::Snoc => match &sorts[0] {
            Sort::List(e) if **e == sorts[1] => Ok(sorts[0].clone()),
            _ => Err(mismatch("a list and an element of its sort", &sorts)),
        },
    }
}

impl From<&Value> for DataTerm {
    fn from(value: &Value) -> DataTerm {
        match value {
            Value::Bool(b) => DataTerm::Bool(*b),
            Value::Nat(n) => DataTerm::Nat(*n),
            Value::Enum(e, i) => DataTerm::Enum(e.clone(), *i),
            Value::List(s, items) => {
                DataTerm::List(s.clone(), items.iter().map(DataTerm::from).collect())
            }
        }
    }
}

impl From<Value> for DataTerm {
    fn from(value: Value) -> DataTerm {
        DataTerm::from(&value)
    }
}

/// Free data variables of a term.
pub fn term_free_vars(term: &DataTerm) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_term_vars(term, &mut out);
    out
}

pub(crate) fn collect_term_vars(term: &DataTerm, out: &mut BTreeSet<Var>) {
    match term {
        DataTerm::Var(v) => {
            out.insert(v.clone());
        }
        DataTerm::List(_, items) | DataTerm::Apply(_, items) => {
            for item in items {
                collect_term_vars(item, out);
            }
        }
        _ => {}
    }
}

impl fmt::Display for DataTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}
