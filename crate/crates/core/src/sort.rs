//! Sorts and closed values of the data language.
//!
//! The data language is deliberately small: booleans, naturals, enumerated
//! sorts and lists (one level deep) of those.

use std::fmt;
use std::sync::Arc;

/// An enumerated sort, e.g. `sort D = d1 | d2;`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnumSort {
    pub name: String,
    pub constructors: Vec<String>,
}

impl EnumSort {
    pub fn new(name: impl Into<String>, constructors: &[&str]) -> Arc<EnumSort> {
        Arc::new(EnumSort {
            name: name.into(),
            constructors: constructors.iter().map(|c| c.to_string()).collect(),
        })
    }

    pub fn index_of(&self, constructor: &str) -> Option<usize> {
        self.constructors.iter().position(|c| c == constructor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    Nat,
    Enum(Arc<EnumSort>),
    List(Box<Sort>),
}

impl Sort {
    pub fn list(element: Sort) -> Sort {
        Sort::List(Box::new(element))
    }

    pub fn element(&self) -> Option<&Sort> {
        match self {
            Sort::List(e) => Some(e),
            _ => None,
        }
    }

    /// Whether the sort has finitely many values.
    pub fn is_finite(&self) -> bool {
        matches!(self, Sort::Bool | Sort::Enum(_))
    }

    /// The canonical default value: `false`, `0`, the first constructor, `[]`.
    pub fn default_value(&self) -> Value {
        match self {
            Sort::Bool => Value::Bool(false),
            Sort::Nat => Value::Nat(0),
            Sort::Enum(e) => Value::Enum(e.clone(), 0),
            Sort::List(e) => Value::List((**e).clone(), Vec::new()),
        }
    }

    /// All values of a finite sort, in constructor order.
    pub fn finite_values(&self) -> Option<Vec<Value>> {
        match self {
            Sort::Bool => Some(vec![Value::Bool(false), Value::Bool(true)]),
            Sort::Enum(e) => Some(
                (0..e.constructors.len())
                    .map(|i| Value::Enum(e.clone(), i))
                    .collect(),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Nat => write!(f, "Nat"),
            Sort::Enum(e) => write!(f, "{}", e.name),
            Sort::List(e) => write!(f, "List({e})"),
        }
    }
}

/// A closed data value in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Nat(u64),
    Enum(Arc<EnumSort>, usize),
    /// Element sort and elements.
    List(Sort, Vec<Value>),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Bool(_) => Sort::Bool,
            Value::Nat(_) => Sort::Nat,
            Value::Enum(e, _) => Sort::Enum(e.clone()),
            Value::List(e, _) => Sort::list(e.clone()),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Enum(e, i) => write!(f, "{}", e.constructors[*i]),
            Value::List(_, items) => {
                write!(f, "[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}
