//! Equations, equation systems, block structure and well-formedness checks.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::formula::{free_vars, Formula, PropInst};
use crate::sort::{EnumSort, Sort};
use crate::term::{DataTerm, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixpoint {
    Mu,
    Nu,
}

impl fmt::Display for Fixpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fixpoint::Mu => "mu",
            Fixpoint::Nu => "nu",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub fixpoint: Fixpoint,
    pub name: String,
    pub params: Vec<Var>,
    pub rhs: Formula,
}

impl Equation {
    pub fn new(fixpoint: Fixpoint, name: impl Into<String>, params: Vec<Var>, rhs: Formula) -> Self {
        Equation {
            fixpoint,
            name: name.into(),
            params,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pbes {
    /// Declared enumerated sorts, in declaration order.
    pub sorts: Vec<Arc<EnumSort>>,
    pub equations: Vec<Equation>,
    pub init: PropInst,
}

impl Pbes {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }

    pub fn equation(&self, name: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.name == name)
    }

    /// Enumerated sorts used anywhere in the system that are not declared,
    /// appended to the declared ones. Used by the printer.
    pub fn all_enum_sorts(&self) -> Vec<Arc<EnumSort>> {
        let mut out = self.sorts.clone();
        let mut add = |s: &Sort| {
            let mut s = s;
            while let Sort::List(e) = s {
                s = e;
            }
            if let Sort::Enum(e) = s {
                if !out.iter().any(|o| o.name == e.name) {
                    out.push(e.clone());
                }
            }
        };
        for eq in &self.equations {
            for p in &eq.params {
                add(&p.sort);
            }
        }
        out
    }
}

/// A maximal run of consecutive equations sharing a fixpoint operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub index: usize,
    pub fixpoint: Fixpoint,
    /// Equation indices `start..end`.
    pub members: std::ops::Range<usize>,
    pub priority: u32,
}

/// Splits the equations into blocks and assigns min-parity priorities:
/// a leading `nu` block gets 0, a leading `mu` block 1, and every block
/// boundary adds one.
pub fn blocks(p: &Pbes) -> Vec<Block> {
    blocks_of(p.equations.iter().map(|e| e.fixpoint))
}

pub fn blocks_of(fixpoints: impl IntoIterator<Item = Fixpoint>) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for (i, fp) in fixpoints.into_iter().enumerate() {
        match out.last_mut() {
            Some(b) if b.fixpoint == fp => b.members.end = i + 1,
            Some(b) => {
                let priority = b.priority + 1;
                let index = b.index + 1;
                out.push(Block {
                    index,
                    fixpoint: fp,
                    members: i..i + 1,
                    priority,
                });
            }
            None => out.push(Block {
                index: 0,
                fixpoint: fp,
                members: i..i + 1,
                priority: match fp {
                    Fixpoint::Nu => 0,
                    Fixpoint::Mu => 1,
                },
            }),
        }
    }
    out
}

/// Priority of every equation, indexed like `p.equations`.
pub fn equation_priorities(p: &Pbes) -> Vec<u32> {
    let mut out = vec![0; p.equations.len()];
    for b in blocks(p) {
        for i in b.members.clone() {
            out[i] = b.priority;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    EmptySystem,
    DuplicateSort,
    DuplicateConstructor,
    NameClash,
    DuplicateLhs,
    DuplicateParam,
    NestedList,
    UndeclaredVariable,
    ArityMismatch,
    ArgumentSort,
    IllSorted,
    UnboundDataVariable,
    NegativeOccurrence,
    NegationOfFormula,
    InitNotClosed,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::EmptySystem => "empty-system",
            Rule::DuplicateSort => "duplicate-sort",
            Rule::DuplicateConstructor => "duplicate-constructor",
            Rule::NameClash => "name-clash",
            Rule::DuplicateLhs => "duplicate-lhs",
            Rule::DuplicateParam => "duplicate-param",
            Rule::NestedList => "nested-list",
            Rule::UndeclaredVariable => "undeclared-variable",
            Rule::ArityMismatch => "arity-mismatch",
            Rule::ArgumentSort => "argument-sort",
            Rule::IllSorted => "ill-sorted",
            Rule::UnboundDataVariable => "unbound-data-variable",
            Rule::NegativeOccurrence => "negative-occurrence",
            Rule::NegationOfFormula => "negation-of-formula",
            Rule::InitNotClosed => "init-not-closed",
        }
    }
}

/// Where a diagnostic applies: a sort declaration, an equation (with a
/// path into its right-hand side), or the initial instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Sort(usize),
    Equation { index: usize, path: String },
    Init,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Sort(i) => write!(f, "sort declaration {}", i + 1),
            Location::Equation { index, path } if path.is_empty() => {
                write!(f, "equation {}", index + 1)
            }
            Location::Equation { index, path } => write!(f, "equation {} at {path}", index + 1),
            Location::Init => write!(f, "init"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.location, self.rule.id(), self.message)
    }
}

/// Checks every well-formedness rule of equation systems. An empty result
/// means the system is valid.
pub fn validate(p: &Pbes) -> Vec<Diagnostic> {
    let mut v = Validator {
        pbes: p,
        out: Vec::new(),
    };
    v.run();
    v.out
}

struct Validator<'a> {
    pbes: &'a Pbes,
    out: Vec<Diagnostic>,
}

impl Validator<'_> {
    fn report(&mut self, rule: Rule, location: Location, message: String) {
        self.out.push(Diagnostic {
            rule,
            location,
            message,
        });
    }

    fn run(&mut self) {
        let p = self.pbes;
        if p.equations.is_empty() {
            self.report(Rule::EmptySystem, Location::Init, "no equations".into());
        }

        let mut sort_names = HashSet::new();
        let mut constructors: HashSet<&str> = HashSet::new();
        for (i, s) in p.sorts.iter().enumerate() {
            if !sort_names.insert(s.name.as_str()) {
                self.report(Rule::DuplicateSort, Location::Sort(i), format!("sort `{}` declared twice", s.name));
            }
            for c in &s.constructors {
                if !constructors.insert(c.as_str()) {
                    self.report(
                        Rule::DuplicateConstructor,
                        Location::Sort(i),
                        format!("constructor `{c}` declared twice"),
                    );
                }
            }
        }

        let mut seen = HashMap::new();
        for (i, eq) in p.equations.iter().enumerate() {
            let here = Location::Equation {
                index: i,
                path: String::new(),
            };
            if let Some(first) = seen.insert(eq.name.as_str(), i) {
                self.report(
                    Rule::DuplicateLhs,
                    here.clone(),
                    format!("`{}` is already defined by equation {}", eq.name, first + 1),
                );
            }
            let mut names = HashSet::new();
            for (j, param) in eq.params.iter().enumerate() {
                let at = Location::Equation {
                    index: i,
                    path: format!("param.{j}"),
                };
                if !names.insert(param.name.as_str()) {
                    self.report(
                        Rule::DuplicateParam,
                        at.clone(),
                        format!("parameter `{}` occurs twice", param.name),
                    );
                }
                self.check_sort(&param.sort, at.clone());
                if constructors.contains(param.name.as_str()) {
                    self.report(
                        Rule::NameClash,
                        at,
                        format!("parameter `{}` has the name of a constructor", param.name),
                    );
                }
            }
            let params: BTreeSet<Var> = eq.params.iter().cloned().collect();
            for free in free_vars(&eq.rhs) {
                if !params.contains(&free) {
                    self.report(
                        Rule::UnboundDataVariable,
                        here.clone(),
                        format!("data variable `{free}` is neither a parameter nor bound"),
                    );
                }
            }
            self.check_formula(&eq.rhs, i, "rhs".to_string(), false, &constructors);
        }

        let init = &p.init;
        self.check_call(init, Location::Init);
        for a in &init.args {
            if !a.is_closed() {
                self.report(
                    Rule::InitNotClosed,
                    Location::Init,
                    "initial instance has free data variables".into(),
                );
            }
        }
    }

    fn check_sort(&mut self, s: &Sort, loc: Location) {
        if let Sort::List(e) = s {
            if matches!(**e, Sort::List(_)) {
                self.report(Rule::NestedList, loc, format!("sort {s} nests lists"));
            }
        }
    }

    fn check_term(&mut self, t: &DataTerm, loc: Location) {
        match t.sort() {
            Err(e) => self.report(Rule::IllSorted, loc, e.to_string()),
            Ok(s) => self.check_sort(&s, loc),
        }
    }

    fn check_call(&mut self, call: &PropInst, loc: Location) {
        let Some(eq) = self.pbes.equation(&call.name) else {
            self.report(
                Rule::UndeclaredVariable,
                loc,
                format!("predicate variable `{}` is not defined", call.name),
            );
            return;
        };
        if eq.params.len() != call.args.len() {
            self.report(
                Rule::ArityMismatch,
                loc,
                format!(
                    "`{}` expects {} argument(s), got {}",
                    call.name,
                    eq.params.len(),
                    call.args.len()
                ),
            );
            return;
        }
        for (param, arg) in eq.params.iter().zip(&call.args) {
            match arg.sort() {
                Err(e) => self.report(Rule::IllSorted, loc.clone(), e.to_string()),
                Ok(s) if s != param.sort => self.report(
                    Rule::ArgumentSort,
                    loc.clone(),
                    format!(
                        "argument for `{}` of `{}` has sort {s}, expected {}",
                        param.name, call.name, param.sort
                    ),
                ),
                Ok(_) => {}
            }
        }
    }

    fn check_formula(
        &mut self,
        f: &Formula,
        eq: usize,
        path: String,
        negated: bool,
        constructors: &HashSet<&str>,
    ) {
        let loc = Location::Equation {
            index: eq,
            path: path.clone(),
        };
        match f {
            Formula::Val(t) => {
                self.check_term(t, loc.clone());
                if let Ok(s) = t.sort() {
                    if s != Sort::Bool {
                        self.report(Rule::IllSorted, loc, format!("formula has data sort {s}"));
                    }
                }
            }
            Formula::PredVar(call) => {
                if negated {
                    self.report(
                        Rule::NegativeOccurrence,
                        loc.clone(),
                        format!("`{}` occurs negatively", call.name),
                    );
                }
                self.check_call(call, loc);
            }
            Formula::Neg(a) => {
                if !matches!(**a, Formula::Val(_)) && a.is_simple() {
                    self.report(
                        Rule::NegationOfFormula,
                        loc,
                        "negation may only be applied to data expressions".into(),
                    );
                }
                self.check_formula(a, eq, format!("{path}.not"), !negated, constructors);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.check_formula(a, eq, format!("{path}.0"), negated, constructors);
                self.check_formula(b, eq, format!("{path}.1"), negated, constructors);
            }
            Formula::Implies(a, b) => {
                self.check_formula(a, eq, format!("{path}.0"), !negated, constructors);
                self.check_formula(b, eq, format!("{path}.1"), negated, constructors);
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let mut names = HashSet::new();
                for v in vars {
                    if !names.insert(v.name.as_str()) {
                        self.report(
                            Rule::DuplicateParam,
                            loc.clone(),
                            format!("bound variable `{}` occurs twice", v.name),
                        );
                    }
                    if constructors.contains(v.name.as_str()) {
                        self.report(
                            Rule::NameClash,
                            loc.clone(),
                            format!("bound variable `{}` has the name of a constructor", v.name),
                        );
                    }
                    self.check_sort(&v.sort, loc.clone());
                }
                self.check_formula(body, eq, format!("{path}.body"), negated, constructors);
            }
        }
    }
}
