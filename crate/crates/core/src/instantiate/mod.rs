//! Instantiation of a parameterised parity game into an explicit game.
//!
//! A state is a fixed-width vector `⟨X, x1, …, xM⟩`: slot 0 holds the
//! predicate variable (or one of the constants ⊤/⊥), slot `i` the index of a
//! value in the table of the `i`-th parameter signature. Every conjunct or
//! disjunct of a right-hand side is a transition group with its own
//! successor function, and the dependency matrix tells which slots a group
//! reads and writes, which is what makes caching per group possible.

mod cache;
mod explore;
mod matrix;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::formula::{Formula, PropInst};
use crate::game::Player;
use crate::normal_form::{is_ppg, Part, Polarity, Violation};
use crate::pbes::{equation_priorities, Pbes};
use crate::rewrite::{enumerate_formula, eval, eval_simple, Binding, EvalError};
use crate::sort::Value;
use crate::term::{DataTerm, Var};

pub use cache::GroupCache;
pub use explore::{ExploreOptions, ExploreStats};
pub use matrix::{Dep, DependencyMatrix};

/// Slot contents; slot 0 is the variable, the rest value indices.
pub type State = Box<[u32]>;

#[derive(Debug, Error)]
pub enum InstantiateError {
    #[error("equation {equation} is not a parameterised parity game: {violation}")]
    NotPpg { equation: String, violation: Violation },
    #[error("undefined predicate variable {0}")]
    Undefined(String),
    #[error("{0} expects {1} arguments")]
    Arity(String, usize),
    #[error("while instantiating {state}: {source}")]
    Eval { state: String, source: EvalError },
    #[error("node budget of {0} exceeded")]
    Budget(usize),
}

pub type Result<T> = std::result::Result<T, InstantiateError>;

/// Bidirectional map between values and dense indices.
#[derive(Clone, Debug)]
pub struct ValueTable {
    values: Vec<Value>,
    index: FxHashMap<Value, u32>,
}

impl ValueTable {
    /// A table whose index 0 is `default`.
    pub fn new(default: Value) -> ValueTable {
        let mut t = ValueTable {
            values: Vec::new(),
            index: FxHashMap::default(),
        };
        t.intern(default);
        t
    }

    pub fn intern(&mut self, v: Value) -> u32 {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.values.len() as u32;
        self.values.push(v.clone());
        self.index.insert(v, i);
        i
    }

    pub fn get(&self, i: u32) -> &Value {
        &self.values[i as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One conjunct or disjunct of a right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    /// Index of the owning equation.
    pub var: usize,
    pub part: Part,
    pub polarity: Polarity,
}

/// Static shape of the state vector and of the game nodes.
#[derive(Clone, Debug)]
pub struct Layout {
    /// Parameter signature of slots `1..=M`, in order of first appearance.
    pub slots: Vec<Var>,
    pub names: Vec<String>,
    /// Slot of every parameter, per equation.
    pub param_slots: Vec<Vec<usize>>,
    pub priority: Vec<u32>,
    pub owner: Vec<Player>,
}

impl Layout {
    fn new(p: &Pbes, polarity: &[Polarity]) -> Layout {
        let mut slots: Vec<Var> = Vec::new();
        let mut param_slots = Vec::new();
        for eq in &p.equations {
            let mut own = Vec::new();
            for v in &eq.params {
                let i = match slots.iter().position(|s| s == v) {
                    Some(i) => i,
                    None => {
                        slots.push(v.clone());
                        slots.len() - 1
                    }
                };
                own.push(i + 1);
            }
            param_slots.push(own);
        }
        Layout {
            slots,
            names: p.equations.iter().map(|e| e.name.clone()).collect(),
            param_slots,
            priority: equation_priorities(p),
            owner: polarity
                .iter()
                .map(|pol| match pol {
                    Polarity::Conjunctive => Player::Abelard,
                    Polarity::Disjunctive => Player::Eloise,
                })
                .collect(),
        }
    }

    /// Width of a state vector.
    pub fn width(&self) -> usize {
        self.slots.len() + 1
    }

    /// Slot-0 value of the constant ⊤.
    pub fn top(&self) -> u32 {
        self.names.len() as u32
    }

    /// Slot-0 value of the constant ⊥.
    pub fn bottom(&self) -> u32 {
        self.names.len() as u32 + 1
    }

    pub fn is_constant(&self, s: &[u32]) -> bool {
        s[0] >= self.top()
    }

    /// Priority and owner of the node for `s`. ⊤ is an Abelard node with
    /// priority 0, ⊥ an Eloise node with priority 1.
    pub fn node_kind(&self, s: &[u32]) -> (u32, Player) {
        if s[0] == self.top() {
            (0, Player::Abelard)
        } else if s[0] == self.bottom() {
            (1, Player::Eloise)
        } else {
            (self.priority[s[0] as usize], self.owner[s[0] as usize])
        }
    }

    /// Header row for matrix dumps: `X` for slot 0, then parameter names.
    pub fn slot_names(&self) -> Vec<String> {
        std::iter::once("X".to_string())
            .chain(self.slots.iter().map(|v| v.name.clone()))
            .collect()
    }
}

/// A parameterised parity game prepared for exploration.
pub struct Instantiator {
    pbes: Pbes,
    layout: Layout,
    groups: Vec<Group>,
    groups_of: Vec<Vec<usize>>,
    matrix: DependencyMatrix,
    tables: Vec<ValueTable>,
    /// Per variable: which slots are parameters.
    is_param: Vec<Vec<bool>>,
}

impl Instantiator {
    pub fn new(p: &Pbes) -> Result<Instantiator> {
        let shapes = is_ppg(p).map_err(|(i, violation)| InstantiateError::NotPpg {
            equation: p.equations[i].name.clone(),
            violation,
        })?;
        for eq in &p.equations {
            let mut missing = None;
            crate::formula::visit_pred_vars(&eq.rhs, &mut |c| {
                if missing.is_none() {
                    match p.equation(&c.name) {
                        None => missing = Some(InstantiateError::Undefined(c.name.clone())),
                        Some(t) if t.params.len() != c.args.len() => {
                            missing = Some(InstantiateError::Arity(c.name.clone(), t.params.len()))
                        }
                        _ => {}
                    }
                }
            });
            if let Some(e) = missing {
                return Err(e);
            }
        }
        let polarity: Vec<Polarity> = shapes.iter().map(|s| s.polarity).collect();
        let layout = Layout::new(p, &polarity);
        let mut groups = Vec::new();
        let mut groups_of = Vec::new();
        for (var, shape) in shapes.into_iter().enumerate() {
            let mut parts = shape.parts;
            if parts.is_empty() {
                parts.push(Part::Simple(match shape.polarity {
                    Polarity::Conjunctive => Formula::tt(),
                    Polarity::Disjunctive => Formula::ff(),
                }));
            }
            let mut own = Vec::new();
            for part in parts {
                own.push(groups.len());
                groups.push(Group {
                    var,
                    part,
                    polarity: shape.polarity,
                });
            }
            groups_of.push(own);
        }
        let matrix = DependencyMatrix::new(p, &layout, &groups);
        let tables = layout
            .slots
            .iter()
            .map(|v| ValueTable::new(v.sort.default_value()))
            .collect();
        let is_param = layout
            .param_slots
            .iter()
            .map(|own| {
                let mut m = vec![false; layout.width()];
                m[0] = true;
                for &i in own {
                    m[i] = true;
                }
                m
            })
            .collect();
        Ok(Instantiator {
            pbes: p.clone(),
            layout,
            groups,
            groups_of,
            matrix,
            tables,
            is_param,
        })
    }

    pub fn pbes(&self) -> &Pbes {
        &self.pbes
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// All groups; group `k` in the text is `groups()[k - 1]`.
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Groups belonging to equation `var`.
    pub fn groups_of(&self, var: usize) -> &[usize] {
        &self.groups_of[var]
    }

    pub fn matrix(&self) -> &DependencyMatrix {
        &self.matrix
    }

    pub fn table(&self, slot: usize) -> &ValueTable {
        &self.tables[slot - 1]
    }

    /// The constant node ⊤ or ⊥ in canonical form.
    pub fn constant(&self, value: bool) -> State {
        let mut s = vec![0; self.layout.width()].into_boxed_slice();
        s[0] = if value {
            self.layout.top()
        } else {
            self.layout.bottom()
        };
        s
    }

    /// Encodes `X(v1, …, vn)`; slots that are not parameters of `X` hold
    /// their default.
    pub fn encode_values(&mut self, var: usize, values: &[Value]) -> State {
        let mut s = vec![0; self.layout.width()].into_boxed_slice();
        s[0] = var as u32;
        for (j, v) in values.iter().enumerate() {
            let slot = self.layout.param_slots[var][j];
            s[slot] = self.tables[slot - 1].intern(v.clone());
        }
        s
    }

    /// Encodes a closed instance such as the initial one.
    pub fn encode(&mut self, inst: &PropInst) -> Result<State> {
        let var = self
            .pbes
            .index_of(&inst.name)
            .ok_or_else(|| InstantiateError::Undefined(inst.name.clone()))?;
        if self.pbes.equations[var].params.len() != inst.args.len() {
            return Err(InstantiateError::Arity(
                inst.name.clone(),
                self.pbes.equations[var].params.len(),
            ));
        }
        let values = inst
            .args
            .iter()
            .map(|a| eval(a, &Binding::new()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|source| InstantiateError::Eval {
                state: inst.to_string(),
                source,
            })?;
        Ok(self.encode_values(var, &values))
    }

    /// Parameter values of a variable state.
    pub fn values(&self, s: &[u32]) -> Vec<Value> {
        self.layout.param_slots[s[0] as usize]
            .iter()
            .map(|&slot| self.tables[slot - 1].get(s[slot]).clone())
            .collect()
    }

    /// `X(e1, …, en)`, or `true`/`false` for the constants.
    pub fn decode(&self, s: &[u32]) -> Formula {
        if s[0] == self.layout.top() {
            return Formula::tt();
        }
        if s[0] == self.layout.bottom() {
            return Formula::ff();
        }
        let args = self.values(s).iter().map(DataTerm::from).collect();
        Formula::PredVar(PropInst::new(self.layout.names[s[0] as usize].clone(), args))
    }

    pub fn label(&self, s: &[u32]) -> String {
        self.decode(s).to_string()
    }

    /// Resets every slot that is not a parameter of the state's variable to
    /// its default, so that each instance has a single encoding.
    pub fn canonicalize(&self, s: &mut [u32]) {
        if self.layout.is_constant(s) {
            s[1..].iter_mut().for_each(|x| *x = 0);
            return;
        }
        let mask = &self.is_param[s[0] as usize];
        for (x, &keep) in s.iter_mut().zip(mask) {
            if !keep {
                *x = 0;
            }
        }
    }

    fn binding(&self, s: &[u32]) -> Binding {
        let var = s[0] as usize;
        Binding::from_pairs(&self.pbes.equations[var].params, &self.values(s))
    }

    fn evaluate(&self, s: &[u32], k: usize) -> Result<Outcome> {
        let env = self.binding(s);
        let wrap = |source| InstantiateError::Eval {
            state: self.label(s),
            source,
        };
        match &self.groups[k].part {
            Part::Simple(f) => eval_simple(f, &env).map(Outcome::Constant).map_err(wrap),
            Part::Quant(q) => {
                let target = self.pbes.index_of(&q.target).expect("checked in new");
                let bindings = enumerate_formula(&q.vars, &q.guard_formula(), &env).map_err(wrap)?;
                let mut calls = Vec::with_capacity(bindings.len());
                for b in &bindings {
                    let mut full = env.clone();
                    for (v, x) in b.iter() {
                        full.insert(v.clone(), x.clone());
                    }
                    let values = q
                        .args
                        .iter()
                        .map(|a| eval(a, &full))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(wrap)?;
                    calls.push(values);
                }
                Ok(Outcome::Calls(target, calls))
            }
        }
    }

    /// Successors of `s` in group `k` (0-based). Slots the group does not
    /// write keep their value from `s`; see [`Instantiator::canonicalize`].
    pub fn group_next(&mut self, s: &[u32], k: usize) -> Result<Vec<State>> {
        debug_assert_eq!(self.groups[k].var as u32, s[0]);
        match self.evaluate(s, k)? {
            Outcome::Constant(value) => {
                let mut t: State = s.into();
                t[0] = if value {
                    self.layout.top()
                } else {
                    self.layout.bottom()
                };
                Ok(vec![t])
            }
            Outcome::Calls(target, calls) => {
                let mut out: Vec<State> = Vec::with_capacity(calls.len());
                for values in calls {
                    let mut t: State = s.into();
                    t[0] = target as u32;
                    for (j, v) in values.into_iter().enumerate() {
                        let slot = self.layout.param_slots[target][j];
                        t[slot] = self.tables[slot - 1].intern(v);
                    }
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Union of all groups of the state's variable, canonicalized. The
    /// constants loop on themselves.
    pub fn next_state(&mut self, s: &[u32]) -> Result<Vec<State>> {
        if self.layout.is_constant(s) {
            let mut t: State = s.into();
            self.canonicalize(&mut t);
            return Ok(vec![t]);
        }
        let mut out: Vec<State> = Vec::new();
        for k in self.groups_of[s[0] as usize].clone() {
            for mut t in self.group_next(s, k)? {
                self.canonicalize(&mut t);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        Ok(out)
    }
}

enum Outcome {
    Constant(bool),
    Calls(usize, Vec<Vec<Value>>),
}
