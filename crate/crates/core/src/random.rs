//! Random inputs for property tests and benchmark campaigns.
//!
//! Systems use the sorts `Bool`, `D = a | b | c` and `Nat`. Natural-number
//! arguments are constants below three, variables, or a guarded increment,
//! so every instantiation stays finite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, PropInst};
use crate::game::{ParityGame, Player};
use crate::pbes::{Equation, Fixpoint, Pbes};
use crate::sort::{EnumSort, Sort};
use crate::term::{DataTerm, Op, Var};

/// Size limits for [`random_bqnf`].
#[derive(Clone, Debug)]
pub struct SystemShape {
    pub max_equations: usize,
    pub max_params: usize,
    /// Leaves per conjunction or disjunction.
    pub max_width: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape {
            max_equations: 5,
            max_params: 3,
            max_width: 4,
        }
    }
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    d: Arc<EnumSort>,
    /// Name and parameters of every equation.
    heads: Vec<(String, Vec<Var>)>,
    fresh: usize,
    shape: SystemShape,
}

impl<R: Rng> Gen<'_, R> {
    fn sort(&mut self) -> Sort {
        match self.rng.gen_range(0..3) {
            0 => Sort::Bool,
            1 => Sort::Enum(self.d.clone()),
            _ => Sort::Nat,
        }
    }

    fn bound_var(&mut self) -> Var {
        self.fresh += 1;
        let sort = self.sort();
        Var::new(format!("e{}", self.fresh), sort)
    }

    fn pick<'a>(&mut self, scope: &'a [Var], sort: &Sort) -> Option<&'a Var> {
        let matching: Vec<&Var> = scope.iter().filter(|v| &v.sort == sort).collect();
        matching.choose(self.rng).copied()
    }

    fn constant(&mut self, sort: &Sort) -> DataTerm {
        match sort {
            Sort::Bool => DataTerm::Bool(self.rng.gen()),
            Sort::Enum(e) => DataTerm::Enum(e.clone(), self.rng.gen_range(0..e.constructors.len())),
            _ => DataTerm::Nat(self.rng.gen_range(0..3)),
        }
    }

    /// A Boolean data atom over the variables in scope.
    fn atom(&mut self, scope: &[Var]) -> DataTerm {
        let Some(v) = scope.choose(self.rng).cloned() else {
            return DataTerm::Bool(self.rng.gen_bool(0.7));
        };
        let x = DataTerm::Var(v.clone());
        match &v.sort {
            Sort::Bool if self.rng.gen() => x,
            Sort::Bool => DataTerm::unary(Op::Not, x),
            Sort::Enum(_) => {
                let op = if self.rng.gen() { Op::Eq } else { Op::Neq };
                let c = self.constant(&v.sort);
                DataTerm::binary(op, x, c)
            }
            _ => {
                let op = *[Op::Lt, Op::Eq, Op::Geq].choose(self.rng).unwrap_or(&Op::Lt);
                let c = DataTerm::Nat(self.rng.gen_range(1..3));
                DataTerm::binary(op, x, c)
            }
        }
    }

    /// A simple formula, mixing formula-level and data-level connectives.
    fn simple(&mut self, scope: &[Var]) -> Formula {
        match self.rng.gen_range(0..6) {
            0 => Formula::and(Formula::Val(self.atom(scope)), Formula::Val(self.atom(scope))),
            1 => Formula::or(Formula::Val(self.atom(scope)), Formula::Val(self.atom(scope))),
            2 => {
                let op = if self.rng.gen() { Op::And } else { Op::Or };
                Formula::Val(DataTerm::binary(op, self.atom(scope), self.atom(scope)))
            }
            3 => Formula::neg(Formula::Val(self.atom(scope))),
            _ => Formula::Val(self.atom(scope)),
        }
    }

    /// Guard for a new bound variable: a bound for a `Nat` variable, maybe
    /// followed by a condition.
    fn guard(&mut self, v: &Var, scope: &[Var]) -> Option<Formula> {
        let bound = (v.sort == Sort::Nat).then(|| {
            Formula::Val(DataTerm::binary(
                Op::Lt,
                DataTerm::Var(v.clone()),
                DataTerm::Nat(self.rng.gen_range(1..4)),
            ))
        });
        let extra = self.rng.gen_bool(0.5).then(|| self.simple(scope));
        match (bound, extra) {
            (Some(b), Some(e)) => Some(Formula::and(b, e)),
            (b, e) => b.or(e),
        }
    }

    fn arg(&mut self, scope: &[Var], sort: &Sort, guard: &mut Vec<Formula>) -> DataTerm {
        match (self.pick(scope, sort).cloned(), self.rng.gen_range(0..10)) {
            (Some(v), 0..=3) => DataTerm::Var(v),
            (Some(v), 4) if *sort == Sort::Nat => {
                guard.push(Formula::Val(DataTerm::binary(
                    Op::Lt,
                    DataTerm::Var(v.clone()),
                    DataTerm::Nat(2),
                )));
                DataTerm::binary(Op::Plus, DataTerm::Var(v), DataTerm::Nat(1))
            }
            (_, 5) if *sort == Sort::Bool && !scope.is_empty() => self.atom(scope),
            _ => self.constant(sort),
        }
    }

    /// A call to a random equation; increments need guards, which are
    /// returned alongside.
    fn call(&mut self, scope: &[Var]) -> (Formula, Vec<Formula>) {
        let (name, params) = self.heads.choose(self.rng).cloned().expect("equations");
        let mut guards = Vec::new();
        let args = params.iter().map(|p| self.arg(scope, &p.sort, &mut guards)).collect();
        (Formula::PredVar(PropInst::new(name, args)), guards)
    }

    fn with_guards(guard: Option<Formula>, extra: Vec<Formula>) -> Option<Formula> {
        extra.into_iter().fold(guard, |g, x| {
            Some(match g {
                Some(g) => Formula::and(g, x),
                None => x,
            })
        })
    }

    fn disj_leaf(&mut self, scope: &[Var]) -> Formula {
        match self.rng.gen_range(0..8) {
            0 => self.simple(scope),
            1..=3 => {
                let (call, extra) = self.call(scope);
                match Self::with_guards(None, extra) {
                    Some(g) => Formula::and(g, call),
                    None => call,
                }
            }
            4 | 5 => {
                let g = self.simple(scope);
                let (call, extra) = self.call(scope);
                Formula::and(Self::with_guards(Some(g), extra).unwrap_or_else(Formula::tt), call)
            }
            _ => {
                let v = self.bound_var();
                let inner: Vec<Var> = scope.iter().cloned().chain([v.clone()]).collect();
                let g = self.guard(&v, &inner);
                let (call, extra) = self.call(&inner);
                let body = match Self::with_guards(g, extra) {
                    Some(g) => Formula::and(g, call),
                    None => call,
                };
                Formula::exists(vec![v], body)
            }
        }
    }

    fn disj(&mut self, scope: &[Var]) -> Formula {
        let n = self.rng.gen_range(1..=self.shape.max_width);
        Formula::disjunction((0..n).map(|_| self.disj_leaf(scope)).collect::<Vec<_>>())
    }

    fn conj_leaf(&mut self, scope: &[Var]) -> Formula {
        match self.rng.gen_range(0..8) {
            0 => self.simple(scope),
            1 | 2 => {
                let g = self.simple(scope);
                Formula::implies(g, self.disj(scope))
            }
            3 | 4 => {
                let v = self.bound_var();
                let inner: Vec<Var> = scope.iter().cloned().chain([v.clone()]).collect();
                let body = self.disj(&inner);
                let body = match self.guard(&v, &inner) {
                    Some(g) => Formula::implies(g, body),
                    None => body,
                };
                Formula::forall(vec![v], body)
            }
            _ => self.disj(scope),
        }
    }

    fn rhs(&mut self, scope: &[Var]) -> Formula {
        match self.rng.gen_range(0..6) {
            0 => {
                let v = self.bound_var();
                let inner: Vec<Var> = scope.iter().cloned().chain([v.clone()]).collect();
                let body = self.conj(&inner);
                let body = match self.guard(&v, &inner) {
                    Some(g) => Formula::implies(g, body),
                    None => body,
                };
                Formula::forall(vec![v], body)
            }
            1 => {
                let v = self.bound_var();
                let inner: Vec<Var> = scope.iter().cloned().chain([v.clone()]).collect();
                let (call, extra) = self.call(&inner);
                let body = match Self::with_guards(self.guard(&v, &inner), extra) {
                    Some(g) => Formula::and(g, call),
                    None => call,
                };
                Formula::exists(vec![v], body)
            }
            _ => self.conj(scope),
        }
    }

    fn conj(&mut self, scope: &[Var]) -> Formula {
        let n = self.rng.gen_range(1..=self.shape.max_width);
        Formula::conjunction((0..n).map(|_| self.conj_leaf(scope)).collect::<Vec<_>>())
    }
}

/// A random, valid system whose right-hand sides are in BQNF.
pub fn random_bqnf<R: Rng>(rng: &mut R, shape: &SystemShape) -> Pbes {
    let d = EnumSort::new("D", &["a", "b", "c"]);
    let n = rng.gen_range(1..=shape.max_equations);
    let names = ["X", "Y", "Z", "W", "V", "U"];
    let mut gen = Gen {
        rng,
        d: d.clone(),
        heads: Vec::new(),
        fresh: 0,
        shape: shape.clone(),
    };
    for i in 0..n {
        let k = gen.rng.gen_range(0..=shape.max_params);
        let params: Vec<Var> = (0..k)
            .map(|j| {
                let sort = gen.sort();
                let prefix = match sort {
                    Sort::Bool => "b",
                    Sort::Nat => "n",
                    _ => "d",
                };
                Var::new(format!("{prefix}{j}"), sort)
            })
            .collect();
        gen.heads.push((names[i % names.len()].to_string(), params));
    }
    let mut equations = Vec::new();
    for (name, params) in gen.heads.clone() {
        let fixpoint = if gen.rng.gen() { Fixpoint::Nu } else { Fixpoint::Mu };
        let rhs = gen.rhs(&params);
        equations.push(Equation::new(fixpoint, name, params, rhs));
    }
    let (name, params) = gen.heads[0].clone();
    let args = params.iter().map(|p| gen.constant(&p.sort)).collect();
    Pbes {
        sorts: vec![d],
        equations,
        init: PropInst::new(name, args),
    }
}

/// A random game with `nodes` nodes and priorities up to `max_priority`.
/// Most nodes get one to three successors; about one in fifty has none.
pub fn random_game<R: Rng>(rng: &mut R, nodes: usize, max_priority: u32) -> ParityGame {
    let priority = (0..nodes).map(|_| rng.gen_range(0..=max_priority)).collect();
    let owner = (0..nodes)
        .map(|_| if rng.gen() { Player::Eloise } else { Player::Abelard })
        .collect();
    let successors = (0..nodes)
        .map(|_| {
            let k = if rng.gen_ratio(1, 50) { 0 } else { rng.gen_range(1..=3) };
            (0..k).map(|_| rng.gen_range(0..nodes)).collect()
        })
        .collect();
    ParityGame::new(priority, owner, successors, vec![None; nodes], 0).expect("edges in range")
}
