//! Brute-force reference semantics.
//!
//! A system is instantiated straight into a Boolean equation system by
//! expanding quantifiers over their finite domains, and solved by nested
//! fixpoint iteration. Neither step shares code with the normal-form
//! transformation, the state-vector instantiator or the game solver, which
//! makes the oracle usable for cross-checking all three.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::formula::{Formula, PropInst};
use crate::game::{solve_zielonka, ParityGame, Player};
use crate::instantiate::{ExploreOptions, InstantiateError, Instantiator};
use crate::normal_form::{to_ppg, NotBqnf};
use crate::pbes::{blocks, Fixpoint, Pbes};
use crate::rewrite::{domains, eval, eval_simple, guard_conjuncts, Binding, EvalError};
use crate::sort::Value;
use crate::term::DataTerm;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("more than {0} equations")]
    Budget(usize),
    #[error("undefined predicate variable {0}")]
    Undefined(String),
    #[error("`{0}` applies a negation or implication to a predicate variable")]
    NotMonotone(String),
    #[error("while instantiating {state}: {source}")]
    Eval { state: String, source: EvalError },
    #[error(transparent)]
    NotBqnf(#[from] NotBqnf),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Right-hand side of a Boolean equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BesExpr {
    Const(bool),
    Var(usize),
    And(Vec<BesExpr>),
    Or(Vec<BesExpr>),
}

impl BesExpr {
    fn junction(conj: bool, parts: Vec<BesExpr>) -> BesExpr {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                BesExpr::Const(b) if b == conj => {}
                BesExpr::Const(b) => return BesExpr::Const(b),
                BesExpr::And(xs) if conj => out.extend(xs),
                BesExpr::Or(xs) if !conj => out.extend(xs),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => BesExpr::Const(conj),
            1 => out.pop().unwrap_or(BesExpr::Const(conj)),
            _ if conj => BesExpr::And(out),
            _ => BesExpr::Or(out),
        }
    }

    pub fn and(parts: Vec<BesExpr>) -> BesExpr {
        BesExpr::junction(true, parts)
    }

    pub fn or(parts: Vec<BesExpr>) -> BesExpr {
        BesExpr::junction(false, parts)
    }

    fn eval(&self, val: &[bool]) -> bool {
        match self {
            BesExpr::Const(b) => *b,
            BesExpr::Var(i) => val[*i],
            BesExpr::And(xs) => xs.iter().all(|x| x.eval(val)),
            BesExpr::Or(xs) => xs.iter().any(|x| x.eval(val)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesEquation {
    pub name: String,
    pub fixpoint: Fixpoint,
    /// Nesting depth; smaller blocks are outermost.
    pub block: u32,
    pub rhs: BesExpr,
}

/// A parameterless, quantifier-free equation system. Equations are indexed
/// by discovery order, not by block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bes {
    pub equations: Vec<BesEquation>,
    pub init: usize,
}

impl Bes {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }
}

impl fmt::Display for Bes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn expr(b: &Bes, e: &BesExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                BesExpr::Const(c) => write!(f, "{c}"),
                BesExpr::Var(i) => f.write_str(&b.equations[*i].name),
                BesExpr::And(xs) | BesExpr::Or(xs) => {
                    let sep = if matches!(e, BesExpr::And(_)) { " && " } else { " || " };
                    f.write_str("(")?;
                    for (i, x) in xs.iter().enumerate() {
                        if i > 0 {
                            f.write_str(sep)?;
                        }
                        expr(b, x, f)?;
                    }
                    f.write_str(")")
                }
            }
        }
        for eq in &self.equations {
            write!(f, "{} {} = ", eq.fixpoint, eq.name)?;
            expr(self, &eq.rhs, f)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

struct BesBuilder<'a> {
    p: &'a Pbes,
    budget: usize,
    block_of: Vec<u32>,
    index: FxHashMap<(usize, Vec<Value>), usize>,
    pending: VecDeque<(usize, Vec<Value>)>,
    names: Vec<String>,
    vars: Vec<usize>,
}

impl BesBuilder<'_> {
    fn intern(&mut self, call: &PropInst, env: &Binding) -> std::result::Result<usize, ExpandError> {
        let var = self
            .p
            .index_of(&call.name)
            .ok_or_else(|| ExpandError::Fatal(OracleError::Undefined(call.name.clone())))?;
        let values = call
            .args
            .iter()
            .map(|a| eval(a, env))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let key = (var, values);
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        if self.names.len() >= self.budget {
            return Err(ExpandError::Fatal(OracleError::Budget(self.budget)));
        }
        let i = self.names.len();
        let args = key.1.iter().map(DataTerm::from).collect();
        self.names.push(PropInst::new(call.name.clone(), args).to_string());
        self.vars.push(var);
        self.index.insert(key.clone(), i);
        self.pending.push_back(key);
        Ok(i)
    }

    fn expand(&mut self, f: &Formula, env: &mut Binding) -> std::result::Result<BesExpr, ExpandError> {
        Ok(match f {
            _ if f.is_simple() => BesExpr::Const(eval_simple(f, env)?),
            Formula::PredVar(call) => BesExpr::Var(self.intern(call, env)?),
            Formula::Neg(_) => {
                return Err(ExpandError::Fatal(OracleError::NotMonotone(f.to_string())));
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let conj = matches!(f, Formula::And(..));
                let left = self.expand(a, env);
                if matches!(left, Ok(BesExpr::Const(c)) if c != conj) {
                    return Ok(BesExpr::Const(!conj));
                }
                let right = self.expand(b, env);
                match (left, right) {
                    (Ok(x), Ok(y)) => BesExpr::junction(conj, vec![x, y]),
                    (_, Ok(BesExpr::Const(c))) if c != conj => BesExpr::Const(c),
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
            Formula::Implies(a, b) => {
                if !a.is_simple() {
                    return Err(ExpandError::Fatal(OracleError::NotMonotone(f.to_string())));
                }
                match eval_simple(a, env) {
                    Ok(false) => BesExpr::Const(true),
                    Ok(true) => self.expand(b, env)?,
                    Err(e) => match self.expand(b, env) {
                        Ok(BesExpr::Const(true)) => BesExpr::Const(true),
                        _ => return Err(e.into()),
                    },
                }
            }
            Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let doms = domains(vars, &guard_conjuncts(body, universal), env)?;
                let mut parts = Vec::new();
                self.expand_all(vars, &doms, body, env, &mut parts)?;
                BesExpr::junction(universal, parts)
            }
            Formula::Val(_) => unreachable!("simple"),
        })
    }

    fn expand_all(
        &mut self,
        vars: &[crate::term::Var],
        doms: &[Vec<Value>],
        body: &Formula,
        env: &mut Binding,
        out: &mut Vec<BesExpr>,
    ) -> std::result::Result<(), ExpandError> {
        let Some(v) = vars.first() else {
            out.push(self.expand(body, env)?);
            return Ok(());
        };
        for x in &doms[0] {
            let depth = env.len();
            env.insert(v.clone(), x.clone());
            let r = self.expand_all(&vars[1..], &doms[1..], body, env, out);
            env.truncate(depth);
            r?;
        }
        Ok(())
    }
}

#[derive(Debug)]
enum ExpandError {
    Eval(EvalError),
    Fatal(OracleError),
}

impl From<EvalError> for ExpandError {
    fn from(e: EvalError) -> Self {
        ExpandError::Eval(e)
    }
}

/// Instantiates the part of `p` reachable from its initial instance, with
/// at most `budget` equations.
pub fn instantiate_bes(p: &Pbes, budget: usize) -> Result<Bes> {
    let mut block_of = vec![0; p.equations.len()];
    for b in blocks(p) {
        for i in b.members.clone() {
            block_of[i] = b.index as u32;
        }
    }
    let mut builder = BesBuilder {
        p,
        budget,
        block_of,
        index: FxHashMap::default(),
        pending: VecDeque::new(),
        names: Vec::new(),
        vars: Vec::new(),
    };
    let lift = |state: String| {
        move |e| match e {
            ExpandError::Eval(source) => OracleError::Eval { state, source },
            ExpandError::Fatal(e) => e,
        }
    };
    let init = builder
        .intern(&p.init, &Binding::new())
        .map_err(lift(p.init.to_string()))?;
    let mut rhs = Vec::new();
    while let Some((var, values)) = builder.pending.pop_front() {
        let eq = &p.equations[var];
        let mut env = Binding::from_pairs(&eq.params, &values);
        let name = builder.names[rhs.len()].clone();
        rhs.push(builder.expand(&eq.rhs, &mut env).map_err(lift(name))?);
    }
    let equations = rhs
        .into_iter()
        .enumerate()
        .map(|(i, rhs)| {
            let var = builder.vars[i];
            BesEquation {
                name: builder.names[i].clone(),
                fixpoint: p.equations[var].fixpoint,
                block: builder.block_of[var],
                rhs,
            }
        })
        .collect();
    Ok(Bes { equations, init })
}

/// The game as an equation system: node `v` becomes an equation over its
/// successors, conjunctive for Abelard, with a greatest fixpoint for even
/// and a least one for odd priorities, nested by priority.
pub fn game_to_bes(g: &ParityGame) -> Bes {
    let equations = (0..g.num_nodes())
        .map(|v| {
            let succ = g.successors(v).map(BesExpr::Var).collect();
            BesEquation {
                name: format!("v{v}"),
                fixpoint: if g.priority(v).is_multiple_of(2) {
                    Fixpoint::Nu
                } else {
                    Fixpoint::Mu
                },
                block: g.priority(v),
                rhs: match g.owner(v) {
                    Player::Abelard => BesExpr::and(succ),
                    Player::Eloise => BesExpr::or(succ),
                },
            }
        })
        .collect();
    Bes {
        equations,
        init: g.initial(),
    }
}

/// Solution of every equation, by nested Kleene iteration: each block
/// starts from its extreme value and is re-evaluated, with all inner blocks
/// solved afresh, until it is stable.
pub fn solve_bes(b: &Bes) -> Vec<bool> {
    let mut order: Vec<u32> = b.equations.iter().map(|e| e.block).collect();
    order.sort_unstable();
    order.dedup();
    let levels: Vec<Vec<usize>> = order
        .iter()
        .map(|&blk| (0..b.len()).filter(|&i| b.equations[i].block == blk).collect())
        .collect();
    let mut val = vec![false; b.len()];
    solve_level(b, &levels, 0, &mut val);
    val
}

fn solve_level(b: &Bes, levels: &[Vec<usize>], level: usize, val: &mut [bool]) {
    let Some(members) = levels.get(level) else {
        return;
    };
    for &i in members {
        val[i] = b.equations[i].fixpoint == Fixpoint::Nu;
    }
    loop {
        solve_level(b, levels, level + 1, val);
        let mut changed = false;
        for &i in members {
            let x = b.equations[i].rhs.eval(val);
            if x != val[i] {
                val[i] = x;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Outcome of running the three independent pipelines on one system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    /// Oracle on the input.
    pub original: bool,
    /// Oracle on the transformed system.
    pub transformed: bool,
    /// Whether Eloise wins the initial node of the explored game.
    pub game: bool,
    pub original_size: usize,
    pub transformed_size: usize,
    pub game_nodes: usize,
    /// Instances of input variables solved differently by the two oracle
    /// runs.
    pub mismatches: Vec<String>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.original == self.transformed && self.transformed == self.game && self.mismatches.is_empty()
    }
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oracle.input={} ({} equations)", self.original, self.original_size)?;
        writeln!(
            f,
            "oracle.transformed={} ({} equations)",
            self.transformed, self.transformed_size
        )?;
        writeln!(f, "game={} ({} nodes)", self.game, self.game_nodes)?;
        for m in &self.mismatches {
            writeln!(f, "mismatch={m}")?;
        }
        writeln!(f, "agree={}", self.agrees())
    }
}

/// Solves `p` by the oracle, its transformation by the oracle, and its
/// transformation by instantiation and Zielonka's algorithm. `budget` bounds
/// both equation systems and the game.
pub fn crosscheck(p: &Pbes, budget: usize) -> Result<CrossCheck> {
    let bes = instantiate_bes(p, budget)?;
    let sol = solve_bes(&bes);
    let ppg = to_ppg(p)?;
    let bes2 = instantiate_bes(&ppg, budget)?;
    let sol2 = solve_bes(&bes2);
    let (game, _) = Instantiator::new(&ppg)?.explore(&ExploreOptions {
        labels: false,
        max_nodes: Some(budget + 2),
        ..Default::default()
    })?;
    let won = solve_zielonka(&game).winner[game.initial()] == Player::Eloise;
    let mismatches = bes
        .equations
        .iter()
        .enumerate()
        .filter_map(|(i, eq)| {
            let j = bes2.index_of(&eq.name)?;
            (sol[i] != sol2[j]).then(|| eq.name.clone())
        })
        .collect();
    Ok(CrossCheck {
        original: sol[bes.init],
        transformed: sol2[bes2.init],
        game: won,
        original_size: bes.len(),
        transformed_size: bes2.len(),
        game_nodes: game.num_nodes(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_pbes;

    fn solve_text(text: &str) -> bool {
        let b = instantiate_bes(&parse_pbes(text).unwrap(), 1000).unwrap();
        solve_bes(&b)[b.init]
    }

    #[test]
    fn trivial_fixpoints() {
        assert!(solve_text("pbes nu X() = X(); init X();"));
        assert!(!solve_text("pbes mu X() = X(); init X();"));
        let b = instantiate_bes(&parse_pbes("pbes nu X() = X(); init X();").unwrap(), 10).unwrap();
        assert_eq!(b.equations[0].rhs, BesExpr::Var(0));
    }

    #[test]
    fn nesting_order_matters() {
        // nu X() = Y(); mu Y() = X()  is true, mu X() = Y(); nu Y() = X() is false
        assert!(solve_text("pbes nu X() = Y(); mu Y() = X(); init X();"));
        assert!(!solve_text("pbes mu X() = Y(); nu Y() = X(); init X();"));
        // alternation: Y() must eventually leave, X() may loop forever
        assert!(solve_text("pbes nu X() = Y(); mu Y() = X() || Y(); init Y();"));
        assert!(!solve_text("pbes nu X() = Y() && false; mu Y() = X() || Y(); init Y();"));
    }

    #[test]
    fn expansion_is_tolerant() {
        let text = "sort D = a | b;\npbes nu X(q: List(D)) = (q != [] => X(tail(q))) && (q == [] || head(q) == a); init X([a, b]);";
        let b = instantiate_bes(&parse_pbes(text).unwrap(), 10).unwrap();
        assert_eq!(b.len(), 3);
        assert!(!solve_bes(&b)[b.init]);
    }

    #[test]
    fn budget_is_enforced() {
        let p = parse_pbes("pbes nu X(n: Nat) = X(n + 1); init X(0);").unwrap();
        assert!(matches!(instantiate_bes(&p, 50), Err(OracleError::Budget(50))));
    }

    #[test]
    fn game_translation() {
        use Player::{Abelard as A, Eloise as E};
        let g = ParityGame::new(
            vec![1, 3, 2, 0, 1],
            vec![E, A, E, A, E],
            vec![vec![1, 2], vec![0], vec![2], vec![0, 3], vec![3]],
            vec![None; 5],
            0,
        )
        .unwrap();
        let sol = solve_bes(&game_to_bes(&g));
        let z = solve_zielonka(&g);
        for v in 0..5 {
            assert_eq!(sol[v], z.winner[v] == E);
        }
    }
}
