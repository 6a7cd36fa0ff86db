//! Explicit parity games under the min-parity condition.

mod pgsolver;
mod verify;
mod zielonka;

use std::fmt;

use thiserror::Error;

pub use pgsolver::{read_pgsolver, write_pgsolver, Convention, PgSolverError};
pub use verify::{verify_strategy, StrategyViolation};
pub use zielonka::{solve_zielonka, solve_zielonka_max, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    /// Player even; owns disjunctive nodes.
    Eloise,
    /// Player odd; owns conjunctive nodes.
    Abelard,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }

    /// The player favoured by a priority of this parity.
    pub fn of_parity(priority: u32) -> Player {
        if priority.is_multiple_of(2) {
            Player::Eloise
        } else {
            Player::Abelard
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eloise => "Eloise",
            Player::Abelard => "Abelard",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("edge {0} -> {1} leaves the game")]
    EdgeOutOfRange(usize, usize),
    #[error("initial node {0} does not exist")]
    InitialOutOfRange(usize),
    #[error("per-node tables have different lengths")]
    LengthMismatch,
}

/// A game graph in compressed adjacency form. Successor lists are sorted and
/// free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    priority: Vec<u32>,
    owner: Vec<Player>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<Option<String>>,
    initial: usize,
}

impl ParityGame {
    pub fn new(
        priority: Vec<u32>,
        owner: Vec<Player>,
        successors: Vec<Vec<usize>>,
        labels: Vec<Option<String>>,
        initial: usize,
    ) -> Result<ParityGame, GameError> {
        let n = priority.len();
        if owner.len() != n || successors.len() != n || labels.len() != n {
            return Err(GameError::LengthMismatch);
        }
        if n > 0 && initial >= n || n == 0 && initial != 0 {
            return Err(GameError::InitialOutOfRange(initial));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (v, mut succ) in successors.into_iter().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            for &w in &succ {
                if w >= n {
                    return Err(GameError::EdgeOutOfRange(v, w));
                }
                targets.push(w as u32);
            }
            offsets.push(targets.len());
        }
        Ok(ParityGame {
            priority,
            owner,
            offsets,
            targets,
            labels,
            initial,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.priority.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn successors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.targets[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&w| w as usize)
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.targets[self.offsets[v]..self.offsets[v + 1]]
            .binary_search(&(w as u32))
            .is_ok()
    }

    pub fn max_priority(&self) -> Option<u32> {
        self.priority.iter().copied().max()
    }

    /// Predecessor lists in compressed form: `(offsets, sources)`.
    pub fn predecessors(&self) -> (Vec<usize>, Vec<u32>) {
        let n = self.num_nodes();
        let mut count = vec![0usize; n + 1];
        for &w in &self.targets {
            count[w as usize + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut sources = vec![0u32; self.targets.len()];
        for v in 0..n {
            for w in self.successors(v) {
                sources[fill[w]] = v as u32;
                fill[w] += 1;
            }
        }
        (count, sources)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("empty play")]
    Empty,
    #[error("no edge from {0} to {1}")]
    NotAnEdge(usize, usize),
    #[error("finite play ends in node {0}, which has a move")]
    NotMaximal(usize),
    #[error("loop start {0} is outside the play")]
    BadLoop(usize),
    #[error("node {0} does not exist")]
    UnknownNode(usize),
}

/// Winner of a play. A finite play (`loop_start = None`) must end in a node
/// without moves, whose owner loses. An infinite play is given as a lasso:
/// `path[loop_start..]` repeats forever, so the last node must have an edge
/// back to `path[loop_start]`; Eloise wins iff the least priority on the
/// loop is even.
pub fn winner_of_play(
    g: &ParityGame,
    path: &[usize],
    loop_start: Option<usize>,
) -> Result<Player, PlayError> {
    let (&last, _) = path.split_last().ok_or(PlayError::Empty)?;
    if let Some(&v) = path.iter().find(|&&v| v >= g.num_nodes()) {
        return Err(PlayError::UnknownNode(v));
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(PlayError::NotAnEdge(w[0], w[1]));
        }
    }
    match loop_start {
        None => {
            if g.successors(last).len() > 0 {
                return Err(PlayError::NotMaximal(last));
            }
            Ok(g.owner(last).opponent())
        }
        Some(s) => {
            if s >= path.len() {
                return Err(PlayError::BadLoop(s));
            }
            if !g.has_edge(last, path[s]) {
                return Err(PlayError::NotAnEdge(last, path[s]));
            }
            let min = path[s..].iter().map(|&v| g.priority(v)).min().unwrap_or(0);
            Ok(Player::of_parity(min))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 0 (p0, Abelard) -> 1, 2;  1 (p1, Eloise) -> 1;  2 (p2, Eloise) -> 0;  3 (p3, Abelard) dead end.
    fn small() -> ParityGame {
        ParityGame::new(
            vec![0, 1, 2, 3],
            vec![Player::Abelard, Player::Eloise, Player::Eloise, Player::Abelard],
            vec![vec![2, 1], vec![1], vec![0], vec![]],
            vec![None; 4],
            0,
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        let g = small();
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.successors(0).collect::<Vec<_>>(), [1, 2]);
        let (off, src) = g.predecessors();
        assert_eq!(&src[off[0]..off[1]], &[2]);
        assert_eq!(&src[off[1]..off[2]], &[0, 1]);
        assert_eq!(
            ParityGame::new(vec![0], vec![Player::Eloise], vec![vec![1]], vec![None], 0),
            Err(GameError::EdgeOutOfRange(0, 1))
        );
        assert_eq!(
            ParityGame::new(vec![0], vec![Player::Eloise], vec![vec![]], vec![None], 1),
            Err(GameError::InitialOutOfRange(1))
        );
    }

    #[test]
    fn play_winners() {
        let g = small();
        assert_eq!(winner_of_play(&g, &[3], None), Ok(Player::Eloise));
        assert_eq!(winner_of_play(&g, &[0, 1], Some(1)), Ok(Player::Abelard));
        assert_eq!(winner_of_play(&g, &[0, 2], Some(0)), Ok(Player::Eloise));
        assert_eq!(winner_of_play(&g, &[0, 3], None), Err(PlayError::NotAnEdge(0, 3)));
        assert_eq!(winner_of_play(&g, &[0, 1], None), Err(PlayError::NotMaximal(1)));
        assert_eq!(winner_of_play(&g, &[0, 2], Some(1)), Err(PlayError::NotAnEdge(2, 2)));
    }

    #[test]
    fn eloise_dead_end_loses() {
        let g = ParityGame::new(vec![4], vec![Player::Eloise], vec![vec![]], vec![None], 0).unwrap();
        assert_eq!(winner_of_play(&g, &[0], None), Ok(Player::Abelard));
    }
}
