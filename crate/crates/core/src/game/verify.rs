//! Independent check that a positional strategy wins a region.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use super::{ParityGame, Player};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyViolation {
    #[error("node {0} has no move")]
    NoMove(usize),
    #[error("node {0} has no choice")]
    MissingChoice(usize),
    #[error("choice {1} of node {0} is not a successor")]
    NotAnEdge(usize, usize),
    #[error("choice {1} of node {0} leaves the region")]
    LeavesRegion(usize, usize),
    #[error("the opponent can move from {0} to {1}, outside the region")]
    OpponentEscapes(usize, usize),
    #[error("a cycle through node {node} has least priority {priority}")]
    LosingCycle { node: usize, priority: u32 },
}

/// Checks that `strategy` wins every node of `region` for `player` under the
/// min-parity condition.
///
/// The region must be closed under the strategy and under all opponent moves,
/// the player must never be stuck, and every cycle of the restricted graph
/// must have a least priority of the player's parity. The last condition is
/// checked per losing priority `q`: no strongly connected component of the
/// subgraph on priorities `>= q` may contain a `q` node and a cycle.
pub fn verify_strategy(
    g: &ParityGame,
    player: Player,
    region: &[bool],
    strategy: &[Option<usize>],
) -> Result<(), StrategyViolation> {
    let n = g.num_nodes();
    let moves = |v: usize| -> Vec<usize> {
        if g.owner(v) == player {
            strategy[v].into_iter().collect()
        } else {
            g.successors(v).collect()
        }
    };
    for v in (0..n).filter(|&v| region[v]) {
        if g.owner(v) == player {
            if g.successors(v).len() == 0 {
                return Err(StrategyViolation::NoMove(v));
            }
            let w = strategy[v].ok_or(StrategyViolation::MissingChoice(v))?;
            if !g.has_edge(v, w) {
                return Err(StrategyViolation::NotAnEdge(v, w));
            }
            if !region[w] {
                return Err(StrategyViolation::LeavesRegion(v, w));
            }
        } else if let Some(w) = g.successors(v).find(|&w| !region[w]) {
            return Err(StrategyViolation::OpponentEscapes(v, w));
        }
    }

    let mut losing: Vec<u32> = (0..n)
        .filter(|&v| region[v] && Player::of_parity(g.priority(v)) != player)
        .map(|v| g.priority(v))
        .collect();
    losing.sort_unstable();
    losing.dedup();

    for q in losing {
        let keep = |v: usize| region[v] && g.priority(v) >= q;
        let mut graph = DiGraph::<usize, ()>::new();
        let mut index = vec![NodeIndex::end(); n];
        for v in (0..n).filter(|&v| keep(v)) {
            index[v] = graph.add_node(v);
        }
        for v in (0..n).filter(|&v| keep(v)) {
            for w in moves(v).into_iter().filter(|&w| keep(w)) {
                graph.add_edge(index[v], index[w], ());
            }
        }
        for scc in tarjan_scc(&graph) {
            let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
            if !cyclic {
                continue;
            }
            if let Some(&i) = scc.iter().find(|&&i| g.priority(graph[i]) == q) {
                return Err(StrategyViolation::LosingCycle {
                    node: graph[i],
                    priority: q,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Player::{Abelard as A, Eloise as E};

    fn two_cycle() -> ParityGame {
        // 0 (p1, E) -> 0, 1;  1 (p2, A) -> 0
        ParityGame::new(vec![1, 2], vec![E, A], vec![vec![0, 1], vec![0]], vec![None; 2], 0)
            .unwrap()
    }

    #[test]
    fn detects_losing_cycle() {
        let g = two_cycle();
        let all = [true, true];
        // staying on the priority-1 self-loop loses for Eloise
        assert_eq!(
            verify_strategy(&g, E, &all, &[Some(0), None]),
            Err(StrategyViolation::LosingCycle { node: 0, priority: 1 })
        );
        // the cycle 0 -> 1 -> 0 has least priority 1 as well
        assert!(verify_strategy(&g, E, &all, &[Some(1), None]).is_err());
        // Abelard wins everything with any choice
        assert_eq!(verify_strategy(&g, A, &all, &[None, Some(0)]), Ok(()));
    }

    #[test]
    fn detects_escapes_and_bad_choices() {
        let g = two_cycle();
        assert_eq!(
            verify_strategy(&g, A, &[false, true], &[None, Some(0)]),
            Err(StrategyViolation::LeavesRegion(1, 0))
        );
        assert_eq!(
            verify_strategy(&g, E, &[false, true], &[None, None]),
            Err(StrategyViolation::OpponentEscapes(1, 0))
        );
        assert_eq!(
            verify_strategy(&g, E, &[true, true], &[None, None]),
            Err(StrategyViolation::MissingChoice(0))
        );
    }
}
