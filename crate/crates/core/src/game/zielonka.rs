//! Zielonka's recursive algorithm.
//!
//! Nodes without moves are handled first at every level: the owner loses
//! there, and so on the opponent's attractor of those nodes. What remains has
//! a move everywhere, which the classic recursion assumes.

use super::{ParityGame, Player};

/// Winning regions and a positional strategy covering every node with moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    /// For each node the chosen successor; `None` only for nodes without
    /// moves. The choice is winning for the owner on the owner's region.
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn region(&self, player: Player) -> Vec<bool> {
        self.winner.iter().map(|&w| w == player).collect()
    }
}

/// Solves under the min-parity condition.
pub fn solve_zielonka(g: &ParityGame) -> Solution {
    Solver::new(g, false).run()
}

/// Solves under the max-parity condition: Eloise wins an infinite play iff
/// the greatest priority seen infinitely often is even.
pub fn solve_zielonka_max(g: &ParityGame) -> Solution {
    Solver::new(g, true).run()
}

struct Solver<'a> {
    g: &'a ParityGame,
    pred_offsets: Vec<usize>,
    pred_sources: Vec<u32>,
    strategy: Vec<Option<usize>>,
    max: bool,
}

impl<'a> Solver<'a> {
    fn new(g: &'a ParityGame, max: bool) -> Solver<'a> {
        let (pred_offsets, pred_sources) = g.predecessors();
        Solver {
            g,
            pred_offsets,
            pred_sources,
            strategy: vec![None; g.num_nodes()],
            max,
        }
    }

    fn run(mut self) -> Solution {
        let n = self.g.num_nodes();
        let won = self.solve((0..n).collect());
        let mut winner = vec![Player::Eloise; n];
        for &v in &won[Player::Abelard.index()] {
            winner[v] = Player::Abelard;
        }
        for v in 0..n {
            if self.strategy[v].is_none() {
                self.strategy[v] = self.g.successors(v).next();
            }
        }
        Solution {
            winner,
            strategy: self.strategy,
        }
    }

    fn mask(&self, nodes: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.g.num_nodes()];
        for &v in nodes {
            m[v] = true;
        }
        m
    }

    fn first_successor_in(&self, v: usize, set: &[bool]) -> Option<usize> {
        self.g.successors(v).find(|&w| set[w])
    }

    /// Attractor of `target` for `player` within the subgame `sub`. Records
    /// the player's choices for attracted nodes outside `target`.
    fn attractor(&mut self, sub: &[bool], player: Player, target: &[usize]) -> Vec<usize> {
        let g = self.g;
        let mut inside = vec![false; g.num_nodes()];
        let mut remaining: Vec<u32> = vec![u32::MAX; g.num_nodes()];
        let mut out = Vec::with_capacity(target.len());
        for &t in target {
            if !inside[t] {
                inside[t] = true;
                out.push(t);
            }
        }
        let mut head = 0;
        while head < out.len() {
            let w = out[head];
            head += 1;
            for i in self.pred_offsets[w]..self.pred_offsets[w + 1] {
                let v = self.pred_sources[i] as usize;
                if !sub[v] || inside[v] {
                    continue;
                }
                let attracted = if g.owner(v) == player {
                    true
                } else {
                    if remaining[v] == u32::MAX {
                        remaining[v] = g.successors(v).filter(|&x| sub[x]).count() as u32;
                    }
                    remaining[v] -= 1;
                    remaining[v] == 0
                };
                if attracted {
                    if g.owner(v) == player {
                        self.strategy[v] = g.successors(v).find(|&x| sub[x] && inside[x]);
                    }
                    inside[v] = true;
                    out.push(v);
                }
            }
        }
        out
    }

    fn solve(&mut self, mut nodes: Vec<usize>) -> [Vec<usize>; 2] {
        let mut won: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        if nodes.is_empty() {
            return won;
        }
        let mut sub = self.mask(&nodes);

        for stuck in [Player::Eloise, Player::Abelard] {
            let sinks: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&v| self.g.owner(v) == stuck && self.first_successor_in(v, &sub).is_none())
                .collect();
            if sinks.is_empty() {
                continue;
            }
            let attr = self.attractor(&sub, stuck.opponent(), &sinks);
            for &v in &attr {
                sub[v] = false;
            }
            nodes.retain(|&v| sub[v]);
            won[stuck.opponent().index()].extend(attr);
        }

        while !nodes.is_empty() {
            let prios = nodes.iter().map(|&v| self.g.priority(v));
            let p = if self.max { prios.max() } else { prios.min() }.unwrap_or(0);
            let alpha = Player::of_parity(p);
            let top: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&v| self.g.priority(v) == p)
                .collect();
            let attr = self.attractor(&sub, alpha, &top);
            let in_attr = self.mask(&attr);
            let rest: Vec<usize> = nodes.iter().copied().filter(|&v| !in_attr[v]).collect();
            let inner = self.solve(rest);
            let lost = &inner[alpha.opponent().index()];
            if lost.is_empty() {
                for &u in &top {
                    if self.g.owner(u) == alpha {
                        self.strategy[u] = self.first_successor_in(u, &sub);
                    }
                }
                won[alpha.index()].append(&mut nodes);
                break;
            }
            let escape = self.attractor(&sub, alpha.opponent(), lost);
            for &v in &escape {
                sub[v] = false;
            }
            nodes.retain(|&v| sub[v]);
            won[alpha.opponent().index()].extend(escape);
        }
        won
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::verify_strategy;

    fn game(nodes: &[(u32, Player, &[usize])], initial: usize) -> ParityGame {
        ParityGame::new(
            nodes.iter().map(|s| s.0).collect(),
            nodes.iter().map(|s| s.1).collect(),
            nodes.iter().map(|s| s.2.to_vec()).collect(),
            vec![None; nodes.len()],
            initial,
        )
        .unwrap()
    }

    use Player::{Abelard as A, Eloise as E};

    #[test]
    fn constants() {
        // true: priority 0, Abelard, self-loop; false: priority 1, Eloise, self-loop
        let g = game(&[(0, A, &[0]), (1, E, &[1])], 0);
        let s = solve_zielonka(&g);
        assert_eq!(s.winner, [E, A]);
    }

    #[test]
    fn dead_ends() {
        let g = game(&[(0, E, &[1, 2]), (0, A, &[]), (0, E, &[])], 0);
        let s = solve_zielonka(&g);
        assert_eq!(s.winner, [E, E, A]);
        assert_eq!(s.strategy[0], Some(1));
    }

    #[test]
    fn classic_example() {
        // Eloise can avoid the odd cycle by moving to the even self-loop.
        let g = game(
            &[
                (1, E, &[1, 2]),
                (3, A, &[0]),
                (2, E, &[2]),
                (0, A, &[0, 3]),
                (1, E, &[3]),
            ],
            0,
        );
        let s = solve_zielonka(&g);
        assert_eq!(s.winner, [E, E, E, E, E]);
        assert_eq!(s.strategy[0], Some(2));
        for p in [E, A] {
            verify_strategy(&g, p, &s.region(p), &s.strategy).unwrap();
        }
    }

    #[test]
    fn max_convention_differs() {
        // a two-node cycle with priorities 1 and 2
        let g = game(&[(1, E, &[1]), (2, E, &[0])], 0);
        assert_eq!(solve_zielonka(&g).winner, [A, A]);
        assert_eq!(solve_zielonka_max(&g).winner, [E, E]);
    }

    fn arb_game() -> impl proptest::strategy::Strategy<Value = ParityGame> {
        use proptest::prelude::*;
        (1usize..24).prop_flat_map(|n| {
            prop::collection::vec(
                (0u32..6, any::<bool>(), prop::collection::vec(0..n, 0..4)),
                n,
            )
            .prop_map(move |nodes| {
                ParityGame::new(
                    nodes.iter().map(|x| x.0).collect(),
                    nodes.iter().map(|x| if x.1 { E } else { A }).collect(),
                    nodes.iter().map(|x| x.2.clone()).collect(),
                    vec![None; n],
                    0,
                )
                .unwrap()
            })
        })
    }

    proptest::proptest! {
        #[test]
        fn both_strategies_are_winning(g in arb_game()) {
            let s = solve_zielonka(&g);
            for p in [E, A] {
                proptest::prop_assert_eq!(verify_strategy(&g, p, &s.region(p), &s.strategy), Ok(()));
            }
        }
    }
}
