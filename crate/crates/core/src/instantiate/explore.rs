//! Breadth-first generation of the explicit parity game.

use std::fmt;

use log::{debug, info};
use rustc_hash::FxHashMap;

use super::{GroupCache, InstantiateError, Instantiator, Result, State};
use crate::game::{ParityGame, Player};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Route successor computation through the per-group cache.
    pub cache: bool,
    /// Drop edges to ⊤ from Abelard nodes and to ⊥ from Eloise nodes; they
    /// never help the opponent of the node's owner.
    pub prune_constant_edges: bool,
    /// Attach the decoded instance to every node.
    pub labels: bool,
    pub max_nodes: Option<usize>,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            cache: true,
            prune_constant_edges: false,
            labels: true,
            max_nodes: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExploreStats {
    pub nodes: usize,
    pub variable_nodes: usize,
    pub constant_nodes: usize,
    pub edges: usize,
    pub peak_frontier: usize,
    pub cache_hits: Vec<u64>,
    pub cache_misses: Vec<u64>,
}

impl ExploreStats {
    pub fn total_hits(&self) -> u64 {
        self.cache_hits.iter().sum()
    }
}

/// `key=value` lines.
impl fmt::Display for ExploreStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "variable_nodes={}", self.variable_nodes)?;
        writeln!(f, "constant_nodes={}", self.constant_nodes)?;
        writeln!(f, "edges={}", self.edges)?;
        writeln!(f, "peak_frontier={}", self.peak_frontier)?;
        for (k, (h, m)) in self.cache_hits.iter().zip(&self.cache_misses).enumerate() {
            writeln!(f, "group.{}.hits={h}", k + 1)?;
            writeln!(f, "group.{}.misses={m}", k + 1)?;
        }
        Ok(())
    }
}

impl Instantiator {
    /// Explores the game reachable from the initial instance. Nodes are
    /// numbered in discovery order, so the initial node is 0; ⊤ and ⊥ only
    /// appear when some group produces them.
    pub fn explore(&mut self, options: &ExploreOptions) -> Result<(ParityGame, ExploreStats)> {
        let init = self.pbes.init.clone();
        let start = self.encode(&init)?;
        let mut cache = GroupCache::new(self.groups.len());
        let mut index: FxHashMap<State, u32> = FxHashMap::default();
        let mut states: Vec<State> = Vec::new();
        let mut successors: Vec<Vec<usize>> = Vec::new();
        let mut edges = 0;
        let mut peak = 0;
        index.insert(start.clone(), 0);
        states.push(start);

        let mut head = 0;
        while head < states.len() {
            peak = peak.max(states.len() - head);
            let s = states[head].clone();
            head += 1;
            let mut next: Vec<State> = Vec::new();
            if self.layout.is_constant(&s) {
                next.push(s.clone());
            } else {
                let (_, owner) = self.layout.node_kind(&s);
                for k in self.groups_of[s[0] as usize].clone() {
                    let succ = if options.cache {
                        self.cached_next(&s, k, &mut cache)?
                    } else {
                        self.group_next(&s, k)?
                    };
                    for mut t in succ {
                        self.canonicalize(&mut t);
                        if options.prune_constant_edges {
                            let useless = match owner {
                                Player::Abelard => self.layout.top(),
                                Player::Eloise => self.layout.bottom(),
                            };
                            if t[0] == useless {
                                continue;
                            }
                        }
                        next.push(t);
                    }
                }
            }
            let mut out = Vec::with_capacity(next.len());
            for t in next {
                let id = match index.get(&t) {
                    Some(&id) => id as usize,
                    None => {
                        let id = states.len();
                        if options.max_nodes.is_some_and(|m| id >= m) {
                            return Err(InstantiateError::Budget(options.max_nodes.unwrap_or(0)));
                        }
                        index.insert(t.clone(), id as u32);
                        states.push(t);
                        if id.is_multiple_of(1_000_000) && id > 0 {
                            debug!("explored {id} nodes");
                        }
                        id
                    }
                };
                out.push(id);
            }
            out.sort_unstable();
            out.dedup();
            edges += out.len();
            successors.push(out);
        }
        drop(index);

        let n = states.len();
        let mut priority = Vec::with_capacity(n);
        let mut owner = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        let mut constants = 0;
        for s in &states {
            let (p, o) = self.layout.node_kind(s);
            priority.push(p);
            owner.push(o);
            labels.push(options.labels.then(|| self.label(s)));
            constants += usize::from(self.layout.is_constant(s));
        }
        let game = ParityGame::new(priority, owner, successors, labels, 0)
            .expect("explored edges are in range");
        let stats = ExploreStats {
            nodes: n,
            variable_nodes: n - constants,
            constant_nodes: constants,
            edges,
            peak_frontier: peak,
            cache_hits: cache.hits,
            cache_misses: cache.misses,
        };
        info!("explored {} nodes, {} edges", stats.nodes, stats.edges);
        Ok((game, stats))
    }
}
