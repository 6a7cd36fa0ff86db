//! Reading and writing the PGSolver text format.
//!
//! PGSolver games use max-parity; internally priorities are min-parity. The
//! conversion maps `p` to `P - p` with `P` the greatest priority rounded up to
//! an even number, which keeps parities and reverses the order.

use std::fmt::Write;

use thiserror::Error;

use super::{GameError, ParityGame, Player};

/// Which parity condition the priorities in a file follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    Min,
    #[default]
    Max,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgSolverError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("node {0} is declared twice")]
    Duplicate(usize),
    #[error("node {0} is missing")]
    Missing(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn flip(priorities: &[u32]) -> Vec<u32> {
    let top = priorities.iter().copied().max().unwrap_or(0);
    let top = top + top % 2;
    priorities.iter().map(|&p| top - p).collect()
}

pub fn write_pgsolver(g: &ParityGame, convention: Convention) -> String {
    let n = g.num_nodes();
    let own: Vec<u32> = (0..n).map(|v| g.priority(v)).collect();
    let prio = match convention {
        Convention::Min => own,
        Convention::Max => flip(&own),
    };
    let mut out = String::new();
    let _ = writeln!(out, "parity {};", n.saturating_sub(1));
    if g.initial() != 0 {
        let _ = writeln!(out, "start {};", g.initial());
    }
    for v in 0..n {
        let owner = match g.owner(v) {
            Player::Eloise => 0,
            Player::Abelard => 1,
        };
        let _ = write!(out, "{v} {} {owner} ", prio[v]);
        for (i, w) in g.successors(v).enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{w}");
        }
        if let Some(l) = g.label(v) {
            let _ = write!(out, " \"{}\"", l.replace('"', "'"));
        }
        out.push_str(";\n");
    }
    out
}

struct Node {
    priority: u32,
    owner: Player,
    successors: Vec<usize>,
    label: Option<String>,
}

/// Reads a game whose node ids are exactly `0..=maxid`.
pub fn read_pgsolver(text: &str, convention: Convention) -> Result<ParityGame, PgSolverError> {
    let mut nodes: Vec<Option<Node>> = Vec::new();
    let mut initial = 0;
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| PgSolverError::Syntax {
            line,
            message: message.to_string(),
        };
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        let body = body
            .strip_suffix(';')
            .ok_or_else(|| err("expected `;` at end of line"))?;
        let (body, label) = match body.find('"') {
            Some(q) => {
                let rest = body[q + 1..]
                    .strip_suffix('"')
                    .ok_or_else(|| err("unterminated label"))?;
                (body[..q].trim_end(), Some(rest.to_string()))
            }
            None => (body, None),
        };
        let words: Vec<&str> = body.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad number `{s}`")));
        match words.first().copied() {
            Some("parity") if !seen_header && words.len() == 2 => {
                seen_header = true;
                let max = num(words[1])?;
                nodes.resize_with(max + 1, || None);
            }
            Some("start") if words.len() == 2 => initial = num(words[1])?,
            Some(_) if seen_header && (words.len() == 3 || words.len() == 4) => {
                let id = num(words[0])?;
                let priority = num(words[1])? as u32;
                let owner = match words[2] {
                    "0" => Player::Eloise,
                    "1" => Player::Abelard,
                    o => return Err(err(&format!("bad owner `{o}`"))),
                };
                let successors = match words.get(3) {
                    Some(s) => s.split(',').map(num).collect::<Result<_, _>>()?,
                    None => Vec::new(),
                };
                let slot = nodes.get_mut(id).ok_or_else(|| err("node id above the header bound"))?;
                if slot.is_some() {
                    return Err(PgSolverError::Duplicate(id));
                }
                *slot = Some(Node {
                    priority,
                    owner,
                    successors,
                    label,
                });
            }
            _ => return Err(err("unrecognised line")),
        }
    }
    if !seen_header {
        return Err(PgSolverError::Syntax {
            line: 1,
            message: "missing `parity` header".into(),
        });
    }
    let mut prio = Vec::with_capacity(nodes.len());
    let mut owner = Vec::with_capacity(nodes.len());
    let mut succ = Vec::with_capacity(nodes.len());
    let mut labels = Vec::with_capacity(nodes.len());
    for (id, node) in nodes.into_iter().enumerate() {
        let node = node.ok_or(PgSolverError::Missing(id))?;
        prio.push(node.priority);
        owner.push(node.owner);
        succ.push(node.successors);
        labels.push(node.label);
    }
    if convention == Convention::Max {
        prio = flip(&prio);
    }
    Ok(ParityGame::new(prio, owner, succ, labels, initial)?)
}
