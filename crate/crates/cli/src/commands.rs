use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use log::info;

use pbes::buffer::generate;
use pbes::game::{read_pgsolver, solve_zielonka, verify_strategy, write_pgsolver, Convention, ParityGame, Player};
use pbes::instantiate::{ExploreOptions, InstantiateError, Instantiator};
use pbes::normal_form::{is_bqnf, is_ppg, to_ppg};
use pbes::oracle::{crosscheck, OracleError};
use pbes::pbes::{validate, Location, Pbes};
use pbes::syntax::{parse_unchecked, print_pbes, SourceMap};

use crate::{Command, ExploreArgs};

/// A failure, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// The input cannot be processed: 2.
    Input(String),
    /// A node or equation budget was exceeded: 3.
    Budget(String),
    /// An internal check failed: 4.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Budget(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<InstantiateError> for Failure {
    fn from(e: InstantiateError) -> Failure {
        match e {
            InstantiateError::Budget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::Budget(_) | OracleError::Instantiate(InstantiateError::Budget(_)) => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(e.to_string())),
    }
}

/// Parses and validates, reporting every diagnostic with its position.
fn load(path: &Path) -> Result<(Pbes, SourceMap)> {
    let text = read(path)?;
    let (p, map) = parse_unchecked(&text)
        .map_err(|e| Failure::Input(format!("{}:{e}", path.display())))?;
    let diagnostics = validate(&p);
    if !diagnostics.is_empty() {
        let lines: Vec<String> = diagnostics
            .iter()
            .map(|d| format!("{}:{}: {d}", path.display(), map.position(&d.location)))
            .collect();
        return Err(Failure::Input(lines.join("\n")));
    }
    Ok((p, map))
}

/// The system as a PPG, transforming it when necessary.
fn load_ppg(path: &Path) -> Result<Pbes> {
    let (p, map) = load(path)?;
    if is_ppg(&p).is_ok() {
        return Ok(p);
    }
    info!("{} is not a PPG; transforming", path.display());
    to_ppg(&p).map_err(|e| {
        let index = p.index_of(&e.equation).unwrap_or(0);
        let pos = map.position(&Location::Equation {
            index,
            path: e.violation.path.clone(),
        });
        Failure::Input(format!("{}:{pos}: {e}", path.display()))
    })
}

fn options(a: &ExploreArgs) -> ExploreOptions {
    ExploreOptions {
        cache: !a.no_cache,
        prune_constant_edges: a.prune_constant_edges,
        labels: !a.no_labels,
        max_nodes: a.max_nodes,
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Check { input } => check(&input),
        Command::Transform { input, output } => {
            let ppg = load_ppg(&input)?;
            write_output(output.as_deref(), &print_pbes(&ppg))
        }
        Command::Matrix { input } => {
            let inst = Instantiator::new(&load_ppg(&input)?)?;
            write_output(None, &inst.matrix().to_string())
        }
        Command::Instantiate {
            input,
            output,
            explore,
            convention,
            stats,
        } => {
            let mut inst = Instantiator::new(&load_ppg(&input)?)?;
            let (game, st) = inst.explore(&options(&explore))?;
            write_output(output.as_deref(), &write_pgsolver(&game, convention.into()))?;
            if stats {
                if output.is_some() {
                    print!("{st}");
                } else {
                    eprint!("{st}");
                }
            }
            Ok(())
        }
        Command::Solve {
            input,
            explore,
            convention,
            strategy,
        } => solve(&input, &explore, convention.into(), strategy),
        Command::GenBuffer { n, property, output } => {
            if n == 0 {
                return Err(Failure::Input("the number of buffers must be positive".into()));
            }
            write_output(output.as_deref(), &generate(n, property))
        }
        Command::Oracle { input, budget } => {
            let (p, _) = load(&input)?;
            let report = crosscheck(&p, budget)?;
            print!("{report}");
            if report.agrees() {
                Ok(())
            } else {
                Err(Failure::Internal(format!(
                    "pipelines disagree on\n{}",
                    print_pbes(&p)
                )))
            }
        }
    }
}

fn check(path: &Path) -> Result<()> {
    let (p, map) = load(path)?;
    let mut all_bqnf = true;
    let mut all_ppg = true;
    for (i, e) in p.equations.iter().enumerate() {
        let bqnf = is_bqnf(e);
        let ppg = pbes::normal_form::ppg_shape(&e.rhs);
        let yes = |ok: bool| if ok { "yes" } else { "no" };
        println!("{}: BQNF: {}, PPG: {}", e.name, yes(bqnf.is_ok()), yes(ppg.is_ok()));
        if let Err(v) = &bqnf {
            let pos = map.position(&Location::Equation {
                index: i,
                path: v.path.clone(),
            });
            println!("  {}:{pos}: {v}", path.display());
        }
        all_bqnf &= bqnf.is_ok();
        all_ppg &= ppg.is_ok();
    }
    let yes = |ok: bool| if ok { "yes" } else { "no" };
    println!("BQNF: {}, PPG: {}", yes(all_bqnf), yes(all_ppg));
    Ok(())
}

fn load_game(path: &Path, explore: &ExploreArgs, convention: Convention) -> Result<ParityGame> {
    let text = read(path)?;
    let is_game = path.extension().is_some_and(|e| e == "gm")
        || text.trim_start().starts_with("parity");
    if is_game {
        return read_pgsolver(&text, convention)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())));
    }
    let mut inst = Instantiator::new(&load_ppg(path)?)?;
    Ok(inst.explore(&options(explore))?.0)
}

fn solve(path: &Path, explore: &ExploreArgs, convention: Convention, strategy: bool) -> Result<()> {
    let game = load_game(path, explore, convention)?;
    let solution = solve_zielonka(&game);
    for p in [Player::Eloise, Player::Abelard] {
        verify_strategy(&game, p, &solution.region(p), &solution.strategy)
            .map_err(|v| Failure::Internal(format!("strategy of {p} rejected: {v}")))?;
    }
    let winner = solution.winner[game.initial()];
    match winner {
        Player::Eloise => println!("true (Eloise wins)"),
        Player::Abelard => println!("false (Abelard wins)"),
    }
    println!("nodes={}", game.num_nodes());
    println!("verified=yes");
    if strategy {
        let name = |v: usize| game.label(v).map_or_else(|| v.to_string(), str::to_string);
        for v in 0..game.num_nodes() {
            if solution.winner[v] == winner && game.owner(v) == winner {
                if let Some(w) = solution.strategy[v] {
                    println!("{} -> {}", name(v), name(w));
                }
            }
        }
    }
    Ok(())
}
