//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p pbes-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pbes::buffer::{generate, Property};
use pbes::game::{
    read_pgsolver, solve_zielonka, solve_zielonka_max, verify_strategy, write_pgsolver, Convention,
    Player,
};
use pbes::instantiate::{Dep, ExploreOptions, InstantiateError, Instantiator, State};
use pbes::normal_form::to_ppg;
use pbes::oracle::{crosscheck, instantiate_bes, solve_bes, OracleError};
use pbes::pbes::Pbes;
use pbes::random::{random_bqnf, random_game, SystemShape};
use pbes::syntax::{parse_pbes, print_pbes};

type Outcome = Result<String, String>;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn fixture(name: &str) -> Pbes {
    parse_pbes(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pbes"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

/// Every system used as a fixture, named.
fn fixtures() -> Vec<(String, Pbes)> {
    let mut out: Vec<(String, Pbes)> = [
        "example1.pbes",
        "example3.pbes",
        "example3_ppg.pbes",
        "example4.pbes",
        "example4_single.pbes",
        "example5.pbes",
    ]
    .iter()
    .map(|n| (n.to_string(), fixture(n)))
    .collect();
    for n in 1..=3 {
        for (tag, prop) in [("nodeadlock", Property::NoDeadlock), ("evt_send", Property::EventuallySend)] {
            out.push((format!("buffer.{n}.{tag}"), parse_pbes(&generate(n, prop)).unwrap()));
        }
    }
    out
}

fn as_ppg(p: &Pbes) -> Pbes {
    to_ppg(p).unwrap()
}

fn explore(p: &Pbes, cache: bool) -> Result<(pbes::game::ParityGame, pbes::instantiate::ExploreStats), InstantiateError> {
    Instantiator::new(p)?.explore(&ExploreOptions {
        cache,
        max_nodes: Some(5_000_000),
        ..Default::default()
    })
}

fn golden_transformation() -> Outcome {
    let start = Instant::now();
    let out = cli(&["transform", fixture_path("example3.pbes").to_str().unwrap()])?;
    within(start, Duration::from_secs(1))?;
    let got = parse_pbes(&out).map_err(|e| e.to_string())?;
    let want = fixture("example3_ppg.pbes");
    ensure(got == want, || format!("got\n{out}"))?;
    let names: Vec<&str> = got.equations.iter().map(|e| e.name.as_str()).collect();
    Ok(format!("equations {}", names.join(", ")))
}

fn golden_matrix() -> Outcome {
    let start = Instant::now();
    let out = cli(&["matrix", fixture_path("example5.pbes").to_str().unwrap()])?;
    within(start, Duration::from_secs(1))?;
    let want = "k X q_in q_out d\n1 + + - w\n2 + + - -\n3 + - + -\n4 + + + -\n\
                5 + r r -\n6 + + - -\n7 + - + r\n8 + + + -\n";
    ensure(out == want, || format!("got\n{out}"))?;
    Ok("8x4 table identical".into())
}

fn labels(inst: &mut Instantiator, states: Vec<State>) -> BTreeSet<String> {
    states
        .into_iter()
        .map(|mut s| {
            inst.canonicalize(&mut s);
            inst.label(&s)
        })
        .collect()
}

fn golden_successors() -> Outcome {
    let mut inst = Instantiator::new(&fixture("example5.pbes")).map_err(|e| e.to_string())?;
    let init = inst.pbes().init.clone();
    let s = inst.encode(&init).map_err(|e| e.to_string())?;
    let g3 = inst.group_next(&s, 2).map_err(|e| e.to_string())?;
    ensure(g3.is_empty(), || format!("group 3 gave {} successors", g3.len()))?;
    let g2 = inst.group_next(&s, 1).map_err(|e| e.to_string())?;
    let g2 = labels(&mut inst, g2);
    let want: BTreeSet<String> = ["Y([d1], [])", "Y([d2], [])"].map(String::from).into();
    ensure(g2 == want, || format!("group 2 gave {g2:?}"))?;

    let x5 = PropInstText("X(5)");
    let want: BTreeSet<String> = ["X(4)", "X(6)"].map(String::from).into();
    for name in ["example4_single.pbes", "example4.pbes"] {
        let p = fixture(name);
        let mut inst = Instantiator::new(&p).map_err(|e| e.to_string())?;
        let s = inst.encode(&x5.parse(&p)).map_err(|e| e.to_string())?;
        let got = if inst.groups().len() == 1 {
            inst.group_next(&s, 0).map_err(|e| e.to_string())?
        } else {
            inst.next_state(&s).map_err(|e| e.to_string())?
        };
        let got = labels(&mut inst, got);
        ensure(got == want, || format!("{name}: X(5) gave {got:?}"))?;
    }
    Ok("groups 2 and 3 of Y([], []), X(5) -> {X(4), X(6)}".into())
}

/// An instance given as text, resolved against a system's declarations.
struct PropInstText(&'static str);

impl PropInstText {
    fn parse(&self, p: &Pbes) -> pbes::formula::PropInst {
        let text = print_pbes(p);
        let head = text.rsplit_once("\ninit").unwrap().0;
        parse_pbes(&format!("{head}\ninit {};", self.0)).unwrap().init
    }
}

fn end_to_end_truth() -> Outcome {
    let start = Instant::now();
    let out = cli(&["solve", fixture_path("example1.pbes").to_str().unwrap()])?;
    ensure(out.starts_with("true (Eloise wins)"), || format!("solve printed {out}"))?;
    let (g, stats) = explore(&fixture("example1.pbes"), true).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1))?;
    ensure(stats.variable_nodes == 7 && stats.constant_nodes == 1, || format!("{stats}"))?;
    ensure(solve_zielonka(&g).winner[0] == Player::Eloise, || "Abelard wins".into())?;
    let bes = instantiate_bes(&fixture("example1.pbes"), 100).map_err(|e| e.to_string())?;
    ensure(bes.len() == 7 && solve_bes(&bes)[bes.init], || format!("oracle: {} equations", bes.len()))?;
    Ok("true; 7 variable nodes + 1 constant; oracle agrees on 7".into())
}

fn peak_rss_mb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024)
}

fn buffer_counts() -> Outcome {
    let mut detail = Vec::new();
    for n in 2..=4u32 {
        let p = parse_pbes(&generate(n as usize, Property::NoDeadlock)).unwrap();
        let (_, stats) = explore(&p, true).map_err(|e| e.to_string())?;
        let want = 7usize.pow(n);
        ensure(stats.variable_nodes == want, || {
            format!("n={n}: {} variable nodes, expected {want}", stats.variable_nodes)
        })?;
        if n <= 3 {
            let bes = instantiate_bes(&p, 10_000).map_err(|e| e.to_string())?;
            ensure(bes.len() == want, || format!("n={n}: oracle has {} equations", bes.len()))?;
            let r = crosscheck(&p, 10_000).map_err(|e| e.to_string())?;
            ensure(r.agrees(), || format!("n={n}: {r}"))?;
        }
        detail.push(format!("n={n}: {want}"));
    }
    let start = Instant::now();
    let p = parse_pbes(&generate(7, Property::NoDeadlock)).unwrap();
    let (g, stats) = Instantiator::new(&p)
        .and_then(|mut i| {
            i.explore(&ExploreOptions {
                labels: false,
                ..Default::default()
            })
        })
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let total = g.num_nodes() as i64;
    ensure((total - 823_545).abs() <= 2, || format!("n=7: {total} nodes"))?;
    ensure(elapsed < Duration::from_secs(300), || format!("n=7 took {elapsed:?}"))?;
    let rss = peak_rss_mb();
    ensure(rss.is_none_or(|m| m < 2048), || format!("peak memory {rss:?} MB"))?;
    detail.push(format!(
        "n=7: {total} nodes ({} + {} constant) in {:.1}s, peak {} MB",
        stats.variable_nodes,
        stats.constant_nodes,
        elapsed.as_secs_f64(),
        rss.map_or("?".into(), |m| m.to_string())
    ));
    Ok(detail.join("; "))
}

fn cache_transparency() -> Outcome {
    let mut systems: Vec<(String, Pbes)> = fixtures().into_iter().map(|(n, p)| (n, as_ppg(&p))).collect();
    for n in [4, 5] {
        systems.push((format!("buffer.{n}.nodeadlock"), parse_pbes(&generate(n, Property::NoDeadlock)).unwrap()));
    }
    for (name, p) in &systems {
        let (a, _) = explore(p, false).map_err(|e| format!("{name}: {e}"))?;
        let (b, stats) = explore(p, true).map_err(|e| format!("{name}: {e}"))?;
        ensure(a == b, || format!("{name}: games differ"))?;
        if name.starts_with("buffer.") && !name.starts_with("buffer.1.") {
            ensure(stats.total_hits() > 0, || format!("{name}: no cache hits"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    while checked < 200 {
        let ppg = as_ppg(&random_bqnf(&mut rng, &SystemShape::default()));
        let opts = |cache| ExploreOptions {
            cache,
            max_nodes: Some(20_000),
            ..Default::default()
        };
        let a = Instantiator::new(&ppg).and_then(|mut i| i.explore(&opts(false)));
        let b = Instantiator::new(&ppg).and_then(|mut i| i.explore(&opts(true)));
        match (a, b) {
            (Ok((a, _)), Ok((b, _))) => {
                ensure(a == b, || format!("games differ on\n{}", print_pbes(&ppg)))?;
                checked += 1;
            }
            (Err(InstantiateError::Budget(_)), Err(InstantiateError::Budget(_))) => {}
            (a, b) => {
                return Err(format!(
                    "cache on/off outcomes differ ({:?} vs {:?}) on\n{}",
                    a.err(),
                    b.err(),
                    print_pbes(&ppg)
                ))
            }
        }
    }
    Ok(format!("{} fixtures and {checked} random PPGs identical", systems.len()))
}

fn transformation_preserves_solution() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let large = SystemShape {
        max_equations: 6,
        max_params: 3,
        max_width: 4,
    };
    let (mut checked, mut skipped, mut truths, mut size) = (0, 0, 0, 0);
    while checked < 500 {
        let shape = if checked % 2 == 0 { SystemShape::default() } else { large.clone() };
        let p = random_bqnf(&mut rng, &shape);
        match crosscheck(&p, 200) {
            Ok(r) => {
                ensure(r.agrees(), || format!("{r}on\n{}", print_pbes(&p)))?;
                checked += 1;
                truths += usize::from(r.original);
                size += r.transformed_size;
            }
            Err(OracleError::Budget(_)) | Err(OracleError::Instantiate(InstantiateError::Budget(_))) => {
                skipped += 1
            }
            Err(e) => return Err(format!("{e} on\n{}", print_pbes(&p))),
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{checked} systems agree ({truths} true, {:.1} equations after transformation on average), \
         {skipped} over budget skipped, {:.1}s",
        size as f64 / checked as f64,
        start.elapsed().as_secs_f64()
    ))
}

fn reachable(inst: &mut Instantiator, limit: usize) -> Vec<State> {
    let init = inst.pbes().init.clone();
    let start = inst.encode(&init).unwrap();
    let mut seen: BTreeSet<State> = [start.clone()].into();
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() && out.len() < limit {
        let s = out[head].clone();
        head += 1;
        for t in inst.next_state(&s).unwrap() {
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    out
}

fn matrix_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut perturbations = 0usize;
    let mut checked_writes = 0usize;
    let systems = fixtures();
    for (name, p) in &systems {
        let mut inst = Instantiator::new(&as_ppg(p)).unwrap();
        let states = reachable(&mut inst, 2_000);
        let matrix = inst.matrix().clone();
        let top = inst.layout().top();
        for s in states.iter().filter(|s| s[0] < top) {
            for &k in &inst.groups_of(s[0] as usize).to_vec() {
                let row = matrix.row(k).to_vec();
                let succ = inst.group_next(s, k).map_err(|e| e.to_string())?;
                for t in &succ {
                    for (i, d) in row.iter().enumerate() {
                        if !d.writes() {
                            ensure(t[i] == s[i], || format!("{name}: group {} writes column {i}", k + 1))?;
                            checked_writes += 1;
                        }
                    }
                }
                let project = |v: &[State]| -> BTreeSet<Box<[u32]>> {
                    v.iter().map(|t| matrix.project(t, k)).collect()
                };
                let want = project(&succ);
                let free: Vec<usize> = (1..row.len())
                    .filter(|&i| matches!(row[i], Dep::None | Dep::Write))
                    .collect();
                if free.is_empty() {
                    continue;
                }
                for _ in 0..4 {
                    let mut u = s.clone();
                    for &i in &free {
                        if rng.gen() {
                            u[i] = rng.gen_range(0..inst.table(i).len() as u32);
                        }
                    }
                    let got = inst.group_next(&u, k).map_err(|e| e.to_string())?;
                    let got = project(&got);
                    ensure(got == want, || {
                        format!("{name}: group {} reads a free column of {}", k + 1, inst.label(s))
                    })?;
                    perturbations += 1;
                }
            }
        }
    }
    ensure(perturbations >= 10_000, || format!("only {perturbations} perturbations"))?;
    Ok(format!(
        "{perturbations} perturbations, {checked_writes} unwritten cells checked, 0 violations"
    ))
}

fn solver_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total_nodes = 0;
    for i in 0..1000 {
        let n = rng.gen_range(1..=2000);
        let g = random_game(&mut rng, n, 4);
        total_nodes += n;
        let s = solve_zielonka(&g);
        let (we, wa) = (s.region(Player::Eloise), s.region(Player::Abelard));
        ensure((0..n).all(|v| we[v] != wa[v]), || format!("game {i}: regions overlap or miss"))?;
        for p in [Player::Eloise, Player::Abelard] {
            verify_strategy(&g, p, &s.region(p), &s.strategy)
                .map_err(|e| format!("game {i}: {p} strategy rejected: {e}"))?;
        }
        let max = read_pgsolver(&write_pgsolver(&g, Convention::Max), Convention::Min)
            .map_err(|e| e.to_string())?;
        ensure(solve_zielonka_max(&max).winner == s.winner, || {
            format!("game {i}: max-parity conversion changes the winners")
        })?;
    }
    Ok(format!("1000 games, {total_nodes} nodes, all strategies verified"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("golden transformation", golden_transformation),
        ("golden matrix", golden_matrix),
        ("golden successors", golden_successors),
        ("end-to-end truth", end_to_end_truth),
        ("buffer node counts", buffer_counts),
        ("cache transparency", cache_transparency),
        ("transformation preserves solutions", transformation_preserves_solution),
        ("matrix soundness fuzz", matrix_soundness),
        ("solver validity", solver_validity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
