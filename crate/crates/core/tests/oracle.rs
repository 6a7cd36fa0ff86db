use pbes::instantiate::{ExploreOptions, Instantiator};
use pbes::oracle::{crosscheck, instantiate_bes, solve_bes};
use pbes::syntax::parse_pbes;

fn fixture(name: &str) -> pbes::pbes::Pbes {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_pbes(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn deadlock_freedom_is_true() {
    let b = instantiate_bes(&fixture("example1.pbes"), 100).unwrap();
    let mut names: Vec<&str> = b.equations.iter().map(|e| e.name.as_str()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "X([])",
            "X([d1, d1])",
            "X([d1, d2])",
            "X([d1])",
            "X([d2, d1])",
            "X([d2, d2])",
            "X([d2])"
        ]
    );
    assert!(solve_bes(&b)[b.init]);
}

#[test]
fn oracle_matches_explorer_on_transformed_system() {
    let ppg = fixture("example3_ppg.pbes");
    let b = instantiate_bes(&ppg, 1000).unwrap();
    let mut inst = Instantiator::new(&ppg).unwrap();
    let (g, _) = inst.explore(&ExploreOptions::default()).unwrap();
    let mut from_game: Vec<String> = (0..g.num_nodes())
        .filter_map(|v| g.label(v))
        .filter(|l| *l != "true" && *l != "false")
        .map(str::to_string)
        .collect();
    let mut from_bes: Vec<String> = b.equations.iter().map(|e| e.name.clone()).collect();
    from_game.sort();
    from_bes.sort();
    assert_eq!(from_game, from_bes);
}

#[test]
fn pipelines_agree_on_fixtures() {
    for name in ["example1.pbes", "example3.pbes", "example4.pbes", "example5.pbes"] {
        let report = crosscheck(&fixture(name), 10_000).unwrap();
        assert!(report.agrees(), "{name}: {report}");
    }
}
