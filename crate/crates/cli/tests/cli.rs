mod support;

use std::fs;

use belief_cli::scenario::{ScenarioError, ScenarioFile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use support::{belief, bundled_scenarios, cases, expected, golden_mismatches};

#[test]
fn golden_outputs_are_reproduced() {
    let bad = golden_mismatches();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn in_process_run_matches_the_binary() {
    for case in cases() {
        let args = std::iter::once("belief".to_string()).chain(case.args.iter().map(|a| {
            if a.starts_with("scenarios/") {
                support::crate_dir().join(a).display().to_string()
            } else {
                a.clone()
            }
        }));
        let out = belief_cli::run(args);
        assert_eq!(out.code, case.code, "{}", case.name);
        assert_eq!(out.stdout.as_bytes(), expected(&case).as_slice(), "{}", case.name);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["check", "scenarios/investigator_max.json", "--axioms", "additive", "--universe", "2"];
    let a = belief(&args);
    let b = belief(&args);
    assert_eq!(a.code, b.code);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(belief(&["bd-entail", "p &&", "--conc", "p"]).code, 2);
    assert_eq!(belief(&["luk", "", "--conc", "p -> "]).code, 2);
    assert_eq!(belief(&["luk", "--conc", "p /\\t q"]).code, 2);
    assert_eq!(belief(&["frobnicate"]).code, 2);
    assert_eq!(belief(&["bd-entail", "--conc", "p"]).code, 1);
    assert_eq!(belief(&["--help"]).code, 0);

    let wide = "a|b|c|d|e|f|g|h|i|j|k";
    let r = belief(&["bd-entail", wide, "--conc", "a"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let r = belief(&["luk", "--dialect", "luk", "--conc", "a->b->c->d->e->f->g->h->i"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let r = belief(&["luk", "--conc", "p -> q -> r -> s -> t", "--oracle-denominator", "20"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let r = belief(&["check", "scenarios/panel.json", "--axioms", "prob", "--universe", "4"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let r = belief(&["check", "scenarios/investigator_min.json", "--axioms", "prob", "--universe", "2", "--max-universe", "10"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn bd_countermodel_table() {
    let r = belief(&["bd-entail", "p", "!p", "--conc", "q"]);
    assert_eq!(String::from_utf8(r.stdout).unwrap(), "FAILS\natom  value\np     b\nq     f\n");
}

#[test]
fn oracle_reports_agreement() {
    let r = belief(&["luk", "--dialect", "luk", "--conc", "p -> (q -> p)", "--oracle-denominator", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(String::from_utf8(r.stdout).unwrap(), "VALID\noracle: no countermodel with denominators <= 5\n");
}

#[test]
fn lp_export_is_luk_only() {
    let r = belief(&["luk", "--dialect", "luk", "--emit-lp", "--conc", "p -> q"]);
    assert_eq!(r.code, 0);
    assert!(String::from_utf8(r.stdout).unwrap().starts_with("\\ objective constant"));
    assert_eq!(belief(&["luk", "--emit-lp", "--conc", "p -> q"]).code, 2);
}

fn write_scenario(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const GLUT: &str = r#"{
  "atoms": ["p"],
  "states": [{"id": "s", "pos": ["p"], "neg": ["p"]}],
  "sources": [{"label": "only", "weight": "1", "mass": {"s": "1"}}],
  "strategy": "wa",
  "upper": "mv_prod"
}"#;

#[test]
fn region_classification() {
    let dir = tempfile::tempdir().unwrap();
    let glut = write_scenario(&dir, "glut.json", GLUT);
    let out = String::from_utf8(belief(&["belief", &glut, "B(p)"]).stdout).unwrap();
    assert!(out.contains("value: (1, 1)\n") && out.contains("region: conflicted\n"), "{out}");

    let gap = write_scenario(&dir, "gap.json", &GLUT.replace(r#""pos": ["p"], "neg": ["p"]"#, r#""pos": [], "neg": []"#));
    let out = String::from_utf8(belief(&["belief", &gap, "B(p)"]).stdout).unwrap();
    assert!(out.contains("value: (0, 0)\n") && out.contains("region: incomplete\n"), "{out}");

    let classical = write_scenario(&dir, "classical.json", &GLUT.replace(r#", "neg": ["p"]"#, ""));
    let out = String::from_utf8(belief(&["belief", &classical, "B(p)"]).stdout).unwrap();
    assert!(out.contains("region: classical\n"), "{out}");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_scenario(&dir, "bad.json", &GLUT.replace(r#""s": "1""#, r#""s": "2/3""#));
    let r = belief(&["belief", &bad, "B(p)"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("sources[0].mass") && r.stderr.contains("2/3"), "{}", r.stderr);

    let bad = write_scenario(&dir, "bad2.json", &GLUT.replace(r#""upper": "mv_prod""#, r#""upper": "boolean""#));
    let r = belief(&["check", &bad, "--axioms", "prob"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("upper"), "{}", r.stderr);

    let r = belief(&["belief", "does/not/exist.json", "B(p)"]);
    assert_eq!(r.code, 2);
}

#[test]
fn belief_rejects_foreign_syntax() {
    // A Kleene scenario reads Belnap-Dunn connectives only.
    let r = belief(&["belief", "scenarios/investigator_min.json", "B(at_scene) -> B(at_atm)"]);
    assert_eq!(r.code, 2);
    let r = belief(&["belief", "scenarios/investigator_min.json", "B(unknown)"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn min_scenario_reports_an_import_export_witness() {
    let r = belief(&["check", "scenarios/investigator_min.json", "--axioms", "prob"]);
    let out = String::from_utf8(r.stdout).unwrap();
    assert_eq!(r.code, 1);
    assert!(out.contains("FAIL A3"), "{out}");
    assert!(out.contains("phi = at_atm, psi = at_scene"), "{out}");
}

#[test]
fn bundled_scenarios_are_fixed_points() {
    let dir = tempfile::tempdir().unwrap();
    for path in bundled_scenarios() {
        let loaded = ScenarioFile::load(&path).unwrap();
        let out = dir.path().join("n.json");
        let r = belief(&["normalize", &path.display().to_string(), "--output", &out.display().to_string()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let saved = ScenarioFile::load(&out).unwrap();
        assert_eq!(saved, loaded.normalized());
        assert_eq!(saved.normalized(), saved);
        assert_eq!(saved.to_json(), fs::read_to_string(&out).unwrap());
    }
}

fn random_scenario(rng: &mut ChaCha8Rng) -> ScenarioFile {
    let atoms: Vec<String> = ["r", "p", "q"][..rng.gen_range(1..=3)].iter().map(|s| s.to_string()).collect();
    let n_states = rng.gen_range(1..=4);
    let pick = |rng: &mut ChaCha8Rng| -> Vec<String> { atoms.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect() };
    let states = (0..n_states)
        .map(|i| belief_cli::scenario::StateSpec { id: format!("w{i}"), pos: pick(rng), neg: pick(rng) })
        .collect();
    let sources = (0..rng.gen_range(1..=3))
        .map(|k| {
            // Unreduced fractions exercise normalization.
            let den = 4 * n_states as i64;
            let mut left = den;
            let mut mass = std::collections::BTreeMap::new();
            for i in 0..n_states {
                let m = if i + 1 == n_states { left } else { rng.gen_range(0..=left) };
                left -= m;
                mass.insert(format!("w{i}"), format!("{}/{}", 2 * m, 2 * den));
            }
            belief_cli::scenario::SourceSpec { label: format!("src{k}"), weight: format!("{}/2", rng.gen_range(1..5) * 2), mass }
        })
        .collect();
    let strategy = [
        belief_core::sources::AggStrategy::Wa,
        belief_core::sources::AggStrategy::Min,
        belief_core::sources::AggStrategy::Max,
    ][rng.gen_range(0..3)];
    let upper = [
        belief_cli::scenario::UpperChoice::MvProd,
        belief_cli::scenario::UpperChoice::ResBilat,
        belief_cli::scenario::UpperChoice::KleeneBilat,
    ][rng.gen_range(0..3)];
    ScenarioFile { atoms, states, sources, strategy, upper }
}

#[test]
fn random_scenarios_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let s = random_scenario(&mut rng);
        s.validate().unwrap();
        let n = s.normalized();
        let back = ScenarioFile::from_json(&n.to_json()).unwrap();
        assert_eq!(back, n);
        assert_eq!(back.normalized().to_json(), n.to_json());
        // Normalization never changes the model.
        let (a, b) = (s.model().unwrap(), back.model().unwrap());
        for f in ["p", "!p & r", "q | r"] {
            let Ok(phi) = belief_core::formulas::parse_lower(f) else { continue };
            if phi.atoms().iter().all(|x| s.atoms.contains(x)) {
                assert_eq!(a.modal_value(&phi).unwrap(), b.modal_value(&phi).unwrap());
            }
        }
    }
}

#[test]
fn scenario_errors_are_schema_errors() {
    let err = ScenarioFile::from_json("{\"atoms\": 3}").unwrap_err();
    assert!(matches!(err, ScenarioError::Schema { ref path, .. } if path == "atoms"), "{err}");
}
