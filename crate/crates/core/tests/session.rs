mod common;

use s2t::cli::{certify_tower, Bounds};
use s2t::session::{self, SessionFile};
use s2t::{presets, Tower};

fn run_queries(queries: &[(&str, &str)]) -> Tower {
    let mut tower = presets::seed_tower();
    for (u, v) in queries {
        let (u, v) = (tower.parse(u).unwrap(), tower.parse(v).unwrap());
        tower.resolve_f(&u, &v).unwrap();
    }
    tower
}

const QUERIES: [(&str, &str); 6] = [
    ("1", "t"),
    ("1", "t a t"),
    ("t", "t f1@1 t"),
    ("1", "t a t a^2 t"),
    ("a t", "f@2 t a"),
    ("f1@1", "t"),
];

#[test]
fn identical_commands_give_identical_files() {
    let a = SessionFile::capture(&run_queries(&QUERIES)).to_json();
    let b = SessionFile::capture(&run_queries(&QUERIES)).to_json();
    assert_eq!(a, b);
}

#[test]
fn replay_reproduces_registry_answers_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let tower = run_queries(&QUERIES);
    session::save(&tower, &path).unwrap();
    let back = session::load(&path).unwrap();
    assert_eq!(back.registry(), tower.registry());
    assert_eq!(back.queries(), tower.queries());
    let bounds = Bounds { base: 4, level: 3, cross_check: 3, action: 2 };
    let r1 = certify_tower(&tower, bounds, 10, 7).without_timing();
    let r2 = certify_tower(&back, bounds, 10, 7).without_timing();
    assert_eq!(r1, r2);
    assert!(r1.passed(), "{}", r1.to_text());
}

#[test]
fn sessions_reject_other_schema_versions() {
    let mut file = SessionFile::capture(&run_queries(&QUERIES[..2]));
    file.schema_version = 2;
    assert!(matches!(file.replay(), Err(s2t::SessionError::Version(2))));
}
