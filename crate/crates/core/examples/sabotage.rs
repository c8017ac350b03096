//! A level built over `t a`, which lies in `AtA`, skips the hypothesis
//! checks; the certifier finds a conjugate of `A_1` meeting `A_1`.

use s2t::certifier::{certify_level, LevelOptions};
use s2t::{presets, LevelKind};

fn main() {
    let mut tower = presets::seed_tower();
    let v = tower.parse("t a").unwrap();
    println!("checked construction: {}", tower.push_level(LevelKind::Fp, &v).unwrap_err());
    let k = tower.push_level_unchecked(LevelKind::Fp, v);
    let report = certify_level(tower.algebra(), k, LevelOptions::new(4));
    print!("{}", report.to_text());
    assert!(!report.passed());
}
