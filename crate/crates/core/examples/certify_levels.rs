//! Level certification and the audit of the decision procedures.
//! Pass the ball radius as the first argument (default 4).

use s2t::certifier::{certify_level, cross_check_dc, LevelOptions};
use s2t::presets;

fn main() {
    let l = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let tower = presets::two_level_tower();
    for k in 1..=tower.top() {
        print!("{}", certify_level(tower.algebra(), k, LevelOptions::new(l)).to_text());
        print!("{}", cross_check_dc(tower.algebra(), k, l.min(5)).to_text());
    }
}
