//! Saving a tower to disk and replaying it.

use s2t::session::{self, SessionFile};
use s2t::presets;

fn main() {
    let tower = presets::two_level_tower();
    let dir = std::env::temp_dir().join(format!("s2t-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("session.json");
    session::save(&tower, &path).unwrap();
    print!("{}", std::fs::read_to_string(&path).unwrap());

    let back = session::load(&path).unwrap();
    println!("registry equal: {}", back.registry() == tower.registry());
    println!("file stable: {}", SessionFile::capture(&back).to_json() == std::fs::read_to_string(&path).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
