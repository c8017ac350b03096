#![allow(dead_code)]

use std::sync::OnceLock;

use s2t::{presets, Element, Tower};

pub const LETTERS: [&str; 9] = ["a", "a^-1", "t", "f1@1", "f1@1^-1", "f2@1", "f2@1^-1", "f@2", "f@2^-1"];

pub fn tower() -> &'static Tower {
    static TOWER: OnceLock<Tower> = OnceLock::new();
    TOWER.get_or_init(presets::two_level_tower)
}

pub fn word(tower: &Tower, letters: &[usize]) -> Element {
    let text: Vec<&str> = letters.iter().map(|&i| LETTERS[i]).collect();
    if text.is_empty() {
        return tower.algebra().identity();
    }
    tower.parse(&text.join(" ")).unwrap()
}

pub fn seed_config_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/seed.json")
}
