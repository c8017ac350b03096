//! Query-driven growth of the tower and the action on right cosets.

use s2t::presets;

fn main() {
    let mut tower = presets::seed_tower();
    let one = tower.algebra().identity();
    for v in ["t", "t a", "t a t", "t a t a^2 t", "f@2 t a f1@1"] {
        let v = tower.parse(v).unwrap();
        let r = tower.resolve_f(&one, &v).unwrap();
        let grown = r.extended.map(|k| format!(" (new level {k})")).unwrap_or_default();
        println!("f(1, {}) = {}{grown}", tower.format(&v), tower.format(&r.f));
    }

    let c = |tower: &s2t::Tower, s: &str| tower.coset(tower.parse(s).unwrap());
    let (x1, x2) = (c(&tower, "1"), c(&tower, "t"));
    let (y1, y2) = (c(&tower, "t f1@1"), c(&tower, "a f@2 t"));
    let g = tower.transitive_witness(&x1, &x2, &y1, &y2).unwrap();
    println!("g = {}", tower.format(&g));
    println!(
        "maps A to A·t f1@1: {}, A t to A·a f@2 t: {}",
        tower.coset_eq(&tower.act(&x1, &g), &y1),
        tower.coset_eq(&tower.act(&x2, &g), &y2)
    );
    let swap = tower.transitive_witness(&x1, &x2, &x2, &x1).unwrap();
    println!("swap witness: {}", tower.format(&swap));
    let (s, s2) = tower.noncommuting_involutions().unwrap();
    println!("noncommuting involutions: {} and {}", tower.format(&s), tower.format(&s2));
}
