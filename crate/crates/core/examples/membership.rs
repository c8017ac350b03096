//! Membership in the designated subgroup and double cosets above the base.

use s2t::presets;

fn main() {
    let tower = presets::two_level_tower();
    let alg = tower.algebra();
    let p = |s: &str| alg.parse(s).unwrap();

    for s in ["t f1@1 t a^2 t", "f1@1 t", "a f@2 t a t a^-1 f1@1^-1", "f@2^-1 t f@2", "t"] {
        match alg.in_a_factorization(&p(s)) {
            Some(f) => println!("{s}: in A, factors {:?}", f.tokens.len()),
            None => println!("{s}: not in A"),
        }
    }

    let t = alg.t();
    for (k, g) in [(1, "t a t"), (2, "t a t a^2 t"), (2, "f1@1 t f@2 a"), (2, "t a t")] {
        match alg.double_coset_at(k, &t, &p(g)) {
            Some(w) => println!("level {k}: {g} = ({})·t·({})", alg.format(&w.p), alg.format(&w.q)),
            None => println!("level {k}: {g} not in A t A"),
        }
    }
}
