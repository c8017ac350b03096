//! Branch selection for targets outside `A` and `AtA`, and the levels it
//! builds.

use s2t::extension::Branch;
use s2t::{presets, Sign};

fn main() {
    let mut alg = presets::seed_tower().algebra().clone();
    let p = |alg: &s2t::Algebra, s: &str| alg.parse(s).unwrap();

    for s in ["t a t", "t a t a^2 t", "t a", "a"] {
        let v = p(&alg, s);
        match alg.classify_branch(&v) {
            Ok(Branch::Fp { v }) => println!("{s}: free-product step over {}", alg.format(&v)),
            Ok(Branch::Hnn { v_hat, a, .. }) => {
                println!("{s}: HNN step over {} (a = {})", alg.format(&v_hat), alg.format(&a))
            }
            Err(e) => println!("{s}: rejected, {e}"),
        }
    }
    if let Branch::Hnn { v_hat, .. } = alg.select_branch(&p(&alg, "t a")) {
        println!("unchecked selection for t a: {}", alg.format(&v_hat));
    }

    let v = p(&alg, "t a t");
    let k = alg.make_fp_level(&v).unwrap();
    let (t, f1) = (alg.t(), alg.letter(k, Sign::Pos));
    println!("level {k}: t f1 v^-1 = {} is in A_1: {}", alg.format(&alg.f2(k)), alg.in_a(&alg.f2(k)));
    println!("A_1 t f1 = A_1 v: {}", alg.in_a(&alg.mul(&alg.mul(&t, &f1), &alg.inv(&v))));

    let v = p(&alg, "t a t a^2 t");
    let k = alg.make_hnn_level(&v).unwrap();
    let f = alg.letter(k, Sign::Pos);
    println!("level {k}: f^-1 t f = {}", alg.format(&alg.conj(&f, &t)));
    println!("t a t again: {}", alg.make_hnn_level(&p(&alg, "t a t")).unwrap_err());
}
