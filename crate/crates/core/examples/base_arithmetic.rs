//! Arithmetic, membership and double cosets in the seed `<t> * <a | a^3>`.

use s2t::{presets, BaseGroup};

fn main() {
    let g = BaseGroup::from_config(&presets::seed()).unwrap();
    let w = |s: &str| g.parse(s).unwrap();

    let x = g.mul(&w("t a"), &w("a t"));
    println!("(t a)(a t) = {}", g.format(&x));
    println!("(t a t)^-1 = {}", g.format(&g.inv(&w("t a t"))));
    for s in ["a", "t", "t a t"] {
        println!("{s} in A: {}", g.in_a(&w(s)));
    }

    match g.double_coset(&w("t"), &w("a t")) {
        Some(d) => println!("a t = ({})·t·({})", g.format(&d.a), g.format(&d.b)),
        None => println!("a t is not in AtA"),
    }
    println!("t a^2 t in A(t a t)A: {}", g.double_coset(&w("t a t"), &w("t a^2 t")).is_some());

    for l in 0..=3 {
        let ball: Vec<String> = g.enumerate(l).iter().map(|x| g.format(x)).collect();
        println!("ball {l}: {} elements {ball:?}", ball.len());
    }
}
