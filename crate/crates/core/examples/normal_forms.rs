//! Reduction, canonical forms and equality certificates at both kinds of
//! level.

use s2t::normal_form::RawToken;
use s2t::{presets, LevelWord, Sign};

fn main() {
    let tower = presets::two_level_tower();
    let alg = tower.algebra();
    let p = |s: &str| alg.parse(s).unwrap();

    // f2@1 is t f1@1 v^-1 with v = t a t.
    let f2 = alg.f2(1);
    println!("f2@1 = {}", alg.format(&f2));
    println!("f2@1^-1 = {}", alg.format(&alg.inv(&f2)));

    let raw = [RawToken::Letter(Sign::Neg), RawToken::Part(p("t")), RawToken::Letter(Sign::Pos)];
    let w = alg.reduce_britton(2, &raw);
    println!("f@2^-1 t f@2 reduces to {}", alg.format(&alg.canonicalize(&w)));

    for s in ["a f@2", "t a f@2", "f@2 t", "t f@2 t a t a^2 t", "f1@1 f1@1^-1 t"] {
        println!("{s:<20} -> {}", alg.format(&p(s)));
    }

    // t f@2 a is reduced but not canonical: t f@2 = f@2 v.
    let raw = LevelWord::new(2, vec![p("t"), p("a")], vec![Sign::Pos]);
    let (canon, cert) = alg.canonicalize_with_certificate(&raw);
    println!("t f@2 a -> {}", alg.format(&canon));
    println!("certificate {:?} checks: {:?}", cert, alg.check_certificate(&raw, &alg.view(2, &canon), &cert));
    println!("a < t: {:?}", alg.cmp(&p("a"), &p("t")));
}
