mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use s2t::certifier::Oracle;
use s2t::normal_form::RawToken;
use s2t::{Element, Sign};

use common::{tower, word, LETTERS};

fn letters(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..LETTERS.len(), 0..=max)
}

/// Identity words spliced in by the rewriting property.
const RELATORS: [&str; 7] = [
    "a a a",
    "t t",
    "f1@1 f1@1^-1",
    "f@2^-1 t f@2 t a t a^2 t",
    "f@2 t a t a^2 t f@2^-1 t",
    "f2@1^-1 t f1@1 t a^2 t",
    "t f1@1 t a^-1 t f2@1^-1",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_a_fixpoint(w in letters(12)) {
        let t = tower();
        let alg = t.algebra();
        let x = word(t, &w);
        if let Some(lw) = x.as_word() {
            prop_assert_eq!(&alg.canonicalize(lw), &x);
            let reduced = alg.reduce(lw.level(), &raw(lw));
            prop_assert_eq!(alg.canonicalize(&reduced), x.clone());
        }
        prop_assert_eq!(alg.parse(&alg.format(&x)).unwrap(), x);
    }

    #[test]
    fn inverses_and_associativity(x in letters(8), y in letters(8), z in letters(8)) {
        let t = tower();
        let alg = t.algebra();
        let (x, y, z) = (word(t, &x), word(t, &y), word(t, &z));
        prop_assert!(alg.is_identity(&alg.mul(&x, &alg.inv(&x))));
        prop_assert!(alg.is_identity(&alg.mul(&alg.inv(&x), &x)));
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        prop_assert_eq!(alg.inv(&alg.mul(&x, &y)), alg.mul(&alg.inv(&y), &alg.inv(&x)));
    }

    #[test]
    fn rewriting_by_relators_preserves_the_element(w in letters(10), inserts in prop::collection::vec((0..11usize, 0..RELATORS.len()), 1..4)) {
        let t = tower();
        let alg = t.algebra();
        let mut text: Vec<String> = w.iter().map(|&i| LETTERS[i].to_string()).collect();
        let original = word(t, &w);
        for (pos, r) in inserts {
            let pos = pos.min(text.len());
            text.insert(pos, RELATORS[r].to_string());
        }
        let rewritten = alg.parse(&text.join(" ")).unwrap();
        prop_assert_eq!(&rewritten, &original);
        prop_assert_eq!(rewritten.f_length(2), original.f_length(2));
    }

    #[test]
    fn canonicalization_certificates_check(parts in prop::collection::vec(letters(4), 1..5), signs in prop::collection::vec(any::<bool>(), 0..4)) {
        let t = tower();
        let alg = t.algebra();
        let m = signs.len().min(parts.len() - 1);
        let signs: Vec<Sign> = signs[..m].iter().map(|&b| if b { Sign::Pos } else { Sign::Neg }).collect();
        let mut elems: Vec<Element> = parts[..=m].iter().map(|p| {
            let e = word(t, &p.iter().copied().filter(|&i| i < 7).collect::<Vec<_>>());
            e
        }).collect();
        // Only Britton-reduced inputs are in scope.
        for i in 1..m {
            if signs[i - 1] != signs[i] {
                let bad = match signs[i - 1] {
                    Sign::Pos => [alg.identity(), alg.level(2).v.clone()],
                    Sign::Neg => [alg.identity(), alg.t()],
                };
                if bad.contains(&elems[i]) {
                    elems[i] = alg.parse("a").unwrap();
                }
            }
        }
        let lw = s2t::LevelWord::new(2, elems, signs);
        let (canon, cert) = alg.canonicalize_with_certificate(&lw);
        let y = alg.view(2, &canon);
        prop_assert_eq!(alg.check_certificate(&lw, &y, &cert), Ok(true));
        prop_assert_eq!(y.signs(), lw.signs());
        prop_assert!(m == 0 || !alg.is_identity(&canon));
    }

    #[test]
    fn order_is_a_strict_total_order(x in letters(6), y in letters(6), z in letters(6)) {
        let t = tower();
        let alg = t.algebra();
        let (x, y, z) = (word(t, &x), word(t, &y), word(t, &z));
        prop_assert_eq!(alg.cmp(&x, &y), alg.cmp(&y, &x).reverse());
        prop_assert_eq!(alg.cmp(&x, &y) == Ordering::Equal, x == y);
        if alg.cmp(&x, &y) == Ordering::Less && alg.cmp(&y, &z) == Ordering::Less {
            prop_assert_eq!(alg.cmp(&x, &z), Ordering::Less);
        }
    }

    #[test]
    fn membership_agrees_with_search_and_factors(w in letters(10)) {
        let t = tower();
        let alg = t.algebra();
        let x = word(t, &w);
        prop_assert_eq!(alg.in_a(&x), Oracle::new(alg).in_a(&x));
        if let Some(f) = alg.in_a_factorization(&x) {
            prop_assert_eq!(alg.evaluate_factorization(&f), x);
        }
    }

    #[test]
    fn subgroup_words_are_members(w in prop::collection::vec(prop::sample::select(vec!["a", "a^-1", "f1@1", "f1@1^-1", "f2@1", "f2@1^-1", "f@2", "f@2^-1"]), 0..10)) {
        let t = tower();
        let x = if w.is_empty() { t.algebra().identity() } else { t.parse(&w.join(" ")).unwrap() };
        prop_assert!(t.algebra().in_a(&x));
    }

    #[test]
    fn malnormality_on_random_conjugates(g in letters(8), a in prop::collection::vec(prop::sample::select(vec!["a", "a^-1", "f1@1", "f1@1^-1", "f2@1", "f2@1^-1", "f@2", "f@2^-1"]), 1..8)) {
        let t = tower();
        let alg = t.algebra();
        let g = word(t, &g);
        let a = t.parse(&a.join(" ")).unwrap();
        prop_assume!(!alg.is_identity(&a) && !alg.in_a(&g));
        prop_assert!(!Oracle::new(alg).in_a(&alg.conj(&g, &a)));
    }

    #[test]
    fn double_coset_witnesses_are_sound(x in letters(5), p in prop::collection::vec(prop::sample::select(vec!["a", "f1@1", "f2@1^-1", "f@2", "f@2^-1"]), 0..4), q in prop::collection::vec(prop::sample::select(vec!["a^-1", "f1@1^-1", "f2@1", "f@2"]), 0..4)) {
        let t = tower();
        let alg = t.algebra();
        let x = word(t, &x);
        let parse = |v: &Vec<&str>| if v.is_empty() { alg.identity() } else { alg.parse(&v.join(" ")).unwrap() };
        let g = alg.product([&parse(&p), &x, &parse(&q)]);
        let w = alg.double_coset(&x, &g);
        prop_assert!(w.is_some());
        let w = w.unwrap();
        prop_assert!(alg.in_a(&w.p) && alg.in_a(&w.q));
        prop_assert_eq!(alg.product([&w.p, &x, &w.q]), g);
    }

    #[test]
    fn action_is_a_right_action(x in letters(6), g in letters(6), h in letters(6)) {
        let t = tower();
        let alg = t.algebra();
        let c = t.coset(word(t, &x));
        let (g, h) = (word(t, &g), word(t, &h));
        prop_assert!(t.coset_eq(&t.act(&t.act(&c, &g), &h), &t.act(&c, &alg.mul(&g, &h))));
    }

    #[test]
    fn frozen_resolution_identities(r in letters(5), p in prop::collection::vec(prop::sample::select(vec!["a", "f1@1", "f@2^-1"]), 0..3), g in letters(4), a1 in prop::collection::vec(prop::sample::select(vec!["a", "f2@1", "f@2"]), 0..3)) {
        let t = tower();
        let alg = t.algebra();
        let parse = |v: &Vec<&str>| if v.is_empty() { alg.identity() } else { alg.parse(&v.join(" ")).unwrap() };
        let r = word(t, &r);
        let s = alg.product([&parse(&p), &alg.t(), &r]);
        let g = word(t, &g);
        let a1 = parse(&a1);
        let f = t.resolve_f_frozen(&r, &s).unwrap().unwrap();
        prop_assert!(alg.in_a(&alg.mul(&f, &alg.inv(&r))));
        prop_assert!(alg.in_a(&alg.product([&alg.t(), &f, &alg.inv(&s)])));
        prop_assert_eq!(t.resolve_f_frozen(&alg.mul(&r, &g), &alg.mul(&s, &g)).unwrap().unwrap(), alg.mul(&f, &g));
        prop_assert_eq!(t.resolve_f_frozen(&s, &r).unwrap().unwrap(), alg.mul(&alg.t(), &f));
        prop_assert_eq!(t.resolve_f_frozen(&alg.mul(&a1, &r), &s).unwrap().unwrap(), f);
    }
}

fn raw(lw: &s2t::LevelWord) -> Vec<RawToken> {
    let mut out = Vec::new();
    for (i, p) in lw.parts().iter().enumerate() {
        out.push(RawToken::Part(p.clone()));
        if let Some(&s) = lw.signs().get(i) {
            out.push(RawToken::Letter(s));
        }
    }
    out
}
