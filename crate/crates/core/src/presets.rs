//! Ready-made base configurations.

use crate::base::{ADecl, BaseGroup, BaseConfig, ConfigKind, FactorDecl, GeneratorDecl, MemberDecl};

pub use crate::base::seed_config as seed;
use crate::tower::Tower;

/// A fresh tower over [`seed`].
pub fn seed_tower() -> Tower {
    Tower::new(BaseGroup::from_config(&seed()).expect("the seed is valid"))
}

/// The seed tower after resolving `f(1, t a t)` (a free-product level) and
/// `f(1, t a t a^2 t)` (an HNN level).
pub fn two_level_tower() -> Tower {
    let mut tower = seed_tower();
    for v in ["t a t", "t a t a^2 t"] {
        let (u, v) = (tower.parse("1").unwrap(), tower.parse(v).unwrap());
        tower.resolve_f(&u, &v).expect("both targets extend the seed");
    }
    tower
}

/// `G = <t>`, `A = 1`.
pub fn order_two() -> BaseConfig {
    BaseConfig {
        schema_version: 1,
        kind: ConfigKind::FreeProduct,
        generators: vec![],
        table: None,
        factor: Some(FactorDecl::Named("trivial".into())),
        a: ADecl::Named("factor".into()),
        t: Some("t".into()),
    }
}

/// `<t> * C_n` with `A = C_n` on generator `a`.
pub fn cyclic(n: u32) -> BaseConfig {
    BaseConfig {
        factor: Some(FactorDecl::Cyclic { cyclic: n }),
        ..seed()
    }
}

/// `<t> * F(a, b)` with `A = F(a, b)`.
pub fn free_rank_two() -> BaseConfig {
    BaseConfig {
        generators: vec![GeneratorDecl::Name("a".into()), GeneratorDecl::Name("b".into())],
        factor: Some(FactorDecl::Named("free".into())),
        ..seed()
    }
}

/// The symmetric group on three points as a Cayley table, generated by the
/// 3-cycle `r` (element 1) and the transposition `s` (element 3), with `A`
/// given by element indices. `t` is left for the loader to choose.
pub fn s3(a: &[u32]) -> BaseConfig {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
    let table = perms
        .iter()
        .map(|x| {
            perms
                .iter()
                .map(|y| index([y[x[0]], y[x[1]], y[x[2]]]))
                .collect()
        })
        .collect();
    BaseConfig {
        schema_version: 1,
        kind: ConfigKind::FiniteTable,
        generators: vec![
            GeneratorDecl::Bound { name: "r".into(), element: 1 },
            GeneratorDecl::Bound { name: "s".into(), element: 3 },
        ],
        table: Some(table),
        factor: None,
        a: ADecl::Members(a.iter().map(|&i| MemberDecl::Index(i)).collect()),
        t: None,
    }
}
