//! Hypothesis checks on three bases: the seed, `<t>` with trivial `A`, and
//! `S_3` with `A = A_3`, which is normal and hence not malnormal.

use s2t::base::{ADecl, MemberDecl};
use s2t::certifier::verify_base;
use s2t::{presets, BaseGroup};

fn main() {
    let seed = BaseGroup::from_config(&presets::seed()).unwrap();
    print!("{}", verify_base(&seed, 8).to_text());

    let two = BaseGroup::from_config(&presets::order_two()).unwrap();
    print!("{}", verify_base(&two, 8).to_text());

    let mut s3 = presets::s3(&[0]);
    s3.a = ADecl::Members(["1", "r", "r^2"].iter().map(|w| MemberDecl::Word(w.to_string())).collect());
    let s3 = BaseGroup::from_config(&s3).unwrap();
    print!("{}", verify_base(&s3, 8).to_text());
}
