//! Sharp 2-transitivity, characteristic two and the resolution identities,
//! as a JSON report.

use s2t::certifier::{certify_action, ActionOptions};
use s2t::presets;

fn main() {
    let tower = presets::two_level_tower();
    let report = certify_action(&tower, ActionOptions::new(4, 50));
    println!("{}", report.without_timing().to_json());
    assert!(report.passed());
}
