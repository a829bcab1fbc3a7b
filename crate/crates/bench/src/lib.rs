//! Shared inputs for the criterion benches.

use apollonia::quadruples::Movable;
use apollonia::{DescartesQuadruple, QuadMove};

/// Root quadruples of increasing size, ending with a deep non-root member.
pub fn sample_quadruples() -> Vec<(&'static str, DescartesQuadruple)> {
    vec![
        ("window", DescartesQuadruple::new(-1, 2, 2, 3)),
        ("six", DescartesQuadruple::new(-6, 11, 14, 15)),
        ("deep", deep_member(16)),
    ]
}

/// Climbs `steps` moves from the base, cycling slots and keeping weight-raising moves.
pub fn deep_member(steps: usize) -> DescartesQuadruple {
    let mut v = DescartesQuadruple::new(-1, 2, 2, 3);
    let mut slot = 1;
    let mut taken = 0;
    while taken < steps {
        let next = v
            .apply(QuadMove::m(slot))
            .expect("no overflow at this depth");
        if next.weight().unwrap() > v.weight().unwrap() {
            v = next;
            taken += 1;
        }
        slot = slot % 4 + 1;
    }
    v
}
