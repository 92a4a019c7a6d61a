//! Shared fixtures for the criterion benches.

use ftrees_core::{generator_ball, GroupElement};

/// Elements of the radius-`r` ball, skipping the identity.
pub fn sample_elements(radius: usize) -> Vec<GroupElement> {
    generator_ball(radius).into_iter().skip(1).map(|(_, f)| f).collect()
}
