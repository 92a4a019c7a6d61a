//! The coset space F/H₂ realized as the orbit Ω₂ of the identity projection.

mod orbit;
mod projection;
mod realize;

use num_bigint::BigUint;

use crate::elements::GroupElement;
use crate::error::Result;

pub use orbit::{orbit, orbit_layers, Orbit, OrbitLine, OrbitRecord, OrbitRecordHeader};
pub use projection::{act, d_tau, DiagonalProjection};
pub(crate) use projection::act_unchecked;
pub use realize::realize;

/// `f ∈ H₂`: every term has even degree.
pub fn h2_member(f: &GroupElement) -> Result<bool> {
    f.require_f()?;
    Ok(f.terms().iter().all(|t| t.is_even()))
}

/// `f₀ f₀*`, the projection labelling the coset `f H₂`.
pub fn coset_invariant(f: &GroupElement) -> Result<DiagonalProjection> {
    f.require_f()?;
    let ranges = f.terms().iter().filter(|t| t.is_even()).map(|t| t.range.clone()).collect();
    Ok(DiagonalProjection::from_sorted_antichain(ranges))
}

/// Writes `τ(p) = k / 2^(2m+1)` with the smallest such `m` and returns
/// `(k, m)` when `k ≡ 2 (mod 3)`, i.e. when `p ∈ Ω₂`.
pub fn omega2_member(p: &DiagonalProjection) -> Option<(BigUint, u32)> {
    let tau = p.trace();
    if tau.is_zero() {
        return None;
    }
    let b = tau.exponent();
    let e = if b % 2 == 1 { b } else { b + 1 };
    let k = tau.scaled_to(e).expect("e >= b");
    if &k % 3u32 == BigUint::from(2u32) {
        Some((k, (e - 1) / 2))
    } else {
        None
    }
}
