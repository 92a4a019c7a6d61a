//! Thompson's group F as unitaries in the Cuntz algebra O_2, written as
//! finite sums `Σ S_α S_β*` over binary words, together with its action on
//! diagonal projections and on the tree boundary.

pub mod boundary;
pub mod dyadic;
pub mod elements;
pub mod error;
pub mod generators;
pub mod omega;
pub mod representation;
pub mod words;

pub use dyadic::DyadicRational;
pub use elements::{parse_terms, reduce, GroupElement, Side, Term};
pub use error::{Error, Result};
pub use generators::{
    equals, from_normal_form, gen_x, generator_ball, to_normal_form, GeneratorWord, Letter, NormalFormWord,
};
pub use words::{common_refinement, is_prefix, kraft_sum, lex_compare, CompleteCode, LexOrder, Word};
pub use omega::{
    act, coset_invariant, d_tau, h2_member, omega2_member, orbit, orbit_layers, realize, DiagonalProjection, Orbit,
    OrbitRecord,
};
pub use boundary::{
    act_truncated, embed, is_realizable, non_isolation_witness, stabilizes, PairTruncation, TreeTruncation,
};
pub use representation::{
    apply, independence_certificate, separating_point, FormalVector, IndependenceCertificate,
};
