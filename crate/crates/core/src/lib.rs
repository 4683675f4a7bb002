//! Desk-scale computation with locales: finite frames and their
//! homomorphisms, frames presented by generators and coverage relations,
//! localic products via C-ideals, the way-below relation and local
//! compactness, and exponential frames checked against independent
//! upper-set oracles. An infinite-chain module reproduces, exactly, the
//! failure of naturality for the naive coefficient operator and the
//! repair that motivates way-below.
//!
//! Everything is pure and immutable after construction. The `parallel`
//! feature (on by default) lets the candidate-enumeration loops in the
//! exponential verifiers run on rayon; results are merged in a fixed
//! order, so outputs are identical either way.

#![forbid(unsafe_code)]

pub mod bexp;
pub mod bits;
pub mod chain;
pub mod enumerate;
pub mod exponential;
pub mod frame;
pub mod hom;
pub mod par;
pub mod poset;
pub mod presentation;
pub mod tensor;
pub mod text;
pub mod waybelow;

pub use frame::{check_frame, Frame, FrameDefect, FrameReport};
pub use hom::{check_hom, points, specialization_leq, FrameHom, Point};
pub use poset::Poset;
