//! Exhaustive verification of normalizers, centralizers and split
//! extensions of finite groups, finite monoid actions on groups, and
//! finite topological groups.
//!
//! Everything here works with explicit multiplication tables at desk
//! scale. Operations that realize a universal property (normalizers,
//! cartesian lifts, centralizers, distinctive relations) are computed by
//! a direct construction and then *certified* by brute force against a
//! bounded catalog of small groups; the certification bound is always
//! explicit in reports.

pub mod cache;
pub mod catalog;
pub mod group;
pub mod hom;
pub mod normalizer;
pub mod points;
pub mod subgroup;

pub use group::{FiniteGroup, GroupError};
pub use hom::{AutomorphismGroup, GroupHom, HomError};
pub use points::{Action, Point, PtError, PtMorphism, SEMorphism, SplitExtension};
pub use subgroup::{Congruence, RelError, Subgroup};
