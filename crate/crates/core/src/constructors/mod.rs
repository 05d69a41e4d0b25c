//! Explicit functions whose local Lipschitz derivative is a characteristic
//! function: measure primitives, tent sums over disjoint balls, greedy ball
//! packings and radial compositions.

pub mod index;
pub mod packing;
pub mod primitive;
pub mod radial;
pub mod tent;

pub use index::BallIndex;
pub use packing::{coverage_deficit, pack_regular_closed, BasisSpec, Packing};
pub use primitive::{Bracket, MeasurePrimitive};
pub use radial::RadialComposition;
pub use tent::{tent_eval, Ball, BallFamily, TentSum};
