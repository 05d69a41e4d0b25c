//! Fat Cantor sets, measure primitives, tent sums over disjoint balls and
//! discrete estimators for the local, big and little Lipschitz derivatives.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `F64`
//! aliases below are the instantiations the command-line harness uses.

pub mod cli;
pub mod constructors;
pub mod density;
pub mod error;
pub mod lipest;
pub mod plane;
pub mod realsets;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type IntervalSetF64 = realsets::IntervalSet<f64>;
pub type IntervalSetF32 = realsets::IntervalSet<f32>;
pub type CantorSetF64 = realsets::CantorSet<f64>;
pub type CantorSetF32 = realsets::CantorSet<f32>;
pub type LineSetF64 = realsets::LineSet<f64>;
pub type GridFunctionF64 = lipest::GridFunction<f64>;
pub type GridFunctionF32 = lipest::GridFunction<f32>;
pub type LipEstimateF64 = lipest::LipEstimate<f64>;
pub type MeasurePrimitiveF64 = constructors::MeasurePrimitive<f64>;
pub type BallFamilyF64 = constructors::BallFamily<f64>;
pub type TentSumF64 = constructors::TentSum<f64>;
pub type RadialCompositionF64 = constructors::RadialComposition<f64>;
pub type DensityProfileF64 = density::DensityProfile<f64>;
