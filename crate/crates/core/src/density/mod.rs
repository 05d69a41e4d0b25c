//! Lebesgue density profiles, quasi-density tests and witnesses, the
//! quasi-dense core, and raster connectivity of planar complements.

pub mod connect;
pub mod profile;
pub mod quasi;

pub use connect::{
    complement_components, complement_connected, ConnectivityReport, ConnectivityVerdict,
};
pub use profile::{density_profile, DensityProfile, DensitySet};
pub use quasi::{
    is_quasi_dense, quasi_dense_core, witness_balls, QuasiDensityReport, QuasiVerdict, WitnessBall,
};
