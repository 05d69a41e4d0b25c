//! Discrete local, big and little Lipschitz derivatives of sampled
//! functions, with radius sweeps and a grid check against a target set.

pub mod check;
pub mod estimate;
pub mod field;
pub mod grid;
pub mod io;

pub use check::{
    check_lip_one_set, random_pair_lipschitz, report_from_field, LipOneOptions, LipOneReport,
};
pub use estimate::{
    big_lip_estimate, default_radii, geometric_radii, little_lip_estimate, llip_estimate,
    LipEstimate, SweepValues,
};
pub use field::{llip_field, LipField};
pub use grid::{GridAxis, GridFunction};
