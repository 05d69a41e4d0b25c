//! Exact closed subsets of the line: finite interval unions and fat Cantor
//! sets, with measure, membership and distance queries.

pub mod cantor;
pub mod interval_set;
pub mod spec;

pub use cantor::{
    AlphaRule, CantorSet, MeasureValue, Membership, TailRule, WindowMeasure, MAX_STAGE,
};
pub use interval_set::{Interval, IntervalSet};
pub use spec::{BuiltSet, SetSpec};

use crate::error::Result;
use crate::scalar::Real;

/// A closed subset of the line that answers window-measure queries: either an
/// exact interval union or a Cantor set resolved to a fixed stage.
#[derive(Clone, Debug)]
pub enum LineSet<T> {
    Intervals(IntervalSet<T>),
    Cantor { set: CantorSet<T>, stage: usize },
}

impl<T: Real> LineSet<T> {
    pub fn cantor(set: CantorSet<T>, stage: usize) -> Result<Self> {
        if stage > set.max_stage() {
            return Err(crate::Error::StageOutOfRange {
                stage,
                max: set.max_stage(),
            });
        }
        Ok(LineSet::Cantor { set, stage })
    }

    /// Bracket for `ℓ(F ∩ [u, v])`; exact (zero width) for interval unions.
    pub fn window_measure(&self, u: T, v: T) -> Result<WindowMeasure<T>> {
        match self {
            LineSet::Intervals(s) => {
                if u > v {
                    return Err(crate::Error::ReversedWindow {
                        u: u.as_f64(),
                        v: v.as_f64(),
                    });
                }
                let m = s.window_measure(u, v);
                Ok(WindowMeasure {
                    lower: m,
                    upper: m,
                    estimate: m,
                    error_bound: T::zero(),
                })
            }
            LineSet::Cantor { set, stage } => set.window_measure(u, v, *stage),
        }
    }

    pub fn membership(&self, x: T) -> Membership {
        match self {
            LineSet::Intervals(s) => {
                if s.contains(x) {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
            LineSet::Cantor { set, stage } => set.contains(x, *stage).expect("stage validated"),
        }
    }

    /// Distance to the set (to `C_stage` for Cantor sets).
    pub fn distance(&self, x: T) -> T {
        match self {
            LineSet::Intervals(s) => s.distance(x),
            LineSet::Cantor { set, stage } => set.distance(x, *stage).expect("stage validated"),
        }
    }

    /// Total measure of the set: exact for interval unions, the limit-set
    /// value for Cantor sets.
    pub fn measure(&self) -> Result<T> {
        match self {
            LineSet::Intervals(s) => Ok(s.measure()),
            LineSet::Cantor { set, .. } => Ok(set.measure()?.value),
        }
    }
}

impl<T: Real> BuiltSet<T> {
    /// Wraps the built set as a [`LineSet`], resolving Cantor sets at
    /// `stage` (defaulting to `max_stage`).
    pub fn into_line_set(self, stage: Option<usize>) -> Result<LineSet<T>> {
        match self {
            BuiltSet::Intervals(s) => Ok(LineSet::Intervals(s)),
            BuiltSet::Cantor(c) => {
                let stage = stage.unwrap_or(c.max_stage());
                LineSet::cantor(c, stage)
            }
        }
    }
}
