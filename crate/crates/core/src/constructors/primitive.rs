use serde::Serialize;

use crate::error::{Error, Result};
use crate::lipest::{GridAxis, GridFunction};
use crate::realsets::LineSet;
use crate::scalar::Real;

/// A value together with rigorous lower and upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracket<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Bracket<T> {
    pub fn exact(v: T) -> Self {
        Self {
            value: v,
            lower: v,
            upper: v,
        }
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    fn negate(self) -> Self {
        Self {
            value: -self.value,
            lower: -self.upper,
            upper: -self.lower,
        }
    }
}

/// `f(x) = ℓ([a, x] ∩ F)`, signed so that `f(x) = -ℓ([x, a] ∩ F)` for `x < a`.
///
/// For a Cantor set the value is the interpolated window estimate at the
/// resolving stage, which lies inside the bracket and keeps `f` monotone and
/// 1-Lipschitz.
#[derive(Clone, Debug)]
pub struct MeasurePrimitive<T> {
    base: T,
    set: LineSet<T>,
}

impl<T: Real> MeasurePrimitive<T> {
    pub fn new(set: LineSet<T>, base: T) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::NonFinite(format!("base point {base}")));
        }
        // Cantor evaluations need the limit measure.
        set.measure()?;
        Ok(Self { base, set })
    }

    pub fn base(&self) -> T {
        self.base
    }

    pub fn set(&self) -> &LineSet<T> {
        &self.set
    }

    pub fn eval(&self, x: T) -> Bracket<T> {
        let a = self.base;
        let (lo, hi, neg) = if x >= a { (a, x, false) } else { (x, a, true) };
        let w = self
            .set
            .window_measure(lo, hi)
            .expect("window ordered and measure available");
        let b = Bracket {
            value: w.estimate,
            lower: w.lower,
            upper: w.upper,
        };
        if neg {
            b.negate()
        } else {
            b
        }
    }

    #[inline]
    pub fn value(&self, x: T) -> T {
        self.eval(x).value
    }

    /// Samples the primitive on `axis`; also returns the widest bracket.
    pub fn sample(&self, axis: GridAxis<T>) -> Result<(GridFunction<T>, T)> {
        let f = GridFunction::sample_1d(axis, |x| self.value(x))?;
        let width = (0..axis.len())
            .map(|i| self.eval(axis.coord(i)).width())
            .fold(T::zero(), T::max);
        Ok((f, width))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::{CantorSet, IntervalSet};

    fn unit() -> MeasurePrimitive<f64> {
        MeasurePrimitive::new(
            LineSet::Intervals(IntervalSet::new([(0.0, 1.0)]).unwrap()),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn clamp_on_unit_interval() {
        let p = unit();
        assert_eq!(p.value(0.5), 0.5);
        assert_eq!(p.value(2.0), 1.0);
        assert_eq!(p.value(-1.0), 0.0);
    }

    #[test]
    fn signed_below_base() {
        let set = IntervalSet::new([(0.0, 1.0)]).unwrap();
        let p = MeasurePrimitive::new(LineSet::Intervals(set), 0.75).unwrap();
        assert_eq!(p.value(0.25), -0.5);
        assert_eq!(p.value(1.5), 0.25);
    }

    #[test]
    fn cantor_primitive_values() {
        let c = CantorSet::<f64>::quarter_powers(20).unwrap();
        let p = MeasurePrimitive::new(LineSet::cantor(c, 20).unwrap(), 0.0).unwrap();
        let one = p.eval(1.0);
        assert!((one.value - 0.5).abs() < 1e-12);
        assert_eq!(one.width(), 0.0);
        let b = p.eval(0.375);
        assert!((b.value - 0.25).abs() < 1e-12);
        assert!(b.lower <= b.value && b.value <= b.upper);
    }

    #[test]
    fn empty_set_gives_zero_samples() {
        let p = MeasurePrimitive::new(LineSet::Intervals(IntervalSet::empty()), 0.0).unwrap();
        let (f, w) = p.sample(GridAxis::new(-1.0, 2.0, 0.25).unwrap()).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
        assert_eq!(w, 0.0);
    }
}
