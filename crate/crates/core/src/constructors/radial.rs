use crate::constructors::primitive::{Bracket, MeasurePrimitive};
use crate::error::Result;
use crate::lipest::{GridAxis, GridFunction};
use crate::plane::{norm2, Point2};
use crate::scalar::Real;

/// `f(a) = g(|a|)` on the plane for a one-dimensional profile `g`.
#[derive(Clone, Debug)]
pub struct RadialComposition<T> {
    profile: MeasurePrimitive<T>,
}

impl<T: Real> RadialComposition<T> {
    pub fn new(profile: MeasurePrimitive<T>) -> Self {
        Self { profile }
    }

    pub fn profile(&self) -> &MeasurePrimitive<T> {
        &self.profile
    }

    pub fn eval(&self, a: Point2<T>) -> Bracket<T> {
        self.profile.eval(norm2(a))
    }

    #[inline]
    pub fn value(&self, a: Point2<T>) -> T {
        self.eval(a).value
    }

    pub fn sample(&self, x: GridAxis<T>, y: GridAxis<T>) -> Result<GridFunction<T>> {
        GridFunction::sample_2d(x, y, |p| self.value(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::{CantorSet, LineSet};

    fn radial() -> RadialComposition<f64> {
        let c = CantorSet::quarter_powers(16).unwrap();
        RadialComposition::new(MeasurePrimitive::new(LineSet::cantor(c, 16).unwrap(), 0.0).unwrap())
    }

    #[test]
    fn values() {
        let f = radial();
        assert_eq!(f.value([0.0, 0.0]), 0.0);
        assert!((f.value([1.0, 0.0]) - 0.5).abs() < 1e-12);
        assert_eq!(f.value([0.6, 0.8]), f.value([1.0, 0.0]));
        assert_eq!(f.value([0.0, -1.0]), f.value([1.0, 0.0]));
    }
}
