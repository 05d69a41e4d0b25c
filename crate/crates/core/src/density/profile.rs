use serde::Serialize;

use crate::constructors::Bracket;
use crate::error::{Error, Result};
use crate::plane::ProductSet;
use crate::realsets::{LineSet, Membership, WindowMeasure};
use crate::scalar::Real;

/// A closed set on which density queries are answered: a line set, or a
/// product of two line sets queried on squares.
#[derive(Clone, Copy, Debug)]
pub enum DensitySet<'a, T> {
    Line(&'a LineSet<T>),
    Product(&'a ProductSet<T>),
}

impl<'a, T: Real> DensitySet<'a, T> {
    pub fn dim(&self) -> usize {
        match self {
            DensitySet::Line(_) => 1,
            DensitySet::Product(_) => 2,
        }
    }

    /// `false` only when the point is definitely outside the set.
    pub fn may_contain(&self, p: &[T]) -> bool {
        match self {
            DensitySet::Line(s) => s.membership(p[0]) != Membership::Out,
            DensitySet::Product(s) => {
                s.x.membership(p[0]) != Membership::Out && s.y.membership(p[1]) != Membership::Out
            }
        }
    }

    /// Bracket for the measure of the set inside the ball `[x - r, x + r]`
    /// (1D) or the square `[x - r, x + r] × [y - r, y + r]` (2D), together
    /// with the measure of that window.
    pub fn window(&self, p: &[T], r: T) -> Result<(Bracket<T>, T)> {
        let two = T::lit(2.0);
        let conv = |w: WindowMeasure<T>| Bracket {
            value: w.estimate,
            lower: w.lower,
            upper: w.upper,
        };
        match self {
            DensitySet::Line(s) => Ok((conv(s.window_measure(p[0] - r, p[0] + r)?), two * r)),
            DensitySet::Product(s) => {
                let a = conv(s.x.window_measure(p[0] - r, p[0] + r)?);
                let b = conv(s.y.window_measure(p[1] - r, p[1] + r)?);
                let m = Bracket {
                    value: a.value * b.value,
                    lower: a.lower * b.lower,
                    upper: a.upper * b.upper,
                };
                Ok((m, two * r * two * r))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile<T> {
    pub point: Vec<T>,
    pub radii: Vec<T>,
    /// `μ(E ∩ B) / μ(B)` per radius, each bound clamped to `[0, 1]`.
    pub ratios: Vec<Bracket<T>>,
    /// Ratio at the smallest radius.
    pub limit_estimate: T,
}

pub(crate) fn check_radii<T: Real>(radii: &[T]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > T::zero())) {
        return Err(Error::InvalidRadii(
            "radii must be positive and finite".into(),
        ));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidRadii(
            "radii must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

fn clamp01<T: Real>(v: T) -> T {
    v.max(T::zero()).min(T::one())
}

/// Density ratios of `set` around `point` over a decreasing radius sweep.
pub fn density_profile<T: Real>(
    set: DensitySet<'_, T>,
    point: &[T],
    radii: &[T],
) -> Result<DensityProfile<T>> {
    check_radii(radii)?;
    if point.len() != set.dim() {
        return Err(Error::Config(format!(
            "point of length {} for a {}-dimensional set",
            point.len(),
            set.dim()
        )));
    }
    let ratios = radii
        .iter()
        .map(|&r| {
            let (m, vol) = set.window(point, r)?;
            Ok(Bracket {
                value: clamp01(m.value / vol),
                lower: clamp01(m.lower / vol),
                upper: clamp01(m.upper / vol),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityProfile {
        point: point.to_vec(),
        radii: radii.to_vec(),
        limit_estimate: ratios[ratios.len() - 1].value,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::{CantorSet, IntervalSet};

    fn unit() -> LineSet<f64> {
        LineSet::Intervals(IntervalSet::new([(0.0, 1.0)]).unwrap())
    }

    #[test]
    fn interior_and_boundary_points() {
        let s = unit();
        let p = density_profile(DensitySet::Line(&s), &[0.5], &[0.25, 0.125]).unwrap();
        assert!(p.ratios.iter().all(|b| b.value == 1.0 && b.width() == 0.0));
        let q = density_profile(DensitySet::Line(&s), &[0.0], &[1.0, 0.5, 0.1]).unwrap();
        assert!(q.ratios.iter().all(|b| b.value == 0.5));
        assert_eq!(q.limit_estimate, 0.5);
    }

    #[test]
    fn cantor_at_stage_lengths() {
        let c = CantorSet::<f64>::quarter_powers(16).unwrap();
        let s = LineSet::cantor(c.clone(), 16).unwrap();
        let radii: Vec<f64> = (1..=12).map(|n| c.stage_length(n)).collect();
        let p = density_profile(DensitySet::Line(&s), &[0.0], &radii).unwrap();
        for (n, b) in (1..=12).zip(&p.ratios) {
            // [-L_n, L_n] meets C exactly in the first stage-n interval.
            let oracle = 0.5 / 2f64.powi(n) / (2.0 * c.stage_length(n as usize));
            assert!((b.value - oracle).abs() < 1e-12, "stage {n}");
            assert_eq!(b.width(), 0.0);
        }
    }

    #[test]
    fn product_uses_product_formula() {
        let s = unit();
        let prod = ProductSet::square(s);
        let p = density_profile(DensitySet::Product(&prod), &[0.0, 0.0], &[0.5]).unwrap();
        assert_eq!(p.limit_estimate, 0.25);
    }

    #[test]
    fn radii_must_decrease() {
        let s = unit();
        assert!(density_profile(DensitySet::Line(&s), &[0.5], &[0.1, 0.2]).is_err());
    }
}
