//! Grid check that a sampled function has local Lipschitz derivative equal
//! to the characteristic function of a given set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::lipest::estimate::default_radii;
use crate::lipest::field::{llip_field, LipField};
use crate::lipest::grid::GridFunction;
use crate::plane::SetDistance;
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_RANDOM_PAIRS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct LipOneOptions<T> {
    /// Defaults to [`default_radii`] when empty.
    pub radii: Vec<T>,
    pub tol: T,
    pub seed: u64,
    pub random_pairs: usize,
}

impl<T: Real> Default for LipOneOptions<T> {
    fn default() -> Self {
        Self {
            radii: Vec::new(),
            tol: T::lit(DEFAULT_TOL),
            seed: DEFAULT_SEED,
            random_pairs: DEFAULT_RANDOM_PAIRS,
        }
    }
}

/// Outcome of a grid check.
///
/// Grid points split three ways: points of the set (distance 0), points
/// farther from the set than the largest radius, and the band in between,
/// which is reported as indeterminate rather than judged.
#[derive(Clone, Debug, Serialize)]
pub struct LipOneReport<T> {
    pub tol: T,
    pub largest_radius: T,
    pub smallest_radius: T,
    pub in_set: usize,
    pub in_set_pass: usize,
    /// 1.0 when no grid point lies in the set.
    pub in_set_fraction: f64,
    pub far: usize,
    pub far_pass: usize,
    /// 1.0 when no grid point is far from the set.
    pub far_fraction: f64,
    pub indeterminate: usize,
    /// Grid indices of set points with local estimate below `1 - tol`.
    pub in_set_failures: Vec<Vec<usize>>,
    /// Grid indices of far points with local estimate above `tol`.
    pub far_failures: Vec<Vec<usize>>,
    /// Largest pair ratio seen, over every ball pair and the random pairs.
    pub global_lipschitz: T,
    pub pairs_sampled: usize,
    pub seed: u64,
    pub ordering_violations: usize,
}

impl<T: Real> LipOneReport<T> {
    pub fn passes(&self) -> bool {
        self.in_set_pass == self.in_set
            && self.far_pass == self.far
            && self.ordering_violations == 0
    }
}

fn fraction(pass: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        pass as f64 / total as f64
    }
}

/// Largest `|f(u) - f(v)| / |u - v|` over `count` seeded random pairs.
pub fn random_pair_lipschitz<T: Real>(f: &GridFunction<T>, count: usize, seed: u64) -> T {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.len();
    let mut best = T::zero();
    if n < 2 {
        return best;
    }
    for _ in 0..count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let (pa, pb) = (f.grid_point(a), f.grid_point(b));
        let di = pa[0].abs_diff(pb[0]);
        let dj = if f.dim() == 2 {
            pa[1].abs_diff(pb[1])
        } else {
            0
        };
        let q = (f.value(a) - f.value(b)).abs() / f.offset_distance(di, dj);
        best = best.max(q);
    }
    best
}

/// Scores an already computed field against `set`.
pub fn report_from_field<T: Real>(
    f: &GridFunction<T>,
    field: &LipField<T>,
    set: &dyn SetDistance<T>,
    opts: &LipOneOptions<T>,
) -> LipOneReport<T> {
    let largest = field.radii[0];
    let smallest = field.radii[field.radii.len() - 1];
    let (mut in_set, mut in_pass, mut far, mut far_pass, mut indeterminate) = (0, 0, 0, 0, 0);
    let mut in_fail = Vec::new();
    let mut far_fail = Vec::new();
    for (k, e) in field.estimates.iter().enumerate() {
        let d = set.distance(&f.coords(k));
        if d == T::zero() {
            in_set += 1;
            if e.llip_final >= T::one() - opts.tol {
                in_pass += 1;
            } else {
                in_fail.push(e.point.clone());
            }
        } else if d > largest {
            far += 1;
            if e.llip_final <= opts.tol {
                far_pass += 1;
            } else {
                far_fail.push(e.point.clone());
            }
        } else {
            indeterminate += 1;
        }
    }
    let global = field
        .max_llip()
        .max(random_pair_lipschitz(f, opts.random_pairs, opts.seed));
    LipOneReport {
        tol: opts.tol,
        largest_radius: largest,
        smallest_radius: smallest,
        in_set,
        in_set_pass: in_pass,
        in_set_fraction: fraction(in_pass, in_set),
        far,
        far_pass,
        far_fraction: fraction(far_pass, far),
        indeterminate,
        in_set_failures: in_fail,
        far_failures: far_fail,
        global_lipschitz: global,
        pairs_sampled: opts.random_pairs,
        seed: opts.seed,
        ordering_violations: field.ordering_violations(),
    }
}

/// Computes the field of `f` and scores it against `set`.
pub fn check_lip_one_set<T: Real>(
    f: &GridFunction<T>,
    set: &dyn SetDistance<T>,
    opts: &LipOneOptions<T>,
) -> Result<(LipOneReport<T>, LipField<T>)> {
    let radii = if opts.radii.is_empty() {
        default_radii(f)
    } else {
        opts.radii.clone()
    };
    let field = llip_field(f, &radii)?;
    Ok((report_from_field(f, &field, set, opts), field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipest::grid::GridAxis;
    use crate::realsets::IntervalSet;

    fn clamp01(t: f64) -> f64 {
        t.clamp(0.0, 1.0)
    }

    #[test]
    fn clamp_passes_on_unit_interval() {
        let f = GridFunction::sample_1d(GridAxis::new(-1.0, 2.0, 1.0 / 64.0).unwrap(), clamp01)
            .unwrap();
        let set = IntervalSet::new([(0.0, 1.0)]).unwrap();
        let opts = LipOneOptions {
            radii: vec![0.25, 0.125, 0.0625],
            ..Default::default()
        };
        let (report, _) = check_lip_one_set(&f, &set, &opts).unwrap();
        assert_eq!(report.in_set, 65);
        assert_eq!(report.in_set_fraction, 1.0);
        assert!(report.far > 0);
        assert_eq!(report.far_fraction, 1.0);
        assert!(report.global_lipschitz <= 1.0);
        assert!(report.passes());
    }

    #[test]
    fn zero_function_on_empty_set() {
        let f =
            GridFunction::sample_1d(GridAxis::new(0.0, 1.0, 0.03125).unwrap(), |_| 0.0).unwrap();
        let set = IntervalSet::<f64>::empty();
        let (report, _) = check_lip_one_set(&f, &set, &LipOneOptions::default()).unwrap();
        assert_eq!(report.in_set, 0);
        assert_eq!(report.far, f.len());
        assert_eq!(report.far_fraction, 1.0);
        assert_eq!(report.global_lipschitz, 0.0);
    }

    #[test]
    fn isolated_point_fails_in_set_test() {
        let set = IntervalSet::new([(0.0, 0.0), (1.0, 2.0)]).unwrap();
        let f = GridFunction::sample_1d(GridAxis::new(-1.0, 3.0, 1.0 / 256.0).unwrap(), |t| {
            set.cumulative(t) - set.cumulative(0.0)
        })
        .unwrap();
        let opts = LipOneOptions {
            radii: vec![0.5, 0.25, 0.125, 0.0625, 0.03125],
            ..Default::default()
        };
        let (report, field) = check_lip_one_set(&f, &set, &opts).unwrap();
        let zero = f.nearest(&[0.0]).unwrap();
        assert!(report.in_set_failures.contains(&zero));
        assert_eq!(field.estimates[zero[0]].llip_final, 0.0);
        assert!(!report.passes());
    }
}
