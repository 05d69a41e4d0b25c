//! Per-point estimators for the local, big and little Lipschitz derivatives.
//!
//! For a radius `r` and a grid point `x`, with `B` the grid points `u` such
//! that `|u - x| <= r`:
//!
//! * local: `max |f(u) - f(v)| / |u - v|` over pairs `u != v` in `B`;
//! * big: `max |f(u) - f(x)| / |u - x|` over `u != x` in `B`;
//! * little: `max |f(u) - f(x)| / r` over `u` in `B`.
//!
//! The anchored pairs of the big estimator are a subset of the pairs of the
//! local one, and `|u - x| <= r`, so `little <= big <= local` holds at every
//! radius in floating point as well.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lipest::grid::GridFunction;
use crate::scalar::Real;

/// Radius sweep record at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipEstimate<T> {
    pub point: Vec<usize>,
    /// Strictly decreasing.
    pub radii: Vec<T>,
    pub llip_at_r: Vec<T>,
    pub big_lip_at_r: Vec<T>,
    pub little_lip_at_r: Vec<T>,
    /// Value at the smallest radius.
    pub llip_final: T,
    /// Value at the smallest radius.
    pub big_lip_final: T,
    /// Minimum over the sweep.
    pub little_lip_final: T,
}

impl<T: Real> LipEstimate<T> {
    pub(crate) fn assemble(
        point: Vec<usize>,
        radii: Vec<T>,
        llip: Vec<T>,
        big: Vec<T>,
        little: Vec<T>,
    ) -> Self {
        let last = radii.len() - 1;
        let little_final = little.iter().copied().fold(T::infinity(), T::min);
        Self {
            point,
            llip_final: llip[last],
            big_lip_final: big[last],
            little_lip_final: little_final,
            radii,
            llip_at_r: llip,
            big_lip_at_r: big,
            little_lip_at_r: little,
        }
    }

    /// `little <= big <= local` at every radius.
    pub fn ordering_holds(&self) -> bool {
        (0..self.radii.len()).all(|k| {
            self.little_lip_at_r[k] <= self.big_lip_at_r[k]
                && self.big_lip_at_r[k] <= self.llip_at_r[k]
        })
    }

    /// Local estimate never increases as the radius shrinks.
    pub fn llip_monotone(&self) -> bool {
        self.llip_at_r.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Values of one estimator across a radius sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepValues<T> {
    pub radii: Vec<T>,
    pub values: Vec<T>,
    pub final_value: T,
}

/// Geometric sweep `r_k = largest * 2^-k`, `k = 0..=steps`.
pub fn geometric_radii<T: Real>(largest: T, steps: usize) -> Vec<T> {
    let half = T::lit(0.5);
    let mut r = largest;
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        out.push(r);
        r = r * half;
    }
    out
}

/// Default sweep: largest radius a quarter of the domain diameter, halved
/// until the next halving would drop below four grid spacings.
pub fn default_radii<T: Real>(f: &GridFunction<T>) -> Vec<T> {
    let (lo, hi) = f.domain_box();
    let diameter = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (*b - *a) * (*b - *a))
        .fold(T::zero(), |s, v| s + v)
        .sqrt();
    let floor = T::lit(4.0) * f.max_spacing();
    let largest = (diameter / T::lit(4.0)).max(floor);
    let mut steps = 0;
    let mut r = largest;
    while r * T::lit(0.5) >= floor {
        r = r * T::lit(0.5);
        steps += 1;
    }
    geometric_radii(largest, steps)
}

pub(crate) fn validate_radii<T: Real>(f: &GridFunction<T>, radii: &[T]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidRadii("empty sweep".into()));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > T::zero())) {
        return Err(Error::InvalidRadii(
            "radii must be positive and finite".into(),
        ));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidRadii(
            "radii must be strictly decreasing".into(),
        ));
    }
    let smallest = radii[radii.len() - 1];
    if smallest < T::lit(2.0) * f.max_spacing() {
        return Err(Error::InvalidRadii(format!(
            "smallest radius {smallest} is below twice the grid spacing {}",
            f.max_spacing()
        )));
    }
    Ok(())
}

/// Grid offset from the centre of a ball.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Offset<T> {
    pub di: isize,
    pub dj: isize,
    pub dist: T,
}

/// Offsets within `radius` of the origin, sorted by distance (ties broken
/// lexicographically so the order is deterministic).
pub(crate) fn ball_offsets<T: Real>(f: &GridFunction<T>, radius: T) -> Vec<Offset<T>> {
    let span = |k: usize| (radius / f.spacing()[k]).floor().to_isize().unwrap_or(0) + 1;
    let wi = span(0);
    let wj = if f.dim() == 2 { span(1) } else { 0 };
    let mut out = Vec::new();
    for di in -wi..=wi {
        for dj in -wj..=wj {
            let dist = f.offset_distance(di.unsigned_abs(), dj.unsigned_abs());
            if dist <= radius {
                out.push(Offset { di, dj, dist });
            }
        }
    }
    out.sort_by(|a, b| {
        a.dist
            .partial_cmp(&b.dist)
            .unwrap()
            .then(a.di.cmp(&b.di))
            .then(a.dj.cmp(&b.dj))
    });
    out
}

struct Member<T> {
    value: T,
    di: isize,
    dj: isize,
    dist: T,
}

fn gather<T: Real>(f: &GridFunction<T>, point: &[usize], offsets: &[Offset<T>]) -> Vec<Member<T>> {
    let shape = f.shape();
    let (pi, pj) = (
        point[0] as isize,
        if f.dim() == 2 { point[1] as isize } else { 0 },
    );
    offsets
        .iter()
        .filter_map(|o| {
            let i = pi + o.di;
            let j = pj + o.dj;
            if i < 0 || i as usize >= shape[0] {
                return None;
            }
            if f.dim() == 2 && (j < 0 || j as usize >= shape[1]) {
                return None;
            }
            let flat = if f.dim() == 2 {
                i as usize * shape[1] + j as usize
            } else {
                i as usize
            };
            Some(Member {
                value: f.value(flat),
                di: o.di,
                dj: o.dj,
                dist: o.dist,
            })
        })
        .collect()
}

fn ball_counts<T: Real>(members: &[Member<T>], radii: &[T], point: &[usize]) -> Result<Vec<usize>> {
    radii
        .iter()
        .map(|&r| {
            let m = members.partition_point(|u| u.dist <= r);
            if m < 2 {
                Err(Error::SparseBall {
                    point: point.to_vec(),
                    radius: r.as_f64(),
                })
            } else {
                Ok(m)
            }
        })
        .collect()
}

/// Big and little sweeps at one point; `members` sorted by distance.
fn anchored<T: Real>(members: &[Member<T>], radii: &[T], counts: &[usize]) -> (Vec<T>, Vec<T>) {
    let centre = members[0].value;
    let m = counts[0];
    let mut big_pref = vec![T::zero(); m];
    let mut diff_pref = vec![T::zero(); m];
    for j in 1..m {
        let diff = (members[j].value - centre).abs();
        big_pref[j] = big_pref[j - 1].max(diff / members[j].dist);
        diff_pref[j] = diff_pref[j - 1].max(diff);
    }
    let big = counts.iter().map(|&c| big_pref[c - 1]).collect();
    let little = counts
        .iter()
        .zip(radii)
        .map(|(&c, &r)| diff_pref[c - 1] / r)
        .collect();
    (big, little)
}

/// Full sweep at one point using precomputed offsets for the largest radius.
pub(crate) fn sweep_point<T: Real>(
    f: &GridFunction<T>,
    point: &[usize],
    radii: &[T],
    offsets: &[Offset<T>],
) -> Result<LipEstimate<T>> {
    let members = gather(f, point, offsets);
    let counts = ball_counts(&members, radii, point)?;
    let m = counts[0];

    // llip_pref[j] = max ratio over pairs among members[..=j]
    let mut llip_pref = vec![T::zero(); m];
    for j in 1..m {
        let (vj, dij, djj) = (members[j].value, members[j].di, members[j].dj);
        let mut row = T::zero();
        for u in &members[..j] {
            let d = f.offset_distance((dij - u.di).unsigned_abs(), (djj - u.dj).unsigned_abs());
            let q = (vj - u.value).abs() / d;
            if q > row {
                row = q;
            }
        }
        llip_pref[j] = llip_pref[j - 1].max(row);
    }
    let llip = counts.iter().map(|&c| llip_pref[c - 1]).collect();
    let (big, little) = anchored(&members, radii, &counts);
    Ok(LipEstimate::assemble(
        point.to_vec(),
        radii.to_vec(),
        llip,
        big,
        little,
    ))
}

fn checked_point<T: Real>(f: &GridFunction<T>, point: &[usize]) -> Result<()> {
    f.flat_index(point)
        .map(|_| ())
        .ok_or_else(|| Error::InvalidGrid(format!("point {point:?} outside grid {:?}", f.shape())))
}

/// Local Lipschitz sweep at `point`, with the big and little sweeps filled
/// in from the same balls.
pub fn llip_estimate<T: Real>(
    f: &GridFunction<T>,
    point: &[usize],
    radii: &[T],
) -> Result<LipEstimate<T>> {
    validate_radii(f, radii)?;
    checked_point(f, point)?;
    let offsets = ball_offsets(f, radii[0]);
    sweep_point(f, point, radii, &offsets)
}

fn anchored_sweep<T: Real>(
    f: &GridFunction<T>,
    point: &[usize],
    radii: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    validate_radii(f, radii)?;
    checked_point(f, point)?;
    let offsets = ball_offsets(f, radii[0]);
    let members = gather(f, point, &offsets);
    let counts = ball_counts(&members, radii, point)?;
    Ok(anchored(&members, radii, &counts))
}

/// Big Lipschitz sweep; the final value is the one at the smallest radius.
pub fn big_lip_estimate<T: Real>(
    f: &GridFunction<T>,
    point: &[usize],
    radii: &[T],
) -> Result<SweepValues<T>> {
    let (big, _) = anchored_sweep(f, point, radii)?;
    Ok(SweepValues {
        radii: radii.to_vec(),
        final_value: big[big.len() - 1],
        values: big,
    })
}

/// Little Lipschitz sweep; the final value is the minimum over the sweep.
pub fn little_lip_estimate<T: Real>(
    f: &GridFunction<T>,
    point: &[usize],
    radii: &[T],
) -> Result<SweepValues<T>> {
    let (_, little) = anchored_sweep(f, point, radii)?;
    Ok(SweepValues {
        radii: radii.to_vec(),
        final_value: little.iter().copied().fold(T::infinity(), T::min),
        values: little,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipest::grid::GridAxis;

    fn line(lo: f64, hi: f64, h: f64, f: impl Fn(f64) -> f64 + Sync) -> GridFunction<f64> {
        GridFunction::sample_1d(GridAxis::new(lo, hi, h).unwrap(), f).unwrap()
    }

    /// Exhaustive enumeration over all pairs in the closed ball.
    fn brute_llip(f: &GridFunction<f64>, x: usize, r: f64) -> f64 {
        let h = f.spacing()[0];
        let ball: Vec<usize> = (0..f.len())
            .filter(|&u| (u as f64 - x as f64).abs() * h <= r)
            .collect();
        let mut best: f64 = 0.0;
        for &u in &ball {
            for &v in &ball {
                if u != v {
                    let d = (u as f64 - v as f64).abs() * h;
                    best = best.max((f.value(u) - f.value(v)).abs() / d);
                }
            }
        }
        best
    }

    #[test]
    fn linear_function_has_unit_estimates() {
        let f = line(0.0, 1.0, 0.0625, |t| t);
        let e = llip_estimate(&f, &[8], &[0.5, 0.25, 0.125]).unwrap();
        assert_eq!(e.llip_at_r, vec![1.0; 3]);
        assert_eq!(e.big_lip_at_r, vec![1.0; 3]);
        assert_eq!(e.llip_final, 1.0);
        assert_eq!(e.little_lip_final, 1.0);
    }

    #[test]
    fn constant_function_has_zero_estimates() {
        let f = line(0.0, 1.0, 0.0625, |_| 3.5);
        let e = llip_estimate(&f, &[8], &[0.5, 0.25]).unwrap();
        assert_eq!(e.llip_final, 0.0);
        assert_eq!(e.big_lip_final, 0.0);
        assert_eq!(e.little_lip_final, 0.0);
    }

    #[test]
    fn abs_at_origin_matches_brute_force() {
        // 21-point grid on [-1, 1].
        let f = line(-1.0, 1.0, 0.1, f64::abs);
        let radii = [0.5, 0.2];
        let e = llip_estimate(&f, &[10], &radii).unwrap();
        for (k, &r) in radii.iter().enumerate() {
            assert_eq!(e.llip_at_r[k], brute_llip(&f, 10, r));
        }
        assert!((e.llip_final - 1.0).abs() < 1e-12);
        let little = little_lip_estimate(&f, &[10], &radii).unwrap();
        for v in &little.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn square_big_lip_grows_with_radius() {
        let f = line(-1.0, 1.0, 0.0625, |t| t * t);
        let radii = [0.5, 0.25, 0.125];
        let big = big_lip_estimate(&f, &[16], &radii).unwrap();
        assert_eq!(big.values, vec![0.5, 0.25, 0.125]);
        assert_eq!(big.final_value, 0.125);
    }

    #[test]
    fn clipped_ball_at_grid_edge() {
        let f = line(0.0, 1.0, 0.125, |t| 2.0 * t);
        let e = llip_estimate(&f, &[0], &[0.5, 0.25]).unwrap();
        assert_eq!(e.llip_final, 2.0);
    }

    #[test]
    fn radius_validation() {
        let f = line(0.0, 1.0, 0.125, |t| t);
        assert!(matches!(
            llip_estimate(&f, &[0], &[]),
            Err(Error::InvalidRadii(_))
        ));
        assert!(llip_estimate(&f, &[0], &[0.25, 0.5]).is_err());
        assert!(llip_estimate(&f, &[0], &[0.5, 0.125]).is_err());
        assert!(llip_estimate(&f, &[0], &[0.5, -1.0]).is_err());
        assert!(llip_estimate(&f, &[9], &[0.5]).is_err());
    }

    #[test]
    fn sparse_ball_is_rejected() {
        let f = GridFunction::from_parts(vec![0.0], vec![1.0], vec![1], vec![0.0]).unwrap();
        assert!(matches!(
            llip_estimate(&f, &[0], &[2.0]),
            Err(Error::SparseBall { .. })
        ));
    }

    #[test]
    fn default_sweep_ends_near_four_spacings() {
        let f = line(-0.25, 1.25, 1.0 / 1024.0, |t| t);
        let radii = default_radii(&f);
        assert_eq!(radii[0], 0.375);
        let last = *radii.last().unwrap();
        assert!((4.0 / 1024.0..8.0 / 1024.0).contains(&last));
    }

    #[test]
    fn two_dimensional_cone() {
        let ax = GridAxis::new(-1.0f64, 1.0, 0.125).unwrap();
        let f =
            GridFunction::sample_2d(ax, ax, |p| 1.0 - (p[0] * p[0] + p[1] * p[1]).sqrt()).unwrap();
        let centre = f.nearest(&[0.0, 0.0]).unwrap();
        let e = llip_estimate(&f, &centre, &[0.5, 0.25]).unwrap();
        assert!((e.llip_final - 1.0).abs() < 1e-12);
        assert!((e.big_lip_final - 1.0).abs() < 1e-12);
        assert!(e.ordering_holds());
    }
}
