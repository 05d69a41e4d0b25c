//! Greedy disjoint packing of a regular closed planar set by basis balls.

use rayon::prelude::*;
use serde::Serialize;

use crate::constructors::tent::{Ball, BallFamily};
use crate::plane::Region;
use crate::scalar::Real;

/// Basis of balls `B(c, 1/k)` for `k = 1..=max_k`, with centres on the
/// lattice `(1 / (refine * k)) Z^2` inside the region's bounding box.
/// Enumeration is by decreasing radius, then lexicographic centre.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BasisSpec {
    pub max_k: usize,
    pub refine: usize,
}

impl Default for BasisSpec {
    fn default() -> Self {
        Self {
            max_k: 4096,
            refine: 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Packing<T> {
    pub family: BallFamily<T>,
    /// Basis balls examined before stopping.
    pub examined: u64,
    /// Largest `k` reached.
    pub last_k: usize,
    /// Set when nothing could be placed.
    pub diagnostic: Option<String>,
}

/// Accepts, in basis order, each ball that lies in the interior of `region`
/// (depth at the centre at least the radius) and misses every ball accepted
/// so far. Stops after `budget` balls or when the basis is exhausted.
///
/// Each lattice column skips the centres that an accepted ball blocks with a
/// margin of one lattice step; every other centre gets the exact test.
pub fn pack_regular_closed<T: Real>(
    region: &dyn Region<T>,
    basis: BasisSpec,
    budget: usize,
) -> Packing<T> {
    let (lo, hi) = region.bounds();
    let mut family = BallFamily::empty(2);
    let mut examined = 0u64;
    let mut last_k = 0;
    'outer: for k in 1..=basis.max_k {
        if family.len() >= budget {
            break;
        }
        last_k = k;
        let r = T::one() / T::count(k);
        let steps = T::count(basis.refine * k);
        let step = T::one() / steps;
        let first = |a: T| (a * steps).ceil().to_i64().unwrap_or(0);
        let last = |b: T| (b * steps).floor().to_i64().unwrap_or(-1);
        // Columns of constant x are swept in order; within a column, y rises.
        let (ilo, ihi) = (first(lo[0]), last(hi[0]));
        let (jlo, jhi) = (first(lo[1]), last(hi[1]));
        if ilo > ihi || jlo > jhi {
            continue;
        }
        let ncols = (ihi - ilo + 1) as usize;
        // cols[i - ilo]: balls whose blocking band reaches column i.
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols];
        let add = |cols: &mut Vec<Vec<usize>>, id: usize, b: &Ball<T>, from: i64| {
            let reach = b.radius + r;
            let a = first(b.center[0] - reach).max(from).max(ilo);
            let z = last(b.center[0] + reach).min(ihi);
            for i in a..=z {
                cols[(i - ilo) as usize].push(id);
            }
        };
        for (id, b) in family.balls().iter().enumerate() {
            add(&mut cols, id, b, ilo);
        }
        let mut blocked: Vec<(i64, i64)> = Vec::new();
        for i in ilo..=ihi {
            let cx = T::lit(i as f64) / steps;
            blocked.clear();
            for &id in &cols[(i - ilo) as usize] {
                let b = &family.balls()[id];
                let dx = cx - b.center[0];
                let t = (b.radius + r) * (b.radius + r) - dx * dx;
                if t <= T::zero() {
                    continue;
                }
                let half = t.sqrt() - step;
                if half <= T::zero() {
                    continue;
                }
                let a = first(b.center[1] - half).max(jlo);
                let z = last(b.center[1] + half).min(jhi);
                if a <= z {
                    blocked.push((a, z));
                }
            }
            blocked.sort_unstable();
            let mut j = jlo;
            let mut next = 0;
            while j <= jhi {
                while next < blocked.len() && blocked[next].1 < j {
                    next += 1;
                }
                if next < blocked.len() && blocked[next].0 <= j {
                    j = blocked[next].1 + 1;
                    continue;
                }
                let c = [cx, T::lit(j as f64) / steps];
                if region.depth(c) >= r && family.fits(c, r) {
                    let id = family.len();
                    let ball = Ball::new(c.to_vec(), r);
                    family
                        .push(ball.clone())
                        .expect("fits() checked disjointness");
                    if family.len() >= budget {
                        examined += (j - jlo + 1) as u64;
                        break 'outer;
                    }
                    add(&mut cols, id, &ball, i + 1);
                }
                j += 1;
            }
            examined += (jhi - jlo + 1) as u64;
        }
    }
    let diagnostic = family.is_empty().then(|| {
        format!(
            "no basis ball with k <= {} fits inside the interior; the set may have empty interior",
            basis.max_k
        )
    });
    Packing {
        family,
        examined,
        last_k,
        diagnostic,
    }
}

/// Area of `region` not covered by the family, estimated by pixel-centre
/// sampling at `per_unit` pixels per unit length over the region's bounds.
pub fn coverage_deficit<T: Real>(
    region: &dyn Region<T>,
    family: &BallFamily<T>,
    per_unit: usize,
) -> T {
    let (lo, hi) = region.bounds();
    let px = T::one() / T::count(per_unit);
    let nx = ((hi[0] - lo[0]) / px).ceil().to_usize().unwrap_or(0);
    let ny = ((hi[1] - lo[1]) / px).ceil().to_usize().unwrap_or(0);
    let half = T::lit(0.5);
    let uncovered: usize = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = lo[0] + (T::count(i) + half) * px;
            (0..ny)
                .filter(|&j| {
                    let p = [x, lo[1] + (T::count(j) + half) * px];
                    region.contains(p) && family.containing(&p).is_none()
                })
                .count()
        })
        .sum();
    T::count(uncovered) * px * px
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{AxisBox, Disk, Segment};

    /// Plain enumeration of every basis ball.
    fn pack_exhaustive(
        region: &dyn Region<f64>,
        basis: BasisSpec,
        budget: usize,
    ) -> Vec<Ball<f64>> {
        let (lo, hi) = region.bounds();
        let mut family = BallFamily::empty(2);
        for k in 1..=basis.max_k {
            let r = 1.0 / k as f64;
            let steps = (basis.refine * k) as f64;
            for i in (lo[0] * steps).ceil() as i64..=(hi[0] * steps).floor() as i64 {
                for j in (lo[1] * steps).ceil() as i64..=(hi[1] * steps).floor() as i64 {
                    let c = [i as f64 / steps, j as f64 / steps];
                    if family.len() < budget && region.depth(c) >= r && family.fits(c, r) {
                        family.push(Ball::new(c.to_vec(), r)).unwrap();
                    }
                }
            }
        }
        family.balls().to_vec()
    }

    #[test]
    fn row_skipping_matches_exhaustive_enumeration() {
        let disk = Disk {
            center: [0.3, -0.2],
            radius: 0.9,
        };
        let basis = BasisSpec {
            max_k: 200,
            refine: 2,
        };
        for budget in [1, 7, 60] {
            let fast = pack_regular_closed(&AxisBox::unit(), basis, budget);
            assert_eq!(
                fast.family.balls(),
                pack_exhaustive(&AxisBox::unit(), basis, budget),
                "box {budget}"
            );
            let fast = pack_regular_closed(&disk, basis, budget);
            assert_eq!(
                fast.family.balls(),
                pack_exhaustive(&disk, basis, budget),
                "disk {budget}"
            );
        }
    }

    #[test]
    fn disk_budget_one() {
        let disk = Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        };
        let p = pack_regular_closed(&disk, BasisSpec::default(), 1);
        assert_eq!(p.family.len(), 1);
        let ball = &p.family.balls()[0];
        assert_eq!(ball.radius, 1.0);
        let deficit = coverage_deficit(&disk, &p.family, 256);
        assert!(deficit < std::f64::consts::PI);
    }

    #[test]
    fn segment_has_no_packing() {
        let seg = Segment {
            a: [0.0, 0.0],
            b: [1.0, 1.0],
        };
        let p = pack_regular_closed(
            &seg,
            BasisSpec {
                max_k: 32,
                refine: 2,
            },
            10,
        );
        assert!(p.family.is_empty());
        assert!(p.diagnostic.is_some());
    }

    #[test]
    fn square_packing_is_disjoint_and_inside() {
        let sq = AxisBox::<f64>::unit();
        let p = pack_regular_closed(&sq, BasisSpec::default(), 100);
        assert_eq!(p.family.len(), 100);
        let balls = p.family.balls();
        for (i, a) in balls.iter().enumerate() {
            assert!(sq.depth([a.center[0], a.center[1]]) >= a.radius);
            for b in &balls[i + 1..] {
                let d = ((a.center[0] - b.center[0]).powi(2) + (a.center[1] - b.center[1]).powi(2))
                    .sqrt();
                assert!(d >= a.radius + b.radius);
            }
        }
        // Largest ball first.
        assert_eq!(balls[0].radius, 0.5);
    }
}
