//! Planar sets used by the packing, rasterization and verification code.

use crate::error::{Error, Result};
use crate::realsets::{IntervalSet, LineSet, Membership};
use crate::scalar::Real;

pub type Point2<T> = [T; 2];

#[inline]
pub fn norm2<T: Real>(p: Point2<T>) -> T {
    (p[0] * p[0] + p[1] * p[1]).sqrt()
}

#[inline]
pub fn dist2<T: Real>(a: Point2<T>, b: Point2<T>) -> T {
    norm2([a[0] - b[0], a[1] - b[1]])
}

/// Euclidean distance from a point to a fixed set. Points are slices of
/// length [`SetDistance::dim`].
pub trait SetDistance<T>: Sync {
    fn dim(&self) -> usize;
    fn distance(&self, p: &[T]) -> T;
}

impl<T: Real> SetDistance<T> for IntervalSet<T> {
    fn dim(&self) -> usize {
        1
    }
    fn distance(&self, p: &[T]) -> T {
        IntervalSet::distance(self, p[0])
    }
}

impl<T: Real> SetDistance<T> for LineSet<T> {
    fn dim(&self) -> usize {
        1
    }
    fn distance(&self, p: &[T]) -> T {
        LineSet::distance(self, p[0])
    }
}

/// Closed region in the plane with interior-depth queries, as needed by the
/// greedy ball packing.
pub trait Region<T>: Sync {
    /// Axis-aligned box containing the region.
    fn bounds(&self) -> (Point2<T>, Point2<T>);
    fn contains(&self, p: Point2<T>) -> bool;
    /// Distance from `p` to the complement of the interior; zero when `p` is
    /// not an interior point.
    fn depth(&self, p: Point2<T>) -> T;
}

/// Closed set that can be rasterized by pixel-centre sampling.
pub trait Rasterizable<T>: Sync {
    fn bounds(&self) -> (Point2<T>, Point2<T>);
    fn contains(&self, p: Point2<T>) -> bool;
    /// Fails when pixels of size `1 / resolution`, with edges on the lattice
    /// `origin + k / resolution`, would lose a component of the set or of
    /// its complement.
    fn check_resolution(&self, origin: Point2<T>, resolution: usize) -> Result<()>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisBox<T> {
    pub lo: Point2<T>,
    pub hi: Point2<T>,
}

impl<T: Real> AxisBox<T> {
    pub fn unit() -> Self {
        Self {
            lo: [T::zero(); 2],
            hi: [T::one(); 2],
        }
    }
}

impl<T: Real> Region<T> for AxisBox<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        (self.lo, self.hi)
    }
    fn contains(&self, p: Point2<T>) -> bool {
        (0..2).all(|k| self.lo[k] <= p[k] && p[k] <= self.hi[k])
    }
    fn depth(&self, p: Point2<T>) -> T {
        let d = (0..2)
            .map(|k| (p[k] - self.lo[k]).min(self.hi[k] - p[k]))
            .fold(T::infinity(), T::min);
        d.max(T::zero())
    }
}

impl<T: Real> SetDistance<T> for AxisBox<T> {
    fn dim(&self) -> usize {
        2
    }
    fn distance(&self, p: &[T]) -> T {
        let dx = (self.lo[0] - p[0]).max(p[0] - self.hi[0]).max(T::zero());
        let dy = (self.lo[1] - p[1]).max(p[1] - self.hi[1]).max(T::zero());
        norm2([dx, dy])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk<T> {
    pub center: Point2<T>,
    pub radius: T,
}

impl<T: Real> Region<T> for Disk<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let r = self.radius;
        (
            [self.center[0] - r, self.center[1] - r],
            [self.center[0] + r, self.center[1] + r],
        )
    }
    fn contains(&self, p: Point2<T>) -> bool {
        dist2(p, self.center) <= self.radius
    }
    fn depth(&self, p: Point2<T>) -> T {
        (self.radius - dist2(p, self.center)).max(T::zero())
    }
}

/// Closed annulus `inner <= |p - center| <= outer`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus<T> {
    pub center: Point2<T>,
    pub inner: T,
    pub outer: T,
}

impl<T: Real> Region<T> for Annulus<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let r = self.outer;
        (
            [self.center[0] - r, self.center[1] - r],
            [self.center[0] + r, self.center[1] + r],
        )
    }
    fn contains(&self, p: Point2<T>) -> bool {
        let d = dist2(p, self.center);
        self.inner <= d && d <= self.outer
    }
    fn depth(&self, p: Point2<T>) -> T {
        let d = dist2(p, self.center);
        (d - self.inner).min(self.outer - d).max(T::zero())
    }
}

impl<T: Real> Rasterizable<T> for Annulus<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        Region::bounds(self)
    }
    fn contains(&self, p: Point2<T>) -> bool {
        Region::contains(self, p)
    }
    fn check_resolution(&self, _origin: Point2<T>, resolution: usize) -> Result<()> {
        let pixel = T::one() / T::count(resolution);
        let two = T::lit(2.0);
        if two * pixel > self.outer - self.inner || two * pixel > self.inner {
            return Err(Error::Unresolved {
                resolution,
                reason: "pixel size exceeds half the ring width or half the hole radius".into(),
            });
        }
        Ok(())
    }
}

/// Closed segment; a set with empty interior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Real> Segment<T> {
    pub fn distance(&self, p: Point2<T>) -> T {
        let d = [self.b[0] - self.a[0], self.b[1] - self.a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let t = if len2 > T::zero() {
            (((p[0] - self.a[0]) * d[0] + (p[1] - self.a[1]) * d[1]) / len2)
                .max(T::zero())
                .min(T::one())
        } else {
            T::zero()
        };
        dist2(p, [self.a[0] + t * d[0], self.a[1] + t * d[1]])
    }
}

impl<T: Real> Region<T> for Segment<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        (
            [self.a[0].min(self.b[0]), self.a[1].min(self.b[1])],
            [self.a[0].max(self.b[0]), self.a[1].max(self.b[1])],
        )
    }
    fn contains(&self, p: Point2<T>) -> bool {
        self.distance(p) == T::zero()
    }
    fn depth(&self, _p: Point2<T>) -> T {
        T::zero()
    }
}

/// Product `X × Y` of two closed subsets of the line.
#[derive(Clone, Debug)]
pub struct ProductSet<T> {
    pub x: LineSet<T>,
    pub y: LineSet<T>,
}

impl<T: Real> ProductSet<T> {
    pub fn new(x: LineSet<T>, y: LineSet<T>) -> Self {
        Self { x, y }
    }

    /// `F × F`.
    pub fn square(f: LineSet<T>) -> Self {
        Self { x: f.clone(), y: f }
    }
}

impl<T: Real> SetDistance<T> for ProductSet<T> {
    fn dim(&self) -> usize {
        2
    }
    fn distance(&self, p: &[T]) -> T {
        norm2([self.x.distance(p[0]), self.y.distance(p[1])])
    }
}

fn line_bounds<T: Real>(s: &LineSet<T>) -> (T, T) {
    match s {
        LineSet::Intervals(iv) => match (iv.intervals().first(), iv.intervals().last()) {
            (Some(a), Some(b)) => (a.lo, b.hi),
            _ => (T::zero(), T::zero()),
        },
        LineSet::Cantor { .. } => (T::zero(), T::one()),
    }
}

/// Checks that every interval and every bounded gap of `set` contains at
/// least one pixel centre `origin + (i + 1/2) / resolution`.
pub fn check_axis_resolution<T: Real>(
    set: &IntervalSet<T>,
    origin: T,
    resolution: usize,
) -> Result<()> {
    let pixel = T::one() / T::count(resolution);
    let half = T::lit(0.5);
    let centre = |i: T| origin + (i + half) * pixel;
    for iv in set.intervals() {
        let mut i = ((iv.lo - origin) / pixel - half).ceil();
        if centre(i) < iv.lo {
            i = i + T::one();
        }
        if centre(i) > iv.hi {
            return Err(Error::Unresolved {
                resolution,
                reason: format!("interval [{}, {}] holds no pixel centre", iv.lo, iv.hi),
            });
        }
    }
    for (a, b) in set.gaps() {
        let mut i = ((a - origin) / pixel - half).floor();
        while centre(i) <= a {
            i = i + T::one();
        }
        if centre(i) >= b {
            return Err(Error::Unresolved {
                resolution,
                reason: format!("gap ({a}, {b}) holds no pixel centre"),
            });
        }
    }
    Ok(())
}

impl<T: Real> Rasterizable<T> for ProductSet<T> {
    fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let (x0, x1) = line_bounds(&self.x);
        let (y0, y1) = line_bounds(&self.y);
        ([x0, y0], [x1, y1])
    }
    fn contains(&self, p: Point2<T>) -> bool {
        self.x.membership(p[0]) != Membership::Out && self.y.membership(p[1]) != Membership::Out
    }
    fn check_resolution(&self, origin: Point2<T>, resolution: usize) -> Result<()> {
        for (axis, set) in [&self.x, &self.y].into_iter().enumerate() {
            let stage_set = match set {
                LineSet::Intervals(s) => s.clone(),
                LineSet::Cantor { set, stage } => set.stage(*stage)?,
            };
            check_axis_resolution(&stage_set, origin[axis], resolution)?;
        }
        Ok(())
    }
}

/// `{a in R^2 : |a| in F}` for a closed `F ⊆ [0, ∞)`.
#[derive(Clone, Debug)]
pub struct RadialSet<T> {
    pub profile: LineSet<T>,
}

impl<T: Real> SetDistance<T> for RadialSet<T> {
    fn dim(&self) -> usize {
        2
    }
    fn distance(&self, p: &[T]) -> T {
        self.profile.distance(norm2([p[0], p[1]]))
    }
}
