use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A closed interval `[lo, hi]`. `lo == hi` is an isolated point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite(format!("interval endpoint [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::ReversedInterval {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Finite union of pairwise disjoint closed intervals, sorted by `lo`.
///
/// Neighbouring intervals never touch: `hi_i < lo_{i+1}`. Point intervals are
/// kept, so sets such as `{0} ∪ [1, 2]` are representable.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<T> {
    intervals: Vec<Interval<T>>,
    // prefix[k] = total length of intervals[..k]
    prefix: Vec<T>,
}

impl<T: Real> Default for IntervalSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Real> IntervalSet<T> {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            prefix: vec![T::zero()],
        }
    }

    /// Normalizes a list of raw `(lo, hi)` pairs: sorts, then merges
    /// overlapping and touching intervals.
    pub fn new<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, T)>,
    {
        let mut items = raw
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        items.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));

        let mut merged: Vec<Interval<T>> = Vec::with_capacity(items.len());
        for iv in items {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Ok(Self::from_normalized(merged))
    }

    /// Builds from intervals already sorted and separated by gaps.
    pub(crate) fn from_normalized(intervals: Vec<Interval<T>>) -> Self {
        debug_assert!(intervals.windows(2).all(|w| w[0].hi < w[1].lo));
        debug_assert!(intervals.iter().all(|iv| iv.lo <= iv.hi));
        let mut prefix = Vec::with_capacity(intervals.len() + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for iv in &intervals {
            acc = acc + iv.length();
            prefix.push(acc);
        }
        Self { intervals, prefix }
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure: the sum of interval lengths.
    pub fn measure(&self) -> T {
        self.prefix[self.intervals.len()]
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if a[i].lo > b[j].lo { a[i].lo } else { b[j].lo };
            let hi = if a[i].hi < b[j].hi { a[i].hi } else { b[j].hi };
            if lo <= hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two separated families cannot touch each other except
        // through a shared endpoint, which the merge below handles.
        Self::merge_sorted(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all: Vec<Interval<T>> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .copied()
            .collect();
        all.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
        Self::merge_sorted(all)
    }

    fn merge_sorted(items: Vec<Interval<T>>) -> Self {
        let mut merged: Vec<Interval<T>> = Vec::with_capacity(items.len());
        for iv in items {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self::from_normalized(merged)
    }

    /// Index of the last interval with `lo <= x`, if any.
    fn locate(&self, x: T) -> Option<usize> {
        let k = self.intervals.partition_point(|iv| iv.lo <= x);
        k.checked_sub(1)
    }

    pub fn contains(&self, x: T) -> bool {
        self.locate(x)
            .map(|k| x <= self.intervals[k].hi)
            .unwrap_or(false)
    }

    /// Euclidean distance from `x` to the set; `+inf` for the empty set.
    pub fn distance(&self, x: T) -> T {
        if self.intervals.is_empty() {
            return T::infinity();
        }
        let k = self.intervals.partition_point(|iv| iv.lo <= x);
        let mut best = T::infinity();
        if k > 0 {
            let iv = self.intervals[k - 1];
            let d = if x <= iv.hi { T::zero() } else { x - iv.hi };
            best = best.min(d);
        }
        if k < self.intervals.len() {
            best = best.min(self.intervals[k].lo - x);
        }
        best
    }

    /// `ℓ((-∞, x] ∩ A)`.
    pub fn cumulative(&self, x: T) -> T {
        match self.locate(x) {
            None => T::zero(),
            Some(k) => {
                let iv = self.intervals[k];
                let top = if x < iv.hi { x } else { iv.hi };
                self.prefix[k] + (top - iv.lo)
            }
        }
    }

    /// `ℓ([u, v] ∩ A)` via prefix sums. Returns zero when `v <= u`.
    pub fn window_measure(&self, u: T, v: T) -> T {
        if v <= u {
            return T::zero();
        }
        let m = self.cumulative(v) - self.cumulative(u);
        if m < T::zero() {
            T::zero()
        } else {
            m
        }
    }

    /// Bounded open gaps between consecutive intervals, as `(hi_i, lo_{i+1})`.
    pub fn gaps(&self) -> Vec<(T, T)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].hi, w[1].lo))
            .collect()
    }

    /// The set with all isolated points removed.
    pub fn without_points(&self) -> Self {
        Self::from_normalized(
            self.intervals
                .iter()
                .filter(|iv| !iv.is_point())
                .copied()
                .collect(),
        )
    }

    /// `true` when every interval of `self` lies inside some interval of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intervals.iter().all(|iv| {
            other
                .locate(iv.lo)
                .map(|k| iv.hi <= other.intervals[k].hi)
                .unwrap_or(false)
        })
    }

    pub fn to_pairs(&self) -> Vec<(T, T)> {
        self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(raw: &[(f64, f64)]) -> IntervalSet<f64> {
        IntervalSet::new(raw.iter().copied()).unwrap()
    }

    #[test]
    fn overlapping_union_merges() {
        assert_eq!(set(&[(0.0, 1.0), (0.5, 2.0)]).to_pairs(), vec![(0.0, 2.0)]);
    }

    #[test]
    fn touching_intervals_merge() {
        assert_eq!(set(&[(1.0, 2.0), (0.0, 1.0)]).to_pairs(), vec![(0.0, 2.0)]);
    }

    #[test]
    fn separated_intervals_kept() {
        let a = set(&[(0.0, 0.25), (0.75, 1.0)]);
        assert_eq!(a.to_pairs(), vec![(0.0, 0.25), (0.75, 1.0)]);
        assert_eq!(a.measure(), 0.5);
    }

    #[test]
    fn rejects_reversed_and_non_finite() {
        assert!(matches!(
            IntervalSet::new([(1.0, 0.0)]),
            Err(Error::ReversedInterval { .. })
        ));
        assert!(matches!(
            IntervalSet::new([(0.0, f64::NAN)]),
            Err(Error::NonFinite(_))
        ));
        assert!(IntervalSet::new([(f64::NEG_INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn intersections() {
        let a = set(&[(0.0, 1.0)]);
        assert_eq!(
            a.intersect(&set(&[(0.5, 2.0)])).to_pairs(),
            vec![(0.5, 1.0)]
        );
        assert!(a.intersect(&IntervalSet::empty()).is_empty());

        let b = set(&[(0.0, 0.25), (0.75, 1.0)]);
        let c = b.intersect(&set(&[(0.2, 0.8)]));
        assert_eq!(c.to_pairs(), vec![(0.2, 0.25), (0.75, 0.8)]);
        assert!((c.measure() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn intersection_at_shared_endpoint_is_a_point() {
        let c = set(&[(0.0, 1.0)]).intersect(&set(&[(1.0, 2.0)]));
        assert_eq!(c.to_pairs(), vec![(1.0, 1.0)]);
        assert_eq!(c.measure(), 0.0);
    }

    #[test]
    fn measure_of_empty_and_unit() {
        assert_eq!(IntervalSet::<f64>::empty().measure(), 0.0);
        assert_eq!(set(&[(0.0, 1.0)]).measure(), 1.0);
    }

    #[test]
    fn points_are_kept_with_zero_measure() {
        let a = set(&[(0.0, 0.0), (1.0, 2.0)]);
        assert_eq!(a.len(), 2);
        assert_eq!(a.measure(), 1.0);
        assert!(a.contains(0.0));
        assert!(!a.contains(0.5));
        assert_eq!(a.without_points().to_pairs(), vec![(1.0, 2.0)]);
    }

    #[test]
    fn distance_and_cumulative() {
        let a = set(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(a.distance(1.5), 0.5);
        assert_eq!(a.distance(-1.0), 1.0);
        assert_eq!(a.distance(2.5), 0.0);
        assert_eq!(IntervalSet::<f64>::empty().distance(0.0), f64::INFINITY);
        assert_eq!(a.cumulative(-1.0), 0.0);
        assert_eq!(a.cumulative(0.5), 0.5);
        assert_eq!(a.cumulative(1.7), 1.0);
        assert_eq!(a.cumulative(2.5), 1.5);
        assert_eq!(a.window_measure(0.5, 2.5), 1.0);
    }

    #[test]
    fn gaps_and_subsets() {
        let a = set(&[(0.0, 1.0), (2.0, 3.0), (4.0, 4.0)]);
        assert_eq!(a.gaps(), vec![(1.0, 2.0), (3.0, 4.0)]);
        assert!(set(&[(0.25, 0.5), (2.0, 2.5)]).is_subset_of(&a));
        assert!(!set(&[(0.5, 1.5)]).is_subset_of(&a));
    }

    #[test]
    fn works_in_single_precision() {
        let a = IntervalSet::<f32>::new([(0.0f32, 0.5), (0.25, 1.0)]).unwrap();
        assert_eq!(a.to_pairs(), vec![(0.0f32, 1.0)]);
    }
}
