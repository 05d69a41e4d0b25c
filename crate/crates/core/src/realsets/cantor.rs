//! Symmetric fat Cantor sets.
//!
//! Stage 0 is `[0, 1]`. Stage `n` is obtained from stage `n - 1` by removing
//! the centred open gap of length `alpha_n` from each of its `2^(n-1)`
//! intervals, which leaves `2^n` closed intervals of common length
//! `L_n = (L_(n-1) - alpha_n) / 2`. The limit set has measure
//! `1 - sum_n 2^(n-1) alpha_n`, and each stage-`n` interval carries exactly
//! `2^-n` of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realsets::interval_set::{Interval, IntervalSet};
use crate::scalar::{pow2_neg, Real};

/// Deepest stage supported by exact queries. Integer unit counts stay below
/// 2^52 so converting them to `f64` is lossless.
pub const MAX_STAGE: usize = 52;

/// Closed-form tail of a gap sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", bound = "T: Real")]
pub enum TailRule<T> {
    /// `alpha_n = c * q^(n-1)`.
    Geometric { c: T, q: T },
}

/// Gap-length sequence `alpha_1, alpha_2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", bound = "T: Real")]
pub enum AlphaRule<T> {
    /// `alpha_n = c * q^(n-1)` for every `n >= 1`.
    Geometric { c: T, q: T },
    /// Explicit `alpha_1..alpha_P`, followed by an optional closed-form tail
    /// for `n > P`. Without a tail the sequence is only defined up to `P`, and
    /// measure queries on the limit set are refused.
    Prefix {
        values: Vec<T>,
        #[serde(default)]
        tail: Option<TailRule<T>>,
    },
}

impl<T: Real> AlphaRule<T> {
    pub fn geometric(c: T, q: T) -> Self {
        AlphaRule::Geometric { c, q }
    }

    /// `alpha_n`, or `None` past the end of a tail-less prefix.
    pub fn alpha(&self, n: usize) -> Option<T> {
        assert!(n >= 1, "gap index starts at 1");
        match self {
            AlphaRule::Geometric { c, q } => Some(*c * q.powi(n as i32 - 1)),
            AlphaRule::Prefix { values, tail } => match values.get(n - 1) {
                Some(v) => Some(*v),
                None => tail
                    .as_ref()
                    .map(|TailRule::Geometric { c, q }| *c * q.powi(n as i32 - 1)),
            },
        }
    }

    fn prefix_len(&self) -> usize {
        match self {
            AlphaRule::Geometric { .. } => 0,
            AlphaRule::Prefix { values, .. } => values.len(),
        }
    }

    fn tail_params(&self) -> Option<(T, T)> {
        match self {
            AlphaRule::Geometric { c, q } => Some((*c, *q)),
            AlphaRule::Prefix { tail, .. } => {
                tail.as_ref().map(|TailRule::Geometric { c, q }| (*c, *q))
            }
        }
    }

    /// Number of explicitly defined terms, `None` if the sequence is infinite.
    pub fn defined_len(&self) -> Option<usize> {
        match self.tail_params() {
            Some(_) => None,
            None => Some(self.prefix_len()),
        }
    }

    /// `sum_{n >= 1} 2^(n-1) alpha_n` with the number of rounded operations
    /// spent computing it. Infinite when the tail diverges.
    fn weighted_sum(&self) -> Result<(T, usize)> {
        let (c, q) = self.tail_params().ok_or(Error::NoTailBound)?;
        let p = self.prefix_len();
        let two = T::lit(2.0);
        let mut sum = T::zero();
        let mut weight = T::one();
        for n in 1..=p {
            sum = sum + weight * self.alpha(n).unwrap();
            weight = weight * two;
        }
        let ratio = two * q;
        if ratio >= T::one() {
            return Ok((T::infinity(), p));
        }
        // sum_{n > p} 2^(n-1) c q^(n-1) = c (2q)^p / (1 - 2q)
        let tail = c * ratio.powi(p as i32) / (T::one() - ratio);
        Ok((sum + tail, 2 * p + 6))
    }

    fn validate_params(&self) -> Result<()> {
        let check = |index: usize, v: T| -> Result<()> {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("alpha parameter {v}")));
            }
            if v <= T::zero() {
                return Err(Error::NonPositiveGap {
                    index,
                    value: v.as_f64(),
                });
            }
            Ok(())
        };
        if let AlphaRule::Prefix { values, .. } = self {
            for (i, v) in values.iter().enumerate() {
                check(i + 1, *v)?;
            }
        }
        if let Some((c, q)) = self.tail_params() {
            check(self.prefix_len() + 1, c)?;
            check(self.prefix_len() + 1, q)?;
        }
        Ok(())
    }
}

/// Measure of the limit set together with a bound on its rounding error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureValue<T> {
    pub value: T,
    pub error_bound: T,
}

/// Rigorous bracket for `ℓ(C ∩ [u, v])`.
///
/// `estimate` spreads the Cantor measure of each partially covered
/// deepest-stage interval uniformly over that interval; it always lies in
/// `[lower, upper]` and, as a function of `v`, is monotone and Lipschitz with
/// constant `ℓ(C) / ℓ(C_stage) <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowMeasure<T> {
    pub lower: T,
    pub upper: T,
    pub estimate: T,
    /// Rounding error inherited from the limit-set measure.
    pub error_bound: T,
}

impl<T: Real> WindowMeasure<T> {
    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

/// Tri-state membership answer for a point and a finite stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// Endpoint of some stage interval, hence in every later stage.
    In,
    /// Outside the stage approximation, hence outside the limit set.
    Out,
    /// Inside the stage approximation but not an endpoint.
    Undecided,
}

/// A symmetric fat Cantor set with exact stage and measure queries up to
/// `max_stage`.
#[derive(Clone, Debug)]
pub struct CantorSet<T> {
    alpha: AlphaRule<T>,
    max_stage: usize,
    // gaps[n - 1] = alpha_n
    gaps: Vec<T>,
    // lengths[n] = L_n
    lengths: Vec<T>,
    measure: Option<MeasureValue<T>>,
}

impl<T: Real> CantorSet<T> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(alpha: AlphaRule<T>, max_stage: usize) -> Result<Self> {
        if max_stage > MAX_STAGE {
            return Err(Error::StageOutOfRange {
                stage: max_stage,
                max: MAX_STAGE,
            });
        }
        alpha.validate_params()?;
        if let Some(len) = alpha.defined_len() {
            if max_stage > len {
                return Err(Error::StageOutOfRange {
                    stage: max_stage,
                    max: len,
                });
            }
        }

        let measure = match alpha.weighted_sum() {
            Ok((sum, ops)) => {
                if !(sum < T::one()) {
                    return Err(Error::SummabilityViolated { sum: sum.as_f64() });
                }
                let value = T::one() - sum;
                let error_bound = T::count(ops + 2) * T::epsilon();
                Some(MeasureValue { value, error_bound })
            }
            Err(Error::NoTailBound) => None,
            Err(e) => return Err(e),
        };

        let mut gaps = Vec::with_capacity(max_stage);
        let mut lengths = Vec::with_capacity(max_stage + 1);
        lengths.push(T::one());
        let half = T::lit(0.5);
        for n in 1..=max_stage {
            let gap = alpha.alpha(n).expect("defined up to max_stage");
            let prev = lengths[n - 1];
            if !(gap < prev) {
                return Err(Error::InfeasibleStage {
                    stage: n,
                    gap: gap.as_f64(),
                    length: prev.as_f64(),
                });
            }
            let len = (prev - gap) * half;
            if !(len > T::zero()) {
                return Err(Error::InfeasibleStage {
                    stage: n,
                    gap: gap.as_f64(),
                    length: prev.as_f64(),
                });
            }
            gaps.push(gap);
            lengths.push(len);
        }

        Ok(Self {
            alpha,
            max_stage,
            gaps,
            lengths,
            measure,
        })
    }

    /// The canonical family `alpha_n = 4^-n`, limit measure 1/2.
    pub fn quarter_powers(max_stage: usize) -> Result<Self> {
        let q = T::lit(0.25);
        Self::new(AlphaRule::geometric(q, q), max_stage)
    }

    pub fn alpha(&self) -> &AlphaRule<T> {
        &self.alpha
    }

    pub fn max_stage(&self) -> usize {
        self.max_stage
    }

    /// `alpha_n` for `1 <= n <= max_stage`.
    pub fn gap(&self, n: usize) -> T {
        self.gaps[n - 1]
    }

    /// Common length `L_n` of the stage-`n` intervals.
    pub fn stage_length(&self, n: usize) -> T {
        self.lengths[n]
    }

    fn check_stage(&self, stage: usize) -> Result<()> {
        if stage > self.max_stage {
            return Err(Error::StageOutOfRange {
                stage,
                max: self.max_stage,
            });
        }
        Ok(())
    }

    /// Children of the stage-`n - 1` interval `[lo, hi]`: `[lo, lo + L_n]`
    /// and `[hi - L_n, hi]`. Sharing the parent's endpoints keeps every
    /// stage nested inside the previous one in floating point.
    #[inline]
    fn children(&self, n: usize, lo: T, hi: T) -> (T, T) {
        let len = self.lengths[n];
        (lo + len, hi - len)
    }

    /// `C_n`: the `2^n` closed stage-`n` intervals.
    pub fn stage(&self, n: usize) -> Result<IntervalSet<T>> {
        self.check_stage(n)?;
        let mut cur = vec![(T::zero(), T::one())];
        for j in 1..=n {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for &(lo, hi) in &cur {
                let (left_hi, right_lo) = self.children(j, lo, hi);
                next.push((lo, left_hi));
                next.push((right_lo, hi));
            }
            cur = next;
        }
        let intervals = cur
            .into_iter()
            .map(|(lo, hi)| Interval { lo, hi })
            .collect();
        Ok(IntervalSet::from_normalized(intervals))
    }

    /// `ℓ(C_n) = 2^n L_n = 1 - sum_{j <= n} 2^(j-1) alpha_j`.
    pub fn stage_measure(&self, n: usize) -> Result<T> {
        self.check_stage(n)?;
        Ok(self.lengths[n] * T::lit(2.0).powi(n as i32))
    }

    /// Measure of the limit set.
    pub fn measure(&self) -> Result<MeasureValue<T>> {
        self.measure.ok_or(Error::NoTailBound)
    }

    /// Bracket for `ℓ(C ∩ [u, v])` resolved down to `stage`.
    ///
    /// Stage intervals inside the window count fully towards both bounds;
    /// stage-`stage` intervals that meet the window in positive length count
    /// only towards `upper`. Contributions are tallied as integer multiples of
    /// `ℓ(C) / 2^stage`, so refining the stage never loosens either bound.
    pub fn window_measure(&self, u: T, v: T, stage: usize) -> Result<WindowMeasure<T>> {
        if u > v {
            return Err(Error::ReversedWindow {
                u: u.as_f64(),
                v: v.as_f64(),
            });
        }
        self.check_stage(stage)?;
        let m = self.measure()?;

        let mut full: u64 = 0;
        let mut partial: u64 = 0;
        let mut fraction = T::zero();
        let mut stack = vec![(0usize, T::zero(), T::one())];
        while let Some((n, lo, hi)) = stack.pop() {
            if hi <= u || lo >= v {
                continue;
            }
            if u <= lo && hi <= v {
                full += 1u64 << (stage - n);
                continue;
            }
            if n == stage {
                partial += 1;
                let a = if lo > u { lo } else { u };
                let b = if hi < v { hi } else { v };
                fraction = fraction + (b - a) / (hi - lo);
                continue;
            }
            let (left_hi, right_lo) = self.children(n + 1, lo, hi);
            stack.push((n + 1, lo, left_hi));
            stack.push((n + 1, right_lo, hi));
        }

        let scale = pow2_neg::<T>(stage);
        let units = |k: u64| T::from_u64(k).expect("unit count representable");
        let lower = m.value * (units(full) * scale);
        let upper = m.value * (units(full + partial) * scale);
        let estimate = m.value * ((units(full) + fraction) * scale);
        Ok(WindowMeasure {
            lower,
            upper,
            estimate,
            error_bound: m.error_bound * (units(full + partial) * scale),
        })
    }

    /// Membership of `x` resolved down to `stage`.
    pub fn contains(&self, x: T, stage: usize) -> Result<Membership> {
        self.check_stage(stage)?;
        if x < T::zero() || x > T::one() {
            return Ok(Membership::Out);
        }
        if x == T::zero() || x == T::one() {
            return Ok(Membership::In);
        }
        let (mut lo, mut hi) = (T::zero(), T::one());
        for n in 1..=stage {
            let (left_hi, right_lo) = self.children(n, lo, hi);
            if x <= left_hi {
                if x == left_hi {
                    return Ok(Membership::In);
                }
                hi = left_hi;
            } else if x >= right_lo {
                if x == right_lo {
                    return Ok(Membership::In);
                }
                lo = right_lo;
            } else {
                return Ok(Membership::Out);
            }
        }
        Ok(Membership::Undecided)
    }

    /// The stage-`n` interval containing `x`, if `x` lies in `C_n`.
    pub fn stage_interval_containing(&self, x: T, n: usize) -> Result<Option<Interval<T>>> {
        self.check_stage(n)?;
        if x < T::zero() || x > T::one() {
            return Ok(None);
        }
        let (mut lo, mut hi) = (T::zero(), T::one());
        for j in 1..=n {
            let (left_hi, right_lo) = self.children(j, lo, hi);
            if x <= left_hi {
                hi = left_hi;
            } else if x >= right_lo {
                lo = right_lo;
            } else {
                return Ok(None);
            }
        }
        Ok(Some(Interval { lo, hi }))
    }

    /// Distance from `x` to the stage approximation `C_stage`.
    pub fn distance(&self, x: T, stage: usize) -> Result<T> {
        self.check_stage(stage)?;
        if x <= T::zero() {
            return Ok(-x);
        }
        if x >= T::one() {
            return Ok(x - T::one());
        }
        let (mut lo, mut hi) = (T::zero(), T::one());
        for n in 1..=stage {
            let (left_hi, right_lo) = self.children(n, lo, hi);
            if x <= left_hi {
                hi = left_hi;
            } else if x >= right_lo {
                lo = right_lo;
            } else {
                let d = (x - left_hi).min(right_lo - x);
                return Ok(d);
            }
        }
        Ok(T::zero())
    }

    /// Endpoints of all stage-`n` intervals, in increasing order.
    pub fn stage_endpoints(&self, n: usize) -> Result<Vec<T>> {
        Ok(self
            .stage(n)?
            .intervals()
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .collect())
    }
}
