//! Estimates at every grid point.
//!
//! In 1D the local estimate on a clipped ball is the maximum pair ratio over
//! a contiguous index range `[a, b]`. Writing `P(a, b)` for that maximum,
//! `P(a, b) = max(P(a, b - 1), P(a + 1, b), ratio(a, b))`, so one pass over
//! the diagonals `b - a = d` yields every ball without repeating pairs. The
//! ratios are the same floating-point quotients the single-point sweep
//! forms, hence the field matches it bit for bit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lipest::estimate::{ball_offsets, sweep_point, validate_radii, LipEstimate};
use crate::lipest::grid::GridFunction;
use crate::scalar::Real;

/// Per-point estimates, indexed by flat grid index.
#[derive(Clone, Debug, Serialize)]
pub struct LipField<T> {
    pub radii: Vec<T>,
    pub estimates: Vec<LipEstimate<T>>,
}

impl<T: Real> LipField<T> {
    pub fn llip_final(&self) -> Vec<T> {
        self.estimates.iter().map(|e| e.llip_final).collect()
    }

    /// Largest local estimate at the largest radius.
    pub fn max_llip(&self) -> T {
        self.estimates
            .iter()
            .map(|e| e.llip_at_r[0])
            .fold(T::zero(), T::max)
    }

    /// Number of points where `little <= big <= local` fails at some radius.
    pub fn ordering_violations(&self) -> usize {
        self.estimates
            .iter()
            .filter(|e| !e.ordering_holds())
            .count()
    }
}

/// Sweep at every grid point.
pub fn llip_field<T: Real>(f: &GridFunction<T>, radii: &[T]) -> Result<LipField<T>> {
    validate_radii(f, radii)?;
    let estimates = match f.dim() {
        1 => field_1d(f, radii)?,
        _ => {
            let offsets = ball_offsets(f, radii[0]);
            (0..f.len())
                .into_par_iter()
                .map(|k| sweep_point(f, &f.grid_point(k), radii, &offsets))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(LipField {
        radii: radii.to_vec(),
        estimates,
    })
}

/// Largest `w` with `offset_distance(w) <= r`.
fn half_width<T: Real>(f: &GridFunction<T>, r: T) -> usize {
    let mut w = (r / f.spacing()[0]).floor().to_usize().unwrap_or(0);
    while f.offset_distance(w + 1, 0) <= r {
        w += 1;
    }
    while w > 0 && f.offset_distance(w, 0) > r {
        w -= 1;
    }
    w
}

fn field_1d<T: Real>(f: &GridFunction<T>, radii: &[T]) -> Result<Vec<LipEstimate<T>>> {
    let n = f.len();
    let vals = f.values();
    if n < 2 {
        return Err(Error::SparseBall {
            point: vec![0],
            radius: radii[0].as_f64(),
        });
    }
    let widths: Vec<usize> = radii.iter().map(|&r| half_width(f, r)).collect();
    if widths.contains(&0) {
        return Err(Error::SparseBall {
            point: vec![0],
            radius: radii[radii.len() - 1].as_f64(),
        });
    }
    let max_d = (2 * widths[0]).min(n - 1);

    // left[d] = P(0, d), right[d] = P(n - 1 - d, n - 1)
    let mut left = vec![T::zero(); max_d + 1];
    let mut right = vec![T::zero(); max_d + 1];
    // interior[k][i] = P(i - w_k, i + w_k)
    let mut interior: Vec<Vec<T>> = vec![Vec::new(); radii.len()];
    let mut cur = vec![T::zero(); n];
    for d in 1..=max_d {
        let dist = f.offset_distance(d, 0);
        let count = n - d;
        // Ascending order reads cur[a + 1] before it is overwritten.
        for a in 0..count {
            let q = (vals[a + d] - vals[a]).abs() / dist;
            let m = cur[a].max(cur[a + 1]);
            cur[a] = if q > m { q } else { m };
        }
        left[d] = cur[0];
        right[d] = cur[count - 1];
        for (k, &w) in widths.iter().enumerate() {
            if 2 * w == d {
                interior[k] = cur[..count].to_vec();
            }
        }
    }

    let little_big: Vec<(Vec<T>, Vec<T>)> = (0..n)
        .into_par_iter()
        .map(|i| anchored_1d(f, i, radii, &widths))
        .collect();

    let estimates = little_big
        .into_iter()
        .enumerate()
        .map(|(i, (big, little))| {
            let llip = widths
                .iter()
                .enumerate()
                .map(|(k, &w)| {
                    let lo = i.saturating_sub(w);
                    let hi = (i + w).min(n - 1);
                    if lo == 0 {
                        left[hi]
                    } else if hi == n - 1 {
                        right[n - 1 - lo]
                    } else {
                        interior[k][lo]
                    }
                })
                .collect();
            LipEstimate::assemble(vec![i], radii.to_vec(), llip, big, little)
        })
        .collect();
    Ok(estimates)
}

/// Big and little sweeps at index `i`, visiting offsets in the same order as
/// the single-point sweep (distance, then signed offset).
fn anchored_1d<T: Real>(
    f: &GridFunction<T>,
    i: usize,
    radii: &[T],
    widths: &[usize],
) -> (Vec<T>, Vec<T>) {
    let n = f.len();
    let vals = f.values();
    let centre = vals[i];
    let w0 = widths[0];
    // best[t] = (max ratio, max diff) over offsets with |offset| <= t
    let mut best = vec![(T::zero(), T::zero()); w0 + 1];
    for t in 1..=w0 {
        let dist = f.offset_distance(t, 0);
        let mut acc = best[t - 1];
        for j in [i.checked_sub(t), (i + t < n).then_some(i + t)]
            .into_iter()
            .flatten()
        {
            let diff = (vals[j] - centre).abs();
            acc.0 = acc.0.max(diff / dist);
            acc.1 = acc.1.max(diff);
        }
        best[t] = acc;
    }
    let big = widths.iter().map(|&w| best[w].0).collect();
    let little = widths
        .iter()
        .zip(radii)
        .map(|(&w, &r)| best[w].1 / r)
        .collect();
    (big, little)
}
