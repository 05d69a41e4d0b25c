use serde::Serialize;

use crate::constructors::Bracket;
use crate::density::profile::{check_radii, DensitySet};
use crate::error::{Error, Result};
use crate::realsets::{IntervalSet, LineSet};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum QuasiVerdict<T> {
    /// Every sampled window has positive measure. Evidence at the named
    /// samples only.
    QuasiDenseEvidence,
    /// `μ(F ∩ B(point, radius)) = 0` exactly, so the set is not quasi-dense.
    Refuted { point: Vec<T>, radius: T },
    /// Some window's measure could not be separated from zero at the
    /// available resolution.
    Inconclusive { point: Vec<T>, radius: T },
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiDensityReport<T> {
    pub samples: Vec<Vec<T>>,
    pub radii: Vec<T>,
    pub tests: usize,
    pub passed: usize,
    pub verdict: QuasiVerdict<T>,
}

/// Tests `μ(F ∩ B(x, r)) > 0` at every sample and radius. Squares stand in
/// for balls on product sets.
pub fn is_quasi_dense<T: Real>(
    set: DensitySet<'_, T>,
    samples: &[Vec<T>],
    radii: &[T],
) -> Result<QuasiDensityReport<T>> {
    check_radii(radii)?;
    for x in samples {
        if x.len() != set.dim() || !set.may_contain(x) {
            return Err(Error::NotInSet(x.iter().map(|v| v.as_f64()).collect()));
        }
    }
    let mut passed = 0;
    let mut refuted = None;
    let mut inconclusive = None;
    for x in samples {
        for &r in radii {
            let (m, _) = set.window(x, r)?;
            if m.lower > T::zero() {
                passed += 1;
            } else if m.upper == T::zero() {
                refuted.get_or_insert((x.clone(), r));
            } else {
                inconclusive.get_or_insert((x.clone(), r));
            }
        }
    }
    let verdict = match (refuted, inconclusive) {
        (Some((point, radius)), _) => QuasiVerdict::Refuted { point, radius },
        (None, Some((point, radius))) => QuasiVerdict::Inconclusive { point, radius },
        (None, None) => QuasiVerdict::QuasiDenseEvidence,
    };
    Ok(QuasiDensityReport {
        samples: samples.to_vec(),
        radii: radii.to_vec(),
        tests: samples.len() * radii.len(),
        passed,
        verdict,
    })
}

/// Open interval `(lo, hi)` approaching a point, with its density ratio.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessBall<T> {
    pub level: usize,
    pub lo: T,
    pub hi: T,
    pub ratio: Bracket<T>,
}

const SEARCH_DEPTH: usize = 40;

fn interval_ratio<T: Real>(set: &LineSet<T>, lo: T, hi: T) -> Result<Bracket<T>> {
    let w = set.window_measure(lo, hi)?;
    let len = hi - lo;
    Ok(Bracket {
        value: w.estimate / len,
        lower: w.lower / len,
        upper: w.upper / len,
    })
}

/// Balls `B_1, B_2, ...` shrinking to `x`, where `B_n` has radius below
/// `1/n` and density ratio at least `1 - 1/n`.
///
/// For a Cantor set `B_n` is the stage interval containing `x`, taken at
/// stage `n` or, if its ratio is too small, at the first deeper stage that
/// qualifies. For an interval union the search tries radii `2^-j / n`,
/// `j >= 1`, centred at `x` or offset by one radius to either side, and
/// keeps the best of the three placements at the first qualifying radius.
pub fn witness_balls<T: Real>(set: &LineSet<T>, x: T, count: usize) -> Result<Vec<WitnessBall<T>>> {
    let mut out = Vec::with_capacity(count);
    for n in 1..=count {
        let threshold = T::one() - T::one() / T::count(n);
        let bound = T::one() / T::count(n);
        let found = match set {
            LineSet::Cantor { set: c, stage } => {
                let mut hit = None;
                for m in n..=*stage {
                    let Some(iv) = c.stage_interval_containing(x, m)? else {
                        break;
                    };
                    if T::lit(0.5) * iv.length() >= bound {
                        continue;
                    }
                    let ratio = interval_ratio(set, iv.lo, iv.hi)?;
                    if ratio.lower >= threshold {
                        hit = Some((iv.lo, iv.hi, ratio));
                        break;
                    }
                }
                hit
            }
            LineSet::Intervals(_) => {
                let mut hit = None;
                'search: for j in 1..=SEARCH_DEPTH {
                    let r = bound * T::lit(0.5).powi(j as i32);
                    let mut best: Option<(T, T, Bracket<T>)> = None;
                    for shift in [T::zero(), r, -r] {
                        let (lo, hi) = (x + shift - r, x + shift + r);
                        let ratio = interval_ratio(set, lo, hi)?;
                        if best.as_ref().is_none_or(|b| ratio.lower > b.2.lower) {
                            best = Some((lo, hi, ratio));
                        }
                    }
                    if let Some(b) = best.filter(|b| b.2.lower >= threshold) {
                        hit = Some(b);
                        break 'search;
                    }
                }
                hit
            }
        };
        let (lo, hi, ratio) = found.ok_or(Error::NoWitness {
            level: n,
            threshold: threshold.as_f64(),
        })?;
        out.push(WitnessBall {
            level: n,
            lo,
            hi,
            ratio,
        });
    }
    Ok(out)
}

/// Removes every point of `A` that has a neighbourhood meeting `A` in
/// measure zero. For a finite interval union these are exactly the isolated
/// points.
pub fn quasi_dense_core<T: Real>(a: &IntervalSet<T>) -> IntervalSet<T> {
    a.without_points()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::CantorSet;

    fn line(pairs: &[(f64, f64)]) -> LineSet<f64> {
        LineSet::Intervals(IntervalSet::new(pairs.iter().copied()).unwrap())
    }

    #[test]
    fn unit_interval_is_quasi_dense() {
        let s = line(&[(0.0, 1.0)]);
        let samples = vec![vec![0.0], vec![0.5], vec![1.0]];
        let r = is_quasi_dense(DensitySet::Line(&s), &samples, &[0.5, 0.1, 0.01]).unwrap();
        assert_eq!(r.verdict, QuasiVerdict::QuasiDenseEvidence);
        assert_eq!(r.passed, 9);
    }

    #[test]
    fn isolated_point_refutes() {
        let s = line(&[(0.0, 0.0), (1.0, 2.0)]);
        let r = is_quasi_dense(DensitySet::Line(&s), &[vec![0.0]], &[0.5, 0.25]).unwrap();
        assert_eq!(
            r.verdict,
            QuasiVerdict::Refuted {
                point: vec![0.0],
                radius: 0.5
            }
        );
    }

    #[test]
    fn samples_outside_rejected() {
        let s = line(&[(0.0, 1.0)]);
        assert!(matches!(
            is_quasi_dense(DensitySet::Line(&s), &[vec![2.0]], &[0.5]),
            Err(Error::NotInSet(_))
        ));
    }

    #[test]
    fn cantor_endpoints_pass() {
        let c = CantorSet::<f64>::quarter_powers(20).unwrap();
        let samples: Vec<Vec<f64>> = c
            .stage_endpoints(6)
            .unwrap()
            .into_iter()
            .map(|e| vec![e])
            .collect();
        let s = LineSet::cantor(c, 20).unwrap();
        let radii: Vec<f64> = (1..=16).map(|k| 0.5f64.powi(k)).collect();
        let r = is_quasi_dense(DensitySet::Line(&s), &samples, &radii).unwrap();
        assert_eq!(r.verdict, QuasiVerdict::QuasiDenseEvidence);
    }

    #[test]
    fn interval_witnesses() {
        let s = line(&[(0.0, 1.0)]);
        let w = witness_balls(&s, 0.5, 5).unwrap();
        assert!(w.iter().all(|b| b.ratio.value == 1.0));
        assert!(w.iter().all(|b| b.hi - b.lo < 2.0 / b.level as f64));
        let edge = witness_balls(&s, 0.0, 5).unwrap();
        assert!(edge.iter().all(|b| b.ratio.value == 1.0));
        let p = line(&[(0.0, 0.0), (1.0, 2.0)]);
        assert!(matches!(
            witness_balls(&p, 0.0, 3),
            Err(Error::NoWitness { level: 2, .. })
        ));
    }

    #[test]
    fn cantor_witnesses_match_closed_form() {
        let c = CantorSet::<f64>::quarter_powers(20).unwrap();
        let s = LineSet::cantor(c, 20).unwrap();
        let w = witness_balls(&s, 0.0, 10).unwrap();
        let expected = 0.5 / (0.5 + 2f64.powi(-11));
        assert!((w[9].ratio.value - expected).abs() < 1e-12);
        let mirrored = witness_balls(&s, 0.375, 10).unwrap();
        for (a, b) in w.iter().zip(&mirrored) {
            assert!((a.ratio.value - b.ratio.value).abs() < 1e-12);
        }
    }

    #[test]
    fn core_drops_points() {
        let a = IntervalSet::new([(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)]).unwrap();
        let core = quasi_dense_core(&a);
        assert_eq!(core.to_pairs(), vec![(1.0, 2.0)]);
        assert_eq!(core.measure(), a.measure());
        assert_eq!(quasi_dense_core(&core), core);
        assert!(quasi_dense_core(&IntervalSet::<f64>::empty()).is_empty());
    }
}
