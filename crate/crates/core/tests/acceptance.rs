//! Acceptance criteria, one pass/fail line each. Run with
//! `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lipone::cli::suites::{resolvable_alpha, ExperimentConfig, Suite, SuiteReport};
use lipone::constructors::{
    coverage_deficit, pack_regular_closed, BallFamily, BasisSpec, MeasurePrimitive,
    RadialComposition,
};
use lipone::density::{
    complement_components, is_quasi_dense, quasi_dense_core, witness_balls, DensitySet,
    QuasiVerdict,
};
use lipone::lipest::io::write_estimates;
use lipone::lipest::{llip_estimate, llip_field, GridAxis, GridFunction};
use lipone::plane::{AxisBox, ProductSet};
use lipone::realsets::{CantorSet, IntervalSet, LineSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

/// Reports produced along the way, reused by the ordering criterion.
#[derive(Default)]
struct Shared {
    reports: Vec<SuiteReport>,
}

fn run_suite(shared: &mut Shared, suite: Suite) -> Result<SuiteReport, String> {
    let report = suite
        .run(&ExperimentConfig::default())
        .map_err(|e| e.to_string())?;
    shared.reports.push(report.clone());
    Ok(report)
}

fn require(report: &SuiteReport, names: &[&str]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in names {
        match report.criterion(n) {
            Some(c) => {
                ok &= c.passed;
                lines.push(format!(
                    "{}={} ({})",
                    n,
                    if c.passed { "ok" } else { "FAILED" },
                    c.detail
                ));
            }
            None => {
                ok = false;
                lines.push(format!("{n} missing"));
            }
        }
    }
    (ok, lines)
}

/// Stage intervals of the symmetric Cantor construction, built by removing
/// a centred gap of length `alpha(n)` from every stage `n - 1` interval.
fn oracle_stage(alpha: impl Fn(usize) -> f64, n: usize) -> Vec<(f64, f64)> {
    let mut cur = vec![(0.0, 1.0)];
    for k in 1..=n {
        let a = alpha(k);
        cur = cur
            .into_iter()
            .flat_map(|(lo, hi)| {
                let mid = 0.5 * (lo + hi);
                [(lo, mid - 0.5 * a), (mid + 0.5 * a, hi)]
            })
            .collect();
    }
    cur
}

fn quarter(n: usize) -> f64 {
    0.25f64.powi(n as i32)
}

fn cantor_measure_exactness(_: &mut Shared) -> Outcome {
    let c = CantorSet::<f64>::quarter_powers(20).unwrap();
    let m = c.measure().unwrap();
    let stage = c.stage(20).unwrap();
    let oracle: f64 = oracle_stage(quarter, 20).iter().map(|(a, b)| b - a).sum();
    let target = 0.5 + 2f64.powi(-21);
    let ok = (m.value - 0.5).abs() <= 1e-12
        && m.error_bound <= 1e-12
        && (stage.measure() - target).abs() <= 1e-12
        && (oracle - target).abs() <= 1e-12
        && stage.len() == 1 << 20;
    Outcome::new(
        ok,
        format!(
            "limit {} +- {}, stage-20 measure {} (target 0.5 + 2^-21 = {target}, independent sum {oracle}), {} intervals",
            m.value,
            m.error_bound,
            stage.measure(),
            stage.len()
        ),
    )
}

fn self_similarity(_: &mut Shared) -> Outcome {
    let c = CantorSet::<f64>::quarter_powers(20).unwrap();
    let mut worst = 0.0f64;
    let mut widest = 0.0f64;
    let mut endpoint_gap = 0.0f64;
    let mut windows = 0;
    for n in 1..=10 {
        let target = 0.5 * 0.5f64.powi(n as i32);
        let lib = c.stage(n).unwrap();
        for (iv, &(lo, hi)) in lib.intervals().iter().zip(&oracle_stage(quarter, n)) {
            endpoint_gap = endpoint_gap.max((iv.lo - lo).abs()).max((iv.hi - hi).abs());
            let w = c.window_measure(iv.lo, iv.hi, 20).unwrap();
            worst = worst
                .max((w.lower - target).abs())
                .max((w.upper - target).abs());
            widest = widest.max(w.width());
            windows += 1;
        }
    }
    Outcome::new(
        worst <= 1e-12 && widest == 0.0 && endpoint_gap <= 1e-15 && windows == (1 << 11) - 2,
        format!("{windows} windows, max deviation {worst}, max bracket width {widest}, max endpoint mismatch vs independent construction {endpoint_gap}"),
    )
}

fn measure_primitive_suite(shared: &mut Shared) -> Outcome {
    let report = match run_suite(shared, Suite::MeasurePrimitive) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let (ok, mut lines) = require(
        &report,
        &[
            "global-lipschitz",
            "witness-points",
            "far-points",
            "gap-points",
        ],
    );

    // Closed-form witness ratio at stage 10: 0.5 / (2^10 L_10) = 0.5 / (0.5 + 2^-11).
    let c = CantorSet::<f64>::quarter_powers(14).unwrap();
    let line = LineSet::cantor(c, 14).unwrap();
    let w = witness_balls(&line, 0.0, 10).unwrap();
    let closed = 0.5 / (0.5 + 2f64.powi(-11));
    let witness_ok = (w[9].ratio.value - closed).abs() <= 1e-12 && closed >= 0.95;
    lines.push(format!(
        "stage-10 witness ratio {} vs closed form {closed}",
        w[9].ratio.value
    ));

    let prim = MeasurePrimitive::new(line, 0.0).unwrap();
    let end = prim.eval(1.0);
    let end_ok = end.lower <= 0.5 && 0.5 <= end.upper && (end.value - 0.5).abs() <= end.width();
    lines.push(format!(
        "f(1) = {} in [{}, {}]",
        end.value, end.lower, end.upper
    ));
    Outcome::new(ok && witness_ok && end_ok, lines.join("; "))
}

fn counterexample_suite(shared: &mut Shared) -> Outcome {
    let report = match run_suite(shared, Suite::QuasiDensityCounterexample) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let (ok, mut lines) = require(&report, &["quasi-density-refuted", "llip-zero-at-witness"]);

    let f = IntervalSet::new([(0.0, 0.0), (1.0, 2.0)]).unwrap();
    let line = LineSet::Intervals(f);
    let radii: Vec<f64> = (0..=5).map(|k| 0.5 * 0.5f64.powi(k)).collect();
    let q = is_quasi_dense(DensitySet::Line(&line), &[vec![0.0]], &radii).unwrap();
    let exact = q.verdict
        == QuasiVerdict::Refuted {
            point: vec![0.0],
            radius: 0.5,
        };
    lines.push(format!("direct verdict {:?}", q.verdict));
    Outcome::new(ok && exact, lines.join("; "))
}

/// Radial function on a window around the endpoint `|a| = 3/4`, sampled at
/// every grid point. The radial suite itself only sweeps sampled points.
fn radial_window_violations() -> (usize, usize) {
    let c = CantorSet::<f64>::quarter_powers(14).unwrap();
    let g = MeasurePrimitive::new(LineSet::cantor(c, 14).unwrap(), 0.0).unwrap();
    let radial = RadialComposition::new(g);
    let h = 0.5f64.powi(9);
    let f = radial
        .sample(
            GridAxis::new(0.625, 0.875, h).unwrap(),
            GridAxis::new(-0.125, 0.125, h).unwrap(),
        )
        .unwrap();
    let field = llip_field(&f, &[8.0 * h, 4.0 * h]).unwrap();
    (field.ordering_violations(), field.estimates.len())
}

fn estimator_ordering(shared: &mut Shared) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for s in Suite::ALL {
        if !shared.reports.iter().any(|r| r.suite == s) {
            if let Err(e) = run_suite(shared, s) {
                return Outcome::new(false, e);
            }
        }
    }
    let mut total = 0;
    for r in &shared.reports {
        ok &= r.ordering_violations == 0
            && r.criterion("estimator-ordering").is_some_and(|c| c.passed);
        total += r.sweeps_checked;
        lines.push(format!(
            "{}: {} of {}",
            r.suite, r.ordering_violations, r.sweeps_checked
        ));
    }
    let (v, n) = radial_window_violations();
    ok &= v == 0;
    total += n;
    lines.push(format!("radial full-grid window: {v} of {n}"));
    Outcome::new(
        ok && total > 0,
        format!("violations per suite: {}", lines.join(", ")),
    )
}

/// Maximum of `|f(u) - f(v)| / |u - v|` over all pairs in the closed ball,
/// enumerated without any ordering or pruning.
fn brute_llip(f: &GridFunction<f64>, x: &[usize], r: f64) -> f64 {
    let dim = f.dim();
    let h = f.spacing();
    let dist = |a: &[usize], b: &[usize]| -> f64 {
        let dx = a[0].abs_diff(b[0]) as f64 * h[0];
        if dim == 1 {
            dx
        } else {
            let dy = a[1].abs_diff(b[1]) as f64 * h[1];
            (dx * dx + dy * dy).sqrt()
        }
    };
    let ball: Vec<usize> = (0..f.len())
        .filter(|&k| dist(&f.grid_point(k), x) <= r)
        .collect();
    let mut best = 0.0f64;
    for &u in &ball {
        for &v in &ball {
            if u != v {
                let q = (f.value(u) - f.value(v)).abs() / dist(&f.grid_point(u), &f.grid_point(v));
                if q > best {
                    best = q;
                }
            }
        }
    }
    best
}

fn brute_force_oracle(_: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let mut mismatches = 0;
    for g in 0..10 {
        let h = [0.125, 0.1, 0.25, 1.0 / 3.0][rng.gen_range(0..4)];
        let f = if g % 2 == 0 {
            let n = rng.gen_range(6..=25);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            GridFunction::from_parts(vec![0.0], vec![h], vec![n], vals).unwrap()
        } else {
            let (a, b) = [(5, 5), (4, 6), (3, 8), (2, 12)][rng.gen_range(0..4)];
            let hy = h * [1.0, 0.5, 1.5][rng.gen_range(0..3)];
            let vals: Vec<f64> = (0..a * b).map(|_| rng.gen_range(-1.0..1.0)).collect();
            GridFunction::from_parts(vec![0.0, 0.0], vec![h, hy], vec![a, b], vals).unwrap()
        };
        let hmax = f.max_spacing();
        let radii = [4.5 * hmax, 3.0 * hmax, 2.0 * hmax];
        for k in 0..f.len() {
            let x = f.grid_point(k);
            let e = llip_estimate(&f, &x, &radii).unwrap();
            for (i, &r) in radii.iter().enumerate() {
                checked += 1;
                if e.llip_at_r[i].to_bits() != brute_llip(&f, &x, r).to_bits() {
                    mismatches += 1;
                }
            }
        }
    }
    Outcome::new(
        mismatches == 0,
        format!("{mismatches} bitwise mismatches in {checked} (point, radius) pairs over 10 grids"),
    )
}

/// Area of the unit square outside the balls, by testing every ball at
/// every pixel centre.
fn brute_deficit(family: &BallFamily<f64>, per_unit: usize) -> f64 {
    let px = 1.0 / per_unit as f64;
    let mut uncovered = 0usize;
    for i in 0..per_unit {
        for j in 0..per_unit {
            let p = [(i as f64 + 0.5) * px, (j as f64 + 0.5) * px];
            let covered = family.balls().iter().any(|b| {
                let (dx, dy) = (p[0] - b.center[0], p[1] - b.center[1]);
                (dx * dx + dy * dy).sqrt() < b.radius
            });
            if !covered {
                uncovered += 1;
            }
        }
    }
    uncovered as f64 * px * px
}

fn tent_suite(shared: &mut Shared) -> Outcome {
    let report = match run_suite(shared, Suite::TentPacking) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let (ok, mut lines) = require(
        &report,
        &[
            "coverage-decreasing",
            "packing-valid",
            "tent-lipschitz",
            "inside-balls",
            "outside-closure",
        ],
    );
    let region = AxisBox::<f64>::unit();
    let mut agree = true;
    for budget in [10, 100] {
        let p = pack_regular_closed(&region, BasisSpec::default(), budget);
        let lib = coverage_deficit(&region, &p.family, 256);
        let brute = brute_deficit(&p.family, 256);
        agree &= lib == brute;
        lines.push(format!(
            "budget {budget}: deficit {lib} vs exhaustive {brute} at 256 per unit"
        ));
    }
    Outcome::new(ok && agree, lines.join("; "))
}

fn radial_suite(shared: &mut Shared) -> Outcome {
    match run_suite(shared, Suite::Radial) {
        Ok(r) => {
            let (ok, mut lines) = require(
                &r,
                &["rotational-invariance", "gap-points", "endpoint-points"],
            );
            let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("radial-points.csv");
            match std::fs::File::create(&path)
                .map_err(lipone::Error::from)
                .and_then(|f| write_estimates(&r.rows, f))
            {
                Ok(()) => lines.push(format!("per-radius table in {}", path.display())),
                Err(e) => lines.push(format!("could not write per-radius table: {e}")),
            }
            Outcome::new(ok, lines.join("; "))
        }
        Err(e) => Outcome::new(false, e),
    }
}

fn cantor_square(shared: &mut Shared) -> Outcome {
    let report = match run_suite(shared, Suite::CantorSquare) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let mut names: Vec<String> = (1..=8)
        .map(|n| format!("stage-{n}-complement-connected"))
        .collect();
    names.push("annulus-control".into());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let (ok, _) = require(&report, &refs);

    // Gap sequence alpha_n = 4^-n for comparison: its stage-n gaps fall
    // between pixel centres at 2^(n+3) from stage 3 on, which the raster
    // check refuses rather than miscounting.
    let quarter = CantorSet::<f64>::quarter_powers(8).unwrap();
    let resolved: Vec<usize> = (1..=8)
        .filter(|&n| {
            let prod = ProductSet::square(LineSet::cantor(quarter.clone(), n).unwrap());
            complement_components(&prod, 1 << (n + 3)).is_ok()
        })
        .collect();
    let c = CantorSet::new(resolvable_alpha(), 8).unwrap();
    let failed: Vec<&str> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    Outcome::new(
        ok,
        format!(
            "alpha_j = 3 * 2^-(j+4) for j <= 8 (limit measure {}): stages 1..=8 one stable component each at 2^(n+3) and 2^(n+4), annulus 2 components; failures {failed:?}; 4^-n resolves at 2^(n+3) only for stages {resolved:?}",
            c.measure().unwrap().value
        ),
    )
}

fn quasi_dense_core_criterion(_: &mut Shared) -> Outcome {
    let a = IntervalSet::new([(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)]).unwrap();
    let core = quasi_dense_core(&a);
    let ok = core.to_pairs() == vec![(1.0, 2.0)]
        && core.measure() == a.measure()
        && quasi_dense_core(&core) == core;
    Outcome::new(
        ok,
        format!(
            "core {:?}, measure {} vs {}",
            core.to_pairs(),
            core.measure(),
            a.measure()
        ),
    )
}

type Check = fn(&mut Shared) -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Option<u64>, Check); 10] = [
        (
            "cantor-measure-exactness",
            Some(1),
            cantor_measure_exactness,
        ),
        ("self-similarity", Some(5), self_similarity),
        ("measure-primitive-suite", Some(60), measure_primitive_suite),
        (
            "quasi-density-counterexample",
            Some(1),
            counterexample_suite,
        ),
        ("estimator-ordering", None, estimator_ordering),
        ("brute-force-oracle", Some(1), brute_force_oracle),
        ("tent-packing-suite", Some(120), tent_suite),
        ("radial-suite", Some(180), radial_suite),
        ("cantor-square-connectivity", Some(30), cantor_square),
        ("quasi-dense-core", Some(1), quasi_dense_core_criterion),
    ];
    // The ordering check reads the reports of every other suite, so it runs
    // last; lines are still printed in criterion order.
    const ORDERING: usize = 4;
    let order = (0..criteria.len())
        .filter(|&i| i != ORDERING)
        .chain([ORDERING]);
    let mut shared = Shared::default();
    let mut lines = vec![String::new(); criteria.len()];
    let mut failures = 0;
    for i in order {
        let (name, limit, check) = criteria[i];
        let start = Instant::now();
        let outcome = check(&mut shared);
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|s| elapsed <= Duration::from_secs(s));
        let passed = outcome.passed && in_time;
        if !passed {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |s| format!(", limit {s}s"));
        lines[i] = format!(
            "{} {:>2} {name} ({:.2?}{budget}): {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            elapsed,
            outcome.detail
        );
    }
    for l in &lines {
        println!("{l}");
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
