//! Named verification experiments. Each suite runs one construction end to
//! end and reports a list of pass/fail criteria plus the per-point radius
//! sweeps it computed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructors::{
    coverage_deficit, pack_regular_closed, BasisSpec, MeasurePrimitive, RadialComposition, TentSum,
};
use crate::density::{
    complement_connected, density_profile, is_quasi_dense, quasi_dense_core, witness_balls,
    DensitySet, QuasiVerdict,
};
use crate::error::{Error, Result};
use crate::lipest::check::DEFAULT_SEED;
use crate::lipest::{
    geometric_radii, llip_estimate, llip_field, random_pair_lipschitz, GridAxis, GridFunction,
    LipEstimate,
};
use crate::plane::{Annulus, AxisBox, ProductSet, Region};
use crate::realsets::{AlphaRule, BuiltSet, CantorSet, IntervalSet, LineSet, SetSpec, TailRule};

/// Slack on the global Lipschitz bound of a measure primitive.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;
/// Threshold for "estimate is zero" on flat regions of a measure primitive.
pub const FLAT_TOL: f64 = 1e-9;
/// Lower bound on the 2D estimate at Cantor endpoints of the radial example.
pub const RADIAL_ENDPOINT_FLOOR: f64 = 0.9;
/// Slack on the random-pair Lipschitz check of tent sums.
pub const TENT_SLACK: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MeasurePrimitive,
    QuasiDensityCounterexample,
    CantorQuasiDensity,
    CantorSquare,
    TentPacking,
    Radial,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::MeasurePrimitive,
        Suite::QuasiDensityCounterexample,
        Suite::CantorQuasiDensity,
        Suite::CantorSquare,
        Suite::TentPacking,
        Suite::Radial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MeasurePrimitive => "measure-primitive",
            Suite::QuasiDensityCounterexample => "quasi-density-counterexample",
            Suite::CantorQuasiDensity => "cantor-quasi-density",
            Suite::CantorSquare => "cantor-square",
            Suite::TentPacking => "tent-packing",
            Suite::Radial => "radial",
        }
    }

    /// Short alternative name accepted on the command line.
    pub fn alias(self) -> &'static str {
        match self {
            Suite::MeasurePrimitive => "thm4.1",
            Suite::QuasiDensityCounterexample => "thm4.2-counterexample",
            Suite::CantorQuasiDensity => "prop3.3-cantor",
            Suite::CantorSquare => "sec5-cantor-square",
            Suite::TentPacking => "thm6.1-tent",
            Suite::Radial => "final-example",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> Result<SuiteReport> {
        cfg.validate()?;
        match self {
            Suite::MeasurePrimitive => measure_primitive(cfg),
            Suite::QuasiDensityCounterexample => quasi_density_counterexample(cfg),
            Suite::CantorQuasiDensity => cantor_quasi_density(cfg),
            Suite::CantorSquare => cantor_square(cfg),
            Suite::TentPacking => tent_packing(cfg),
            Suite::Radial => radial(cfg),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || x.alias() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// `lo, hi, h` for one grid axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub h: f64,
}

impl AxisSpec {
    pub fn axis(&self) -> Result<GridAxis<f64>> {
        GridAxis::new(self.lo, self.hi, self.h)
    }
}

impl FromStr for AxisSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_list(s)?;
        let [lo, hi, h] = parts[..] else {
            return Err(Error::Config(format!("grid `{s}` must be lo,hi,h")));
        };
        Ok(Self { lo, hi, h })
    }
}

/// Geometric sweep `R, R/2, ..., R/2^K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub largest: f64,
    pub halvings: usize,
}

impl SweepSpec {
    pub fn radii(&self) -> Vec<f64> {
        geometric_radii(self.largest, self.halvings)
    }
}

impl FromStr for SweepSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("radii `{s}` must be R,K"));
        let (r, k) = s.split_once(',').ok_or_else(bad)?;
        let largest = parse_number(r)?;
        let halvings = k.trim().parse().map_err(|_| bad())?;
        Ok(Self { largest, halvings })
    }
}

/// Accepts decimals and simple fractions such as `1/128` or `2^-14`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse number `{s}`"));
    if let Some((base, exp)) = s.split_once('^') {
        let b: f64 = base.trim().parse().map_err(|_| bad())?;
        let e: i32 = exp.trim().parse().map_err(|_| bad())?;
        return Ok(b.powi(e));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_number(num)?;
        let d = parse_number(den)?;
        return Ok(n / d);
    }
    s.parse().map_err(|_| bad())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

/// Parameters shared by all suites; `None` selects the suite default.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExperimentConfig {
    pub set: Option<SetSpec<f64>>,
    /// One `lo,hi,h` axis, or one per axis for planar suites.
    pub grid: Vec<AxisSpec>,
    pub radii: Option<SweepSpec>,
    pub stage: Option<usize>,
    pub budget: Option<usize>,
    pub resolution: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub base: Option<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        if self.grid.len() > 2 {
            return Err(Error::Config("at most two grid axes".into()));
        }
        for g in &self.grid {
            positive("grid spacing", g.h)?;
            g.axis()?;
        }
        if let Some(r) = &self.radii {
            positive("largest radius", r.largest)?;
        }
        if let Some(t) = self.tol {
            positive("tolerance", t)?;
        }
        if self.budget == Some(0) {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.resolution == Some(0) {
            return Err(Error::Config("resolution must be positive".into()));
        }
        if let Some(b) = self.base {
            if !b.is_finite() {
                return Err(Error::Config("base point must be finite".into()));
            }
        }
        Ok(())
    }

    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Axis `k`; a single `--grid` value serves both axes.
    fn axis(&self, k: usize, default: (f64, f64, f64)) -> Result<GridAxis<f64>> {
        match self.grid.get(k).or(self.grid.first()) {
            Some(g) => g.axis(),
            None => GridAxis::new(default.0, default.1, default.2),
        }
    }

    fn radii(&self, default: (f64, usize)) -> Vec<f64> {
        self.radii
            .unwrap_or(SweepSpec {
                largest: default.0,
                halvings: default.1,
            })
            .radii()
    }

    fn line_set(&self, default: impl FnOnce() -> Result<BuiltSet<f64>>) -> Result<LineSet<f64>> {
        let built = match &self.set {
            Some(spec) => spec.build()?,
            None => default()?,
        };
        built.into_line_set(self.stage)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: ExperimentConfig,
    pub criteria: Vec<Criterion>,
    /// Number of radius sweeps checked for `little <= big <= local`.
    pub sweeps_checked: usize,
    pub ordering_violations: usize,
    /// Radius sweeps behind the criteria, written as per-point CSV.
    #[serde(skip)]
    pub rows: Vec<LipEstimate<f64>>,
}

impl SuiteReport {
    fn new(suite: Suite, cfg: &ExperimentConfig) -> Self {
        Self {
            suite,
            config: cfg.clone(),
            criteria: Vec::new(),
            sweeps_checked: 0,
            ordering_violations: 0,
            rows: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.criteria.push(Criterion {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn track<'a>(&mut self, estimates: impl IntoIterator<Item = &'a LipEstimate<f64>>) {
        for e in estimates {
            self.sweeps_checked += 1;
            if !e.ordering_holds() {
                self.ordering_violations += 1;
            }
        }
    }

    fn close_ordering(&mut self) {
        let detail = format!(
            "{} violations in {} sweeps",
            self.ordering_violations, self.sweeps_checked
        );
        self.check("estimator-ordering", self.ordering_violations == 0, detail);
    }

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

fn quarter_powers(max_stage: usize) -> Result<BuiltSet<f64>> {
    Ok(BuiltSet::Cantor(CantorSet::quarter_powers(max_stage)?))
}

/// Gap sequence whose stage intervals and gaps stay resolvable at
/// `2^(n+3)` pixels per unit through stage 8: `alpha_j = 3 * 2^-(j+4)` for
/// `j <= 8`, then a fast geometric tail.
pub fn resolvable_alpha() -> AlphaRule<f64> {
    AlphaRule::Prefix {
        values: (1..=8).map(|j| 3.0 * 0.5f64.powi(j + 4)).collect(),
        tail: Some(TailRule::Geometric {
            c: 0.5f64.powi(4),
            q: 0.25,
        }),
    }
}

fn exact_grid_point(f: &GridFunction<f64>, x: &[f64]) -> Option<usize> {
    let p = f.nearest(x)?;
    let k = f.flat_index(&p)?;
    (f.coords(k) == x).then_some(k)
}

/// Measure primitive of a quasi-dense set: globally 1-Lipschitz, local
/// estimate near 1 at witness points of the set, zero on flat regions.
pub fn measure_primitive(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::MeasurePrimitive, cfg);
    let set = cfg.line_set(|| quarter_powers(14))?;
    let axis = cfg.axis(0, (-0.25, 1.25, 0.5f64.powi(14)))?;
    let radii = cfg.radii((0.25, 10));
    let prim = MeasurePrimitive::new(set.clone(), cfg.base.unwrap_or(0.0))?;
    let (f, width) = prim.sample(axis)?;
    let field = llip_field(&f, &radii)?;
    rep.track(&field.estimates);

    let pairs = random_pair_lipschitz(&f, 10_000, cfg.seed());
    let global = field.max_llip().max(pairs);
    rep.check(
        "global-lipschitz",
        global <= 1.0 + LIPSCHITZ_SLACK,
        format!("max pair ratio {global} (ball pairs and 10000 random pairs, seed {}); bracket width {width}", cfg.seed()),
    );

    // Witness points: stage endpoints for a Cantor set, grid points of the
    // set for an interval union.
    let witnesses: Vec<usize> = match &set {
        LineSet::Cantor { set: c, stage } => c
            .stage_endpoints((*stage).min(6))?
            .into_iter()
            .filter_map(|e| f.nearest(&[e]).and_then(|p| f.flat_index(&p)))
            .collect(),
        LineSet::Intervals(s) => (0..f.len())
            .filter(|&k| s.contains(f.coords(k)[0]))
            .collect(),
    };
    let floor = 1.0 - cfg.tol();
    let worst = witnesses
        .iter()
        .map(|&k| field.estimates[k].llip_final)
        .fold(f64::INFINITY, f64::min);
    rep.check(
        "witness-points",
        !witnesses.is_empty() && worst >= floor,
        format!(
            "min local estimate {worst} over {} witness points (floor {floor})",
            witnesses.len()
        ),
    );

    let largest = radii[0];
    let smallest = radii[radii.len() - 1];
    let mut far = (0usize, 0.0f64);
    let mut flat = (0usize, 0.0f64);
    for (k, e) in field.estimates.iter().enumerate() {
        let d = set.distance(f.coords(k)[0]);
        if d > largest {
            far.0 += 1;
            far.1 = far.1.max(e.llip_final);
        }
        if d > smallest {
            flat.0 += 1;
            flat.1 = flat.1.max(e.llip_final);
        }
    }
    rep.check(
        "far-points",
        far.1 <= FLAT_TOL,
        format!(
            "max local estimate {} over {} points farther than {largest} from the set{}",
            far.1,
            far.0,
            if far.0 == 0 {
                " (none on this grid)"
            } else {
                ""
            }
        ),
    );
    rep.check(
        "gap-points",
        flat.0 > 0 && flat.1 <= FLAT_TOL,
        format!(
            "max local estimate {} over {} points farther than {smallest} from the set",
            flat.1, flat.0
        ),
    );
    rep.close_ordering();
    rep.rows = field.estimates;
    Ok(rep)
}

/// A closed set with an isolated point: quasi-density fails there with an
/// exact zero-measure ball, and the measure primitive is flat around it.
pub fn quasi_density_counterexample(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::QuasiDensityCounterexample, cfg);
    let line = cfg.line_set(|| {
        Ok(BuiltSet::Intervals(IntervalSet::new([
            (0.0, 0.0),
            (1.0, 2.0),
        ])?))
    })?;
    let LineSet::Intervals(set) = &line else {
        return Err(Error::Config("this suite needs an interval set".into()));
    };
    let axis = cfg.axis(0, (-1.0, 3.0, 0.5f64.powi(8)))?;
    let radii = cfg.radii((0.5, 5));

    let points: Vec<f64> = set
        .intervals()
        .iter()
        .filter(|iv| iv.is_point())
        .map(|iv| iv.lo)
        .collect();
    rep.check(
        "has-isolated-point",
        !points.is_empty(),
        format!("isolated points {points:?}"),
    );
    let samples: Vec<Vec<f64>> = points.iter().map(|&p| vec![p]).collect();
    let q = is_quasi_dense(DensitySet::Line(&line), &samples, &radii)?;
    let witness = match &q.verdict {
        QuasiVerdict::Refuted { point, radius } => Some((point[0], *radius)),
        _ => None,
    };
    rep.check(
        "quasi-density-refuted",
        witness.is_some(),
        format!("verdict {:?}", q.verdict),
    );

    let prim = MeasurePrimitive::new(line.clone(), cfg.base.unwrap_or(0.0))?;
    let (f, _) = prim.sample(axis)?;
    let field = llip_field(&f, &radii)?;
    rep.track(&field.estimates);
    match witness {
        Some((x, r)) => match exact_grid_point(&f, &[x]) {
            Some(k) => {
                let e = &field.estimates[k];
                rep.check(
                    "llip-zero-at-witness",
                    e.llip_final == 0.0,
                    format!(
                        "local estimate {} at x = {x} (witness radius {r})",
                        e.llip_final
                    ),
                );
            }
            None => rep.check(
                "llip-zero-at-witness",
                false,
                format!("witness {x} is not a grid point"),
            ),
        },
        None => rep.check("llip-zero-at-witness", false, "no witness".into()),
    }

    let core = quasi_dense_core(set);
    let core_line = LineSet::Intervals(core.clone());
    let endpoints: Vec<Vec<f64>> = core
        .intervals()
        .iter()
        .flat_map(|iv| [vec![iv.lo], vec![iv.hi]])
        .collect();
    let core_ok = if endpoints.is_empty() {
        true
    } else {
        is_quasi_dense(DensitySet::Line(&core_line), &endpoints, &radii)?.verdict
            == QuasiVerdict::QuasiDenseEvidence
    };
    rep.check(
        "quasi-dense-core",
        core.measure() == set.measure() && quasi_dense_core(&core) == core && core_ok,
        format!(
            "core {:?}, measure {} vs {}, endpoints quasi-dense {core_ok}",
            core.to_pairs(),
            core.measure(),
            set.measure()
        ),
    );
    rep.close_ordering();
    rep.rows = field.estimates;
    Ok(rep)
}

/// `1 - sum_{j <= n} 2^(j-1) alpha_j`, summed directly from the gap rule.
pub fn stage_measure_from_alpha(alpha: &AlphaRule<f64>, n: usize) -> f64 {
    1.0 - (1..=n)
        .map(|j| 2f64.powi(j as i32 - 1) * alpha.alpha(j).unwrap())
        .sum::<f64>()
}

/// Fat Cantor set: exact measure, self-similar window measures, quasi-density
/// at stage endpoints and witness balls with the closed-form ratios.
pub fn cantor_quasi_density(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::CantorQuasiDensity, cfg);
    let line = cfg.line_set(|| quarter_powers(20))?;
    let LineSet::Cantor { set: c, stage } = &line else {
        return Err(Error::Config("this suite needs a Cantor set".into()));
    };
    let stage = *stage;
    let m = c.measure()?;
    let top = c.stage(stage)?.measure();
    let oracle = stage_measure_from_alpha(c.alpha(), stage);
    rep.check(
        "limit-measure",
        m.error_bound <= 1e-12 && (top - oracle).abs() <= 1e-12,
        format!(
            "measure {} +- {}, stage-{stage} measure {top} vs {oracle}",
            m.value, m.error_bound
        ),
    );

    let mut worst = 0.0f64;
    let mut widest = 0.0f64;
    for n in 1..=stage.min(10) {
        let target = m.value * 0.5f64.powi(n as i32);
        for iv in c.stage(n)?.intervals() {
            let w = c.window_measure(iv.lo, iv.hi, stage)?;
            worst = worst
                .max((w.lower - target).abs())
                .max((w.upper - target).abs());
            widest = widest.max(w.width());
        }
    }
    rep.check(
        "self-similarity",
        worst <= 1e-12 && widest == 0.0,
        format!(
            "max deviation {worst}, max bracket width {widest}, stages 1..={}",
            stage.min(10)
        ),
    );

    let samples: Vec<Vec<f64>> = c
        .stage_endpoints(stage.min(6))?
        .into_iter()
        .map(|e| vec![e])
        .collect();
    let radii: Vec<f64> = (1..=16).map(|k| 0.5f64.powi(k)).collect();
    let q = is_quasi_dense(DensitySet::Line(&line), &samples, &radii)?;
    rep.check(
        "endpoint-quasi-density",
        q.verdict == QuasiVerdict::QuasiDenseEvidence,
        format!(
            "{} of {} windows positive; verdict {:?}",
            q.passed, q.tests, q.verdict
        ),
    );

    let levels = stage.min(10);
    let mut max_err = 0.0f64;
    let mut ok = true;
    for x in [0.0, c.stage_length(1)] {
        let balls = witness_balls(&line, x, levels)?;
        for b in &balls {
            // Witness intervals are stage intervals; recover the stage from
            // the length.
            let n_used = (1..=stage)
                .min_by(|&a, &k| {
                    let da = (c.stage_length(a) - (b.hi - b.lo)).abs();
                    let dk = (c.stage_length(k) - (b.hi - b.lo)).abs();
                    da.total_cmp(&dk)
                })
                .unwrap_or(1);
            let closed = m.value / stage_measure_from_alpha(c.alpha(), n_used);
            max_err = max_err.max((b.ratio.value - closed).abs());
            ok &= b.ratio.value >= 1.0 - 1.0 / b.level as f64;
        }
    }
    rep.check(
        "witness-ratios",
        ok && max_err <= 1e-12,
        format!(
            "levels 1..={levels} at x = 0 and x = L_1, max deviation from closed form {max_err}"
        ),
    );

    let profile_radii: Vec<f64> = (1..=stage.min(12)).map(|n| c.stage_length(n)).collect();
    let profile = density_profile(DensitySet::Line(&line), &[0.0], &profile_radii)?;
    let bounded = profile
        .ratios
        .iter()
        .all(|b| 0.0 <= b.lower && b.lower <= b.value && b.value <= b.upper && b.upper <= 1.0);
    rep.check(
        "density-profile",
        bounded,
        format!(
            "ratios at x = 0: {:?}",
            profile.ratios.iter().map(|b| b.value).collect::<Vec<_>>()
        ),
    );
    rep.close_ordering();
    Ok(rep)
}

/// Complement of `C_n × C_n` is one raster component at every stage; the
/// annulus control has two.
pub fn cantor_square(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::CantorSquare, cfg);
    let c = match &cfg.set {
        Some(spec) => match spec.build()? {
            BuiltSet::Cantor(c) => c,
            BuiltSet::Intervals(_) => {
                return Err(Error::Config("this suite needs a Cantor set".into()))
            }
        },
        None => CantorSet::new(resolvable_alpha(), 8)?,
    };
    let last = cfg.stage.unwrap_or(c.max_stage().min(8));
    for n in 1..=last {
        let m = cfg.resolution.unwrap_or(1 << (n + 3));
        let prod = ProductSet::square(LineSet::cantor(c.clone(), n)?);
        let name = format!("stage-{n}-complement-connected");
        match complement_connected(&prod, m) {
            Ok(r) => rep.check(
                &name,
                r.is_connected(),
                format!(
                    "{} component(s) at {m}, {} at {}; {}",
                    r.components, r.components_doubled, r.doubled_resolution, r.note
                ),
            ),
            Err(e) => rep.check(&name, false, e.to_string()),
        }
    }
    let ring = Annulus {
        center: [0.5, 0.5],
        inner: 0.25,
        outer: 0.4,
    };
    let r = complement_connected(&ring, 64)?;
    rep.check(
        "annulus-control",
        r.components == 2 && r.components_doubled == 2,
        format!(
            "{} component(s) at 64, {} at 128",
            r.components, r.components_doubled
        ),
    );
    rep.close_ordering();
    Ok(rep)
}

/// Greedy packing of the unit square and the tent sum over it.
pub fn tent_packing(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::TentPacking, cfg);
    let region = AxisBox::<f64>::unit();
    let reference = cfg.resolution.unwrap_or(1024);
    let budget = cfg.budget.unwrap_or(100);
    let basis = BasisSpec::default();

    let budgets = [budget / 10, budget, budget * 10];
    let mut deficits = Vec::new();
    let mut tent_family = None;
    for &b in &budgets {
        let p = pack_regular_closed(&region, basis, b.max(1));
        deficits.push(coverage_deficit(&region, &p.family, reference));
        if b == budget {
            tent_family = Some(p);
        }
    }
    let packing = tent_family.expect("budget packed");
    rep.check(
        "coverage-decreasing",
        deficits.windows(2).all(|w| w[1] < w[0]),
        format!(
            "deficits {deficits:?} at budgets {budgets:?} on a {reference}-per-unit reference grid"
        ),
    );

    let balls = packing.family.balls();
    let mut valid = packing.family.len() == budget;
    for (i, a) in balls.iter().enumerate() {
        valid &= region.depth([a.center[0], a.center[1]]) >= a.radius;
        for b in &balls[i + 1..] {
            let d =
                ((a.center[0] - b.center[0]).powi(2) + (a.center[1] - b.center[1]).powi(2)).sqrt();
            valid &= d >= a.radius + b.radius;
        }
    }
    rep.check(
        "packing-valid",
        valid,
        format!(
            "{} balls, smallest radius 1/{}",
            balls.len(),
            packing.last_k
        ),
    );

    let tent = TentSum::new(packing.family.clone());
    let ax = cfg.axis(0, (-0.25, 1.25, 1.0 / 128.0))?;
    let ay = cfg.axis(1, (-0.25, 1.25, 1.0 / 128.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut worst = f64::NEG_INFINITY;
    let pairs = 10_000;
    for i in 0..pairs {
        let x = [rng.gen_range(ax.lo..=ax.hi), rng.gen_range(ay.lo..=ay.hi)];
        // Alternate far pairs with pairs at most 1/16 apart.
        let y = if i % 2 == 0 {
            [rng.gen_range(ax.lo..=ax.hi), rng.gen_range(ay.lo..=ay.hi)]
        } else {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = rng.gen_range(0.0..1.0 / 16.0);
            [x[0] + s * t.cos(), x[1] + s * t.sin()]
        };
        let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
        worst = worst.max((tent.eval(&x) - tent.eval(&y)).abs() - d);
    }
    rep.check(
        "tent-lipschitz",
        worst <= TENT_SLACK,
        format!(
            "max |f(x) - f(y)| - |x - y| = {worst} over {pairs} pairs, seed {}",
            cfg.seed()
        ),
    );

    let f = tent.sample_2d(ax, ay)?;
    let radii = cfg.radii((8.0 * ax.h.max(ay.h), 1));
    let largest = radii[0];
    let field = llip_field(&f, &radii)?;
    rep.track(&field.estimates);
    let (mut inside, mut inside_min, mut outside, mut outside_max) =
        (0usize, f64::INFINITY, 0usize, 0.0f64);
    for (k, e) in field.estimates.iter().enumerate() {
        let p = f.coords(k);
        if let Some(id) = packing.family.containing(&p) {
            let b = &balls[id];
            let depth =
                b.radius - ((p[0] - b.center[0]).powi(2) + (p[1] - b.center[1]).powi(2)).sqrt();
            if depth >= largest {
                inside += 1;
                inside_min = inside_min.min(e.llip_final);
            }
        } else if packing.family.distance_to_union(&p) > largest {
            outside += 1;
            outside_max = outside_max.max(e.llip_final);
        }
    }
    let tol = cfg.tol();
    rep.check(
        "inside-balls",
        inside > 0 && inside_min >= 1.0 - tol,
        format!(
            "min local estimate {inside_min} over {inside} points at depth >= {largest} in a ball"
        ),
    );
    rep.check(
        "outside-closure",
        outside > 0 && outside_max <= tol,
        format!("max local estimate {outside_max} over {outside} points farther than {largest} from the balls"),
    );
    rep.close_ordering();
    rep.rows = field.estimates;
    Ok(rep)
}

/// `f(a) = g(|a|)` with `g` the measure primitive of a Cantor set.
pub fn radial(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Radial, cfg);
    let line = cfg.line_set(|| quarter_powers(14))?;
    let LineSet::Cantor { set: c, stage } = &line else {
        return Err(Error::Config("this suite needs a Cantor set".into()));
    };
    let (c, stage) = (c.clone(), *stage);
    let h = 0.5f64.powi(9);
    let ax = cfg.axis(0, (-1.25, 1.25, h))?;
    let ay = cfg.axis(1, (-1.25, 1.25, h))?;
    let h = ax.h.max(ay.h);
    let radii = cfg.radii((16.0 * h, 2));
    let smallest = radii[radii.len() - 1];
    let g = MeasurePrimitive::new(line.clone(), 0.0)?;
    let radial = RadialComposition::new(g);

    let a = radial.value([0.6, 0.8]);
    let b = radial.value([1.0, 0.0]);
    rep.check(
        "rotational-invariance",
        a == b,
        format!("f(0.6, 0.8) = {a}, f(1, 0) = {b}"),
    );

    let f = radial.sample(ax, ay)?;

    // Gap samples: |a| in a bounded gap of C_6 and farther than the smallest
    // radius from C_6, so every ball point stays in the gap.
    let gap_stage = stage.min(6);
    let gaps: Vec<(f64, f64)> = c
        .stage(gap_stage)?
        .gaps()
        .into_iter()
        .filter(|(lo, hi)| hi - lo > 2.0 * smallest)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut gap_points = Vec::new();
    let mut attempts = 0;
    while gap_points.len() < 64 && !gaps.is_empty() && attempts < 100_000 {
        attempts += 1;
        let (lo, hi) = gaps[rng.gen_range(0..gaps.len())];
        let rho = rng.gen_range(lo..hi);
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let Some(p) = f.nearest(&[rho * t.cos(), rho * t.sin()]) else {
            continue;
        };
        let k = f.flat_index(&p).unwrap();
        let q = f.coords(k);
        let norm = (q[0] * q[0] + q[1] * q[1]).sqrt();
        if c.distance(norm, gap_stage)? > smallest && !gap_points.contains(&p) {
            gap_points.push(p);
        }
    }
    let mut gap_max = 0.0f64;
    for p in &gap_points {
        let e = llip_estimate(&f, p, &radii)?;
        gap_max = gap_max.max(e.llip_final);
        rep.rows.push(e);
    }
    let tol = cfg.tol();
    rep.check(
        "gap-points",
        gap_points.len() == 64 && gap_max <= tol,
        format!(
            "max local estimate {gap_max} over {} points with |a| in a stage-{gap_stage} gap (seed {})",
            gap_points.len(),
            cfg.seed()
        ),
    );

    // Endpoint samples on the axes, where |a| is exactly the endpoint.
    let mut end_points: Vec<Vec<usize>> = Vec::new();
    let mut off_grid = 0;
    for e in c.stage_endpoints(stage.min(4))? {
        for q in [[e, 0.0], [-e, 0.0], [0.0, e], [0.0, -e]] {
            match exact_grid_point(&f, &q) {
                Some(k) => {
                    let p = f.grid_point(k);
                    if !end_points.contains(&p) {
                        end_points.push(p);
                    }
                }
                None => off_grid += 1,
            }
        }
    }
    let mut end_min = f64::INFINITY;
    for p in &end_points {
        let e = llip_estimate(&f, p, &radii)?;
        end_min = end_min.min(e.llip_final);
        rep.rows.push(e);
    }
    rep.check(
        "endpoint-points",
        off_grid == 0 && !end_points.is_empty() && end_min >= RADIAL_ENDPOINT_FLOOR,
        format!(
            "min local estimate {end_min} over {} axis points with |a| a stage-{} endpoint ({off_grid} off grid; floor {RADIAL_ENDPOINT_FLOOR})",
            end_points.len(),
            stage.min(4)
        ),
    );
    let rows = std::mem::take(&mut rep.rows);
    rep.track(&rows);
    rep.rows = rows;
    rep.close_ordering();
    Ok(rep)
}
