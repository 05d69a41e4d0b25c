use thiserror::Error;

/// Errors raised by set construction, estimators and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("interval [{lo}, {hi}] has lo > hi")]
    ReversedInterval { lo: f64, hi: f64 },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("gap lengths must be positive (alpha_{index} = {value})")]
    NonPositiveGap { index: usize, value: f64 },
    #[error("summability violated: sum 2^(n-1) alpha_n = {sum} >= 1")]
    SummabilityViolated { sum: f64 },
    #[error("stage {stage} infeasible: gap {gap} does not fit in interval of length {length}")]
    InfeasibleStage { stage: usize, gap: f64, length: f64 },
    #[error("stage {stage} exceeds max_stage {max}")]
    StageOutOfRange { stage: usize, max: usize },
    #[error("gap sequence has no summable tail; measure queries are unavailable")]
    NoTailBound,
    #[error("window [{u}, {v}] has u > v")]
    ReversedWindow { u: f64, v: f64 },
    #[error("invalid radius sweep: {0}")]
    InvalidRadii(String),
    #[error("ball of radius {radius} around point {point:?} holds fewer than 2 grid points")]
    SparseBall { point: Vec<usize>, radius: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("balls {first} and {second} overlap")]
    OverlappingBalls { first: usize, second: usize },
    #[error("invalid ball: {0}")]
    InvalidBall(String),
    #[error("sample point {0:?} is not in the set")]
    NotInSet(Vec<f64>),
    #[error("no witness ball with ratio >= {threshold} at level {level}")]
    NoWitness { level: usize, threshold: f64 },
    #[error("resolution {resolution} does not resolve the set: {reason}")]
    Unresolved { resolution: usize, reason: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
