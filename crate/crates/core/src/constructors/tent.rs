use serde::{Deserialize, Serialize};

use crate::constructors::index::BallIndex;
use crate::error::{Error, Result};
use crate::lipest::{GridAxis, GridFunction};
use crate::scalar::Real;

fn euclid<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y) * (*x - *y))
        .fold(T::zero(), |s, v| s + v)
        .sqrt()
}

/// `max{0, radius - |x - center|}`, Euclidean norm.
pub fn tent_eval<T: Real>(center: &[T], radius: T, x: &[T]) -> T {
    (radius - euclid(center, x)).max(T::zero())
}

/// Open ball; serialized as `{"c": [...], "r": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball<T> {
    #[serde(rename = "c")]
    pub center: Vec<T>,
    #[serde(rename = "r")]
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn new(center: Vec<T>, radius: T) -> Self {
        Self { center, radius }
    }

    fn planar(&self) -> [T; 2] {
        [
            self.center[0],
            self.center.get(1).copied().unwrap_or(T::zero()),
        ]
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct FamilyJson<T> {
    balls: Vec<Ball<T>>,
}

/// Pairwise disjoint open balls in the line or the plane, with a spatial
/// index for point location.
#[derive(Clone, Debug)]
pub struct BallFamily<T> {
    dim: usize,
    balls: Vec<Ball<T>>,
    index: BallIndex<T>,
}

impl<T: Real> BallFamily<T> {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            balls: Vec::new(),
            index: BallIndex::new(),
        }
    }

    /// Fails if any two balls overlap, i.e. `|c_i - c_j| < r_i + r_j`.
    pub fn new(dim: usize, balls: Vec<Ball<T>>) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidBall(format!("dimension {dim} not supported")));
        }
        let mut fam = Self::empty(dim);
        for b in balls {
            fam.push(b)?;
        }
        Ok(fam)
    }

    /// Appends a ball after checking it against the family.
    pub fn push(&mut self, ball: Ball<T>) -> Result<()> {
        if ball.center.len() != self.dim {
            return Err(Error::InvalidBall(format!(
                "centre of length {} in dimension {}",
                ball.center.len(),
                self.dim
            )));
        }
        if !(ball.radius.is_finite() && ball.radius > T::zero())
            || ball.center.iter().any(|c| !c.is_finite())
        {
            return Err(Error::InvalidBall(format!(
                "radius {} or centre not finite/positive",
                ball.radius
            )));
        }
        if let Some(first) = self.index.first_overlap(ball.planar(), ball.radius) {
            return Err(Error::OverlappingBalls {
                first,
                second: self.balls.len(),
            });
        }
        self.index.insert(ball.planar(), ball.radius);
        self.balls.push(ball);
        Ok(())
    }

    /// `true` if the ball would be disjoint from every member.
    pub fn fits(&self, center: [T; 2], radius: T) -> bool {
        self.index.first_overlap(center, radius).is_none()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn balls(&self) -> &[Ball<T>] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Index of the ball containing `x`, found through the spatial index.
    pub fn containing(&self, x: &[T]) -> Option<usize> {
        let p = [x[0], x.get(1).copied().unwrap_or(T::zero())];
        self.index.containing(p)
    }

    /// Distance from `x` to the closure of the union of the balls.
    pub fn distance_to_union(&self, x: &[T]) -> T {
        self.balls
            .iter()
            .map(|b| (euclid(&b.center, x) - b.radius).max(T::zero()))
            .fold(T::infinity(), T::min)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&FamilyJson {
            balls: self.balls.clone(),
        })?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let parsed: FamilyJson<T> = serde_json::from_str(json)?;
        let dim = parsed.balls.first().map_or(2, |b| b.center.len());
        Self::new(dim, parsed.balls)
    }
}

/// Sum of the tent functions of a disjoint family; at most one term is
/// nonzero at any point.
#[derive(Clone, Debug)]
pub struct TentSum<T> {
    family: BallFamily<T>,
}

impl<T: Real> TentSum<T> {
    pub fn new(family: BallFamily<T>) -> Self {
        Self { family }
    }

    pub fn family(&self) -> &BallFamily<T> {
        &self.family
    }

    pub fn eval(&self, x: &[T]) -> T {
        match self.family.containing(x) {
            Some(id) => {
                let b = &self.family.balls[id];
                tent_eval(&b.center, b.radius, x)
            }
            None => T::zero(),
        }
    }

    pub fn sample_2d(&self, x: GridAxis<T>, y: GridAxis<T>) -> Result<GridFunction<T>> {
        GridFunction::sample_2d(x, y, |p| self.eval(&p))
    }
}
