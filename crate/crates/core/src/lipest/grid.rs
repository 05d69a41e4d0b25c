use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One axis of a uniform grid: `lo, lo + h, ..., hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis<T> {
    pub lo: T,
    pub hi: T,
    pub h: T,
}

impl<T: Real> GridAxis<T> {
    /// Fails unless `h > 0` divides `hi - lo` (to relative precision 1e-9).
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(lo: T, hi: T, h: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && h.is_finite()) {
            return Err(Error::InvalidGrid("non-finite axis parameter".into()));
        }
        if !(h > T::zero()) || hi < lo {
            return Err(Error::InvalidGrid(format!(
                "axis [{lo}, {hi}] with spacing {h}"
            )));
        }
        let steps = (hi - lo) / h;
        let rounded = steps.round();
        if (steps - rounded).abs() > T::lit(1e-9) * rounded.max(T::one()) {
            return Err(Error::InvalidGrid(format!(
                "spacing {h} does not divide [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, h })
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.h).round().to_usize().unwrap() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn coord(&self, i: usize) -> T {
        self.lo + T::count(i) * self.h
    }
}

/// Real samples on a uniform grid in one or two dimensions.
///
/// Values are stored row-major: in 2D the flat index of `(i, j)` is
/// `i * shape[1] + j`, with `i` along the first axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    origin: Vec<T>,
    spacing: Vec<T>,
    shape: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn from_parts(
        origin: Vec<T>,
        spacing: Vec<T>,
        shape: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        let dim = shape.len();
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not supported")));
        }
        if origin.len() != dim || spacing.len() != dim {
            return Err(Error::InvalidGrid(
                "origin/spacing length differs from shape".into(),
            ));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > T::zero())) {
            return Err(Error::InvalidGrid(
                "spacing must be positive and finite".into(),
            ));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        if shape.contains(&0) {
            return Err(Error::InvalidGrid("empty axis".into()));
        }
        let expected: usize = shape.iter().product();
        if values.len() != expected {
            return Err(Error::InvalidGrid(format!(
                "{} samples for shape {shape:?}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample {pos}")));
        }
        Ok(Self {
            origin,
            spacing,
            shape,
            values,
        })
    }

    pub fn sample_1d<F>(axis: GridAxis<T>, f: F) -> Result<Self>
    where
        F: Fn(T) -> T + Sync,
    {
        let n = axis.len();
        let values = (0..n).into_par_iter().map(|i| f(axis.coord(i))).collect();
        Self::from_parts(vec![axis.lo], vec![axis.h], vec![n], values)
    }

    pub fn sample_2d<F>(x: GridAxis<T>, y: GridAxis<T>, f: F) -> Result<Self>
    where
        F: Fn([T; 2]) -> T + Sync,
    {
        let (nx, ny) = (x.len(), y.len());
        let values = (0..nx * ny)
            .into_par_iter()
            .map(|k| f([x.coord(k / ny), y.coord(k % ny)]))
            .collect();
        Self::from_parts(vec![x.lo, y.lo], vec![x.h, y.h], vec![nx, ny], values)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn origin(&self) -> &[T] {
        &self.origin
    }

    pub fn spacing(&self) -> &[T] {
        &self.spacing
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn value(&self, flat: usize) -> T {
        self.values[flat]
    }

    pub fn max_spacing(&self) -> T {
        self.spacing.iter().copied().fold(T::zero(), T::max)
    }

    pub fn flat_index(&self, point: &[usize]) -> Option<usize> {
        if point.len() != self.dim() || point.iter().zip(&self.shape).any(|(p, n)| p >= n) {
            return None;
        }
        Some(match self.dim() {
            1 => point[0],
            _ => point[0] * self.shape[1] + point[1],
        })
    }

    pub fn grid_point(&self, flat: usize) -> Vec<usize> {
        match self.dim() {
            1 => vec![flat],
            _ => vec![flat / self.shape[1], flat % self.shape[1]],
        }
    }

    pub fn coords(&self, flat: usize) -> Vec<T> {
        self.grid_point(flat)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.origin[k] + T::count(i) * self.spacing[k])
            .collect()
    }

    /// Grid point nearest to `coords`, if it lies within half a cell of the grid.
    pub fn nearest(&self, coords: &[T]) -> Option<Vec<usize>> {
        if coords.len() != self.dim() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim());
        for (k, &c) in coords.iter().enumerate() {
            let t = ((c - self.origin[k]) / self.spacing[k]).round();
            if t < T::zero() {
                return None;
            }
            let i = t.to_usize()?;
            if i >= self.shape[k] {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }

    /// Lower and upper corners of the sampled box.
    pub fn domain_box(&self) -> (Vec<T>, Vec<T>) {
        let hi = (0..self.dim())
            .map(|k| self.origin[k] + T::count(self.shape[k] - 1) * self.spacing[k])
            .collect();
        (self.origin.clone(), hi)
    }

    /// Euclidean length of the grid offset `(di, dj)`. Every pair distance
    /// in the estimators goes through this function, so equal offsets give
    /// bit-identical distances.
    #[inline]
    pub fn offset_distance(&self, di: usize, dj: usize) -> T {
        match self.dim() {
            1 => T::count(di) * self.spacing[0],
            _ => {
                let a = T::count(di) * self.spacing[0];
                let b = T::count(dj) * self.spacing[1];
                (a * a + b * b).sqrt()
            }
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            values: self.values.iter().map(|v| *v * c).collect(),
            ..self.clone()
        }
    }
}
