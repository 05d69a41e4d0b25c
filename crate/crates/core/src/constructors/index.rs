//! Spatial hash over balls of widely varying radii.
//!
//! Balls are binned by `floor(log2 r)`; each bin hashes centres into square
//! cells of side twice the largest radius in the bin. A query then touches a
//! bounded number of cells per bin regardless of the family size.

use std::collections::HashMap;

use crate::scalar::Real;

#[derive(Clone, Debug)]
struct Level<T> {
    cell: T,
    max_radius: T,
    cells: HashMap<[i64; 2], Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct BallIndex<T> {
    levels: HashMap<i32, Level<T>>,
    centers: Vec<[T; 2]>,
    radii: Vec<T>,
}

fn cell_of<T: Real>(p: [T; 2], cell: T) -> [i64; 2] {
    [
        (p[0] / cell).floor().to_i64().unwrap_or(i64::MAX),
        (p[1] / cell).floor().to_i64().unwrap_or(i64::MAX),
    ]
}

impl<T: Real> BallIndex<T> {
    pub fn new() -> Self {
        Self {
            levels: HashMap::new(),
            centers: Vec::new(),
            radii: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    fn bin(radius: T) -> i32 {
        radius.log2().floor().to_i32().unwrap_or(0)
    }

    /// Inserts a ball; returns its index.
    pub fn insert(&mut self, center: [T; 2], radius: T) -> usize {
        let id = self.radii.len();
        self.centers.push(center);
        self.radii.push(radius);
        let bin = Self::bin(radius);
        // Cell side 2^(bin + 2) bounds twice any radius in the bin.
        let cell = T::lit(2.0).powi(bin + 2);
        let level = self.levels.entry(bin).or_insert_with(|| Level {
            cell,
            max_radius: T::zero(),
            cells: HashMap::new(),
        });
        level.max_radius = level.max_radius.max(radius);
        level
            .cells
            .entry(cell_of(center, cell))
            .or_default()
            .push(id);
        id
    }

    /// Calls `visit(id)` for every ball whose centre lies within
    /// `radius + rho` of `p` (a superset filter; callers test exactly).
    pub fn for_each_near(&self, p: [T; 2], rho: T, mut visit: impl FnMut(usize)) {
        for level in self.levels.values() {
            let reach = level.max_radius + rho;
            let lo = cell_of([p[0] - reach, p[1] - reach], level.cell);
            let hi = cell_of([p[0] + reach, p[1] + reach], level.cell);
            for i in lo[0]..=hi[0] {
                for j in lo[1]..=hi[1] {
                    if let Some(ids) = level.cells.get(&[i, j]) {
                        for &id in ids {
                            visit(id);
                        }
                    }
                }
            }
        }
    }

    /// The ball whose open interior contains `p`, if any.
    pub fn containing(&self, p: [T; 2]) -> Option<usize> {
        let mut found = None;
        self.for_each_near(p, T::zero(), |id| {
            if found.is_none() {
                let c = self.centers[id];
                let d = crate::plane::dist2(p, c);
                if d < self.radii[id] {
                    found = Some(id);
                }
            }
        });
        found
    }

    /// First indexed ball that overlaps the open ball `B(center, radius)`.
    pub fn first_overlap(&self, center: [T; 2], radius: T) -> Option<usize> {
        let mut found: Option<usize> = None;
        self.for_each_near(center, radius, |id| {
            let d = crate::plane::dist2(center, self.centers[id]);
            if d < self.radii[id] + radius && found.is_none_or(|f| id < f) {
                found = Some(id);
            }
        });
        found
    }
}
