use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;

/// Half-open box `x_k in [lo[k], hi[k])` on each of the first `dim` axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
}

/// Uniform tiling of `[0, 1]^d` by `cells[0] x ... x cells[d-1]` boxes.
///
/// Rectangles are numbered row-major with axis 0 outermost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectPartition {
    cells: Vec<usize>,
}

impl RectPartition {
    pub fn uniform(cells: Vec<usize>) -> Result<Self> {
        if cells.is_empty() || cells.len() > MAX_DIM {
            return Err(Error::invalid(format!(
                "partition dimension must be 1 or 2, got {}",
                cells.len()
            )));
        }
        if cells.contains(&0) {
            return Err(Error::invalid("every axis needs at least one cell"));
        }
        Ok(Self { cells })
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cells_per_axis(&self) -> &[usize] {
        &self.cells
    }

    /// Number of rectangles `N`.
    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `j`-th cut along `axis`, `j / cells[axis]`; exact at both ends.
    pub fn cut(&self, axis: usize, j: usize) -> f64 {
        let c = self.cells[axis];
        if j >= c {
            1.0
        } else {
            j as f64 / c as f64
        }
    }

    pub fn cell_index(&self, rect: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        let mut rest = rect;
        for axis in (0..self.dim()).rev() {
            idx[axis] = rest % self.cells[axis];
            rest /= self.cells[axis];
        }
        idx
    }

    pub fn rect(&self, i: usize) -> Rect {
        let idx = self.cell_index(i);
        let mut r = Rect {
            lo: [0.0; MAX_DIM],
            hi: [0.0; MAX_DIM],
        };
        for axis in 0..self.dim() {
            r.lo[axis] = self.cut(axis, idx[axis]);
            r.hi[axis] = self.cut(axis, idx[axis] + 1);
        }
        r
    }

    pub fn rects(&self) -> impl Iterator<Item = Rect> + '_ {
        (0..self.len()).map(|i| self.rect(i))
    }

    /// Rectangle containing `x` under half-open semantics; coordinates equal
    /// to 1 fall in the last cell of their axis.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut flat = 0;
        for (axis, &c) in x.iter().enumerate() {
            if !(0.0..=1.0).contains(&c) {
                return None;
            }
            let cells = self.cells[axis];
            let mut k = ((c * cells as f64).floor() as usize).min(cells - 1);
            // Guard against rounding in c * cells at cut coordinates.
            if c < self.cut(axis, k) {
                k -= 1;
            } else if k + 1 < cells && c >= self.cut(axis, k + 1) {
                k += 1;
            }
            flat = flat * cells + k;
        }
        Some(flat)
    }

    pub fn side_length_max(&self) -> f64 {
        (0..self.dim())
            .flat_map(|axis| (0..self.cells[axis]).map(move |j| (axis, j)))
            .map(|(axis, j)| self.cut(axis, j + 1) - self.cut(axis, j))
            .fold(0.0, f64::max)
    }

    pub fn side_length_min(&self) -> f64 {
        (0..self.dim())
            .flat_map(|axis| (0..self.cells[axis]).map(move |j| (axis, j)))
            .map(|(axis, j)| self.cut(axis, j + 1) - self.cut(axis, j))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `x` to the nearest interior cut plane; infinite when
    /// the partition has no interior cuts.
    pub fn distance_to_cuts(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for (axis, &c) in x.iter().enumerate().take(self.dim()) {
            for j in 1..self.cells[axis] {
                best = best.min((c - self.cut(axis, j)).abs());
            }
        }
        best
    }
}

/// Uniform partition with `ceil(1/delta)` cells per axis, so every side is
/// at most `delta`.
pub fn build_partition(dim: usize, delta: f64) -> Result<RectPartition> {
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(Error::invalid(format!("partition dimension must be 1 or 2, got {dim}")));
    }
    if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    RectPartition::uniform(vec![cells_for_side(delta); dim])
}

/// Smallest cell count `k` with `1/k <= delta`, robust to `1/delta` landing
/// a rounding error above an integer.
fn cells_for_side(delta: f64) -> usize {
    let k = (1.0 / delta).ceil() as usize;
    if k > 1 && 1.0 / (k - 1) as f64 <= delta {
        k - 1
    } else {
        k.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_quarters() {
        let p = build_partition(1, 0.25).unwrap();
        assert_eq!(p.len(), 4);
        let r: Vec<(f64, f64)> = p.rects().map(|r| (r.lo[0], r.hi[0])).collect();
        assert_eq!(r, vec![(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)]);
    }

    #[test]
    fn two_dimensional_counts() {
        assert_eq!(build_partition(2, 0.5).unwrap().len(), 4);
        let p = build_partition(2, 0.3).unwrap();
        assert_eq!(p.cells_per_axis(), &[4, 4]);
        assert_eq!(p.len(), 16);
        assert!(p.side_length_max() <= 0.3);
        assert_eq!(p.side_length_max(), 0.25);
        assert_eq!(build_partition(2, 0.1).unwrap().cells_per_axis(), &[10, 10]);
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(build_partition(1, 0.0).is_err());
        assert!(build_partition(1, 1.5).is_err());
        assert!(build_partition(3, 0.5).is_err());
    }

    #[test]
    fn locate_is_half_open() {
        let p = RectPartition::uniform(vec![4, 2]).unwrap();
        assert_eq!(p.locate(&[0.25, 0.0]), Some(2));
        assert_eq!(p.locate(&[0.2499, 0.5]), Some(1));
        assert_eq!(p.locate(&[1.0, 1.0]), Some(7));
        assert_eq!(p.locate(&[1.1, 0.0]), None);
        let r = p.rect(5);
        assert_eq!((r.lo, r.hi), ([0.5, 0.5], [0.75, 1.0]));
    }

    #[test]
    fn every_point_lies_in_exactly_one_rect() {
        let p = RectPartition::uniform(vec![3, 5]).unwrap();
        for i in 0..=40 {
            for j in 0..=40 {
                let x = [i as f64 / 40.0, j as f64 / 40.0];
                let hits: Vec<usize> = p
                    .rects()
                    .enumerate()
                    .filter(|(_, r)| {
                        (0..2).all(|k| r.lo[k] <= x[k] && (x[k] < r.hi[k] || (r.hi[k] == 1.0 && x[k] == 1.0)))
                    })
                    .map(|(n, _)| n)
                    .collect();
                assert_eq!(hits, vec![p.locate(&x).unwrap()]);
            }
        }
    }
}
