//! Rectangular (s, t) sample grids.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed rectangle `[s_min, s_max] x [t_min, t_max]` sampled with `n_s x n_t` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_s: usize,
    pub n_t: usize,
}

impl GridSpec {
    pub fn new(s_range: (f64, f64), t_range: (f64, f64), n_s: usize, n_t: usize) -> Result<Self> {
        let g = Self { s_min: s_range.0, s_max: s_range.1, t_min: t_range.0, t_max: t_range.1, n_s, n_t };
        g.validate()?;
        Ok(g)
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new((lo, hi), (lo, hi), n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.s_min, self.s_max) || !ok(self.t_min, self.t_max) {
            return Err(Error::Config(format!(
                "degenerate range s [{}, {}], t [{}, {}]",
                self.s_min, self.s_max, self.t_min, self.t_max
            )));
        }
        if self.n_s < 2 || self.n_t < 2 {
            return Err(Error::Config(format!("need at least 2x2 samples, got {}x{}", self.n_s, self.n_t)));
        }
        Ok(())
    }

    pub fn s_values(&self) -> Vec<f64> {
        linspace(self.s_min, self.s_max, self.n_s)
    }

    pub fn t_values(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.n_t)
    }

    pub fn len(&self) -> usize {
        self.n_s * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All sample points, t-major (s varies fastest).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let s = self.s_values();
        self.t_values().into_iter().flat_map(|t| s.iter().map(move |&s| (s, t))).collect()
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { b } else { a + h * k as f64 }).collect()
        }
    }
}

/// Values of type `T` on a uniform lattice, stored t-major (`values[j * n_s + i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<T>,
}

impl<T> Lattice<T> {
    pub fn from_values(s: Vec<f64>, t: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if s.len() * t.len() != values.len() {
            return Err(Error::Dimension(format!(
                "{}x{} lattice needs {} values, got {}",
                s.len(),
                t.len(),
                s.len() * t.len(),
                values.len()
            )));
        }
        Ok(Self { s, t, values })
    }

    pub fn n_s(&self) -> usize {
        self.s.len()
    }

    pub fn n_t(&self) -> usize {
        self.t.len()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.s.len() + i
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.values[self.index(i, j)]
    }

    /// Spacing in s; assumes a uniform lattice with at least two columns.
    pub fn hs(&self) -> f64 {
        self.s[1] - self.s[0]
    }

    pub fn ht(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Lattice<U> {
        Lattice { s: self.s.clone(), t: self.t.clone(), values: self.values.iter().map(f).collect() }
    }

    /// Sub-lattice `i in i0..i1`, `j in j0..j1`.
    pub fn crop(&self, i0: usize, i1: usize, j0: usize, j1: usize) -> Lattice<T>
    where
        T: Clone,
    {
        let mut values = Vec::with_capacity((i1 - i0) * (j1 - j0));
        for j in j0..j1 {
            for i in i0..i1 {
                values.push(self.at(i, j).clone());
            }
        }
        Lattice { s: self.s[i0..i1].to_vec(), t: self.t[j0..j1].to_vec(), values }
    }

    /// Index of the node at coordinate `(s, t)`, if it lies on the lattice.
    pub fn locate(&self, s: f64, t: f64) -> Option<(usize, usize)> {
        Some((locate_1d(&self.s, s)?, locate_1d(&self.t, t)?))
    }
}

impl<T: Send> Lattice<T> {
    /// Evaluate `f` on every node of `grid`, rows in parallel.
    pub fn tabulate<F>(grid: &GridSpec, f: F) -> Lattice<T>
    where
        F: Fn(f64, f64) -> T + Sync,
    {
        Self::tabulate_axes(grid.s_values(), grid.t_values(), f)
    }

    pub fn tabulate_axes<F>(s: Vec<f64>, t: Vec<f64>, f: F) -> Lattice<T>
    where
        F: Fn(f64, f64) -> T + Sync,
    {
        let values: Vec<T> = t
            .par_iter()
            .flat_map_iter(|&tj| s.iter().map(move |&si| (si, tj)).collect::<Vec<_>>())
            .map(|(si, tj)| f(si, tj))
            .collect();
        Lattice { s, t, values }
    }
}

fn locate_1d(axis: &[f64], x: f64) -> Option<usize> {
    let n = axis.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return ((axis[0] - x).abs() < 1e-9).then_some(0);
    }
    let h = axis[1] - axis[0];
    let k = ((x - axis[0]) / h).round();
    if k < 0.0 || k >= n as f64 {
        return None;
    }
    let k = k as usize;
    ((axis[k] - x).abs() <= 1e-6 * h.abs()).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-10.0, 10.0, 21);
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], -10.0);
        assert_eq!(v[20], 10.0);
        assert!((v[10]).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::square(-1.0, 1.0, 2).is_ok());
        assert!(GridSpec::square(1.0, 1.0, 5).is_err());
        assert!(GridSpec::square(-1.0, 1.0, 1).is_err());
    }

    #[test]
    fn lattice_layout_and_locate() {
        let g = GridSpec::new((0.0, 1.0), (0.0, 2.0), 3, 5).unwrap();
        let lat = Lattice::tabulate(&g, |s, t| (s, t));
        assert_eq!(*lat.at(2, 4), (1.0, 2.0));
        assert_eq!(lat.locate(0.5, 1.5), Some((1, 3)));
        assert_eq!(lat.locate(0.25, 1.5), None);
        assert_eq!(lat.locate(0.5, 2.5), None);
        let sub = lat.crop(1, 3, 2, 4);
        assert_eq!(*sub.at(0, 0), (0.5, 1.0));
    }
}
