//! Finite-difference stencils on lattices.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::grid::Lattice;

/// Values that can be differenced: a real vector space.
pub trait FieldValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FieldValue for T where T: Copy + Send + Sync + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Second-order derivative of a uniformly sampled sequence: central in the
/// interior, three-point one-sided at the two ends.
pub fn derivative_1d<T: FieldValue>(v: &[T], h: f64) -> Result<Vec<T>> {
    let n = v.len();
    if n < 3 {
        return Err(Error::TooFewSamples { need: 3, got: n });
    }
    let k = 0.5 / h;
    let mut out = Vec::with_capacity(n);
    out.push((v[1] * 4.0 - v[0] * 3.0 - v[2]) * k);
    for i in 1..n - 1 {
        out.push((v[i + 1] - v[i - 1]) * k);
    }
    out.push((v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) * k);
    Ok(out)
}

/// d/ds on the full lattice.
pub fn d_ds<T: FieldValue>(f: &Lattice<T>) -> Result<Lattice<T>> {
    let (ns, nt) = (f.n_s(), f.n_t());
    let h = f.hs();
    let mut values = Vec::with_capacity(ns * nt);
    for j in 0..nt {
        values.extend(derivative_1d(&f.values[j * ns..(j + 1) * ns], h)?);
    }
    Lattice::from_values(f.s.clone(), f.t.clone(), values)
}

/// d/dt on the full lattice.
pub fn d_dt<T: FieldValue>(f: &Lattice<T>) -> Result<Lattice<T>> {
    let (ns, nt) = (f.n_s(), f.n_t());
    let h = f.ht();
    let mut values = f.values.clone();
    for i in 0..ns {
        let col: Vec<T> = (0..nt).map(|j| *f.at(i, j)).collect();
        for (j, d) in derivative_1d(&col, h)?.into_iter().enumerate() {
            values[j * ns + i] = d;
        }
    }
    Lattice::from_values(f.s.clone(), f.t.clone(), values)
}

/// Central d/ds at interior node (i, j).
#[inline]
pub fn central_s<T: FieldValue>(f: &Lattice<T>, i: usize, j: usize) -> T {
    (*f.at(i + 1, j) - *f.at(i - 1, j)) * (0.5 / f.hs())
}

/// Central d/dt at interior node (i, j).
#[inline]
pub fn central_t<T: FieldValue>(f: &Lattice<T>, i: usize, j: usize) -> T {
    (*f.at(i, j + 1) - *f.at(i, j - 1)) * (0.5 / f.ht())
}

/// Four-point cross stencil for the mixed derivative at interior node (i, j).
#[inline]
pub fn mixed<T: FieldValue>(f: &Lattice<T>, i: usize, j: usize) -> T {
    (*f.at(i + 1, j + 1) - *f.at(i + 1, j - 1) - *f.at(i - 1, j + 1) + *f.at(i - 1, j - 1))
        * (0.25 / (f.hs() * f.ht()))
}

/// Cumulative trapezoid integral of a uniformly sampled sequence, zero at `anchor`.
pub fn cumulative_trapezoid(v: &[f64], h: f64, anchor: usize) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    for i in anchor + 1..n {
        out[i] = out[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    }
    for i in (0..anchor).rev() {
        out[i] = out[i + 1] - 0.5 * h * (v[i] + v[i + 1]);
    }
    out
}

/// Remove 2 pi jumps so that consecutive samples differ by less than pi.
pub fn unwrap_phase(v: &[f64]) -> Vec<f64> {
    use std::f64::consts::TAU;
    let mut out = Vec::with_capacity(v.len());
    let mut offset = 0.0;
    for (k, &x) in v.iter().enumerate() {
        if k > 0 {
            let d: f64 = x + offset - out[k - 1];
            offset -= TAU * (d / TAU).round();
        }
        out.push(x + offset);
    }
    out
}
