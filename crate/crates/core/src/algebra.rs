//! Small dense complex matrices and the R^3 <-> su(2) dictionary.
//!
//! `CMatrix` is the general square/rectangular kernel used for the Date
//! systems (2N x 2N). `Mat2` is a copyable 2x2 specialisation for frames and
//! Lax matrices, which are evaluated millions of times in residual sweeps.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::ALG_EPS;

pub type Complex = Complex64;

pub const I: Complex = Complex::new(0.0, 1.0);
pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Row-major dense complex matrix. Operations return fresh values.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_row_major(n, m, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = ONE;
        }
        m
    }

    pub fn diag(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (k, z) in entries.iter().enumerate() {
            m.data[k * n + k] = *z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.data[r * self.cols + c]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, z: Complex) {
        self.data[r * self.cols + c] = z;
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self.get(r, k)).collect()
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// Copy of `self` with column `k` (1-based) replaced by `v`.
    pub fn replace_column(&self, k: usize, v: &[Complex]) -> Result<CMatrix> {
        if k == 0 || k > self.cols {
            return Err(Error::ColumnOutOfRange { index: k, cols: self.cols });
        }
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("column of length {} for {} rows", v.len(), self.rows)));
        }
        let mut out = self.clone();
        for (r, z) in v.iter().enumerate() {
            out.set(r, k - 1, *z);
        }
        Ok(out)
    }

    /// Assemble a 2x2 block matrix `[[a, b], [c, d]]` of equally sized blocks.
    pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> Result<CMatrix> {
        let (n, m) = (a.rows, a.cols);
        for blk in [b, c, d] {
            if blk.rows != n || blk.cols != m {
                return Err(Error::Dimension("blocks must share one shape".into()));
            }
        }
        let mut out = CMatrix::zeros(2 * n, 2 * m);
        for r in 0..n {
            for col in 0..m {
                out.set(r, col, a.get(r, col));
                out.set(r, col + m, b.get(r, col));
                out.set(r + n, col, c.get(r, col));
                out.set(r + n, col + m, d.get(r, col));
            }
        }
        Ok(out)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Determinant by LU with partial pivoting; closed form up to 2x2.
pub fn det(m: &CMatrix) -> Result<Complex> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    match n {
        0 => return Err(Error::Dimension("determinant of an empty matrix".into())),
        1 => return Ok(m.get(0, 0)),
        2 => return Ok(m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)),
        _ => {}
    }
    let mut a = m.data.clone();
    let mut det = ONE;
    for k in 0..n {
        let (piv, best) = (k..n)
            .map(|r| (r, a[r * n + k].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Ok(ZERO);
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[k * n + k];
        det *= p;
        for r in (k + 1)..n {
            let f = a[r * n + k] / p;
            if f == ZERO {
                continue;
            }
            for c in (k + 1)..n {
                let v = a[k * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    Ok(det)
}

/// Copyable 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: ONE, b: ZERO, c: ZERO, d: ONE };
    pub const ZERO: Mat2 = Mat2 { a: ZERO, b: ZERO, c: ZERO, d: ZERO };

    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self { a, b, c, d }
    }

    pub fn diag(a: Complex, d: Complex) -> Self {
        Self { a, b: ZERO, c: ZERO, d }
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex {
        self.a + self.d
    }

    pub fn adjoint(&self) -> Self {
        Self { a: self.a.conj(), b: self.c.conj(), c: self.b.conj(), d: self.d.conj() }
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            return None;
        }
        Some(Self { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det })
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    pub fn scale_re(&self, k: f64) -> Self {
        Self { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    pub fn commutator(&self, rhs: &Mat2) -> Mat2 {
        *self * *rhs - *rhs * *self
    }

    pub fn frobenius(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Frobenius norm of `X + X^*`.
    pub fn anti_hermitian_defect(&self) -> f64 {
        (*self + self.adjoint()).frobenius()
    }

    /// Trace-free anti-Hermitian part, the orthogonal projection onto su(2).
    pub fn su2_part(&self) -> Mat2 {
        let ah = (*self - self.adjoint()).scale_re(0.5);
        let tr = ah.trace() * 0.5;
        Mat2 { a: ah.a - tr, b: ah.b, c: ah.c, d: ah.d - tr }
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix { rows: 2, cols: 2, data: vec![self.a, self.b, self.c, self.d] }
    }

    pub fn from_cmatrix(m: &CMatrix) -> Result<Self> {
        if m.rows != 2 || m.cols != 2 {
            return Err(Error::Dimension(format!("expected 2x2, got {}x{}", m.rows, m.cols)));
        }
        Ok(Self::new(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)))
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, r: Mat2) -> Mat2 {
        Mat2 { a: self.a + r.a, b: self.b + r.b, c: self.c + r.c, d: self.d + r.d }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        Mat2 { a: self.a - r.a, b: self.b - r.b, c: self.c - r.c, d: self.d - r.d }
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: f64) -> Mat2 {
        self.scale_re(k)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

/// A point of R^3, identified with su(2) through [`su2_embed`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Su2Vector {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Su2Vector {
    pub const ZERO: Su2Vector = Su2Vector { p: 0.0, q: 0.0, r: 0.0 };

    pub const fn new(p: f64, q: f64, r: f64) -> Self {
        Self { p, q, r }
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.p, self.q, self.r)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn dot(self, o: Su2Vector) -> f64 {
        self.p * o.p + self.q * o.q + self.r * o.r
    }

    pub fn cross(self, o: Su2Vector) -> Su2Vector {
        Su2Vector::new(
            self.q * o.r - self.r * o.q,
            self.r * o.p - self.p * o.r,
            self.p * o.q - self.q * o.p,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Su2Vector {
        Su2Vector::new(self.p * k, self.q * k, self.r * k)
    }

    pub fn is_finite(self) -> bool {
        self.p.is_finite() && self.q.is_finite() && self.r.is_finite()
    }
}

impl Add for Su2Vector {
    type Output = Su2Vector;
    fn add(self, o: Su2Vector) -> Su2Vector {
        Su2Vector::new(self.p + o.p, self.q + o.q, self.r + o.r)
    }
}

impl Sub for Su2Vector {
    type Output = Su2Vector;
    fn sub(self, o: Su2Vector) -> Su2Vector {
        Su2Vector::new(self.p - o.p, self.q - o.q, self.r - o.r)
    }
}

impl Mul<f64> for Su2Vector {
    type Output = Su2Vector;
    fn mul(self, k: f64) -> Su2Vector {
        self.scale(k)
    }
}

impl Neg for Su2Vector {
    type Output = Su2Vector;
    fn neg(self) -> Su2Vector {
        self.scale(-1.0)
    }
}

/// (p, q, r) -> (1/2) [[i r, -p - i q], [p - i q, -i r]].
pub fn su2_embed(v: Su2Vector) -> Mat2 {
    Mat2::new(
        c(0.0, 0.5 * v.r),
        c(-0.5 * v.p, -0.5 * v.q),
        c(0.5 * v.p, -0.5 * v.q),
        c(0.0, -0.5 * v.r),
    )
}

/// Inverse of [`su2_embed`]; rejects matrices outside su(2) beyond [`ALG_EPS`].
pub fn su2_extract(m: &Mat2) -> Result<Su2Vector> {
    su2_extract_tol(m, ALG_EPS)
}

pub fn su2_extract_tol(m: &Mat2, tol: f64) -> Result<Su2Vector> {
    let defect = m.anti_hermitian_defect();
    let trace = m.trace().norm();
    let scale = m.frobenius().max(1.0);
    if defect > tol * scale || trace > tol * scale {
        return Err(Error::NotSu2 { defect, trace });
    }
    Ok(su2_extract_unchecked(m))
}

/// Reads (p, q, r) off the (2,1) and (1,1) entries, averaging with the mirror entries.
pub fn su2_extract_unchecked(m: &Mat2) -> Su2Vector {
    // (2,1) = (p - i q)/2 and (1,2) = (-p - i q)/2
    let p = m.c.re - m.b.re;
    let q = -(m.c.im + m.b.im);
    let r = m.a.im - m.d.im;
    Su2Vector::new(p, q, r)
}

/// a x b computed as the su(2) commutator.
pub fn cross_via_bracket(a: Su2Vector, b: Su2Vector) -> Su2Vector {
    su2_extract_unchecked(&su2_embed(a).commutator(&su2_embed(b)))
}

/// <a, b> computed as -2 tr(ab) in su(2).
pub fn inner_via_trace(a: Su2Vector, b: Su2Vector) -> f64 {
    -2.0 * (su2_embed(a) * su2_embed(b)).trace().re
}
