//! Wave functions, Lax matrices, gauge transformations and the 4x4 frame
//! reconstruction of a curve evolution from its coefficient fields.

use nalgebra::{Matrix3, Matrix4};
use rayon::prelude::*;

use crate::algebra::{Complex, Mat2, Su2Vector, I, ZERO};
use crate::curve::CurveGrid;
use crate::date::{determinants_unchecked, fg_polynomials, phase_unchecked, DeterminantBundle, LaxPotential, PolyPair, SolitonParams};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Lattice};
use crate::stencil::{central_s, central_t, d_ds};
use crate::tolerances::{ALG_EPS, LAX_IM_RATIO_WARN};

/// Unnormalised wave function and the SU(2) frame at one (s, t, lambda).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub s: f64,
    pub t: f64,
    pub lambda: f64,
    pub psi: Mat2,
    pub frame: Mat2,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// `Psi = [[f e, -conj(g) e], [g / e, conj(f) / e]]` at real lambda.
pub fn psi_from_polys(pp: &PolyPair, s: f64, t: f64, lambda: f64) -> Mat2 {
    let e = phase_unchecked(s, t, Complex::new(lambda, 0.0));
    let f = pp.f.eval_re(lambda);
    let g = pp.g.eval_re(lambda);
    Mat2::new(f * e, -g.conj() * e, g / e, f.conj() / e)
}

/// `F = Psi / sqrt(det Psi)` with `det Psi = |f|^2 + |g|^2 > 0`.
pub fn normalize(psi: Mat2) -> Result<Mat2> {
    let d = psi.det();
    if !(d.re > 0.0) || d.im.abs() > ALG_EPS * d.re {
        return Err(Error::Consistency(format!("det Psi = {d} is not real positive")));
    }
    Ok(psi.scale_re(1.0 / d.re.sqrt()))
}

pub fn wave_function(p: &SolitonParams, s: f64, t: f64, lambda: f64) -> Result<FrameSample> {
    check_lambda(lambda)?;
    p.validate()?;
    let pp = fg_polynomials(&determinants_unchecked(p, s, t)?);
    let psi = psi_from_polys(&pp, s, t, lambda);
    Ok(FrameSample { s, t, lambda, psi, frame: normalize(psi)? })
}

/// Where the derivative data entering a Lax matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxPairSample {
    pub l: Mat2,
    pub m: Mat2,
    pub lambda: f64,
    /// |Im(q_ts / q)|, which vanishes on solutions.
    pub im_ratio: f64,
    pub im_ratio_warning: bool,
    pub source: DerivativeSource,
}

/// `L = (1/2)[[i lambda, q], [-conj q, -i lambda]]`.
pub fn lax_l(q: Complex, lambda: f64) -> Mat2 {
    Mat2::new(I * lambda, q, -q.conj(), -I * lambda).scale_re(0.5)
}

/// `M = (i / 2 lambda)[[-Re(q_ts/q), -q_t], [-conj q_t, Re(q_ts/q)]]`.
pub fn lax_m(q: Complex, q_t: Complex, q_ts: Complex, lambda: f64) -> Result<Mat2> {
    if q == ZERO {
        return Err(Error::VanishingPotential);
    }
    let r = (q_ts / q).re;
    Ok(Mat2::new(Complex::new(-r, 0.0), -q_t, -q_t.conj(), Complex::new(r, 0.0)).scale(I / (2.0 * lambda)))
}

pub fn lax_matrices(q: Complex, q_t: Complex, q_ts: Complex, lambda: f64) -> Result<LaxPairSample> {
    check_lambda(lambda)?;
    let m = lax_m(q, q_t, q_ts, lambda)?;
    let im_ratio = (q_ts / q).im.abs();
    Ok(LaxPairSample {
        l: lax_l(q, lambda),
        m,
        lambda,
        im_ratio,
        im_ratio_warning: im_ratio > LAX_IM_RATIO_WARN,
        source: DerivativeSource::Analytic,
    })
}

/// Right-hand sides of `Psi^-1 Psi_s` and `Psi^-1 Psi_t` read off the
/// determinants directly.
pub fn date_lax_rhs(bundle: &DeterminantBundle, lambda: f64) -> (Mat2, Mat2) {
    let n = bundle.n();
    let q = I * bundle.ratio(2 * n).conj() * 2.0;
    let (d1, dn) = (bundle.d[1], bundle.d[n + 1]);
    let sn = bundle.time_norm();
    let diag = Complex::new(d1.norm_sqr() - dn.norm_sqr(), 0.0);
    let off = d1 * dn * 2.0;
    let m = Mat2::new(diag, off.conj(), off, -diag).scale(I / (2.0 * lambda * sn));
    (lax_l(q, lambda), m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxResidual {
    pub max_s: f64,
    pub max_t: f64,
}

/// Max over the grid of `|Psi^-1 dPsi - RHS|` (Frobenius) for both Lax
/// equations, with central differences of step `h` around every grid point.
pub fn lax_residual(p: &SolitonParams, lambda: f64, grid: &GridSpec, h: f64) -> Result<LaxResidual> {
    check_lambda(lambda)?;
    p.validate()?;
    grid.validate()?;
    let psi = |s: f64, t: f64| -> Result<Mat2> {
        Ok(psi_from_polys(&fg_polynomials(&determinants_unchecked(p, s, t)?), s, t, lambda))
    };
    let per_point = grid
        .points()
        .par_iter()
        .map(|&(s, t)| {
            let bundle = determinants_unchecked(p, s, t)?;
            let centre = psi_from_polys(&fg_polynomials(&bundle), s, t, lambda);
            let inv = centre.inverse().ok_or_else(|| Error::Consistency("Psi is singular".into()))?;
            let ds = (psi(s + h, t)? - psi(s - h, t)?).scale_re(0.5 / h);
            let dt = (psi(s, t + h)? - psi(s, t - h)?).scale_re(0.5 / h);
            let (rs, rt) = date_lax_rhs(&bundle, lambda);
            Ok(((inv * ds - rs).frobenius(), (inv * dt - rt).frobenius()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let (max_s, max_t) = per_point.into_iter().fold((0.0f64, 0.0f64), |(a, b), (x, y)| (a.max(x), b.max(y)));
    Ok(LaxResidual { max_s, max_t })
}

/// Lax matrices from the analytic Date potential on every grid node.
pub fn date_lax_fields(p: &SolitonParams, grid: &GridSpec, lambda: f64) -> Result<(Lattice<Mat2>, Lattice<Mat2>)> {
    check_lambda(lambda)?;
    p.validate()?;
    let lat = Lattice::tabulate(grid, |s, t| {
        let lp = LaxPotential::from_bundle(&determinants_unchecked(p, s, t)?)?;
        Ok((lax_l(lp.q, lambda), lax_m(lp.q, lp.q_t, lp.q_ts, lambda)?))
    });
    split_pairs(lat)
}

fn split_pairs(lat: Lattice<Result<(Mat2, Mat2)>>) -> Result<(Lattice<Mat2>, Lattice<Mat2>)> {
    let mut ls = Vec::with_capacity(lat.values.len());
    let mut ms = Vec::with_capacity(lat.values.len());
    for v in lat.values {
        let (l, m) = v?;
        ls.push(l);
        ms.push(m);
    }
    Ok((Lattice::from_values(lat.s.clone(), lat.t.clone(), ls)?, Lattice::from_values(lat.s, lat.t, ms)?))
}

/// Lax matrices built from a sampled potential, with `q_t` and `q_ts` by
/// central differences. The result lives on the interior lattice.
pub fn lax_fields_from_q(q: &Lattice<Complex>, lambda: f64) -> Result<(Lattice<Mat2>, Lattice<Mat2>)> {
    check_lambda(lambda)?;
    let (ns, nt) = (q.n_s(), q.n_t());
    if ns < 3 || nt < 3 {
        return Err(Error::TooFewSamples { need: 3, got: ns.min(nt) });
    }
    let mut pairs = Vec::with_capacity((ns - 2) * (nt - 2));
    for j in 1..nt - 1 {
        for i in 1..ns - 1 {
            let qc = *q.at(i, j);
            let q_t = central_t(q, i, j);
            let q_ts = crate::stencil::mixed(q, i, j);
            pairs.push(lax_m(qc, q_t, q_ts, lambda).map(|m| (lax_l(qc, lambda), m)));
        }
    }
    split_pairs(Lattice::from_values(q.s[1..ns - 1].to_vec(), q.t[1..nt - 1].to_vec(), pairs)?)
}

/// Max over interior nodes of `|[L, M] + M_s - L_t|` (Frobenius).
pub fn zero_curvature_residual(l: &Lattice<Mat2>, m: &Lattice<Mat2>) -> Result<f64> {
    same_shape(l, m)?;
    let (ns, nt) = (l.n_s(), l.n_t());
    if ns < 3 || nt < 3 {
        return Err(Error::TooFewSamples { need: 3, got: ns.min(nt) });
    }
    let rows: Vec<f64> = (1..nt - 1)
        .into_par_iter()
        .map(|j| {
            (1..ns - 1)
                .map(|i| {
                    let r = l.at(i, j).commutator(m.at(i, j)) + central_s(m, i, j) - central_t(l, i, j);
                    r.frobenius()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(rows.into_iter().fold(0.0, f64::max))
}

fn same_shape<A, B>(a: &Lattice<A>, b: &Lattice<B>) -> Result<()> {
    if a.s != b.s || a.t != b.t {
        return Err(Error::Dimension("fields are sampled on different lattices".into()));
    }
    Ok(())
}

/// Diagonal U(1) gauge `D = diag(e^(ip), e^(-ip))` sampled on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePhase {
    pub p: Lattice<f64>,
}

impl GaugePhase {
    pub fn identity(s: Vec<f64>, t: Vec<f64>) -> Self {
        let n = s.len() * t.len();
        Self { p: Lattice { s, t, values: vec![0.0; n] } }
    }

    /// The gauge `diag(i e^(-i theta/2), -i e^(i theta/2))` built from
    /// `theta = int (tau - 1) ds`.
    pub fn from_torsion_integral(theta: &Lattice<f64>) -> Self {
        Self { p: theta.map(|th| std::f64::consts::FRAC_PI_2 - 0.5 * th) }
    }

    pub fn matrix(&self, i: usize, j: usize) -> Mat2 {
        let e = Complex::from_polar(1.0, *self.p.at(i, j));
        Mat2::diag(e, e.conj())
    }
}

/// `L~ = D^-1 L D + D^-1 D_s`, `M~ = D^-1 M D + D^-1 D_t` on interior nodes.
pub fn gauge_transform(
    l: &Lattice<Mat2>,
    m: &Lattice<Mat2>,
    gauge: &GaugePhase,
) -> Result<(Lattice<Mat2>, Lattice<Mat2>)> {
    same_shape(l, m)?;
    same_shape(l, &gauge.p)?;
    let (ns, nt) = (l.n_s(), l.n_t());
    if ns < 3 || nt < 3 {
        return Err(Error::TooFewSamples { need: 3, got: ns.min(nt) });
    }
    let d = Lattice::from_values(l.s.clone(), l.t.clone(), (0..nt).flat_map(|j| (0..ns).map(move |i| (i, j))).map(|(i, j)| gauge.matrix(i, j)).collect())?;
    let mut lo = Vec::with_capacity((ns - 2) * (nt - 2));
    let mut mo = Vec::with_capacity((ns - 2) * (nt - 2));
    for j in 1..nt - 1 {
        for i in 1..ns - 1 {
            let dc = *d.at(i, j);
            let di = dc.adjoint();
            lo.push(di * *l.at(i, j) * dc + di * central_s(&d, i, j));
            mo.push(di * *m.at(i, j) * dc + di * central_t(&d, i, j));
        }
    }
    let s = l.s[1..ns - 1].to_vec();
    let t = l.t[1..nt - 1].to_vec();
    Ok((Lattice::from_values(s.clone(), t.clone(), lo)?, Lattice::from_values(s, t, mo)?))
}

/// Entries `m21, m31` of the so(3) evolution matrix of the Frenet frame.
pub fn explicit_m(ell: f64, kappa: f64, tau: f64, a: f64, b: f64, c: f64, b_s: f64, c_s: f64) -> (f64, f64) {
    (b_s / ell + a * kappa - c * tau, c_s / ell + b * tau)
}

/// `m32 = m31_s / (ell kappa) + m21 tau / kappa`.
pub fn explicit_m32(ell: f64, kappa: f64, tau: f64, m21: f64, m31_s: f64) -> f64 {
    m31_s / (ell * kappa) + m21 * tau / kappa
}

/// su(2) frame matrices of a general curve evolution.
pub fn general_frame_matrices(ell: f64, kappa: f64, tau: f64, m21: f64, m31: f64, m31_s: f64) -> Result<(Mat2, Mat2)> {
    if !(kappa > 0.0) {
        return Err(Error::NonPositiveCurvature(kappa));
    }
    let l = Mat2::new(I * tau, Complex::new(-kappa, 0.0), Complex::new(kappa, 0.0), -I * tau).scale_re(0.5 * ell);
    let r = explicit_m32(ell, kappa, tau, m21, m31_s);
    let m = Mat2::new(I * r, Complex::new(-m21, -m31), Complex::new(m21, -m31), -I * r).scale_re(0.5);
    Ok((l, m))
}

/// so(3) frame matrices with `L21 = ell kappa`, `L32 = ell tau` and
/// `M21 = m21`, `M31 = m31`, `M32 = m32`.
pub fn so3_frame_matrices(ell: f64, kappa: f64, tau: f64, m21: f64, m31: f64, m32: f64) -> (Matrix3<f64>, Matrix3<f64>) {
    let l = Matrix3::new(0.0, -ell * kappa, 0.0, ell * kappa, 0.0, -ell * tau, 0.0, ell * tau, 0.0);
    let m = Matrix3::new(0.0, -m21, -m31, m21, 0.0, -m32, m31, m32, 0.0);
    (l, m)
}

/// Coefficient fields of a curve evolution `gamma_t = a T + b N + c B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionFields {
    pub ell: Lattice<f64>,
    pub kappa: Lattice<f64>,
    pub tau: Lattice<f64>,
    pub a: Lattice<f64>,
    pub b: Lattice<f64>,
    pub c: Lattice<f64>,
}

impl EvolutionFields {
    fn check(&self) -> Result<()> {
        for f in [&self.kappa, &self.tau, &self.a, &self.b, &self.c] {
            same_shape(&self.ell, f)?;
        }
        if let Some(k) = self.kappa.values.iter().copied().find(|k| !(*k > 0.0)) {
            return Err(Error::NonPositiveCurvature(k));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Curve on the even-index sub-lattice (RK4 step is twice the spacing).
    pub curve: CurveGrid,
    /// Max distance between corner points from s-then-t and t-then-s integration.
    pub path_gap: f64,
    pub path_limit: f64,
}

/// Integrate `F~_s = F~ L~`, `F~_t = F~ M~` with RK4 of step `2h` using the
/// lattice midpoints, starting from `F~ = id` at `anchor` (even indices).
///
/// The seed line at the anchor's s-index is integrated in t first, then every
/// t-line in s. The four corners are also reached the other way round; if the
/// two disagree by more than `10 H^2 |domain|` the data is rejected.
pub fn reconstruct_from_data(fields: &EvolutionFields, anchor: (usize, usize)) -> Result<Reconstruction> {
    fields.check()?;
    let (ns, nt) = (fields.ell.n_s(), fields.ell.n_t());
    if ns < 5 || nt < 5 || ns % 2 == 0 || nt % 2 == 0 {
        return Err(Error::Config(format!("reconstruction needs odd lattice sizes >= 5, got {ns}x{nt}")));
    }
    if anchor.0 % 2 != 0 || anchor.1 % 2 != 0 || anchor.0 >= ns || anchor.1 >= nt {
        return Err(Error::Config(format!("anchor {anchor:?} must be an even lattice index")));
    }
    let (lt, mt) = generator_fields(fields)?;
    let ci: Vec<usize> = (0..ns).step_by(2).collect();
    let cj: Vec<usize> = (0..nt).step_by(2).collect();
    let (ai, aj) = (anchor.0 / 2, anchor.1 / 2);

    // seed line along t at s-index anchor.0
    let seed = integrate_line(Matrix4::identity(), aj, cj.len(), |k| mt.at(anchor.0, k), fields.ell.ht());
    let rows: Vec<Vec<Matrix4<f64>>> = cj
        .par_iter()
        .enumerate()
        .map(|(jj, &j)| integrate_line(seed[jj], ai, ci.len(), |k| lt.at(k, j), fields.ell.hs()))
        .collect();

    // other order at the corners
    let seed_s = integrate_line(Matrix4::identity(), ai, ci.len(), |k| lt.at(k, anchor.1), fields.ell.hs());
    let mut gap = 0.0f64;
    for &ii in &[0, ci.len() - 1] {
        let col = integrate_line(seed_s[ii], aj, cj.len(), |k| mt.at(2 * ii, k), fields.ell.ht());
        for &jj in &[0, cj.len() - 1] {
            let a = position(&col[jj]);
            let b = position(&rows[jj][ii]);
            gap = gap.max((a - b).norm());
        }
    }
    let big_h = 2.0 * fields.ell.hs().abs().max(fields.ell.ht().abs());
    let extent = (fields.ell.s[ns - 1] - fields.ell.s[0]).abs() * (fields.ell.t[nt - 1] - fields.ell.t[0]).abs();
    let limit = 10.0 * big_h * big_h * extent.max(1.0);
    if !(gap <= limit) {
        return Err(Error::PathDependence { gap, limit });
    }

    let mut points = Vec::with_capacity(ci.len() * cj.len());
    for row in &rows {
        points.extend(row.iter().map(position));
    }
    let s: Vec<f64> = ci.iter().map(|&i| fields.ell.s[i]).collect();
    let t: Vec<f64> = cj.iter().map(|&j| fields.ell.t[j]).collect();
    Ok(Reconstruction { curve: CurveGrid::new(Lattice::from_values(s, t, points)?), path_gap: gap, path_limit: limit })
}

fn position(f: &Matrix4<f64>) -> Su2Vector {
    Su2Vector::new(f[(0, 3)], f[(1, 3)], f[(2, 3)])
}

/// 4x4 generators on every lattice node, derivatives by second-order stencils.
fn generator_fields(f: &EvolutionFields) -> Result<(Lattice<Matrix4<f64>>, Lattice<Matrix4<f64>>)> {
    let b_s = d_ds(&f.b)?;
    let c_s = d_ds(&f.c)?;
    let n = f.ell.values.len();
    let mut m21 = Vec::with_capacity(n);
    let mut m31 = Vec::with_capacity(n);
    for k in 0..n {
        let (x, y) = explicit_m(
            f.ell.values[k],
            f.kappa.values[k],
            f.tau.values[k],
            f.a.values[k],
            f.b.values[k],
            f.c.values[k],
            b_s.values[k],
            c_s.values[k],
        );
        m21.push(x);
        m31.push(y);
    }
    let m31_lat = Lattice::from_values(f.ell.s.clone(), f.ell.t.clone(), m31)?;
    let m31_s = d_ds(&m31_lat)?;
    let mut lt = Vec::with_capacity(n);
    let mut mt = Vec::with_capacity(n);
    for k in 0..n {
        let (ell, kappa, tau) = (f.ell.values[k], f.kappa.values[k], f.tau.values[k]);
        let m32 = explicit_m32(ell, kappa, tau, m21[k], m31_s.values[k]);
        let (l3, m3) = so3_frame_matrices(ell, kappa, tau, m21[k], m31_lat.values[k], m32);
        let mut l4 = Matrix4::zeros();
        l4.fixed_view_mut::<3, 3>(0, 0).copy_from(&l3);
        l4[(0, 3)] = ell;
        let mut m4 = Matrix4::zeros();
        m4.fixed_view_mut::<3, 3>(0, 0).copy_from(&m3);
        m4[(0, 3)] = f.a.values[k];
        m4[(1, 3)] = f.b.values[k];
        m4[(2, 3)] = f.c.values[k];
        lt.push(l4);
        mt.push(m4);
    }
    Ok((
        Lattice::from_values(f.ell.s.clone(), f.ell.t.clone(), lt)?,
        Lattice::from_values(f.ell.s.clone(), f.ell.t.clone(), mt)?,
    ))
}

/// RK4 for `Y' = Y A(x)` from coarse index `start` in both directions; the
/// generator is read at fine index `k`, coarse node `c` being fine index `2c`.
fn integrate_line<'a, G>(y0: Matrix4<f64>, start: usize, n: usize, gen: G, h: f64) -> Vec<Matrix4<f64>>
where
    G: Fn(usize) -> &'a Matrix4<f64>,
{
    let mut out = vec![Matrix4::zeros(); n];
    out[start] = y0;
    let step = |y: &Matrix4<f64>, a0: &Matrix4<f64>, am: &Matrix4<f64>, a1: &Matrix4<f64>, big_h: f64| {
        let k1 = y * a0;
        let k2 = (y + k1 * (0.5 * big_h)) * am;
        let k3 = (y + k2 * (0.5 * big_h)) * am;
        let k4 = (y + k3 * big_h) * a1;
        y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (big_h / 6.0)
    };
    for c in start..n - 1 {
        out[c + 1] = step(&out[c], gen(2 * c), gen(2 * c + 1), gen(2 * c + 2), 2.0 * h);
    }
    for c in (1..=start).rev() {
        out[c - 1] = step(&out[c], gen(2 * c), gen(2 * c - 1), gen(2 * c - 2), -2.0 * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, ONE};
    use crate::date::{determinants, unit_soliton};
    use crate::presets::Preset;

    #[test]
    fn golden_wave_function() {
        let w = wave_function(&unit_soliton(), 0.0, 0.0, 1.0).unwrap();
        let want = Mat2::new(ONE, c(0.0, -1.0), c(0.0, -1.0), ONE);
        assert!((w.psi - want).frobenius() < 1e-14);
        assert!((w.psi.det() - c(2.0, 0.0)).norm() < 1e-14);
        assert!((w.frame - want.scale_re(1.0 / 2f64.sqrt())).frobenius() < 1e-14);
    }

    #[test]
    fn frame_is_special_unitary() {
        for preset in Preset::ALL {
            let p = preset.params();
            for (s, t) in GridSpec::square(-6.0, 6.0, 7).unwrap().points() {
                for lambda in [0.5, 1.0, 2.0] {
                    let f = wave_function(&p, s, t, lambda).unwrap().frame;
                    assert!((f * f.adjoint() - Mat2::IDENTITY).frobenius() < 1e-10);
                    assert!((f.det() - ONE).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn det_psi_is_sum_of_squares() {
        let p = Preset::C.params();
        let mut x = 0.123f64;
        for _ in 0..100 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let (s, t, lam) = (20.0 * x - 10.0, 10.0 - 15.0 * x * x, 0.2 + 3.0 * x);
            let b = determinants(&p, s, t).unwrap();
            let pp = fg_polynomials(&b);
            let d = psi_from_polys(&pp, s, t, lam).det();
            let want = pp.f.eval_re(lam).norm_sqr() + pp.g.eval_re(lam).norm_sqr();
            assert!((d - c(want, 0.0)).norm() <= 1e-10 * want);
        }
    }

    #[test]
    fn lambda_must_be_positive() {
        assert!(matches!(wave_function(&unit_soliton(), 0.0, 0.0, 0.0), Err(Error::NonPositiveLambda(_))));
        assert!(lax_matrices(ONE, ONE, ONE, -1.0).is_err());
    }

    #[test]
    fn lax_matrices_are_su2() {
        let s = lax_matrices(c(0.3, -1.2), c(0.7, 0.1), c(-0.2, 0.4), 1.7).unwrap();
        for m in [s.l, s.m] {
            assert!(m.trace().norm() < 1e-15);
            assert!(m.anti_hermitian_defect() < 1e-15);
        }
        assert!(s.im_ratio_warning);
        assert!(matches!(lax_matrices(ZERO, ONE, ONE, 1.0), Err(Error::VanishingPotential)));
    }

    #[test]
    fn real_potential_gives_sine_gordon_pair() {
        // q = kappa real, q_t = kappa_t, Re(q_ts/q) = kappa_ts / kappa
        let (k, kt, kts) = (0.8, 0.3, -0.5);
        let s = lax_matrices(c(k, 0.0), c(kt, 0.0), c(kts, 0.0), 1.0).unwrap();
        let l = Mat2::new(I, c(k, 0.0), c(-k, 0.0), -I).scale_re(0.5);
        let m = Mat2::new(c(-kts / k, 0.0), c(-kt, 0.0), c(-kt, 0.0), c(kts / k, 0.0)).scale(I * 0.5);
        assert!((s.l - l).frobenius() < 1e-15 && (s.m - m).frobenius() < 1e-15);
        assert_eq!(s.im_ratio, 0.0);
    }

    #[test]
    fn date_rhs_matches_potential_form() {
        let p = Preset::B.params();
        let b = determinants(&p, 0.4, -1.3).unwrap();
        let lp = LaxPotential::from_bundle(&b).unwrap();
        for lambda in [1.0, 2.0] {
            let (l, m) = date_lax_rhs(&b, lambda);
            let s = lax_matrices(lp.q, lp.q_t, lp.q_ts, lambda).unwrap();
            assert!((l - s.l).frobenius() < 1e-12 && (m - s.m).frobenius() < 1e-12);
        }
    }

    #[test]
    fn lax_residual_converges() {
        let p = Preset::A.params();
        let g = GridSpec::square(-5.0, 5.0, 11).unwrap();
        for lambda in [1.0, 2.0] {
            let r1 = lax_residual(&p, lambda, &g, 1e-3).unwrap();
            let r2 = lax_residual(&p, lambda, &g, 5e-4).unwrap();
            assert!(r1.max_s < 1e-4 && r1.max_t < 1e-4, "{r1:?}");
            for (a, b) in [(r1.max_s, r2.max_s), (r1.max_t, r2.max_t)] {
                assert!((3.5..=4.5).contains(&(a / b)), "lambda {lambda}: {a:e} / {b:e}");
            }
        }
    }

    #[test]
    fn commuting_constants_have_zero_curvature() {
        let g = GridSpec::square(0.0, 1.0, 5).unwrap();
        let l = Lattice::tabulate(&g, |_, _| Mat2::diag(I, -I));
        let m = Lattice::tabulate(&g, |_, _| Mat2::diag(-I * 2.0, I * 2.0));
        assert_eq!(zero_curvature_residual(&l, &m).unwrap(), 0.0);
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let g = GridSpec::square(-1.0, 1.0, 9).unwrap();
        let (l, m) = date_lax_fields(&Preset::B.params(), &g, 1.0).unwrap();
        let d = GaugePhase::identity(l.s.clone(), l.t.clone());
        let (lg, mg) = gauge_transform(&l, &m, &d).unwrap();
        let li = l.crop(1, 8, 1, 8);
        let mi = m.crop(1, 8, 1, 8);
        assert_eq!(lg.values, li.values);
        assert_eq!(mg.values, mi.values);
    }

    #[test]
    fn static_generators_vanish() {
        let (l, m) = general_frame_matrices(1.0, 0.7, 0.3, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(m, Mat2::ZERO);
        assert!(l.anti_hermitian_defect() < 1e-16 && l.trace().norm() < 1e-16);
        assert!(general_frame_matrices(1.0, 0.0, 0.3, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn so3_and_su2_generators_correspond() {
        let (ell, kappa, tau, m21, m31, m31_s) = (1.3, 0.7, -0.4, 0.2, -0.9, 0.6);
        let (l2, m2) = general_frame_matrices(ell, kappa, tau, m21, m31, m31_s).unwrap();
        let (l3, m3) = so3_frame_matrices(ell, kappa, tau, m21, m31, explicit_m32(ell, kappa, tau, m21, m31_s));
        let emb = |a: &Matrix3<f64>| crate::algebra::su2_embed(Su2Vector::new(a[(1, 0)], a[(2, 0)], a[(2, 1)]));
        assert!((emb(&l3) - l2).frobenius() < 1e-15);
        assert!((emb(&m3) - m2).frobenius() < 1e-15);
    }

    #[test]
    fn lund_regge_specialisation() {
        // with a' = b kappa, b' + a kappa - c tau = -c, c' + b tau = b:
        // m21 = -c and m31 = b
        let (kappa, tau, a, b, c) = (0.9, 1.4, -0.3, 0.5, 0.8);
        let b_s = -c - a * kappa + c * tau;
        let c_s = b - b * tau;
        let (m21, m31) = explicit_m(1.0, kappa, tau, a, b, c, b_s, c_s);
        assert!((m21 + c).abs() < 1e-15 && (m31 - b).abs() < 1e-15);
    }

    #[test]
    fn static_circle_reconstruction() {
        let g = GridSpec::new((0.0, 2.0), (0.0, 0.2), 2001, 5).unwrap();
        let ones = Lattice::tabulate(&g, |_, _| 1.0);
        let zeros = ones.map(|_| 0.0);
        let f = EvolutionFields {
            ell: ones.clone(),
            kappa: ones,
            tau: zeros.clone(),
            a: zeros.clone(),
            b: zeros.clone(),
            c: zeros,
        };
        let r = reconstruct_from_data(&f, (0, 0)).unwrap();
        for j in 0..r.curve.points.n_t() {
            for i in 0..r.curve.points.n_s() {
                let s = r.curve.points.s[i];
                let want = Su2Vector::new(s.sin(), 1.0 - s.cos(), 0.0);
                assert!((*r.curve.points.at(i, j) - want).norm() < 1e-12);
            }
        }
        assert!(r.path_gap < 1e-12);
    }

    #[test]
    fn incompatible_data_is_path_dependent() {
        // a varying in s with b = 0 violates ell_t = a_s - b ell kappa
        let g = GridSpec::square(0.0, 1.0, 21).unwrap();
        let ones = Lattice::tabulate(&g, |_, _| 1.0);
        let zeros = ones.map(|_| 0.0);
        let f = EvolutionFields {
            ell: ones.clone(),
            kappa: ones,
            tau: zeros.clone(),
            a: Lattice::tabulate(&g, |s, _| 3.0 * s * s),
            b: zeros.clone(),
            c: zeros,
        };
        assert!(matches!(reconstruct_from_data(&f, (0, 0)), Err(Error::PathDependence { .. })));
    }
}
