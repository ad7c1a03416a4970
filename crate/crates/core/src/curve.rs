//! Lund-Regge curves of Date solutions: closed-form coordinates, the numeric
//! Sym formula, Frenet data, the Hasimoto-type potential and swept surfaces.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::algebra::{su2_extract_unchecked, Complex, Mat2, Su2Vector, I};
use crate::date::{
    cos_u, determinants_unchecked, fg_polynomials, phase_unchecked, q_s, LaxPotential, PolyPair, SolitonParams,
};
use crate::error::{Error, Result};
use crate::frame::{normalize, psi_from_polys, EvolutionFields};
use crate::grid::{GridSpec, Lattice};
use crate::stencil::{cumulative_trapezoid, d_dt};
use crate::tolerances::{FRENET_GAP, SYM_TOL};

/// Curve samples on an (s, t) lattice with optional Frenet data.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGrid {
    pub points: Lattice<Su2Vector>,
    pub kappa: Option<Lattice<Option<f64>>>,
    pub tau: Option<Lattice<Option<f64>>>,
    pub q: Option<Lattice<Complex>>,
}

impl CurveGrid {
    pub fn new(points: Lattice<Su2Vector>) -> Self {
        Self { points, kappa: None, tau: None, q: None }
    }

    pub fn all_finite(&self) -> bool {
        self.points.values.iter().all(|p| p.is_finite())
    }

    /// Attach curvature and torsion from `frenet_apparatus` on every t-line.
    pub fn with_frenet(mut self) -> Result<Self> {
        let (ns, nt) = (self.points.n_s(), self.points.n_t());
        let mut k = vec![None; ns * nt];
        let mut tt = vec![None; ns * nt];
        for j in 0..nt {
            let fr = frenet_apparatus(&self, j)?;
            k[j * ns..(j + 1) * ns].copy_from_slice(&fr.kappa);
            tt[j * ns..(j + 1) * ns].copy_from_slice(&fr.tau);
        }
        self.kappa = Some(Lattice::from_values(self.points.s.clone(), self.points.t.clone(), k)?);
        self.tau = Some(Lattice::from_values(self.points.s.clone(), self.points.t.clone(), tt)?);
        Ok(self)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// Closed-form Sym curve at spectral parameter `lambda`:
/// `X = (conj f g_l - g conj f_l) / (|f|^2 + |g|^2) * conj(e)^2`,
/// `gamma = (2 lambda Re X, -2 lambda Im X,
///           lambda s - t/lambda + 2 lambda Im[(conj f f_l + g conj g_l) / (|f|^2 + |g|^2)])`.
pub fn curve_from_polys(pp: &PolyPair, s: f64, t: f64, lambda: f64) -> Su2Vector {
    let fb = pp.f.conj();
    let gb = pp.g.conj();
    let (f, g) = (pp.f.eval_re(lambda), pp.g.eval_re(lambda));
    let fbv = fb.eval_re(lambda);
    let f_l = pp.f.derivative().eval_re(lambda);
    let g_l = pp.g.derivative().eval_re(lambda);
    let fb_l = fb.derivative().eval_re(lambda);
    let gb_l = gb.derivative().eval_re(lambda);
    let den = f.norm_sqr() + g.norm_sqr();
    let e = phase_unchecked(s, t, Complex::new(lambda, 0.0));
    let x = (fbv * g_l - g * fb_l) / den * e.conj() * e.conj();
    let y = (fbv * f_l + g * gb_l) / den;
    Su2Vector::new(2.0 * lambda * x.re, -2.0 * lambda * x.im, lambda * s - t / lambda + 2.0 * lambda * y.im)
}

pub fn nsoliton_curve(p: &SolitonParams, s: f64, t: f64) -> Result<Su2Vector> {
    nsoliton_curve_lambda(p, s, t, 1.0)
}

pub fn nsoliton_curve_lambda(p: &SolitonParams, s: f64, t: f64, lambda: f64) -> Result<Su2Vector> {
    check_lambda(lambda)?;
    p.validate()?;
    Ok(curve_from_polys(&fg_polynomials(&determinants_unchecked(p, s, t)?), s, t, lambda))
}

/// Closed-form curve on every node of `grid`.
pub fn curve_grid(p: &SolitonParams, grid: &GridSpec, lambda: f64) -> Result<CurveGrid> {
    check_lambda(lambda)?;
    p.validate()?;
    grid.validate()?;
    let lat = Lattice::tabulate(grid, |s, t| nsoliton_curve_lambda(p, s, t, lambda));
    let values = lat.values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CurveGrid::new(Lattice::from_values(lat.s, lat.t, values)?))
}

/// `lambda0 (dF/dlambda) F^-1` with a central difference in lambda, projected
/// onto su(2) before extraction.
pub fn sym_numeric(p: &SolitonParams, s: f64, t: f64, lambda0: f64, h_lambda: f64) -> Result<Su2Vector> {
    check_lambda(lambda0)?;
    if !(h_lambda > 0.0 && h_lambda < lambda0) {
        return Err(Error::Config(format!("lambda step {h_lambda} must lie in (0, {lambda0})")));
    }
    p.validate()?;
    let pp = fg_polynomials(&determinants_unchecked(p, s, t)?);
    let frame = |l: f64| normalize(psi_from_polys(&pp, s, t, l));
    let df = (frame(lambda0 + h_lambda)? - frame(lambda0 - h_lambda)?).scale_re(0.5 / h_lambda);
    let m = (df * frame(lambda0)?.adjoint()).scale_re(lambda0);
    let defect = m.anti_hermitian_defect().max(m.trace().norm());
    if defect > SYM_TOL * m.frobenius().max(1.0) {
        return Err(Error::NotSu2 { defect: m.anti_hermitian_defect(), trace: m.trace().norm() });
    }
    Ok(su2_extract_unchecked(&m.su2_part()))
}

/// `gamma_s = F (lambda dL/dlambda) F^-1` with `dL/dlambda = (1/2) diag(i, -i)`.
pub fn analytic_tangent(p: &SolitonParams, s: f64, t: f64, lambda: f64) -> Result<(Su2Vector, Mat2)> {
    check_lambda(lambda)?;
    p.validate()?;
    let pp = fg_polynomials(&determinants_unchecked(p, s, t)?);
    let f = normalize(psi_from_polys(&pp, s, t, lambda))?;
    let m = f * Mat2::diag(I, -I).scale_re(0.5 * lambda) * f.adjoint();
    Ok((su2_extract_unchecked(&m), m))
}

/// `-2 tr(gamma_s gamma_s)` along the analytic route; equals `lambda^2`.
pub fn speed_identity(p: &SolitonParams, s: f64, t: f64, lambda: f64) -> Result<f64> {
    let (_, m) = analytic_tangent(p, s, t, lambda)?;
    Ok(-2.0 * (m * m).trace().re)
}

/// Curvature and torsion along one line; `None` marks boundary points and
/// near-straight points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetSlice {
    pub kappa: Vec<Option<f64>>,
    pub tau: Vec<Option<f64>>,
    pub gaps: usize,
}

/// Frenet curvature and torsion of uniformly sampled points, with central
/// differences up to third order (two boundary points on each side are gaps).
pub fn frenet_from_points(pts: &[Su2Vector], h: f64) -> Result<FrenetSlice> {
    let n = pts.len();
    if n < 7 {
        return Err(Error::TooFewSamples { need: 7, got: n });
    }
    let mut kappa = vec![None; n];
    let mut tau = vec![None; n];
    let mut gaps = 0;
    for i in 2..n - 2 {
        let d1 = (pts[i + 1] - pts[i - 1]) * (0.5 / h);
        let d2 = (pts[i + 1] - pts[i] * 2.0 + pts[i - 1]) * (1.0 / (h * h));
        let d3 = (pts[i + 2] - pts[i + 1] * 2.0 + pts[i - 1] * 2.0 - pts[i - 2]) * (0.5 / (h * h * h));
        let cr = d1.cross(d2);
        let cn = cr.norm();
        let sp = d1.norm();
        if cn < FRENET_GAP || sp == 0.0 {
            gaps += 1;
            continue;
        }
        kappa[i] = Some(cn / (sp * sp * sp));
        tau[i] = Some(cr.dot(d3) / (cn * cn));
    }
    Ok(FrenetSlice { kappa, tau, gaps: gaps + 4 })
}

pub fn frenet_apparatus(grid: &CurveGrid, t_index: usize) -> Result<FrenetSlice> {
    let lat = &grid.points;
    if t_index >= lat.n_t() {
        return Err(Error::Config(format!("t index {t_index} out of range")));
    }
    let ns = lat.n_s();
    frenet_from_points(&lat.values[t_index * ns..(t_index + 1) * ns], lat.hs())
}

/// `q = kappa exp(i int_{s0}^s (tau - 1) ds)`, trapezoid rule, zero phase at `s0`.
pub fn hasimoto_q(kappa: &[f64], tau: &[f64], s: &[f64], s0: f64) -> Result<Vec<Complex>> {
    if kappa.len() != tau.len() || kappa.len() != s.len() {
        return Err(Error::Dimension("kappa, tau and s must have equal length".into()));
    }
    if s.len() < 2 {
        return Err(Error::TooFewSamples { need: 2, got: s.len() });
    }
    let h = s[1] - s[0];
    let anchor = (((s0 - s[0]) / h).round().max(0.0) as usize).min(s.len() - 1);
    let tm1: Vec<f64> = tau.iter().map(|t| t - 1.0).collect();
    let phase = cumulative_trapezoid(&tm1, h, anchor);
    Ok(kappa.iter().zip(phase).map(|(&k, ph)| Complex::from_polar(k, ph)).collect())
}

/// Values at the anchor `s0` of the two indefinite s-integrals in the
/// coefficient fields: `a(s0, t)` and `(int tau_t ds)(s0, t)`, indexed by t.
/// `None` means zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntegrationAnchors {
    pub s0_index: usize,
    pub a0: Option<Vec<f64>>,
    pub tau_t_integral0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFields {
    pub a: Lattice<f64>,
    pub b: Lattice<f64>,
    pub c: Lattice<f64>,
}

/// `a = a0 - int kappa_t kappa ds`, `b = -kappa_t`,
/// `c = -kappa (I0 + int tau_t ds)` with central t-differences; the two
/// boundary t-slices are dropped.
pub fn coefficient_fields(kappa: &Lattice<f64>, tau: &Lattice<f64>, anchors: &IntegrationAnchors) -> Result<CoefficientFields> {
    if kappa.s != tau.s || kappa.t != tau.t {
        return Err(Error::Dimension("kappa and tau are sampled on different lattices".into()));
    }
    let (ns, nt) = (kappa.n_s(), kappa.n_t());
    if nt < 3 || ns < 2 {
        return Err(Error::TooFewSamples { need: 3, got: nt.min(ns) });
    }
    if anchors.s0_index >= ns {
        return Err(Error::Config(format!("anchor index {} out of range", anchors.s0_index)));
    }
    for v in [&anchors.a0, &anchors.tau_t_integral0].into_iter().flatten() {
        if v.len() != nt {
            return Err(Error::Dimension(format!("anchor values need {nt} entries, got {}", v.len())));
        }
    }
    let kt = d_dt(kappa)?;
    let taut = d_dt(tau)?;
    let hs = kappa.hs();
    let mut a = Vec::with_capacity(ns * (nt - 2));
    let mut b = Vec::with_capacity(ns * (nt - 2));
    let mut c = Vec::with_capacity(ns * (nt - 2));
    for j in 1..nt - 1 {
        let row = j * ns..(j + 1) * ns;
        let kk: Vec<f64> = kappa.values[row.clone()].to_vec();
        let kdot: Vec<f64> = kt.values[row.clone()].to_vec();
        let prod: Vec<f64> = kk.iter().zip(&kdot).map(|(k, d)| k * d).collect();
        let ia = cumulative_trapezoid(&prod, hs, anchors.s0_index);
        let it = cumulative_trapezoid(&taut.values[row], hs, anchors.s0_index);
        let a0 = anchors.a0.as_ref().map_or(0.0, |v| v[j]);
        let i0 = anchors.tau_t_integral0.as_ref().map_or(0.0, |v| v[j]);
        for i in 0..ns {
            a.push(a0 - ia[i]);
            b.push(-kdot[i]);
            c.push(-kk[i] * (i0 + it[i]));
        }
    }
    let s = kappa.s.clone();
    let t = kappa.t[1..nt - 1].to_vec();
    Ok(CoefficientFields {
        a: Lattice::from_values(s.clone(), t.clone(), a)?,
        b: Lattice::from_values(s.clone(), t.clone(), b)?,
        c: Lattice::from_values(s, t, c)?,
    })
}

/// Analytic Frenet and evolution data of a Date curve at one point.
///
/// With `q = 2i conj(d_2N/d0)`: `kappa = |q|`, `tau = 1 + Im(q_s/q)`,
/// `int tau_t ds = Im(q_t/q)`, and the evolution coefficients are
/// `a = -cos u`, `b = -kappa_t`, `c = -kappa Im(q_t/q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSample {
    pub q: Complex,
    pub q_s: Complex,
    pub q_t: Complex,
    pub q_ts: Complex,
    pub cos_u: f64,
    pub kappa: f64,
    pub tau: f64,
    pub theta_t: f64,
    pub kappa_t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn evolution_sample(p: &SolitonParams, s: f64, t: f64) -> Result<EvolutionSample> {
    p.validate()?;
    let bundle = determinants_unchecked(p, s, t)?;
    let lp = LaxPotential::from_bundle(&bundle)?;
    let qs = q_s(p, &bundle)?;
    let kappa = lp.q.norm();
    if kappa == 0.0 {
        return Err(Error::VanishingPotential);
    }
    let tau = 1.0 + (qs / lp.q).im;
    let theta_t = (lp.q_t / lp.q).im;
    let kappa_t = (lp.q_t * lp.q.conj()).re / kappa;
    Ok(EvolutionSample {
        q: lp.q,
        q_s: qs,
        q_t: lp.q_t,
        q_ts: lp.q_ts,
        cos_u: cos_u(&bundle)?,
        kappa,
        tau,
        theta_t,
        kappa_t,
        a: -lp.cos_u,
        b: -kappa_t,
        c: -kappa * theta_t,
    })
}

/// Evolution samples on every node of `grid`.
pub fn evolution_lattice(p: &SolitonParams, grid: &GridSpec) -> Result<Lattice<EvolutionSample>> {
    p.validate()?;
    let lat = Lattice::tabulate(grid, |s, t| evolution_sample(p, s, t));
    let values = lat.values.into_iter().collect::<Result<Vec<_>>>()?;
    Lattice::from_values(lat.s, lat.t, values)
}

/// Coefficient fields of a Date curve (`ell = 1`), ready for reconstruction.
pub fn date_evolution_fields(p: &SolitonParams, grid: &GridSpec) -> Result<EvolutionFields> {
    let ev = evolution_lattice(p, grid)?;
    Ok(EvolutionFields {
        ell: ev.map(|_| 1.0),
        kappa: ev.map(|e| e.kappa),
        tau: ev.map(|e| e.tau),
        a: ev.map(|e| e.a),
        b: ev.map(|e| e.b),
        c: ev.map(|e| e.c),
    })
}

/// Anchor values of the Date curve at s-index `s0_index`.
pub fn date_anchors(p: &SolitonParams, grid: &GridSpec, s0_index: usize) -> Result<IntegrationAnchors> {
    let s = grid.s_values();
    let s0 = *s.get(s0_index).ok_or_else(|| Error::Config(format!("anchor index {s0_index} out of range")))?;
    let ev = grid
        .t_values()
        .par_iter()
        .map(|&t| evolution_sample(p, s0, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegrationAnchors {
        s0_index,
        a0: Some(ev.iter().map(|e| e.a).collect()),
        tau_t_integral0: Some(ev.iter().map(|e| e.theta_t).collect()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexMeta {
    pub s: f64,
    pub t: f64,
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
}

/// Quad mesh of a swept surface. `vertices[k]` is `None` at degenerate
/// samples; faces touching them are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshExport {
    pub n_s: usize,
    pub n_t: usize,
    pub vertices: Vec<Option<Su2Vector>>,
    pub faces: Vec<[usize; 4]>,
    pub meta: Vec<VertexMeta>,
    pub dropped_faces: usize,
}

impl MeshExport {
    pub fn all_finite(&self) -> bool {
        self.vertices.iter().all(|v| v.is_some_and(|p| p.is_finite()))
    }

    pub fn degenerate_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_none()).count()
    }
}

pub fn swept_surface(p: &SolitonParams, grid: &GridSpec, with_frenet: bool) -> Result<MeshExport> {
    swept_surface_lambda(p, grid, 1.0, with_frenet)
}

/// Swept surface of the curve family at spectral parameter `lambda`.
pub fn swept_surface_lambda(p: &SolitonParams, grid: &GridSpec, lambda: f64, with_frenet: bool) -> Result<MeshExport> {
    check_lambda(lambda)?;
    p.validate()?;
    grid.validate()?;
    let lat = Lattice::tabulate(grid, |s, t| match nsoliton_curve_lambda(p, s, t, lambda) {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) | Err(Error::Singular { .. }) | Err(Error::Degenerate { .. }) => Ok(None),
        Err(e) => Err(e),
    });
    let vertices = lat.values.into_iter().collect::<Result<Vec<_>>>()?;
    let (ns, nt) = (grid.n_s, grid.n_t);
    let h = lat.s[1] - lat.s[0];
    let mut meta = Vec::with_capacity(ns * nt);
    for j in 0..nt {
        let row = &vertices[j * ns..(j + 1) * ns];
        let fr = if with_frenet && ns >= 7 && row.iter().all(|v| v.is_some()) {
            let pts: Vec<Su2Vector> = row.iter().map(|v| v.unwrap()).collect();
            Some(frenet_from_points(&pts, h)?)
        } else {
            None
        };
        for i in 0..ns {
            meta.push(VertexMeta {
                s: lat.s[i],
                t: lat.t[j],
                kappa: fr.as_ref().and_then(|f| f.kappa[i]),
                tau: fr.as_ref().and_then(|f| f.tau[i]),
            });
        }
    }
    let mut faces = Vec::with_capacity((ns - 1) * (nt - 1));
    let mut dropped = 0;
    for j in 0..nt - 1 {
        for i in 0..ns - 1 {
            let q = [j * ns + i, j * ns + i + 1, (j + 1) * ns + i + 1, (j + 1) * ns + i];
            if q.iter().all(|&k| vertices[k].is_some()) {
                faces.push(q);
            } else {
                dropped += 1;
            }
        }
    }
    Ok(MeshExport { n_s: ns, n_t: nt, vertices, faces, meta, dropped_faces: dropped })
}

/// Best rigid motion `x -> R x + d` (det R = +1) taking `from` onto `to`,
/// with the largest residual distance after alignment.
pub fn align_rigid(from: &[Su2Vector], to: &[Su2Vector]) -> Result<(Matrix3<f64>, Vector3<f64>, f64)> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::Dimension("alignment needs two non-empty point sets of equal size".into()));
    }
    let n = from.len() as f64;
    let ca = from.iter().fold(Vector3::zeros(), |acc, p| acc + p.to_vector3()) / n;
    let cb = to.iter().fold(Vector3::zeros(), |acc, p| acc + p.to_vector3()) / n;
    let mut h = Matrix3::zeros();
    for (a, b) in from.iter().zip(to) {
        h += (a.to_vector3() - ca) * (b.to_vector3() - cb).transpose();
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut d = Matrix3::identity();
    if (vt.transpose() * u.transpose()).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let r = vt.transpose() * d * u.transpose();
    let shift = cb - r * ca;
    let dev = from
        .iter()
        .zip(to)
        .map(|(a, b)| (r * a.to_vector3() + shift - b.to_vector3()).norm())
        .fold(0.0, f64::max);
    Ok((r, shift, dev))
}
