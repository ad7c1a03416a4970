use plr_soliton::curve::evolution_lattice;
use plr_soliton::date::solution_fields;
use plr_soliton::frame::{
    date_lax_fields, gauge_transform, general_frame_matrices, lax_fields_from_q, zero_curvature_residual, GaugePhase,
};
use plr_soliton::stencil::{cumulative_trapezoid, d_ds, unwrap_phase};
use plr_soliton::{Complex, GridSpec, Lattice, Mat2, Preset};

fn grid(lo: f64, hi: f64, n: usize) -> GridSpec {
    GridSpec::square(lo, hi, n).unwrap()
}

fn date_residual(p: Preset, n: usize) -> f64 {
    let (l, m) = date_lax_fields(&p.params(), &grid(-1.0, 1.0, n), 1.0).unwrap();
    zero_curvature_residual(&l, &m).unwrap()
}

#[test]
fn date_lax_fields_converge_at_second_order() {
    let coarse = date_residual(Preset::B, 161);
    let fine = date_residual(Preset::B, 321);
    let ratio = coarse / fine;
    assert!(coarse < 1e-2, "coarse residual {coarse}");
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
}

fn q_lattice(p: Preset, g: &GridSpec, frac: f64) -> Lattice<Complex> {
    let pp = p.params();
    Lattice::tabulate(g, |s, t| solution_fields(&pp, s, t).unwrap().q * (1.0 + frac * s.sin() * t.cos()))
}

// |q| >= 0.66 on [-1, 1]^2 for preset B; Re(q_ts/q) is singular near zeros of q
#[test]
fn sampled_potential_converges_and_perturbation_is_detected() {
    let r = |n: usize, frac: f64| {
        let (l, m) = lax_fields_from_q(&q_lattice(Preset::B, &grid(-1.0, 1.0, n), frac), 1.0).unwrap();
        zero_curvature_residual(&l, &m).unwrap()
    };
    let (c, f) = (r(161, 0.0), r(321, 0.0));
    assert!((3.0..=5.0).contains(&(c / f)), "ratio {}", c / f);
    let bad = r(321, 0.1);
    assert!(bad >= 1e-2, "perturbed residual {bad}");
}

#[test]
fn gauge_covariance() {
    for n in [81, 161] {
        let g = grid(-2.0, 2.0, n);
        let (l, m) = date_lax_fields(&Preset::B.params(), &g, 1.0).unwrap();
        let before = zero_curvature_residual(&l.crop(1, n - 1, 1, n - 1), &m.crop(1, n - 1, 1, n - 1)).unwrap();
        let gauge = GaugePhase { p: Lattice::tabulate(&g, |s, t| 0.7 * s.sin() * (0.5 * t).cos() + 0.2 * t) };
        let (lt, mt) = gauge_transform(&l, &m, &gauge).unwrap();
        let after = zero_curvature_residual(&lt, &mt).unwrap();
        let q = after.max(before) / after.min(before);
        assert!(q <= 10.0, "n = {n}: before {before}, after {after}");
    }
}

#[test]
fn identity_gauge_is_a_no_op_on_date_fields() {
    let g = grid(-1.0, 1.0, 11);
    let (l, m) = date_lax_fields(&Preset::A.params(), &g, 1.0).unwrap();
    let id = GaugePhase::identity(l.s.clone(), l.t.clone());
    let (lt, mt) = gauge_transform(&l, &m, &id).unwrap();
    assert_eq!(lt.values, l.crop(1, 10, 1, 10).values);
    assert_eq!(mt.values, m.crop(1, 10, 1, 10).values);
}

/// Frenet-form matrices of the Date curve gauged with the Hasimoto phase,
/// against the Lax pair of the Date potential. Returns the max deviation.
fn frenet_to_lax_gap(p: Preset, n: usize) -> f64 {
    let g = grid(-1.0, 1.0, n);
    let ev = evolution_lattice(&p.params(), &g).unwrap();
    let (ns, nt) = (ev.n_s(), ev.n_t());
    let b_s = d_ds(&ev.map(|e| e.b)).unwrap();
    let c = ev.map(|e| e.c);
    let mut frenet_l = Vec::new();
    let mut frenet_m = Vec::new();
    for j in 0..nt {
        for i in 0..ns {
            let e = ev.at(i, j);
            // Lund-Regge case: m21 = -c, m31 = b
            let (l, m) = general_frame_matrices(1.0, e.kappa, e.tau, -*c.at(i, j), e.b, *b_s.at(i, j)).unwrap();
            frenet_l.push(l);
            frenet_m.push(m);
        }
    }
    let frenet_l = Lattice::from_values(ev.s.clone(), ev.t.clone(), frenet_l).unwrap();
    let frenet_m = Lattice::from_values(ev.s.clone(), ev.t.clone(), frenet_m).unwrap();

    // theta = arg q(s0, t) + int_{s0}^s (tau - 1) ds, anchored at the centre
    let i0 = ns / 2;
    let arg0 = unwrap_phase(&(0..nt).map(|j| ev.at(i0, j).q.arg()).collect::<Vec<_>>());
    let mut theta = vec![0.0; ns * nt];
    for j in 0..nt {
        let row: Vec<f64> = (0..ns).map(|i| ev.at(i, j).tau - 1.0).collect();
        let integral = cumulative_trapezoid(&row, ev.hs(), i0);
        for i in 0..ns {
            theta[j * ns + i] = arg0[j] + integral[i];
        }
    }
    let theta = Lattice::from_values(ev.s.clone(), ev.t.clone(), theta).unwrap();
    let (lt, mt) = gauge_transform(&frenet_l, &frenet_m, &GaugePhase::from_torsion_integral(&theta)).unwrap();

    let (l, m) = date_lax_fields(&p.params(), &g, 1.0).unwrap();
    let (l, m) = (l.crop(1, ns - 1, 1, nt - 1), m.crop(1, ns - 1, 1, nt - 1));
    let gap = |a: &Lattice<Mat2>, b: &Lattice<Mat2>| {
        a.values.iter().zip(&b.values).map(|(x, y)| (*x - *y).frobenius()).fold(0.0, f64::max)
    };
    // boundary rows carry one-sided b_s; compare on the interior of the interior
    let inner = |x: &Lattice<Mat2>| x.crop(1, ns - 3, 1, nt - 3);
    gap(&inner(&lt), &inner(&l)).max(gap(&inner(&mt), &inner(&m)))
}

#[test]
fn hasimoto_gauge_maps_frenet_form_to_lax_form() {
    let coarse = frenet_to_lax_gap(Preset::A, 41);
    let fine = frenet_to_lax_gap(Preset::A, 81);
    assert!(coarse < 1e-2, "coarse gap {coarse}");
    let ratio = coarse / fine;
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio} ({coarse} -> {fine})");
}
