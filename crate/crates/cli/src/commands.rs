//! The five subcommands. Each returns what it printed and wrote so that
//! callers (and tests) can inspect it without spawning a process.

use std::path::PathBuf;

use plr_soliton::curve::{frenet_from_points, nsoliton_curve_lambda, swept_surface_lambda};
use plr_soliton::date::{is_sine_gordon, solution_fields, v_spread};
use plr_soliton::grid::linspace;
use plr_soliton::tolerances::REALITY_EPS;
use plr_soliton::verify::{run_suite, suite_passed, ResidualReport};
use plr_soliton::{Error, Lattice};
use serde::Serialize;

use crate::config::{Output, RunConfig};
use crate::export::{csv, fmt_f64, fmt_opt, mesh_csv, mesh_obj, write_atomic};
use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub stdout: String,
    pub written: Vec<PathBuf>,
    /// Set by `verify` when a non-skipped check failed.
    pub verification_failed: bool,
}

fn core_err(e: Error) -> CliError {
    match e {
        Error::Io(e) => CliError::Io(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn header(cfg: &RunConfig) -> String {
    match cfg.preset {
        Some(p) => format!("preset {p}"),
        None => format!("explicit parameters, N = {}", cfg.params.n()),
    }
}

#[derive(Serialize)]
struct ParamsReport {
    valid: bool,
    n: usize,
    preset: Option<String>,
    sine_gordon: bool,
    sigma: Option<Vec<usize>>,
    v_constant: bool,
    v_spread: f64,
    note: Option<&'static str>,
}

/// Parameters were validated while resolving the config; report the
/// sine-Gordon test and the measured spread of v on the verification grid.
pub fn params_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sg = is_sine_gordon(&cfg.params).map_err(core_err)?;
    let spread = v_spread(&cfg.params, &cfg.verify_grid()?).map_err(core_err)?;
    let report = ParamsReport {
        valid: true,
        n: cfg.params.n(),
        preset: cfg.preset.map(|p| p.to_string()),
        sine_gordon: sg.holds,
        sigma: sg.sigma,
        v_constant: spread < REALITY_EPS,
        v_spread: spread,
        note: cfg.preset.and_then(|p| p.note()),
    };
    let mut stdout = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    stdout.push('\n');
    Ok(Outcome { stdout, ..Default::default() })
}

/// Grid evaluation of a, u, v and q. Points where the Date system
/// degenerates, or where v is undefined, carry `gap = 1` and empty cells.
pub fn solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let lat = Lattice::tabulate(&grid, |s, t| match solution_fields(&cfg.params, s, t) {
        Ok(f) => Ok(Some(f)),
        Err(Error::Singular { .. }) | Err(Error::Degenerate { .. }) => Ok(None),
        Err(e) => Err(e),
    });
    let mut rows = Vec::with_capacity(grid.len());
    let mut gaps = 0;
    for (k, v) in lat.values.into_iter().enumerate() {
        let (s, t) = (lat.s[k % grid.n_s], lat.t[k / grid.n_s]);
        let f = v.map_err(core_err)?;
        let mut row = vec![fmt_f64(s), fmt_f64(t)];
        match f {
            Some(f) => {
                row.extend([fmt_f64(f.a.re), fmt_f64(f.a.im), fmt_f64(f.u), fmt_opt(f.v), fmt_f64(f.q.re), fmt_f64(f.q.im)]);
                let gap = f.v.is_none();
                gaps += gap as usize;
                row.push(if gap { "1" } else { "0" }.into());
            }
            None => {
                row.extend(std::iter::repeat_n(String::new(), 6));
                row.push("1".into());
                gaps += 1;
            }
        }
        rows.push(row);
    }
    let mut out = Outcome::default();
    if cfg.wants(Output::Csv) {
        let path = cfg.out_dir.join("solve.csv");
        write_atomic(&path, csv(&["s", "t", "re_a", "im_a", "u", "v", "re_q", "im_q", "gap"], rows).as_bytes())?;
        out.written.push(path);
    }
    out.stdout = format!("solve: {}, {} x {} samples, {gaps} gaps\n", header(cfg), grid.n_s, grid.n_t);
    Ok(out)
}

/// One time slice of the curve with Frenet curvature and torsion.
pub fn curve(cfg: &RunConfig, t: f64) -> Result<Outcome, CliError> {
    if !t.is_finite() {
        return Err(CliError::Validation(format!("curve time must be finite, got {t}")));
    }
    let ((lo, hi), n) = cfg.curve_axis()?;
    let s = linspace(lo, hi, n);
    let pts = s
        .iter()
        .map(|&si| nsoliton_curve_lambda(&cfg.params, si, t, cfg.lambda))
        .collect::<Result<Vec<_>, _>>()
        .map_err(core_err)?;
    let fr = frenet_from_points(&pts, s[1] - s[0]).map_err(core_err)?;
    let finite = pts.iter().all(|p| p.is_finite());
    let rows = (0..n).map(|i| {
        vec![fmt_f64(s[i]), fmt_f64(pts[i].p), fmt_f64(pts[i].q), fmt_f64(pts[i].r), fmt_opt(fr.kappa[i]), fmt_opt(fr.tau[i])]
    });
    let mut out = Outcome::default();
    if cfg.wants(Output::Csv) {
        let path = cfg.out_dir.join(format!("curve_t{t}.csv"));
        write_atomic(&path, csv(&["s", "x", "y", "z", "kappa", "tau"], rows).as_bytes())?;
        out.written.push(path);
    }
    out.stdout = format!(
        "curve: {}, t = {t}, s in [{lo}, {hi}], {n} samples, all finite: {finite}, frenet gaps: {}\n",
        header(cfg),
        fr.gaps
    );
    Ok(out)
}

/// Swept surface as an OBJ quad mesh plus a per-vertex CSV.
pub fn surface(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let mesh = swept_surface_lambda(&cfg.params, &grid, cfg.lambda, true).map_err(core_err)?;
    let mut out = Outcome::default();
    let note = format!(
        "swept surface, {}\ns in [{}, {}], t in [{}, {}], lambda {}",
        header(cfg),
        grid.s_min,
        grid.s_max,
        grid.t_min,
        grid.t_max,
        cfg.lambda
    );
    if cfg.wants(Output::Obj) {
        let path = cfg.out_dir.join("surface.obj");
        write_atomic(&path, mesh_obj(&mesh, &note).as_bytes())?;
        out.written.push(path);
    }
    if cfg.wants(Output::Csv) {
        let path = cfg.out_dir.join("surface.csv");
        write_atomic(&path, mesh_csv(&mesh).as_bytes())?;
        out.written.push(path);
    }
    out.stdout = format!(
        "surface: {}, {} vertices, {} faces, {} dropped, all finite: {}\n",
        header(cfg),
        mesh.vertices.len(),
        mesh.faces.len(),
        mesh.dropped_faces,
        mesh.all_finite()
    );
    Ok(out)
}

/// Full residual suite at h and h/2; the JSON report goes to `verify.json`.
pub fn verify(cfg: &RunConfig, perturb: Option<f64>) -> Result<Outcome, CliError> {
    if let Some(f) = perturb {
        if !f.is_finite() {
            return Err(CliError::Validation(format!("perturbation must be finite, got {f}")));
        }
    }
    let grid = cfg.verify_grid()?;
    let reports: Vec<ResidualReport> = run_suite(&cfg.params, &grid, cfg.h, perturb).map_err(core_err)?;
    let passed = suite_passed(&reports);
    let mut out = Outcome { verification_failed: !passed, ..Default::default() };
    if cfg.wants(Output::Json) {
        let mut json = serde_json::to_string_pretty(&reports).map_err(|e| CliError::Io(e.to_string()))?;
        json.push('\n');
        let path = cfg.out_dir.join("verify.json");
        write_atomic(&path, json.as_bytes())?;
        out.written.push(path);
    }
    let mut s = format!("verify: {}, h = {}\n", header(cfg), cfg.h);
    for r in &reports {
        let ratio = r.convergence_ratio.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "  {:<28} {:<10} max {:.3e}  ratio {:>7}  skipped {:.2}\n",
            r.name,
            status_word(r),
            r.max_residual,
            ratio,
            r.skipped_fraction
        ));
    }
    s.push_str(if passed { "all checks passed\n" } else { "verification FAILED\n" });
    out.stdout = s;
    Ok(out)
}

fn status_word(r: &ResidualReport) -> &'static str {
    if r.status.is_pass() {
        "pass"
    } else if r.status.is_fail() {
        "FAIL"
    } else {
        "skipped"
    }
}
