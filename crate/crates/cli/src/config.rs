//! Run configuration: one JSON document, optionally overridden by flags.

use std::path::{Path, PathBuf};

use plr_soliton::params_io::ParamsDoc;
use plr_soliton::{GridSpec, Preset, SolitonParams};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 201;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const VERIFY_DOMAIN: (f64, f64) = (-5.0, 5.0);
pub const VERIFY_SAMPLES: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Csv,
    Obj,
    Json,
}

/// The JSON document as written by the user. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConfigDoc {
    pub params: Option<ParamsDoc>,
    pub preset: Option<String>,
    pub s_range: Option<[f64; 2]>,
    pub t_range: Option<[f64; 2]>,
    pub n_s: Option<usize>,
    pub n_t: Option<usize>,
    pub lambda: Option<f64>,
    pub h: Option<f64>,
    pub outputs: Option<Vec<Output>>,
    pub out_dir: Option<PathBuf>,
}

impl ConfigDoc {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// Flag values that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub h: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SolitonParams,
    pub preset: Option<Preset>,
    pub s_range: Option<(f64, f64)>,
    pub t_range: Option<(f64, f64)>,
    pub n_s: Option<usize>,
    pub n_t: Option<usize>,
    pub lambda: f64,
    pub h: f64,
    pub outputs: Vec<Output>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn resolve(doc: ConfigDoc, flags: Overrides) -> Result<Self, CliError> {
        if doc.preset.is_some() && doc.params.is_some() {
            return Err(CliError::Validation("config gives both a preset and explicit params".into()));
        }
        // a --preset flag replaces whatever parameters the document names
        let (params, preset) = match (flags.preset.or(doc.preset), doc.params) {
            (Some(name), _) => {
                let p: Preset = name.parse().map_err(|e: plr_soliton::Error| CliError::Validation(e.to_string()))?;
                (p.params(), Some(p))
            }
            (None, Some(doc)) => (doc.to_params().map_err(|e| CliError::Validation(e.to_string()))?, None),
            (None, None) => return Err(CliError::Validation("no parameters: pass --preset or a config with params".into())),
        };
        let lambda = flags.lambda.or(doc.lambda).unwrap_or(1.0);
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(CliError::Validation(format!("lambda must be a positive real, got {lambda}")));
        }
        let h = flags.h.or(doc.h).unwrap_or(DEFAULT_STEP);
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Validation(format!("step h must be positive, got {h}")));
        }
        let cfg = Self {
            params,
            preset,
            s_range: doc.s_range.map(|r| (r[0], r[1])),
            t_range: doc.t_range.map(|r| (r[0], r[1])),
            n_s: doc.n_s,
            n_t: doc.n_t,
            lambda,
            h,
            outputs: doc.outputs.unwrap_or_else(|| vec![Output::Csv, Output::Obj, Output::Json]),
            out_dir: flags.out_dir.or(doc.out_dir).unwrap_or_else(|| PathBuf::from("out")),
        };
        // fail early on degenerate explicit ranges or counts
        cfg.grid()?;
        Ok(cfg)
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    fn default_domain(&self) -> (f64, f64) {
        self.preset.map(Preset::surface_domain).unwrap_or((-10.0, 10.0))
    }

    /// Evaluation grid for `solve` and `surface`.
    pub fn grid(&self) -> Result<GridSpec, CliError> {
        let d = self.default_domain();
        GridSpec::new(
            self.s_range.unwrap_or(d),
            self.t_range.unwrap_or(d),
            self.n_s.unwrap_or(DEFAULT_SAMPLES),
            self.n_t.unwrap_or(DEFAULT_SAMPLES),
        )
        .map_err(|e| CliError::Validation(e.to_string()))
    }

    /// Grid for `verify`: explicit ranges and counts when given, else the
    /// standard [-5, 5]^2 sweep with 21 x 21 centres.
    pub fn verify_grid(&self) -> Result<GridSpec, CliError> {
        GridSpec::new(
            self.s_range.unwrap_or(VERIFY_DOMAIN),
            self.t_range.unwrap_or(VERIFY_DOMAIN),
            self.n_s.unwrap_or(VERIFY_SAMPLES),
            self.n_t.unwrap_or(VERIFY_SAMPLES),
        )
        .map_err(|e| CliError::Validation(e.to_string()))
    }

    /// s-range and sample count of a single-time curve.
    pub fn curve_axis(&self) -> Result<((f64, f64), usize), CliError> {
        let range = self
            .s_range
            .or_else(|| self.preset.and_then(Preset::curve_slices).map(|(r, _)| r))
            .unwrap_or_else(|| self.default_domain());
        let n = self.n_s.unwrap_or(DEFAULT_SAMPLES);
        if !(range.0 < range.1 && range.0.is_finite() && range.1.is_finite()) || n < 7 {
            return Err(CliError::Validation(format!("curve needs a non-degenerate s-range and at least 7 samples, got {range:?} with {n}")));
        }
        Ok((range, n))
    }
}
