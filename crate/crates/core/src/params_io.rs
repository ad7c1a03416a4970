//! JSON representation of soliton parameters.
//!
//! Complex numbers are written either as `{"re": .., "im": ..}` or in polar
//! form `{"mod": .., "arg_deg": ..}` (`arg_degrees` is accepted too).

use serde::{Deserialize, Serialize};

use crate::algebra::Complex;
use crate::date::SolitonParams;
use crate::error::{Error, Result};
use crate::presets::unit_deg;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRepr {
    Cartesian {
        re: f64,
        im: f64,
    },
    Polar {
        #[serde(rename = "mod")]
        modulus: f64,
        #[serde(alias = "arg_degrees")]
        arg_deg: f64,
    },
}

impl ComplexRepr {
    pub fn value(self) -> Complex {
        match self {
            ComplexRepr::Cartesian { re, im } => Complex::new(re, im),
            ComplexRepr::Polar { modulus, arg_deg } => unit_deg(arg_deg) * modulus,
        }
    }
}

impl From<Complex> for ComplexRepr {
    fn from(z: Complex) -> Self {
        ComplexRepr::Cartesian { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub alpha: Vec<ComplexRepr>,
    pub c: Vec<ComplexRepr>,
    #[serde(default)]
    pub v0: f64,
}

impl ParamsDoc {
    pub fn to_params(&self) -> Result<SolitonParams> {
        SolitonParams::new(
            self.alpha.iter().map(|z| z.value()).collect(),
            self.c.iter().map(|z| z.value()).collect(),
            self.v0,
        )
    }
}

impl From<&SolitonParams> for ParamsDoc {
    fn from(p: &SolitonParams) -> Self {
        Self {
            alpha: p.alpha().iter().map(|&z| z.into()).collect(),
            c: p.c().iter().map(|&z| z.into()).collect(),
            v0: p.v0(),
        }
    }
}

pub fn params_from_json(text: &str) -> Result<SolitonParams> {
    let doc: ParamsDoc = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    doc.to_params()
}

pub fn params_to_json(p: &SolitonParams) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ParamsDoc::from(p))?)
}
