//! Built-in parameter sets with their default plotting domains.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{c, Complex};
use crate::date::SolitonParams;
use crate::error::{Error, Result};

/// Unit complex number with argument given in degrees.
pub fn unit_deg(deg: f64) -> Complex {
    Complex::from_polar(1.0, deg * PI / 180.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    A,
    B,
    C,
    D,
    E,
    F,
    /// 4-soliton PLR set.
    Plr4,
    /// 4-soliton sine-Gordon set.
    Sg4,
}

impl Preset {
    pub const ALL: [Preset; 8] =
        [Preset::A, Preset::B, Preset::C, Preset::D, Preset::E, Preset::F, Preset::Plr4, Preset::Sg4];

    pub const SIX: [Preset; 6] = [Preset::A, Preset::B, Preset::C, Preset::D, Preset::E, Preset::F];

    pub fn name(self) -> &'static str {
        match self {
            Preset::A => "A",
            Preset::B => "B",
            Preset::C => "C",
            Preset::D => "D",
            Preset::E => "E",
            Preset::F => "F",
            Preset::Plr4 => "plr4",
            Preset::Sg4 => "sg4",
        }
    }

    pub fn params(self) -> SolitonParams {
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let w = unit_deg;
        let (cs, alpha) = match self {
            Preset::A => (vec![one], vec![w(0.25f64.acos() * 180.0 / PI)]),
            Preset::B => (vec![one, one], vec![w(45.0), i]),
            Preset::C => (vec![one, one, one], vec![w(30.0), w(60.0), w(150.0)]),
            Preset::D => (vec![one], vec![i]),
            Preset::E => (vec![one, -one], vec![w(45.0), w(135.0)]),
            Preset::F => (vec![one, -one, i], vec![w(30.0), w(150.0), i]),
            Preset::Plr4 => (vec![w(30.0), w(60.0), w(150.0), w(120.0)], vec![w(30.0), w(60.0), w(120.0), w(150.0)]),
            Preset::Sg4 => (vec![w(30.0), w(60.0), w(120.0), w(150.0)], vec![w(30.0), w(60.0), w(120.0), w(150.0)]),
        };
        SolitonParams::new(alpha, cs, 0.0).expect("preset parameters are valid")
    }

    /// Square (s, t) domain of the default swept surface.
    pub fn surface_domain(self) -> (f64, f64) {
        match self {
            Preset::C => (-40.0, 40.0),
            Preset::F => (-25.0, 25.0),
            Preset::Plr4 | Preset::Sg4 => (-20.0, 20.0),
            _ => (-10.0, 10.0),
        }
    }

    /// s-range and time slices of the default single-curve plots, where there are any.
    pub fn curve_slices(self) -> Option<((f64, f64), [f64; 3])> {
        match self {
            Preset::Plr4 | Preset::Sg4 => Some(((-25.0, 25.0), [0.0, 1.0, 2.0])),
            _ => None,
        }
    }

    pub fn note(self) -> Option<&'static str> {
        match self {
            Preset::D => Some(
                "(c1, alpha1) = (1, i) violates the literal sine-Gordon parameter condition \
                 (conj c1 != -c1); v is nevertheless constant and the sine-Gordon checks are \
                 enabled by measured v-constancy",
            ),
            Preset::B => Some("the reference 2-soliton example"),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}' (expected A..F, plr4 or sg4)")))
    }
}
