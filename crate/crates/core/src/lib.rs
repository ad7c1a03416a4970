//! N-soliton solutions of the Pohlmeyer-Lund-Regge equation by the Date
//! direct method, the Lund-Regge space curves they generate, and a
//! finite-difference verifier for the governing equations.

pub mod algebra;
pub mod curve;
pub mod date;
pub mod error;
pub mod frame;
pub mod grid;
pub mod params_io;
pub mod presets;
pub mod stencil;
pub mod tolerances;
pub mod verify;

pub use algebra::{Complex, Mat2, Su2Vector};
pub use date::SolitonParams;
pub use error::{Error, Result};
pub use grid::{GridSpec, Lattice};
pub use presets::Preset;
