//! Equiangular line sets built by concatenating modified mutually unbiased
//! bases, together with an independent verifier for every property the
//! construction claims.
//!
//! The pipeline is:
//!
//! 1. [`finite_field`] supplies GF(p^k) arithmetic and the absolute trace.
//! 2. [`mub`] builds sets of unit-magnitude-entry MUBs (complex for prime
//!    power `d`, real for `d` a power of 4) and checks the MUB property.
//! 3. [`lines`] stacks modified bases into `L(v)` blocks and concatenates
//!    them into a [`lines::LineSet`].
//! 4. [`verify`] measures the Gram matrix and reports equiangularity,
//!    the two magnitude classes and the absolute bounds.
//! 5. [`io`] reads and writes the canonical JSON envelope and CSV export.

pub mod finite_field;
pub mod io;
pub mod lines;
pub mod matrix;
pub mod mub;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use num_complex::Complex64;

/// Complex scalar used for every basis entry and line coordinate.
pub type ComplexValue = Complex64;

/// Whether data lives in complex or real space. Real data keeps every
/// imaginary part at exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Complex,
    Real,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Real => "real",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complex" => Ok(Kind::Complex),
            "real" => Ok(Kind::Real),
            other => Err(format!("unknown kind `{other}` (expected `complex` or `real`)")),
        }
    }
}

/// Default relative tolerance for MUB checks.
pub const DEFAULT_MUB_TOL: f64 = 1e-9;

/// Default relative tolerance for line-set checks.
pub const DEFAULT_LINE_TOL: f64 = 1e-8;
