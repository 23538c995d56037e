//! Concatenation of modified MUB stacks into equiangular line sets.
//!
//! For a MUB set `B_1..B_r` in dimension `d` and a scalar `v`, `L(v)` stacks
//! the bases with coordinate `j` of every vector of `B_j` multiplied by `v`.
//! A line set is the horizontal concatenation
//! `[c_1 L(a_1) … c_t L(a_t) L(a_last)]` in dimension `(t + 1) d`, whose
//! off-diagonal inner products have one of two magnitudes: one for pairs
//! from the same basis, one for pairs from different bases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::CMatrix;
use crate::mub::{Basis, MubSet, Provenance};
use crate::{ComplexValue, Kind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("coordinate index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, LineError>;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Parameters of one concatenation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Base dimension of the MUBs.
    pub d: usize,
    /// Number of user-chosen blocks; the construction has `t + 1` blocks.
    pub t: usize,
    /// Number of bases used.
    pub r: usize,
    pub a: Vec<ComplexValue>,
    /// Block scalings; `None` means every `c_j = 1`.
    pub c: Option<Vec<f64>>,
    pub kind: Kind,
}

impl ConstructionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LineError::InvalidParams(msg));
        if self.t == 0 {
            return bad("t must be at least 1".into());
        }
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.r == 0 || self.r > self.d {
            return bad(format!("r = {} must lie in 1..={}", self.r, self.d));
        }
        if self.a.len() != self.t {
            return bad(format!("expected {} scalars a_j, got {}", self.t, self.a.len()));
        }
        if self.a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return bad("scalars a_j must be finite".into());
        }
        if let Some(c) = &self.c {
            if c.len() != self.t {
                return bad(format!("expected {} scalings c_j, got {}", self.t, c.len()));
            }
            if c.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return bad("scalings c_j must be finite and positive".into());
            }
        }
        if self.kind == Kind::Real {
            if let Some(z) = self.a.iter().find(|z| z.im != 0.0) {
                return Err(LineError::KindMismatch(format!(
                    "real construction needs real scalars, got {z}"
                )));
            }
        }
        Ok(())
    }

    /// Scalings with the all-ones case folded into `None`.
    fn effective_c(&self) -> Option<&[f64]> {
        self.c.as_deref().filter(|c| c.iter().any(|&x| x != 1.0))
    }

    pub fn ambient_dim(&self) -> usize {
        (self.t + 1) * self.d
    }

    pub fn count(&self) -> usize {
        self.r * self.d
    }
}

/// The `t + 1` block scalars. The last one is always derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarSet {
    pub blocks: Vec<ComplexValue>,
    pub last: ComplexValue,
}

impl ScalarSet {
    /// `a_last = t + 1 − Σ a_j`.
    pub fn plain(a: &[ComplexValue]) -> Self {
        let sum: Complex64 = a.iter().sum();
        Self {
            blocks: a.to_vec(),
            last: c64((a.len() + 1) as f64) - sum,
        }
    }

    /// `a_last = 1 + Σ c_j² (1 − a_j)`.
    pub fn scaled(a: &[ComplexValue], c: &[f64]) -> Self {
        let correction: Complex64 = a.iter().zip(c).map(|(aj, cj)| (c64(1.0) - aj) * (cj * cj)).sum();
        Self {
            blocks: a.to_vec(),
            last: c64(1.0) + correction,
        }
    }

    fn for_params(a: &[ComplexValue], c: Option<&[f64]>) -> Self {
        match c {
            Some(c) => Self::scaled(a, c),
            None => Self::plain(a),
        }
    }

    pub fn values(&self) -> Vec<ComplexValue> {
        let mut v = self.blocks.clone();
        v.push(self.last);
        v
    }

    pub fn sum(&self) -> ComplexValue {
        self.blocks.iter().sum::<Complex64>() + self.last
    }
}

/// How a line set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivation {
    Concatenation,
    R8Extension,
}

/// Construction metadata carried alongside the vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineMeta {
    pub derivation: Derivation,
    pub params: ConstructionParams,
    pub mub_provenance: Provenance,
    pub scalar_set: ScalarSet,
    /// Index of the source basis of each vector. Present only when
    /// same-basis and cross-basis pairs are meaningful.
    pub origins: Option<Vec<usize>>,
}

/// `m` vectors in ambient dimension `D`, one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSet {
    vectors: CMatrix,
    kind: Kind,
    meta: Option<LineMeta>,
}

impl LineSet {
    pub fn new(mut vectors: CMatrix, kind: Kind, meta: Option<LineMeta>) -> Result<Self> {
        if kind == Kind::Real {
            if !vectors.is_real() {
                return Err(LineError::KindMismatch(
                    "real line set has a non-zero imaginary part".into(),
                ));
            }
            // Signed zeros from products like (-1)(0) would not survive a
            // real-number round trip.
            vectors.clear_imag();
        }
        if let Some(origins) = meta.as_ref().and_then(|m| m.origins.as_ref()) {
            if origins.len() != vectors.rows() {
                return Err(LineError::InvalidParams(format!(
                    "{} origin tags for {} vectors",
                    origins.len(),
                    vectors.rows()
                )));
            }
        }
        Ok(Self { vectors, kind, meta })
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn meta(&self) -> Option<&LineMeta> {
        self.meta.as_ref()
    }

    pub fn count(&self) -> usize {
        self.vectors.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vector(&self, i: usize) -> &[ComplexValue] {
        self.vectors.row(i)
    }
}

/// Copy of `basis` with coordinate `j` (1-based) of every vector multiplied
/// by `v`.
pub fn modify_basis(basis: &Basis, j: usize, v: ComplexValue) -> Result<CMatrix> {
    let d = basis.dim();
    if j == 0 || j > d {
        return Err(LineError::IndexOutOfRange { index: j, dim: d });
    }
    let mut out = basis.entries().clone();
    for row in 0..d {
        let z = out.get(row, j - 1);
        out.set(row, j - 1, z * v);
    }
    Ok(out)
}

/// `L(v)`: the `r d × d` stack of `modify_basis(B_j, j, v)` in basis order.
pub fn build_l(mubs: &MubSet, v: ComplexValue) -> CMatrix {
    let parts: Vec<CMatrix> = mubs
        .bases()
        .iter()
        .enumerate()
        .map(|(i, b)| modify_basis(b, i + 1, v).expect("r <= d"))
        .collect();
    CMatrix::vstack(&parts).expect("bases share a dimension")
}

/// `a_j = 1 + d^{1/4} / √t` for every `j`.
pub fn default_a(d: usize, t: usize) -> Vec<ComplexValue> {
    let value = 1.0 + (d as f64).sqrt().sqrt() / (t as f64).sqrt();
    vec![c64(value); t]
}

/// Predicted magnitudes of same-basis and cross-basis inner products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnitudePair {
    pub intra: f64,
    pub cross: f64,
}

/// `(Σ c_j²|1 − a_j|² + |Σ c_j²(1 − a_j)|², (1 + Σ c_j²)√d)`, with all
/// `c_j = 1` when `c` is `None`.
pub fn magnitude_pair(d: usize, a: &[ComplexValue], c: Option<&[f64]>) -> MagnitudePair {
    let weights: Vec<f64> = match c {
        Some(c) => c.iter().map(|x| x * x).collect(),
        None => vec![1.0; a.len()],
    };
    let spread: f64 = a.iter().zip(&weights).map(|(aj, w)| w * (aj - 1.0).norm_sqr()).sum();
    let drift: Complex64 = a.iter().zip(&weights).map(|(aj, w)| (c64(1.0) - aj) * w).sum();
    let weight_sum: f64 = weights.iter().sum();
    MagnitudePair {
        intra: spread + drift.norm_sqr(),
        cross: (1.0 + weight_sum) * (d as f64).sqrt(),
    }
}

/// Cosine of the common angle of every equalized construction, `1/(1 + √d)`.
pub fn predict_angle(d: usize) -> f64 {
    1.0 / (1.0 + (d as f64).sqrt())
}

/// Squared norm of every constructed vector:
/// `Σ_j c_j²(|a_j|² + d − 1) + |a_last|² + d − 1`.
pub fn predict_norm_sq(d: usize, scalars: &ScalarSet, c: Option<&[f64]>) -> f64 {
    let base = d as f64 - 1.0;
    let blocks: f64 = match c {
        Some(c) => scalars
            .blocks
            .iter()
            .zip(c)
            .map(|(v, cj)| cj * cj * (v.norm_sqr() + base))
            .sum(),
        None => scalars.blocks.iter().map(|v| v.norm_sqr() + base).sum(),
    };
    blocks + scalars.last.norm_sqr() + base
}

/// Both real roots `a = 1 ± d^{1/4}/c` equalizing the magnitudes for `t = 1`
/// with scaling `c`, larger root first.
pub fn solve_real_t1(d: usize, c: f64) -> [f64; 2] {
    let offset = (d as f64).sqrt().sqrt() / c;
    [1.0 + offset, 1.0 - offset]
}

/// Concatenates `t + 1` modified stacks. `a = None` selects
/// [`default_a`]; `c = None` (or all ones) gives the unscaled construction.
pub fn construct(mubs: &MubSet, t: usize, a: Option<Vec<ComplexValue>>, c: Option<Vec<f64>>) -> Result<LineSet> {
    let d = mubs.dim();
    let a = a.unwrap_or_else(|| default_a(d, t));
    let params = ConstructionParams {
        d,
        t,
        r: mubs.len(),
        a,
        c,
        kind: mubs.kind(),
    };
    params.validate()?;
    let c_eff = params.effective_c().map(<[f64]>::to_vec);
    let scalars = ScalarSet::for_params(&params.a, c_eff.as_deref());

    let mut blocks = Vec::with_capacity(t + 1);
    for (j, aj) in params.a.iter().enumerate() {
        let block = build_l(mubs, *aj);
        blocks.push(match &c_eff {
            Some(c) => block.scale(c[j]),
            None => block,
        });
    }
    blocks.push(build_l(mubs, scalars.last));
    let vectors = CMatrix::hstack(&blocks).expect("blocks share a row count");

    let origins = (0..params.count()).map(|i| i / d).collect();
    let params = ConstructionParams { c: c_eff, ..params };
    LineSet::new(
        vectors,
        mubs.kind(),
        Some(LineMeta {
            derivation: Derivation::Concatenation,
            params,
            mub_provenance: mubs.provenance(),
            scalar_set: scalars,
            origins: Some(origins),
        }),
    )
}

/// Doubles the 8-line real set `[L(a) L(2 − a)]`, `a ∈ {1 ± √2}`, to the 16
/// rows of `[[L(a), L(2 − a)], [L(2 − a), L(a)]]`.
pub fn extend_r8(ls: &LineSet) -> Result<LineSet> {
    let pre = |msg: &str| Err(LineError::Precondition(msg.to_string()));
    let Some(meta) = ls.meta() else {
        return pre("line set carries no construction metadata");
    };
    let p = &meta.params;
    if meta.derivation != Derivation::Concatenation {
        return pre("input must be a plain concatenation");
    }
    if ls.kind() != Kind::Real || p.kind != Kind::Real {
        return pre("input must be real");
    }
    if p.d != 4 || p.t != 1 || p.r != 2 {
        return pre("input must come from d = 4, t = 1, r = 2");
    }
    if p.effective_c().is_some() {
        return pre("input must be unscaled");
    }
    let a = p.a[0];
    let root = 2f64.sqrt();
    if a.im != 0.0 || ((a.re - 1.0).abs() - root).abs() > 1e-12 {
        return pre("scalar must be 1 ± √2");
    }
    if ls.count() != 8 || ls.ambient_dim() != 8 {
        return pre("input must hold 8 vectors in dimension 8");
    }
    let mut vectors = CMatrix::zeros(16, 8);
    for i in 0..8 {
        let row = ls.vector(i);
        vectors.row_mut(i).copy_from_slice(row);
        let swapped = vectors.row_mut(i + 8);
        swapped[..4].copy_from_slice(&row[4..]);
        swapped[4..].copy_from_slice(&row[..4]);
    }
    LineSet::new(
        vectors,
        Kind::Real,
        Some(LineMeta {
            derivation: Derivation::R8Extension,
            origins: None,
            ..meta.clone()
        }),
    )
}
