//! Mutually unbiased bases with unit-magnitude entries.
//!
//! Bases use the unnormalized convention: every entry has magnitude 1 and
//! every vector has norm `√d`, so two vectors from distinct bases of an
//! unbiased pair satisfy `|⟨x, y⟩| = √d`.
//!
//! Three constructions are provided:
//!
//! * odd prime powers `q`: `ω_p^{tr(a·x² + b·x)}` over GF(q), one basis per
//!   `a`, one vector per `b`, one coordinate per `x`;
//! * `d = 2^m`, complex: `i^{x̃ᵀPx̃ mod 4} · (−1)^{b·x}` for `P` ranging over a
//!   symmetric spread set;
//! * `d = 4^k`, real: `(−1)^{Q_P(x) + b·x}` for `P` ranging over an
//!   alternating spread set.
//!
//! The standard basis is never included. Every builder runs
//! [`check_mub_set`] on its output and refuses to return a set that fails.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{prime_power, FieldError, FieldSpec};
use crate::matrix::{inner, CMatrix};
use crate::verify::{Location, PropertyCheck, Subject, VerificationReport, Violation};
use crate::{ComplexValue, Kind, DEFAULT_MUB_TOL};

/// Largest odd prime power accepted by [`wootters_fields`].
pub const MAX_ODD_ORDER: u64 = 81;
/// Largest spread-set degree for the symmetric search.
pub const MAX_SYMMETRIC_DEGREE: usize = 4;
/// Largest spread-set degree for the alternating search.
pub const MAX_ALTERNATING_DEGREE: usize = 6;
/// Largest real dimension accepted by [`build_real_mubs`].
pub const MAX_REAL_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MubError {
    #[error("{0}")]
    InvalidDimension(String),
    #[error("basis {index} is malformed: {reason}")]
    MalformedBasis { index: usize, reason: String },
    #[error("dimension mismatch: basis {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("quadratic-form matrix does not fit the requested kind: {0}")]
    ShapeMismatch(String),
    #[error("spread-set search found no solution for degree {m}")]
    SearchFailed { m: usize },
    #[error("MUB check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, MubError>;

/// Where a [`MubSet`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    WoottersFields,
    SymmetricSpread,
    AlternatingSpread,
    File,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::WoottersFields => "wootters-fields",
            Provenance::SymmetricSpread => "symmetric-spread",
            Provenance::AlternatingSpread => "alternating-spread",
            Provenance::File => "file",
        }
    }
}

/// One orthogonal basis of `d` vectors, stored as the rows of a `d × d`
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    entries: CMatrix,
    kind: Kind,
}

impl Basis {
    /// Wraps a square matrix. Real kind requires every imaginary part to
    /// be exactly zero.
    pub fn new(mut entries: CMatrix, kind: Kind) -> std::result::Result<Self, String> {
        if entries.rows() != entries.cols() {
            return Err(format!(
                "expected a square matrix, got {}x{}",
                entries.rows(),
                entries.cols()
            ));
        }
        if entries.rows() == 0 {
            return Err("basis is empty".into());
        }
        if kind == Kind::Real {
            if !entries.is_real() {
                return Err("real basis has a non-zero imaginary part".into());
            }
            entries.clear_imag();
        }
        Ok(Self { entries, kind })
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn vector(&self, i: usize) -> &[ComplexValue] {
        self.entries.row(i)
    }
}

/// Ordered list of bases sharing a dimension and a kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    kind: Kind,
    provenance: Provenance,
    bases: Vec<Basis>,
}

impl MubSet {
    /// Checks shapes only; use [`check_mub_set`] for the MUB property.
    pub fn new(kind: Kind, provenance: Provenance, bases: Vec<Basis>) -> Result<Self> {
        let dim = bases
            .first()
            .map(Basis::dim)
            .ok_or_else(|| MubError::InvalidDimension("a MUB set needs at least one basis".into()))?;
        for (index, b) in bases.iter().enumerate() {
            if b.dim() != dim {
                return Err(MubError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: b.dim(),
                });
            }
            if b.kind() != kind {
                return Err(MubError::MalformedBasis {
                    index,
                    reason: format!("kind {} in a {} set", b.kind(), kind),
                });
            }
        }
        let max = match kind {
            Kind::Complex => dim,
            Kind::Real => (dim / 2).max(1),
        };
        if bases.len() > max {
            return Err(MubError::InvalidDimension(format!(
                "{} {} bases in dimension {dim}; at most {max} allowed",
                bases.len(),
                kind
            )));
        }
        Ok(Self {
            dim,
            kind,
            provenance,
            bases,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    /// Number of bases, `r`.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixShape {
    Symmetric,
    /// Symmetric with zero diagonal.
    Alternating,
}

/// Square matrix over GF(2) of side at most 8. Row `i` is a bitmask whose
/// bit `j` holds entry `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    m: usize,
    rows: Vec<u8>,
    shape: MatrixShape,
}

impl BinaryMatrix {
    pub fn new(shape: MatrixShape, bits: &[Vec<u8>]) -> std::result::Result<Self, String> {
        let m = bits.len();
        if m == 0 || m > 8 {
            return Err(format!("side length {m} outside 1..=8"));
        }
        let mut rows = vec![0u8; m];
        for (i, row) in bits.iter().enumerate() {
            if row.len() != m {
                return Err(format!("row {i} has length {}, expected {m}", row.len()));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => rows[i] |= 1 << j,
                    _ => return Err(format!("entry ({i}, {j}) = {b} is not a bit")),
                }
            }
        }
        let mat = Self { m, rows, shape };
        if !mat.is_symmetric() {
            return Err("matrix is not symmetric".into());
        }
        if shape == MatrixShape::Alternating && !mat.has_zero_diagonal() {
            return Err("alternating matrix has a non-zero diagonal".into());
        }
        Ok(mat)
    }

    pub fn zero(m: usize, shape: MatrixShape) -> Self {
        Self {
            m,
            rows: vec![0; m],
            shape,
        }
    }

    pub fn side(&self) -> usize {
        self.m
    }

    pub fn shape(&self) -> MatrixShape {
        self.shape
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        (self.rows[i] >> j) & 1
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn is_symmetric(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn has_zero_diagonal(&self) -> bool {
        (0..self.m).all(|i| self.get(i, i) == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Entrywise sum over GF(2).
    pub fn sum(&self, other: &Self) -> Self {
        let shape = if self.shape == MatrixShape::Alternating && other.shape == MatrixShape::Alternating {
            MatrixShape::Alternating
        } else {
            MatrixShape::Symmetric
        };
        Self {
            m: self.m,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
            shape,
        }
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows, self.m)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rank() == self.m
    }

    /// Free positions of the shape, row-major over the upper triangle.
    fn free_positions(m: usize, shape: MatrixShape) -> Vec<(usize, usize)> {
        let skip_diag = shape == MatrixShape::Alternating;
        (0..m)
            .flat_map(|i| {
                let start = if skip_diag { i + 1 } else { i };
                (start..m).map(move |j| (i, j))
            })
            .collect()
    }

    /// Matrix whose free positions take the bits of `code`, least
    /// significant bit first.
    fn from_code(m: usize, shape: MatrixShape, code: u32) -> Self {
        let mut rows = vec![0u8; m];
        for (bit, (i, j)) in Self::free_positions(m, shape).into_iter().enumerate() {
            if code >> bit & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
        Self { m, rows, shape }
    }
}

fn gf2_rank(rows: &[u8], m: usize) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for col in 0..m {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pr = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row >> col & 1 == 1 {
                *row ^= pr;
            }
        }
        rank += 1;
    }
    rank
}

/// Depth-first search for `target` codes, starting from the zero code,
/// whose pairwise XORs all land on nonsingular matrices. Candidates are
/// visited in increasing code order and the first solution is returned.
fn spread_search(m: usize, shape: MatrixShape, target: usize) -> Option<Vec<BinaryMatrix>> {
    let nbits = BinaryMatrix::free_positions(m, shape).len();
    let total = 1u32 << nbits;
    // The encoding is linear, so the sum of two matrices has code a ^ b.
    let nonsingular: Vec<bool> = (0..total)
        .map(|c| BinaryMatrix::from_code(m, shape, c).is_nonsingular())
        .collect();
    let candidates: Vec<u32> = (1..total).filter(|&c| nonsingular[c as usize]).collect();
    let mut chosen = vec![0u32];

    fn extend(chosen: &mut Vec<u32>, candidates: &[u32], nonsingular: &[bool], target: usize) -> bool {
        if chosen.len() == target {
            return true;
        }
        let need = target - chosen.len();
        for (i, &c) in candidates.iter().enumerate() {
            if candidates.len() - i < need {
                return false;
            }
            let rest: Vec<u32> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&o| nonsingular[(o ^ c) as usize])
                .collect();
            if rest.len() + 1 < need {
                continue;
            }
            chosen.push(c);
            if extend(chosen, &rest, nonsingular, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    extend(&mut chosen, &candidates, &nonsingular, target).then(|| {
        chosen
            .into_iter()
            .map(|c| BinaryMatrix::from_code(m, shape, c))
            .collect()
    })
}

/// `2^m` symmetric `m × m` binary matrices, containing zero, with every
/// pairwise sum nonsingular.
pub fn symmetric_spread_search(m: usize) -> Result<Vec<BinaryMatrix>> {
    if !(1..=MAX_SYMMETRIC_DEGREE).contains(&m) {
        return Err(MubError::InvalidDimension(format!(
            "symmetric spread degree {m} outside 1..={MAX_SYMMETRIC_DEGREE}"
        )));
    }
    spread_search(m, MatrixShape::Symmetric, 1 << m).ok_or(MubError::SearchFailed { m })
}

/// `2^(m-1)` alternating `m × m` binary matrices, containing zero, with
/// every pairwise sum nonsingular. `m` must be even.
pub fn alternating_spread_search(m: usize) -> Result<Vec<BinaryMatrix>> {
    if !m.is_multiple_of(2) || !(2..=MAX_ALTERNATING_DEGREE).contains(&m) {
        return Err(MubError::InvalidDimension(format!(
            "alternating spread degree {m} must be even and in 2..={MAX_ALTERNATING_DEGREE}"
        )));
    }
    spread_search(m, MatrixShape::Alternating, 1 << (m - 1)).ok_or(MubError::SearchFailed { m })
}

/// Exact fourth roots of unity, `i^e`.
const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Basis of dimension `2^m` from the quadratic form of `p`. The vector
/// indexed by `b` has coordinate `x` equal to `(−1)^{Q(x) + b·x}` (real,
/// `Q(x) = Σ_{i<j} P_ij x_i x_j`) or `i^{x̃ᵀPx̃ mod 4} (−1)^{b·x}` (complex).
/// Bit `i` of an index is coordinate `x_i`.
pub fn quadform_basis(p: &BinaryMatrix, kind: Kind) -> Result<Basis> {
    if kind == Kind::Real && (p.shape() != MatrixShape::Alternating || !p.has_zero_diagonal()) {
        return Err(MubError::ShapeMismatch("real bases need an alternating matrix".into()));
    }
    let m = p.side();
    let d = 1usize << m;
    let mut entries = CMatrix::zeros(d, d);
    for b in 0..d {
        for x in 0..d {
            let linear = (b & x).count_ones() as usize % 2;
            let mut diag = 0usize;
            let mut cross = 0usize;
            for i in 0..m {
                if x >> i & 1 == 0 {
                    continue;
                }
                diag += p.get(i, i) as usize;
                for j in i + 1..m {
                    if x >> j & 1 == 1 {
                        cross += p.get(i, j) as usize;
                    }
                }
            }
            let value = match kind {
                Kind::Real => {
                    let sign = (cross + linear) % 2;
                    Complex64::new(if sign == 0 { 1.0 } else { -1.0 }, 0.0)
                }
                Kind::Complex => I_POWERS[(diag + 2 * cross + 2 * linear) % 4],
            };
            entries.set(b, x, value);
        }
    }
    Basis::new(entries, kind).map_err(|reason| MubError::MalformedBasis { index: 0, reason })
}

pub fn wootters_fields(q: u64) -> Result<MubSet> {
    wootters_fields_limited(q, MAX_ODD_ORDER)
}

/// Complex MUBs over GF(q) for odd `q`: basis `a`, vector `b`, coordinate
/// `x` hold `ω_p^{tr(a·x² + b·x)}`.
pub fn wootters_fields_limited(q: u64, max_order: u64) -> Result<MubSet> {
    let (p, k) = prime_power(q)
        .filter(|&(p, _)| p != 2)
        .ok_or_else(|| MubError::InvalidDimension(format!("{q} is not an odd prime power")))?;
    if q > max_order {
        return Err(MubError::InvalidDimension(format!(
            "order {q} exceeds the configured limit {max_order}"
        )));
    }
    let field = FieldSpec::new(p, k)?;
    let elems: Vec<_> = field.elements().collect();
    let squares: Vec<_> = elems.iter().map(|x| x.mul(x)).collect::<std::result::Result<_, _>>()?;
    let n = elems.len();
    // Additivity of the trace splits the exponent into two tables.
    let mut quad = vec![0u64; n * n];
    let mut lin = vec![0u64; n * n];
    for (i, a) in elems.iter().enumerate() {
        for x in 0..n {
            quad[i * n + x] = a.mul(&squares[x])?.trace();
            lin[i * n + x] = a.mul(&elems[x])?.trace();
        }
    }
    let roots: Vec<Complex64> = (0..p)
        .map(|e| {
            if e == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                let theta = 2.0 * PI * e as f64 / p as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        })
        .collect();
    let mut bases = Vec::with_capacity(n);
    for a in 0..n {
        let mut entries = CMatrix::zeros(n, n);
        for b in 0..n {
            for x in 0..n {
                let e = (quad[a * n + x] + lin[b * n + x]) % p;
                entries.set(b, x, roots[e as usize]);
            }
        }
        bases.push(Basis::new(entries, Kind::Complex).map_err(|reason| MubError::MalformedBasis { index: a, reason })?);
    }
    let set = MubSet::new(Kind::Complex, Provenance::WoottersFields, bases)?;
    ensure_checked(set)
}

/// `d` complex unit-magnitude MUBs for prime-power `d`.
pub fn build_complex_mubs(d: usize) -> Result<MubSet> {
    let (p, k) =
        prime_power(d as u64).ok_or_else(|| MubError::InvalidDimension(format!("{d} is not a prime power")))?;
    if p != 2 {
        return wootters_fields(d as u64);
    }
    let spread = symmetric_spread_search(k)?;
    let bases = spread
        .iter()
        .map(|mat| quadform_basis(mat, Kind::Complex))
        .collect::<Result<Vec<_>>>()?;
    ensure_checked(MubSet::new(Kind::Complex, Provenance::SymmetricSpread, bases)?)
}

/// `d / 2` real ±1 MUBs for `d` a power of 4.
pub fn build_real_mubs(d: usize) -> Result<MubSet> {
    if !is_power_of_four(d) {
        return Err(MubError::InvalidDimension(format!(
            "{d} is not a power of 4 (at least 4)"
        )));
    }
    if d > MAX_REAL_DIM {
        return Err(MubError::InvalidDimension(format!(
            "real dimension {d} exceeds the limit {MAX_REAL_DIM}"
        )));
    }
    let m = d.trailing_zeros() as usize;
    let spread = alternating_spread_search(m)?;
    let bases = spread
        .iter()
        .map(|mat| quadform_basis(mat, Kind::Real))
        .collect::<Result<Vec<_>>>()?;
    ensure_checked(MubSet::new(Kind::Real, Provenance::AlternatingSpread, bases)?)
}

/// Number of bases the bundled builders produce in dimension `d`, or the
/// reason they would reject it. Nothing is constructed.
pub fn bundled_basis_count(d: usize, kind: Kind) -> Result<usize> {
    match kind {
        Kind::Complex => {
            let (p, k) =
                prime_power(d as u64).ok_or_else(|| MubError::InvalidDimension(format!("{d} is not a prime power")))?;
            if p == 2 && k > MAX_SYMMETRIC_DEGREE {
                return Err(MubError::InvalidDimension(format!(
                    "symmetric spread degree {k} outside 1..={MAX_SYMMETRIC_DEGREE}"
                )));
            }
            if p != 2 && d as u64 > MAX_ODD_ORDER {
                return Err(MubError::InvalidDimension(format!(
                    "order {d} exceeds the configured limit {MAX_ODD_ORDER}"
                )));
            }
            Ok(d)
        }
        Kind::Real => {
            if !is_power_of_four(d) {
                return Err(MubError::InvalidDimension(format!(
                    "{d} is not a power of 4 (at least 4)"
                )));
            }
            if d > MAX_REAL_DIM {
                return Err(MubError::InvalidDimension(format!(
                    "real dimension {d} exceeds the limit {MAX_REAL_DIM}"
                )));
            }
            Ok(d / 2)
        }
    }
}

pub fn is_power_of_four(d: usize) -> bool {
    d >= 4 && d.is_power_of_two() && d.trailing_zeros().is_multiple_of(2)
}

fn ensure_checked(set: MubSet) -> Result<MubSet> {
    let report = check_mub_set(&set, DEFAULT_MUB_TOL)?;
    if report.passed {
        Ok(set)
    } else {
        Err(MubError::CheckFailed(report.summary()))
    }
}

/// Verifies orthogonality within each basis, unit-magnitude entries and
/// unbiasedness across bases. Deviations are scaled by `d` (inner
/// products) or taken absolutely (entry magnitudes) before comparison
/// with `tol`.
pub fn check_mub_set(set: &MubSet, tol: f64) -> Result<VerificationReport> {
    let d = set.dim();
    for (index, b) in set.bases().iter().enumerate() {
        if b.dim() != d {
            return Err(MubError::DimensionMismatch {
                index,
                expected: d,
                found: b.dim(),
            });
        }
    }
    let df = d as f64;
    let sqrt_d = df.sqrt();
    let mut entry = PropertyTracker::new("unit_entries");
    let mut real = PropertyTracker::new("real_entries");
    let mut ortho = PropertyTracker::new("orthogonal_within_basis");
    let mut unbiased = PropertyTracker::new("unbiased_across_bases");

    for (bi, basis) in set.bases().iter().enumerate() {
        for v in 0..d {
            for (c, z) in basis.vector(v).iter().enumerate() {
                let loc = Location::Entry {
                    basis: bi,
                    vector: v,
                    coord: c,
                };
                entry.observe(loc.clone(), z.norm(), 1.0, (z.norm() - 1.0).abs(), tol);
                if set.kind() == Kind::Real {
                    real.observe(loc, z.im, 0.0, z.im.abs(), 0.0);
                }
            }
        }
        for u in 0..d {
            for v in u + 1..d {
                let mag = inner(basis.vector(u), basis.vector(v)).norm();
                let loc = Location::VectorPair {
                    basis_a: bi,
                    vector_a: u,
                    basis_b: bi,
                    vector_b: v,
                };
                ortho.observe(loc, mag, 0.0, mag / df, tol);
            }
        }
    }
    for (bi, first) in set.bases().iter().enumerate() {
        for (bj, second) in set.bases().iter().enumerate().skip(bi + 1) {
            for u in 0..d {
                for v in 0..d {
                    let mag = inner(first.vector(u), second.vector(v)).norm();
                    let loc = Location::VectorPair {
                        basis_a: bi,
                        vector_a: u,
                        basis_b: bj,
                        vector_b: v,
                    };
                    unbiased.observe(loc, mag, sqrt_d, (mag - sqrt_d).abs() / df, tol);
                }
            }
        }
    }

    let mut trackers = vec![entry];
    if set.kind() == Kind::Real {
        trackers.push(real);
    }
    trackers.push(ortho);
    trackers.push(unbiased);
    Ok(VerificationReport::from_checks(
        Subject::MubSet,
        set.kind(),
        tol,
        trackers.into_iter().map(PropertyTracker::finish).collect(),
    ))
}

/// Accumulates the worst deviation and the violations of one property.
pub(crate) struct PropertyTracker {
    check: PropertyCheck,
    violations: Vec<Violation>,
    violation_count: usize,
}

/// Violations kept per property; the total count is always reported.
pub(crate) const MAX_LISTED_VIOLATIONS: usize = 32;

impl PropertyTracker {
    pub(crate) fn new(name: &str) -> Self {
        Self {
            check: PropertyCheck {
                name: name.to_string(),
                passed: true,
                max_deviation: 0.0,
                worst: None,
                violation_count: 0,
            },
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    pub(crate) fn observe(&mut self, location: Location, measured: f64, expected: f64, deviation: f64, tol: f64) {
        // NaN deviations count as failures.
        self.record(location, measured, expected, deviation, deviation <= tol);
    }

    pub(crate) fn record(&mut self, location: Location, measured: f64, expected: f64, deviation: f64, ok: bool) {
        if deviation > self.check.max_deviation || (deviation.is_nan() && !self.check.max_deviation.is_nan()) {
            self.check.max_deviation = deviation;
            self.check.worst = Some(location.clone());
        }
        if !ok {
            self.check.passed = false;
            self.violation_count += 1;
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(Violation {
                    property: self.check.name.clone(),
                    location,
                    measured,
                    expected,
                    deviation,
                });
            }
        }
    }

    pub(crate) fn finish(mut self) -> (PropertyCheck, Vec<Violation>) {
        self.check.violation_count = self.violation_count;
        (self.check, self.violations)
    }
}
