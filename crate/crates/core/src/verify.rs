//! Measurement-based verification of line sets.
//!
//! Nothing here reads construction scalars: magnitudes come from the Gram
//! matrix of the stored vectors and are only then compared with values the
//! caller supplies.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lines::{LineSet, MagnitudePair};
use crate::matrix::{inner, norm_sq, CMatrix};
use crate::mub::PropertyTracker;
use crate::Kind;

/// Default relative gap separating magnitude clusters.
pub const DEFAULT_CLUSTER_GAP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("line set carries no pair-origin metadata")]
    MissingMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    MubSet,
    LineSet,
}

/// Where a measured deviation occurred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Location {
    Entry {
        basis: usize,
        vector: usize,
        coord: usize,
    },
    VectorPair {
        basis_a: usize,
        vector_a: usize,
        basis_b: usize,
        vector_b: usize,
    },
    Line {
        index: usize,
    },
    LinePair {
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    /// Largest deviation in the units compared against the tolerance.
    pub max_deviation: f64,
    pub worst: Option<Location>,
    pub violation_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub property: String,
    pub location: Location,
    pub measured: f64,
    pub expected: f64,
    pub deviation: f64,
}

/// A cluster of off-diagonal inner-product magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeClass {
    pub value: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: Kind,
    pub count: usize,
    pub ambient_dim: usize,
    pub bound: u64,
    pub passed: bool,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub kind: Kind,
    pub passed: bool,
    pub tolerance: f64,
    pub checks: Vec<PropertyCheck>,
    pub classes: Vec<MagnitudeClass>,
    pub norm_sq: Option<f64>,
    pub cosine: Option<f64>,
    pub bound: Option<BoundReport>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub(crate) fn from_checks(
        subject: Subject,
        kind: Kind,
        tolerance: f64,
        checks: Vec<(PropertyCheck, Vec<Violation>)>,
    ) -> Self {
        let mut all_checks = Vec::with_capacity(checks.len());
        let mut violations = Vec::new();
        for (check, v) in checks {
            all_checks.push(check);
            violations.extend(v);
        }
        Self {
            subject,
            kind,
            passed: all_checks.iter().all(|c| c.passed),
            tolerance,
            checks: all_checks,
            classes: Vec::new(),
            norm_sq: None,
            cosine: None,
            bound: None,
            violations,
        }
    }

    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line naming the failed properties and the first violation.
    pub fn summary(&self) -> String {
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        if failed.is_empty() {
            return "all checks passed".into();
        }
        let mut s = format!("failed: {}", failed.join(", "));
        if let Some(v) = self.violations.first() {
            let _ = write!(
                s,
                "; first violation at {} (measured {}, expected {})",
                describe(&v.location),
                v.measured,
                v.expected
            );
        }
        s
    }

    /// `key: value` lines for terminal output.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let subject = match self.subject {
            Subject::MubSet => "mubset",
            Subject::LineSet => "lineset",
        };
        let _ = writeln!(s, "subject: {subject}");
        let _ = writeln!(s, "kind: {}", self.kind);
        let _ = writeln!(s, "tolerance: {:e}", self.tolerance);
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check.{}: {} (max deviation {:e}{})",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.max_deviation,
                c.worst
                    .as_ref()
                    .map(|w| format!(" at {}", describe(w)))
                    .unwrap_or_default()
            );
        }
        if let Some(n) = self.norm_sq {
            let _ = writeln!(s, "norm_sq: {n}");
        }
        if !self.classes.is_empty() {
            let _ = writeln!(s, "classes: {}", self.classes.len());
            for (i, c) in self.classes.iter().enumerate() {
                let _ = writeln!(s, "class.{i}: {} x{} [{}, {}]", c.value, c.count, c.min, c.max);
            }
        }
        if let Some(c) = self.cosine {
            let _ = writeln!(s, "cosine: {c}");
            let _ = writeln!(s, "angle_deg: {}", c.acos().to_degrees());
        }
        if let Some(b) = &self.bound {
            let _ = writeln!(
                s,
                "bound: {} ({} <= {} in dimension {})",
                if b.passed { "pass" } else { "FAIL" },
                b.count,
                b.bound,
                b.ambient_dim
            );
            if let Some(w) = &b.warning {
                let _ = writeln!(s, "bound_warning: {w}");
            }
        }
        for v in &self.violations {
            let _ = writeln!(
                s,
                "violation: {} at {} measured {} expected {}",
                v.property,
                describe(&v.location),
                v.measured,
                v.expected
            );
        }
        let _ = writeln!(s, "result: {}", if self.passed { "pass" } else { "FAIL" });
        s
    }
}

fn describe(loc: &Location) -> String {
    match loc {
        Location::Entry { basis, vector, coord } => format!("basis {basis} vector {vector} coord {coord}"),
        Location::VectorPair {
            basis_a,
            vector_a,
            basis_b,
            vector_b,
        } => format!("basis {basis_a} vector {vector_a} / basis {basis_b} vector {vector_b}"),
        Location::Line { index } => format!("line {index}"),
        Location::LinePair { first, second } => format!("lines {first},{second}"),
    }
}

/// Hermitian Gram matrix `G[j][k] = ⟨x_j, x_k⟩`. The upper triangle is
/// computed and mirrored, so `G[k][j] = conj(G[j][k])` holds exactly.
pub fn gram(ls: &LineSet) -> CMatrix {
    let m = ls.count();
    let mut g = CMatrix::zeros(m, m);
    for j in 0..m {
        g.set(j, j, num_complex::Complex64::new(norm_sq(ls.vector(j)), 0.0));
        for k in j + 1..m {
            let z = inner(ls.vector(j), ls.vector(k));
            g.set(j, k, z);
            g.set(k, j, z.conj());
        }
    }
    g
}

/// Groups sorted values, starting a new class where the gap to the
/// previous value exceeds `gap * scale`.
pub fn cluster_magnitudes(values: &[f64], scale: f64, gap: f64) -> Vec<MagnitudeClass> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut classes: Vec<MagnitudeClass> = Vec::new();
    let mut start = 0;
    for i in 0..=sorted.len() {
        let split = i == sorted.len() || (i > start && sorted[i] - sorted[i - 1] > gap * scale);
        if split && i > start {
            let members = &sorted[start..i];
            classes.push(MagnitudeClass {
                value: members.iter().sum::<f64>() / members.len() as f64,
                min: members[0],
                max: members[members.len() - 1],
                count: members.len(),
            });
            start = i;
        }
    }
    classes
}

/// Options for [`check_equiangular_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquiangularOptions {
    pub tol: f64,
    /// Relative gap (in units of the mean squared norm) separating classes.
    /// The effective gap is never below `100 · tol`.
    pub cluster_gap: f64,
}

impl EquiangularOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            cluster_gap: DEFAULT_CLUSTER_GAP,
        }
    }
}

struct Measured {
    norms: Vec<f64>,
    mean_norm: f64,
    /// `(j, k, |G[j][k]|)` for `j < k`, row-major.
    pairs: Vec<(usize, usize, f64)>,
}

fn measure(ls: &LineSet) -> Measured {
    let g = gram(ls);
    let m = ls.count();
    let norms: Vec<f64> = (0..m).map(|j| g.get(j, j).re).collect();
    let mean_norm = norms.iter().sum::<f64>() / m.max(1) as f64;
    let mut pairs = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for j in 0..m {
        for k in j + 1..m {
            pairs.push((j, k, g.get(j, k).norm()));
        }
    }
    Measured {
        norms,
        mean_norm,
        pairs,
    }
}

fn norm_check(meas: &Measured, tol: f64) -> (PropertyCheck, Vec<Violation>) {
    let mut tracker = PropertyTracker::new("equal_norms");
    for (i, &n) in meas.norms.iter().enumerate() {
        let dev = (n - meas.mean_norm).abs() / meas.mean_norm;
        tracker.observe(Location::Line { index: i }, n, meas.mean_norm, dev, tol);
    }
    tracker.finish()
}

pub fn check_equiangular(ls: &LineSet, tol: f64) -> VerificationReport {
    check_equiangular_with(ls, EquiangularOptions::new(tol))
}

/// Equal norms, a single off-diagonal magnitude class whose spread is
/// within `tol` of the squared norm, and that class strictly below the
/// squared norm (no repeated lines).
pub fn check_equiangular_with(ls: &LineSet, opts: EquiangularOptions) -> VerificationReport {
    let tol = opts.tol;
    let meas = measure(ls);
    let scale = meas.mean_norm;
    let gap = opts.cluster_gap.max(100.0 * tol);
    let mags: Vec<f64> = meas.pairs.iter().map(|p| p.2).collect();
    let classes = cluster_magnitudes(&mags, scale, gap);

    let mut single = PropertyTracker::new("single_class");
    let mut distinct = PropertyTracker::new("distinct_lines");
    let count_ok = ls.count() >= 2 && classes.len() == 1;
    if count_ok {
        let target = classes[0].value;
        for &(j, k, mag) in &meas.pairs {
            let loc = Location::LinePair { first: j, second: k };
            single.observe(loc.clone(), mag, target, (mag - target).abs() / scale, tol);
            // A magnitude equal to the squared norm means parallel vectors.
            distinct.record(loc, mag, scale, mag / scale, mag / scale < 1.0 - tol);
        }
    } else {
        // More than one class (or no pairs at all): flag the worst pair
        // against the largest class.
        let biggest = classes.iter().max_by_key(|c| c.count).map(|c| c.value).unwrap_or(0.0);
        for &(j, k, mag) in &meas.pairs {
            let loc = Location::LinePair { first: j, second: k };
            single.observe(loc.clone(), mag, biggest, (mag - biggest).abs() / scale, tol);
            distinct.record(loc, mag, scale, mag / scale, mag / scale < 1.0 - tol);
        }
        if meas.pairs.is_empty() {
            single.observe(Location::Line { index: 0 }, 0.0, 0.0, f64::INFINITY, tol);
        }
    }
    let (mut single_check, single_violations) = single.finish();
    single_check.passed &= count_ok;

    let mut report = VerificationReport::from_checks(
        Subject::LineSet,
        ls.kind(),
        tol,
        vec![
            norm_check(&meas, tol),
            (single_check, single_violations),
            distinct.finish(),
        ],
    );
    report.cosine = count_ok.then(|| classes[0].value / scale);
    report.classes = classes;
    report.norm_sq = Some(scale);
    let bound = check_bounds(ls.count(), ls.ambient_dim(), ls.kind());
    report.passed &= bound.passed;
    report.bound = Some(bound);
    report
}

/// Same-basis pairs against `expected.intra`, cross-basis pairs against
/// `expected.cross`. Deviations are relative to the mean squared norm.
pub fn check_two_valued(ls: &LineSet, expected: MagnitudePair, tol: f64) -> Result<VerificationReport, VerifyError> {
    let origins = ls
        .meta()
        .and_then(|m| m.origins.as_ref())
        .ok_or(VerifyError::MissingMetadata)?;
    let meas = measure(ls);
    let scale = meas.mean_norm;
    let mut intra = PropertyTracker::new("same_basis_magnitude");
    let mut cross = PropertyTracker::new("cross_basis_magnitude");
    let mut intra_mags = Vec::new();
    let mut cross_mags = Vec::new();
    for &(j, k, mag) in &meas.pairs {
        let loc = Location::LinePair { first: j, second: k };
        if origins[j] == origins[k] {
            intra.observe(loc, mag, expected.intra, (mag - expected.intra).abs() / scale, tol);
            intra_mags.push(mag);
        } else {
            cross.observe(loc, mag, expected.cross, (mag - expected.cross).abs() / scale, tol);
            cross_mags.push(mag);
        }
    }
    let mut report = VerificationReport::from_checks(
        Subject::LineSet,
        ls.kind(),
        tol,
        vec![norm_check(&meas, tol), intra.finish(), cross.finish()],
    );
    let gap = DEFAULT_CLUSTER_GAP.max(100.0 * tol);
    let mags: Vec<f64> = meas.pairs.iter().map(|p| p.2).collect();
    report.classes = cluster_magnitudes(&mags, scale, gap);
    report.norm_sq = Some(scale);
    Ok(report)
}

/// `m ≤ D²` (complex) or `m ≤ D(D + 1)/2` (real). A warning is attached
/// when `m` is below a quarter of the bound.
pub fn check_bounds(count: usize, ambient_dim: usize, kind: Kind) -> BoundReport {
    let dim = ambient_dim as u64;
    let bound = match kind {
        Kind::Complex => dim.saturating_mul(dim),
        Kind::Real => dim.saturating_mul(dim + 1) / 2,
    };
    let m = count as u64;
    let warning =
        (m.saturating_mul(4) < bound).then(|| format!("{count} lines is below a quarter of the bound {bound}"));
    BoundReport {
        kind,
        count,
        ambient_dim,
        bound,
        passed: m <= bound,
        warning,
    }
}
