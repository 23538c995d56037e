//! Canonical JSON envelope for MUB sets, line sets and reports, plus CSV
//! export of line sets.
//!
//! Every file is a single JSON object:
//!
//! ```text
//! { "format_version": 1, "payload_kind": "mubset" | "lineset" | "report",
//!   "kind": "complex" | "real", "dims": {...}, "data": [...], "meta": {...} }
//! ```
//!
//! Complex entries are `[re, im]` pairs; real entries are bare numbers.
//! Numbers use the shortest decimal that round-trips the binary64 value,
//! keys appear in a fixed order, and output is pretty-printed with LF line
//! endings, so saving the same object twice gives identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::lines::{LineError, LineMeta, LineSet};
use crate::matrix::CMatrix;
use crate::mub::{check_mub_set, Basis, MubError, MubSet, Provenance};
use crate::verify::VerificationReport;
use crate::{ComplexValue, Kind, DEFAULT_MUB_TOL};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0} (expected 1)")]
    Version(String),
    #[error("expected payload_kind `{expected}`, found `{found}`")]
    PayloadKind { expected: String, found: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("cannot serialize non-finite number at {0}")]
    NonFinite(String),
    #[error("MUB set failed verification on load: {0}")]
    CheckFailed(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Mub(#[from] MubError),
    #[error(transparent)]
    Line(#[from] LineError),
}

pub type Result<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadKind {
    MubSet,
    LineSet,
    Report,
}

impl PayloadKind {
    fn as_str(self) -> &'static str {
        match self {
            PayloadKind::MubSet => "mubset",
            PayloadKind::LineSet => "lineset",
            PayloadKind::Report => "report",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<D, M> {
    format_version: u64,
    payload_kind: PayloadKind,
    kind: Kind,
    dims: D,
    data: Value,
    meta: M,
}

#[derive(Serialize, Deserialize)]
struct MubDims {
    dim: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct MubMeta {
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct LineDims {
    ambient_dim: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct LineFileMeta {
    construction: Option<LineMeta>,
}

#[derive(Serialize, Deserialize)]
struct ReportDims {
    checks: usize,
    violations: usize,
}

#[derive(Serialize, Deserialize)]
struct ReportMeta {
    tolerance: f64,
}

/// Anything this module can load.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    MubSet(MubSet),
    LineSet(LineSet),
    Report(Box<VerificationReport>),
}

fn number(x: f64, at: impl FnOnce() -> String) -> Result<Value> {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| IoError::NonFinite(at()))
}

fn encode_row(row: &[ComplexValue], kind: Kind, at: &dyn Fn(usize) -> String) -> Result<Value> {
    row.iter()
        .enumerate()
        .map(|(j, z)| match kind {
            Kind::Real => number(z.re, || at(j)),
            Kind::Complex => Ok(Value::Array(vec![number(z.re, || at(j))?, number(z.im, || at(j))?])),
        })
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

fn encode_matrix(m: &CMatrix, kind: Kind, label: &str) -> Result<Value> {
    (0..m.rows())
        .map(|i| encode_row(m.row(i), kind, &|j| format!("{label} row {i} column {j}")))
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

fn decode_entry(v: &Value, kind: Kind, at: &str) -> Result<ComplexValue> {
    let num = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| IoError::Shape(format!("{at}: expected a number, found {v}")))
    };
    match kind {
        Kind::Real => Ok(Complex64::new(num(v)?, 0.0)),
        Kind::Complex => match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex64::new(num(re)?, num(im)?)),
            _ => Err(IoError::Shape(format!("{at}: expected an [re, im] pair, found {v}"))),
        },
    }
}

fn decode_matrix(v: &Value, rows: usize, cols: usize, kind: Kind, label: &str) -> Result<CMatrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| IoError::Shape(format!("{label}: expected an array of rows")))?;
    if arr.len() != rows {
        return Err(IoError::Shape(format!(
            "{label}: declared {rows} rows, found {}",
            arr.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| IoError::Shape(format!("{label} row {i}: expected an array")))?;
        if row.len() != cols {
            return Err(IoError::Shape(format!(
                "{label} row {i}: declared {cols} columns, found {}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            data.push(decode_entry(e, kind, &format!("{label} row {i} column {j}"))?);
        }
    }
    Ok(CMatrix::from_vec(rows, cols, data).expect("shape checked"))
}

fn render<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses the envelope header and rejects wrong versions before anything
/// else is looked at.
fn parse_checked(text: &str, expected: Option<PayloadKind>) -> Result<(Value, PayloadKind)> {
    let value: Value = serde_json::from_str(text)?;
    let version = value
        .get("format_version")
        .ok_or_else(|| IoError::Version("<missing>".into()))?;
    if version.as_u64() != Some(FORMAT_VERSION) {
        return Err(IoError::Version(version.to_string()));
    }
    let kind: PayloadKind = serde_json::from_value(value.get("payload_kind").cloned().unwrap_or(Value::Null))?;
    if let Some(expected) = expected {
        if kind != expected {
            return Err(IoError::PayloadKind {
                expected: expected.as_str().into(),
                found: kind.as_str().into(),
            });
        }
    }
    Ok((value, kind))
}

fn typed<D: DeserializeOwned, M: DeserializeOwned>(value: Value) -> Result<Envelope<D, M>> {
    Ok(serde_json::from_value(value)?)
}

pub fn mubset_to_json(set: &MubSet) -> Result<String> {
    let data = set
        .bases()
        .iter()
        .enumerate()
        .map(|(i, b)| encode_matrix(b.entries(), set.kind(), &format!("basis {i}")))
        .collect::<Result<Vec<_>>>()?;
    render(&Envelope {
        format_version: FORMAT_VERSION,
        payload_kind: PayloadKind::MubSet,
        kind: set.kind(),
        dims: MubDims {
            dim: set.dim(),
            count: set.len(),
        },
        data: Value::Array(data),
        meta: MubMeta {
            provenance: set.provenance(),
        },
    })
}

/// Parses a MUB set and re-runs [`check_mub_set`] at `tol`. Sets that fail
/// are refused.
pub fn mubset_from_json(text: &str, tol: f64) -> Result<MubSet> {
    let (value, _) = parse_checked(text, Some(PayloadKind::MubSet))?;
    let env: Envelope<MubDims, MubMeta> = typed(value)?;
    let arr = env
        .data
        .as_array()
        .ok_or_else(|| IoError::Shape("data: expected an array of bases".into()))?;
    if arr.len() != env.dims.count {
        return Err(IoError::Shape(format!(
            "declared {} bases, found {}",
            env.dims.count,
            arr.len()
        )));
    }
    let d = env.dims.dim;
    let bases = arr
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let m = decode_matrix(b, d, d, env.kind, &format!("basis {i}"))?;
            Basis::new(m, env.kind).map_err(|reason| IoError::Mub(MubError::MalformedBasis { index: i, reason }))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = MubSet::new(env.kind, env.meta.provenance, bases)?;
    let report = check_mub_set(&set, tol)?;
    if !report.passed {
        return Err(IoError::CheckFailed(report.summary()));
    }
    Ok(set)
}

pub fn lineset_to_json(ls: &LineSet) -> Result<String> {
    render(&Envelope {
        format_version: FORMAT_VERSION,
        payload_kind: PayloadKind::LineSet,
        kind: ls.kind(),
        dims: LineDims {
            ambient_dim: ls.ambient_dim(),
            count: ls.count(),
        },
        data: encode_matrix(ls.vectors(), ls.kind(), "vector")?,
        meta: LineFileMeta {
            construction: ls.meta().cloned(),
        },
    })
}

pub fn lineset_from_json(text: &str) -> Result<LineSet> {
    let (value, _) = parse_checked(text, Some(PayloadKind::LineSet))?;
    let env: Envelope<LineDims, LineFileMeta> = typed(value)?;
    let vectors = decode_matrix(&env.data, env.dims.count, env.dims.ambient_dim, env.kind, "vector")?;
    if let Some(meta) = &env.meta.construction {
        if meta.params.kind != env.kind {
            return Err(IoError::Shape(format!(
                "construction kind {} does not match file kind {}",
                meta.params.kind, env.kind
            )));
        }
    }
    Ok(LineSet::new(vectors, env.kind, env.meta.construction)?)
}

pub fn report_to_json(report: &VerificationReport) -> Result<String> {
    render(&Envelope {
        format_version: FORMAT_VERSION,
        payload_kind: PayloadKind::Report,
        kind: report.kind,
        dims: ReportDims {
            checks: report.checks.len(),
            violations: report.violations.len(),
        },
        data: serde_json::to_value(report)?,
        meta: ReportMeta {
            tolerance: report.tolerance,
        },
    })
}

pub fn report_from_json(text: &str) -> Result<VerificationReport> {
    let (value, _) = parse_checked(text, Some(PayloadKind::Report))?;
    let env: Envelope<ReportDims, ReportMeta> = typed(value)?;
    Ok(serde_json::from_value(env.data)?)
}

/// Parses whichever payload the envelope declares. MUB sets are checked
/// at the default tolerance.
pub fn payload_from_json(text: &str) -> Result<Payload> {
    let (_, kind) = parse_checked(text, None)?;
    Ok(match kind {
        PayloadKind::MubSet => Payload::MubSet(mubset_from_json(text, DEFAULT_MUB_TOL)?),
        PayloadKind::LineSet => Payload::LineSet(lineset_from_json(text)?),
        PayloadKind::Report => Payload::Report(Box::new(report_from_json(text)?)),
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn save_mubset(set: &MubSet, path: &Path) -> Result<()> {
    write(path, &mubset_to_json(set)?)
}

pub fn load_mubset(path: &Path, tol: f64) -> Result<MubSet> {
    mubset_from_json(&read(path)?, tol)
}

pub fn save_lineset(ls: &LineSet, path: &Path) -> Result<()> {
    write(path, &lineset_to_json(ls)?)
}

pub fn load_lineset(path: &Path) -> Result<LineSet> {
    lineset_from_json(&read(path)?)
}

pub fn save_report(report: &VerificationReport, path: &Path) -> Result<()> {
    write(path, &report_to_json(report)?)
}

pub fn load(path: &Path) -> Result<Payload> {
    payload_from_json(&read(path)?)
}

/// CSV text: a header row `ambient_dim=D,count=m,kind=K`, then one row per
/// vector. Complex rows interleave `re,im`.
pub fn lineset_to_csv(ls: &LineSet) -> Result<String> {
    let mut s = format!(
        "ambient_dim={},count={},kind={}\n",
        ls.ambient_dim(),
        ls.count(),
        ls.kind()
    );
    for i in 0..ls.count() {
        let mut fields = Vec::with_capacity(ls.ambient_dim() * 2);
        for (j, z) in ls.vector(i).iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(IoError::NonFinite(format!("vector row {i} column {j}")));
            }
            fields.push(format!("{:?}", z.re));
            if ls.kind() == Kind::Complex {
                fields.push(format!("{:?}", z.im));
            }
        }
        let _ = writeln!(s, "{}", fields.join(","));
    }
    Ok(s)
}

/// Reads CSV produced by [`lineset_to_csv`]. The result carries no
/// construction metadata.
pub fn lineset_from_csv(text: &str) -> Result<LineSet> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| IoError::Csv("empty file".into()))?;
    let mut ambient = None;
    let mut count = None;
    let mut kind = None;
    for field in header.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| IoError::Csv(format!("header field `{field}` is not key=value")))?;
        let bad = |_| IoError::Csv(format!("bad header value `{value}` for `{key}`"));
        match key.trim() {
            "ambient_dim" => ambient = Some(value.trim().parse::<usize>().map_err(bad)?),
            "count" => count = Some(value.trim().parse::<usize>().map_err(bad)?),
            "kind" => kind = Some(value.trim().parse::<Kind>().map_err(IoError::Csv)?),
            other => return Err(IoError::Csv(format!("unknown header key `{other}`"))),
        }
    }
    let (Some(ambient), Some(count), Some(kind)) = (ambient, count, kind) else {
        return Err(IoError::Csv("header must give ambient_dim, count and kind".into()));
    };
    let width = match kind {
        Kind::Real => ambient,
        Kind::Complex => 2 * ambient,
    };
    let mut data = Vec::with_capacity(count * ambient);
    let mut rows = 0;
    for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let nums = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| IoError::Csv(format!("row {i}: `{f}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if nums.len() != width {
            return Err(IoError::Csv(format!(
                "row {i}: expected {width} fields, found {}",
                nums.len()
            )));
        }
        match kind {
            Kind::Real => data.extend(nums.iter().map(|&x| Complex64::new(x, 0.0))),
            Kind::Complex => data.extend(nums.chunks(2).map(|p| Complex64::new(p[0], p[1]))),
        }
        rows += 1;
    }
    if rows != count {
        return Err(IoError::Shape(format!("declared {count} rows, found {rows}")));
    }
    let vectors = CMatrix::from_vec(count, ambient, data).expect("shape checked");
    Ok(LineSet::new(vectors, kind, None)?)
}

pub fn export_csv(ls: &LineSet, path: &Path) -> Result<()> {
    write(path, &lineset_to_csv(ls)?)
}

pub fn import_csv(path: &Path) -> Result<LineSet> {
    lineset_from_csv(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::construct;
    use crate::mub::{build_complex_mubs, build_real_mubs};
    use crate::verify::{check_equiangular, gram};

    #[test]
    fn mubset_round_trip_real_d4() {
        let set = build_real_mubs(4).unwrap();
        let text = mubset_to_json(&set).unwrap();
        assert_eq!(mubset_from_json(&text, 1e-9).unwrap(), set);
        assert_eq!(text, mubset_to_json(&set).unwrap());
        assert!(text.contains("\"payload_kind\": \"mubset\""));
        assert!(text.contains("\"provenance\": \"alternating-spread\""));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn mubset_round_trip_complex_bit_exact() {
        let set = build_complex_mubs(7).unwrap();
        let back = mubset_from_json(&mubset_to_json(&set).unwrap(), 1e-9).unwrap();
        for (a, b) in set.bases().iter().zip(back.bases()) {
            for (x, y) in a.entries().as_slice().iter().zip(b.entries().as_slice()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn lineset_round_trip_keeps_meta() {
        let ls = construct(&build_complex_mubs(3).unwrap(), 2, None, Some(vec![0.5, 2.0])).unwrap();
        let text = lineset_to_json(&ls).unwrap();
        let back = lineset_from_json(&text).unwrap();
        assert_eq!(back, ls);
        assert_eq!(lineset_to_json(&back).unwrap(), text);
    }

    #[test]
    fn version_mismatch_rejected() {
        let text = mubset_to_json(&build_real_mubs(4).unwrap()).unwrap();
        let bumped = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
        assert!(matches!(mubset_from_json(&bumped, 1e-9), Err(IoError::Version(_))));
        let missing = text.replacen("\"format_version\": 1,", "", 1);
        assert!(matches!(mubset_from_json(&missing, 1e-9), Err(IoError::Version(_))));
    }

    #[test]
    fn payload_kind_mismatch_rejected() {
        let text = mubset_to_json(&build_real_mubs(4).unwrap()).unwrap();
        assert!(matches!(lineset_from_json(&text), Err(IoError::PayloadKind { .. })));
        assert!(matches!(payload_from_json(&text).unwrap(), Payload::MubSet(_)));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let ls = construct(&build_real_mubs(4).unwrap(), 1, None, None).unwrap();
        let text = lineset_to_json(&ls).unwrap();
        let wrong = text.replacen("\"count\": 8", "\"count\": 9", 1);
        assert!(matches!(lineset_from_json(&wrong), Err(IoError::Shape(_))));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["data"][3].as_array_mut().unwrap().pop();
        assert!(matches!(lineset_from_json(&v.to_string()), Err(IoError::Shape(_))));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["data"][0][0] = serde_json::json!([1.0, 0.0]);
        assert!(matches!(lineset_from_json(&v.to_string()), Err(IoError::Shape(_))));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(lineset_from_json("{not json"), Err(IoError::Json(_))));
    }

    #[test]
    fn edited_mubset_fails_check_on_load() {
        let set = build_real_mubs(4).unwrap();
        let mut v: Value = serde_json::from_str(&mubset_to_json(&set).unwrap()).unwrap();
        let entry = &mut v["data"][1][2][0];
        *entry = serde_json::json!(-entry.as_f64().unwrap());
        match mubset_from_json(&v.to_string(), 1e-9) {
            Err(IoError::CheckFailed(msg)) => assert!(msg.contains("basis 1 vector 2"), "{msg}"),
            other => panic!("expected a check failure, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_values_refused() {
        let mut m = CMatrix::zeros(2, 2);
        m.set(0, 0, Complex64::new(f64::NAN, 0.0));
        let ls = LineSet::new(m, Kind::Real, None).unwrap();
        assert!(matches!(lineset_to_json(&ls), Err(IoError::NonFinite(_))));
        assert!(matches!(lineset_to_csv(&ls), Err(IoError::NonFinite(_))));
    }

    #[test]
    fn csv_shapes() {
        let real = construct(&build_real_mubs(4).unwrap(), 1, None, None).unwrap();
        let csv = lineset_to_csv(&real).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "ambient_dim=8,count=8,kind=real");
        assert_eq!(rows.len(), 9);
        assert!(rows[1..].iter().all(|r| r.split(',').count() == 8));

        let complex = construct(&build_complex_mubs(5).unwrap(), 1, None, None).unwrap();
        let csv = lineset_to_csv(&complex).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 26);
        assert!(rows[1..].iter().all(|r| r.split(',').count() == 20));
    }

    #[test]
    fn csv_reimport_reproduces_gram_exactly() {
        let ls = construct(&build_complex_mubs(5).unwrap(), 1, None, None).unwrap();
        let back = lineset_from_csv(&lineset_to_csv(&ls).unwrap()).unwrap();
        let (g1, g2) = (gram(&ls), gram(&back));
        for (x, y) in g1.as_slice().iter().zip(g2.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert!(back.meta().is_none());
        assert!(check_equiangular(&back, 1e-8).passed);
    }

    #[test]
    fn csv_errors() {
        assert!(lineset_from_csv("").is_err());
        assert!(lineset_from_csv("ambient_dim=2,count=1,kind=real\n1.0\n").is_err());
        assert!(lineset_from_csv("ambient_dim=2,count=2,kind=real\n1.0,2.0\n").is_err());
        assert!(lineset_from_csv("ambient_dim=2,count=1\n1.0,2.0\n").is_err());
        assert!(lineset_from_csv("ambient_dim=1,count=1,kind=real\nabc\n").is_err());
        assert!(lineset_from_csv("ambient_dim=1,count=1,kind=real\n1.5\n").is_ok());
    }

    #[test]
    fn report_round_trip() {
        let ls = construct(&build_complex_mubs(3).unwrap(), 1, None, None).unwrap();
        let report = check_equiangular(&ls, 1e-8);
        let text = report_to_json(&report).unwrap();
        assert_eq!(report_from_json(&text).unwrap(), report);
        assert_eq!(text, report_to_json(&report).unwrap());
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let set = build_real_mubs(4).unwrap();
        let path = dir.path().join("m.json");
        save_mubset(&set, &path).unwrap();
        assert_eq!(load_mubset(&path, 1e-9).unwrap(), set);
        assert!(matches!(load(&path).unwrap(), Payload::MubSet(_)));
        let ls = construct(&set, 1, None, None).unwrap();
        let lpath = dir.path().join("l.json");
        save_lineset(&ls, &lpath).unwrap();
        assert_eq!(load_lineset(&lpath).unwrap(), ls);
        let cpath = dir.path().join("l.csv");
        export_csv(&ls, &cpath).unwrap();
        assert_eq!(import_csv(&cpath).unwrap().vectors(), ls.vectors());
        assert!(matches!(
            load(&dir.path().join("missing.json")),
            Err(IoError::Io { .. })
        ));
    }
}
