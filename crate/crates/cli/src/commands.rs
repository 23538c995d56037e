use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use eqlf_core::io::{self, IoError, Payload};
use eqlf_core::lines::{
    self, construct, extend_r8, magnitude_pair, predict_angle, predict_norm_sq, LineError, LineSet,
};
use eqlf_core::mub::{build_complex_mubs, build_real_mubs, bundled_basis_count, check_mub_set, MubError, MubSet};
use eqlf_core::verify::{check_bounds, check_equiangular, check_two_valued, VerificationReport};
use eqlf_core::{Complex64, Kind, DEFAULT_LINE_TOL, DEFAULT_MUB_TOL};

use crate::scalar;
use crate::Failure;

/// Stdout text on success; on failure, whatever stdout text was produced
/// before stopping, plus the reason.
pub type Outcome = Result<String, (String, Failure)>;

fn invalid(msg: impl Into<String>) -> (String, Failure) {
    (String::new(), Failure::Invalid(msg.into()))
}

fn from_mub(e: MubError) -> (String, Failure) {
    match e {
        MubError::CheckFailed(_) | MubError::SearchFailed { .. } => {
            (String::new(), Failure::Verification(e.to_string()))
        }
        _ => invalid(e.to_string()),
    }
}

fn from_line(e: LineError) -> (String, Failure) {
    invalid(e.to_string())
}

fn from_io(e: IoError) -> (String, Failure) {
    match e {
        IoError::CheckFailed(_) | IoError::Mub(MubError::CheckFailed(_)) => {
            (String::new(), Failure::Verification(e.to_string()))
        }
        _ => invalid(e.to_string()),
    }
}

fn tolerance(tol: Option<f64>, default: f64) -> Result<f64, (String, Failure)> {
    match tol {
        None => Ok(default),
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(invalid(format!("tolerance must be finite and positive, got {t}"))),
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn deviations(out: &mut String, report: &VerificationReport) {
    for c in &report.checks {
        let _ = writeln!(out, "deviation.{}: {:e}", c.name, c.max_deviation);
    }
}

fn scalar_list(values: &[Complex64]) -> String {
    values.iter().map(|z| format_scalar(*z)).collect::<Vec<_>>().join(",")
}

fn format_scalar(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn build_mubs(kind: Kind, dim: usize) -> Result<MubSet, (String, Failure)> {
    match kind {
        Kind::Complex => build_complex_mubs(dim),
        Kind::Real => build_real_mubs(dim),
    }
    .map_err(from_mub)
}

pub fn mub_gen(kind: Kind, dim: usize, out: Option<&Path>, tol: Option<f64>, precision: bool) -> Outcome {
    let tol = tolerance(tol, DEFAULT_MUB_TOL)?;
    bundled_basis_count(dim, kind).map_err(from_mub)?;
    let set = build_mubs(kind, dim)?;
    let report = check_mub_set(&set, tol).map_err(from_mub)?;
    let mut text = String::new();
    let _ = writeln!(text, "kind: {kind}");
    let _ = writeln!(text, "dim: {dim}");
    let _ = writeln!(text, "bases: {}", set.len());
    let _ = writeln!(text, "provenance: {}", set.provenance().as_str());
    if precision {
        deviations(&mut text, &report);
    }
    if !report.passed {
        let _ = writeln!(text, "result: FAIL");
        return Err((text, Failure::Verification(report.summary())));
    }
    match out {
        Some(path) => {
            io::save_mubset(&set, path).map_err(from_io)?;
            let _ = writeln!(text, "out: {}", path.display());
            let _ = writeln!(text, "result: pass");
            Ok(text)
        }
        // JSON alone on stdout so it can be redirected into a file.
        None => io::mubset_to_json(&set).map(|json| json + "\n").map_err(from_io),
    }
}

pub struct LinesGen {
    pub dim: Option<usize>,
    pub t: usize,
    pub kind: Option<Kind>,
    pub a: Option<Vec<String>>,
    pub c: Option<Vec<String>>,
    pub mubs: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub precision: bool,
}

pub fn lines_gen(args: LinesGen) -> Outcome {
    let tol = tolerance(args.tol, DEFAULT_LINE_TOL)?;
    if args.t == 0 {
        return Err(invalid("--t must be at least 1"));
    }
    let a = args
        .a
        .as_ref()
        .map(|list| list.iter().map(|s| scalar::parse(s)).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(|e| invalid(format!("--a: {e}")))?;
    let c = args
        .c
        .as_ref()
        .map(|list| {
            list.iter()
                .map(|s| scalar::parse_real(s))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
        .map_err(|e| invalid(format!("--c: {e}")))?;
    if let Some(a) = &a {
        if a.len() != args.t {
            return Err(invalid(format!("--a has {} values but --t is {}", a.len(), args.t)));
        }
    }
    if let Some(c) = &c {
        if c.len() != args.t {
            return Err(invalid(format!("--c has {} values but --t is {}", c.len(), args.t)));
        }
    }

    let mubs = match &args.mubs {
        Some(path) => {
            let set = io::load_mubset(path, DEFAULT_MUB_TOL).map_err(from_io)?;
            if args.dim.is_some_and(|d| d != set.dim()) {
                return Err(invalid(format!(
                    "--dim {} does not match the MUB file dimension {}",
                    args.dim.unwrap(),
                    set.dim()
                )));
            }
            if args.kind.is_some_and(|k| k != set.kind()) {
                return Err(invalid(format!(
                    "--kind {} does not match the MUB file kind {}",
                    args.kind.unwrap(),
                    set.kind()
                )));
            }
            set
        }
        None => {
            let dim = args.dim.ok_or_else(|| invalid("--dim is required without --mubs"))?;
            let kind = args.kind.unwrap_or(Kind::Complex);
            bundled_basis_count(dim, kind).map_err(from_mub)?;
            build_mubs(kind, dim)?
        }
    };
    let d = mubs.dim();
    let ls = construct(&mubs, args.t, a, c).map_err(from_line)?;
    let meta = ls.meta().expect("constructed sets carry metadata");
    let params = &meta.params;
    let c_eff = params.c.as_deref();
    let predicted = magnitude_pair(d, &params.a, c_eff);
    let norm_sq = predict_norm_sq(d, &meta.scalar_set, c_eff);
    let equalized = (predicted.intra - predicted.cross).abs() <= tol * norm_sq;

    let mut text = String::new();
    let _ = writeln!(text, "kind: {}", ls.kind());
    let _ = writeln!(text, "d: {d}");
    let _ = writeln!(text, "t: {}", params.t);
    let _ = writeln!(text, "r: {}", params.r);
    let _ = writeln!(text, "mubs: {}", mubs.provenance().as_str());
    let _ = writeln!(text, "a: {}", scalar_list(&params.a));
    if let Some(c) = c_eff {
        let _ = writeln!(
            text,
            "c: {}",
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        );
    }
    let _ = writeln!(text, "a_last: {}", format_scalar(meta.scalar_set.last));
    let _ = writeln!(text, "lines: {}", ls.count());
    let _ = writeln!(text, "ambient_dim: {}", ls.ambient_dim());
    let _ = writeln!(text, "predicted_m_intra: {}", predicted.intra);
    let _ = writeln!(text, "predicted_m_cross: {}", predicted.cross);
    let _ = writeln!(text, "predicted_norm_sq: {norm_sq}");
    let _ = writeln!(text, "predicted_equiangular: {}", if equalized { "yes" } else { "no" });

    let two = check_two_valued(&ls, predicted, tol).map_err(|e| invalid(e.to_string()))?;
    let equi = check_equiangular(&ls, tol);
    if let Some(m) = equi.norm_sq {
        let _ = writeln!(text, "norm_sq: {m}");
    }
    match equi.cosine {
        Some(cos) => {
            let _ = writeln!(text, "cosine: {cos}");
            let _ = writeln!(text, "angle_deg: {}", cos.acos().to_degrees());
        }
        None => {
            let _ = writeln!(text, "cosine: none");
        }
    }
    let _ = writeln!(text, "equiangular: {}", if equi.passed { "yes" } else { "no" });
    let bound = check_bounds(ls.count(), ls.ambient_dim(), ls.kind());
    let _ = writeln!(text, "bound: {}", bound.bound);
    let _ = writeln!(text, "bound_status: {}", if bound.passed { "ok" } else { "exceeded" });
    if let Some(w) = &bound.warning {
        let _ = writeln!(text, "bound_warning: {w}");
    }
    if args.precision {
        deviations(&mut text, &two);
        if equalized {
            deviations(&mut text, &equi);
        }
    }

    let failure = if !two.passed {
        Some(two.summary())
    } else if equalized && !equi.passed {
        Some(equi.summary())
    } else if equalized && equi.cosine.is_some_and(|cos| (cos - predict_angle(d)).abs() > tol) && c_eff.is_none() {
        Some(format!(
            "cosine {} differs from 1/(1+sqrt(d)) = {}",
            equi.cosine.unwrap(),
            predict_angle(d)
        ))
    } else {
        None
    };
    if let Some(msg) = failure {
        let _ = writeln!(text, "result: FAIL");
        return Err((text, Failure::Verification(msg)));
    }
    if let Some(path) = &args.out {
        save_lines(&ls, path)?;
        let _ = writeln!(text, "out: {}", path.display());
    }
    let _ = writeln!(text, "result: pass");
    Ok(text)
}

fn save_lines(ls: &LineSet, path: &Path) -> Result<(), (String, Failure)> {
    if is_csv(path) {
        io::export_csv(ls, path)
    } else {
        io::save_lineset(ls, path)
    }
    .map_err(from_io)
}

pub fn lines_check(path: &Path, tol: Option<f64>, precision: bool) -> Outcome {
    let report = if is_csv(path) {
        let ls = io::import_csv(path).map_err(from_io)?;
        check_equiangular(&ls, tolerance(tol, DEFAULT_LINE_TOL)?)
    } else {
        match io::load(path).map_err(from_io)? {
            Payload::LineSet(ls) => check_equiangular(&ls, tolerance(tol, DEFAULT_LINE_TOL)?),
            Payload::MubSet(set) => check_mub_set(&set, tolerance(tol, DEFAULT_MUB_TOL)?).map_err(from_mub)?,
            Payload::Report(_) => {
                return Err(invalid(format!(
                    "{} holds a report, not a line or MUB set",
                    path.display()
                )))
            }
        }
    };
    finish(report, precision)
}

fn finish(report: VerificationReport, precision: bool) -> Outcome {
    let mut text = report.to_text();
    if precision {
        deviations(&mut text, &report);
    }
    if report.passed {
        Ok(text)
    } else {
        Err((text, Failure::Verification(report.summary())))
    }
}

pub fn extend(path: &Path, out: &Path, tol: Option<f64>, precision: bool) -> Outcome {
    let tol = tolerance(tol, DEFAULT_LINE_TOL)?;
    let ls = io::load_lineset(path).map_err(from_io)?;
    let ext = extend_r8(&ls).map_err(from_line)?;
    let report = check_equiangular(&ext, tol);
    if !report.passed {
        return finish(report, precision);
    }
    save_lines(&ext, out)?;
    Ok(format!("out: {}\n{}", out.display(), finish(report, precision)?))
}

pub fn info(dim: usize, t: usize, kind: Kind) -> Outcome {
    if t == 0 {
        return Err(invalid("--t must be at least 1"));
    }
    let r = bundled_basis_count(dim, kind).map_err(from_mub)?;
    let m = r * dim;
    let ambient = (t + 1) * dim;
    let cos = predict_angle(dim);
    let bound = check_bounds(m, ambient, kind);
    let mut text = String::new();
    let _ = writeln!(text, "kind: {kind}");
    let _ = writeln!(text, "d: {dim}");
    let _ = writeln!(text, "t: {t}");
    let _ = writeln!(text, "r: {r}");
    let _ = writeln!(text, "m: {m}");
    let _ = writeln!(text, "D: {ambient}");
    let _ = writeln!(text, "cosine: {cos}");
    let _ = writeln!(text, "angle_deg: {}", cos.acos().to_degrees());
    let _ = writeln!(text, "default_a: {}", scalar_list(&lines::default_a(dim, t)));
    if t == 1 && kind == Kind::Real {
        let [hi, lo] = lines::solve_real_t1(dim, 1.0);
        let _ = writeln!(text, "real_roots: {hi},{lo}");
    }
    let _ = writeln!(text, "complex_bound: {}", check_bounds(m, ambient, Kind::Complex).bound);
    let _ = writeln!(text, "real_bound: {}", check_bounds(m, ambient, Kind::Real).bound);
    let _ = writeln!(text, "bound: {}", bound.bound);
    let _ = writeln!(text, "bound_status: {}", if bound.passed { "ok" } else { "exceeded" });
    if let Some(w) = &bound.warning {
        let _ = writeln!(text, "bound_warning: {w}");
    }
    Ok(text)
}
