//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Criterion 10 re-runs 1-9 and compares the
//! serialized outputs byte for byte.

use eqlf_core::io::{lineset_to_json, mubset_to_json, report_to_json};
use eqlf_core::lines::{construct, extend_r8, magnitude_pair, predict_angle, predict_norm_sq, LineSet};
use eqlf_core::mub::{
    alternating_spread_search, build_complex_mubs, build_real_mubs, check_mub_set, Basis, MubSet, Provenance,
};
use eqlf_core::verify::{check_bounds, check_equiangular, check_two_valued, gram, VerificationReport};
use eqlf_core::{Complex64, Kind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Vec<String>, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn json(ls: &LineSet, report: &VerificationReport) -> Result<Vec<String>, String> {
    Ok(vec![
        lineset_to_json(ls).map_err(|e| e.to_string())?,
        report_to_json(report).map_err(|e| e.to_string())?,
    ])
}

/// Builds a complex construction and checks count, dimension and cosine.
fn complex_equiangular(d: usize, t: usize, tol: f64) -> Result<(LineSet, VerificationReport), String> {
    let mubs = build_complex_mubs(d).map_err(|e| e.to_string())?;
    let ls = construct(&mubs, t, None, None).map_err(|e| e.to_string())?;
    ensure(
        ls.count() == d * d,
        format!("d={d}: {} lines, expected {}", ls.count(), d * d),
    )?;
    ensure(
        ls.ambient_dim() == (t + 1) * d,
        format!("d={d}: ambient {} expected {}", ls.ambient_dim(), (t + 1) * d),
    )?;
    let report = check_equiangular(&ls, tol);
    ensure(report.passed, format!("d={d} t={t}: {}", report.summary()))?;
    let cos = report.cosine.ok_or("no cosine")?;
    let want = predict_angle(d);
    ensure(
        (cos - want).abs() <= tol,
        format!("d={d} t={t}: cosine {cos} vs {want}"),
    )?;
    Ok((ls, report))
}

fn ac1() -> Outcome {
    let (ls, report) = complex_equiangular(5, 1, 1e-8)?;
    ensure(ls.ambient_dim() == 10 && ls.count() == 25, "25 lines in C^10")?;
    ensure(
        (report.cosine.unwrap() - 1.0 / (1.0 + 5f64.sqrt())).abs() <= 1e-8,
        "cosine",
    )?;
    json(&ls, &report)
}

fn ac2() -> Outcome {
    let (ls9, r9) = complex_equiangular(9, 1, 1e-8)?;
    ensure(ls9.count() == 81 && ls9.ambient_dim() == 18, "81 lines in C^18")?;
    ensure((r9.cosine.unwrap() - 0.25).abs() <= 1e-8, "d=9 cosine 1/4")?;
    let (ls3, r3) = complex_equiangular(3, 2, 1e-8)?;
    ensure(ls3.count() == 9 && ls3.ambient_dim() == 9, "9 lines in C^9")?;
    ensure(
        (r3.cosine.unwrap() - 1.0 / (1.0 + 3f64.sqrt())).abs() <= 1e-8,
        "d=3 t=2 cosine",
    )?;
    let mut out = json(&ls9, &r9)?;
    out.extend(json(&ls3, &r3)?);
    Ok(out)
}

fn r8_lines(a: f64) -> Result<LineSet, String> {
    let mubs = build_real_mubs(4).map_err(|e| e.to_string())?;
    construct(&mubs, 1, Some(vec![c(a)]), None).map_err(|e| e.to_string())
}

fn ac3() -> Outcome {
    let ls = r8_lines(1.0 + 2f64.sqrt())?;
    ensure(
        ls.count() == 8 && ls.ambient_dim() == 8 && ls.kind() == Kind::Real,
        "8 lines in R^8",
    )?;
    let g = gram(&ls);
    for j in 0..8 {
        ensure(
            (g.get(j, j).re - 12.0).abs() <= 1e-10,
            format!("norm^2 of line {j} = {}", g.get(j, j)),
        )?;
        for k in 0..8 {
            if j != k {
                let z = g.get(j, k);
                ensure(
                    z.im == 0.0 && (z.re.abs() - 4.0).abs() <= 1e-10,
                    format!("G[{j}][{k}] = {z}"),
                )?;
            }
        }
    }
    let report = check_equiangular(&ls, 1e-10);
    ensure(report.passed, report.summary())?;
    ensure((report.cosine.unwrap() - 1.0 / 3.0).abs() <= 1e-10, "cosine 1/3")?;
    json(&ls, &report)
}

fn ac4() -> Outcome {
    let mut out = Vec::new();
    for a in [1.0 + 2f64.sqrt(), 1.0 - 2f64.sqrt()] {
        let ext = extend_r8(&r8_lines(a)?).map_err(|e| e.to_string())?;
        ensure(ext.count() == 16 && ext.ambient_dim() == 8, "16 lines in R^8")?;
        let report = check_equiangular(&ext, 1e-10);
        ensure(report.passed, format!("a={a}: {}", report.summary()))?;
        ensure(
            (report.cosine.unwrap() - 1.0 / 3.0).abs() <= 1e-10,
            format!("a={a}: cosine"),
        )?;
        let bound = check_bounds(16, 8, Kind::Real);
        ensure(bound.passed && bound.bound == 36, "16 <= 36")?;
        out.extend(json(&ext, &report)?);
    }
    Ok(out)
}

fn ac5() -> Outcome {
    let spread = alternating_spread_search(4).map_err(|e| e.to_string())?;
    ensure(spread.len() == 8, "alternating spread of size 8")?;
    let mubs = build_real_mubs(16).map_err(|e| e.to_string())?;
    ensure(mubs.len() == 8, "8 real bases")?;
    let ls = construct(&mubs, 1, None, None).map_err(|e| e.to_string())?;
    ensure(ls.count() == 128 && ls.ambient_dim() == 32, "128 lines in R^32")?;
    let report = check_equiangular(&ls, 1e-8);
    ensure(report.passed, report.summary())?;
    ensure((report.cosine.unwrap() - 0.2).abs() <= 1e-8, "cosine 1/5")?;
    json(&ls, &report)
}

fn ac6() -> Outcome {
    let mubs = build_complex_mubs(3).map_err(|e| e.to_string())?;
    let ls = construct(&mubs, 1, Some(vec![c(2.0)]), None).map_err(|e| e.to_string())?;
    let equi = check_equiangular(&ls, 1e-8);
    ensure(equi.classes.len() == 2, format!("{} classes", equi.classes.len()))?;
    let want = [2.0, 2.0 * 3f64.sqrt()];
    for (class, w) in equi.classes.iter().zip(want) {
        ensure(
            (class.min - w).abs() <= 1e-8 && (class.max - w).abs() <= 1e-8,
            format!("class [{}, {}] vs {w}", class.min, class.max),
        )?;
    }
    let predicted = magnitude_pair(3, &[c(2.0)], None);
    ensure(
        (predicted.intra - 2.0).abs() <= 1e-12 && (predicted.cross - want[1]).abs() <= 1e-12,
        "prediction",
    )?;
    let two = check_two_valued(&ls, predicted, 1e-8).map_err(|e| e.to_string())?;
    ensure(two.passed, two.summary())?;
    // Same-basis pairs are the small class, cross-basis pairs the large one.
    let origins = ls.meta().unwrap().origins.clone().unwrap();
    let g = gram(&ls);
    for j in 0..9 {
        for k in j + 1..9 {
            let w = if origins[j] == origins[k] { want[0] } else { want[1] };
            ensure((g.get(j, k).norm() - w).abs() <= 1e-8, format!("pair ({j},{k})"))?;
        }
    }
    json(&ls, &two)
}

fn ac7() -> Outcome {
    let mubs = build_real_mubs(4).map_err(|e| e.to_string())?;
    let a = 1.0 - 1.0 / 2f64.sqrt();
    let pair = magnitude_pair(4, &[c(a)], Some(&[2.0]));
    ensure(
        (pair.intra - 10.0).abs() <= 1e-10 && (pair.cross - 10.0).abs() <= 1e-10,
        format!("magnitudes {pair:?}"),
    )?;
    let ls = construct(&mubs, 1, Some(vec![c(a)]), Some(vec![2.0])).map_err(|e| e.to_string())?;
    let meta = ls.meta().unwrap();
    let predicted_norm = predict_norm_sq(4, &meta.scalar_set, meta.params.c.as_deref());
    ensure(
        (predicted_norm - 30.0).abs() <= 1e-9,
        format!("predicted norm^2 {predicted_norm}"),
    )?;
    let report = check_equiangular(&ls, 1e-9);
    ensure(report.passed, report.summary())?;
    ensure(
        (report.norm_sq.unwrap() - 30.0).abs() <= 1e-9,
        format!("measured norm^2 {:?}", report.norm_sq),
    )?;
    ensure((report.classes[0].value - 10.0).abs() <= 1e-10, "measured magnitude 10")?;
    ensure((report.cosine.unwrap() - 1.0 / 3.0).abs() <= 1e-9, "cosine 1/3")?;
    json(&ls, &report)
}

fn ac8() -> Outcome {
    let dims = [2usize, 3, 4, 5, 7, 8, 9];
    let sets: Vec<MubSet> = dims.iter().map(|&d| build_complex_mubs(d).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut out = Vec::new();
    for draw in 0..50 {
        let idx = rng.gen_range(0..dims.len());
        let d = dims[idx];
        let t = rng.gen_range(1..=3usize);
        let a: Vec<Complex64> = (0..t)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0..=3.0), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let ls = construct(&sets[idx], t, Some(a.clone()), None).map_err(|e| e.to_string())?;
        let report = check_two_valued(&ls, magnitude_pair(d, &a, None), 1e-7).map_err(|e| e.to_string())?;
        ensure(
            report.passed,
            format!("draw {draw} (d={d}, t={t}): {}", report.summary()),
        )?;
        out.push(report_to_json(&report).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn corrupt(set: &MubSet, basis: usize, vector: usize, coord: usize) -> MubSet {
    let mut bases = set.bases().to_vec();
    let mut m = bases[basis].entries().clone();
    m.set(vector, coord, -m.get(vector, coord));
    bases[basis] = Basis::new(m, set.kind()).unwrap();
    MubSet::new(set.kind(), Provenance::File, bases).unwrap()
}

fn ac9() -> Outcome {
    let mut sets = Vec::new();
    for d in [2, 3, 4, 5, 7, 8, 9] {
        sets.push(build_complex_mubs(d).map_err(|e| format!("complex d={d}: {e}"))?);
    }
    for d in [4, 16] {
        sets.push(build_real_mubs(d).map_err(|e| format!("real d={d}: {e}"))?);
    }
    let mut out = Vec::new();
    for set in &sets {
        let report = check_mub_set(set, 1e-9).map_err(|e| e.to_string())?;
        ensure(
            report.passed,
            format!("{} d={}: {}", set.kind(), set.dim(), report.summary()),
        )?;
        out.push(mubset_to_json(set).map_err(|e| e.to_string())?);
        let d = set.dim();
        for basis in 0..set.len() {
            for k in 0..4 {
                let vector = (basis * 3 + k * 5) % d;
                let coord = (basis + k * 7 + 1) % d;
                let bad = corrupt(set, basis, vector, coord);
                let r = check_mub_set(&bad, 1e-9).map_err(|e| e.to_string())?;
                ensure(
                    !r.passed,
                    format!("corruption at basis {basis} vector {vector} coord {coord} of d={d} undetected"),
                )?;
            }
        }
    }
    Ok(out)
}

const CRITERIA: [Criterion; 9] = [
    ("AC1 d=5 t=1: 25 equiangular lines in C^10", ac1),
    ("AC2 d=9 t=1 and d=3 t=2: cosine independent of t", ac2),
    ("AC3 d=4 t=1 real: 8 lines in R^8, Gram entries +-4", ac3),
    ("AC4 R^8 extension: 16 lines at cosine 1/3", ac4),
    ("AC5 d=16 t=1 real: 128 lines in R^32", ac5),
    ("AC6 d=3 a=2: magnitude classes {2, 2*sqrt(3)}", ac6),
    ("AC7 scaled c=2: magnitudes 10, norm^2 30", ac7),
    ("AC8 50 random draws: two-valued Gram", ac8),
    ("AC9 MUB layer checks and corruption detection", ac9),
];

fn main() {
    let mut failures = Vec::new();
    let mut first_outputs = Vec::new();
    for (name, run) in CRITERIA {
        match run() {
            Ok(out) => {
                println!("PASS  {name}");
                first_outputs.push(Some(out));
            }
            Err(e) => {
                println!("FAIL  {name}: {e}");
                failures.push(name.to_string());
                first_outputs.push(None);
            }
        }
    }

    let name = "AC10 reproducibility: byte-identical outputs on re-run";
    let mut mismatch = None;
    for ((label, run), first) in CRITERIA.iter().zip(&first_outputs) {
        let Some(first) = first else {
            mismatch.get_or_insert_with(|| format!("{label} did not produce output"));
            continue;
        };
        match run() {
            Ok(second) if &second == first => {}
            Ok(_) => {
                mismatch.get_or_insert_with(|| format!("{label} output differs between runs"));
            }
            Err(e) => {
                mismatch.get_or_insert_with(|| format!("{label} failed on re-run: {e}"));
            }
        }
    }
    match mismatch {
        None => println!("PASS  {name}"),
        Some(e) => {
            println!("FAIL  {name}: {e}");
            failures.push(name.to_string());
        }
    }

    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
