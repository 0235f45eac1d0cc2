//! Plain-text serialisation: point sets, finite function classes, entropy
//! profiles, admissible sequences and estimates.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! write-then-read is lossless.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::chaining::{AdmissibleSequence, EntropyProfile, EntropySource};
use crate::classes::{FiniteFunctionClass, FunctionClassOracle};
use crate::error::{Error, Result};
use crate::estimate::{ComplexityEstimate, ESTIMATE_CSV_HEADER};
use crate::geometry::PointSet;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| parse_err(line, format!("`{}` is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("`{}` is not finite", s.trim())));
    }
    Ok(v)
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(line, format!("`{}` is not a nonnegative integer", s.trim())))
}

/// Non-empty lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

/// `elem_id,coord_0,…,coord_{kn-1}`, one row per element, entries in
/// row-major order of the `k×n` matrix.
pub fn pointset_to_csv(t: &PointSet) -> String {
    let (k, n) = (t.k(), t.n());
    let mut out = String::from("elem_id");
    for c in 0..k * n {
        write!(out, ",coord_{c}").unwrap();
    }
    out.push('\n');
    for (e, el) in t.elements().enumerate() {
        write!(out, "{e}").unwrap();
        for j in 0..k {
            for i in 0..n {
                write!(out, ",{}", el[i * k + j]).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`pointset_to_csv`]; `k` fixes the row count of each matrix.
pub fn pointset_from_csv(text: &str, k: usize) -> Result<PointSet> {
    let mut it = lines(text);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"elem_id") {
        return Err(parse_err(hl, "header must start with `elem_id`"));
    }
    let width = cols.len() - 1;
    for (c, name) in cols[1..].iter().enumerate() {
        if *name != format!("coord_{c}") {
            return Err(parse_err(hl, format!("expected `coord_{c}`, found `{name}`")));
        }
    }
    if k == 0 || width == 0 || width % k != 0 {
        return Err(parse_err(hl, format!("{width} coordinates do not form k = {k} rows")));
    }
    let n = width / k;
    let mut elements = Vec::new();
    for (ln, row) in it {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != width + 1 {
            return Err(parse_err(ln, format!("expected {} fields, found {}", width + 1, fields.len())));
        }
        let mut el = vec![0.0; width];
        for j in 0..k {
            for i in 0..n {
                el[i * k + j] = parse_f64(fields[1 + j * n + i], ln)?;
            }
        }
        elements.push(el);
    }
    PointSet::new(k, n, elements)
}

pub fn read_pointset(path: &Path, k: usize) -> Result<PointSet> {
    pointset_from_csv(&std::fs::read_to_string(path)?, k)
}

pub fn write_pointset(path: &Path, t: &PointSet) -> Result<()> {
    Ok(std::fs::write(path, pointset_to_csv(t))?)
}

/// `(triplets CSV, sidecar)`: `func_id,point_id,value` rows, and a
/// `key = value` sidecar holding `L`, `B`, `k` and one `point.<id>` line per
/// tabulated point.
pub fn function_class_to_text(class: &FiniteFunctionClass) -> (String, String) {
    let mut csv = String::from("func_id,point_id,value\n");
    for (j, row) in class.table().iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            writeln!(csv, "{j},{i},{v}").unwrap();
        }
    }
    let mut side = format!("L = {}\nB = {}\nk = {}\n", class.lipschitz(), class.uniform_bound(), class.k());
    for (i, x) in class.domain().iter().enumerate() {
        let xs: Vec<String> = x.iter().map(f64::to_string).collect();
        writeln!(side, "point.{i} = {}", xs.join(", ")).unwrap();
    }
    (csv, side)
}

/// Inverse of [`function_class_to_text`]. Missing triplets are an error.
pub fn function_class_from_text(csv: &str, sidecar: &str) -> Result<FiniteFunctionClass> {
    let mut meta = BTreeMap::new();
    for (ln, line) in lines(sidecar).filter(|(_, l)| !l.starts_with('#')) {
        let (key, value) = line.split_once('=').ok_or_else(|| parse_err(ln, "expected `key = value`"))?;
        meta.insert(key.trim().to_string(), (ln, value.trim().to_string()));
    }
    let get = |key: &str| meta.get(key).ok_or_else(|| parse_err(0, format!("sidecar lacks `{key}`")));
    let (ln, l) = get("L")?;
    let lipschitz = parse_f64(l, *ln)?;
    let (ln, b) = get("B")?;
    let bound = parse_f64(b, *ln)?;
    let (ln, k) = get("k")?;
    let k = parse_usize(k, *ln)?;
    let mut domain = Vec::new();
    while let Some((ln, v)) = meta.get(&format!("point.{}", domain.len())) {
        let x = v.split(',').map(|s| parse_f64(s, *ln)).collect::<Result<Vec<_>>>()?;
        if x.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: x.len() });
        }
        domain.push(x);
    }
    let known = 3 + domain.len();
    if let Some((key, (ln, _))) = meta.iter().find(|(key, _)| !matches!(key.as_str(), "L" | "B" | "k") && !key.starts_with("point.")) {
        return Err(parse_err(*ln, format!("unknown sidecar key `{key}`")));
    }
    if meta.len() != known {
        return Err(parse_err(0, "point ids in the sidecar must be 0, 1, 2, ..."));
    }
    let n = domain.len();
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    let mut it = lines(csv);
    match it.next() {
        Some((_, h)) if h.replace(' ', "") == "func_id,point_id,value" => {}
        Some((ln, _)) => return Err(parse_err(ln, "header must be `func_id,point_id,value`")),
        None => return Err(parse_err(1, "missing header")),
    }
    for (ln, line) in it {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(parse_err(ln, "expected 3 fields"));
        }
        let (j, i, v) = (parse_usize(f[0], ln)?, parse_usize(f[1], ln)?, parse_f64(f[2], ln)?);
        if i >= n {
            return Err(parse_err(ln, format!("point_id {i} has no coordinates in the sidecar")));
        }
        if rows.len() <= j {
            rows.resize(j + 1, vec![None; n]);
        }
        if rows[j][i].replace(v).is_some() {
            return Err(parse_err(ln, format!("duplicate value for function {j} at point {i}")));
        }
    }
    let table = rows
        .into_iter()
        .enumerate()
        .map(|(j, r)| {
            r.into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| parse_err(0, format!("function {j} lacks point {i}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteFunctionClass::new(domain, table, lipschitz, bound)
}

/// `m,e_m,source` rows.
pub fn entropy_profile_to_csv(p: &EntropyProfile) -> String {
    let mut out = String::from("m,e_m,source\n");
    for (m, e) in p.values().iter().enumerate() {
        writeln!(out, "{m},{e},{}", p.source()).unwrap();
    }
    out
}

pub fn entropy_profile_from_csv(text: &str) -> Result<EntropyProfile> {
    let mut it = lines(text);
    match it.next() {
        Some((_, h)) if h.replace(' ', "") == "m,e_m,source" => {}
        _ => return Err(parse_err(1, "header must be `m,e_m,source`")),
    }
    let mut values = Vec::new();
    let mut source = None;
    for (ln, line) in it {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(parse_err(ln, "expected 3 fields"));
        }
        if parse_usize(f[0], ln)? != values.len() {
            return Err(parse_err(ln, "m must run 0, 1, 2, ..."));
        }
        values.push(parse_f64(f[1], ln)?);
        let s: EntropySource = f[2].parse().map_err(|_| parse_err(ln, format!("unknown source `{}`", f[2])))?;
        if source.is_some_and(|p| p != s) {
            return Err(parse_err(ln, "mixed sources in one profile"));
        }
        source = Some(s);
    }
    EntropyProfile::new(values, source.ok_or_else(|| parse_err(2, "no rows"))?)
}

pub fn sequence_to_text(seq: &AdmissibleSequence) -> String {
    seq.to_string()
}

pub fn sequence_from_text(points: usize, text: &str) -> Result<AdmissibleSequence> {
    AdmissibleSequence::parse(points, text)
}

/// Header plus one row per `(quantity, estimate)`.
pub fn estimates_to_csv<'a>(rows: impl IntoIterator<Item = (&'a str, &'a ComplexityEstimate)>) -> String {
    let mut out = format!("{ESTIMATE_CSV_HEADER}\n");
    for (q, e) in rows {
        out.push_str(&e.csv_row(q));
        out.push('\n');
    }
    out
}
