//! Text and image encodings: FGRID field dumps, 8-bit PGM images and the CSV tables.
//!
//! Every encoder returns the complete file contents so callers can compute
//! all outputs before touching the filesystem. Numbers are printed with 17
//! significant digits so they parse back to the same bits.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::decompose::DecompositionRecord;
use crate::error::{Error, Result};
use crate::lg_field::{FieldGrid, GridSpec};
use crate::scalar::{wrap_angle, Real};
use crate::scan::ScanRecord;

const FGRID_MAGIC: &str = "FGRID v1";

fn num<T: Real>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

/// FGRID v1: magic line, `n,extent,z,wavelength` header and values, then
/// `re,im` rows in grid order (row 0 at `y = −extent`, `x` fastest).
pub fn write_fgrid<T: Real>(field: &FieldGrid<T>) -> String {
    let mut s = String::with_capacity(48 * field.values().len() + 128);
    s.push_str(FGRID_MAGIC);
    s.push('\n');
    s.push_str("n,extent,z,wavelength\n");
    let _ = writeln!(
        s,
        "{},{},{},{}",
        field.n(),
        num(field.extent()),
        num(field.z()),
        num(field.wavelength())
    );
    s.push_str("re,im\n");
    for v in field.values() {
        let _ = writeln!(s, "{},{}", num(v.re), num(v.im));
    }
    s
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: Real>(tok: &str, line: usize) -> Result<T> {
    tok.trim()
        .parse::<f64>()
        .map(T::lit)
        .map_err(|e| parse_err(line, format!("`{tok}`: {e}")))
}

pub fn read_fgrid<T: Real>(text: &str) -> Result<FieldGrid<T>> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let mut expect = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing {what}")))
    };
    let (ln, magic) = expect("magic line")?;
    if magic.trim() != FGRID_MAGIC {
        return Err(parse_err(ln, format!("expected `{FGRID_MAGIC}`")));
    }
    let (ln, head) = expect("header")?;
    if head.trim() != "n,extent,z,wavelength" {
        return Err(parse_err(ln, "expected `n,extent,z,wavelength`"));
    }
    let (ln, params) = expect("grid parameters")?;
    let tok: Vec<&str> = params.split(',').collect();
    if tok.len() != 4 {
        return Err(parse_err(ln, format!("expected 4 fields, got {}", tok.len())));
    }
    let n: usize = tok[0]
        .trim()
        .parse()
        .map_err(|e| parse_err(ln, format!("n: {e}")))?;
    let spec = GridSpec::new(n, parse_num(tok[1], ln)?, parse_num(tok[2], ln)?)
        .map_err(|e| parse_err(ln, e.to_string()))?;
    let wavelength: T = parse_num(tok[3], ln)?;
    let (ln, cols) = expect("value header")?;
    if cols.trim() != "re,im" {
        return Err(parse_err(ln, "expected `re,im`"));
    }
    let mut values = Vec::with_capacity(n * n);
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| parse_err(ln, "expected `re,im`"))?;
        values.push(Complex::new(parse_num(re, ln)?, parse_num(im, ln)?));
    }
    if values.len() != n * n {
        return Err(parse_err(0, format!("expected {} values, got {}", n * n, values.len())));
    }
    FieldGrid::from_values(spec, wavelength, values)
}

/// Binary PGM (P5) of `n×n` bytes given in grid order; the top image row is `+y`.
pub fn pgm(n: usize, grid_order: &[u8]) -> Result<Vec<u8>> {
    if grid_order.len() != n * n {
        return Err(Error::GridMismatch(format!(
            "{} pixels for a {n}x{n} image",
            grid_order.len()
        )));
    }
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    for row in grid_order.chunks_exact(n).rev() {
        out.extend_from_slice(row);
    }
    Ok(out)
}

/// Intensity scaled so the brightest sample is 255.
pub fn intensity_pgm<T: Real>(field: &FieldGrid<T>) -> Result<Vec<u8>> {
    let i = field.intensity();
    let hi = i.iter().fold(T::zero(), |m, &v| m.max(v));
    let scale = if hi > T::zero() { T::lit(255.0) / hi } else { T::zero() };
    let bytes: Vec<u8> = i
        .iter()
        .map(|&v| (v * scale).round().to_u8().unwrap_or(255))
        .collect();
    pgm(field.n(), &bytes)
}

/// Phase mapped linearly from `[−π, π)` onto 256 levels.
pub fn phase_pgm<T: Real>(field: &FieldGrid<T>) -> Result<Vec<u8>> {
    let bytes: Vec<u8> = field
        .values()
        .iter()
        .map(|v| phase_level(v.arg()))
        .collect();
    pgm(field.n(), &bytes)
}

pub fn phase_level<T: Real>(angle: T) -> u8 {
    let a = wrap_angle(angle) + T::PI();
    let level = (a / T::TAU() * T::lit(256.0)).floor();
    level.to_u8().unwrap_or(255)
}

/// Scan table with raw and max-normalized detector traces. Missing values are left empty.
pub fn scan_csv<T: Real>(records: &[ScanRecord<T>], w0: T) -> String {
    let max = |pick: fn(&ScanRecord<T>) -> Option<T>| {
        records
            .iter()
            .filter_map(pick)
            .fold(T::zero(), |m, v| m.max(v))
    };
    let gmax = max(|r| r.i_gauss);
    let lmax = max(|r| r.i_lg);
    let cell = |v: Option<T>| v.map(num).unwrap_or_default();
    let norm = |v: Option<T>, m: T| v.filter(|_| m > T::zero()).map(|v| v / m);
    let mut s = String::from("d_over_w0,i_gauss_raw,i_lg_raw,i_gauss_norm,i_lg_norm,a2_0m1,a2_02,a2_0m2\n");
    for r in records {
        let h = r.higher.map(|h| h.map(num));
        let [h0, h1, h2] = h.unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            num(r.displacement / w0),
            cell(r.i_gauss),
            cell(r.i_lg),
            cell(norm(r.i_gauss, gmax)),
            cell(norm(r.i_lg, lmax)),
            h0,
            h1,
            h2
        );
    }
    s
}

pub fn decomposition_csv<T: Real>(record: &DecompositionRecord<T>) -> String {
    let mut s = String::from("p,L,re,im,abs2\n");
    for (&(p, l), a) in &record.coefficients {
        let _ = writeln!(s, "{p},{l},{},{},{}", num(a.re), num(a.im), num(a.norm_sqr()));
    }
    s
}

/// One row of the singularity validation table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularityRow<T> {
    pub gamma: T,
    pub phase: T,
    pub r_pred: T,
    pub theta_pred: T,
    pub r_found: Option<T>,
    pub theta_found: Option<T>,
    pub winding: i32,
}

pub fn singularity_csv<T: Real>(rows: &[SingularityRow<T>]) -> String {
    let mut s = String::from("gamma,phase_rad,r_pred,theta_pred,r_found,theta_found,winding\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            num(r.gamma),
            num(r.phase),
            num(r.r_pred),
            num(r.theta_pred),
            r.r_found.map(num).unwrap_or_default(),
            r.theta_found.map(num).unwrap_or_default(),
            r.winding
        );
    }
    s
}
