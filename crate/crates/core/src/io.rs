//! File formats: matrix JSON (bit-exact round trip), Matrix Market input,
//! and report emission as JSON or CSV.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::report::BoundReport;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<(f64, f64)>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim(),
            entries: self.entries().iter().map(|z| (z.re, z.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let entries = raw.entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(raw.dim, entries).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Byte offset of a 1-based (line, column) position in `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0usize;
    for (i, l) in text.lines().enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    text.len()
}

fn parse_json_matrix(text: &str) -> Result<ComplexMatrix> {
    match serde_json::from_str::<ComplexMatrix>(text) {
        Ok(m) => Ok(m),
        Err(e) => Err(Error::ParseError {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        }),
    }
}

fn parse_mm_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut offset = 0usize;
    let mut lines = Vec::new(); // (offset, line)
    for line in text.split_inclusive('\n') {
        lines.push((offset, line.trim_end_matches(['\n', '\r'])));
        offset += line.len();
    }
    let mut iter = lines.into_iter();
    let (off, header) = iter.next().ok_or(Error::ParseError {
        offset: 0,
        message: "empty file".into(),
    })?;
    let header_fields: Vec<&str> = header.split_whitespace().collect();
    if header_fields.len() < 5
        || !header_fields[0].eq_ignore_ascii_case("%%MatrixMarket")
        || !header_fields[1].eq_ignore_ascii_case("matrix")
    {
        return Err(Error::ParseError {
            offset: off,
            message: "expected a MatrixMarket matrix header".into(),
        });
    }
    let layout = header_fields[2].to_ascii_lowercase();
    let field = header_fields[3].to_ascii_lowercase();
    let symmetry = header_fields[4].to_ascii_lowercase();
    if field != "complex" && field != "real" && field != "integer" {
        return Err(Error::ParseError {
            offset: off,
            message: format!("unsupported field type {field}"),
        });
    }
    if symmetry != "general" {
        return Err(Error::ParseError {
            offset: off,
            message: format!("unsupported symmetry {symmetry}"),
        });
    }
    let values_per_entry = if field == "complex" { 2 } else { 1 };

    let mut data = iter.filter(|(_, l)| !l.trim_start().starts_with('%') && !l.trim().is_empty());
    let (size_off, size_line) = data.next().ok_or(Error::ParseError {
        offset: text.len(),
        message: "missing size line".into(),
    })?;
    let parse_usize = |tok: &str, off: usize| -> Result<usize> {
        tok.parse::<usize>().map_err(|e| Error::ParseError {
            offset: off,
            message: format!("bad integer {tok:?}: {e}"),
        })
    };
    let parse_f64 = |tok: &str, off: usize| -> Result<f64> {
        tok.parse::<f64>().map_err(|e| Error::ParseError {
            offset: off,
            message: format!("bad number {tok:?}: {e}"),
        })
    };
    let size_fields: Vec<&str> = size_line.split_whitespace().collect();

    match layout.as_str() {
        "array" => {
            if size_fields.len() != 2 {
                return Err(Error::ParseError {
                    offset: size_off,
                    message: "array size line must be `rows cols`".into(),
                });
            }
            let rows = parse_usize(size_fields[0], size_off)?;
            let cols = parse_usize(size_fields[1], size_off)?;
            if rows != cols {
                return Err(Error::ShapeError { rows, cols });
            }
            let mut entries = vec![Complex64::new(0.0, 0.0); rows * cols];
            // array layout is column-major
            for idx in 0..rows * cols {
                let (loff, line) = data.next().ok_or(Error::ParseError {
                    offset: text.len(),
                    message: format!("expected {} entries, file truncated at {idx}", rows * cols),
                })?;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != values_per_entry {
                    return Err(Error::ParseError {
                        offset: loff,
                        message: format!("expected {values_per_entry} values per entry"),
                    });
                }
                let re = parse_f64(toks[0], loff)?;
                let im = if values_per_entry == 2 { parse_f64(toks[1], loff)? } else { 0.0 };
                let row = idx % rows;
                let col = idx / rows;
                entries[row * cols + col] = Complex64::new(re, im);
            }
            ComplexMatrix::new(rows, entries)
        }
        "coordinate" => {
            if size_fields.len() != 3 {
                return Err(Error::ParseError {
                    offset: size_off,
                    message: "coordinate size line must be `rows cols nnz`".into(),
                });
            }
            let rows = parse_usize(size_fields[0], size_off)?;
            let cols = parse_usize(size_fields[1], size_off)?;
            let nnz = parse_usize(size_fields[2], size_off)?;
            if rows != cols {
                return Err(Error::ShapeError { rows, cols });
            }
            let mut entries = vec![Complex64::new(0.0, 0.0); rows * cols];
            for k in 0..nnz {
                let (loff, line) = data.next().ok_or(Error::ParseError {
                    offset: text.len(),
                    message: format!("expected {nnz} entries, file truncated at {k}"),
                })?;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 2 + values_per_entry {
                    return Err(Error::ParseError {
                        offset: loff,
                        message: format!("expected `i j` plus {values_per_entry} values"),
                    });
                }
                let i = parse_usize(toks[0], loff)?;
                let j = parse_usize(toks[1], loff)?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(Error::ParseError {
                        offset: loff,
                        message: format!("index ({i}, {j}) out of range for {rows}x{cols}"),
                    });
                }
                let re = parse_f64(toks[2], loff)?;
                let im = if values_per_entry == 2 { parse_f64(toks[3], loff)? } else { 0.0 };
                entries[(i - 1) * cols + (j - 1)] = Complex64::new(re, im);
            }
            ComplexMatrix::new(rows, entries)
        }
        other => Err(Error::ParseError {
            offset: off,
            message: format!("unsupported layout {other}"),
        }),
    }
}

/// Parse a matrix from text: Matrix Market when the banner is present,
/// otherwise the JSON `{dim, entries}` format.
pub fn parse_matrix_str(text: &str) -> Result<ComplexMatrix> {
    if text.trim_start().starts_with("%%MatrixMarket") {
        parse_mm_matrix(text)
    } else {
        parse_json_matrix(text)
    }
}

pub fn parse_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix_str(&fs::read_to_string(path)?)
}

/// JSON serialization of a matrix; round-trips bit-exactly through
/// `parse_matrix_str`.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m))?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    m: usize,
    coeffs: Vec<(f64, f64)>,
}

/// Parse a polynomial span from JSON `{"m": lowest_degree, "coeffs": [[re, im], ...]}`.
pub fn parse_poly_str(text: &str) -> Result<crate::fcalc::PolySpan> {
    let raw: PolyJson = serde_json::from_str(text).map_err(|e| Error::ParseError {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    if raw.coeffs.is_empty() {
        return Err(Error::ParseError {
            offset: 0,
            message: "polynomial needs at least one coefficient".into(),
        });
    }
    Ok(crate::fcalc::PolySpan::new(
        raw.m,
        raw.coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
    ))
}

pub fn parse_poly(path: &Path) -> Result<crate::fcalc::PolySpan> {
    parse_poly_str(&fs::read_to_string(path)?)
}

pub fn poly_to_json(p: &crate::fcalc::PolySpan) -> String {
    serde_json::to_string(&PolyJson {
        m: p.m,
        coeffs: p.coeffs.iter().map(|z| (z.re, z.im)).collect(),
    })
    .expect("poly serialization cannot fail")
}

#[derive(Serialize)]
struct ProfileJson {
    c_tr: f64,
    c_kreiss: f64,
    theta: f64,
    pb: f64,
    c1: f64,
    spectral_radius_bound: f64,
    grid_size: usize,
    n_max: usize,
    argmax_re: f64,
    argmax_im: f64,
    power_scan_converged: bool,
}

pub fn profile_to_json(p: &crate::profile::OperatorProfile) -> String {
    serde_json::to_string_pretty(&ProfileJson {
        c_tr: p.c_tr,
        c_kreiss: p.c_kreiss,
        theta: p.theta,
        pb: p.pb,
        c1: p.c1,
        spectral_radius_bound: p.spectral_radius_bound,
        grid_size: p.grid_size,
        n_max: p.n_max,
        argmax_re: p.argmax_z.re,
        argmax_im: p.argmax_z.im,
        power_scan_converged: p.power_scan_converged,
    })
    .expect("profile serialization cannot fail")
}

/// 17 significant digits: enough to reproduce any binary64 exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Fixed-header CSV: `name,lhs,rhs,margin,pass,inputs`, one row per report.
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("name,lhs,rhs,margin,pass,inputs\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_escape(&r.name),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.margin),
            r.pass,
            csv_escape(&r.inputs)
        ));
    }
    out
}

pub fn reports_to_json(reports: &[BoundReport]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}
