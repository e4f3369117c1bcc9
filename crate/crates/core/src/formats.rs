//! JSON documents for diagrams and certificates.
//!
//! Integers are kept as decimal literals of any size; anything else in a
//! numeric position is rejected. Matrices are lists of rows, or
//! `{"rows": r, "cols": c, "data": [...]}` (row-major) when a dimension is
//! zero and the shape cannot be read off the rows. Unknown keys are errors.
//!
//! ```json
//! {
//!   "mode": "plain",
//!   "mono": true,
//!   "ranks": [1, 1],
//!   "transitions": [
//!     [[2]]
//!   ],
//!   "period": {"prefix_len": 0, "period_len": 1}
//! }
//! ```

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::confluence::{CertificatePeriod, ConfluenceCertificate};
use crate::diagram::{DiagramError, Mode, Period, SequenceDiagram, ValidationReport};
use crate::ints::Matrix;

type Diagram = SequenceDiagram<BigInt>;
type Certificate = ConfluenceCertificate<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{message} at {path}")]
    Field { path: String, message: String },
    #[error("invalid diagram: {0}")]
    Invalid(ValidationReport),
}

fn field(path: &Path, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Location inside a document, printed like `transitions[0][1]`.
#[derive(Clone)]
struct Path(Vec<Segment>);

#[derive(Clone)]
enum Segment {
    Key(&'static str),
    Index(usize),
}

impl Path {
    fn root() -> Self {
        Path(Vec::new())
    }

    fn key(&self, k: &'static str) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Key(k));
        p
    }

    fn index(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Index(i));
        p
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("document root");
        }
        for (n, s) in self.0.iter().enumerate() {
            match s {
                Segment::Key(k) if n == 0 => f.write_str(k)?,
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}

fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn object<'a>(v: &'a Value, path: &Path, allowed: &[&str]) -> Result<&'a Map<String, Value>, FormatError> {
    let obj = v.as_object().ok_or_else(|| field(path, "expected an object"))?;
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            let at = if path.0.is_empty() { "top level".to_string() } else { path.to_string() };
            return Err(FormatError::Field {
                path: at,
                message: format!("unknown field \"{k}\""),
            });
        }
    }
    Ok(obj)
}

fn required<'a>(obj: &'a Map<String, Value>, key: &'static str, path: &Path) -> Result<&'a Value, FormatError> {
    obj.get(key).ok_or_else(|| field(&path.key(key), "missing field"))
}

fn array<'a>(v: &'a Value, path: &Path) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| field(path, "expected a list"))
}

fn integer(v: &Value, path: &Path) -> Result<BigInt, FormatError> {
    let Value::Number(n) = v else {
        return Err(field(path, "expected an integer"));
    };
    let literal = n.to_string();
    let digits = literal.strip_prefix('-').unwrap_or(&literal);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(field(path, "non-integer entry"));
    }
    BigInt::from_str(&literal).map_err(|_| field(path, "non-integer entry"))
}

fn count(v: &Value, path: &Path) -> Result<usize, FormatError> {
    let n = integer(v, path)?;
    usize::try_from(n).map_err(|_| field(path, "expected a nonnegative count"))
}

fn counts(v: &Value, path: &Path) -> Result<Vec<usize>, FormatError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| count(x, &path.index(i)))
        .collect()
}

fn boolean(v: &Value, path: &Path) -> Result<bool, FormatError> {
    v.as_bool().ok_or_else(|| field(path, "expected true or false"))
}

/// A matrix; `shape` supplies the shape when the document leaves it open.
fn matrix(v: &Value, path: &Path, shape: Option<(usize, usize)>) -> Result<Matrix<BigInt>, FormatError> {
    if v.is_object() {
        let obj = object(v, path, &["rows", "cols", "data"])?;
        let rows = count(required(obj, "rows", path)?, &path.key("rows"))?;
        let cols = count(required(obj, "cols", path)?, &path.key("cols"))?;
        let data_path = path.key("data");
        let data = array(required(obj, "data", path)?, &data_path)?
            .iter()
            .enumerate()
            .map(|(i, x)| integer(x, &data_path.index(i)))
            .collect::<Result<Vec<_>, _>>()?;
        return Matrix::new(rows, cols, data).map_err(|e| field(path, e.to_string()));
    }
    let rows = array(v, path)?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let rp = path.index(r);
        let entries = array(row, &rp)?
            .iter()
            .enumerate()
            .map(|(c, x)| integer(x, &rp.index(c)))
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(entries);
    }
    if parsed.is_empty() {
        let cols = shape.map_or(0, |s| s.1);
        return Ok(Matrix::zeros(0, cols));
    }
    Matrix::from_rows(parsed).map_err(|e| field(path, e.to_string()))
}

fn matrices(v: &Value, path: &Path) -> Result<Vec<Matrix<BigInt>>, FormatError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(m, &path.index(i), None))
        .collect()
}

/// Parses a diagram without checking its invariants.
pub fn parse_diagram_unchecked(text: &str) -> Result<Diagram, FormatError> {
    let doc = parse_json(text)?;
    let root = Path::root();
    let obj = object(&doc, &root, &["mode", "mono", "ranks", "transitions", "period"])?;
    let mode_path = root.key("mode");
    let mode = match required(obj, "mode", &root)?.as_str() {
        Some("plain") => Mode::Plain,
        Some("simplicial") => Mode::Simplicial,
        _ => return Err(field(&mode_path, "expected \"plain\" or \"simplicial\"")),
    };
    let mono = match obj.get("mono") {
        Some(v) => boolean(v, &root.key("mono"))?,
        None => false,
    };
    let ranks = counts(required(obj, "ranks", &root)?, &root.key("ranks"))?;
    let tp = root.key("transitions");
    let transitions = array(required(obj, "transitions", &root)?, &tp)?
        .iter()
        .enumerate()
        .map(|(t, m)| {
            let shape = ranks.get(t).zip(ranks.get(t + 1)).map(|(&from, &to)| (to, from));
            matrix(m, &tp.index(t), shape)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = SequenceDiagram::new(mode, ranks, transitions).with_mono(mono);
    if let Some(v) = obj.get("period") {
        let pp = root.key("period");
        let p = object(v, &pp, &["prefix_len", "period_len"])?;
        d = d.with_period(Period {
            prefix_len: count(required(p, "prefix_len", &pp)?, &pp.key("prefix_len"))?,
            period_len: count(required(p, "period_len", &pp)?, &pp.key("period_len"))?,
        });
    }
    Ok(d)
}

/// Parses a diagram and checks every invariant.
pub fn parse_diagram(text: &str) -> Result<Diagram, FormatError> {
    parse_diagram_unchecked(text)?.checked().map_err(|e| match e {
        DiagramError::Invalid(report) => FormatError::Invalid(report),
        other => FormatError::Field {
            path: "document root".into(),
            message: other.to_string(),
        },
    })
}

/// Parses a certificate, checking that its lists have consistent lengths and
/// its indices are positive. The equations are left to verification.
pub fn parse_certificate(text: &str) -> Result<Certificate, FormatError> {
    let doc = parse_json(text)?;
    let root = Path::root();
    let obj = object(&doc, &root, &["i_indices", "k_indices", "f_mats", "g_mats", "periodic"])?;
    let mut idx = Vec::new();
    for key in ["i_indices", "k_indices"] {
        let p = root.key(key);
        let v = counts(required(obj, key, &root)?, &p)?;
        if let Some(pos) = v.iter().position(|&s| s == 0) {
            return Err(field(&p.index(pos), "stages are numbered from 1"));
        }
        idx.push(v);
    }
    let f_mats = matrices(required(obj, "f_mats", &root)?, &root.key("f_mats"))?;
    let g_mats = matrices(required(obj, "g_mats", &root)?, &root.key("g_mats"))?;
    let m = f_mats.len();
    for (key, v) in ["i_indices", "k_indices"].iter().zip(&idx) {
        if v.len() != m {
            let message = format!("expected {m} entries, one per f map, found {}", v.len());
            return Err(FormatError::Field {
                path: key.to_string(),
                message,
            });
        }
    }
    if m == 0 || (g_mats.len() != m - 1 && g_mats.len() != m) {
        let message = format!("expected {} or {m} g maps for {m} f maps, found {}", m.saturating_sub(1), g_mats.len());
        return Err(field(&root.key("g_mats"), message));
    }
    let k_indices = idx.pop().expect("two index lists");
    let i_indices = idx.pop().expect("two index lists");
    let mut cert = ConfluenceCertificate::new(i_indices, k_indices, f_mats, g_mats);
    if let Some(v) = obj.get("periodic") {
        let pp = root.key("periodic");
        let p = object(v, &pp, &["index_step_a", "index_step_b", "period_len"])?;
        cert = cert.with_period(CertificatePeriod {
            index_step_a: count(required(p, "index_step_a", &pp)?, &pp.key("index_step_a"))?,
            index_step_b: count(required(p, "index_step_b", &pp)?, &pp.key("index_step_b"))?,
            period_len: count(required(p, "period_len", &pp)?, &pp.key("period_len"))?,
        });
    }
    Ok(cert)
}

fn emit_matrix(out: &mut String, m: &Matrix<BigInt>) {
    if m.rows() == 0 || m.cols() == 0 {
        let _ = write!(out, "{{\"rows\": {}, \"cols\": {}, \"data\": []}}", m.rows(), m.cols());
    } else {
        let _ = write!(out, "{m}");
    }
}

fn emit_list<I: fmt::Display>(items: &[I]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn emit_matrices(out: &mut String, key: &str, ms: &[Matrix<BigInt>], last: bool) {
    let _ = write!(out, "  \"{key}\": [");
    for (n, m) in ms.iter().enumerate() {
        out.push_str(if n == 0 { "\n    " } else { ",\n    " });
        emit_matrix(out, m);
    }
    if !ms.is_empty() {
        out.push_str("\n  ");
    }
    out.push(']');
    out.push_str(if last { "\n" } else { ",\n" });
}

/// Canonical text of a diagram; [`parse_diagram_unchecked`] reads it back
/// unchanged.
pub fn emit_diagram(d: &Diagram) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"mode\": \"{}\",", d.mode());
    let _ = writeln!(out, "  \"mono\": {},", d.mono_required());
    let _ = writeln!(out, "  \"ranks\": {},", emit_list(d.ranks()));
    emit_matrices(&mut out, "transitions", d.transitions(), d.period().is_none());
    if let Some(p) = d.period() {
        let _ = writeln!(
            out,
            "  \"period\": {{\"prefix_len\": {}, \"period_len\": {}}}",
            p.prefix_len, p.period_len
        );
    }
    out.push_str("}\n");
    out
}

/// Canonical text of a certificate.
pub fn emit_certificate(c: &Certificate) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"i_indices\": {},", emit_list(&c.i_indices));
    let _ = writeln!(out, "  \"k_indices\": {},", emit_list(&c.k_indices));
    emit_matrices(&mut out, "f_mats", &c.f_mats, false);
    emit_matrices(&mut out, "g_mats", &c.g_mats, c.periodic.is_none());
    if let Some(p) = c.periodic {
        let _ = writeln!(
            out,
            "  \"periodic\": {{\"index_step_a\": {}, \"index_step_b\": {}, \"period_len\": {}}}",
            p.index_step_a, p.index_step_b, p.period_len
        );
    }
    out.push_str("}\n");
    out
}
