use std::fmt;

use super::certificate::ConfluenceCertificate;
use super::ConfluenceError;
use crate::diagram::{Mode, SequenceDiagram};
use crate::ints::{ExactInt, Matrix};

/// Which of the two diagrams a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// A certificate map, `f_n` or `g_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapName {
    F(usize),
    G(usize),
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapName::F(n) => write!(f, "f_{n}"),
            MapName::G(n) => write!(f, "g_{n}"),
        }
    }
}

/// The first reason a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    ModeMismatch,
    Depth(usize),
    IndexCount { side: Side, expected: usize, got: usize },
    GCount { expected: usize, got: usize },
    IndexOrder { side: Side, position: usize },
    Shape { map: MapName, expected: (usize, usize), got: (usize, usize) },
    Negative(MapName),
    /// `g_n f_n != a(i_n, i_{n+1})`
    Eq1 { level: usize, i: usize, next_i: usize },
    /// `f_{n+1} g_n != b(k_n, k_{n+1})`
    Eq2 { level: usize, k: usize, next_k: usize },
    DiagramNotPeriodic(Side),
    PeriodLength(usize),
    MissingLastG,
    StepNotMultiple(Side),
    RepeatInPrefix(Side),
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::ModeMismatch => write!(f, "diagrams have different modes"),
            VerifyFailure::Depth(m) => write!(f, "depth {m} is below 2"),
            VerifyFailure::IndexCount { side, expected, got } => {
                write!(f, "{side}: expected {expected} stage indices, found {got}")
            }
            VerifyFailure::GCount { expected, got } => {
                write!(f, "expected {expected} g maps, found {got}")
            }
            VerifyFailure::IndexOrder { side, position } => {
                write!(f, "{side}: stage index {position} is not strictly increasing from 1")
            }
            VerifyFailure::Shape { map, expected, got } => write!(
                f,
                "{map} has shape {}x{}, expected {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            VerifyFailure::Negative(map) => write!(f, "{map} has a negative entry"),
            VerifyFailure::Eq1 { level, i, next_i } => {
                write!(f, "eq1 fails at n={level}: g_{level}*f_{level} != a({i},{next_i})")
            }
            VerifyFailure::Eq2 { level, k, next_k } => write!(
                f,
                "eq2 fails at n={level}: f_{}*g_{level} != b({k},{next_k})",
                level + 1
            ),
            VerifyFailure::DiagramNotPeriodic(side) => {
                write!(f, "periodic certificate needs a periodic diagram {side}")
            }
            VerifyFailure::PeriodLength(l) => write!(f, "certificate period length {l} is out of range"),
            VerifyFailure::MissingLastG => write!(f, "periodic certificate needs the last g map"),
            VerifyFailure::StepNotMultiple(side) => {
                write!(f, "{side}: index step is not a positive multiple of the diagram period")
            }
            VerifyFailure::RepeatInPrefix(side) => {
                write!(f, "{side}: repeating levels start inside the diagram's non-periodic prefix")
            }
        }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// Stored levels.
    pub levels: usize,
    /// Accepted as an infinite (periodic) certificate.
    pub infinite: bool,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }

    fn reject(levels: usize, failure: VerifyFailure) -> Self {
        VerifyReport {
            levels,
            infinite: false,
            failure: Some(failure),
        }
    }
}

fn check_map<T: ExactInt>(
    mode: Mode,
    name: MapName,
    m: &Matrix<T>,
    expected: (usize, usize),
) -> Option<VerifyFailure> {
    if m.shape() != expected {
        return Some(VerifyFailure::Shape {
            map: name,
            expected,
            got: m.shape(),
        });
    }
    if mode == Mode::Simplicial && !m.is_nonnegative() {
        return Some(VerifyFailure::Negative(name));
    }
    None
}

/// Checks a certificate against both diagrams.
///
/// Every stored level must satisfy both commutation equations exactly. A
/// periodic certificate over periodic diagrams is accepted as infinite once
/// one extra wrapped level also checks out, since every later level is then
/// a shifted copy of a checked one.
///
/// Stages past a non-periodic diagram's stored length are an error, not a
/// rejection.
pub fn verify_certificate<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    cert: &ConfluenceCertificate<T>,
) -> Result<VerifyReport, ConfluenceError> {
    let m = cert.depth();
    if a.mode() != b.mode() {
        return Ok(VerifyReport::reject(m, VerifyFailure::ModeMismatch));
    }
    let mode = a.mode();
    if m < 2 {
        return Ok(VerifyReport::reject(m, VerifyFailure::Depth(m)));
    }
    for (side, idx) in [(Side::A, &cert.i_indices), (Side::B, &cert.k_indices)] {
        if idx.len() != m {
            let failure = VerifyFailure::IndexCount {
                side,
                expected: m,
                got: idx.len(),
            };
            return Ok(VerifyReport::reject(m, failure));
        }
        let mut prev = 0;
        for (pos, &s) in idx.iter().enumerate() {
            if s <= prev {
                let failure = VerifyFailure::IndexOrder { side, position: pos + 1 };
                return Ok(VerifyReport::reject(m, failure));
            }
            prev = s;
        }
    }
    if cert.g_mats.len() != m - 1 && cert.g_mats.len() != m {
        let failure = VerifyFailure::GCount {
            expected: m - 1,
            got: cert.g_mats.len(),
        };
        return Ok(VerifyReport::reject(m, failure));
    }

    if let Some(p) = cert.periodic {
        if let Some(failure) = periodic_preconditions(a, b, cert, p) {
            return Ok(VerifyReport::reject(m, failure));
        }
    }
    // number of levels whose equations we check, wrapped level included
    let checked = if cert.periodic.is_some() { m + 1 } else { m };
    let last_i = cert.level(checked).map_or(cert.i_indices[m - 1], |l| l.i);
    let last_k = cert.level(checked).map_or(cert.k_indices[m - 1], |l| l.k);
    let a = a.extend_to(last_i)?;
    let b = b.extend_to(last_k)?;

    for n in 1..=checked {
        let l = cert.level(n).expect("level within checked range");
        let f_shape = (b.rank(l.k)?, a.rank(l.i)?);
        if let Some(failure) = check_map(mode, MapName::F(n), l.f, f_shape) {
            return Ok(VerifyReport::reject(m, failure));
        }
        let Some(g) = l.g else { continue };
        let expected = if n < checked {
            let next = cert.level(n + 1).expect("level within checked range");
            (a.rank(next.i)?, b.rank(l.k)?)
        } else if cert.periodic.is_none() {
            // unconstrained trailing g_M: only its domain is known
            (g.rows(), b.rank(l.k)?)
        } else {
            continue;
        };
        if let Some(failure) = check_map(mode, MapName::G(n), g, expected) {
            return Ok(VerifyReport::reject(m, failure));
        }
    }

    for n in 1..checked {
        let l = cert.level(n).expect("level within checked range");
        let next = cert.level(n + 1).expect("level within checked range");
        let g = l.g.expect("g_n present below the last level");
        if next.i <= l.i || next.k <= l.k {
            let (side, position) = if next.i <= l.i { (Side::A, n + 1) } else { (Side::B, n + 1) };
            return Ok(VerifyReport::reject(m, VerifyFailure::IndexOrder { side, position }));
        }
        if g * l.f != a.transition(l.i, next.i)? {
            let failure = VerifyFailure::Eq1 {
                level: n,
                i: l.i,
                next_i: next.i,
            };
            return Ok(VerifyReport::reject(m, failure));
        }
        if next.f * g != b.transition(l.k, next.k)? {
            let failure = VerifyFailure::Eq2 {
                level: n,
                k: l.k,
                next_k: next.k,
            };
            return Ok(VerifyReport::reject(m, failure));
        }
    }

    Ok(VerifyReport {
        levels: m,
        infinite: cert.periodic.is_some(),
        failure: None,
    })
}

fn periodic_preconditions<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    cert: &ConfluenceCertificate<T>,
    p: super::CertificatePeriod,
) -> Option<VerifyFailure> {
    let m = cert.depth();
    if p.period_len == 0 || p.period_len > m {
        return Some(VerifyFailure::PeriodLength(p.period_len));
    }
    if cert.g_mats.len() != m {
        return Some(VerifyFailure::MissingLastG);
    }
    let first_repeat = m - p.period_len;
    for (side, diagram, step, start) in [
        (Side::A, a, p.index_step_a, cert.i_indices[first_repeat]),
        (Side::B, b, p.index_step_b, cert.k_indices[first_repeat]),
    ] {
        let Some(dp) = diagram.period() else {
            return Some(VerifyFailure::DiagramNotPeriodic(side));
        };
        if step == 0 || dp.period_len == 0 || step % dp.period_len != 0 {
            return Some(VerifyFailure::StepNotMultiple(side));
        }
        // shifting by whole periods preserves a(i, j) once i is past the prefix
        if start <= dp.prefix_len {
            return Some(VerifyFailure::RepeatInPrefix(side));
        }
    }
    None
}
