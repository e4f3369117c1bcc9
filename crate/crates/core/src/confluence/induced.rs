use std::fmt;

use super::certificate::ConfluenceCertificate;
use super::verify::Side;
use super::ConfluenceError;
use crate::colimit::{equal_at, ColimitElement, Trilean};
use crate::diagram::SequenceDiagram;
use crate::ints::ExactInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `A -> B`, through the maps `f_n`.
    Forward,
    /// `B -> A`, through the maps `g_n`.
    Backward,
}

/// Image of a colimit element under the isomorphism a verified certificate
/// induces.
///
/// Forward, `(s, x)` goes to `(k_n, f_n a(s, i_n) x)` for the least `n` with
/// `i_n >= s`. Backward, `(s, y)` goes to `(i_{n+1}, g_n b(s, k_n) y)` for the
/// least `n` with `k_n >= s`. The certificate is not re-verified here.
pub fn induced_map<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    cert: &ConfluenceCertificate<T>,
    direction: Direction,
    e: &ColimitElement<T>,
) -> Result<ColimitElement<T>, ConfluenceError> {
    let (source, side) = match direction {
        Direction::Forward => (a, Side::A),
        Direction::Backward => (b, Side::B),
    };
    source.extend_to(e.stage)?.check_vector(e.stage, &e.vec)?;

    let beyond = || ConfluenceError::BeyondCertificate { side, stage: e.stage };
    let mut n = 1;
    loop {
        // strictly increasing indices reach any stage by level `stage`
        if n > e.stage.max(cert.depth()) {
            return Err(beyond());
        }
        let level = cert.level(n).ok_or_else(beyond)?;
        let target = match direction {
            Direction::Forward => level.i,
            Direction::Backward => level.k,
        };
        if target < e.stage {
            n += 1;
            continue;
        }
        let source = source.extend_to(target)?;
        let pushed = source.push(e.stage, target, &e.vec)?;
        return match direction {
            Direction::Forward => Ok(ColimitElement::new(level.k, level.f.checked_apply(&pushed)?)),
            Direction::Backward => {
                let g = level.g.ok_or_else(beyond)?;
                let next = cert.level(n + 1).ok_or_else(beyond)?;
                Ok(ColimitElement::new(next.i, g.checked_apply(&pushed)?))
            }
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundtripProblem {
    /// `equal_at` did not answer yes.
    NotEqual(Trilean),
    /// The element lies beyond what the certificate covers.
    Unmapped(String),
}

impl fmt::Display for RoundtripProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundtripProblem::NotEqual(t) => write!(f, "round trip not equal ({t})"),
            RoundtripProblem::Unmapped(why) => write!(f, "unmapped: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripFailure<T> {
    pub side: Side,
    pub element: ColimitElement<T>,
    pub problem: RoundtripProblem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport<T> {
    pub checked: usize,
    pub failures: Vec<RoundtripFailure<T>>,
}

impl<T> RoundtripReport<T> {
    pub fn all_yes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that going forward then backward returns every `A` sample, and
/// backward then forward every `B` sample, up to colimit equality.
///
/// `horizon` is raised to the stage of the round-trip image when that is
/// larger, since a verified certificate makes the two agree exactly there.
pub fn roundtrip_check<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    cert: &ConfluenceCertificate<T>,
    samples_a: &[ColimitElement<T>],
    samples_b: &[ColimitElement<T>],
    horizon: usize,
) -> RoundtripReport<T> {
    let mut failures = Vec::new();
    let runs = [
        (Side::A, samples_a, a, Direction::Forward, Direction::Backward),
        (Side::B, samples_b, b, Direction::Backward, Direction::Forward),
    ];
    for (side, samples, home, there, back) in runs {
        for e in samples {
            let result = induced_map(a, b, cert, there, e)
                .and_then(|img| induced_map(a, b, cert, back, &img))
                .and_then(|round| {
                    let h = horizon.max(round.stage).max(e.stage);
                    Ok(equal_at(home, &round, e, h)?)
                });
            let problem = match result {
                Ok(Trilean::Yes(_)) => continue,
                Ok(other) => RoundtripProblem::NotEqual(other),
                Err(err) => RoundtripProblem::Unmapped(err.to_string()),
            };
            failures.push(RoundtripFailure {
                side,
                element: e.clone(),
                problem,
            });
        }
    }
    RoundtripReport {
        checked: samples_a.len() + samples_b.len(),
        failures,
    }
}

/// Whether two certificates induce the same map `A -> B` on the generators
/// of stages `1..=stages`, comparing images up to `horizon`.
pub fn induced_maps_agree<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    first: &ConfluenceCertificate<T>,
    second: &ConfluenceCertificate<T>,
    stages: usize,
    horizon: usize,
) -> Result<bool, ConfluenceError> {
    let a_ext = a.extend_to(stages)?;
    for s in 1..=stages {
        let r = a_ext.rank(s)?;
        for j in 0..r {
            let mut v = vec![T::zero(); r];
            v[j] = T::one();
            let e = ColimitElement::new(s, v);
            let x = induced_map(a, b, first, Direction::Forward, &e)?;
            let y = induced_map(a, b, second, Direction::Forward, &e)?;
            let h = horizon.max(x.stage).max(y.stage);
            if !equal_at(b, &x, &y, h)?.is_yes() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
