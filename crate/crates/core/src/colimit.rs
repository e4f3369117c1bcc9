//! Elements of the colimit group of a sequence, represented by a stage and a
//! vector, and the stage-bounded queries on them.
//!
//! A stored prefix can confirm facts that hold at some finite stage but can
//! never refute a fact that might hold later. Queries therefore answer with a
//! [`Trilean`]: `Yes` with the least witnessing stage, `Unknown` with the
//! horizon searched, and `No` only when injectivity of the transitions makes
//! a later witness impossible.
//!
//! Periodic diagrams are extended on demand, so horizons beyond the stored
//! stages are fine for them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{DiagramError, Mode, SequenceDiagram};
use crate::ints::{ExactInt, Matrix};

/// The element `alpha_stage(vec)` of the colimit. `(i, x)` and
/// `(j, a_{ij} x)` represent the same element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColimitElement<T> {
    pub stage: usize,
    pub vec: Vec<T>,
}

impl<T: ExactInt> ColimitElement<T> {
    pub fn new(stage: usize, vec: Vec<T>) -> Self {
        ColimitElement { stage, vec }
    }

    pub fn from_i64(stage: usize, vec: &[i64]) -> Self {
        Self::new(stage, vec.iter().map(|&v| crate::ints::int(v)).collect())
    }
}

/// `stage:x1,x2,...`, the element syntax of the command line.
impl<T: fmt::Display> fmt::Display for ColimitElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.stage)?;
        for (n, v) in self.vec.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse element {0:?}: expected stage:x1,x2,...")]
pub struct ParseElementError(String);

impl<T: ExactInt> FromStr for ColimitElement<T> {
    type Err = ParseElementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseElementError(s.to_string());
        let (stage, rest) = s.split_once(':').ok_or_else(err)?;
        let stage: usize = stage.trim().parse().map_err(|_| err())?;
        let rest = rest.trim();
        let vec = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| T::from_str_radix(p.trim(), 10).map_err(|_| err()))
                .collect::<Result<_, _>>()?
        };
        Ok(ColimitElement { stage, vec })
    }
}

/// Truncation-honest answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trilean {
    /// Holds; carries the least witnessing stage.
    Yes(usize),
    /// Cannot hold at any stage.
    No,
    /// No witness up to the carried horizon.
    Unknown(usize),
}

impl Trilean {
    pub fn is_yes(self) -> bool {
        matches!(self, Trilean::Yes(_))
    }
}

impl fmt::Display for Trilean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trilean::Yes(k) => write!(f, "yes {k}"),
            Trilean::No => write!(f, "no"),
            Trilean::Unknown(h) => write!(f, "unknown {h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("horizon {horizon} is below stage {stage}")]
    HorizonBelowStage { horizon: usize, stage: usize },
    #[error("map p has shape {got:?}, expected {expected:?}")]
    MapShape { expected: (usize, usize), got: (usize, usize) },
    #[error("positive cone queries need a simplicial diagram")]
    NotSimplicial,
    #[error("divisor must be at least 1")]
    ZeroDivisor,
    #[error("no images to factor")]
    NoImages,
}

fn check_horizon(horizon: usize, stage: usize) -> Result<(), ColimitError> {
    if horizon < stage {
        return Err(ColimitError::HorizonBelowStage { horizon, stage });
    }
    Ok(())
}

/// Walks the pushforwards of `x` from `stage` up to `horizon`, returning the
/// first stage where `found` holds.
fn scan<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    stage: usize,
    x: &[T],
    horizon: usize,
    mut found: impl FnMut(&[T]) -> bool,
) -> Result<Option<(usize, Vec<T>)>, ColimitError> {
    check_horizon(horizon, stage)?;
    let seq = seq.extend_to(horizon)?;
    seq.check_vector(stage, x)?;
    let mut v = x.to_vec();
    for k in stage..=horizon {
        if k > stage {
            v = seq.step(k - 1)?.apply(&v);
        }
        if found(&v) {
            return Ok(Some((k, v)));
        }
    }
    Ok(None)
}

/// Whether `e1` and `e2` are the same colimit element, witnessed by a stage
/// `k <= horizon` where their pushforwards agree.
pub fn equal_at<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    e1: &ColimitElement<T>,
    e2: &ColimitElement<T>,
    horizon: usize,
) -> Result<Trilean, ColimitError> {
    let start = e1.stage.max(e2.stage);
    check_horizon(horizon, start)?;
    let seq = seq.extend_to(horizon)?;
    let mut x = seq.push(e1.stage, start, &e1.vec)?;
    let mut y = seq.push(e2.stage, start, &e2.vec)?;
    for k in start..=horizon {
        if k > start {
            let step = seq.step(k - 1)?;
            x = step.apply(&x);
            y = step.apply(&y);
        }
        if x == y {
            return Ok(Trilean::Yes(k));
        }
        if seq.mono_required() {
            return Ok(Trilean::No);
        }
    }
    Ok(Trilean::Unknown(horizon))
}

/// Least `i0` in `[j, horizon]` with `a_{j i0} p = a_{i i0}`, for a map
/// `p: A_i -> A_j` with `i <= j`.
pub fn eventual_equalizer<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    i: usize,
    j: usize,
    p: &Matrix<T>,
    horizon: usize,
) -> Result<Trilean, ColimitError> {
    if i > j {
        return Err(DiagramError::Reversed { from: i, to: j }.into());
    }
    check_horizon(horizon, j)?;
    let seq = seq.extend_to(horizon)?;
    let expected = (seq.rank(j)?, seq.rank(i)?);
    if p.shape() != expected {
        return Err(ColimitError::MapShape {
            expected,
            got: p.shape(),
        });
    }
    let mut lhs = p.clone();
    let mut rhs = seq.transition(i, j)?;
    for k in j..=horizon {
        if k > j {
            let step = seq.step(k - 1)?;
            lhs = step * &lhs;
            rhs = step * &rhs;
        }
        if lhs == rhs {
            return Ok(Trilean::Yes(k));
        }
        if seq.mono_required() {
            return Ok(Trilean::No);
        }
    }
    Ok(Trilean::Unknown(horizon))
}

/// Factors the map `Z^n -> colimit` sending the `k`-th basis vector to
/// `images[k]` through a single stage.
///
/// Returns the least stage `i0 <= horizon` and the matrix `g` whose column `k`
/// represents `images[k]` at `i0`. In simplicial mode `i0` is advanced until
/// every column is nonnegative, so that `g` is order-preserving; `None` when
/// that does not happen by `horizon`.
pub fn factor_through_stage<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    images: &[ColimitElement<T>],
    horizon: usize,
) -> Result<Option<(usize, Matrix<T>)>, ColimitError> {
    let start = images.iter().map(|e| e.stage).max().ok_or(ColimitError::NoImages)?;
    check_horizon(horizon, start)?;
    let seq = seq.extend_to(horizon)?;
    let mut columns = images
        .iter()
        .map(|e| seq.push(e.stage, start, &e.vec))
        .collect::<Result<Vec<_>, _>>()?;
    for k in start..=horizon {
        if k > start {
            let step = seq.step(k - 1)?;
            for c in &mut columns {
                *c = step.apply(c);
            }
        }
        if seq.mode() == Mode::Plain || columns.iter().all(|c| !c.iter().any(T::is_negative)) {
            let g = Matrix::from_columns(seq.rank(k)?, &columns).expect("columns have the stage rank");
            return Ok(Some((k, g)));
        }
    }
    Ok(None)
}

/// Membership of `e` in the positive cone, the union of the images of the
/// stage cones.
pub fn cone_member<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    e: &ColimitElement<T>,
    horizon: usize,
) -> Result<Trilean, ColimitError> {
    if seq.mode() != Mode::Simplicial {
        return Err(ColimitError::NotSimplicial);
    }
    let hit = scan(seq, e.stage, &e.vec, horizon, |v| !v.iter().any(T::is_negative))?;
    Ok(hit.map_or(Trilean::Unknown(horizon), |(k, _)| Trilean::Yes(k)))
}

/// Divisibility of `e` by `m` in the colimit, witnessed by a stage where the
/// pushforward is divisible by `m` in every coordinate.
///
/// Never answers `No`: a later transition may always introduce the factor.
pub fn divisible<T: ExactInt>(
    seq: &SequenceDiagram<T>,
    e: &ColimitElement<T>,
    m: &T,
    horizon: usize,
) -> Result<Trilean, ColimitError> {
    if *m < T::one() {
        return Err(ColimitError::ZeroDivisor);
    }
    let hit = scan(seq, e.stage, &e.vec, horizon, |v| v.iter().all(|x| x.is_multiple_of(m)))?;
    Ok(hit.map_or(Trilean::Unknown(horizon), |(k, _)| Trilean::Yes(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Period;

    type D = SequenceDiagram<i64>;
    type M = Matrix<i64>;
    type E = ColimitElement<i64>;

    fn times(m: i64) -> D {
        D::stationary(Mode::Simplicial, M::from_i64_rows(&[&[m]]))
    }

    fn fib() -> D {
        D::stationary(Mode::Simplicial, M::from_i64_rows(&[&[1, 1], &[1, 0]]))
    }

    #[test]
    fn element_syntax() {
        let e: E = "3:1,-2".parse().unwrap();
        assert_eq!(e, E::from_i64(3, &[1, -2]));
        assert_eq!(e.to_string(), "3:1,-2");
        let empty: E = "2:".parse().unwrap();
        assert!(empty.vec.is_empty());
        assert!("x:1".parse::<E>().is_err());
        assert!("1:1.5".parse::<E>().is_err());
    }

    #[test]
    fn equality() {
        let d = times(2);
        assert_eq!(equal_at(&d, &E::from_i64(1, &[1]), &E::from_i64(2, &[2]), 5).unwrap(), Trilean::Yes(2));
        let mono = times(2).with_mono(true);
        assert_eq!(equal_at(&mono, &E::from_i64(1, &[1]), &E::from_i64(1, &[2]), 5).unwrap(), Trilean::No);
        assert_eq!(equal_at(&d, &E::from_i64(1, &[1]), &E::from_i64(1, &[2]), 5).unwrap(), Trilean::Unknown(5));
        let zero = D::scalar(Mode::Plain, vec![0, 1]);
        assert_eq!(equal_at(&zero, &E::from_i64(1, &[1]), &E::from_i64(1, &[0]), 3).unwrap(), Trilean::Yes(2));
    }

    #[test]
    fn equality_errors() {
        let d = D::scalar(Mode::Plain, vec![2]);
        assert!(matches!(
            equal_at(&d, &E::from_i64(1, &[1]), &E::from_i64(1, &[1]), 4),
            Err(ColimitError::Diagram(DiagramError::NotPeriodic { .. }))
        ));
        assert!(matches!(
            equal_at(&d, &E::from_i64(2, &[1]), &E::from_i64(1, &[1]), 1),
            Err(ColimitError::HorizonBelowStage { .. })
        ));
        assert!(matches!(
            equal_at(&d, &E::from_i64(1, &[1, 2]), &E::from_i64(1, &[1]), 2),
            Err(ColimitError::Diagram(DiagramError::VectorLength { .. }))
        ));
    }

    #[test]
    fn equalizers() {
        let d = times(2);
        let p = d.transition(1, 2).unwrap();
        assert_eq!(eventual_equalizer(&d, 1, 2, &p, 6).unwrap(), Trilean::Yes(2));

        let zeros = D::scalar(Mode::Plain, vec![0]).with_period(Period {
            prefix_len: 0,
            period_len: 1,
        });
        assert_eq!(
            eventual_equalizer(&zeros, 1, 1, &M::from_i64_rows(&[&[3]]), 4).unwrap(),
            Trilean::Yes(2)
        );
        let mono = times(2).with_mono(true);
        assert_eq!(eventual_equalizer(&mono, 1, 1, &M::from_i64_rows(&[&[5]]), 8).unwrap(), Trilean::No);
        assert!(matches!(
            eventual_equalizer(&mono, 1, 1, &M::identity(2), 8),
            Err(ColimitError::MapShape { .. })
        ));
    }

    #[test]
    fn factorization() {
        let d = D::scalar(Mode::Simplicial, vec![1, 1, 1]);
        let (stage, g) = factor_through_stage(&d, &[E::from_i64(3, &[2]), E::from_i64(3, &[5])], 4)
            .unwrap()
            .unwrap();
        assert_eq!((stage, g), (3, M::from_i64_rows(&[&[2, 5]])));

        let d = times(2);
        let (stage, g) = factor_through_stage(&d, &[E::from_i64(2, &[1]), E::from_i64(3, &[4])], 6)
            .unwrap()
            .unwrap();
        assert_eq!((stage, g), (3, M::from_i64_rows(&[&[2, 4]])));

        let (stage, g) = factor_through_stage(&fib(), &[E::from_i64(1, &[1, -1])], 5).unwrap().unwrap();
        assert_eq!((stage, g), (2, M::from_i64_rows(&[&[0], &[1]])));

        assert!(factor_through_stage(&times(2), &[E::from_i64(1, &[-1])], 6).unwrap().is_none());
        assert_eq!(factor_through_stage(&times(2), &[], 6), Err(ColimitError::NoImages));
    }

    #[test]
    fn positive_cone() {
        assert_eq!(cone_member(&times(2), &E::from_i64(1, &[1]), 4).unwrap(), Trilean::Yes(1));
        assert_eq!(cone_member(&times(2), &E::from_i64(1, &[-1]), 9).unwrap(), Trilean::Unknown(9));
        assert_eq!(cone_member(&fib(), &E::from_i64(1, &[1, -1]), 4).unwrap(), Trilean::Yes(2));
        let plain = D::scalar(Mode::Plain, vec![2]);
        assert_eq!(cone_member(&plain, &E::from_i64(1, &[1]), 2), Err(ColimitError::NotSimplicial));
    }

    #[test]
    fn divisibility() {
        assert_eq!(divisible(&times(3), &E::from_i64(2, &[7]), &1, 2).unwrap(), Trilean::Yes(2));
        assert_eq!(divisible(&times(2), &E::from_i64(1, &[1]), &2, 5).unwrap(), Trilean::Yes(2));
        assert_eq!(divisible(&times(3), &E::from_i64(1, &[1]), &2, 10).unwrap(), Trilean::Unknown(10));
        assert_eq!(divisible(&times(3), &E::from_i64(1, &[1]), &0, 10), Err(ColimitError::ZeroDivisor));
    }
}
