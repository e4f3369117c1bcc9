//! Sequences `Z^{r_1} -> Z^{r_2} -> ...` of free abelian (or simplicial)
//! groups and the composite transition maps between their stages.
//!
//! Stages are numbered from 1. Transition `t` is the map `a_t` from stage `t`
//! to stage `t + 1`, an `r_{t+1} x r_t` matrix. A diagram stores a finite
//! prefix; a [`Period`] declares that the transitions repeat forever, which is
//! the only way to state anything about the infinite tail.

use std::borrow::Cow;
use std::fmt;

use thiserror::Error;

use crate::ints::{ExactInt, Matrix};

/// Plain abelian groups, or simplicial groups with the pointwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    Simplicial,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Simplicial => "simplicial",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// After `prefix_len` transitions, the transitions repeat with period
/// `period_len`: `a_t = a_{t - period_len}` whenever `t > prefix_len + period_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Period {
    pub prefix_len: usize,
    pub period_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("stage {stage} is outside the stored stages 1..={len}")]
    StageOutOfRange { stage: usize, len: usize },
    #[error("stages out of order: {from} > {to}")]
    Reversed { from: usize, to: usize },
    #[error("vector of length {got} at stage {stage}, whose rank is {rank}")]
    VectorLength { stage: usize, rank: usize, got: usize },
    #[error("horizon {horizon} is below the stored length {len}")]
    HorizonTooShort { horizon: usize, len: usize },
    #[error("diagram has no period declaration; cannot extend past stage {len}")]
    NotPeriodic { len: usize },
    #[error("diagram is invalid: {0}")]
    Invalid(ValidationReport),
}

/// A sequence of ranks and transition matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDiagram<T> {
    mode: Mode,
    ranks: Vec<usize>,
    transitions: Vec<Matrix<T>>,
    mono_required: bool,
    period: Option<Period>,
}

/// One broken invariant of a diagram. Transition numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStages,
    TransitionCount { expected: usize, got: usize },
    Shape { transition: usize, expected: (usize, usize), got: (usize, usize) },
    NegativeEntry { transition: usize },
    NonInjective { transition: usize },
    ZeroPeriod,
    PeriodNotCovered { needed: usize, stored: usize },
    PeriodRank { stage: usize },
    PeriodTransition { transition: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStages => write!(f, "diagram has no stages"),
            Violation::TransitionCount { expected, got } => {
                write!(f, "expected {expected} transitions, found {got}")
            }
            Violation::Shape { transition, expected, got } => write!(
                f,
                "shape mismatch at transition {transition}: expected {}x{}, found {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Violation::NegativeEntry { transition } => write!(f, "negative entry at transition {transition}"),
            Violation::NonInjective { transition } => write!(f, "non-injective transition {transition}"),
            Violation::ZeroPeriod => write!(f, "period length must be at least 1"),
            Violation::PeriodNotCovered { needed, stored } => write!(
                f,
                "period needs {needed} stored transitions, found {stored}"
            ),
            Violation::PeriodRank { stage } => write!(f, "rank at stage {stage} breaks the period"),
            Violation::PeriodTransition { transition } => {
                write!(f, "transition {transition} breaks the period")
            }
        }
    }
}

/// Every invariant a diagram violates; empty when the diagram is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl<T: ExactInt> SequenceDiagram<T> {
    /// Unchecked constructor; call [`validate`](Self::validate) or use
    /// [`checked`](Self::checked) before relying on the invariants.
    pub fn new(mode: Mode, ranks: Vec<usize>, transitions: Vec<Matrix<T>>) -> Self {
        SequenceDiagram {
            mode,
            ranks,
            transitions,
            mono_required: false,
            period: None,
        }
    }

    /// Rank-1 diagram `Z -> Z -> ...` multiplying by the given scalars.
    pub fn scalar(mode: Mode, multipliers: Vec<T>) -> Self {
        let ranks = vec![1; multipliers.len() + 1];
        let transitions = multipliers
            .into_iter()
            .map(|m| Matrix::new(1, 1, vec![m]).expect("1x1"))
            .collect();
        Self::new(mode, ranks, transitions)
    }

    /// Stationary diagram repeating the square matrix `m`, stored for two
    /// stages with a period of one.
    pub fn stationary(mode: Mode, m: Matrix<T>) -> Self {
        let r = m.rows();
        Self::new(mode, vec![m.cols(), r], vec![m]).with_period(Period {
            prefix_len: 0,
            period_len: 1,
        })
    }

    pub fn with_mono(mut self, mono: bool) -> Self {
        self.mono_required = mono;
        self
    }

    pub fn with_period(mut self, period: Period) -> Self {
        self.period = Some(period);
        self
    }

    pub fn without_period(mut self) -> Self {
        self.period = None;
        self
    }

    /// Validates and returns the diagram, or the violations.
    pub fn checked(self) -> Result<Self, DiagramError> {
        let report = self.validate();
        if report.is_clean() {
            Ok(self)
        } else {
            Err(DiagramError::Invalid(report))
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn mono_required(&self) -> bool {
        self.mono_required
    }

    pub fn period(&self) -> Option<Period> {
        self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// Number of stored stages.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn transitions(&self) -> &[Matrix<T>] {
        &self.transitions
    }

    /// Rank of `stage` (1-based).
    pub fn rank(&self, stage: usize) -> Result<usize, DiagramError> {
        self.check_stage(stage)?;
        Ok(self.ranks[stage - 1])
    }

    /// The single-step map from `stage` to `stage + 1`.
    pub fn step(&self, stage: usize) -> Result<&Matrix<T>, DiagramError> {
        self.check_stage(stage + 1)?;
        self.check_stage(stage)?;
        Ok(&self.transitions[stage - 1])
    }

    pub fn is_rank_one(&self) -> bool {
        self.ranks.iter().all(|&r| r == 1)
    }

    pub fn max_entry(&self) -> T {
        self.transitions
            .iter()
            .map(Matrix::max_abs)
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    fn check_stage(&self, stage: usize) -> Result<(), DiagramError> {
        if stage == 0 || stage > self.len() {
            return Err(DiagramError::StageOutOfRange { stage, len: self.len() });
        }
        Ok(())
    }

    /// Lists every violated invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.ranks.is_empty() {
            violations.push(Violation::NoStages);
        }
        let expected = self.ranks.len().saturating_sub(1);
        if self.transitions.len() != expected {
            violations.push(Violation::TransitionCount {
                expected,
                got: self.transitions.len(),
            });
        }
        for (idx, m) in self.transitions.iter().enumerate() {
            let t = idx + 1;
            let shape_ok = match (self.ranks.get(idx), self.ranks.get(idx + 1)) {
                (Some(&from), Some(&to)) => {
                    if m.shape() != (to, from) {
                        violations.push(Violation::Shape {
                            transition: t,
                            expected: (to, from),
                            got: m.shape(),
                        });
                        false
                    } else {
                        true
                    }
                }
                _ => false,
            };
            if self.mode == Mode::Simplicial && !m.is_nonnegative() {
                violations.push(Violation::NegativeEntry { transition: t });
            }
            if self.mono_required && shape_ok && !m.is_injective() {
                violations.push(Violation::NonInjective { transition: t });
            }
        }
        if let Some(p) = self.period {
            self.validate_period(p, &mut violations);
        }
        ValidationReport { violations }
    }

    fn validate_period(&self, p: Period, out: &mut Vec<Violation>) {
        if p.period_len == 0 {
            out.push(Violation::ZeroPeriod);
            return;
        }
        let needed = p.prefix_len + p.period_len;
        if self.transitions.len() < needed {
            out.push(Violation::PeriodNotCovered {
                needed,
                stored: self.transitions.len(),
            });
            return;
        }
        for idx in needed..self.ranks.len() {
            if self.ranks[idx] != self.ranks[idx - p.period_len] {
                out.push(Violation::PeriodRank { stage: idx + 1 });
            }
        }
        for idx in needed..self.transitions.len() {
            if self.transitions[idx] != self.transitions[idx - p.period_len] {
                out.push(Violation::PeriodTransition { transition: idx + 1 });
            }
        }
    }

    /// The composite `a_{ij} = a_{j-1} ... a_i`; the identity when `i == j`.
    pub fn transition(&self, i: usize, j: usize) -> Result<Matrix<T>, DiagramError> {
        if i > j {
            return Err(DiagramError::Reversed { from: i, to: j });
        }
        self.check_stage(i)?;
        self.check_stage(j)?;
        let mut acc = Matrix::identity(self.ranks[i - 1]);
        for t in i..j {
            acc = self.transitions[t - 1]
                .checked_mul(&acc)
                .map_err(|_| DiagramError::Invalid(self.validate()))?;
        }
        Ok(acc)
    }

    /// Pushes the vector `x` at stage `i` forward to stage `j`.
    pub fn push(&self, i: usize, j: usize, x: &[T]) -> Result<Vec<T>, DiagramError> {
        if i > j {
            return Err(DiagramError::Reversed { from: i, to: j });
        }
        self.check_vector(i, x)?;
        self.check_stage(j)?;
        let mut v = x.to_vec();
        for t in i..j {
            v = self.transitions[t - 1]
                .checked_apply(&v)
                .map_err(|_| DiagramError::Invalid(self.validate()))?;
        }
        Ok(v)
    }

    pub(crate) fn check_vector(&self, stage: usize, x: &[T]) -> Result<(), DiagramError> {
        let rank = self.rank(stage)?;
        if x.len() != rank {
            return Err(DiagramError::VectorLength {
                stage,
                rank,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Stores stages up to `horizon`, generating them from the period when
    /// needed. The period declaration is kept. A no-op when `horizon` is
    /// within the stored stages.
    pub fn extend_to(&self, horizon: usize) -> Result<Cow<'_, Self>, DiagramError> {
        if horizon <= self.len() {
            return Ok(Cow::Borrowed(self));
        }
        let Some(p) = self.period else {
            return Err(DiagramError::NotPeriodic { len: self.len() });
        };
        if p.period_len == 0 || self.transitions.len() < p.prefix_len + p.period_len {
            return Err(DiagramError::Invalid(self.validate()));
        }
        let mut out = self.clone();
        while out.ranks.len() < horizon {
            let idx = out.transitions.len();
            let m = out.transitions[idx - p.period_len].clone();
            out.ranks.push(m.rows());
            out.transitions.push(m);
        }
        Ok(Cow::Owned(out))
    }

    /// Non-periodic diagram with exactly `horizon` stages repeating the
    /// period. Non-periodic input is returned unchanged when `horizon` equals
    /// its length.
    pub fn unroll(&self, horizon: usize) -> Result<Self, DiagramError> {
        if horizon < self.len() {
            return Err(DiagramError::HorizonTooShort {
                horizon,
                len: self.len(),
            });
        }
        if self.period.is_none() {
            return if horizon == self.len() {
                Ok(self.clone())
            } else {
                Err(DiagramError::NotPeriodic { len: self.len() })
            };
        }
        Ok(self.extend_to(horizon)?.into_owned().without_period())
    }

    /// Whether stage `stage` is available, possibly after extension.
    pub fn reaches(&self, stage: usize) -> bool {
        stage >= 1 && (stage <= self.len() || self.period.is_some())
    }
}
