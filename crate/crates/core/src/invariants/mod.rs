//! Invariants that can tell colimits apart when no certificate turns up:
//! the rank of the colimit and, for rank-1 sequences, the supernatural
//! number recording how far each prime divides into the colimit.

mod supernatural;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::{DiagramError, Mode, SequenceDiagram};
use crate::ints::{ExactInt, Matrix};

pub use supernatural::{Exponent, SupernaturalNumber};

/// Smallest per-prime exponent gap over equal prefixes reported as
/// indicative.
pub const INDICATIVE_GAP: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("colimit rank of a non-injective diagram is not determined by a finite prefix without a period")]
    NotMono,
    #[error("stage {stage} has rank {rank}, expected rank 1")]
    NotRankOne { stage: usize, rank: usize },
    #[error("transition {transition} is zero")]
    ZeroMultiplier { transition: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColimitRank {
    pub rank: usize,
    /// The rank is that of the whole colimit, not just the stored prefix.
    pub stabilized: bool,
}

/// Rank of the colimit, i.e. its dimension after tensoring with the
/// rationals.
///
/// For injective transitions this is the last stored rank, final when a
/// period is declared. A non-injective periodic diagram gets the eventual
/// rank of the period product `P`, which is the rank of `P^r` for `P` of
/// size `r`.
pub fn colimit_rank<T: ExactInt>(seq: &SequenceDiagram<T>) -> Result<ColimitRank, InvariantError> {
    if seq.mono_required() {
        let rank = *seq.ranks().last().ok_or(DiagramError::StageOutOfRange { stage: 1, len: 0 })?;
        return Ok(ColimitRank {
            rank,
            stabilized: seq.is_periodic(),
        });
    }
    let p = seq.period().ok_or(InvariantError::NotMono)?;
    let start = p.prefix_len + 1;
    let seq = seq.extend_to(start + p.period_len)?;
    let product = to_big(&seq.transition(start, start + p.period_len)?);
    let mut power = Matrix::identity(product.rows());
    for _ in 0..product.rows() {
        power = &product * &power;
    }
    Ok(ColimitRank {
        rank: power.rank(),
        stabilized: true,
    })
}

fn to_big<T: ExactInt>(m: &Matrix<T>) -> Matrix<BigInt> {
    Matrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)].to_bigint().expect("integer"))
}

fn multipliers<T: ExactInt>(seq: &SequenceDiagram<T>) -> Result<Vec<BigUint>, InvariantError> {
    for (idx, &rank) in seq.ranks().iter().enumerate() {
        if rank != 1 {
            return Err(InvariantError::NotRankOne { stage: idx + 1, rank });
        }
    }
    seq.transitions()
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let v = m[(0, 0)].to_bigint().expect("integer");
            if v.is_zero() {
                Err(InvariantError::ZeroMultiplier { transition: idx + 1 })
            } else {
                Ok(v.abs().magnitude().clone())
            }
        })
        .collect()
}

fn product_of(ms: &[BigUint]) -> SupernaturalNumber {
    ms.iter()
        .fold(SupernaturalNumber::one(), |acc, m| acc.multiply(&SupernaturalNumber::of(m)))
}

/// Supernatural number of a rank-1 sequence with nonzero multipliers `m_t`:
/// the exponent of `p` is the sum of the `p`-adic valuations of the `m_t`.
///
/// With a period, every prime dividing the period product divides
/// infinitely often and gets exponent infinity; the other primes only occur
/// in the prefix. Without a period the value covers the stored transitions.
pub fn steinitz<T: ExactInt>(seq: &SequenceDiagram<T>) -> Result<SupernaturalNumber, InvariantError> {
    let ms = multipliers(seq)?;
    let Some(p) = seq.period() else {
        return Ok(product_of(&ms));
    };
    let prefix = p.prefix_len.min(ms.len());
    let period_end = (p.prefix_len + p.period_len).min(ms.len());
    let mut s = product_of(&ms[..prefix]);
    let repeating = product_of(&ms[prefix..period_end]);
    for (q, _) in repeating.iter() {
        s.set(q.clone(), Exponent::Infinite);
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strength {
    /// Proves the colimits are not isomorphic.
    Conclusive,
    /// Read off finite prefixes only.
    Indicative,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Conclusive => "CONCLUSIVE",
            Strength::Indicative => "INDICATIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub strength: Strength,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvidenceReport {
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
}

impl EvidenceReport {
    pub fn is_empty(&self) -> bool {
        self.evidence.is_empty()
    }

    pub fn is_conclusive(&self) -> bool {
        self.evidence.iter().any(|e| e.strength == Strength::Conclusive)
    }

    fn push(&mut self, strength: Strength, detail: String) {
        self.evidence.push(Evidence { strength, detail });
    }
}

pub const PREFIX_DISCLAIMER: &str =
    "indicative evidence comes from finite prefixes and cannot rule out isomorphic colimits";
pub const ORDER_CAVEAT: &str =
    "simplicial rank-1 diagrams are compared as groups; the order is not compared";

/// Facts distinguishing the colimits of `a` and `b`. An empty report means
/// nothing was found, not that the colimits are isomorphic.
pub fn noniso_evidence<T: ExactInt>(a: &SequenceDiagram<T>, b: &SequenceDiagram<T>) -> EvidenceReport {
    let mut report = EvidenceReport::default();
    if let (Ok(ra), Ok(rb)) = (colimit_rank(a), colimit_rank(b)) {
        if ra.rank != rb.rank {
            let detail = format!("colimit rank {} vs {}", ra.rank, rb.rank);
            if ra.stabilized && rb.stabilized {
                report.push(Strength::Conclusive, detail);
            } else {
                report.push(Strength::Indicative, format!("{detail} on the stored prefixes"));
            }
        }
    }
    if a.is_rank_one() && b.is_rank_one() {
        rank_one_evidence(a, b, &mut report);
        if a.mode() == Mode::Simplicial || b.mode() == Mode::Simplicial {
            report.notes.push(ORDER_CAVEAT.to_string());
        }
    }
    if report.evidence.iter().any(|e| e.strength == Strength::Indicative) {
        report.notes.push(PREFIX_DISCLAIMER.to_string());
    }
    report
}

fn rank_one_evidence<T: ExactInt>(a: &SequenceDiagram<T>, b: &SequenceDiagram<T>, report: &mut EvidenceReport) {
    if a.is_periodic() && b.is_periodic() {
        if let (Ok(sa), Ok(sb)) = (steinitz(a), steinitz(b)) {
            if !sa.equivalent(&sb) {
                let detail = format!("supernatural numbers {sa} vs {sb} are inequivalent");
                report.push(Strength::Conclusive, detail);
            }
        }
        return;
    }
    let (Ok(ma), Ok(mb)) = (multipliers(a), multipliers(b)) else {
        return;
    };
    let n = ma.len().min(mb.len());
    let (sa, sb) = (product_of(&ma[..n]), product_of(&mb[..n]));
    let primes: std::collections::BTreeSet<&BigUint> = sa.iter().chain(sb.iter()).map(|(p, _)| p).collect();
    for p in primes {
        let (Exponent::Finite(x), Exponent::Finite(y)) = (sa.exponent(p), sb.exponent(p)) else {
            continue;
        };
        if x.abs_diff(y) >= INDICATIVE_GAP {
            let detail = format!("exponent of {p} over the first {n} transitions: {x} vs {y}");
            report.push(Strength::Indicative, detail);
        }
    }
}
