//! Bounded back-and-forth search for confluence certificates.
//!
//! The search mirrors the inductive construction of a confluence from an
//! isomorphism: pick `i_1` and a seed `f_1`, then alternately solve
//! `g_n f_n = a(i_n, i_{n+1})` for `g_n` and `f_{n+1} g_n = b(k_n, k_{n+1})`
//! for `f_{n+1}`, each a linear system `X K = T` over the integers. Each
//! equation is imposed exactly at the chosen stage; because every later stage
//! is also tried, pushing a map forward until it equalizes costs nothing
//! extra.
//!
//! Stages are tried in increasing order and candidate maps smallest first
//! (by sum of absolute entries, then lexicographically with
//! `0 < 1 < -1 < 2 < -2 < ...`), so the answer is deterministic and favours
//! small certificates. A failed search says nothing about isomorphism.

use std::borrow::Cow;
use std::cmp::Ordering;

use thiserror::Error;

use super::certificate::ConfluenceCertificate;
use crate::diagram::{DiagramError, Mode, SequenceDiagram};
use crate::ints::{Constraint, ExactInt, Matrix, MatrixEquation};

/// Limits on the search space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Number of levels (maps `f_n`) in the certificate, at least 2.
    pub depth: usize,
    /// Largest absolute value allowed in any `f_n`, `g_n`.
    pub entry_bound: u64,
    /// Last stage considered on either side.
    pub stage_horizon: usize,
    /// Maximum number of candidate maps placed before giving up.
    pub node_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("budget field {0} must be positive (depth at least 2)")]
    Budget(&'static str),
    #[error("diagrams have different modes")]
    ModeMismatch,
    #[error("diagram {side} is invalid: {source}")]
    Invalid { side: char, source: DiagramError },
}

/// Result of [`search_confluence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub certificate: Option<ConfluenceCertificate<T>>,
    /// Candidate maps placed.
    pub nodes: usize,
    /// Whether the node limit cut the search short.
    pub hit_node_limit: bool,
}

/// Looks for a certificate of exactly `budget.depth` levels.
///
/// Any certificate returned satisfies both commutation equations at every
/// level; the search is complete only relative to the budget.
pub fn search_confluence<T: ExactInt>(
    a: &SequenceDiagram<T>,
    b: &SequenceDiagram<T>,
    budget: SearchBudget,
) -> Result<SearchOutcome<T>, SearchError> {
    if budget.depth < 2 {
        return Err(SearchError::Budget("depth"));
    }
    if budget.entry_bound == 0 {
        return Err(SearchError::Budget("entry_bound"));
    }
    if budget.stage_horizon == 0 {
        return Err(SearchError::Budget("stage_horizon"));
    }
    if budget.node_limit == 0 {
        return Err(SearchError::Budget("node_limit"));
    }
    if a.mode() != b.mode() {
        return Err(SearchError::ModeMismatch);
    }
    let a = prepare(a, budget.stage_horizon).map_err(|source| SearchError::Invalid { side: 'A', source })?;
    let b = prepare(b, budget.stage_horizon).map_err(|source| SearchError::Invalid { side: 'B', source })?;

    let mut s = Searcher {
        ta: Transitions::new(&a),
        tb: Transitions::new(&b),
        mono_a: a.mono_required(),
        mono_b: b.mono_required(),
        ranks_a: a.ranks().to_vec(),
        ranks_b: b.ranks().to_vec(),
        constraint: match a.mode() {
            Mode::Plain => Constraint::Any,
            Mode::Simplicial => Constraint::Nonnegative,
        },
        budget,
        nodes: 0,
        i: Vec::new(),
        k: Vec::new(),
        f: Vec::new(),
        g: Vec::new(),
    };
    let mut found = false;
    let mut stopped = false;
    for i1 in 1..=s.ranks_a.len() {
        s.i.push(i1);
        match s.place_f() {
            Flow::Found => {
                found = true;
                break;
            }
            Flow::Stop => {
                stopped = true;
                break;
            }
            Flow::Continue => {}
        }
        s.i.pop();
    }
    let certificate = found.then(|| ConfluenceCertificate::new(s.i, s.k, s.f, s.g));
    Ok(SearchOutcome {
        certificate,
        nodes: s.nodes,
        hit_node_limit: stopped,
    })
}

fn prepare<T: ExactInt>(d: &SequenceDiagram<T>, horizon: usize) -> Result<Cow<'_, SequenceDiagram<T>>, DiagramError> {
    let report = d.validate();
    if !report.is_clean() {
        return Err(DiagramError::Invalid(report));
    }
    let d = if d.is_periodic() {
        d.extend_to(horizon)?
    } else {
        Cow::Borrowed(d)
    };
    let n = horizon.min(d.len());
    if n == d.len() {
        return Ok(d);
    }
    let ranks = d.ranks()[..n].to_vec();
    let transitions = d.transitions()[..n - 1].to_vec();
    let out = SequenceDiagram::new(d.mode(), ranks, transitions).with_mono(d.mono_required());
    Ok(Cow::Owned(out))
}

/// All composites `a(i, j)` for stages up to the horizon.
struct Transitions<T> {
    table: Vec<Vec<Matrix<T>>>,
}

impl<T: ExactInt> Transitions<T> {
    fn new(d: &SequenceDiagram<T>) -> Self {
        let n = d.len();
        let mut table = Vec::with_capacity(n);
        for i in 1..=n {
            let mut row = Vec::with_capacity(n - i + 1);
            let mut acc = Matrix::identity(d.ranks()[i - 1]);
            row.push(acc.clone());
            for j in i + 1..=n {
                acc = &d.transitions()[j - 2] * &acc;
                row.push(acc.clone());
            }
            table.push(row);
        }
        Transitions { table }
    }

    fn get(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.table[i - 1][j - i]
    }
}

enum Flow {
    Found,
    Continue,
    Stop,
}

struct Searcher<T> {
    ta: Transitions<T>,
    tb: Transitions<T>,
    mono_a: bool,
    mono_b: bool,
    ranks_a: Vec<usize>,
    ranks_b: Vec<usize>,
    constraint: Constraint,
    budget: SearchBudget,
    nodes: usize,
    i: Vec<usize>,
    k: Vec<usize>,
    f: Vec<Matrix<T>>,
    g: Vec<Matrix<T>>,
}

impl<T: ExactInt> Searcher<T> {
    /// Places `k_n, f_n` for `n = self.i.len()`.
    fn place_f(&mut self) -> Flow {
        let n = self.i.len();
        let i_n = self.i[n - 1];
        let k_from = self.k.last().map_or(1, |k| k + 1);
        let prev = self.g.last().map(MatrixEquation::new);
        for k in k_from..=self.ranks_b.len() {
            let shape = (self.ranks_b[k - 1], self.ranks_a[i_n - 1]);
            let candidates: Box<dyn Iterator<Item = Matrix<T>>> = match &prev {
                None => Box::new(SmallFirst::new(shape, self.budget.entry_bound, self.constraint)),
                Some(eq) => {
                    let target = self.tb.get(self.k[n - 2], k);
                    Box::new(sorted_solutions(eq, target, self.constraint, self.budget).into_iter())
                }
            };
            for f in candidates {
                self.nodes += 1;
                if self.nodes > self.budget.node_limit {
                    return Flow::Stop;
                }
                // g_n f_n = a(i_n, i_{n+1}) is injective on a mono side
                if self.mono_a && n < self.budget.depth && !f.is_injective() {
                    continue;
                }
                self.k.push(k);
                self.f.push(f);
                let flow = if n == self.budget.depth { Flow::Found } else { self.place_g() };
                match flow {
                    Flow::Continue => {
                        self.k.pop();
                        self.f.pop();
                    }
                    other => return other,
                }
            }
        }
        Flow::Continue
    }

    /// Places `i_{n+1}, g_n` for `n = self.f.len()`.
    fn place_g(&mut self) -> Flow {
        let n = self.f.len();
        let i_n = self.i[n - 1];
        let k_n = self.k[n - 1];
        let eq = MatrixEquation::new(&self.f[n - 1]);
        for i_next in i_n + 1..=self.ranks_a.len() {
            let target = self.ta.get(i_n, i_next);
            for g in sorted_solutions(&eq, target, self.constraint, self.budget) {
                self.nodes += 1;
                if self.nodes > self.budget.node_limit {
                    return Flow::Stop;
                }
                // f_{n+1} g_n = b(k_n, k_{n+1}) is injective on a mono side
                if self.mono_b && !g.is_injective() {
                    continue;
                }
                debug_assert_eq!(g.cols(), self.ranks_b[k_n - 1]);
                self.i.push(i_next);
                self.g.push(g);
                match self.place_f() {
                    Flow::Continue => {
                        self.i.pop();
                        self.g.pop();
                    }
                    other => return other,
                }
            }
        }
        Flow::Continue
    }
}

fn sorted_solutions<T: ExactInt>(
    eq: &MatrixEquation<T>,
    target: &Matrix<T>,
    constraint: Constraint,
    budget: SearchBudget,
) -> Vec<Matrix<T>> {
    let Ok(stream) = eq.solutions(target, constraint, budget.entry_bound) else {
        return Vec::new();
    };
    // more candidates than the node limit could never all be placed
    let mut all: Vec<Matrix<T>> = stream.take(budget.node_limit).collect();
    all.sort_by(small_first_order);
    all
}

fn zigzag<T: ExactInt>(v: &T) -> T {
    if v.is_positive() {
        v.clone() + v.clone() - T::one()
    } else {
        -(v.clone() + v.clone())
    }
}

fn small_first_order<T: ExactInt>(x: &Matrix<T>, y: &Matrix<T>) -> Ordering {
    x.l1_norm().cmp(&y.l1_norm()).then_with(|| {
        x.entries()
            .iter()
            .zip(y.entries())
            .map(|(p, q)| zigzag(p).cmp(&zigzag(q)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Every matrix of a given shape within the entry bound, in
/// [`small_first_order`], generated one norm shell at a time.
struct SmallFirst<T> {
    shape: (usize, usize),
    bound: u64,
    constraint: Constraint,
    norm: u64,
    shell: std::vec::IntoIter<Vec<i64>>,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: ExactInt> SmallFirst<T> {
    fn new(shape: (usize, usize), bound: u64, constraint: Constraint) -> Self {
        SmallFirst {
            shape,
            bound,
            constraint,
            norm: 0,
            shell: vec![vec![0; shape.0 * shape.1]].into_iter(),
            _scalar: std::marker::PhantomData,
        }
    }

    fn max_norm(&self) -> u64 {
        self.bound * (self.shape.0 * self.shape.1) as u64
    }

    fn fill(&self, remaining: i64, slots: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let bound = self.bound as i64;
        if remaining > bound * slots as i64 {
            return;
        }
        let top = remaining.min(bound);
        for mag in 0..=top {
            let signs: &[i64] = match (mag, self.constraint) {
                (0, _) | (_, Constraint::Nonnegative) => &[1],
                _ => &[1, -1],
            };
            for &s in signs {
                prefix.push(s * mag);
                self.fill(remaining - mag, slots - 1, prefix, out);
                prefix.pop();
            }
        }
    }
}

impl<T: ExactInt> Iterator for SmallFirst<T> {
    type Item = Matrix<T>;

    fn next(&mut self) -> Option<Matrix<T>> {
        loop {
            if let Some(v) = self.shell.next() {
                let data = v.into_iter().map(crate::ints::int).collect();
                return Some(Matrix::new(self.shape.0, self.shape.1, data).expect("shape"));
            }
            if self.norm >= self.max_norm() {
                return None;
            }
            self.norm += 1;
            let mut out = Vec::new();
            self.fill(self.norm as i64, self.shape.0 * self.shape.1, &mut Vec::new(), &mut out);
            self.shell = out.into_iter();
        }
    }
}
