//! Bounded enumeration of integer solutions of `X * K = T`.
//!
//! Each row `x` of `X` solves `K^T x^T = t^T` independently. The Smith form of
//! `K^T` gives a particular solution `y0` and a kernel lattice; the kernel
//! basis is brought to column echelon form with positive pivots, so the free
//! parameters can be bounded one at a time from the box constraints and the
//! solutions come out in lexicographic order of their entries.

use thiserror::Error;

use super::{snf, ExactInt, Matrix};

/// Sign constraint on the entries of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Any,
    Nonnegative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("X * K = T has no integer solution")]
    Inconsistent,
    #[error("shape mismatch: K is {k_rows}x{k_cols} but T is {t_rows}x{t_cols}")]
    Shape {
        k_rows: usize,
        k_cols: usize,
        t_rows: usize,
        t_cols: usize,
    },
}

/// Precomputed data for solving `X * K = T` against many right-hand sides.
#[derive(Debug, Clone)]
pub struct MatrixEquation<T> {
    k: Matrix<T>,
    /// `u * K^T * v = s`
    u: Matrix<T>,
    v: Matrix<T>,
    diag: Vec<T>,
    rank: usize,
    /// kernel lattice of `K^T`, column echelon form
    lattice: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: ExactInt> MatrixEquation<T> {
    pub fn new(k: &Matrix<T>) -> Self {
        let form = snf(&k.transpose());
        let rank = form.rank();
        let diag = form.invariant_factors();
        let n = k.rows();
        let kernel = Matrix::from_fn(n, n - rank, |r, c| form.v[(r, rank + c)].clone());
        let (lattice, pivots) = column_echelon(kernel);
        MatrixEquation {
            k: k.clone(),
            u: form.u,
            v: form.v,
            diag,
            rank,
            lattice,
            pivots,
        }
    }

    /// The coefficient matrix `K`.
    pub fn coefficients(&self) -> &Matrix<T> {
        &self.k
    }

    /// Number of free integer parameters per row of `X`.
    pub fn freedom(&self) -> usize {
        self.pivots.len()
    }

    /// All `X` with `X * K = t` whose entries lie in `[-bound, bound]`
    /// (or `[0, bound]`), in lexicographic row-major order.
    pub fn solutions(
        &self,
        t: &Matrix<T>,
        constraint: Constraint,
        bound: u64,
    ) -> Result<MatrixSolutions<T>, SolveError> {
        if t.cols() != self.k.cols() {
            return Err(SolveError::Shape {
                k_rows: self.k.rows(),
                k_cols: self.k.cols(),
                t_rows: t.rows(),
                t_cols: t.cols(),
            });
        }
        let hi = T::from_u64(bound).expect("bound fits the scalar type");
        let lo = match constraint {
            Constraint::Any => -hi.clone(),
            Constraint::Nonnegative => T::zero(),
        };
        let mut rows = Vec::with_capacity(t.rows());
        for r in 0..t.rows() {
            let y0 = self.particular(t.row(r)).ok_or(SolveError::Inconsistent)?;
            rows.push(RowSpace {
                y0,
                lattice: self.lattice.clone(),
                pivots: self.pivots.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        Ok(MatrixSolutions::new(rows, self.k.rows()))
    }

    /// Some integer `y` with `K^T y = b`, if one exists.
    fn particular(&self, b: &[T]) -> Option<Vec<T>> {
        let c = self.u.apply(b);
        let n = self.v.rows();
        let mut z = vec![T::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let (q, r) = ci.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.v.apply(&z))
    }
}

/// Stream of solutions of `X * K = T` within a box, from [`solve_matrix_eq`].
///
/// Rows of `X` vary independently; the last row varies fastest.
#[derive(Debug, Clone)]
pub struct MatrixSolutions<T> {
    spaces: Vec<RowSpace<T>>,
    iters: Vec<RowSolutions<T>>,
    current: Vec<Vec<T>>,
    cols: usize,
    started: bool,
    done: bool,
}

impl<T: ExactInt> MatrixSolutions<T> {
    fn new(spaces: Vec<RowSpace<T>>, cols: usize) -> Self {
        MatrixSolutions {
            spaces,
            iters: Vec::new(),
            current: Vec::new(),
            cols,
            started: false,
            done: false,
        }
    }

    fn emit(&self) -> Matrix<T> {
        Matrix::from_fn(self.current.len(), self.cols, |r, c| self.current[r][c].clone())
    }
}

impl<T: ExactInt> Iterator for MatrixSolutions<T> {
    type Item = Matrix<T>;

    fn next(&mut self) -> Option<Matrix<T>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            for space in &self.spaces {
                let mut it = space.iter();
                match it.next() {
                    Some(y) => {
                        self.current.push(y);
                        self.iters.push(it);
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
            return Some(self.emit());
        }
        // odometer: advance the last row, carrying into earlier ones
        let mut r = self.iters.len();
        loop {
            if r == 0 {
                self.done = true;
                return None;
            }
            r -= 1;
            if let Some(y) = self.iters[r].next() {
                self.current[r] = y;
                break;
            }
        }
        for j in r + 1..self.iters.len() {
            let mut it = self.spaces[j].iter();
            self.current[j] = it.next().expect("row space was nonempty before");
            self.iters[j] = it;
        }
        Some(self.emit())
    }
}

/// Solutions `X` of `X * k = t` with entries in `[-entry_bound, entry_bound]`
/// (`[0, entry_bound]` when nonnegative), each exactly once, in lexicographic
/// row-major order.
///
/// Returns [`SolveError::Inconsistent`] when no integer solution exists at any
/// bound, which keeps "no solutions anywhere" apart from an empty stream
/// caused by the bound.
pub fn solve_matrix_eq<T: ExactInt>(
    k: &Matrix<T>,
    t: &Matrix<T>,
    constraint: Constraint,
    entry_bound: u64,
) -> Result<MatrixSolutions<T>, SolveError> {
    MatrixEquation::new(k).solutions(t, constraint, entry_bound)
}

/// Column-echelon form of a full-column-rank lattice basis: column `j` has its
/// first nonzero entry at `pivots[j]`, strictly increasing, and that entry is
/// positive.
fn column_echelon<T: ExactInt>(mut h: Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let f = h.cols();
    let mut pivots = Vec::with_capacity(f);
    let mut col = 0;
    for r in 0..h.rows() {
        if col == f {
            break;
        }
        loop {
            let live: Vec<usize> = (col..f).filter(|&c| !h[(r, c)].is_zero()).collect();
            if live.is_empty() {
                break;
            }
            let m = *live
                .iter()
                .min_by(|&&a, &&b| h[(r, a)].abs().cmp(&h[(r, b)].abs()))
                .expect("nonempty");
            if live.len() == 1 {
                h.swap_cols(col, m);
                if h[(r, col)].is_negative() {
                    h.negate_col(col);
                }
                pivots.push(r);
                col += 1;
                break;
            }
            for &c in &live {
                if c != m {
                    let q = -h[(r, c)].div_floor(&h[(r, m)]);
                    h.add_col_multiple(c, m, &q);
                }
            }
        }
    }
    debug_assert_eq!(col, f, "kernel basis must have full column rank");
    (h, pivots)
}

/// Affine lattice `y0 + span(lattice)` intersected with the box `[lo, hi]^n`.
#[derive(Debug, Clone)]
struct RowSpace<T> {
    y0: Vec<T>,
    lattice: Matrix<T>,
    pivots: Vec<usize>,
    lo: T,
    hi: T,
}

impl<T: ExactInt> RowSpace<T> {
    fn in_box(&self, y: &[T], rows: std::ops::Range<usize>) -> bool {
        y[rows].iter().all(|v| *v >= self.lo && *v <= self.hi)
    }

    /// Admissible values of parameter `level` given the partial point `y`.
    fn range(&self, level: usize, y: &[T]) -> (T, T) {
        let p = self.pivots[level];
        let h = self.lattice[(p, level)].clone();
        let lo = (self.lo.clone() - y[p].clone()).div_ceil(&h);
        let hi = (self.hi.clone() - y[p].clone()).div_floor(&h);
        (lo, hi)
    }

    /// Rows settled once parameter `level` is chosen.
    fn settled(&self, level: usize) -> std::ops::Range<usize> {
        let end = self.pivots.get(level + 1).copied().unwrap_or(self.y0.len());
        self.pivots[level]..end
    }

    fn iter(&self) -> RowSolutions<T> {
        let n = self.y0.len();
        let first = self.pivots.first().copied().unwrap_or(n);
        let mut stack = Vec::new();
        let mut single = None;
        if self.in_box(&self.y0, 0..first) {
            if self.pivots.is_empty() {
                single = Some(self.y0.clone());
            } else {
                let (lo, hi) = self.range(0, &self.y0);
                stack.push(Frame {
                    next: lo,
                    last: hi,
                    y: self.y0.clone(),
                });
            }
        }
        RowSolutions {
            space: self.clone(),
            stack,
            single,
        }
    }
}

#[derive(Debug, Clone)]
struct Frame<T> {
    next: T,
    last: T,
    y: Vec<T>,
}

#[derive(Debug, Clone)]
struct RowSolutions<T> {
    space: RowSpace<T>,
    stack: Vec<Frame<T>>,
    single: Option<Vec<T>>,
}

impl<T: ExactInt> Iterator for RowSolutions<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if let Some(y) = self.single.take() {
            return Some(y);
        }
        let free = self.space.pivots.len();
        loop {
            let level = self.stack.len().checked_sub(1)?;
            let frame = self.stack.last_mut().expect("nonempty");
            if frame.next > frame.last {
                self.stack.pop();
                continue;
            }
            let w = frame.next.clone();
            frame.next = frame.next.clone() + T::one();
            let mut y = frame.y.clone();
            for (r, yr) in y.iter_mut().enumerate() {
                let h = &self.space.lattice[(r, level)];
                if !h.is_zero() {
                    *yr = yr.clone() + w.clone() * h.clone();
                }
            }
            if !self.space.in_box(&y, self.space.settled(level)) {
                continue;
            }
            if level + 1 == free {
                return Some(y);
            }
            let (lo, hi) = self.space.range(level + 1, &y);
            self.stack.push(Frame { next: lo, last: hi, y });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<i64>;

    fn all(k: &M, t: &M, c: Constraint, bound: u64) -> Result<Vec<M>, SolveError> {
        solve_matrix_eq(k, t, c, bound).map(Iterator::collect)
    }

    #[test]
    fn forced_scalar() {
        let got = all(&M::from_i64_rows(&[&[2]]), &M::from_i64_rows(&[&[4]]), Constraint::Nonnegative, 10);
        assert_eq!(got.unwrap(), vec![M::from_i64_rows(&[&[2]])]);
    }

    #[test]
    fn two_unknowns_summing_to_two() {
        let k = M::from_i64_rows(&[&[1], &[1]]);
        let t = M::from_i64_rows(&[&[2]]);
        let got = all(&k, &t, Constraint::Nonnegative, 2).unwrap();
        let want: Vec<M> = [[0, 2], [1, 1], [2, 0]].iter().map(|r| M::from_i64_rows(&[r])).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn parity_obstruction_is_inconsistent() {
        let got = all(&M::from_i64_rows(&[&[2]]), &M::from_i64_rows(&[&[3]]), Constraint::Any, 100);
        assert_eq!(got, Err(SolveError::Inconsistent));
    }

    #[test]
    fn bound_exhaustion_is_an_empty_stream() {
        let got = all(&M::from_i64_rows(&[&[1]]), &M::from_i64_rows(&[&[5]]), Constraint::Any, 4);
        assert_eq!(got, Ok(vec![]));
    }

    #[test]
    fn unconstrained_enumerates_the_box() {
        // K with zero columns: every 1x2 matrix in [0,1]^2
        let got = all(&M::zeros(2, 0), &M::zeros(1, 0), Constraint::Nonnegative, 1).unwrap();
        let want: Vec<M> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|r| M::from_i64_rows(&[r])).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_unknown_shapes() {
        // X is 0 x 1: exactly one (empty) solution
        assert_eq!(all(&M::from_i64_rows(&[&[3]]), &M::zeros(0, 1), Constraint::Any, 1).unwrap().len(), 1);
        // X is 1 x 0 and T must vanish
        assert_eq!(all(&M::zeros(0, 1), &M::zeros(1, 1), Constraint::Any, 1).unwrap().len(), 1);
        assert_eq!(
            all(&M::zeros(0, 1), &M::from_i64_rows(&[&[1]]), Constraint::Any, 1),
            Err(SolveError::Inconsistent)
        );
    }

    #[test]
    fn shape_mismatch() {
        assert!(matches!(
            all(&M::identity(2), &M::identity(3), Constraint::Any, 1),
            Err(SolveError::Shape { .. })
        ));
    }

    #[test]
    fn multi_row_order_is_row_major_lexicographic() {
        let k = M::from_i64_rows(&[&[1], &[1]]);
        let t = M::from_i64_rows(&[&[1], &[1]]);
        let got = all(&k, &t, Constraint::Nonnegative, 1).unwrap();
        let flat: Vec<Vec<i64>> = got.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(flat, vec![vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 0, 1, 0]]);
    }
}
