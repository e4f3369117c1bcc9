use super::{ExactInt, Matrix};

/// Smith normal form `u * m * v = s` with `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: ExactInt> SmithForm<T> {
    /// Diagonal of `s`: `d_1 | d_2 | ... | d_min`, all nonnegative.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s[(i, i)].is_zero()).count()
    }
}

/// Smallest nonzero |entry| in the lower-right block starting at `(t, t)`,
/// lowest row first, then lowest column.
fn pick_pivot<T: ExactInt>(s: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            let a = s[(r, c)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Smith normal form of `m`, tracking both transforms.
pub fn snf<T: ExactInt>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pr, pc)) = pick_pivot(&s, t) else {
            break;
        };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);

        let p = s[(t, t)].clone();
        let mut clean = true;
        for r in t + 1..rows {
            if s[(r, t)].is_zero() {
                continue;
            }
            let q = -s[(r, t)].div_floor(&p);
            s.add_row_multiple(r, t, &q);
            u.add_row_multiple(r, t, &q);
            clean &= s[(r, t)].is_zero();
        }
        for c in t + 1..cols {
            if s[(t, c)].is_zero() {
                continue;
            }
            let q = -s[(t, c)].div_floor(&p);
            s.add_col_multiple(c, t, &q);
            v.add_col_multiple(c, t, &q);
            clean &= s[(t, c)].is_zero();
        }
        if !clean {
            // a remainder smaller than the pivot survived; re-pivot on it
            continue;
        }

        let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !s[(r, c)].is_multiple_of(&p)));
        if let Some(r) = offender {
            let one = T::one();
            s.add_row_multiple(t, r, &one);
            u.add_row_multiple(t, r, &one);
            continue;
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SmithForm { s, u, v }
}

/// Basis of `{x : m x = 0}` as the columns of the returned matrix. The
/// result has zero columns exactly when `m` is injective.
pub fn kernel_basis<T: ExactInt>(m: &Matrix<T>) -> Matrix<T> {
    let form = snf(m);
    let rank = form.rank();
    let cols = m.cols();
    Matrix::from_fn(cols, cols - rank, |r, c| form.v[(r, rank + c)].clone())
}
