//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls into the crate's algebra: ranks, determinants and
//! solution sets are recomputed from scratch on plain nested vectors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use confluent::confluence::ConfluenceCertificate;
use confluent::{ColimitElement, Matrix, Mode, SequenceDiagram};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type D = SequenceDiagram<i64>;
pub type M = Matrix<i64>;
pub type C = ConfluenceCertificate<i64>;
pub type E = ColimitElement<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rows_of(m: &M) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)]).collect()).collect()
}

pub fn from_rows(rows: usize, cols: usize, data: &[Vec<i64>]) -> M {
    M::from_fn(rows, cols, |r, c| data[r][c])
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank_fraction_free(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i128;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * det_cofactor(&minor);
    }
    total
}

pub fn mul_rows(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize, cols: usize) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| (0..cols).map(|c| (0..inner).map(|k| row[k] * b[k][c]).sum()).collect())
        .collect()
}

/// Every `X` with `X K = T` and entries in `[-bound, bound]` (or
/// `[0, bound]`), found by trying them all. Matrices are flattened row-major.
pub fn brute_force_solutions(k: &M, t: &M, nonnegative: bool, bound: i64) -> BTreeSet<Vec<i64>> {
    let (rows, inner) = (t.rows(), k.rows());
    let lo = if nonnegative { 0 } else { -bound };
    let n = rows * inner;
    let kr = rows_of(k);
    let tr = rows_of(t);
    let mut out = BTreeSet::new();
    let mut x = vec![lo; n];
    loop {
        let xr: Vec<Vec<i64>> = (0..rows).map(|r| x[r * inner..(r + 1) * inner].to_vec()).collect();
        if mul_rows(&xr, &kr, inner, k.cols()) == tr {
            out.insert(x.clone());
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            if x[pos] < bound {
                x[pos] += 1;
                break;
            }
            x[pos] = lo;
            pos += 1;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> M {
    M::from_fn(rows, cols, |_, _| rng.gen_range(lo..=hi))
}

fn entry_range(mode: Mode, max_entry: i64) -> (i64, i64) {
    match mode {
        Mode::Plain => (-max_entry, max_entry),
        Mode::Simplicial => (0, max_entry),
    }
}

/// A random diagram with `stages` stages and ranks in `1..=max_rank`. Mono
/// diagrams get nondecreasing ranks and injective transitions (checked with
/// [`rank_fraction_free`]).
pub fn random_diagram(rng: &mut ChaCha8Rng, mode: Mode, mono: bool, stages: usize, max_rank: usize, max_entry: i64) -> D {
    let (lo, hi) = entry_range(mode, max_entry);
    let mut ranks = vec![rng.gen_range(1..=max_rank)];
    for _ in 1..stages {
        let prev = *ranks.last().unwrap();
        ranks.push(if mono { rng.gen_range(prev..=max_rank.max(prev)) } else { rng.gen_range(1..=max_rank) });
    }
    let transitions = ranks
        .windows(2)
        .map(|w| loop {
            let m = random_matrix(rng, w[1], w[0], lo, hi);
            if !mono || rank_fraction_free(&rows_of(&m)) == w[0] {
                break m;
            }
        })
        .collect();
    D::new(mode, ranks, transitions).with_mono(mono)
}

/// Splits random maps through random intermediate groups: `a_n = g_n f_n`
/// defines `A`, and `b_n = f_{n+1} g_n` defines `B`, so the identity
/// interleaving `i_n = k_n = n` with these maps is a certificate by
/// construction.
pub fn random_splitting(rng: &mut ChaCha8Rng, mode: Mode, stages: usize, max_rank: usize, max_entry: i64) -> (D, D, C) {
    let (lo, hi) = entry_range(mode, max_entry);
    let ra: Vec<usize> = (0..stages).map(|_| rng.gen_range(1..=max_rank)).collect();
    let rb: Vec<usize> = (0..stages).map(|_| rng.gen_range(1..=max_rank)).collect();
    let f: Vec<M> = (0..stages).map(|n| random_matrix(rng, rb[n], ra[n], lo, hi)).collect();
    let g: Vec<M> = (0..stages - 1).map(|n| random_matrix(rng, ra[n + 1], rb[n], lo, hi)).collect();
    let product = |x: &M, y: &M| {
        let rows = mul_rows(&rows_of(x), &rows_of(y), x.cols(), y.cols());
        from_rows(x.rows(), y.cols(), &rows)
    };
    let a_steps = (0..stages - 1).map(|n| product(&g[n], &f[n])).collect();
    let b_steps = (0..stages - 1).map(|n| product(&f[n + 1], &g[n])).collect();
    let a = D::new(mode, ra.clone(), a_steps);
    let b = D::new(mode, rb.clone(), b_steps);
    let idx: Vec<usize> = (1..=stages).collect();
    (a, b, C::new(idx.clone(), idx, f, g))
}

pub fn random_element(rng: &mut ChaCha8Rng, d: &D, max_stage: usize, lo: i64, hi: i64) -> E {
    let stage = rng.gen_range(1..=max_stage);
    let r = d.ranks()[stage - 1];
    E::new(stage, (0..r).map(|_| rng.gen_range(lo..=hi)).collect())
}

pub fn scalar(v: i64) -> M {
    M::from_fn(1, 1, |_, _| v)
}

pub fn times(m: i64) -> D {
    D::stationary(Mode::Plain, scalar(m)).with_mono(true)
}
