use crate::ints::{ExactInt, Matrix};

/// Declares a certificate infinite: after the stored levels, the last
/// `period_len` levels repeat with stage indices shifted by `index_step_a`
/// (into `A`) and `index_step_b` (into `B`), and the same matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CertificatePeriod {
    pub index_step_a: usize,
    pub index_step_b: usize,
    pub period_len: usize,
}

/// Confluence data between sequences `A` and `B`: stages
/// `i_1 < i_2 < ...` of `A`, `k_1 < k_2 < ...` of `B`, maps
/// `f_n: A_{i_n} -> B_{k_n}` and `g_n: B_{k_n} -> A_{i_{n+1}}` with
///
/// ```text
/// g_n f_n     = a(i_n, i_{n+1})
/// f_{n+1} g_n = b(k_n, k_{n+1})
/// ```
///
/// A stored certificate of depth `M` has `M` maps `f_n` and `M - 1` maps
/// `g_n`; the last `g_M` is optional and only checkable on periodic
/// certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceCertificate<T> {
    pub i_indices: Vec<usize>,
    pub k_indices: Vec<usize>,
    pub f_mats: Vec<Matrix<T>>,
    pub g_mats: Vec<Matrix<T>>,
    pub periodic: Option<CertificatePeriod>,
}

/// One level `n` of a certificate, possibly generated from the period.
#[derive(Debug, Clone, Copy)]
pub struct Level<'a, T> {
    pub n: usize,
    pub i: usize,
    pub k: usize,
    pub f: &'a Matrix<T>,
    pub g: Option<&'a Matrix<T>>,
}

impl<T: ExactInt> ConfluenceCertificate<T> {
    pub fn new(
        i_indices: Vec<usize>,
        k_indices: Vec<usize>,
        f_mats: Vec<Matrix<T>>,
        g_mats: Vec<Matrix<T>>,
    ) -> Self {
        ConfluenceCertificate {
            i_indices,
            k_indices,
            f_mats,
            g_mats,
            periodic: None,
        }
    }

    pub fn with_period(mut self, period: CertificatePeriod) -> Self {
        self.periodic = Some(period);
        self
    }

    /// Number of stored levels (maps `f_n`).
    pub fn depth(&self) -> usize {
        self.f_mats.len()
    }

    /// Level `n` (1-based). Levels past the stored depth exist only for
    /// periodic certificates. Assumes the stored vectors have consistent
    /// lengths.
    pub fn level(&self, n: usize) -> Option<Level<'_, T>> {
        let m = self.depth();
        if n == 0 || m == 0 {
            return None;
        }
        if n <= m {
            return Some(Level {
                n,
                i: *self.i_indices.get(n - 1)?,
                k: *self.k_indices.get(n - 1)?,
                f: &self.f_mats[n - 1],
                g: self.g_mats.get(n - 1),
            });
        }
        let p = self.periodic?;
        if p.period_len == 0 || p.period_len > m {
            return None;
        }
        let shifts = (n - m).div_ceil(p.period_len);
        let base = n - shifts * p.period_len;
        let l = self.level(base)?;
        Some(Level {
            n,
            i: l.i + shifts * p.index_step_a,
            k: l.k + shifts * p.index_step_b,
            f: l.f,
            g: l.g,
        })
    }

    /// The first `m` levels, without the period.
    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.depth());
        ConfluenceCertificate {
            i_indices: self.i_indices[..m].to_vec(),
            k_indices: self.k_indices[..m].to_vec(),
            f_mats: self.f_mats[..m].to_vec(),
            g_mats: self.g_mats.iter().take(m.saturating_sub(1)).cloned().collect(),
            periodic: None,
        }
    }
}
