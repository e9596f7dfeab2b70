//! Dense complex linear algebra: cyclic Jacobi for Hermitian matrices,
//! Gaussian elimination for solves and nullspaces.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors, stored as
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// Orthogonal projection onto the span of the eigenvectors in `cols`.
    pub fn projector(&self, cols: &[usize]) -> CMatrix {
        let n = self.vectors.n;
        let mut p = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for &k in cols {
                    acc += self.vectors.get(i, k) * self.vectors.get(j, k).conj();
                }
                p.set(i, j, acc);
            }
        }
        p
    }

    /// Column `col` of the projector onto `cols`, without forming the matrix.
    pub fn projector_column(&self, cols: &[usize], col: usize) -> Vec<C64> {
        let n = self.vectors.n;
        (0..n)
            .map(|i| {
                cols.iter()
                    .map(|&k| self.vectors.get(i, k) * self.vectors.get(col, k).conj())
                    .sum()
            })
            .collect()
    }
}

/// Cyclic Jacobi sweep for a Hermitian matrix. Each rotation first removes
/// the phase of the pivot, then applies the real symmetric 2x2 rotation.
pub fn hermitian_eigen(m: &CMatrix) -> Eigen {
    let n = m.n;
    let mut a = m.clone();
    // symmetrize exactly so rounding in the input cannot stall convergence
    for i in 0..n {
        a.data[i * n + i] = C64::new(a.get(i, i).re, 0.0);
        for j in 0..i {
            let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..i {
                off += a.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 || r < 1e-18 * scale {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let zeta = (aqq - app) / (2.0 * r);
                let t = zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let wpp = C64::new(c, 0.0);
                let wpq = C64::new(s, 0.0);
                let wqp = -phase.conj() * s;
                let wqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * wpp + akq * wqp);
                    a.set(k, q, akp * wpq + akq * wqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, wpp.conj() * apk + wqp.conj() * aqk);
                    a.set(q, k, wpq.conj() * apk + wqq.conj() * aqk);
                }
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
                a.data[p * n + p].im = 0.0;
                a.data[q * n + q].im = 0.0;
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * wpp + vkq * wqp);
                    v.set(k, q, vkp * wpq + vkq * wqq);
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let values = idx.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in idx.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, new, v.get(k, old));
        }
    }
    Eigen { values, vectors }
}

/// Basis of the nullspace of a real matrix given as rows, by Gauss-Jordan
/// elimination with partial pivoting. `tol` is relative to the largest entry.
pub fn real_nullspace(rows: &[Vec<f64>], cols: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0.0)).cloned().collect();
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let (best, val) = (r..m.len())
            .map(|i| (i, m[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= piv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0.0; cols];
            v[f] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f];
            }
            v
        })
        .collect()
}

/// Rank of a set of complex vectors (rows), relative tolerance `tol`.
pub fn complex_rank(rows: &[Vec<C64>], tol: f64) -> usize {
    let mut m: Vec<Vec<C64>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |a, b| a.max(b.norm()))
        .max(f64::MIN_POSITIVE);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let (best, val) = (r..m.len())
            .map(|i| (i, m[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c];
        let pivot_row: Vec<C64> = m[r].iter().map(|x| x / piv).collect();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c];
            if f.norm() > 0.0 {
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves `A x = b` for square `A` (columns given as `cols`); `None` when
/// singular to tolerance.
pub fn complex_solve_columns(cols: &[Vec<C64>], b: &[C64], tol: f64) -> Option<Vec<C64>> {
    let n = cols.len();
    if n == 0 || cols[0].len() != n || b.len() != n {
        return None;
    }
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut row: Vec<C64> = (0..n).map(|j| cols[j][i]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    let scale = cols
        .iter()
        .flatten()
        .fold(0.0f64, |a, z| a.max(z.norm()))
        .max(f64::MIN_POSITIVE);
    for c in 0..n {
        let (best, val) = (c..n)
            .map(|i| (i, m[i][c].norm()))
            .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            return None;
        }
        m.swap(c, best);
        let piv = m[c][c];
        let pivot_row: Vec<C64> = m[c].iter().map(|x| x / piv).collect();
        m[c] = pivot_row.clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c {
                let f = row[c];
                if f.norm() > 0.0 {
                    for (x, &p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}
