//! Fusion rings: axioms, Frobenius-Perron dimensions, unital subrings, and
//! the fusion rules read off a group algebra's central projections.

use crate::boxalgebra::{BoxContext, Side};
use crate::error::{Error, Result};
use crate::linalg::C64;
use serde::Serialize;

/// Largest rank accepted by the text parser and the subring search.
pub const MAX_RANK: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    rank: usize,
    /// `n[(i * r + j) * r + k] = N_{ij}^k`
    n: Vec<u32>,
    dual: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FusionReport {
    pub rank: usize,
    pub axioms: bool,
    pub dims: Vec<f64>,
    pub total_dim: f64,
    pub integral: bool,
    pub simple: bool,
    pub subrings: Vec<Vec<usize>>,
}

impl FusionRing {
    /// Builds a ring from `N[i][j][k]`; the duality is read off `N[i][j][0]`.
    pub fn new(rank: usize, n: Vec<u32>) -> Result<Self> {
        if rank == 0 || n.len() != rank * rank * rank {
            return Err(Error::AxiomViolation(format!(
                "tensor has {} entries, expected {}",
                n.len(),
                rank * rank * rank
            )));
        }
        let mut dual = Vec::with_capacity(rank);
        for i in 0..rank {
            let col: Vec<usize> = (0..rank).filter(|&j| n[(i * rank + j) * rank] != 0).collect();
            match col.as_slice() {
                [j] if n[(i * rank + j) * rank] == 1 => dual.push(*j),
                _ => {
                    return Err(Error::AxiomViolation(format!(
                        "x{i} has no unique dual: N[{i}][j][0] nonzero for j in {col:?}"
                    )))
                }
            }
        }
        Ok(FusionRing { rank, n, dual })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.n[(i * self.rank + j) * self.rank + k]
    }

    /// Group ring of `Z/m`.
    pub fn cyclic_group_ring(m: usize) -> Self {
        let mut n = vec![0; m * m * m];
        for i in 0..m {
            for j in 0..m {
                n[(i * m + j) * m + (i + j) % m] = 1;
            }
        }
        FusionRing::new(m, n).expect("group ring")
    }

    /// Checks unit, duality, associativity and Frobenius reciprocity, all in
    /// integer arithmetic. The error names the first failing instance.
    pub fn verify_axioms(&self) -> Result<()> {
        let r = self.rank;
        for j in 0..r {
            for k in 0..r {
                let want = u32::from(j == k);
                if self.n(0, j, k) != want || self.n(j, 0, k) != want {
                    return Err(Error::AxiomViolation(format!(
                        "unit: N[0][{j}][{k}] or N[{j}][0][{k}] != {want}"
                    )));
                }
            }
        }
        for i in 0..r {
            if self.dual[self.dual[i]] != i {
                return Err(Error::AxiomViolation(format!("duality is not an involution at x{i}")));
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if self.n(i, j, k) != self.n(self.dual[i], k, j) {
                        return Err(Error::AxiomViolation(format!(
                            "reciprocity: N[{i}][{j}][{k}] = {} but N[{}][{k}][{j}] = {}",
                            self.n(i, j, k),
                            self.dual[i],
                            self.n(self.dual[i], k, j)
                        )));
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let lhs: u64 = (0..r)
                            .map(|m| u64::from(self.n(i, j, m)) * u64::from(self.n(m, k, l)))
                            .sum();
                        let rhs: u64 = (0..r)
                            .map(|m| u64::from(self.n(j, k, m)) * u64::from(self.n(i, m, l)))
                            .sum();
                        if lhs != rhs {
                            return Err(Error::AxiomViolation(format!(
                                "associativity: (x{i} x{j}) x{k} has {lhs} copies of x{l}, x{i} (x{j} x{k}) has {rhs}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn matrix_action(&self, i: usize, v: &[f64]) -> Vec<f64> {
        // (N_i v)_j = Σ_k N_{ij}^k v_k
        (0..self.rank)
            .map(|j| (0..self.rank).map(|k| f64::from(self.n(i, j, k)) * v[k]).sum())
            .collect()
    }

    /// Frobenius-Perron dimensions: the top eigenvalue of each `N_i`, by
    /// power iteration on `N_i + 1` (the shift keeps periodic matrices from
    /// oscillating).
    pub fn fp_dimensions(&self) -> Vec<f64> {
        let r = self.rank;
        (0..r)
            .map(|i| {
                let mut v = vec![1.0 / (r as f64).sqrt(); r];
                let mut lambda = 0.0;
                for _ in 0..100_000 {
                    let mut w = self.matrix_action(i, &v);
                    for (wj, vj) in w.iter_mut().zip(&v) {
                        *wj += vj;
                    }
                    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let next = norm - 1.0;
                    w.iter_mut().for_each(|x| *x /= norm);
                    let done = (next - lambda).abs() <= 1e-14 * next.abs().max(1.0);
                    lambda = next;
                    v = w;
                    if done {
                        break;
                    }
                }
                lambda
            })
            .collect()
    }

    /// Dimensions from the Perron vector of `Σ_i N_i`, normalized at the unit.
    pub fn perron_dimensions(&self) -> Vec<f64> {
        let r = self.rank;
        let mut v = vec![1.0; r];
        for _ in 0..100_000 {
            let mut w = vec![0.0; r];
            for i in 0..r {
                for (wj, x) in w.iter_mut().zip(self.matrix_action(i, &v)) {
                    *wj += x;
                }
            }
            for (wj, vj) in w.iter_mut().zip(&v) {
                *wj += vj;
            }
            let s = w[0];
            w.iter_mut().for_each(|x| *x /= s);
            let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = w;
            if delta < 1e-15 {
                break;
            }
        }
        v
    }

    /// Unital subsets closed under fusion and duality, by size then lexicographically.
    pub fn find_subrings(&self) -> Vec<Vec<usize>> {
        let r = self.rank;
        assert!(r <= MAX_RANK, "rank above {MAX_RANK}");
        let mut out = Vec::new();
        for mask in 0u32..(1 << (r - 1)) {
            let set: Vec<usize> = std::iter::once(0)
                .chain((1..r).filter(|&i| mask & (1 << (i - 1)) != 0))
                .collect();
            let inside = |k: usize| k == 0 || mask & (1 << (k - 1)) != 0;
            let closed = set.iter().all(|&i| inside(self.dual[i]))
                && set
                    .iter()
                    .all(|&i| set.iter().all(|&j| (0..r).all(|k| self.n(i, j, k) == 0 || inside(k))));
            if closed {
                out.push(set);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn report(&self) -> FusionReport {
        let axioms = self.verify_axioms().is_ok();
        let dims = self.fp_dimensions();
        let total_dim = dims.iter().map(|d| d * d).sum();
        let integral = dims.iter().all(|d| (d - d.round()).abs() < 1e-9);
        let subrings = self.find_subrings();
        FusionReport {
            rank: self.rank,
            axioms,
            dims,
            total_dim,
            integral,
            simple: subrings.len() <= 2,
            subrings,
        }
    }
}

/// Parses `r` blocks of `r` rows of `r` nonnegative integers. Blank lines,
/// `#` comments, commas and brackets are ignored; `r` is inferred from the
/// number of entries.
pub fn parse_fusion_text(text: &str) -> Result<FusionRing> {
    let mut values = Vec::new();
    for (line_start, line) in line_offsets(text) {
        let body = line.split('#').next().unwrap_or("");
        let mut token_start = None;
        for (off, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            let separator = ch.is_whitespace() || matches!(ch, ',' | '[' | ']' | '(' | ')' | ';');
            match (separator, token_start) {
                (false, None) => token_start = Some(off),
                (true, Some(s)) => {
                    let tok = &body[s..off];
                    let v: u32 = tok.parse().map_err(|_| {
                        Error::parse(line_start + s, format!("expected a nonnegative integer, got `{tok}`"))
                    })?;
                    values.push(v);
                    token_start = None;
                }
                _ => {}
            }
        }
    }
    let r = (1..=MAX_RANK).find(|r| r * r * r == values.len()).ok_or_else(|| {
        Error::parse(
            text.len(),
            format!("{} entries is not r^3 for any rank r <= {MAX_RANK}", values.len()),
        )
    })?;
    FusionRing::new(r, values)
}

fn line_offsets(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = 0;
    text.split('\n').map(move |l| {
        let s = start;
        start += l.len() + 1;
        (s, l)
    })
}

/// The fusion ring of `G` extracted from `C[G]` (trivial subgroup), with the
/// unit block first.
///
/// Multiplicities come from characters read off the central idempotents;
/// the support of each coproduct `p_i * p_j` must show the same nonzero
/// pattern or the computation is rejected.
pub fn fusion_from_context(ctx: &BoxContext, seed: u64) -> Result<FusionRing> {
    if !ctx.h_is_trivial() {
        return Err(Error::NotTrivialH);
    }
    let blocks = ctx.central_projections(Side::Primal, seed)?;
    let e1 = ctx.e1(Side::Primal);
    let unit = blocks
        .iter()
        .position(|b| crate::boxalgebra::distance(b, &e1) < 1e-8)
        .ok_or_else(|| Error::TheoremViolation("no central block equals e1".into()))?;
    let mut order: Vec<usize> = vec![unit];
    order.extend((0..blocks.len()).filter(|&i| i != unit));
    let blocks: Vec<Vec<C64>> = order.iter().map(|&i| blocks[i].clone()).collect();
    let r = blocks.len();
    let group = ctx.group();
    let n = group.order();
    let gfun: Vec<Vec<C64>> = blocks.iter().map(|b| ctx.to_group_coeffs(b)).collect();
    // P(g) = d χ(g^{-1}) / |G|
    let chars: Vec<Vec<C64>> = gfun
        .iter()
        .map(|f| {
            let d = (n as f64 * f[0].re).sqrt();
            (0..n).map(|g| f[group.inv(g)] * (n as f64 / d)).collect()
        })
        .collect();
    let mut tensor = vec![0u32; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let s: C64 = (0..n)
                    .map(|g| chars[i][g] * chars[j][g] * chars[k][g].conj())
                    .sum::<C64>()
                    / n as f64;
                let m = s.re.round();
                if (s.re - m).abs() > 1e-6 || s.im.abs() > 1e-6 || m < 0.0 {
                    return Err(Error::NumericRankAmbiguous { value: s.re });
                }
                tensor[(i * r + j) * r + k] = m as u32;
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let c = ctx.coproduct(Side::Primal, &blocks[i], &blocks[j]);
            for k in 0..r {
                let t = ctx.trace(Side::Primal, &ctx.mul(Side::Primal, &blocks[k], &c)).norm();
                let support = t > 1e-9;
                if support != (tensor[(i * r + j) * r + k] > 0) {
                    return Err(Error::TheoremViolation(format!(
                        "coproduct support of blocks {i},{j} at {k} disagrees with character fusion"
                    )));
                }
            }
        }
    }
    FusionRing::new(r, tensor)
}
