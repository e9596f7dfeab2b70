//! The 2-box spaces of the group-subgroup subfactor `(R^G ⊆ R^H)`.
//!
//! Both sides are realized on functions on `G` that are constant on the
//! double cosets `HgH`; an element is its vector of values, one per double
//! coset (index 0 is `H` itself).
//!
//! * primal side: `b_H·C[G]·b_H`, product = convolution, coproduct =
//!   `κ·(pointwise product)` with `κ = sqrt(|G||H|)`, `tr(x) = |H|·x(e)`;
//! * dual side: functions with pointwise product, coproduct = convolution
//!   divided by `κ`, `tr(x) = mean of x over G`.
//!
//! Positivity and range projections on the primal side go through the
//! left-regular representation of the compressed algebra on itself, in the
//! orthonormal basis `1_D/sqrt|D|`.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lattice::FiniteLattice;
use crate::linalg::{complex_rank, complex_solve_columns, hermitian_eigen, real_nullspace, CMatrix, C64};
use crate::permgroup::{FiniteGroup, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

/// Coefficient comparisons (idempotency, commutation, identities).
pub const TOL: f64 = 1e-9;
/// Relative eigenvalues inside this open band are treated as ambiguous.
pub const AMBIGUOUS_LOW: f64 = 1e-10;
pub const AMBIGUOUS_HIGH: f64 = 1e-6;
/// Minimum relative gap between distinct eigenvalues when splitting blocks.
pub const EIGEN_GAP: f64 = 1e-6;
const SPLIT_RETRIES: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `P_{2,+}(R^G ⊆ R^H) = b_H C[G] b_H`
    Primal,
    /// `P_{2,-}`, functions on `H\G/H`; equivalently `P_{2,+}` of the dual inclusion.
    Dual,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Primal => "primal",
            Side::Dual => "dual",
        }
    }
}

pub type Vector = Vec<C64>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn add(x: &[C64], y: &[C64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[C64], y: &[C64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale(x: &[C64], c: C64) -> Vector {
    x.iter().map(|a| a * c).collect()
}

pub fn max_abs(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn distance(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub struct BoxContext {
    label: String,
    group: Arc<FiniteGroup>,
    sub: Subgroup,
    interval: Interval,
    dcosets: Vec<BitSet>,
    dc_of: Vec<u32>,
    dc_size: Vec<f64>,
    dc_inv: Vec<usize>,
    /// `structure[d1 * d + d2]` lists `(d3, N)` with `1_{D1} conv 1_{D2} = Σ N·1_{D3}`.
    structure: Vec<Vec<(u32, f64)>>,
    /// double cosets contained in each interval subgroup
    interval_dcs: Vec<Vec<usize>>,
    delta: f64,
    kappa: f64,
    blocks: [Mutex<Option<Arc<Vec<Vector>>>>; 2],
}

impl std::fmt::Debug for BoxContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoxContext")
            .field("label", &self.label)
            .field("order", &self.group.order())
            .field("sub_order", &self.sub.order())
            .field("dim", &self.dim())
            .finish()
    }
}

impl BoxContext {
    pub fn new(group: Arc<FiniteGroup>, sub: Subgroup, label: impl Into<String>) -> Result<Arc<Self>> {
        let n = group.order();
        let interval = Interval::new(&group, &sub)?;
        let dcosets = group.double_cosets(&sub, &sub);
        let d = dcosets.len();
        let mut dc_of = vec![0u32; n];
        for (i, dc) in dcosets.iter().enumerate() {
            for g in dc.iter() {
                dc_of[g] = i as u32;
            }
        }
        let dc_size: Vec<f64> = dcosets.iter().map(|s| s.count() as f64).collect();
        let dc_inv = dcosets
            .iter()
            .map(|s| dc_of[group.inv(s.iter().next().unwrap())] as usize)
            .collect();
        let members: Vec<Vec<usize>> = dcosets.iter().map(|s| s.iter().collect()).collect();
        let mut structure = vec![Vec::new(); d * d];
        let mut counts = vec![0usize; d];
        for d1 in 0..d {
            for d2 in 0..d {
                for &a in &members[d1] {
                    for &b in &members[d2] {
                        counts[dc_of[group.mul(a, b)] as usize] += 1;
                    }
                }
                for (d3, c) in counts.iter_mut().enumerate() {
                    if *c > 0 {
                        structure[d1 * d + d2].push((d3 as u32, *c as f64 / dc_size[d3]));
                        *c = 0;
                    }
                }
            }
        }
        let interval_dcs = interval
            .subgroups()
            .iter()
            .map(|k| (0..d).filter(|&i| k.contains(members[i][0])).collect())
            .collect();
        let h = sub.order() as f64;
        let g = n as f64;
        Ok(Arc::new(BoxContext {
            label: label.into(),
            group,
            sub,
            interval,
            dcosets,
            dc_of,
            dc_size,
            dc_inv,
            structure,
            interval_dcs,
            delta: (g / h).sqrt(),
            kappa: (g * h).sqrt(),
            blocks: [Mutex::new(None), Mutex::new(None)],
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// Number of `(H,H)` double cosets: the dimension of either 2-box space.
    pub fn dim(&self) -> usize {
        self.dcosets.len()
    }

    pub fn double_cosets(&self) -> &[BitSet] {
        &self.dcosets
    }

    pub fn double_coset_of(&self, g: usize) -> usize {
        self.dc_of[g] as usize
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn h_is_trivial(&self) -> bool {
        self.sub.order() == 1
    }

    /// Value of `x` at every group element.
    pub fn to_group_coeffs(&self, x: &[C64]) -> Vector {
        self.dc_of.iter().map(|&i| x[i as usize]).collect()
    }

    /// Inverse of [`Self::to_group_coeffs`]; averages over each double coset.
    pub fn from_group_coeffs(&self, f: &[C64]) -> Vector {
        let mut out = vec![zero(); self.dim()];
        for (g, v) in f.iter().enumerate() {
            out[self.dc_of[g] as usize] += v;
        }
        out.iter().zip(&self.dc_size).map(|(v, s)| v / s).collect()
    }

    /// Distance of a full-G function from the bi-H-invariant functions.
    pub fn invariance_defect(&self, f: &[C64]) -> f64 {
        distance(&self.to_group_coeffs(&self.from_group_coeffs(f)), f)
    }

    fn convolve(&self, x: &[C64], y: &[C64]) -> Vector {
        let d = self.dim();
        let mut out = vec![zero(); d];
        for (d1, &a) in x.iter().enumerate() {
            if a == zero() {
                continue;
            }
            for (d2, &b) in y.iter().enumerate() {
                if b == zero() {
                    continue;
                }
                let ab = a * b;
                for &(d3, nn) in &self.structure[d1 * d + d2] {
                    out[d3 as usize] += ab * nn;
                }
            }
        }
        out
    }

    fn pointwise(&self, x: &[C64], y: &[C64]) -> Vector {
        x.iter().zip(y).map(|(a, b)| a * b).collect()
    }

    pub fn unit(&self, side: Side) -> Vector {
        match side {
            Side::Primal => self.biprojection(side, self.interval.bottom()),
            Side::Dual => self.biprojection(side, self.interval.top()),
        }
    }

    /// The Jones projection `e1`.
    pub fn e1(&self, side: Side) -> Vector {
        match side {
            Side::Primal => self.biprojection(side, self.interval.top()),
            Side::Dual => self.biprojection(side, self.interval.bottom()),
        }
    }

    /// Biprojection of the interval subgroup `k`: `b_K = 1_K/|K|` on the
    /// primal side, the indicator `1_K` on the dual side.
    pub fn biprojection(&self, side: Side, k: usize) -> Vector {
        let mut out = vec![zero(); self.dim()];
        let v = match side {
            Side::Primal => 1.0 / self.interval.subgroup(k).order() as f64,
            Side::Dual => 1.0,
        };
        for &i in &self.interval_dcs[k] {
            out[i] = C64::new(v, 0.0);
        }
        out
    }

    /// Interval index of the biprojection with `e1` at the bottom and `id` on top.
    pub fn e1_index(&self, side: Side) -> usize {
        match side {
            Side::Primal => self.interval.top(),
            Side::Dual => self.interval.bottom(),
        }
    }

    pub fn id_index(&self, side: Side) -> usize {
        match side {
            Side::Primal => self.interval.bottom(),
            Side::Dual => self.interval.top(),
        }
    }

    /// `b_K ≤ b_L` as projections.
    pub fn biprojection_leq(&self, side: Side, k: usize, l: usize) -> bool {
        let iv = self.interval.lattice();
        match side {
            Side::Primal => iv.leq(l, k),
            Side::Dual => iv.leq(k, l),
        }
    }

    pub fn mul(&self, side: Side, x: &[C64], y: &[C64]) -> Vector {
        match side {
            Side::Primal => self.convolve(x, y),
            Side::Dual => self.pointwise(x, y),
        }
    }

    pub fn coproduct(&self, side: Side, x: &[C64], y: &[C64]) -> Vector {
        match side {
            Side::Primal => scale(&self.pointwise(x, y), C64::new(self.kappa, 0.0)),
            Side::Dual => scale(&self.convolve(x, y), C64::new(1.0 / self.kappa, 0.0)),
        }
    }

    pub fn star(&self, side: Side, x: &[C64]) -> Vector {
        match side {
            Side::Primal => (0..self.dim()).map(|i| x[self.dc_inv[i]].conj()).collect(),
            Side::Dual => x.iter().map(|z| z.conj()).collect(),
        }
    }

    /// The antipode `x(g) -> x(g^{-1})`, same on both sides.
    pub fn contragredient(&self, x: &[C64]) -> Vector {
        (0..self.dim()).map(|i| x[self.dc_inv[i]]).collect()
    }

    pub fn trace(&self, side: Side, x: &[C64]) -> C64 {
        match side {
            Side::Primal => x[0] * self.sub.order() as f64,
            Side::Dual => {
                let g = self.group.order() as f64;
                x.iter().zip(&self.dc_size).map(|(v, s)| v * (s / g)).sum()
            }
        }
    }

    /// `<x|y> = tr(y* x)`.
    pub fn inner(&self, side: Side, x: &[C64], y: &[C64]) -> C64 {
        self.trace(side, &self.mul(side, &self.star(side, y), x))
    }

    /// Primal to dual: `x -> κ·x`; on `H = {1}` this sends `π(g)` to `δ·e_g`.
    pub fn fourier(&self, x: &[C64]) -> Vector {
        scale(x, C64::new(self.kappa, 0.0))
    }

    pub fn fourier_inv(&self, x: &[C64]) -> Vector {
        scale(x, C64::new(1.0 / self.kappa, 0.0))
    }

    /// `π(g)`, only defined when `H` is trivial.
    pub fn pi(&self, g: usize) -> Result<Vector> {
        if !self.h_is_trivial() {
            return Err(Error::NotTrivialH);
        }
        let mut out = vec![zero(); self.dim()];
        out[self.dc_of[g] as usize] = C64::new(1.0, 0.0);
        Ok(out)
    }

    /// Matrix of left multiplication on the primal algebra, orthonormal basis.
    pub fn left_matrix(&self, x: &[C64]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d);
        for (d1, &a) in x.iter().enumerate() {
            if a == zero() {
                continue;
            }
            for d2 in 0..d {
                for &(d3, nn) in &self.structure[d1 * d + d2] {
                    let d3 = d3 as usize;
                    let w = nn * (self.dc_size[d3] / self.dc_size[d2]).sqrt();
                    m.data[d3 * d + d2] += a * w;
                }
            }
        }
        m
    }

    /// Range projection of a positive element, with its rank (in the
    /// left-regular representation on the primal side, support size on the
    /// dual side).
    pub fn range(&self, side: Side, x: &[C64]) -> Result<(Vector, usize)> {
        match side {
            Side::Primal => self.primal_range(x),
            Side::Dual => self.dual_range(x),
        }
    }

    fn primal_range(&self, x: &[C64]) -> Result<(Vector, usize)> {
        let m = self.left_matrix(x);
        let scale_m = m.max_abs();
        if scale_m == 0.0 {
            return Ok((vec![zero(); self.dim()], 0));
        }
        if m.hermitian_defect() > TOL * scale_m.max(1.0) {
            return Err(Error::NotPositive { min: f64::NAN });
        }
        let e = hermitian_eigen(&m);
        let top = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let min = e.values[0];
        if min < -TOL * top.max(1.0) {
            return Err(Error::NotPositive { min });
        }
        let mut keep = Vec::new();
        for (k, &v) in e.values.iter().enumerate() {
            let rel = v / top;
            if rel > AMBIGUOUS_LOW && rel < AMBIGUOUS_HIGH {
                return Err(Error::NumericRankAmbiguous { value: rel });
            }
            if rel >= AMBIGUOUS_HIGH {
                keep.push(k);
            }
        }
        Ok((self.column_to_element(&e.projector_column(&keep, 0)), keep.len()))
    }

    /// `P(b_H)` for a projection matrix column: back to double-coset values.
    fn column_to_element(&self, col: &[C64]) -> Vector {
        let h = self.sub.order() as f64;
        col.iter().zip(&self.dc_size).map(|(c, s)| c / (h * s).sqrt()).collect()
    }

    fn dual_range(&self, x: &[C64]) -> Result<(Vector, usize)> {
        let top = max_abs(x);
        if top == 0.0 {
            return Ok((vec![zero(); self.dim()], 0));
        }
        let mut out = vec![zero(); self.dim()];
        let mut rank = 0;
        for (i, z) in x.iter().enumerate() {
            if z.im.abs() > TOL * top || z.re < -TOL * top {
                return Err(Error::NotPositive { min: z.re });
            }
            let rel = z.re / top;
            if rel > AMBIGUOUS_LOW && rel < AMBIGUOUS_HIGH {
                return Err(Error::NumericRankAmbiguous { value: rel });
            }
            if rel >= AMBIGUOUS_HIGH {
                out[i] = C64::new(1.0, 0.0);
                rank += 1;
            }
        }
        Ok((out, rank))
    }

    pub fn is_self_adjoint(&self, side: Side, x: &[C64]) -> bool {
        distance(x, &self.star(side, x)) <= TOL * max_abs(x).max(1.0)
    }

    pub fn is_projection(&self, side: Side, x: &[C64]) -> bool {
        self.is_self_adjoint(side, x) && distance(&self.mul(side, x, x), x) <= TOL
    }

    /// `R(x) ≤ R(y)`.
    pub fn leq_range(&self, side: Side, x: &[C64], y: &[C64]) -> Result<bool> {
        let (p, _) = self.range(side, x)?;
        let (q, _) = self.range(side, y)?;
        Ok(self.proj_leq(side, &p, &q))
    }

    /// `p ≤ q` for projections: `q p = p`.
    pub fn proj_leq(&self, side: Side, p: &[C64], q: &[C64]) -> bool {
        distance(&self.mul(side, q, p), p) <= 1e-8
    }

    /// Elements spanning the algebra: double-coset indicators.
    fn spanning_set(&self) -> Vec<Vector> {
        (0..self.dim())
            .map(|i| {
                let mut v = vec![zero(); self.dim()];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect()
    }

    /// Algebra generators to test commutation against: the group generators
    /// when `H` is trivial, the whole spanning set otherwise.
    fn commutation_tests(&self) -> Vec<usize> {
        if self.h_is_trivial() {
            let mut v: Vec<usize> = self
                .group
                .generators()
                .iter()
                .filter_map(|p| self.group.index_of(p))
                .map(|g| self.dc_of[g] as usize)
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        } else {
            (0..self.dim()).collect()
        }
    }

    pub fn is_central(&self, side: Side, x: &[C64]) -> bool {
        match side {
            Side::Dual => true,
            Side::Primal => {
                let tol = TOL * max_abs(x).max(1.0) * self.dim() as f64;
                let basis = self.spanning_set();
                self.commutation_tests().into_iter().all(|e| {
                    let s = &basis[e];
                    distance(&self.convolve(x, s), &self.convolve(s, x)) <= tol
                })
            }
        }
    }

    /// `dim(p A p) == 1`.
    pub fn is_minimal(&self, side: Side, p: &[C64]) -> bool {
        if max_abs(p) <= TOL {
            return false;
        }
        match side {
            Side::Dual => p.iter().filter(|z| z.norm() > 0.5).count() == 1,
            Side::Primal => {
                let rows: Vec<Vector> = self
                    .spanning_set()
                    .iter()
                    .map(|s| self.convolve(&self.convolve(p, s), p))
                    .collect();
                complex_rank(&rows, 1e-8) == 1
            }
        }
    }

    /// Basis of the center of the primal algebra (real-valued functions).
    fn primal_center_basis(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut rows = Vec::new();
        for e in self.commutation_tests() {
            // Σ_D c_D (N(D,E;·) - N(E,D;·)) = 0
            let mut block = vec![vec![0.0; d]; d];
            #[allow(clippy::needless_range_loop)]
            for dp in 0..d {
                for &(d3, nn) in &self.structure[dp * d + e] {
                    block[d3 as usize][dp] += nn;
                }
                for &(d3, nn) in &self.structure[e * d + dp] {
                    block[d3 as usize][dp] -= nn;
                }
            }
            rows.extend(block);
        }
        real_nullspace(&rows, d, 1e-9)
    }

    /// Minimal central projections, in a canonical order (by trace, then by
    /// coefficients), independent of the seed used to find them.
    pub fn central_projections(&self, side: Side, seed: u64) -> Result<Arc<Vec<Vector>>> {
        let slot = &self.blocks[side as usize];
        if let Some(b) = slot.lock().unwrap().as_ref() {
            return Ok(b.clone());
        }
        let blocks = match side {
            Side::Dual => self.spanning_set(),
            Side::Primal => {
                let mut last = Error::NumericRankAmbiguous { value: f64::NAN };
                let mut found = None;
                for attempt in 0..SPLIT_RETRIES {
                    match self.split_center(seed.wrapping_add(attempt)) {
                        Ok(b) => {
                            found = Some(b);
                            break;
                        }
                        Err(e @ Error::NumericRankAmbiguous { .. }) => last = e,
                        Err(e) => return Err(e),
                    }
                }
                let mut b = found.ok_or(last)?;
                b.sort_by_cached_key(|x| canonical_key(self, x));
                b
            }
        };
        let blocks = Arc::new(blocks);
        *slot.lock().unwrap() = Some(blocks.clone());
        Ok(blocks)
    }

    fn split_center(&self, seed: u64) -> Result<Vec<Vector>> {
        let basis = self.primal_center_basis();
        let r = basis.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = vec![zero(); self.dim()];
        for b in &basis {
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi += c * bi;
            }
        }
        let z = add(&z, &self.star(Side::Primal, &z));
        let e = hermitian_eigen(&self.left_matrix(&z));
        let clusters = cluster_eigenvalues(&e.values)?;
        if clusters.len() != r {
            return Err(Error::NumericRankAmbiguous { value: f64::NAN });
        }
        Ok(clusters
            .iter()
            .map(|c| self.column_to_element(&e.projector_column(c, 0)))
            .collect())
    }

    /// A minimal projection under the central projection `p`, drawn from the
    /// spectrum of a random self-adjoint element of `pAp`.
    pub fn minimal_under(&self, side: Side, p: &[C64], rng: &mut ChaCha8Rng) -> Result<Vector> {
        if self.is_minimal(side, p) {
            return Ok(p.to_vec());
        }
        match side {
            Side::Dual => {
                let supp: Vec<usize> = (0..self.dim()).filter(|&i| p[i].norm() > 0.5).collect();
                let i = supp[rng.gen_range(0..supp.len())];
                let mut v = vec![zero(); self.dim()];
                v[i] = C64::new(1.0, 0.0);
                Ok(v)
            }
            Side::Primal => {
                for _ in 0..SPLIT_RETRIES {
                    let x: Vector = (0..self.dim())
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    let h = add(&x, &self.star(Side::Primal, &x));
                    let shift = 2.0 * self.left_matrix(&h).max_abs() * self.dim() as f64 + 1.0;
                    let h = add(&h, &scale(&self.unit(Side::Primal), C64::new(shift, 0.0)));
                    let s = self.convolve(&self.convolve(p, &h), p);
                    let e = hermitian_eigen(&self.left_matrix(&s));
                    let top = e.values.last().copied().unwrap_or(0.0);
                    let positive: Vec<f64> = e
                        .values
                        .iter()
                        .map(|&v| if v > 0.5 * shift.min(top) { v } else { 0.0 })
                        .collect();
                    let Ok(clusters) = cluster_eigenvalues(&positive) else {
                        continue;
                    };
                    let last = clusters.last().unwrap().clone();
                    let v = self.column_to_element(&e.projector_column(&last, 0));
                    if self.is_minimal(side, &v) {
                        return Ok(v);
                    }
                }
                Err(Error::NumericRankAmbiguous { value: f64::NAN })
            }
        }
    }

    /// Interval index of the biprojection `p`, identified by its support.
    pub fn identify_biprojection(&self, side: Side, p: &[C64]) -> Result<usize> {
        let n = self.group.order();
        let cut = match side {
            Side::Primal => 0.5 / n as f64,
            Side::Dual => 0.5,
        };
        let supp = BitSet::from_indices(n, (0..n).filter(|&g| p[self.dc_of[g] as usize].norm() > cut));
        let k = self.interval.index_of(&supp).ok_or_else(|| {
            Error::BiprojectionCheckFailed(format!(
                "support of size {} is not an intermediate subgroup",
                supp.count()
            ))
        })?;
        let dev = distance(p, &self.biprojection(side, k));
        if dev > 1e-7 {
            return Err(Error::BiprojectionCheckFailed(format!("deviation {dev:e} from b_K")));
        }
        Ok(k)
    }

    /// `<x>`: the biprojection generated by a positive element.
    ///
    /// Squares ranges: `p_{n+1} = R(p_n + p_n * p_n)` from `p_0 = R(x)`, so
    /// `p_n` is the range of `Σ_{k≤2^n} x^{*k}`. Every step stays under the
    /// generated biprojection, and a stable `p` has `p * p ⪯ p`, hence is it.
    pub fn generate(&self, side: Side, x: &[C64]) -> Result<usize> {
        let (q, rq) = self.range(side, x)?;
        if rq == 0 {
            return Ok(self.e1_index(side));
        }
        let mut p = q;
        let mut rank = rq;
        for _ in 0..=self.dim() {
            let s = add(&p, &self.coproduct(side, &p, &p));
            let (next, r) = self.range(side, &s)?;
            if r == rank {
                return self.identify_biprojection(side, &next);
            }
            p = next;
            rank = r;
        }
        Err(Error::BiprojectionCheckFailed("generation did not stabilize".into()))
    }

    /// `<S> = <Σ s>`.
    pub fn generate_set(&self, side: Side, xs: &[&[C64]]) -> Result<usize> {
        let mut s = vec![zero(); self.dim()];
        for x in xs {
            s = add(&s, x);
        }
        self.generate(side, &s)
    }

    /// `{g : g·x = x}` for a primal element seen as a function on G.
    pub fn translation_stabilizer(&self, x: &[C64]) -> Subgroup {
        let f = self.to_group_coeffs(x);
        let n = self.group.order();
        let tol = 1e-8 * max_abs(&f).max(f64::MIN_POSITIVE);
        let stab = (0..n).filter(|&g| {
            let gi = self.group.inv(g);
            (0..n).all(|z| (f[self.group.mul(gi, z)] - f[z]).norm() <= tol)
        });
        Subgroup::from_bitset(BitSet::from_indices(n, stab))
    }

    /// Normality of the interval subgroup `k` via `HgK = KgH`.
    pub fn is_normal_biprojection(&self, k: usize) -> bool {
        self.group.is_normal_intermediate(&self.sub, self.interval.subgroup(k))
    }

    /// Normality from the algebra: `b_K` and its Fourier image are central.
    /// The dual side is commutative, so only primal centrality carries weight.
    pub fn is_normal_biprojection_numeric(&self, k: usize) -> bool {
        self.is_central(Side::Primal, &self.biprojection(Side::Primal, k))
            && self.is_central(Side::Dual, &self.biprojection(Side::Dual, k))
    }

    /// Order on biprojections computed from the projections themselves.
    pub fn biprojection_lattice(&self, side: Side) -> FiniteLattice {
        let m = self.interval.len();
        let ps: Vec<Vector> = (0..m).map(|k| self.biprojection(side, k)).collect();
        let labels = (0..m).map(|k| self.interval.lattice().label(k).to_string()).collect();
        FiniteLattice::from_order_labeled(m, |a, b| self.proj_leq(side, &ps[a], &ps[b]), labels)
            .expect("biprojections form a lattice")
    }

    fn check_nested(&self, k: &Subgroup) -> Result<()> {
        if self.sub.is_subgroup_of(k) && self.group.is_subgroup(k.members()) {
            Ok(())
        } else {
            Err(Error::NotNested)
        }
    }

    /// Context of `(R^G ⊆ R^K)`, i.e. the interval `[K,G]`; its elements sit
    /// inside this one as `b_K A b_K` (see [`Self::embed_upper`]).
    pub fn compress_upper(&self, k: &Subgroup) -> Result<Arc<BoxContext>> {
        self.check_nested(k)?;
        let label = format!("{}|upper{}", self.label, k.order());
        BoxContext::new(self.group.clone(), k.clone(), label)
    }

    /// Context of `(R^K ⊆ R^H)`, i.e. the interval `[H,K]` with `K` as the
    /// new ambient group; its elements sit inside this one as functions
    /// supported on `K` (see [`Self::embed_lower`]).
    pub fn compress_lower(&self, k: &Subgroup) -> Result<Arc<BoxContext>> {
        self.check_nested(k)?;
        let gens: Vec<_> = self
            .group
            .small_generating_set(k.members())
            .into_iter()
            .map(|g| self.group.element(g).clone())
            .collect();
        let gens = if gens.is_empty() {
            vec![self.group.element(0).clone()]
        } else {
            gens
        };
        let kg = Arc::new(FiniteGroup::from_generators_capped(&gens, self.group.order())?);
        let h = Subgroup::from_bitset(BitSet::from_indices(
            kg.order(),
            self.sub.elements().map(|x| kg.index_of(self.group.element(x)).unwrap()),
        ));
        let label = format!("{}|lower{}", self.label, k.order());
        BoxContext::new(kg, h, label)
    }

    /// Context of `(R^{big} ⊆ R^{small})` for interval indices `small ≤ big`,
    /// built as an upper compression of a lower one.
    pub fn section(&self, big: usize, small: usize) -> Result<Arc<BoxContext>> {
        let kb = self.interval.subgroup(big);
        let ks = self.interval.subgroup(small);
        if !ks.is_subgroup_of(kb) {
            return Err(Error::NotNested);
        }
        let lower = if big == self.interval.top() {
            BoxContext::new(self.group.clone(), self.sub.clone(), self.label.clone())?
        } else {
            self.compress_lower(kb)?
        };
        if small == self.interval.bottom() {
            return Ok(lower);
        }
        let lg = lower.group();
        let mapped = Subgroup::from_bitset(BitSet::from_indices(
            lg.order(),
            ks.elements().map(|x| lg.index_of(self.group.element(x)).unwrap()),
        ));
        lower.compress_upper(&mapped)
    }

    /// Biprojection lattice order as a lattice on interval indices: the
    /// reversed subgroup interval on the primal side, the interval itself on
    /// the dual side.
    pub fn oriented_lattice(&self, side: Side) -> FiniteLattice {
        match side {
            Side::Primal => self.interval.lattice().dual(),
            Side::Dual => self.interval.lattice().clone(),
        }
    }

    /// Reinterprets an element of `compress_upper(K)` as an element here.
    pub fn embed_upper(&self, upper: &BoxContext, x: &[C64]) -> Vector {
        self.dcosets
            .iter()
            .map(|dc| x[upper.dc_of[dc.iter().next().unwrap()] as usize])
            .collect()
    }

    /// Extends an element of `compress_lower(K)` by zero off `K`.
    pub fn embed_lower(&self, lower: &BoxContext, x: &[C64]) -> Vector {
        self.dcosets
            .iter()
            .map(|dc| {
                let g = dc.iter().next().unwrap();
                match lower.group.index_of(self.group.element(g)) {
                    Some(i) => x[lower.dc_of[i] as usize],
                    None => zero(),
                }
            })
            .collect()
    }

    /// Interval index (in this context) of an interval subgroup of a
    /// compressed context.
    pub fn lift_index(&self, other: &BoxContext, k: usize) -> Option<usize> {
        let sub = other.interval.subgroup(k);
        let members = BitSet::from_indices(
            self.group.order(),
            sub.elements()
                .map(|x| self.group.index_of(other.group.element(x)))
                .collect::<Option<Vec<_>>>()?,
        );
        self.interval.index_of(&members)
    }

    /// Structure constants of `*` in `basis`: `entries[i][j][k]` is the
    /// coefficient of `basis[k]` in `basis[i] * basis[j]`.
    pub fn coproduct_table(&self, side: Side, basis: &[Vector]) -> Result<Vec<Vec<Vector>>> {
        let d = self.dim();
        let rank = complex_rank(basis, 1e-10);
        if basis.len() != d || rank < d {
            return Err(Error::BasisNotSpanning { rank, dim: d });
        }
        let mut out = Vec::with_capacity(d);
        for a in basis {
            let mut row = Vec::with_capacity(d);
            for b in basis {
                let c = self.coproduct(side, a, b);
                row.push(complex_solve_columns(basis, &c, 1e-12).ok_or(Error::BasisNotSpanning { rank, dim: d })?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Uniformly random element (coefficients in the unit square).
    pub fn random_element(&self, rng: &mut impl Rng) -> Vector {
        (0..self.dim())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    /// Random positive element `x x*`.
    pub fn random_positive(&self, side: Side, rng: &mut impl Rng) -> Vector {
        let x = self.random_element(rng);
        self.mul(side, &x, &self.star(side, &x))
    }

    /// Random projection: positive spectral part of a random self-adjoint element.
    pub fn random_projection(&self, side: Side, rng: &mut impl Rng) -> Result<Vector> {
        match side {
            Side::Dual => Ok((0..self.dim())
                .map(|_| C64::new(if rng.gen_bool(0.5) { 1.0 } else { 0.0 }, 0.0))
                .collect()),
            Side::Primal => {
                let x = self.random_element(rng);
                let h = add(&x, &self.star(side, &x));
                let e = hermitian_eigen(&self.left_matrix(&h));
                let top = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let keep: Vec<usize> = (0..self.dim()).filter(|&k| e.values[k] > 1e-3 * top).collect();
                Ok(self.column_to_element(&e.projector_column(&keep, 0)))
            }
        }
    }
}

/// Groups ascending eigenvalues into clusters of numerically equal values.
fn cluster_eigenvalues(values: &[f64]) -> Result<Vec<Vec<usize>>> {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) => {
                let gap = (v - values[*c.last().unwrap()]) / scale;
                if gap <= 1e-9 {
                    c.push(k);
                } else if gap < EIGEN_GAP {
                    return Err(Error::NumericRankAmbiguous { value: gap });
                } else {
                    clusters.push(vec![k]);
                }
            }
            None => clusters.push(vec![k]),
        }
    }
    Ok(clusters)
}

fn canonical_key(ctx: &BoxContext, x: &[C64]) -> (i64, Vec<(i64, i64)>) {
    let q = |v: f64| (v * 1e7).round() as i64;
    (
        q(ctx.trace(Side::Primal, x).re),
        x.iter().map(|z| (q(z.re), q(z.im))).collect(),
    )
}

/// Marker for which 2-box space an [`Element`] lives in.
pub trait SideKind: Clone + std::fmt::Debug {
    const SIDE: Side;
}

#[derive(Clone, Debug)]
pub struct PrimalSide;
#[derive(Clone, Debug)]
pub struct DualSide;

impl SideKind for PrimalSide {
    const SIDE: Side = Side::Primal;
}
impl SideKind for DualSide {
    const SIDE: Side = Side::Dual;
}

/// An element tied to its context.
#[derive(Clone, Debug)]
pub struct Element<S: SideKind> {
    ctx: Arc<BoxContext>,
    coeffs: Vector,
    _side: PhantomData<S>,
}

pub type BoxElement = Element<PrimalSide>;
pub type DualElement = Element<DualSide>;

/// A biprojection together with the intermediate subgroup it comes from.
#[derive(Clone, Debug)]
pub struct Biprojection<S: SideKind> {
    pub element: Element<S>,
    pub interval_index: usize,
    pub subgroup: Subgroup,
}

impl<S: SideKind> Element<S> {
    pub fn new(ctx: Arc<BoxContext>, coeffs: Vector) -> Result<Self> {
        if coeffs.len() != ctx.dim() {
            return Err(Error::ContextMismatch);
        }
        Ok(Element {
            ctx,
            coeffs,
            _side: PhantomData,
        })
    }

    fn wrap(&self, coeffs: Vector) -> Self {
        Element {
            ctx: self.ctx.clone(),
            coeffs,
            _side: PhantomData,
        }
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn unit(ctx: &Arc<BoxContext>) -> Self {
        Element::new(ctx.clone(), ctx.unit(S::SIDE)).unwrap()
    }

    pub fn e1(ctx: &Arc<BoxContext>) -> Self {
        Element::new(ctx.clone(), ctx.e1(S::SIDE)).unwrap()
    }

    /// The biprojection of an intermediate subgroup `H ≤ K ≤ G`.
    pub fn biprojection(ctx: &Arc<BoxContext>, k: &Subgroup) -> Result<Self> {
        let i = ctx.interval().index_of(k.members()).ok_or(Error::NotNested)?;
        Element::new(ctx.clone(), ctx.biprojection(S::SIDE, i))
    }

    pub fn context(&self) -> &Arc<BoxContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn group_coeffs(&self) -> Vector {
        self.ctx.to_group_coeffs(&self.coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.ctx.mul(S::SIDE, &self.coeffs, &other.coeffs)))
    }

    pub fn coproduct(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.ctx.coproduct(S::SIDE, &self.coeffs, &other.coeffs)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(add(&self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(sub(&self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.wrap(scale(&self.coeffs, c))
    }

    pub fn star(&self) -> Self {
        self.wrap(self.ctx.star(S::SIDE, &self.coeffs))
    }

    pub fn contragredient(&self) -> Self {
        self.wrap(self.ctx.contragredient(&self.coeffs))
    }

    pub fn trace(&self) -> C64 {
        self.ctx.trace(S::SIDE, &self.coeffs)
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same(other)?;
        Ok(self.ctx.inner(S::SIDE, &self.coeffs, &other.coeffs))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        distance(&self.coeffs, &other.coeffs)
    }

    pub fn is_projection(&self) -> bool {
        self.ctx.is_projection(S::SIDE, &self.coeffs)
    }

    pub fn is_central(&self) -> bool {
        self.ctx.is_central(S::SIDE, &self.coeffs)
    }

    pub fn is_minimal(&self) -> bool {
        self.ctx.is_minimal(S::SIDE, &self.coeffs)
    }

    pub fn range_projection(&self) -> Result<Self> {
        Ok(self.wrap(self.ctx.range(S::SIDE, &self.coeffs)?.0))
    }

    pub fn leq_range(&self, other: &Self) -> Result<bool> {
        self.same(other)?;
        self.ctx.leq_range(S::SIDE, &self.coeffs, &other.coeffs)
    }

    /// Sum of the minimal central projections not orthogonal to `self`.
    pub fn central_support(&self, seed: u64) -> Result<Self> {
        let blocks = self.ctx.central_projections(S::SIDE, seed)?;
        let mut out = vec![zero(); self.ctx.dim()];
        for b in blocks.iter() {
            if max_abs(&self.ctx.mul(S::SIDE, b, &self.coeffs)) > 1e-8 {
                out = add(&out, b);
            }
        }
        Ok(self.wrap(out))
    }

    pub fn generate_biprojection(&self) -> Result<Biprojection<S>> {
        let k = self.ctx.generate(S::SIDE, &self.coeffs)?;
        Ok(Biprojection {
            element: self.wrap(self.ctx.biprojection(S::SIDE, k)),
            interval_index: k,
            subgroup: self.ctx.interval().subgroup(k).clone(),
        })
    }

    /// The subgroup `K` when `self` is the biprojection `b_K`.
    pub fn as_biprojection(&self) -> Result<Subgroup> {
        if !self.is_projection() {
            return Err(Error::NotABiprojection);
        }
        self.ctx
            .identify_biprojection(S::SIDE, &self.coeffs)
            .map(|k| self.ctx.interval().subgroup(k).clone())
            .map_err(|_| Error::NotABiprojection)
    }

    pub fn minimal_central_projections(ctx: &Arc<BoxContext>, seed: u64) -> Result<Vec<Self>> {
        Ok(ctx
            .central_projections(S::SIDE, seed)?
            .iter()
            .map(|b| Element::new(ctx.clone(), b.clone()).unwrap())
            .collect())
    }
}

impl BoxElement {
    /// `π(g)`; needs a trivial subgroup.
    pub fn pi(ctx: &Arc<BoxContext>, g: usize) -> Result<Self> {
        Element::new(ctx.clone(), ctx.pi(g)?)
    }

    pub fn fourier(&self) -> DualElement {
        Element {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.fourier(&self.coeffs),
            _side: PhantomData,
        }
    }
}

impl DualElement {
    pub fn fourier_inv(&self) -> BoxElement {
        Element {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.fourier_inv(&self.coeffs),
            _side: PhantomData,
        }
    }
}

/// One row per ordered basis pair, scaled by `scale`, for text/JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct CoproductTable {
    pub side: Side,
    pub basis: Vec<String>,
    pub scale: f64,
    pub scale_label: String,
    /// `entries[i][j][k]`: coefficient of `basis[k]` in `basis[i] * basis[j]`, times `scale`.
    #[serde(serialize_with = "serialize_entries")]
    pub entries: Vec<Vec<Vec<C64>>>,
}

fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return 0.0;
    }
    let s: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    if s.abs() < 1e-12 {
        0.0
    } else {
        s
    }
}

fn serialize_entries<Sr: serde::Serializer>(e: &[Vec<Vec<C64>>], s: Sr) -> std::result::Result<Sr::Ok, Sr::Error> {
    use serde::ser::SerializeSeq;
    let mut outer = s.serialize_seq(Some(e.len()))?;
    for row in e {
        let r: Vec<Vec<[f64; 2]>> = row
            .iter()
            .map(|cell| cell.iter().map(|z| [round_sig(z.re), round_sig(z.im)]).collect())
            .collect();
        outer.serialize_element(&r)?;
    }
    outer.end()
}

impl CoproductTable {
    pub fn build(ctx: &BoxContext, side: Side, basis: &[Vector], labels: Vec<String>) -> Result<Self> {
        let raw = ctx.coproduct_table(side, basis)?;
        let sc = ctx.delta();
        let entries = raw
            .into_iter()
            .map(|row| row.into_iter().map(|cell| scale(&cell, C64::new(sc, 0.0))).collect())
            .collect();
        Ok(CoproductTable {
            side,
            basis: labels,
            scale: sc,
            scale_label: format!("sqrt({})", ctx.group().order() / ctx.subgroup().order()),
            entries,
        })
    }

    /// Aligned text: one line per row element, cells separated by `|`.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|cell| format_combination(cell, &self.basis)).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(|c| c.chars().count())
            .chain(self.basis.iter().map(|b| b.chars().count()))
            .max()
            .unwrap_or(1);
        let lw = self.basis.iter().map(|b| b.chars().count()).max().unwrap_or(1);
        let mut out = format!(
            "# {} coproduct table, entries multiplied by {}\n",
            self.side.name(),
            self.scale_label
        );
        out.push_str(&format!("{:>lw$} |", "*"));
        for b in &self.basis {
            out.push_str(&format!(" {b:>width$} |"));
        }
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            out.push_str(&format!("{:>lw$} |", self.basis[i]));
            for c in row {
                out.push_str(&format!(" {c:>width$} |"));
            }
            out.push('\n');
        }
        out
    }
}

fn format_scalar(z: C64) -> String {
    let fmt = |v: f64| {
        let r = v.round();
        if (v - r).abs() < 1e-9 {
            format!("{}", r as i64)
        } else {
            format!("{v:.6}")
        }
    };
    if z.im.abs() < 1e-9 {
        fmt(z.re)
    } else if z.re.abs() < 1e-9 {
        format!("{}i", fmt(z.im))
    } else {
        format!("({}{:+}i)", fmt(z.re), z.im)
    }
}

/// `2e1 + e2`-style rendering of a coefficient vector.
pub fn format_combination(cell: &[C64], basis: &[String]) -> String {
    let mut parts = Vec::new();
    for (z, b) in cell.iter().zip(basis) {
        if z.norm() < 1e-9 {
            continue;
        }
        let s = format_scalar(*z);
        let term = match s.as_str() {
            "1" => b.clone(),
            "-1" => format!("-{b}"),
            _ => format!("{s}{b}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(&format!(" - {rest}"));
        } else {
            out.push_str(&format!(" + {p}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, parse_subgroup_spec};

    pub(crate) fn ctx(group: &str, sub: &str) -> Arc<BoxContext> {
        let g = Arc::new(lookup(group).unwrap().build().unwrap());
        let h = parse_subgroup_spec(&g, sub).unwrap();
        BoxContext::new(g, h, format!("{group}/{sub}")).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn traces_of_e1_and_id() {
        for (g, h) in [
            ("S3", "trivial"),
            ("S4", "(1,2)"),
            ("Z6", "trivial"),
            ("S4", "(1,2)(3,4)"),
        ] {
            let k = ctx(g, h);
            for side in [Side::Primal, Side::Dual] {
                let d2 = k.delta() * k.delta();
                assert!((k.trace(side, &k.e1(side)) - 1.0 / d2).norm() < 1e-12);
                assert!((k.trace(side, &k.unit(side)) - 1.0).norm() < 1e-12);
                let inner = k.inner(side, &k.e1(side), &k.e1(side));
                assert!((inner - 1.0 / d2).norm() < 1e-12);
            }
            let bg = k.to_group_coeffs(&k.e1(Side::Primal));
            assert!(bg.iter().all(|z| (z - 1.0 / k.group().order() as f64).norm() < 1e-15));
        }
    }

    #[test]
    fn pi_relations() {
        let k = ctx("S3", "trivial");
        let g = k.group().clone();
        for a in 0..6 {
            for b in 0..6 {
                let pa = k.pi(a).unwrap();
                let pb = k.pi(b).unwrap();
                assert!(distance(&k.mul(Side::Primal, &pa, &pb), &k.pi(g.mul(a, b)).unwrap()) < 1e-14);
                let cp = k.coproduct(Side::Primal, &pa, &pb);
                let expect = if a == b {
                    scale(&pa, c(k.delta()))
                } else {
                    vec![zero(); 6]
                };
                assert!(distance(&cp, &expect) < 1e-14);
                // dual: e_a * e_b = |G|^{-1/2} e_{ab}
                let dc = k.coproduct(Side::Dual, &pa, &pb);
                assert!(distance(&dc, &scale(&k.pi(g.mul(a, b)).unwrap(), c(1.0 / 6f64.sqrt()))) < 1e-14);
            }
        }
        assert_eq!(ctx("S4", "(1,2)").pi(0), Err(Error::NotTrivialH));
    }

    #[test]
    fn coproduct_identities_for_biprojections() {
        let k = ctx("S4", "(1,2)");
        for side in [Side::Primal, Side::Dual] {
            for i in 0..k.interval().len() {
                let b = k.biprojection(side, i);
                let bb = k.coproduct(side, &b, &b);
                let t = k.trace(side, &b);
                assert!(distance(&bb, &scale(&b, t * k.delta())) < 1e-12);
                assert!(k.is_projection(side, &b));
                assert_eq!(k.identify_biprojection(side, &b).unwrap(), i);
            }
        }
    }

    #[test]
    fn central_projection_traces_for_s3() {
        let k = ctx("S3", "trivial");
        let blocks = k.central_projections(Side::Primal, 5).unwrap();
        let mut traces: Vec<f64> = blocks.iter().map(|p| k.trace(Side::Primal, p).re).collect();
        traces.sort_by(f64::total_cmp);
        let expect = [1.0 / 6.0, 1.0 / 6.0, 4.0 / 6.0];
        for (a, b) in traces.iter().zip(expect) {
            assert!((a - b).abs() < 1e-10);
        }
        let sum = blocks.iter().fold(vec![zero(); 6], |a, b| add(&a, b));
        assert!(distance(&sum, &k.unit(Side::Primal)) < 1e-10);
        for p in blocks.iter() {
            assert!(k.is_projection(Side::Primal, p));
            assert!(k.is_central(Side::Primal, p));
            let pbar = k.contragredient(p);
            assert!(k.is_projection(Side::Primal, &pbar));
        }
        assert!(k.is_minimal(Side::Primal, &k.e1(Side::Primal)));
    }

    #[test]
    fn center_split_is_seed_independent() {
        let a = ctx("S4", "(1,2)");
        let b = ctx("S4", "(1,2)");
        let pa = a.central_projections(Side::Primal, 1).unwrap();
        let pb = b.central_projections(Side::Primal, 99).unwrap();
        assert_eq!(pa.len(), 4);
        for (x, y) in pa.iter().zip(pb.iter()) {
            assert!(distance(x, y) < 1e-9);
        }
    }

    #[test]
    fn sign_line_generates_a3() {
        let k = ctx("S3", "trivial");
        let g = k.group().clone();
        // p = (1/6) Σ sign(g) g
        let sign = |x: usize| {
            if g.element(x).cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let f: Vec<C64> = (0..6).map(|x| c(sign(x) / 6.0)).collect();
        let p = k.from_group_coeffs(&f);
        assert!(k.is_projection(Side::Primal, &p));
        let b = k.generate(Side::Primal, &p).unwrap();
        assert_eq!(k.interval().subgroup(b).order(), 3);
        assert_eq!(
            k.generate(Side::Primal, &k.e1(Side::Primal)).unwrap(),
            k.e1_index(Side::Primal)
        );
    }

    #[test]
    fn range_projection_basics() {
        let k = ctx("S3", "trivial");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = k.random_projection(Side::Primal, &mut rng).unwrap();
        assert!(k.is_projection(Side::Primal, &p));
        let (r, _) = k.range(Side::Primal, &p).unwrap();
        assert!(distance(&r, &p) < 1e-10);
        let (r3, _) = k.range(Side::Primal, &scale(&p, c(3.0))).unwrap();
        assert!(distance(&r3, &p) < 1e-10);
        let neg = scale(&k.unit(Side::Primal), c(-1.0));
        assert!(matches!(k.range(Side::Primal, &neg), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn range_of_sum_of_biprojections_matches_eigen_oracle() {
        // in C[S3]: R(b_K + b_L) for K = <(1,2)>, L = <(1,2,3)>
        let k = ctx("S3", "trivial");
        let g = k.group().clone();
        let kk = k.interval().subgroups().iter().position(|s| s.order() == 2).unwrap();
        let ll = k.interval().subgroups().iter().position(|s| s.order() == 3).unwrap();
        let x = add(&k.biprojection(Side::Primal, kk), &k.biprojection(Side::Primal, ll));
        let (r, rank) = k.range(Side::Primal, &x).unwrap();
        // oracle: span of the ranges = column space of the 6x6 regular matrix, via nalgebra
        let f = k.to_group_coeffs(&x);
        let m = nalgebra::DMatrix::from_fn(6, 6, |i, j| {
            // (x * e_j)_i = x(i j^{-1})
            let z = f[g.mul(i, g.inv(j))];
            nalgebra::Complex::new(z.re, z.im)
        });
        let rank_oracle = m
            .svd(false, false)
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-9)
            .count();
        assert_eq!(rank, rank_oracle);
        assert!((k.trace(Side::Primal, &r).re - rank_oracle as f64 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn biprojection_lattice_is_reversed_interval() {
        let k = ctx("S3", "trivial");
        let l = k.biprojection_lattice(Side::Primal);
        assert_eq!(l.len(), 6);
        let iv = k.interval().lattice();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(l.leq(a, b), iv.leq(b, a));
            }
        }
        let d = k.biprojection_lattice(Side::Dual);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(d.leq(a, b), iv.leq(a, b));
            }
        }
    }

    #[test]
    fn normal_biprojections_in_s3() {
        let k = ctx("S3", "trivial");
        for i in 0..k.interval().len() {
            let o = k.interval().subgroup(i).order();
            let normal = k.is_normal_biprojection(i);
            assert_eq!(normal, o != 2, "order {o}");
            assert_eq!(normal, k.is_normal_biprojection_numeric(i));
        }
    }

    #[test]
    fn compressions_have_expected_index_and_commute_with_generation() {
        let k = ctx("S4", "trivial");
        let s3 = parse_subgroup_spec(k.group(), "(1,2);(1,2,3)").unwrap();
        let s2 = parse_subgroup_spec(k.group(), "(1,2)").unwrap();
        let lower = k.compress_lower(&s3).unwrap();
        assert!((lower.delta() - 6f64.sqrt()).abs() < 1e-12);
        let upper = k.compress_upper(&s2).unwrap();
        assert!((upper.delta() - 12f64.sqrt()).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            // random positive supported on a random biprojection of the lower context
            let j = rng.gen_range(0..lower.interval().len());
            let b = lower.biprojection(Side::Primal, j);
            let a = lower.random_positive(Side::Primal, &mut rng);
            let a = lower.mul(Side::Primal, &lower.mul(Side::Primal, &b, &a), &b);
            let inner = lower.generate(Side::Primal, &a).unwrap();
            let outer = k.generate(Side::Primal, &k.embed_lower(&lower, &a)).unwrap();
            assert_eq!(k.lift_index(&lower, inner), Some(outer));

            let j = rng.gen_range(0..upper.interval().len());
            let b = upper.biprojection(Side::Primal, j);
            let a = upper.random_positive(Side::Primal, &mut rng);
            let a = upper.mul(Side::Primal, &upper.mul(Side::Primal, &b, &a), &b);
            let inner = upper.generate(Side::Primal, &a).unwrap();
            let outer = k.generate(Side::Primal, &k.embed_upper(&upper, &a)).unwrap();
            assert_eq!(k.lift_index(&upper, inner), Some(outer));
        }
        let z4 = parse_subgroup_spec(k.group(), "(1,2,3,4)").unwrap();
        assert_eq!(upper.compress_lower(&z4).unwrap_err(), Error::NotNested);
    }

    #[test]
    fn element_wrappers_check_contexts() {
        let a = ctx("S3", "trivial");
        let b = ctx("S3", "trivial");
        let x = BoxElement::unit(&a);
        let y = BoxElement::unit(&b);
        assert_eq!(x.mul(&y).unwrap_err(), Error::ContextMismatch);
        let e1 = BoxElement::e1(&a);
        assert!(e1.is_minimal());
        assert_eq!(e1.as_biprojection().unwrap().order(), 6);
        let f = e1.fourier();
        assert!(f.fourier_inv().distance(&e1) < 1e-15);
        assert!(BoxElement::pi(&a, 1).unwrap().as_biprojection().is_err());
    }

    #[test]
    fn minimal_under_and_theorem_mini() {
        let k = ctx("S4", "trivial");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in k.central_projections(Side::Primal, 0).unwrap().iter() {
            let v = k.minimal_under(Side::Primal, p, &mut rng).unwrap();
            assert!(k.is_minimal(Side::Primal, &v));
            assert!(k.proj_leq(Side::Primal, &v, p));
            assert_eq!(
                k.generate(Side::Primal, &v).unwrap(),
                k.generate(Side::Primal, p).unwrap()
            );
        }
    }

    #[test]
    fn table_formatting() {
        let basis = vec!["e1".to_string(), "e2".to_string()];
        assert_eq!(format_combination(&[c(2.0), c(1.0)], &basis), "2e1 + e2");
        assert_eq!(format_combination(&[c(1.0), c(-1.0)], &basis), "e1 - e2");
        assert_eq!(format_combination(&[zero(), zero()], &basis), "0");
    }
}
