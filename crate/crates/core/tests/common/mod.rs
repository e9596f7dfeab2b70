//! Shared fixtures: the test corpus, an independent character-table oracle
//! and the seeded identity checks.
#![allow(dead_code)]

use biprox::boxalgebra::{add, distance, max_abs, scale, sub, BoxContext, Side, Vector};
use biprox::catalog::{catalog, lookup, parse_subgroup_spec};
use biprox::linalg::C64;
use biprox::permgroup::{FiniteGroup, Subgroup, DEFAULT_SUBGROUP_CAP};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::sync::Arc;

pub fn ctx(group: &str, sub: &str) -> Arc<BoxContext> {
    let g = Arc::new(lookup(group).unwrap().build().unwrap());
    let h = parse_subgroup_spec(&g, sub).unwrap();
    BoxContext::new(g, h, format!("{group}/{sub}")).unwrap()
}

pub struct CorpusItem {
    pub label: String,
    pub group: Arc<FiniteGroup>,
    pub sub: Subgroup,
}

/// Every subgroup class of every catalog group of order at most 48, plus S5.
pub fn corpus() -> Vec<CorpusItem> {
    let mut out = Vec::new();
    for e in catalog().into_iter().filter(|e| e.order <= 48 || e.name == "S5") {
        let g = Arc::new(e.build().unwrap());
        for h in g.subgroup_class_representatives(DEFAULT_SUBGROUP_CAP).unwrap() {
            out.push(CorpusItem {
                label: format!("{}/{}", e.name, biprox::interval::subgroup_label(&g, &h)),
                group: g.clone(),
                sub: h,
            });
        }
    }
    out
}

/// Closure of `seed` under right multiplication by `gens`.
fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Some `g` with `<H, g> = G`, by brute force.
pub fn h_cyclic_oracle(g: &FiniteGroup, h: &Subgroup) -> bool {
    let mut gens: Vec<usize> = h.elements().collect();
    gens.push(0);
    let last = gens.len() - 1;
    (0..g.order()).any(|x| {
        gens[last] = x;
        closure(g, &gens).iter().all(|&b| b)
    })
}

/// Irreducible characters from the class algebra: eigenvectors of a random
/// self-adjoint class-sum combination, acting on the center of `C[G]`.
pub struct CharacterTable {
    pub class_of: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// `chars[c][k]`: value of character `c` on class `k`
    pub chars: Vec<Vec<C64>>,
}

impl CharacterTable {
    pub fn new(g: &FiniteGroup, seed: u64) -> Self {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            for y in 0..n {
                let c = g.mul(g.mul(y, x), g.inv(y));
                class_of[c] = k;
            }
        }
        let r = reps.len();
        let mut class_sizes = vec![0usize; r];
        for &c in &class_of {
            class_sizes[c] += 1;
        }
        let inverse_class: Vec<usize> = reps.iter().map(|&x| class_of[g.inv(x)]).collect();
        // a[i][j][k]: coefficient of C_k in C_i C_j
        let mut a = vec![vec![vec![0.0f64; r]; r]; r];
        for x in 0..n {
            for y in 0..n {
                a[class_of[x]][class_of[y]][class_of[g.mul(x, y)]] += 1.0;
            }
        }
        for row in a.iter_mut() {
            for cell in row.iter_mut() {
                for (k, v) in cell.iter_mut().enumerate() {
                    *v /= class_sizes[k] as f64;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..500 {
            let mut coeff = vec![C64::new(0.0, 0.0); r];
            for i in 0..r {
                let j = inverse_class[i];
                if j < i {
                    continue;
                }
                let z = C64::new(
                    rng.gen_range(-1.0..1.0),
                    if i == j { 0.0 } else { rng.gen_range(-1.0..1.0) },
                );
                coeff[i] = z;
                coeff[j] = z.conj();
            }
            let m = DMatrix::from_fn(r, r, |k, j| {
                let s: C64 = (0..r).map(|i| coeff[i] * a[i][j][k]).sum();
                s * (class_sizes[k] as f64 / class_sizes[j] as f64).sqrt()
            });
            let eig = SymmetricEigen::new(m.clone());
            let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            vals.sort_by(f64::total_cmp);
            let spread = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
            if vals.windows(2).any(|w| w[1] - w[0] < 1e-3 * spread) {
                continue;
            }
            let identity_class = class_of[0];
            let chars = (0..r)
                .map(|c| {
                    let v = polish(&m, eig.eigenvectors.column(c).into_owned(), eig.eigenvalues[c]);
                    let mut w: Vec<C64> = (0..r).map(|i| v[i].conj() / (class_sizes[i] as f64).sqrt()).collect();
                    let phase = w[identity_class].conj() / w[identity_class].norm();
                    let norm: f64 = (0..r).map(|i| class_sizes[i] as f64 * (w[i] * phase).norm_sqr()).sum();
                    let t = (n as f64 / norm).sqrt();
                    for z in w.iter_mut() {
                        *z = *z * phase * t;
                    }
                    w
                })
                .collect();
            let table = CharacterTable {
                class_of,
                class_sizes,
                chars,
            };
            table.check(n);
            return table;
        }
        panic!("class algebra eigenvalues never separated");
    }

    fn check(&self, n: usize) {
        let degrees: f64 = self.chars.iter().map(|c| c[self.class_of[0]].norm_sqr()).sum();
        assert!(
            (degrees - n as f64).abs() < 1e-6,
            "sum of squared degrees {degrees} != {n}"
        );
        for c in &self.chars {
            let d = c[self.class_of[0]];
            assert!((d.re - d.re.round()).abs() < 1e-6 && d.im.abs() < 1e-6);
        }
    }

    pub fn value(&self, c: usize, x: usize) -> C64 {
        self.chars[c][self.class_of[x]]
    }

    /// Some irreducible `V` whose `H`-fixed vectors are fixed by exactly `H`:
    /// `g` fixes `V^H` pointwise iff `Σ_h χ(gh) = Σ_h χ(h)`.
    pub fn linearly_primitive(&self, g: &FiniteGroup, h: &Subgroup) -> bool {
        let hs: Vec<usize> = h.elements().collect();
        (0..self.chars.len()).any(|c| {
            let avg =
                |x: usize| -> C64 { hs.iter().map(|&y| self.value(c, g.mul(x, y))).sum::<C64>() / hs.len() as f64 };
            let fixed_dim = avg(0);
            if fixed_dim.re < 0.5 {
                return false;
            }
            (0..g.order()).all(|x| ((avg(x) - fixed_dim).norm() < 1e-6) == h.contains(x))
        })
    }
}

/// Rayleigh quotient iteration from an approximate eigenpair; the dense
/// solver alone leaves residuals near 1e-2 on some dihedral class algebras.
fn polish(m: &DMatrix<C64>, mut v: nalgebra::DVector<C64>, mut lambda: f64) -> nalgebra::DVector<C64> {
    let r = m.nrows();
    for _ in 0..4 {
        let shifted = m - DMatrix::<C64>::identity(r, r) * C64::new(lambda + 1e-13, 0.0);
        let Some(y) = shifted.lu().solve(&v) else { break };
        let norm = y.norm();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        v = y / C64::new(norm, 0.0);
        lambda = (v.adjoint() * m * &v)[(0, 0)].re;
    }
    v
}

pub const IDENTITIES: [&str; 12] = [
    "coproduct_unit",
    "biprojection_square",
    "sub_biprojection",
    "trace_multiplicative",
    "e1_absorbs",
    "antipode_star",
    "fourier",
    "e1_support",
    "contragredient_minimal",
    "equivalent_generate",
    "exchange",
    "positivity",
];

pub const IDENTITY_CONTEXTS: [(&str, &str); 4] =
    [("S3", "trivial"), ("S4", "trivial"), ("S4", "(1,2)"), ("Z6", "trivial")];

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rel(x: &[C64], y: &[C64]) -> f64 {
    distance(x, y) / max_abs(x).max(max_abs(y)).max(1.0)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn random_biprojection(k: &BoxContext, side: Side, rng: &mut ChaCha8Rng) -> Vector {
    let i = rng.gen_range(0..k.interval().len());
    k.biprojection(side, i)
}

/// A random projection, redrawn while it is zero.
fn nonzero_projection(k: &BoxContext, side: Side, rng: &mut ChaCha8Rng) -> Result<Vector, biprox::Error> {
    loop {
        let p = k.random_projection(side, rng)?;
        if max_abs(&p) > 1e-9 {
            return Ok(p);
        }
    }
}

/// `e1 ⪯ x` for positive `x`. `e1 · x = c·e1` always, so `e1` is an
/// eigenvector of `x` and lies in its range iff `c > 0`; returns the answer
/// with the defect of `e1 · x` from the line through `e1`.
fn e1_below(k: &BoxContext, side: Side, x: &[C64]) -> (bool, f64) {
    let e1 = k.e1(side);
    let y = k.mul(side, &e1, x);
    let i = k.e1_index(side);
    let i = (0..e1.len())
        .max_by(|&a, &b| e1[a].norm().total_cmp(&e1[b].norm()))
        .unwrap_or(i);
    let c = y[i] / e1[i];
    let defect = rel(&y, &scale(&e1, c));
    (c.re > 1e-9 * max_abs(x).max(1.0), defect)
}

/// One trial of identity `name`; returns a deviation (booleans count 0 or 1).
pub fn identity_trial(k: &BoxContext, side: Side, name: &str, rng: &mut ChaCha8Rng) -> Result<f64, biprox::Error> {
    let d = k.delta();
    let a = k.random_element(rng);
    let b = k.random_element(rng);
    let tr = |x: &[C64]| k.trace(side, x);
    Ok(match name {
        "coproduct_unit" => {
            let one = rel(&k.coproduct(side, &a, &k.e1(side)), &scale(&a, c(1.0 / d)));
            let two = rel(&k.coproduct(side, &a, &k.unit(side)), &scale(&k.unit(side), tr(&a) * d));
            one.max(two)
        }
        "biprojection_square" => {
            let p = random_biprojection(k, side, rng);
            rel(&k.coproduct(side, &p, &p), &scale(&p, tr(&p) * d))
        }
        "sub_biprojection" => {
            let bp = random_biprojection(k, side, rng);
            let p = match rng.gen_range(0..3) {
                0 => k.e1(side),
                1 => bp.clone(),
                _ => k.minimal_under(side, &bp, rng)?,
            };
            let id = k.unit(side);
            let bperp = sub(&id, &bp);
            let pperp = sub(&id, &p);
            let (tp, tb) = (tr(&p), tr(&bp));
            let one = rel(&k.coproduct(side, &p, &bp), &scale(&bp, tp * d));
            let two = rel(&k.coproduct(side, &p, &bperp), &scale(&bperp, tp * d));
            let three = rel(
                &k.coproduct(side, &pperp, &bp),
                &add(&scale(&bp, (tb - tp) * d), &scale(&bperp, tb * d)),
            );
            let four = rel(
                &k.coproduct(side, &pperp, &bperp),
                &add(&scale(&bp, (c(1.0) - tb) * d), &scale(&bperp, (c(1.0) - tp - tb) * d)),
            );
            one.max(two).max(three).max(four)
        }
        "trace_multiplicative" => {
            (tr(&k.coproduct(side, &a, &b)) - tr(&a) * tr(&b) * d).norm() / (1.0 + tr(&a).norm() * tr(&b).norm())
        }
        "e1_absorbs" => {
            let e1 = k.e1(side);
            let lhs = k.mul(side, &e1, &k.coproduct(side, &a, &k.star(side, &k.contragredient(&b))));
            rel(&lhs, &scale(&e1, k.inner(side, &a, &b) * d))
        }
        "antipode_star" => {
            let bar = |x: &[C64]| k.contragredient(x);
            let st = |x: &[C64]| k.star(side, x);
            [
                rel(&bar(&k.mul(side, &a, &b)), &k.mul(side, &bar(&b), &bar(&a))),
                rel(&bar(&k.coproduct(side, &a, &b)), &k.coproduct(side, &bar(&b), &bar(&a))),
                rel(&st(&k.mul(side, &a, &b)), &k.mul(side, &st(&b), &st(&a))),
                rel(&st(&k.coproduct(side, &a, &b)), &k.coproduct(side, &st(&a), &st(&b))),
                rel(&bar(&st(&a)), &st(&bar(&a))),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        }
        "fourier" => {
            // transported through the primal side whichever side is drawn
            let f = |x: &[C64]| k.fourier(x);
            [
                rel(&k.contragredient(&k.contragredient(&a)), &a),
                rel(
                    &f(&k.coproduct(Side::Primal, &a, &b)),
                    &k.mul(Side::Dual, &f(&b), &f(&a)),
                ),
                rel(
                    &f(&k.mul(Side::Primal, &a, &b)),
                    &k.coproduct(Side::Dual, &f(&a), &f(&b)),
                ),
                rel(&k.fourier_inv(&f(&a)), &a),
                rel(
                    &k.star(Side::Dual, &f(&a)),
                    &f(&k.star(Side::Primal, &k.contragredient(&a))),
                ),
                rel(&k.contragredient(&f(&a)), &f(&k.contragredient(&a))),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        }
        "e1_support" => {
            let p = nonzero_projection(k, side, rng)?;
            let pbar = k.contragredient(&p);
            let (below, defect) = e1_below(k, side, &k.coproduct(side, &p, &pbar));
            let mut dev = flag(below) + defect;
            // q orthogonal to p half the time
            let q = if rng.gen_bool(0.5) {
                nonzero_projection(k, side, rng)?
            } else {
                let pperp = sub(&k.unit(side), &p);
                if max_abs(&pperp) < 1e-9 {
                    return Ok(dev);
                }
                k.minimal_under(side, &pperp, rng)?
            };
            let nonzero = max_abs(&k.mul(side, &p, &q)) > 1e-6;
            let (below, defect) = e1_below(k, side, &k.coproduct(side, &p, &k.contragredient(&q)));
            dev += flag(below == nonzero) + defect;
            dev
        }
        "contragredient_minimal" => {
            let blocks = k.central_projections(side, rng.gen())?;
            let p = &blocks[rng.gen_range(0..blocks.len())];
            let v = k.minimal_under(side, p, rng)?;
            let vbar = k.contragredient(&v);
            let pbar = k.contragredient(p);
            flag(k.is_projection(side, &vbar) && k.is_minimal(side, &vbar) && k.is_central(side, &pbar))
        }
        "equivalent_generate" => {
            let x = k.random_positive(side, rng);
            let t = rng.gen_range(0.1..10.0);
            let y = scale(&x, c(t));
            let (rx, _) = k.range(side, &x)?;
            let (ry, _) = k.range(side, &y)?;
            rel(&rx, &ry) + flag(k.generate(side, &x)? == k.generate(side, &y)?)
        }
        "exchange" => {
            let bp = random_biprojection(k, side, rng);
            let sandwich = |x: &[C64]| k.mul(side, &k.mul(side, &bp, x), &bp);
            let cosandwich = |x: &[C64]| k.coproduct(side, &k.coproduct(side, &bp, x), &bp);
            let (ba, bb) = (sandwich(&a), sandwich(&b));
            let lhs = k.coproduct(side, &ba, &bb);
            let one = rel(&lhs, &sandwich(&k.coproduct(side, &a, &bb)));
            let two = rel(&lhs, &sandwich(&k.coproduct(side, &ba, &b)));
            let (ca, cb) = (cosandwich(&a), cosandwich(&b));
            let lhs = k.mul(side, &ca, &cb);
            let three = rel(&lhs, &cosandwich(&k.mul(side, &a, &cb)));
            let four = rel(&lhs, &cosandwich(&k.mul(side, &ca, &b)));
            one.max(two).max(three).max(four)
        }
        "positivity" => {
            let x = k.random_positive(side, rng);
            let y = k.random_positive(side, rng);
            let z = k.coproduct(side, &x, &y);
            let min = match side {
                Side::Primal => {
                    let m = k.left_matrix(&z);
                    biprox::linalg::hermitian_eigen(&m).values[0]
                }
                Side::Dual => z.iter().map(|v| v.re).fold(f64::INFINITY, f64::min),
            };
            let imag = match side {
                Side::Primal => rel(&z, &k.star(side, &z)),
                Side::Dual => z.iter().map(|v| v.im.abs()).fold(0.0, f64::max),
            };
            (-min).max(0.0) / max_abs(&z).max(1.0) + imag
        }
        other => panic!("unknown identity {other}"),
    })
}

/// Largest deviation of `name` over `trials` seeded trials on each side,
/// with the number of draws resampled because a numeric rank was ambiguous.
pub fn identity_deviation(k: &BoxContext, name: &str, trials: usize, seed: u64) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut resampled = 0;
    for side in [Side::Primal, Side::Dual] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (side as u64) << 32);
        let mut done = 0;
        while done < trials {
            match identity_trial(k, side, name, &mut rng) {
                Ok(d) => {
                    worst = worst.max(d);
                    done += 1;
                }
                Err(biprox::Error::NumericRankAmbiguous { .. }) if resampled < trials => resampled += 1,
                Err(e) => panic!("{name} on {}: {e}", k.label()),
            }
        }
    }
    (worst, resampled)
}
