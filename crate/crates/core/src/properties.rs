//! Classification predicates and chain lengths of a 2-box context.
//!
//! Everything here works on one side of a [`BoxContext`] and on the lattice of
//! its biprojections in the orientation of that side (`e1` at the bottom,
//! `id` at the top). Sub-inclusions are always obtained from the context via
//! [`BoxContext::section`].

use crate::boxalgebra::{add, BoxContext, Side, Vector};
use crate::error::{Error, Result};
use crate::interval::subgroup_label;
use crate::lattice::FiniteLattice;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Largest subset size tried when computing `wcl`.
pub const WCL_SEARCH_CAP: usize = 4;
/// Blocks up to which every biprojection join is also recomputed numerically.
const NUMERIC_JOIN_CHECK: usize = 6;
/// Dimension up to which the 0/1 search for a coproduct-central witness runs.
const ZZ_SEARCH_DIM: usize = 16;

/// Minimal central projections with the biprojection each one generates.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub projections: Arc<Vec<Vector>>,
    /// interval index of `<p_i>`
    pub generated: Vec<usize>,
}

pub fn blocks(ctx: &BoxContext, side: Side, seed: u64) -> Result<Blocks> {
    let projections = ctx.central_projections(side, seed)?;
    let generated = projections
        .iter()
        .map(|p| ctx.generate(side, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Blocks { projections, generated })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WCyclicWitness {
    /// index of the minimal central projection generating `id`
    pub block: usize,
    pub block_trace: f64,
    /// a minimal projection under that block also generates `id`
    pub minimal_projection_generates: bool,
}

/// Some minimal central projection (equivalently some minimal projection
/// under it) generates `id`.
pub fn is_w_cyclic(ctx: &BoxContext, side: Side, seed: u64) -> Result<Option<WCyclicWitness>> {
    let b = blocks(ctx, side, seed)?;
    w_cyclic_from_blocks(ctx, side, &b, seed)
}

fn w_cyclic_from_blocks(ctx: &BoxContext, side: Side, b: &Blocks, seed: u64) -> Result<Option<WCyclicWitness>> {
    let id = ctx.id_index(side);
    let Some(block) = b.generated.iter().position(|&g| g == id) else {
        return Ok(None);
    };
    let p = &b.projections[block];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let v = ctx.minimal_under(side, p, &mut rng)?;
    let minimal_projection_generates = ctx.generate(side, &v)? == id;
    if !minimal_projection_generates {
        return Err(Error::TheoremViolation(format!(
            "minimal projection under block {block} generates less than the block"
        )));
    }
    Ok(Some(WCyclicWitness {
        block,
        block_trace: ctx.trace(side, p).re,
        minimal_projection_generates,
    }))
}

pub fn is_distributive(ctx: &BoxContext) -> bool {
    ctx.interval().lattice().is_distributive()
}

/// Every biprojection is normal: `HgK = KgH` for every intermediate `K`.
pub fn is_dedekind(ctx: &BoxContext) -> bool {
    (0..ctx.interval().len()).all(|k| ctx.is_normal_biprojection(k))
}

pub fn is_cyclic(ctx: &BoxContext) -> bool {
    is_dedekind(ctx) && is_distributive(ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LwRw {
    pub lw: bool,
    pub rw: bool,
}

/// Contexts whose w-cyclicity decides `lw` and `rw` of the biprojection `k`.
fn lw_rw_contexts(ctx: &BoxContext, side: Side, k: usize) -> Result<(Arc<BoxContext>, Arc<BoxContext>)> {
    let iv = ctx.interval();
    let (top, bottom) = (iv.top(), iv.bottom());
    let upper = ctx.section(top, k)?;
    let lower = ctx.section(k, bottom)?;
    Ok(match side {
        Side::Primal => (upper, lower),
        Side::Dual => (lower, upper),
    })
}

/// `lw`: `b = <u>` for a minimal projection `u`; `rw`: `<u, b> = id`.
/// Decided on the two sections cut by `b`, and each positive answer is
/// replayed inside `ctx` through the embedding of the witness.
pub fn lw_rw_cyclic(ctx: &BoxContext, side: Side, k: usize, seed: u64) -> Result<LwRw> {
    let (lw_ctx, rw_ctx) = lw_rw_contexts(ctx, side, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lw = match is_w_cyclic(&lw_ctx, side, seed)? {
        None => false,
        Some(w) => {
            let u = lw_ctx.minimal_under(side, &lw_ctx.central_projections(side, seed)?[w.block], &mut rng)?;
            let e = embed(ctx, side, &lw_ctx, &u, true);
            if !ctx.is_minimal(side, &e) || ctx.generate(side, &e)? != k {
                return Err(Error::TheoremViolation(
                    "lw witness does not generate b inside the context".into(),
                ));
            }
            true
        }
    };
    let rw = match is_w_cyclic(&rw_ctx, side, seed)? {
        None => false,
        Some(w) => {
            let u = rw_ctx.minimal_under(side, &rw_ctx.central_projections(side, seed)?[w.block], &mut rng)?;
            let c = embed(ctx, side, &rw_ctx, &u, false);
            let v = ctx.minimal_under(side, &c, &mut rng)?;
            let b = ctx.biprojection(side, k);
            if ctx.generate_set(side, &[&v, &b])? != ctx.id_index(side) {
                return Err(Error::TheoremViolation("rw witness does not generate id with b".into()));
            }
            true
        }
    };
    Ok(LwRw { lw, rw })
}

/// `lw_side`: the section lives below `b` in the orientation of `side`.
fn embed(ctx: &BoxContext, side: Side, sub: &BoxContext, x: &[crate::linalg::C64], lw_side: bool) -> Vector {
    // the section for lw is an upper compression on the primal side and a
    // lower one on the dual side; rw is the other way round
    let upper = matches!((side, lw_side), (Side::Primal, true) | (Side::Dual, false));
    if upper {
        ctx.embed_upper(sub, x)
    } else {
        ctx.embed_lower(sub, x)
    }
}

/// (Z): every minimal central projection generates a central biprojection.
pub fn property_z(ctx: &BoxContext, side: Side, b: &Blocks) -> bool {
    b.generated
        .iter()
        .all(|&g| ctx.is_central(side, &ctx.biprojection(side, g)))
}

/// (ZZ): coproducts of central elements are central; by bilinearity it is
/// enough to check pairs of minimal central projections.
pub fn property_zz(ctx: &BoxContext, side: Side, b: &Blocks) -> bool {
    let ps = &b.projections;
    ps.iter()
        .all(|p| ps.iter().all(|q| ctx.is_central(side, &ctx.coproduct(side, p, q))))
}

/// Dual-side form of a (ZZ) failure on the primal side: 0/1 functions `x`,
/// `y` on the double cosets that commute with everything under the
/// coproduct while their pointwise product does not. First pair in the
/// order of the subset masks.
pub fn zz_dual_witness(ctx: &BoxContext) -> Option<(Vec<usize>, Vec<usize>)> {
    let d = ctx.dim();
    if d > ZZ_SEARCH_DIM {
        return None;
    }
    let indicator = |mask: u32| -> Vector {
        (0..d)
            .map(|i| crate::linalg::C64::new(f64::from((mask >> i) & 1), 0.0))
            .collect()
    };
    let central: Vec<u32> = (1u32..(1 << d))
        .filter(|&m| coproduct_central(ctx, &indicator(m)))
        .collect();
    for &x in &central {
        for &y in &central {
            let xy = x & y;
            if xy != 0 && !central.contains(&xy) {
                let bits = |m: u32| (0..d).filter(|i| (m >> i) & 1 == 1).collect();
                return Some((bits(x), bits(y)));
            }
        }
    }
    None
}

/// `x * e_D = e_D * x` on the dual side for every double coset `D`.
pub fn coproduct_central(ctx: &BoxContext, x: &[crate::linalg::C64]) -> bool {
    let d = ctx.dim();
    (0..d).all(|i| {
        let mut e = vec![crate::linalg::C64::new(0.0, 0.0); d];
        e[i] = crate::linalg::C64::new(1.0, 0.0);
        crate::boxalgebra::distance(&ctx.coproduct(Side::Dual, x, &e), &ctx.coproduct(Side::Dual, &e, x)) <= 1e-9
    })
}

/// (F2): for minimal central projections `p, q` there is `r` with
/// `<p,r>` and `<r,q>` both above `<p,q>`.
pub fn property_f2(ctx: &BoxContext, side: Side, b: &Blocks) -> Result<bool> {
    let lat = ctx.oriented_lattice(side);
    let g = &b.generated;
    if b.projections.len() <= NUMERIC_JOIN_CHECK {
        for (i, p) in b.projections.iter().enumerate() {
            for (j, q) in b.projections.iter().enumerate() {
                let numeric = ctx.generate(side, &add(p, q))?;
                if numeric != lat.join(g[i], g[j]) {
                    return Err(Error::BiprojectionCheckFailed(format!(
                        "<p{i},p{j}> differs from the lattice join"
                    )));
                }
            }
        }
    }
    Ok(g.iter().all(|&p| {
        g.iter().all(|&q| {
            let target = lat.join(p, q);
            g.iter()
                .any(|&r| lat.leq(target, lat.join(p, r)) && lat.leq(target, lat.join(r, q)))
        })
    }))
}

/// Maximal biprojections: coatoms of the oriented lattice.
pub fn maximal_biprojections(ctx: &BoxContext, side: Side) -> Vec<usize> {
    ctx.oriented_lattice(side).coatoms()
}

/// `Σ 1/[id : b_i]` over the maximal biprojections, with `[id:b] = tr(id)/tr(b)`.
pub fn sum_bound(ctx: &BoxContext, side: Side) -> Ratio<i64> {
    let g = ctx.group().order() as i64;
    let h = ctx.subgroup().order() as i64;
    maximal_biprojections(ctx, side)
        .into_iter()
        .map(|k| {
            let kk = ctx.interval().subgroup(k).order() as i64;
            match side {
                Side::Primal => Ratio::new(h, kk),
                Side::Dual => Ratio::new(kk, g),
            }
        })
        .fold(Ratio::from_integer(0), |a, b| a + b)
}

/// `(Σ b_i)^⊥ ≠ 0` over the maximal biprojections.
pub fn w_plus_cyclic(ctx: &BoxContext, side: Side) -> Result<bool> {
    let max = maximal_biprojections(ctx, side);
    if max.is_empty() {
        return Ok(true);
    }
    let mut s = vec![crate::linalg::C64::new(0.0, 0.0); ctx.dim()];
    for k in max {
        s = add(&s, &ctx.biprojection(side, k));
    }
    let (r, _) = ctx.range(side, &s)?;
    Ok(ctx.trace(side, &r).re < 1.0 - 1e-9)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LengthKind {
    Cl,
    Wcl,
    Dl,
    Tcl,
    Tbl,
    TbNl(usize),
    Bcl,
    Bbl,
    BbNl(usize),
}

impl LengthKind {
    pub fn name(self) -> String {
        match self {
            LengthKind::Cl => "cl".into(),
            LengthKind::Wcl => "wcl".into(),
            LengthKind::Dl => "dl".into(),
            LengthKind::Tcl => "tcl".into(),
            LengthKind::Tbl => "tbl".into(),
            LengthKind::TbNl(n) => format!("tb{n}l"),
            LengthKind::Bcl => "bcl".into(),
            LengthKind::Bbl => "bbl".into(),
            LengthKind::BbNl(n) => format!("bb{n}l"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cl" => LengthKind::Cl,
            "wcl" => LengthKind::Wcl,
            "dl" => LengthKind::Dl,
            "tcl" => LengthKind::Tcl,
            "tbl" => LengthKind::Tbl,
            "bcl" => LengthKind::Bcl,
            "bbl" => LengthKind::Bbl,
            _ => {
                let n = |p: &str| s.strip_prefix(p)?.strip_suffix('l')?.parse::<usize>().ok();
                if let Some(n) = n("tb") {
                    LengthKind::TbNl(n)
                } else {
                    LengthKind::BbNl(n("bb")?)
                }
            }
        })
    }

    pub fn all() -> Vec<LengthKind> {
        use LengthKind::*;
        vec![Cl, Wcl, Dl, Tcl, Tbl, TbNl(4), Bcl, Bbl, BbNl(4)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthValue {
    Value(usize),
    /// the search was capped before an answer
    NotDetermined,
}

impl LengthValue {
    pub fn value(self) -> Option<usize> {
        match self {
            LengthValue::Value(v) => Some(v),
            LengthValue::NotDetermined => None,
        }
    }
}

impl Serialize for LengthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LengthValue::Value(v) => s.serialize_u64(*v as u64),
            LengthValue::NotDetermined => s.serialize_str("not_determined"),
        }
    }
}

/// Memoized sections of one context, keyed by oriented `(a, b)`.
struct Sections<'a> {
    ctx: &'a BoxContext,
    side: Side,
    seed: u64,
    cache: HashMap<(usize, usize), Arc<BoxContext>>,
    verdicts: HashMap<(LengthKind, usize, usize), bool>,
}

impl<'a> Sections<'a> {
    fn new(ctx: &'a BoxContext, side: Side, seed: u64) -> Self {
        Sections {
            ctx,
            side,
            seed,
            cache: HashMap::new(),
            verdicts: HashMap::new(),
        }
    }

    /// The planar algebra between oriented biprojections `a < b`.
    fn get(&mut self, a: usize, b: usize) -> Result<Arc<BoxContext>> {
        if let Some(c) = self.cache.get(&(a, b)) {
            return Ok(c.clone());
        }
        let (big, small) = match self.side {
            Side::Primal => (a, b),
            Side::Dual => (b, a),
        };
        let c = self.ctx.section(big, small)?;
        self.cache.insert((a, b), c.clone());
        Ok(c)
    }

    fn holds(&mut self, kind: LengthKind, a: usize, b: usize) -> Result<bool> {
        if let Some(&v) = self.verdicts.get(&(kind, a, b)) {
            return Ok(v);
        }
        let s = self.get(a, b)?;
        let v = chain_predicate(&s, self.side, kind, self.seed)?;
        self.verdicts.insert((kind, a, b), v);
        Ok(v)
    }
}

/// Top (or bottom) intermediate of `ctx` in the orientation of `side`.
fn extreme_section(ctx: &BoxContext, side: Side, top: bool) -> Result<(Arc<BoxContext>, FiniteLattice)> {
    let lat = ctx.oriented_lattice(side);
    let (sub, map) = if top { lat.top_interval() } else { lat.bottom_interval() };
    let (a, b) = (map[sub.bottom()], map[sub.top()]);
    let (big, small) = match side {
        Side::Primal => (a, b),
        Side::Dual => (b, a),
    };
    Ok((ctx.section(big, small)?, sub))
}

fn chain_predicate(s: &BoxContext, side: Side, kind: LengthKind, seed: u64) -> Result<bool> {
    Ok(match kind {
        LengthKind::Cl => is_cyclic(s),
        LengthKind::Dl => is_distributive(s),
        LengthKind::Wcl => is_w_cyclic(s, side, seed)?.is_some(),
        LengthKind::Tcl => is_cyclic(&extreme_section(s, side, true)?.0),
        LengthKind::Bcl => is_cyclic(&extreme_section(s, side, false)?.0),
        LengthKind::Tbl => extreme_section(s, side, true)?.1.is_boolean(),
        LengthKind::Bbl => extreme_section(s, side, false)?.1.is_boolean(),
        LengthKind::TbNl(n) => extreme_section(s, side, true)?.1.boolean_rank().is_ok_and(|r| r <= n),
        LengthKind::BbNl(n) => extreme_section(s, side, false)?.1.boolean_rank().is_ok_and(|r| r <= n),
    })
}

/// Smallest number of minimal central projections generating `id`, up to
/// [`WCL_SEARCH_CAP`].
pub fn w_cyclic_length(ctx: &BoxContext, side: Side, b: &Blocks) -> Result<LengthValue> {
    let lat = ctx.oriented_lattice(side);
    let id = ctx.id_index(side);
    if lat.len() == 1 {
        return Ok(LengthValue::Value(0));
    }
    let mut distinct: Vec<usize> = Vec::new();
    let mut rep: Vec<usize> = Vec::new();
    for (i, &g) in b.generated.iter().enumerate() {
        if !distinct.contains(&g) {
            distinct.push(g);
            rep.push(i);
        }
    }
    let m = distinct.len();
    for size in 1..=WCL_SEARCH_CAP.min(m) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if lat.join_all(idx.iter().map(|&i| distinct[i])) == id {
                let picked: Vec<&[crate::linalg::C64]> =
                    idx.iter().map(|&i| b.projections[rep[i]].as_slice()).collect();
                if ctx.generate_set(side, &picked)? != id {
                    return Err(Error::BiprojectionCheckFailed(
                        "generated set differs from the lattice join".into(),
                    ));
                }
                return Ok(LengthValue::Value(size));
            }
            // next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == m - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(LengthValue::NotDetermined)
}

pub fn lengths(ctx: &BoxContext, side: Side, kinds: &[LengthKind], seed: u64) -> Result<BTreeMap<String, LengthValue>> {
    let lat = ctx.oriented_lattice(side);
    let mut sections = Sections::new(ctx, side, seed);
    let mut out = BTreeMap::new();
    for &kind in kinds {
        let v = if kind == LengthKind::Wcl {
            w_cyclic_length(ctx, side, &blocks(ctx, side, seed)?)?
        } else {
            let mut err = None;
            let found = lat.shortest_chain(lat.bottom(), lat.top(), |a, b| match sections.holds(kind, a, b) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    false
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            found.map_or(LengthValue::NotDetermined, LengthValue::Value)
        };
        out.insert(kind.name(), v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Implication {
    pub name: &'static str,
    pub hypothesis: bool,
    pub conclusion: bool,
}

impl Implication {
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

/// Evaluates the known implications towards w-cyclicity on `ctx`; an
/// instance with true hypothesis and false conclusion is an error.
pub fn verify_theorems(ctx: &BoxContext, side: Side, seed: u64) -> Result<Vec<Implication>> {
    let b = blocks(ctx, side, seed)?;
    let w = w_cyclic_from_blocks(ctx, side, &b, seed)?.is_some();
    let distributive = is_distributive(ctx);
    let dedekind = is_dedekind(ctx);
    let cyclic = dedekind && distributive;
    let lat = ctx.oriented_lattice(side);
    let all_central = (0..ctx.interval().len()).all(|k| ctx.is_central(side, &ctx.biprojection(side, k)));
    let sum = sum_bound(ctx, side);
    let w_plus = w_plus_cyclic(ctx, side)?;
    let boolean_le4 = lat.boolean_rank().is_ok_and(|r| r <= 4);
    let top = extreme_section(ctx, side, true)?.0;
    let top_w = is_w_cyclic(&top, side, seed)?.is_some();
    let z = property_z(ctx, side, &b);
    let zz = property_zz(ctx, side, &b);
    let z_tilde = if dedekind { z_tilde(ctx, side, seed)? } else { false };
    let mut out = vec![
        Implication {
            name: "cyclic_implies_w_cyclic",
            hypothesis: cyclic,
            conclusion: w,
        },
        Implication {
            name: "central_distributive_implies_w_cyclic",
            hypothesis: all_central && distributive,
            conclusion: w,
        },
        Implication {
            name: "distributive_sum_le_2_implies_w_cyclic",
            hypothesis: distributive && sum <= Ratio::from_integer(2),
            conclusion: w,
        },
        Implication {
            name: "sum_le_1_implies_w_cyclic",
            hypothesis: sum <= Ratio::from_integer(1),
            conclusion: w,
        },
        Implication {
            name: "boolean_rank_le_4_implies_w_cyclic",
            hypothesis: boolean_le4,
            conclusion: w,
        },
        Implication {
            name: "top_w_cyclic_implies_w_cyclic",
            hypothesis: top_w,
            conclusion: w,
        },
        Implication {
            name: "w_plus_implies_w_cyclic",
            hypothesis: w_plus,
            conclusion: w,
        },
        Implication {
            name: "dedekind_w_cyclic_implies_w_plus",
            hypothesis: dedekind && w,
            conclusion: w_plus,
        },
        Implication {
            name: "dedekind_implies_z_tilde",
            hypothesis: dedekind,
            conclusion: z_tilde,
        },
        Implication {
            name: "zz_implies_z",
            hypothesis: zz,
            conclusion: z,
        },
    ];
    let ls = lengths(
        ctx,
        side,
        &[LengthKind::Wcl, LengthKind::Tcl, LengthKind::Cl, LengthKind::TbNl(4)],
        seed,
    )?;
    if let (Some(wcl), Some(tcl), Some(cl), Some(tb4)) = (
        ls["wcl"].value(),
        ls["tcl"].value(),
        ls["cl"].value(),
        ls["tb4l"].value(),
    ) {
        out.push(Implication {
            name: "wcl_le_tcl_le_cl",
            hypothesis: true,
            conclusion: wcl <= tcl && tcl <= cl,
        });
        out.push(Implication {
            name: "wcl_le_tb4l",
            hypothesis: true,
            conclusion: wcl <= tb4,
        });
    }
    if let Some(bad) = out.iter().find(|i| !i.holds()) {
        return Err(Error::TheoremViolation(format!(
            "{} fails on {}",
            bad.name,
            ctx.label()
        )));
    }
    Ok(out)
}

/// (Z) on every intermediate `P(e1 < b)` and `P(b < id)`.
fn z_tilde(ctx: &BoxContext, side: Side, seed: u64) -> Result<bool> {
    let mut sections = Sections::new(ctx, side, seed);
    let lat = ctx.oriented_lattice(side);
    for k in 0..lat.len() {
        for (a, b) in [(lat.bottom(), k), (k, lat.top())] {
            if a == b {
                continue;
            }
            let s = sections.get(a, b)?;
            if !property_z(&s, side, &blocks(&s, side, seed)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockSummary {
    pub trace: f64,
    /// the intermediate subgroup whose biprojection the block generates
    pub generates: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witnesses {
    pub w_cyclic: Option<WCyclicWitness>,
    /// an element `g` with `<H,g> = G`
    pub h_cyclic: Option<String>,
    pub blocks: Vec<BlockSummary>,
    /// 0/1 coproduct-central functions with non-central product (double coset indices)
    pub zz_dual: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub context: String,
    pub side: Side,
    pub group_order: usize,
    pub subgroup_order: usize,
    pub index: usize,
    pub dimension: usize,
    pub interval_size: usize,
    pub distributive: bool,
    pub dedekind: bool,
    pub cyclic: bool,
    pub w_cyclic: bool,
    pub w_plus_cyclic: bool,
    #[serde(rename = "Z")]
    pub z: bool,
    #[serde(rename = "ZZ")]
    pub zz: bool,
    #[serde(rename = "F2")]
    pub f2: bool,
    pub boolean_rank: Option<usize>,
    #[serde(serialize_with = "ratio_string")]
    pub sum_bound: Ratio<i64>,
    pub witnesses: Witnesses,
    pub lengths: BTreeMap<String, LengthValue>,
}

fn ratio_string<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub lengths: Vec<LengthKind>,
    /// run the 0/1 search for a dual (ZZ) witness
    pub zz_search: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            seed: 0,
            lengths: LengthKind::all(),
            zz_search: true,
        }
    }
}

pub fn classify(ctx: &BoxContext, side: Side, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let seed = opts.seed;
    let b = blocks(ctx, side, seed)?;
    let w = w_cyclic_from_blocks(ctx, side, &b, seed)?;
    let distributive = is_distributive(ctx);
    let dedekind = is_dedekind(ctx);
    let cyclic = distributive && dedekind;
    if cyclic && w.is_none() {
        return Err(Error::TheoremViolation(format!(
            "{} is cyclic but not w-cyclic",
            ctx.label()
        )));
    }
    let group = ctx.group();
    let inc = crate::interval::Inclusion::new(group.clone(), ctx.subgroup().clone(), ctx.label());
    let h_cyclic = inc.h_cyclic_witness().map(|g| group.element(g).to_string());
    let block_summaries = b
        .projections
        .iter()
        .zip(&b.generated)
        .map(|(p, &g)| BlockSummary {
            trace: ctx.trace(side, p).re,
            generates: subgroup_label(group, ctx.interval().subgroup(g)),
        })
        .collect();
    let zz_dual = match side {
        Side::Primal if opts.zz_search => zz_dual_witness(ctx),
        _ => None,
    };
    Ok(ClassificationReport {
        context: ctx.label().to_string(),
        side,
        group_order: group.order(),
        subgroup_order: ctx.subgroup().order(),
        index: group.order() / ctx.subgroup().order(),
        dimension: ctx.dim(),
        interval_size: ctx.interval().len(),
        distributive,
        dedekind,
        cyclic,
        w_cyclic: w.is_some(),
        w_plus_cyclic: w_plus_cyclic(ctx, side)?,
        z: property_z(ctx, side, &b),
        zz: property_zz(ctx, side, &b),
        f2: property_f2(ctx, side, &b)?,
        boolean_rank: ctx.oriented_lattice(side).boolean_rank().ok(),
        sum_bound: sum_bound(ctx, side),
        witnesses: Witnesses {
            w_cyclic: w,
            h_cyclic,
            blocks: block_summaries,
            zz_dual,
        },
        lengths: lengths(ctx, side, &opts.lengths, seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, parse_subgroup_spec};

    fn ctx(group: &str, sub: &str) -> Arc<BoxContext> {
        let g = Arc::new(lookup(group).unwrap().build().unwrap());
        let h = parse_subgroup_spec(&g, sub).unwrap();
        BoxContext::new(g, h, format!("{group}/{sub}")).unwrap()
    }

    #[test]
    fn w_cyclic_examples() {
        assert!(is_w_cyclic(&ctx("S3", "trivial"), Side::Primal, 0).unwrap().is_some());
        assert!(is_w_cyclic(&ctx("S3", "trivial"), Side::Dual, 0).unwrap().is_none());
        assert!(is_w_cyclic(&ctx("S4", "(1,2)"), Side::Primal, 0).unwrap().is_some());
        assert!(is_w_cyclic(&ctx("S4", "(1,2)"), Side::Dual, 0).unwrap().is_some());
        assert!(is_w_cyclic(&ctx("S4", "(1,2)(3,4)"), Side::Primal, 0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn cyclic_examples() {
        assert!(is_cyclic(&ctx("Z6", "trivial")));
        assert!(!is_cyclic(&ctx("S4", "(1,2)")));
        assert!(is_cyclic(&ctx("Z5", "trivial")));
        assert!(!is_cyclic(&ctx("S3", "trivial")));
    }

    #[test]
    fn z_and_zz() {
        let k = ctx("S4", "(1,2)");
        let b = blocks(&k, Side::Primal, 0).unwrap();
        assert!(property_z(&k, Side::Primal, &b));
        assert!(!property_zz(&k, Side::Primal, &b));
        assert!(zz_dual_witness(&k).is_some());
        let k = ctx("S4", "(1,2)(3,4)");
        assert!(!property_z(&k, Side::Primal, &blocks(&k, Side::Primal, 0).unwrap()));
        let k = ctx("Z6", "trivial");
        let b = blocks(&k, Side::Primal, 0).unwrap();
        assert!(property_zz(&k, Side::Primal, &b));
        assert!(zz_dual_witness(&k).is_none());
    }

    #[test]
    fn f2_examples() {
        for (g, h) in [("S3", "trivial"), ("Z6", "trivial"), ("Z2^2", "trivial")] {
            let k = ctx(g, h);
            for side in [Side::Primal, Side::Dual] {
                assert!(
                    property_f2(&k, side, &blocks(&k, side, 0).unwrap()).unwrap(),
                    "{g} {side:?}"
                );
            }
        }
    }

    #[test]
    fn sums_and_w_plus() {
        let k = ctx("S3", "trivial");
        assert!(!w_plus_cyclic(&k, Side::Primal).unwrap());
        assert!(w_plus_cyclic(&ctx("Q8", "trivial"), Side::Primal).unwrap());
        let z30 = ctx("Z30", "trivial");
        assert_eq!(sum_bound(&z30, Side::Dual), Ratio::new(31, 30));
        assert!(is_w_cyclic(&z30, Side::Dual, 0).unwrap().is_some());
    }

    #[test]
    fn lw_rw() {
        let k = ctx("S4", "trivial");
        let s3 = k
            .interval()
            .index_of(parse_subgroup_spec(k.group(), "(1,2);(1,2,3)").unwrap().members())
            .unwrap();
        let r = lw_rw_cyclic(&k, Side::Primal, s3, 1).unwrap();
        // lw of b_{S3}: (S4 ⊇ S3) is w-cyclic; rw: S3 itself is linearly primitive
        assert!(r.lw && r.rw);
        let top = k.interval().top();
        let bottom = k.interval().bottom();
        // b = e1 and b = id
        assert!(lw_rw_cyclic(&k, Side::Primal, top, 1).unwrap().lw);
        assert!(lw_rw_cyclic(&k, Side::Primal, bottom, 1).unwrap().rw);
    }

    #[test]
    fn chain_lengths() {
        let s3 = ctx("S3", "trivial");
        let l = lengths(&s3, Side::Dual, &[LengthKind::Cl], 0).unwrap();
        assert_eq!(l["cl"], LengthValue::Value(2));
        let l = lengths(&s3, Side::Primal, &[LengthKind::Wcl, LengthKind::Cl], 0).unwrap();
        assert_eq!(l["wcl"], LengthValue::Value(1));
        assert_eq!(l["cl"], LengthValue::Value(2));
        let s4 = ctx("S4", "trivial");
        let l = lengths(&s4, Side::Dual, &[LengthKind::Dl, LengthKind::Wcl], 0).unwrap();
        assert_eq!(l["dl"], LengthValue::Value(2));
        assert_eq!(l["wcl"], LengthValue::Value(2));
        assert_eq!(LengthKind::parse("tb4l"), Some(LengthKind::TbNl(4)));
        assert_eq!(LengthKind::parse("bb3l"), Some(LengthKind::BbNl(3)));
        assert_eq!(LengthKind::parse("xl"), None);
    }

    #[test]
    fn theorems_on_small_cases() {
        for (g, h) in [("Z6", "trivial"), ("S3", "trivial"), ("S4", "(1,2)"), ("Q8", "trivial")] {
            let k = ctx(g, h);
            for side in [Side::Primal, Side::Dual] {
                verify_theorems(&k, side, 0).unwrap();
            }
        }
    }

    #[test]
    fn report_json_keys() {
        let r = classify(&ctx("S3", "trivial"), Side::Primal, &ClassifyOptions::default()).unwrap();
        assert!(r.w_cyclic && !r.cyclic && !r.w_plus_cyclic);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["Z"], true);
        assert_eq!(v["sum_bound"], "11/6");
        assert_eq!(v["side"], "primal");
        assert_eq!(v["lengths"]["wcl"], 1);
    }
}
