//! Intervals `[H,G]` of a finite group: Ore and dual-Ore checks,
//! equivalence of inclusions, linear primitivity.

use crate::bitset::BitSet;
use crate::boxalgebra::BoxContext;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::permgroup::{CayleyTable, FiniteGroup, Subgroup, DEFAULT_SUBGROUP_CAP};
use num_rational::Ratio;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

pub const QUOTIENT_ORDER_CAP: usize = 200;

/// The subgroups between `H` and `G`, ordered by inclusion (bottom = H).
#[derive(Clone, Debug)]
pub struct Interval {
    subgroups: Vec<Subgroup>,
    lattice: FiniteLattice,
    lookup: HashMap<BitSet, usize>,
}

impl Interval {
    pub fn new(group: &FiniteGroup, h: &Subgroup) -> Result<Self> {
        let subgroups = group.overgroups(h, DEFAULT_SUBGROUP_CAP)?;
        let labels = subgroups.iter().map(|k| subgroup_label(group, k)).collect();
        let lattice = FiniteLattice::from_order_labeled(
            subgroups.len(),
            |a, b| subgroups[a].is_subgroup_of(&subgroups[b]),
            labels,
        )
        .expect("subgroup interval is a lattice");
        let lookup = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().clone(), i))
            .collect();
        Ok(Interval {
            subgroups,
            lattice,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn index_of(&self, members: &BitSet) -> Option<usize> {
        self.lookup.get(members).copied()
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    /// Minimal overgroups of `H` (atoms).
    pub fn minimal_overgroups(&self) -> Vec<usize> {
        self.lattice.atoms()
    }

    /// Maximal subgroups of `G` containing `H` (coatoms).
    pub fn maximal_subgroups(&self) -> Vec<usize> {
        self.lattice.coatoms()
    }
}

/// Short human label: order plus generators in cycle notation.
pub fn subgroup_label(group: &FiniteGroup, k: &Subgroup) -> String {
    let gens: Vec<String> = group
        .small_generating_set(k.members())
        .into_iter()
        .map(|g| group.element(g).to_string())
        .collect();
    if gens.is_empty() {
        "1".to_string()
    } else {
        format!("<{}>", gens.join(", "))
    }
}

/// `H ⊆ G`, with its interval built on first use.
pub struct Inclusion {
    label: String,
    group: Arc<FiniteGroup>,
    sub: Subgroup,
    interval: OnceLock<std::result::Result<Interval, Error>>,
}

impl std::fmt::Debug for Inclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Inclusion")
            .field("label", &self.label)
            .field("order", &self.group.order())
            .field("index", &self.index())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OreReport {
    pub distributive: bool,
    pub h_cyclic: bool,
    /// An element `g` with `<H,g> = G`, in cycle notation.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOreConditions {
    pub cond_normal: bool,
    pub cond_sum: bool,
    pub sum_value: Ratio<i64>,
}

impl Inclusion {
    pub fn new(group: Arc<FiniteGroup>, sub: Subgroup, label: impl Into<String>) -> Self {
        Inclusion {
            label: label.into(),
            group,
            sub,
            interval: OnceLock::new(),
        }
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

    pub fn index(&self) -> usize {
        self.group.order() / self.sub.order()
    }

    pub fn interval(&self) -> Result<&Interval> {
        self.interval
            .get_or_init(|| Interval::new(&self.group, &self.sub))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn is_distributive(&self) -> Result<bool> {
        Ok(self.interval()?.lattice().is_distributive())
    }

    /// First element (canonical order) with `<H,g> = G`.
    pub fn h_cyclic_witness(&self) -> Option<usize> {
        let n = self.group.order();
        let mut tried = BitSet::new(n);
        for g in 0..n {
            if tried.contains(g) {
                continue;
            }
            // <H,g> only depends on HgH
            let dc = self.group.double_coset(&self.sub, g, &self.sub);
            tried = tried.union(&dc);
            let k = self.group.join(&self.sub, &self.group.generate(&[g]));
            if k.order() == n {
                return Some(g);
            }
        }
        None
    }

    pub fn is_h_cyclic(&self) -> bool {
        self.h_cyclic_witness().is_some()
    }

    pub fn ore_verify(&self) -> Result<OreReport> {
        let distributive = self.is_distributive()?;
        let w = self.h_cyclic_witness();
        let report = OreReport {
            distributive,
            h_cyclic: w.is_some(),
            witness: w.map(|g| self.group.element(g).to_string()),
        };
        if distributive && !report.h_cyclic {
            return Err(Error::TheoremViolation(format!(
                "{}: distributive interval without H-cyclic witness",
                self.label
            )));
        }
        Ok(report)
    }

    pub fn dual_ore_conditions(&self) -> Result<DualOreConditions> {
        let iv = self.interval()?;
        let cond_normal = iv
            .subgroups()
            .iter()
            .all(|k| self.group.is_normal_intermediate(&self.sub, k));
        let h = self.sub.order() as i64;
        let sum_value = iv
            .minimal_overgroups()
            .into_iter()
            .map(|k| Ratio::new(h, iv.subgroup(k).order() as i64))
            .fold(Ratio::from_integer(0), |a, b| a + b);
        Ok(DualOreConditions {
            cond_normal,
            cond_sum: sum_value <= Ratio::from_integer(2),
            sum_value,
        })
    }

    /// Index of a minimal central block whose H-fixed part has pointwise
    /// stabilizer exactly `H`.
    pub fn linear_primitivity_block(&self, seed: u64) -> Result<Option<usize>> {
        let ctx = BoxContext::new(self.group.clone(), self.sub.clone(), self.label.clone())?;
        let blocks = ctx.central_projections(crate::boxalgebra::Side::Primal, seed)?;
        for (i, p) in blocks.iter().enumerate() {
            let stab = ctx.translation_stabilizer(p);
            if stab == self.sub {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_linearly_primitive(&self, seed: u64) -> Result<bool> {
        Ok(self.linear_primitivity_block(seed)?.is_some())
    }
}

/// Some irreducible representation of `G` is faithful.
pub fn is_linearly_primitive_group(group: Arc<FiniteGroup>, seed: u64) -> Result<bool> {
    let h = group.trivial();
    Inclusion::new(group, h, "").is_linearly_primitive(seed)
}

/// Core-free form of an inclusion: the quotient `G/core(H)` with the image of `H`.
fn core_quotient(inc: &Inclusion) -> Result<(CayleyTable, BitSet)> {
    let g = &inc.group;
    let core = g.core(&inc.sub);
    let q = g.order() / core.order();
    if q > QUOTIENT_ORDER_CAP {
        return Err(Error::QuotientOrderCapExceeded {
            order: q,
            cap: QUOTIENT_ORDER_CAP,
        });
    }
    let (table, which) = g.quotient(&g.whole(), &core);
    let image = BitSet::from_indices(table.n, inc.sub.elements().map(|x| which[&x]));
    Ok((table, image))
}

fn invariants(t: &CayleyTable, s: &BitSet) -> (usize, usize, bool, usize, usize, Vec<usize>, Vec<usize>) {
    let mut orders: Vec<usize> = (0..t.n).map(|g| t.element_order(g)).collect();
    orders.sort_unstable();
    let mut sub_orders: Vec<usize> = s.iter().map(|g| t.element_order(g)).collect();
    sub_orders.sort_unstable();
    (
        t.n,
        s.count(),
        t.is_abelian(),
        t.center_order(),
        t.derived_order(),
        orders,
        sub_orders,
    )
}

/// Cheap invariants of the core-free form; equivalent inclusions share them.
pub fn equivalence_key(inc: &Inclusion) -> Result<Vec<usize>> {
    let (t, s) = core_quotient(inc)?;
    let (n, k, abelian, z, d, orders, sub_orders) = invariants(&t, &s);
    let mut key = vec![n, k, usize::from(abelian), z, d];
    key.extend(orders);
    key.push(usize::MAX);
    key.extend(sub_orders);
    Ok(key)
}

/// Isomorphism `B/A_B -> D/C_D` carrying the image of `A` onto the image of `C`.
pub fn inclusions_equivalent(a: &Inclusion, b: &Inclusion) -> Result<bool> {
    let (t1, s1) = core_quotient(a)?;
    let (t2, s2) = core_quotient(b)?;
    if invariants(&t1, &s1) != invariants(&t2, &s2) {
        return Ok(false);
    }
    Ok(find_isomorphism(&t1, &s1, &t2, &s2).is_some())
}

/// Brute force over images of a small generating set of `t1`.
fn find_isomorphism(t1: &CayleyTable, s1: &BitSet, t2: &CayleyTable, s2: &BitSet) -> Option<Vec<usize>> {
    let n = t1.n;
    // greedy generators by decreasing order
    let mut cands: Vec<usize> = (1..n).collect();
    cands.sort_by_key(|&g| (std::cmp::Reverse(t1.element_order(g)), g));
    let mut gens = Vec::new();
    let mut span = t1.generate(&[]);
    for g in cands {
        if span.count() == n {
            break;
        }
        if !span.contains(g) {
            gens.push(g);
            span = t1.generate(&gens);
        }
    }
    // BFS words: each element as parent * generator
    let mut word: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (gi, &g) in gens.iter().enumerate() {
            let y = t1.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                word[y] = Some((x, gi));
                order.push(y);
            }
        }
        i += 1;
    }
    let targets: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = t1.element_order(g);
            (0..t2.n).filter(|&h| t2.element_order(h) == o).collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    let k = gens.len();
    if k == 0 {
        return (t2.n == 1).then(|| vec![0]);
    }
    loop {
        let imgs: Vec<usize> = (0..k).map(|j| targets[j][choice[j]]).collect();
        if let Some(phi) = extend(t1, t2, &gens, &imgs, &order, &word) {
            if s1.iter().all(|x| s2.contains(phi[x])) && s1.count() == s2.count() {
                return Some(phi);
            }
        }
        // odometer
        let mut j = 0;
        loop {
            if j == k {
                return None;
            }
            choice[j] += 1;
            if choice[j] < targets[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

fn extend(
    t1: &CayleyTable,
    t2: &CayleyTable,
    gens: &[usize],
    imgs: &[usize],
    order: &[usize],
    word: &[Option<(usize, usize)>],
) -> Option<Vec<usize>> {
    let n = t1.n;
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    let mut used = vec![false; t2.n];
    used[0] = true;
    for &y in &order[1..] {
        let (x, gi) = word[y].unwrap();
        let v = t2.mul(phi[x], imgs[gi]);
        if used[v] {
            return None;
        }
        used[v] = true;
        phi[y] = v;
    }
    for x in 0..n {
        for (gi, &g) in gens.iter().enumerate() {
            if phi[t1.mul(x, g)] != t2.mul(phi[x], imgs[gi]) {
                return None;
            }
        }
    }
    Some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, parse_subgroup_spec};

    fn inc(group: &str, sub: &str) -> Inclusion {
        let g = Arc::new(lookup(group).unwrap().build().unwrap());
        let h = parse_subgroup_spec(&g, sub).unwrap();
        Inclusion::new(g, h, format!("{group}/{sub}"))
    }

    #[test]
    fn h_cyclic_examples() {
        let i = inc("S4", "(1,2)");
        assert!(i.is_h_cyclic());
        assert!(!inc("S3", "trivial").is_h_cyclic());
        let m = inc("S4", "(1,2);(1,2,3)");
        let w = m.h_cyclic_witness().unwrap();
        assert!(!m.subgroup().contains(w));
    }

    #[test]
    fn ore_examples() {
        let r = inc("Z6", "trivial").ore_verify().unwrap();
        assert!(r.distributive && r.h_cyclic);
        let r = inc("S4", "(1,2)").ore_verify().unwrap();
        assert!(!r.distributive && r.h_cyclic);
        let r = inc("Z2^2", "trivial").ore_verify().unwrap();
        assert!(!r.distributive && !r.h_cyclic);
    }

    #[test]
    fn dual_ore_examples() {
        let c = inc("Z6", "trivial").dual_ore_conditions().unwrap();
        assert!(c.cond_normal && c.cond_sum);
        assert_eq!(c.sum_value, Ratio::new(5, 6));
        let c = inc("S4", "(1,2)").dual_ore_conditions().unwrap();
        assert_eq!(c.sum_value, Ratio::new(7, 6));
        assert!(c.cond_sum);
        let c = inc("S4", "whole").dual_ore_conditions().unwrap();
        assert!(c.cond_normal && c.cond_sum);
        assert_eq!(c.sum_value, Ratio::from_integer(0));
    }

    #[test]
    fn interval_of_s2_in_s4() {
        let i = inc("S4", "(1,2)");
        assert_eq!(i.interval().unwrap().len(), 6);
        assert_eq!(inc("Z6", "trivial").interval().unwrap().len(), 4);
    }

    #[test]
    fn equivalence_examples() {
        let a = inc("S4", "(1,2,3,4)");
        let b = inc("S4", "(1,2)(3,4)");
        assert!(!inclusions_equivalent(&a, &b).unwrap());
        assert!(inclusions_equivalent(&a, &a).unwrap());
        // ({1} ⊆ Z2) against (Z2 × 1 ⊆ Z2^2): both have core quotient (1 ⊆ Z2)
        let c = inc("Z2", "trivial");
        let d = inc("Z2^2", "(1,2)");
        assert!(inclusions_equivalent(&c, &d).unwrap());
        // two conjugate S2's in S4 are equivalent
        assert!(inclusions_equivalent(&inc("S4", "(1,2)"), &inc("S4", "(3,4)")).unwrap());
        // S4/(12) is not the same as S4/(12)(34)
        assert!(!inclusions_equivalent(&inc("S4", "(1,2)"), &inc("S4", "(1,2)(3,4)")).unwrap());
    }

    #[test]
    fn quotient_cap() {
        let big = inc("S5", "trivial");
        assert!(inclusions_equivalent(&big, &big).unwrap());
    }

    #[test]
    fn linear_primitivity_examples() {
        let s3 = Arc::new(lookup("S3").unwrap().build().unwrap());
        assert!(is_linearly_primitive_group(s3, 1).unwrap());
        let v4 = Arc::new(lookup("Z2^2").unwrap().build().unwrap());
        assert!(!is_linearly_primitive_group(v4, 1).unwrap());
        for n in [1, 5, 12] {
            let z = Arc::new(lookup(&format!("Z{n}")).unwrap().build().unwrap());
            assert!(is_linearly_primitive_group(z, 1).unwrap());
        }
        assert!(inc("S4", "(1,2)").is_linearly_primitive(0).unwrap());
        assert!(!inc("S4", "(1,2)(3,4)").is_linearly_primitive(0).unwrap());
    }
}
