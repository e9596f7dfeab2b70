//! Finite lattices from an order relation, with meet/join tables and the
//! structural tests used for subgroup intervals.

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
    labels: Vec<String>,
}

/// Outcome of the distributivity test; a failing test carries the witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distributivity {
    Distributive,
    /// Pentagon `bottom < low < high < top` with `side` off the chain.
    N5 {
        bottom: usize,
        low: usize,
        high: usize,
        side: usize,
        top: usize,
    },
    /// Diamond with three pairwise incomparable middle elements.
    M3 {
        bottom: usize,
        mids: [usize; 3],
        top: usize,
    },
}

impl FiniteLattice {
    /// Builds the lattice from an order relation; returns `None` if some pair
    /// lacks a meet or a join.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Option<Self> {
        Self::from_order_labeled(n, leq, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn from_order_labeled(n: usize, leq: impl Fn(usize, usize) -> bool, labels: Vec<String>) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                rel[a * n + b] = leq(a, b);
            }
        }
        let le = |a: usize, b: usize| rel[a * n + b];
        let down: Vec<usize> = (0..n).map(|a| (0..n).filter(|&c| le(c, a)).count()).collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                // the meet, if it exists, is the lower bound with the largest down-set
                let m = (0..n).filter(|&c| le(c, a) && le(c, b)).max_by_key(|&c| down[c])?;
                if (0..n).any(|c| le(c, a) && le(c, b) && !le(c, m)) {
                    return None;
                }
                let j = (0..n).filter(|&c| le(a, c) && le(b, c)).min_by_key(|&c| down[c])?;
                if (0..n).any(|c| le(a, c) && le(b, c) && !le(j, c)) {
                    return None;
                }
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|c| le(b, c)))?;
        let top = (0..n).find(|&t| (0..n).all(|c| le(c, t)))?;
        Some(FiniteLattice {
            n,
            leq: rel,
            meet,
            join,
            bottom,
            top,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// `b` covers `a`.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.covers(self.bottom, a)).collect()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.covers(a, self.top)).collect()
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity() == Distributivity::Distributive
    }

    /// Searches for a pentagon or diamond sublattice. Exact.
    pub fn distributivity(&self) -> Distributivity {
        let n = self.n;
        if let Some(w) = self.find_n5() {
            return w;
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if self.leq(x, y) || self.leq(y, x) {
                    continue;
                }
                let b = self.meet(x, y);
                let t = self.join(x, y);
                for z in (y + 1)..n {
                    if self.leq(x, z) || self.leq(z, x) || self.leq(y, z) || self.leq(z, y) {
                        continue;
                    }
                    if self.meet(x, z) == b && self.meet(y, z) == b && self.join(x, z) == t && self.join(y, z) == t {
                        return Distributivity::M3 {
                            bottom: b,
                            mids: [x, y, z],
                            top: t,
                        };
                    }
                }
            }
        }
        Distributivity::Distributive
    }

    fn find_n5(&self) -> Option<Distributivity> {
        let n = self.n;
        for low in 0..n {
            for high in 0..n {
                if !self.lt(low, high) {
                    continue;
                }
                for side in 0..n {
                    if self.leq(side, high) || self.leq(low, side) {
                        continue;
                    }
                    // side is incomparable with both (side ≤ low would give side ≤ high)
                    if self.meet(low, side) == self.meet(high, side) && self.join(low, side) == self.join(high, side) {
                        return Some(Distributivity::N5 {
                            bottom: self.meet(high, side),
                            low,
                            high,
                            side,
                            top: self.join(low, side),
                        });
                    }
                }
            }
        }
        None
    }

    /// Direct check of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` over all triples.
    pub fn satisfies_distributive_identity(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))))
        })
    }

    pub fn is_modular(&self) -> bool {
        self.find_n5().is_none()
    }

    /// Rank `r` when the lattice is isomorphic to the boolean lattice `B_r`.
    pub fn boolean_rank(&self) -> Result<usize> {
        let atoms = self.atoms();
        let r = atoms.len();
        if r > 20 || self.n != 1 << r {
            return Err(Error::NotBoolean);
        }
        let mut seen = vec![false; self.n];
        for mask in 0u32..(1 << r) {
            let x = self.join_all((0..r).filter(|&i| mask >> i & 1 == 1).map(|i| atoms[i]));
            if seen[x] {
                return Err(Error::NotBoolean);
            }
            seen[x] = true;
        }
        // a bijection from subsets that preserves joins; check meets too
        for m1 in 0u32..(1 << r) {
            for m2 in 0u32..(1 << r) {
                let j = |m: u32| self.join_all((0..r).filter(|&i| m >> i & 1 == 1).map(|i| atoms[i]));
                if self.meet(j(m1), j(m2)) != j(m1 & m2) {
                    return Err(Error::NotBoolean);
                }
            }
        }
        Ok(r)
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean_rank().is_ok()
    }

    /// Elements of the interval `[a, b]`, in index order.
    pub fn interval_elements(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&c| self.leq(a, c) && self.leq(c, b)).collect()
    }

    /// Sublattice on `[a, b]` with indices renumbered; returns it with the
    /// map from new to old indices.
    pub fn interval(&self, a: usize, b: usize) -> (FiniteLattice, Vec<usize>) {
        let elems = self.interval_elements(a, b);
        let labels = elems.iter().map(|&i| self.labels[i].clone()).collect();
        let sub = FiniteLattice::from_order_labeled(elems.len(), |i, j| self.leq(elems[i], elems[j]), labels)
            .expect("interval of a lattice is a lattice");
        (sub, elems)
    }

    /// `[meet of coatoms, top]`.
    pub fn top_interval(&self) -> (FiniteLattice, Vec<usize>) {
        let m = self.meet_all(self.coatoms());
        self.interval(m, self.top)
    }

    /// `[bottom, join of atoms]`.
    pub fn bottom_interval(&self) -> (FiniteLattice, Vec<usize>) {
        let j = self.join_all(self.atoms());
        self.interval(self.bottom, j)
    }

    pub fn complements(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| self.meet(x, y) == self.bottom && self.join(x, y) == self.top)
            .collect()
    }

    /// Length of a longest chain from bottom to top.
    pub fn height(&self) -> usize {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (0..self.n).filter(|&y| self.leq(y, x)).count());
        let mut best = vec![0usize; self.n];
        for &x in &order {
            for &y in &order {
                if self.covers(y, x) {
                    best[x] = best[x].max(best[y] + 1);
                }
            }
        }
        best[self.top]
    }

    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice::from_order_labeled(self.n, |a, b| self.leq(b, a), self.labels.clone())
            .expect("dual of a lattice is a lattice")
    }

    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let m = other.n;
        let labels = (0..self.n * m)
            .map(|i| format!("({},{})", self.labels[i / m], other.labels[i % m]))
            .collect();
        FiniteLattice::from_order_labeled(
            self.n * m,
            |a, b| self.leq(a / m, b / m) && other.leq(a % m, b % m),
            labels,
        )
        .expect("product of lattices is a lattice")
    }

    /// Glues `other` on top of `self`, identifying self's top with other's bottom.
    pub fn concatenate(&self, other: &FiniteLattice) -> FiniteLattice {
        let n = self.n;
        let others: Vec<usize> = (0..other.n).filter(|&i| i != other.bottom).collect();
        let total = n + others.len();
        let pos = |i: usize| -> (bool, usize) {
            if i < n {
                (false, i)
            } else {
                (true, others[i - n])
            }
        };
        let mut labels = self.labels.clone();
        labels.extend(others.iter().map(|&i| other.labels[i].clone()));
        FiniteLattice::from_order_labeled(
            total,
            |a, b| match (pos(a), pos(b)) {
                ((false, x), (false, y)) => self.leq(x, y),
                ((false, _), (true, _)) => true,
                ((true, _), (false, _)) => false,
                ((true, x), (true, y)) => other.leq(x, y),
            },
            labels,
        )
        .expect("concatenation of lattices is a lattice")
    }

    /// Graphviz Hasse diagram; edges go from each element to its covers.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(s, "  rankdir=BT;");
        for i in 0..self.n {
            let _ = writeln!(s, "  n{} [label=\"{}\"];", i, self.labels[i].replace('"', "'"));
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if self.covers(a, b) {
                    let _ = writeln!(s, "  n{a} -> n{b};");
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// Shortest path length from `from` to `to` along strict relations `a < b`
    /// with `step(a, b)`; `None` when unreachable.
    pub fn shortest_chain(&self, from: usize, to: usize, mut step: impl FnMut(usize, usize) -> bool) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(a) = queue.pop_front() {
            if a == to {
                return Some(dist[a]);
            }
            for b in 0..self.n {
                if dist[b] == usize::MAX && self.lt(a, b) && self.leq(b, to) && step(a, b) {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        None
    }
}

/// Chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> FiniteLattice {
    FiniteLattice::from_order(n, |a, b| a <= b).unwrap()
}

/// Boolean lattice on subsets of an r-set.
pub fn boolean(r: usize) -> FiniteLattice {
    FiniteLattice::from_order(1 << r, |a, b| a & !b == 0).unwrap()
}

/// `M_k`: bottom, top and k pairwise incomparable middles.
pub fn diamond(k: usize) -> FiniteLattice {
    FiniteLattice::from_order(k + 2, |a, b| a == b || a == 0 || b == k + 1).unwrap()
}

/// Pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4.
pub fn pentagon() -> FiniteLattice {
    let up = [vec![0, 1, 2, 3, 4], vec![1, 2, 4], vec![2, 4], vec![3, 4], vec![4]];
    FiniteLattice::from_order(5, |a, b| up[a].contains(&b)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_lattices() {
        assert!(chain(4).is_distributive());
        assert!(boolean(3).is_distributive());
        assert_eq!(boolean(3).boolean_rank().unwrap(), 3);
        assert!(matches!(diamond(3).distributivity(), Distributivity::M3 { .. }));
        assert!(diamond(3).is_modular());
        assert!(matches!(pentagon().distributivity(), Distributivity::N5 { .. }));
        assert!(!pentagon().is_modular());
        assert_eq!(chain(3).boolean_rank(), Err(Error::NotBoolean));
        assert_eq!(diamond(2).boolean_rank().unwrap(), 2);
        assert_eq!(chain(5).height(), 4);
        assert_eq!(pentagon().height(), 3);
    }

    #[test]
    fn intervals_and_complements() {
        let p = pentagon();
        let (top, _) = p.top_interval();
        assert_eq!(top.len(), 5);
        let b = boolean(2);
        assert_eq!(b.complements(1), vec![2]);
        let (t, map) = chain(4).top_interval();
        assert_eq!(t.len(), 2);
        assert_eq!(map, vec![2, 3]);
    }

    #[test]
    fn product_and_concatenation() {
        let b2 = chain(2).product(&chain(2));
        assert_eq!(b2.boolean_rank().unwrap(), 2);
        let c = chain(3).concatenate(&diamond(3));
        assert_eq!(c.len(), 3 + 4);
        assert!(!c.is_distributive());
        assert_eq!(c.height(), 4);
        assert!(chain(3).concatenate(&chain(2)).is_distributive());
    }

    #[test]
    fn dot_output_has_hasse_edges() {
        let d = chain(3).to_dot("c3");
        assert!(d.contains("n0 -> n1;"));
        assert!(!d.contains("n0 -> n2;"));
    }

    // random lattices: closure systems on a 5-set (intersections of random sets)
    fn closure_system(sets: &[u32]) -> Vec<u32> {
        let mut all = vec![0b11111u32];
        for &s in sets {
            let mut add = vec![s];
            for &t in &all {
                add.push(s & t);
            }
            all.extend(add);
            all.sort_unstable();
            all.dedup();
        }
        loop {
            let mut more = all.clone();
            for &a in &all {
                for &b in &all {
                    more.push(a & b);
                }
            }
            more.sort_unstable();
            more.dedup();
            if more.len() == all.len() {
                return all;
            }
            all = more;
        }
    }

    proptest! {
        #[test]
        fn forbidden_sublattice_search_matches_identity(sets in proptest::collection::vec(0u32..32, 0..6)) {
            let elems = closure_system(&sets);
            let l = FiniteLattice::from_order(elems.len(), |a, b| elems[a] & !elems[b] == 0).unwrap();
            prop_assert_eq!(l.is_distributive(), l.satisfies_distributive_identity());
            let d = l.dual();
            prop_assert_eq!(d.is_distributive(), l.is_distributive());
            prop_assert_eq!(d.is_modular(), l.is_modular());
        }
    }
}
