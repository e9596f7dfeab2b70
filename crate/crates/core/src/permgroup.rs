//! Permutation groups given by generators: closure, Cayley table, subgroup
//! enumeration and the double-coset tests used by the interval code.
//!
//! Points are 0-based internally; cycle notation is 1-based on the way in and
//! out. Products compose right to left: `(g*h)(x) = g(h(x))`.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

pub const DEFAULT_ORDER_CAP: usize = 400;
pub const DEFAULT_SUBGROUP_CAP: usize = 20_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    /// From disjoint-or-not cycles of 0-based points, applied right to left.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut p = Permutation::identity(degree);
        for c in cycles.iter().rev() {
            let mut step = Permutation::identity(degree);
            for (k, &a) in c.iter().enumerate() {
                if a >= degree {
                    return Err(Error::DegreeMismatch {
                        expected: degree,
                        got: a + 1,
                    });
                }
                step.images[a] = c[(k + 1) % c.len()] as u32;
            }
            if Permutation::from_images(step.images.clone()).is_none() {
                return Err(Error::parse(0, "cycle repeats a point"));
            }
            p = step.compose(&p);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn with_degree(&self, degree: usize) -> Result<Permutation> {
        let n = self.images.len();
        if degree < n {
            if self.images[degree..]
                .iter()
                .enumerate()
                .any(|(i, &x)| x as usize != degree + i)
            {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: n,
                });
            }
            return Ok(Permutation {
                images: self.images[..degree].to_vec(),
            });
        }
        let mut images = self.images.clone();
        images.extend(n as u32..degree as u32);
        Ok(Permutation { images })
    }

    /// Disjoint cycles of length > 1, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a generator list such as `(1,2)(3,4); (1,2,3,4)`.
///
/// Generators are separated by `;` (or `,` between a closing and an opening
/// parenthesis); points inside a cycle by commas or whitespace. `()` is the
/// identity. With `degree = None` the degree is the largest point mentioned.
pub fn parse_cycle_notation(text: &str, degree: Option<usize>) -> Result<Vec<Permutation>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut gens: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    let mut in_generator = false;
    let mut max_point = 0usize;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        match bytes[pos] {
            b'(' => {
                pos += 1;
                let mut cycle = Vec::new();
                loop {
                    skip_ws(&mut pos);
                    if pos >= bytes.len() {
                        return Err(Error::parse(pos, "unterminated cycle"));
                    }
                    match bytes[pos] {
                        b')' => {
                            pos += 1;
                            break;
                        }
                        b',' if !cycle.is_empty() => {
                            pos += 1;
                            skip_ws(&mut pos);
                            if pos < bytes.len() && !bytes[pos].is_ascii_digit() {
                                return Err(Error::parse(pos, "expected a point after ','"));
                            }
                        }
                        b'0'..=b'9' => {
                            let start = pos;
                            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                                pos += 1;
                            }
                            let v: usize = text[start..pos]
                                .parse()
                                .map_err(|_| Error::parse(start, "point out of range"))?;
                            if v == 0 {
                                return Err(Error::parse(start, "points are 1-based"));
                            }
                            if v > 1 << 16 {
                                return Err(Error::parse(start, "point out of range"));
                            }
                            if cycle.contains(&(v - 1)) {
                                return Err(Error::parse(start, "point repeated inside a cycle"));
                            }
                            max_point = max_point.max(v);
                            cycle.push(v - 1);
                        }
                        _ => return Err(Error::parse(pos, "unexpected character in cycle")),
                    }
                }
                if cycle.len() > 1 {
                    current.push(cycle);
                }
                in_generator = true;
            }
            b';' | b',' => {
                if !in_generator {
                    return Err(Error::parse(pos, "empty generator"));
                }
                gens.push(std::mem::take(&mut current));
                in_generator = false;
                pos += 1;
            }
            _ => return Err(Error::parse(pos, "unexpected character")),
        }
    }
    if in_generator {
        gens.push(current);
    } else if !gens.is_empty() {
        return Err(Error::parse(pos, "trailing separator"));
    }
    let degree = match degree {
        Some(d) if d < max_point => {
            return Err(Error::DegreeMismatch {
                expected: d,
                got: max_point,
            })
        }
        Some(d) => d,
        None => max_point.max(1),
    };
    gens.iter()
        .map(|cycles| Permutation::from_cycles(degree, cycles))
        .collect()
}

/// Formats a generator list back into cycle notation.
pub fn format_generators(gens: &[Permutation]) -> String {
    gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; ")
}

/// Subset of a group's element indices closed under the group law.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    members: BitSet,
}

impl Subgroup {
    pub fn from_bitset(members: BitSet) -> Self {
        Subgroup { members }
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.count()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.intersection(&other.members),
        }
    }
}

/// Finite permutation group with its full Cayley table.
///
/// Elements are sorted by image tuple, so index 0 is the identity and the
/// numbering depends only on the set of permutations.
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, usize>,
    table: Vec<u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_generators(gens: &[Permutation]) -> Result<Self> {
        Self::from_generators_capped(gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_generators_capped(gens: &[Permutation], cap: usize) -> Result<Self> {
        let degree = gens.iter().map(|g| g.degree()).max().unwrap_or(1);
        let gens: Vec<Permutation> = gens.iter().map(|g| g.with_degree(degree)).collect::<Result<_>>()?;
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let lookup: HashMap<Permutation, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = lookup[&elements[a].compose(&elements[b])] as u32;
            }
        }
        let inverses = elements.iter().map(|p| lookup[&p.inverse()] as u32).collect();
        let mut group = FiniteGroup {
            degree,
            generators: gens,
            elements,
            lookup,
            table,
            inverses,
            orders: Vec::new(),
        };
        group.orders = (0..n).map(|g| group.compute_order(g)).collect();
        Ok(group)
    }

    fn compute_order(&self, g: usize) -> u32 {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        let p = p.with_degree(self.degree).ok()?;
        self.lookup.get(&p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.orders[g] as usize
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_bitset(BitSet::full(self.order()))
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_bitset(BitSet::from_indices(self.order(), [0]))
    }

    /// Closure of a set of element indices.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        self.close(&BitSet::from_indices(self.order(), [0]), gens)
    }

    /// Smallest subgroup containing `seed` (a subgroup) and `extra`.
    fn close(&self, seed: &BitSet, extra: &[usize]) -> Subgroup {
        let mut members = seed.clone();
        let mut gens: Vec<usize> = extra.iter().copied().filter(|&g| g != 0).collect();
        if gens.iter().all(|&g| members.contains(g)) {
            return Subgroup::from_bitset(members);
        }
        gens.extend(self.small_generating_set(seed));
        let mut queue: VecDeque<usize> = members.iter().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_bitset(members)
    }

    /// A generating set of a subgroup, chosen greedily by decreasing element order.
    pub fn small_generating_set(&self, members: &BitSet) -> Vec<usize> {
        let mut cands: Vec<usize> = members.iter().filter(|&g| g != 0).collect();
        cands.sort_by_key(|&g| (std::cmp::Reverse(self.orders[g]), g));
        let mut gens = Vec::new();
        let mut span = BitSet::from_indices(self.order(), [0]);
        let target = members.count();
        for g in cands {
            if span.count() == target {
                break;
            }
            if !span.contains(g) {
                gens.push(g);
                span = self.generate_plain(&gens);
            }
        }
        gens
    }

    fn generate_plain(&self, gens: &[usize]) -> BitSet {
        let mut members = BitSet::from_indices(self.order(), [0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        members
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if b.is_subgroup_of(a) {
            return a.clone();
        }
        if a.is_subgroup_of(b) {
            return b.clone();
        }
        let extra = self.small_generating_set(b.members());
        self.close(a.members(), &extra)
    }

    /// Subgroup generated by permutations, which must lie in the group.
    pub fn subgroup_from_perms(&self, perms: &[Permutation]) -> Result<Subgroup> {
        let idx = perms
            .iter()
            .map(|p| self.index_of(p).ok_or_else(|| Error::NotAnElement(p.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generate(&idx))
    }

    pub fn is_subgroup(&self, set: &BitSet) -> bool {
        if !set.contains(0) {
            return false;
        }
        let elems: Vec<usize> = set.iter().collect();
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    pub fn conjugate(&self, s: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        Subgroup::from_bitset(BitSet::from_indices(
            self.order(),
            s.elements().map(|x| self.mul(self.mul(g, x), gi)),
        ))
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.generators_idx().into_iter().all(|g| &self.conjugate(n, g) == n)
    }

    fn generators_idx(&self) -> Vec<usize> {
        self.generators.iter().map(|p| self.lookup[p]).collect()
    }

    /// Normal core of `h` inside the subgroup `within` (pass `whole()` for G).
    pub fn core_in(&self, h: &Subgroup, within: &Subgroup) -> Subgroup {
        let mut core = h.clone();
        for g in within.elements() {
            core = core.meet(&self.conjugate(h, g));
        }
        core
    }

    pub fn core(&self, h: &Subgroup) -> Subgroup {
        self.core_in(h, &self.whole())
    }

    pub fn center(&self) -> Subgroup {
        let n = self.order();
        let gens = self.generators_idx();
        Subgroup::from_bitset(BitSet::from_indices(
            n,
            (0..n).filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z))),
        ))
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut comms = BitSet::from_indices(n, [0]);
        for a in 0..n {
            for b in 0..a {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                comms.insert(c);
            }
        }
        let gens: Vec<usize> = comms.iter().collect();
        self.generate(&gens)
    }

    pub fn order_multiset(&self, s: &Subgroup) -> Vec<usize> {
        let mut v: Vec<usize> = s.elements().map(|g| self.element_order(g)).collect();
        v.sort_unstable();
        v
    }

    /// The set `A g B`.
    pub fn double_coset(&self, a: &Subgroup, g: usize, b: &Subgroup) -> BitSet {
        let n = self.order();
        let left: Vec<usize> = a.elements().map(|x| self.mul(x, g)).collect();
        let mut out = BitSet::new(n);
        for y in b.elements() {
            for &x in &left {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// Partition of G into `A g B` double cosets, ordered by least element.
    pub fn double_cosets(&self, a: &Subgroup, b: &Subgroup) -> Vec<BitSet> {
        let n = self.order();
        let mut covered = BitSet::new(n);
        let mut out = Vec::new();
        for g in 0..n {
            if covered.contains(g) {
                continue;
            }
            let d = self.double_coset(a, g, b);
            covered = covered.union(&d);
            out.push(d);
        }
        out
    }

    /// Left cosets `gH` ordered by least element; the first is `H` itself.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<BitSet> {
        let n = self.order();
        let mut covered = BitSet::new(n);
        let mut out = Vec::new();
        for g in 0..n {
            if covered.contains(g) {
                continue;
            }
            let c = BitSet::from_indices(n, h.elements().map(|x| self.mul(g, x)));
            covered = covered.union(&c);
            out.push(c);
        }
        out
    }

    /// `K` is a normal intermediate of `H ⊆ K ⊆ G`: `HgK = KgH` for all `g`.
    ///
    /// Checking one representative per `(H,K)` double coset suffices: if
    /// `X = HgK = KgH` then every `x ∈ X` has `HxK = X = KxH`.
    pub fn is_normal_intermediate(&self, h: &Subgroup, k: &Subgroup) -> bool {
        let n = self.order();
        let mut covered = BitSet::new(n);
        for g in 0..n {
            if covered.contains(g) {
                continue;
            }
            let hgk = self.double_coset(h, g, k);
            if hgk != self.double_coset(k, g, h) {
                return false;
            }
            covered = covered.union(&hgk);
        }
        true
    }

    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.order() {
            let s = self.generate(&[g]);
            if seen.insert(s.members().clone()) {
                out.push(s);
            }
        }
        out
    }

    /// Every subgroup, sorted by (order, members).
    pub fn all_subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        let cyclic = self.cyclic_subgroups();
        let cyclic_gens: Vec<usize> = cyclic
            .iter()
            .map(|c| self.small_generating_set(c.members()).first().copied().unwrap_or(0))
            .collect();
        let mut seen: HashSet<BitSet> = cyclic.iter().map(|c| c.members().clone()).collect();
        let mut all = cyclic.clone();
        let mut queue: VecDeque<usize> = (0..all.len()).collect();
        while let Some(i) = queue.pop_front() {
            let a = all[i].clone();
            for (c, &cg) in cyclic.iter().zip(&cyclic_gens) {
                if c.is_subgroup_of(&a) {
                    continue;
                }
                let j = self.close(a.members(), &[cg]);
                if seen.insert(j.members().clone()) {
                    if all.len() >= cap {
                        return Err(Error::SubgroupCapExceeded { cap });
                    }
                    all.push(j);
                    queue.push_back(all.len() - 1);
                }
            }
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// Every subgroup containing `h`, sorted by (order, members).
    pub fn overgroups(&self, h: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
        let mut seen: HashSet<BitSet> = HashSet::from([h.members().clone()]);
        let mut all = vec![h.clone()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let k = all[i].clone();
            let mut covered = k.members().clone();
            for g in 0..self.order() {
                if covered.contains(g) {
                    continue;
                }
                // <K,g> depends only on the double coset KgK.
                covered = covered.union(&self.double_coset(&k, g, &k));
                let j = self.close(k.members(), &[g]);
                if seen.insert(j.members().clone()) {
                    if all.len() >= cap {
                        return Err(Error::SubgroupCapExceeded { cap });
                    }
                    all.push(j);
                    queue.push_back(all.len() - 1);
                }
            }
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// Representatives of subgroup conjugacy classes, one per class, each the
    /// least member of its class under (order, members).
    pub fn subgroup_class_representatives(&self, cap: usize) -> Result<Vec<Subgroup>> {
        let subs = self.all_subgroups(cap)?;
        let mut done: HashSet<BitSet> = HashSet::new();
        let mut reps = Vec::new();
        for s in subs {
            if done.contains(s.members()) {
                continue;
            }
            let mut class: Vec<Subgroup> = (0..self.order()).map(|g| self.conjugate(&s, g)).collect();
            class.sort();
            class.dedup();
            for c in &class {
                done.insert(c.members().clone());
            }
            reps.push(class.into_iter().next().unwrap());
        }
        reps.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        Ok(reps)
    }

    /// Action of G on the left cosets of `h`, as a permutation group of degree
    /// `[G:H]`; returns it with the stabilizer of the first coset (`H` itself).
    pub fn coset_action(&self, h: &Subgroup) -> Result<(FiniteGroup, Subgroup)> {
        let cosets = self.left_cosets(h);
        let mut which = vec![0usize; self.order()];
        for (i, c) in cosets.iter().enumerate() {
            for g in c.iter() {
                which[g] = i;
            }
        }
        let reps: Vec<usize> = cosets.iter().map(|c| c.iter().next().unwrap()).collect();
        let perm_of = |g: usize| {
            Permutation::from_images(reps.iter().map(|&r| which[self.mul(g, r)] as u32).collect())
                .expect("coset action is a permutation")
        };
        let gens: Vec<Permutation> = self.generators_idx().into_iter().map(perm_of).collect();
        let image = FiniteGroup::from_generators_capped(&gens, self.order().max(1))?;
        let stab = h
            .elements()
            .map(|x| image.index_of(&perm_of(x)).expect("image element"))
            .collect::<Vec<_>>();
        let stab = image.generate(&stab);
        Ok((image, stab))
    }
}

/// A finite group given only by its multiplication table (used for quotients).
#[derive(Clone, Debug)]
pub struct CayleyTable {
    pub n: usize,
    pub table: Vec<u32>,
    pub inverses: Vec<u32>,
}

impl CayleyTable {
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn generate(&self, gens: &[usize]) -> BitSet {
        let mut members = BitSet::from_indices(self.n, [0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        members
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center_order(&self) -> usize {
        (0..self.n)
            .filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z)))
            .count()
    }

    pub fn derived_order(&self) -> usize {
        let mut comms = Vec::new();
        for a in 0..self.n {
            for b in 0..a {
                let ab = self.mul(a, b);
                let ba = self.mul(b, a);
                comms.push(self.mul(ab, self.inverses[ba] as usize));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.generate(&comms).count()
    }
}

impl FiniteGroup {
    /// Quotient `B/N` for `N` normal in `B`, with coset 0 the identity, plus
    /// the map from elements of `B` to coset indices.
    pub fn quotient(&self, b: &Subgroup, n: &Subgroup) -> (CayleyTable, HashMap<usize, usize>) {
        let mut which: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        for g in b.elements() {
            if which.contains_key(&g) {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for x in n.elements() {
                which.insert(self.mul(g, x), idx);
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for i in 0..q {
            for j in 0..q {
                table[i * q + j] = which[&self.mul(reps[i], reps[j])] as u32;
            }
        }
        let inverses = reps.iter().map(|&r| which[&self.inv(r)] as u32).collect();
        (CayleyTable { n: q, table, inverses }, which)
    }
}
