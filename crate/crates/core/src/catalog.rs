//! Built-in groups and the `--group` spec grammar.
//!
//! Names: `Z<n>` (n ≤ 48), `D<2n>` dihedral of order 2n (6 ≤ 2n ≤ 48),
//! `Dic<4n>` dicyclic of order 4n (12 ≤ 4n ≤ 48), `Q8`, `SL(2,3)`,
//! `S3`..`S5`, `A4`, `A5`, `Z2^2`..`Z2^4`. Anything else is given as
//! `perm:<generators in cycle notation>`.

use crate::error::{Error, Result};
use crate::permgroup::{parse_cycle_notation, FiniteGroup, Permutation, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub order: usize,
    pub generators: Vec<Permutation>,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_generators(&self.generators)
    }
}

fn cycle(points: std::ops::Range<usize>) -> Vec<usize> {
    points.collect()
}

fn perm(degree: usize, cycles: &[Vec<usize>]) -> Permutation {
    Permutation::from_cycles(degree, cycles).expect("catalog generator")
}

fn cyclic(n: usize) -> Vec<Permutation> {
    vec![perm(n.max(1), &[cycle(0..n)])]
}

fn dihedral(n: usize) -> Vec<Permutation> {
    // rotation and the reflection i -> -i on n points
    let refl: Vec<Vec<usize>> = (1..n.div_ceil(2)).map(|i| vec![i, n - i]).collect();
    vec![perm(n, &[cycle(0..n)]), perm(n, &refl)]
}

/// Regular representation of the dicyclic group of order 4m, elements
/// `a^k x^e` encoded as `k + 2m e`.
fn dicyclic(m: usize) -> Vec<Permutation> {
    let n = 2 * m;
    let enc = |k: usize, e: usize| (k % n) + n * e;
    let mul = |(k1, e1): (usize, usize), (k2, e2): (usize, usize)| -> (usize, usize) {
        // x a = a^{-1} x, x^2 = a^m
        match (e1, e2) {
            (0, _) => ((k1 + k2) % n, e2),
            (1, 0) => ((k1 + n - k2 % n) % n, 1),
            _ => ((k1 + n - k2 % n + m) % n, 0),
        }
    };
    let left = |g: (usize, usize)| {
        let images = (0..2 * n)
            .map(|i| {
                let (k, e) = mul(g, (i % n, i / n));
                enc(k, e) as u32
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    vec![left((1, 0)), left((0, 1))]
}

fn symmetric(n: usize) -> Vec<Permutation> {
    vec![perm(n, &[vec![0, 1]]), perm(n, &[cycle(0..n)])]
}

fn alternating(n: usize) -> Vec<Permutation> {
    match n {
        4 => vec![perm(4, &[vec![0, 1, 2]]), perm(4, &[vec![0, 1], vec![2, 3]])],
        5 => vec![perm(5, &[vec![0, 1, 2]]), perm(5, &[cycle(0..5)])],
        _ => unreachable!(),
    }
}

fn elementary_abelian(k: usize) -> Vec<Permutation> {
    let n = 2 * k;
    (0..k).map(|i| perm(n, &[vec![2 * i, 2 * i + 1]])).collect()
}

/// SL(2,3) acting on the eight nonzero vectors of F_3^2.
fn sl23() -> Vec<Permutation> {
    let vecs: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0)).collect();
    let act = |m: [usize; 4]| {
        let images = vecs
            .iter()
            .map(|&(x, y)| {
                let w = ((m[0] * x + m[1] * y) % 3, (m[2] * x + m[3] * y) % 3);
                vecs.iter().position(|&v| v == w).unwrap() as u32
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    vec![act([1, 1, 0, 1]), act([1, 0, 1, 1])]
}

fn entry(name: String, order: usize, generators: Vec<Permutation>) -> CatalogEntry {
    CatalogEntry {
        name,
        order,
        generators,
    }
}

/// The built-in catalog, ordered by (order, name).
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for n in 1..=48 {
        out.push(entry(format!("Z{n}"), n, cyclic(n)));
    }
    for n in 3..=24 {
        out.push(entry(format!("D{}", 2 * n), 2 * n, dihedral(n)));
    }
    for m in 3..=12 {
        out.push(entry(format!("Dic{}", 4 * m), 4 * m, dicyclic(m)));
    }
    out.push(entry("Q8".into(), 8, dicyclic(2)));
    out.push(entry("SL(2,3)".into(), 24, sl23()));
    for n in 3..=5 {
        out.push(entry(format!("S{n}"), (1..=n).product(), symmetric(n)));
    }
    out.push(entry("A4".into(), 12, alternating(4)));
    out.push(entry("A5".into(), 60, alternating(5)));
    for k in 2..=4 {
        out.push(entry(format!("Z2^{k}"), 1 << k, elementary_abelian(k)));
    }
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.name.cmp(&b.name)));
    out
}

fn normalize(name: &str) -> String {
    let n = name.trim();
    match n {
        "SL23" | "SL2_3" | "SL(2,3)" => "SL(2,3)".into(),
        "trivial" => "Z1".into(),
        _ => {
            if let Some(rest) = n.strip_prefix('C') {
                if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
                    return format!("Z{rest}");
                }
            }
            n.to_string()
        }
    }
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    let key = normalize(name);
    catalog().into_iter().find(|e| e.name == key)
}

/// A group spec: a catalog name, `perm:` followed by cycle notation, or
/// `file:` followed by the path of a generator file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub label: String,
    pub generators: Vec<Permutation>,
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("perm:") {
        let generators = parse_cycle_notation(rest, None)?;
        return Ok(GroupSpec {
            label: format!("perm:{}", crate::permgroup::format_generators(&generators)),
            generators,
        });
    }
    if let Some(path) = t.strip_prefix("file:") {
        let path = std::path::Path::new(path);
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let generators = parse_generator_file(&text)?;
        let stem = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(GroupSpec { label: stem, generators });
    }
    if t.is_empty() {
        return Err(Error::parse(0, "empty group spec"));
    }
    lookup(t)
        .map(|e| GroupSpec {
            label: e.name,
            generators: e.generators,
        })
        .ok_or_else(|| Error::UnknownGroup(t.to_string()))
}

/// One generator per line in cycle notation; `#` starts a comment. The
/// degree is the largest point on any line.
pub fn parse_generator_file(text: &str) -> Result<Vec<Permutation>> {
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if body.is_empty() {
        return Err(Error::parse(0, "generator file has no generators"));
    }
    parse_cycle_notation(&body.join(";"), None)
}

/// A subgroup spec relative to `g`: `trivial`, `whole`, or generators in
/// cycle notation (optionally prefixed by `perm:`).
pub fn parse_subgroup_spec(g: &FiniteGroup, text: &str) -> Result<Subgroup> {
    let t = text.trim();
    match t {
        "trivial" | "1" | "{1}" => Ok(g.trivial()),
        "whole" | "G" => Ok(g.whole()),
        _ => {
            let body = t.strip_prefix("perm:").unwrap_or(t);
            let gens = parse_cycle_notation(body, Some(g.degree()))?;
            g.subgroup_from_perms(&gens)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_match_closure() {
        for e in catalog() {
            let g = e.build().unwrap();
            assert_eq!(g.order(), e.order, "{}", e.name);
        }
    }

    #[test]
    fn catalog_names_unique_and_sorted() {
        let c = catalog();
        let mut names: Vec<_> = c.iter().map(|e| e.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
        assert!(c.windows(2).all(|w| w[0].order <= w[1].order));
    }

    #[test]
    fn quaternion_and_dicyclic_shape() {
        let q8 = lookup("Q8").unwrap().build().unwrap();
        // one involution, six elements of order 4
        let invols = (0..8).filter(|&g| q8.element_order(g) == 2).count();
        assert_eq!(invols, 1);
        assert_eq!(q8.all_subgroups(100).unwrap().len(), 6);
        let dic12 = lookup("Dic12").unwrap().build().unwrap();
        assert!(!dic12.is_abelian());
        assert_eq!((0..12).filter(|&g| dic12.element_order(g) == 2).count(), 1);
        let sl = lookup("SL23").unwrap().build().unwrap();
        assert_eq!(sl.center().order(), 2);
    }

    #[test]
    fn specs() {
        assert_eq!(parse_group_spec("S4").unwrap().label, "S4");
        assert_eq!(parse_group_spec("C6").unwrap().label, "Z6");
        let p = parse_group_spec("perm:(1,2,3);(1,2)").unwrap();
        assert_eq!(p.generators.len(), 2);
        assert!(matches!(parse_group_spec("Foo"), Err(Error::UnknownGroup(_))));
        assert!(parse_group_spec("perm:(1,2").is_err());
        let s4 = parse_group_spec("S4").unwrap();
        let g = FiniteGroup::from_generators(&s4.generators).unwrap();
        assert_eq!(parse_subgroup_spec(&g, "(1,2)").unwrap().order(), 2);
        assert_eq!(parse_subgroup_spec(&g, "trivial").unwrap().order(), 1);
        assert!(matches!(
            parse_subgroup_spec(&g, "(1,5)"),
            Err(Error::DegreeMismatch { .. })
        ));
    }
}
