//! Coproduct tables known in closed form, and the bases they are written in.
//!
//! * `C[S3]` in the matrix-unit basis `e1, e2, e11, e12, e21, e22` of
//!   `C ⊕ C ⊕ M_2(C)`, entries multiplied by `sqrt 6`;
//! * the double-coset side of `<(1,2)> ≤ S4`, entries multiplied by `sqrt 12`.
//!   Its labels `e2..e7` are not canonical, so comparison searches for a
//!   relabeling that fixes `e1`.

use crate::boxalgebra::{BoxContext, Vector};
use crate::error::{Error, Result};
use crate::linalg::{complex_solve_columns, C64};
use crate::permgroup::Permutation;
use std::f64::consts::PI;

pub const S3_LABELS: [&str; 6] = ["e1", "e2", "e11", "e12", "e21", "e22"];

const S3_ROWS: [[&str; 6]; 6] = [
    ["e1", "e2", "e11", "e12", "e21", "e22"],
    ["e2", "e1", "e11", "-e12", "-e21", "e22"],
    ["e11", "e11", "2e22", "0", "0", "2(e1+e2)"],
    ["e12", "-e12", "0", "2e21", "2(e1-e2)", "0"],
    ["e21", "-e21", "0", "2(e1-e2)", "2e12", "0"],
    ["e22", "e22", "2(e1+e2)", "0", "0", "2e11"],
];

pub const S4_S2_LABELS: [&str; 7] = ["e1", "e2", "e3", "e4", "e5", "e6", "e7"];

const S4_S2_ROWS: [[&str; 7]; 7] = [
    ["e1", "e2", "e3", "e4", "e5", "e6", "e7"],
    ["e2", "2e1+e2", "e4+e5", "e3+e5", "e3+e4", "e6+2e7", "e6"],
    ["e3", "e5+e6", "2e1+e3", "e4+2e7", "e2+e6", "e2+e5", "e4"],
    ["e4", "e4+2e7", "e2+e5", "e5+e6", "e2+e6", "2e1+e3", "e3"],
    ["e5", "e3+e6", "e2+e4", "e3+e6", "2e1+2e7", "e2+e4", "e5"],
    ["e6", "e3+e5", "e6+2e7", "2e1+e2", "e3+e4", "e4+e5", "e2"],
    ["e7", "e4", "e6", "e2", "e5", "e3", "e1"],
];

/// Integer structure constants: `entries[i][j][k]` is the coefficient of
/// label `k` in `label_i * label_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Vec<i32>>>,
}

impl ReferenceTable {
    fn from_rows<const N: usize>(labels: [&str; N], rows: &[[&str; N]; N]) -> Self {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|cell| parse_combination(cell, &labels)).collect())
            .collect();
        ReferenceTable { labels, entries }
    }

    pub fn s3() -> Self {
        Self::from_rows(S3_LABELS, &S3_ROWS)
    }

    pub fn s4_s2_dual() -> Self {
        Self::from_rows(S4_S2_LABELS, &S4_S2_ROWS)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Parses `2(e1-e2)`, `e4+2e7`, `-e12`, `0` over the given labels.
fn parse_combination(cell: &str, labels: &[String]) -> Vec<i32> {
    let mut out = vec![0; labels.len()];
    let cell = cell.trim();
    if cell == "0" {
        return out;
    }
    let (factor, body) = match cell.find('(') {
        Some(open) => (
            cell[..open].parse::<i32>().unwrap_or(1),
            &cell[open + 1..cell.len() - 1],
        ),
        None => (1, cell),
    };
    let mut sign = 1;
    let mut rest = body;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('+') {
            sign = 1;
            rest = r;
            continue;
        }
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
            continue;
        }
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let coeff = if digits == 0 {
            1
        } else {
            rest[..digits].parse::<i32>().unwrap()
        };
        rest = &rest[digits..];
        let label_len = 1 + rest[1..].chars().take_while(|c| c.is_ascii_digit()).count();
        let label = &rest[..label_len];
        let idx = labels.iter().position(|l| l == label).expect("known label");
        out[idx] += factor * sign * coeff;
        rest = &rest[label_len..];
        sign = 1;
    }
    out
}

/// The matrix-unit basis of `C[S3]` in the context `(S3, {1})` (natural
/// action on three points), obtained by inverting the representation
/// `π = 1 ⊕ sign ⊕ V` written in the eigenbasis of `(1,2,3)`.
pub fn s3_matrix_unit_basis(ctx: &BoxContext) -> Result<Vec<Vector>> {
    let group = ctx.group();
    if group.order() != 6 || !ctx.h_is_trivial() || group.degree() != 3 {
        return Err(Error::ContextMismatch);
    }
    let z = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let zb = z.conj();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    // (element in cycle notation, sign, 2x2 block row-major)
    type Image<'a> = (&'a [&'a [usize]], f64, [C64; 4]);
    let images: [Image; 6] = [
        (&[], 1.0, [one, zero, zero, one]),
        (&[&[1, 2, 3]], 1.0, [z, zero, zero, zb]),
        (&[&[1, 3, 2]], 1.0, [zb, zero, zero, z]),
        (&[&[1, 2]], -1.0, [zero, one, one, zero]),
        (&[&[2, 3]], -1.0, [zero, zb, z, zero]),
        (&[&[1, 3]], -1.0, [zero, z, zb, zero]),
    ];
    // columns of λ: π(g) expanded over the matrix units, indexed by group element
    let mut cols = vec![vec![zero; 6]; 6];
    for (cycles, sign, block) in images {
        let cyc: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
        let p = Permutation::from_cycles(3, &cyc)?;
        let g = group.index_of(&p).ok_or(Error::ContextMismatch)?;
        cols[ctx.double_coset_of(g)] = vec![one, C64::new(sign, 0.0), block[0], block[1], block[2], block[3]];
    }
    (0..6)
        .map(|a| {
            let mut unit = vec![zero; 6];
            unit[a] = one;
            complex_solve_columns(&cols, &unit, 1e-12).ok_or(Error::BasisNotSpanning { rank: 5, dim: 6 })
        })
        .collect()
}

/// Largest entrywise deviation between a computed table (already scaled)
/// and a reference table, after relabeling computed index `perm[i]` as
/// reference index `i`.
pub fn deviation(computed: &[Vec<Vector>], reference: &ReferenceTable, perm: &[usize]) -> f64 {
    let n = reference.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let got = computed[perm[i]][perm[j]][perm[k]];
                let want = f64::from(reference.entries[i][j][k]);
                worst = worst.max((got - want).norm());
            }
        }
    }
    worst
}

/// Searches relabelings fixing index 0 for one that matches within `tol`.
pub fn match_up_to_relabeling(computed: &[Vec<Vector>], reference: &ReferenceTable, tol: f64) -> Option<Vec<usize>> {
    let n = reference.dim();
    if computed.len() != n {
        return None;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    used[0] = true;
    fn extend(
        pos: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        computed: &[Vec<Vector>],
        reference: &ReferenceTable,
        tol: f64,
    ) -> bool {
        let n = perm.len();
        if pos == n {
            return deviation(computed, reference, perm) <= tol;
        }
        for cand in 1..n {
            if used[cand] {
                continue;
            }
            perm[pos] = cand;
            // prune on the square of the new element restricted to assigned labels
            let ok = (0..=pos).all(|a| {
                (0..=pos).all(|b| {
                    (0..=pos).all(|c| {
                        (computed[perm[a]][perm[b]][perm[c]] - f64::from(reference.entries[a][b][c])).norm() <= tol
                    })
                })
            });
            if ok {
                used[cand] = true;
                if extend(pos + 1, perm, used, computed, reference, tol) {
                    return true;
                }
                used[cand] = false;
            }
        }
        false
    }
    if extend(1, &mut perm, &mut used, computed, reference, tol) {
        Some(perm)
    } else {
        None
    }
}
