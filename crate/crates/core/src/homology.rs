//! Cellular chain complexes of finitely generated free abelian groups and
//! their integral homology, via Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::int;

/// Integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    out.add_to(i, j, &prod);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    // row[dst] -= f * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = f * self.get(src, j);
            self.data[dst * self.cols + j] -= v;
        }
    }

    fn col_sub(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = f * self.get(i, src);
            self.data[i * self.cols + dst] -= v;
        }
    }

    /// Nonzero invariant factors `d1 | d2 | ...` (all positive).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let n = m.rows.min(m.cols);
        let mut diag = Vec::new();
        for t in 0..n {
            // Pivot: smallest nonzero absolute value in the lower-right block.
            let Some((pi, pj)) = m.min_abs_entry(t) else {
                break;
            };
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m.rows {
                    if !m.get(i, t).is_zero() {
                        let q = m.get(i, t).div_floor(m.get(t, t));
                        m.row_sub(i, t, &q);
                        if !m.get(i, t).is_zero() {
                            m.swap_rows(t, i);
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..m.cols {
                    if !m.get(t, j).is_zero() {
                        let q = m.get(t, j).div_floor(m.get(t, t));
                        m.col_sub(j, t, &q);
                        if !m.get(t, j).is_zero() {
                            m.swap_cols(t, j);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // Enforce divisibility by folding an offending row into row t.
                let p = m.get(t, t).clone();
                let offending = (t + 1..m.rows)
                    .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !m.get(i, j).is_multiple_of(&p));
                match offending {
                    Some((i, _)) => {
                        m.row_sub(t, i, &int(-1));
                    }
                    None => break,
                }
            }
            diag.push(m.get(t, t).abs());
        }
        diag
    }

    fn min_abs_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.get(i, j).abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().map_or(true, |(_, _, b)| &v < b) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// A chain complex `C_top -> ... -> C_1 -> C_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is the matrix of `C_k -> C_{k-1}`
    /// (rows index `C_{k-1}`, columns index `C_k`).
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Panics when the shapes disagree or `d∘d != 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Self {
        assert_eq!(boundaries.len() + 1, ranks.len().max(1));
        for (k, d) in boundaries.iter().enumerate() {
            assert_eq!(d.rows(), ranks[k], "boundary {} has wrong target", k + 1);
            assert_eq!(d.cols(), ranks[k + 1], "boundary {} has wrong source", k + 1);
        }
        for w in boundaries.windows(2) {
            assert!(w[0].mul(&w[1]).is_zero(), "boundary squared is nonzero");
        }
        Self { ranks, boundaries }
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { int(r) } else { -int(r) }).sum()
    }

    pub fn homology(&self, k: usize) -> AbelianGroup {
        let rank_out = self.boundary(k).map_or(0, |d| d.invariant_factors().len());
        let incoming = self.boundary(k + 1).map(IntMatrix::invariant_factors).unwrap_or_default();
        let cycles = self.rank(k) - rank_out;
        AbelianGroup::new(cycles - incoming.len(), incoming)
    }
}

/// `Z^free ⊕ Z/t1 ⊕ ... ⊕ Z/tk` with `1 < t1 | t2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serial::dec_seq")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, factors: Vec<BigInt>) -> Self {
        let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
        Self { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn cyclic(order: BigInt) -> Self {
        if order.is_zero() {
            Self::new(1, Vec::new())
        } else {
            Self::new(0, vec![order])
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group, `None` when there is a free part.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn invariant_factors_small() {
        assert_eq!(m(&[&[2, 4], &[6, 8]]).invariant_factors(), vec![int(2), int(4)]);
        assert_eq!(m(&[&[2, 0], &[0, 3]]).invariant_factors(), vec![int(1), int(6)]);
        assert_eq!(m(&[&[0, 0]]).invariant_factors(), Vec::<BigInt>::new());
        assert_eq!(m(&[&[5]]).invariant_factors(), vec![int(5)]);
    }

    #[test]
    fn circle_and_projective_plane() {
        // S^1: one 0-cell, one 1-cell, zero boundary.
        let circle = ChainComplex::new(vec![1, 1], vec![m(&[&[0]])]);
        assert_eq!(circle.homology(0), AbelianGroup::new(1, vec![]));
        assert_eq!(circle.homology(1), AbelianGroup::new(1, vec![]));
        // RP^2: 2-cell attached with degree 2.
        let rp2 = ChainComplex::new(vec![1, 1, 1], vec![m(&[&[0]]), m(&[&[2]])]);
        assert_eq!(rp2.homology(1), AbelianGroup::cyclic(int(2)));
        assert!(rp2.homology(2).is_trivial());
        assert_eq!(rp2.euler_characteristic(), int(1));
    }

    #[test]
    fn display_groups() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::new(1, vec![int(7)]).to_string(), "Z + Z/7");
        assert_eq!(AbelianGroup::new(3, vec![]).to_string(), "Z^3");
    }

    #[test]
    #[should_panic(expected = "boundary squared")]
    fn rejects_non_complex() {
        ChainComplex::new(vec![1, 1, 1], vec![m(&[&[1]]), m(&[&[1]])]);
    }
}
