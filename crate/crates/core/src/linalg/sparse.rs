//! Sparse unit-pivot elimination over Z/p^m, used to present the quotient
//! of a big free module (Manin symbols) by a sparse relation module.
//!
//! The quotients we build are free over Z/p^m (relative homology of a
//! curve), so elimination only ever needs unit pivots; rows that reduce to
//! all-non-unit coefficients would certify torsion and abort the build.

use crate::arith::zpm::Zpm;
use crate::error::Error;
use crate::Result;

/// Result of eliminating relations from a free module of rank `n_gens`:
/// a distinguished subset of generators forms a basis, and every
/// generator has a stored expansion over that basis.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub n_gens: usize,
    /// Generator indices that survive as the basis, ascending.
    pub basis: Vec<usize>,
    /// For each generator, its expansion over `basis` (index, coeff).
    reductions: Vec<Vec<(usize, u64)>>,
}

impl QuotientPresentation {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Expansion of generator `g` over the basis.
    pub fn reduce_gen(&self, g: usize) -> &[(usize, u64)] {
        &self.reductions[g]
    }

    /// Dense coordinates of generator `g`.
    pub fn gen_coords(&self, g: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.basis.len()];
        for &(b, c) in &self.reductions[g] {
            v[b] = c;
        }
        v
    }

    /// Dense coordinates of a sparse combination of generators.
    pub fn combo_coords(&self, ring: &Zpm, terms: &[(usize, u64)]) -> Vec<u64> {
        let mut v = vec![0u64; self.basis.len()];
        for &(g, c) in terms {
            if c == 0 {
                continue;
            }
            for &(b, rc) in &self.reductions[g] {
                v[b] = ring.add(v[b], ring.mul(c, rc));
            }
        }
        v
    }
}

/// Incremental sparse eliminator.
pub struct SparseEliminator {
    ring: Zpm,
    n: usize,
    /// pivot column -> (installation time, row). Rows are sorted by
    /// column and include the pivot entry with coefficient 1.
    pivot_of_col: Vec<Option<usize>>,
    pivot_rows: Vec<(usize, Vec<(usize, u64)>)>, // (pivot col, row)
    hard_rows: Vec<Vec<(usize, u64)>>,
}

impl SparseEliminator {
    pub fn new(ring: Zpm, n_gens: usize) -> Self {
        SparseEliminator {
            ring,
            n: n_gens,
            pivot_of_col: vec![None; n_gens],
            pivot_rows: Vec::new(),
            hard_rows: Vec::new(),
        }
    }

    /// Reduce a sparse row against the current pivots. Terminates because
    /// each subtraction only introduces columns whose pivots (if any)
    /// were installed strictly later.
    fn reduce_row(&self, row: &mut Vec<(usize, u64)>) {
        let ring = &self.ring;
        loop {
            // earliest-installed pivot present in the row
            let mut hit: Option<(usize, usize)> = None; // (time, position)
            for (pos, &(col, _)) in row.iter().enumerate() {
                if let Some(t) = self.pivot_of_col[col] {
                    if hit.map_or(true, |(bt, _)| t < bt) {
                        hit = Some((t, pos));
                    }
                }
            }
            let Some((t, pos)) = hit else { break };
            let coeff = row[pos].1;
            let prow = &self.pivot_rows[t].1;
            // row -= coeff * prow (pivot coefficient of prow is 1)
            let mut merged: Vec<(usize, u64)> = Vec::with_capacity(row.len() + prow.len());
            let (mut i, mut j) = (0usize, 0usize);
            while i < row.len() || j < prow.len() {
                let ci = row.get(i).map(|&(c, _)| c).unwrap_or(usize::MAX);
                let cj = prow.get(j).map(|&(c, _)| c).unwrap_or(usize::MAX);
                use std::cmp::Ordering::*;
                match ci.cmp(&cj) {
                    Less => {
                        merged.push(row[i]);
                        i += 1;
                    }
                    Greater => {
                        let v = ring.neg(ring.mul(coeff, prow[j].1));
                        if v != 0 {
                            merged.push((cj, v));
                        }
                        j += 1;
                    }
                    Equal => {
                        let v = ring.sub(row[i].1, ring.mul(coeff, prow[j].1));
                        if v != 0 {
                            merged.push((ci, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            *row = merged;
        }
    }

    /// Add one relation row (sparse, unsorted ok, duplicate columns ok).
    pub fn add_relation(&mut self, entries: &[(usize, i64)]) {
        let ring = self.ring;
        let mut row: Vec<(usize, u64)> = Vec::with_capacity(entries.len());
        let mut sorted: Vec<(usize, i64)> = entries.to_vec();
        sorted.sort_by_key(|&(c, _)| c);
        for (col, val) in sorted {
            let v = ring.reduce_i64(val);
            if v == 0 {
                continue;
            }
            match row.last_mut() {
                Some((lc, lv)) if *lc == col => {
                    *lv = ring.add(*lv, v);
                }
                _ => row.push((col, v)),
            }
        }
        row.retain(|&(_, v)| v != 0);
        self.reduce_row(&mut row);
        self.install(row);
    }

    fn install(&mut self, mut row: Vec<(usize, u64)>) {
        if row.is_empty() {
            return;
        }
        let ring = self.ring;
        // pick the largest column with a unit coefficient
        let Some(pos) = row.iter().rposition(|&(_, v)| ring.is_unit(v)) else {
            self.hard_rows.push(row);
            return;
        };
        let (pcol, pval) = row[pos];
        let inv = ring.inv(pval).expect("unit pivot");
        for (_, v) in row.iter_mut() {
            *v = ring.mul(*v, inv);
        }
        debug_assert!(self.pivot_of_col[pcol].is_none());
        self.pivot_of_col[pcol] = Some(self.pivot_rows.len());
        self.pivot_rows.push((pcol, row));
    }

    /// Retry rows that previously lacked a unit pivot.
    fn settle_hard_rows(&mut self) -> Result<()> {
        loop {
            if self.hard_rows.is_empty() {
                return Ok(());
            }
            let before = self.pivot_rows.len();
            let rows = std::mem::take(&mut self.hard_rows);
            for mut row in rows {
                self.reduce_row(&mut row);
                self.install(row);
            }
            if self.pivot_rows.len() == before && !self.hard_rows.is_empty() {
                return Err(Error::internal(format!(
                    "presentation has torsion: {} relation rows reduce to non-unit coefficients",
                    self.hard_rows.len()
                )));
            }
        }
    }

    /// Finish: compute the basis and per-generator expansions.
    pub fn finish(mut self) -> Result<QuotientPresentation> {
        self.settle_hard_rows()?;
        let ring = self.ring;
        let basis: Vec<usize> =
            (0..self.n).filter(|&c| self.pivot_of_col[c].is_none()).collect();
        let mut basis_pos = vec![usize::MAX; self.n];
        for (i, &b) in basis.iter().enumerate() {
            basis_pos[b] = i;
        }
        // fully reduce each generator column
        let mut reductions: Vec<Vec<(usize, u64)>> = Vec::with_capacity(self.n);
        for g in 0..self.n {
            let mut row = vec![(g, 1u64 % ring.modulus())];
            self.reduce_row(&mut row);
            let mut out: Vec<(usize, u64)> = row
                .into_iter()
                .map(|(c, v)| {
                    debug_assert!(basis_pos[c] != usize::MAX);
                    (basis_pos[c], v)
                })
                .collect();
            out.sort_by_key(|&(b, _)| b);
            reductions.push(out);
        }
        Ok(QuotientPresentation { n_gens: self.n, basis, reductions })
    }

    /// Rank after eliminating everything added so far (consumes nothing).
    pub fn current_rank_defect(&self) -> usize {
        self.pivot_rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_quotient() {
        // free on e0..e3, relations e0 + e1 = 0, e1 + e2 + e3 = 0
        let ring = Zpm::new(5, 2).unwrap();
        let mut el = SparseEliminator::new(ring, 4);
        el.add_relation(&[(0, 1), (1, 1)]);
        el.add_relation(&[(1, 1), (2, 1), (3, 1)]);
        let q = el.finish().unwrap();
        assert_eq!(q.rank(), 2);
        // e0 = -e1 = e2 + e3
        let r0 = q.gen_coords(0);
        let r2 = q.gen_coords(2);
        let r3 = q.gen_coords(3);
        let sum: Vec<u64> = r2.iter().zip(&r3).map(|(&a, &b)| ring.add(a, b)).collect();
        assert_eq!(r0, sum);
    }

    #[test]
    fn redundant_relations_collapse() {
        let ring = Zpm::new(5, 1).unwrap();
        let mut el = SparseEliminator::new(ring, 3);
        el.add_relation(&[(0, 1), (1, 1)]);
        el.add_relation(&[(0, 2), (1, 2)]); // multiple of the first
        el.add_relation(&[(0, 1), (1, 1), (2, 0)]);
        let q = el.finish().unwrap();
        assert_eq!(q.rank(), 2);
    }
}
