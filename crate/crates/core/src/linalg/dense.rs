//! Dense matrices over a local ring, with Howell row reduction, Smith
//! normal form, kernels, solvers and the Berkowitz characteristic
//! polynomial.

use super::ring::RingCtx;
use crate::error::Error;
use crate::Result;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Self {
        Mat::from_rows(cols).transpose()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Linear-algebra operations bound to a ring context.
#[derive(Clone, Copy)]
pub struct Lin<'a, R: RingCtx>(pub &'a R);

impl<'a, R: RingCtx> Lin<'a, R> {
    fn r(&self) -> &R {
        self.0
    }

    pub fn zeros(&self, rows: usize, cols: usize) -> Mat<R::El> {
        Mat { rows, cols, data: vec![self.r().zero(); rows * cols] }
    }

    pub fn identity(&self, n: usize) -> Mat<R::El> {
        let mut m = self.zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = self.r().one();
        }
        m
    }

    pub fn is_zero_mat(&self, a: &Mat<R::El>) -> bool {
        a.data.iter().all(|x| self.r().is_zero(x))
    }

    pub fn add(&self, a: &Mat<R::El>, b: &Mat<R::El>) -> Mat<R::El> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a.data.iter().zip(&b.data).map(|(x, y)| self.r().add(x, y)).collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn sub(&self, a: &Mat<R::El>, b: &Mat<R::El>) -> Mat<R::El> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a.data.iter().zip(&b.data).map(|(x, y)| self.r().sub(x, y)).collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn scale(&self, c: &R::El, a: &Mat<R::El>) -> Mat<R::El> {
        let data = a.data.iter().map(|x| self.r().mul(c, x)).collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn mul(&self, a: &Mat<R::El>, b: &Mat<R::El>) -> Mat<R::El> {
        self.r().mat_mul(a, b)
    }

    pub fn matvec(&self, a: &Mat<R::El>, v: &[R::El]) -> Vec<R::El> {
        self.r().mat_vec(a, v)
    }

    pub fn pow(&self, a: &Mat<R::El>, mut e: u64) -> Mat<R::El> {
        assert_eq!(a.rows, a.cols);
        let mut acc = self.identity(a.rows);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Row-reduce in place to a Howell-style echelon form. Returns the
    /// pivot list [(row, col, valuation)]. The row span is unchanged;
    /// pivot entries are p^e (unit normalized), entries above pivots are
    /// reduced to valuation >= the pivot's only when `full` is set.
    pub fn echelon(&self, a: &mut Mat<R::El>, full: bool) -> Vec<(usize, usize, u32)> {
        let r = self.r().clone();
        let m = r.precision();
        // Howell: append p^(m-e) multiples of torsion-pivot rows so the
        // span below each pivot column is captured.
        let mut extra: Vec<Vec<R::El>> = Vec::new();
        let mut pivots: Vec<(usize, usize, u32)> = Vec::new();
        let mut next_row = 0usize;
        let mut col = 0usize;
        while col < a.cols && next_row < a.rows + extra.len() {
            // locate min-valuation entry in this column at or below next_row
            let mut best: Option<(usize, u32)> = None;
            let total_rows = a.rows + extra.len();
            for i in next_row..total_rows {
                let v = if i < a.rows {
                    r.val(a.at(i, col))
                } else {
                    r.val(&extra[i - a.rows][col])
                };
                if v < m && best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
            let Some((pi, pv)) = best else {
                col += 1;
                continue;
            };
            // move pivot row into position next_row (materialize extras)
            if pi >= a.rows {
                let row = extra.swap_remove(pi - a.rows);
                a.data.extend(row);
                a.rows += 1;
                a.swap_rows(next_row, a.rows - 1);
            } else {
                a.swap_rows(next_row, pi);
            }
            // normalize: pivot entry becomes p^pv
            let (u, _) = r.unit_and_val(a.at(next_row, col));
            let uinv = r.inv_unit(&u);
            for j in col..a.cols {
                let x = r.mul(&uinv, a.at(next_row, j));
                *a.at_mut(next_row, j) = x;
            }
            // eliminate this column from all other rows (and extras)
            let prow: Vec<R::El> = a.row(next_row).to_vec();
            let lo = if full { 0 } else { next_row + 1 };
            for i in lo..a.rows {
                if i == next_row {
                    continue;
                }
                let v = r.val(a.at(i, col));
                if v >= m {
                    continue;
                }
                if v < pv {
                    continue; // cannot eliminate; handled by column pass order
                }
                let (ui, vi) = r.unit_and_val(a.at(i, col));
                let factor = r.mul(&ui, &r.p_pow(vi - pv));
                for j in col..a.cols {
                    let t = r.mul(&factor, &prow[j]);
                    let slot = a.at_mut(i, j);
                    *slot = r.sub(slot, &t);
                }
            }
            for row in extra.iter_mut() {
                let v = r.val(&row[col]);
                if v >= m || v < pv {
                    continue;
                }
                let (ui, vi) = r.unit_and_val(&row[col]);
                let factor = r.mul(&ui, &r.p_pow(vi - pv));
                for j in col..a.cols {
                    let t = r.mul(&factor, &prow[j]);
                    row[j] = r.sub(&row[j], &t);
                }
            }
            // Howell step: a torsion pivot spawns the annihilator multiple
            if pv > 0 {
                let mult = r.p_pow(m - pv);
                let newrow: Vec<R::El> = prow.iter().map(|x| r.mul(&mult, x)).collect();
                if newrow.iter().any(|x| !r.is_zero(x)) {
                    extra.push(newrow);
                }
            }
            pivots.push((next_row, col, pv));
            next_row += 1;
            col += 1;
        }
        // drop residual extras (they are in the span already; zero rows)
        a.data.truncate(a.rows * a.cols);
        pivots
    }

    /// Canonical reduction of `v` modulo the row span of an echelonized
    /// matrix. Returns the remainder.
    pub fn reduce_vector(
        &self,
        ech: &Mat<R::El>,
        pivots: &[(usize, usize, u32)],
        v: &[R::El],
    ) -> Vec<R::El> {
        let r = self.r();
        let mut w = v.to_vec();
        for &(pi, pj, pv) in pivots {
            let x = &w[pj];
            let xv = r.val(x);
            if xv >= r.precision() || xv < pv {
                continue;
            }
            let (u, v_) = r.unit_and_val(x);
            let factor = r.mul(&u, &r.p_pow(v_ - pv));
            for j in pj..ech.cols {
                let t = r.mul(&factor, ech.at(pi, j));
                w[j] = r.sub(&w[j], &t);
            }
        }
        w
    }

    /// Row span membership (after reduction the remainder must vanish).
    pub fn in_span(&self, ech: &Mat<R::El>, pivots: &[(usize, usize, u32)], v: &[R::El]) -> bool {
        let rem = self.reduce_vector(ech, pivots, v);
        rem.iter().all(|x| self.r().is_zero(x))
    }

    /// Basis of the column space, as columns of the returned matrix,
    /// in Howell form (canonical generating set).
    pub fn image_basis(&self, a: &Mat<R::El>) -> Mat<R::El> {
        let mut t = a.transpose();
        let pivots = self.echelon(&mut t, true);
        let rows: Vec<Vec<R::El>> = pivots.iter().map(|&(i, _, _)| t.row(i).to_vec()).collect();
        if rows.is_empty() {
            return self.zeros(a.rows, 0);
        }
        Mat::from_rows(rows).transpose()
    }

    /// Smith normal form with transforms: returns (U, D, V) with
    /// U * A * V = D, U and V invertible, D diagonal with entries p^e
    /// sorted by increasing valuation.
    pub fn snf(&self, a: &Mat<R::El>) -> (Mat<R::El>, Mat<R::El>, Mat<R::El>) {
        let r = self.r().clone();
        let m = r.precision();
        let mut d = a.clone();
        let mut u = self.identity(a.rows);
        let mut v = self.identity(a.cols);
        let n = a.rows.min(a.cols);
        for t in 0..n {
            // min-valuation entry in the trailing submatrix
            let mut best: Option<(usize, usize, u32)> = None;
            'scan: for i in t..d.rows {
                for j in t..d.cols {
                    let val = r.val(d.at(i, j));
                    if val < m && best.map_or(true, |(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                        if val == 0 {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((pi, pj, pv)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            // normalize pivot to p^pv (row op)
            let (unit, _) = r.unit_and_val(d.at(t, t));
            let uinv = r.inv_unit(&unit);
            for j in 0..d.cols {
                let x = r.mul(&uinv, d.at(t, j));
                *d.at_mut(t, j) = x;
            }
            for j in 0..u.cols {
                let x = r.mul(&uinv, u.at(t, j));
                *u.at_mut(t, j) = x;
            }
            // clear column t below
            for i in t + 1..d.rows {
                let x = d.at(i, t);
                if r.is_zero(x) {
                    continue;
                }
                let (ux, vx) = r.unit_and_val(x);
                debug_assert!(vx >= pv);
                let factor = r.mul(&ux, &r.p_pow(vx - pv));
                for j in 0..d.cols {
                    let s = r.mul(&factor, d.at(t, j));
                    let slot = d.at_mut(i, j);
                    *slot = r.sub(slot, &s);
                }
                for j in 0..u.cols {
                    let s = r.mul(&factor, u.at(t, j));
                    let slot = u.at_mut(i, j);
                    *slot = r.sub(slot, &s);
                }
            }
            // clear row t to the right
            for j in t + 1..d.cols {
                let x = d.at(t, j);
                if r.is_zero(x) {
                    continue;
                }
                let (ux, vx) = r.unit_and_val(x);
                debug_assert!(vx >= pv);
                let factor = r.mul(&ux, &r.p_pow(vx - pv));
                for i in 0..d.rows {
                    let s = r.mul(&factor, d.at(i, t));
                    let slot = d.at_mut(i, j);
                    *slot = r.sub(slot, &s);
                }
                for i in 0..v.rows {
                    let s = r.mul(&factor, v.at(i, t));
                    let slot = v.at_mut(i, j);
                    *slot = r.sub(slot, &s);
                }
            }
        }
        (u, d, v)
    }

    /// Diagonal p-valuations of the SNF, ascending; length = rank
    /// (entries with valuation >= m are dropped).
    pub fn elementary_divisors(&self, a: &Mat<R::El>) -> Vec<u32> {
        let (_, d, _) = self.snf(a);
        let mut out = Vec::new();
        for t in 0..d.rows.min(d.cols) {
            let v = self.r().val(d.at(t, t));
            if v < self.r().precision() {
                out.push(v);
            }
        }
        out
    }

    pub fn rank(&self, a: &Mat<R::El>) -> usize {
        let mut c = a.clone();
        let pivots = self.echelon(&mut c, false);
        pivots.iter().filter(|&&(_, _, v)| v == 0).count()
    }

    /// Kernel basis as columns. Generating set of {x : A x = 0}.
    pub fn kernel(&self, a: &Mat<R::El>) -> Mat<R::El> {
        let r = self.r();
        let m = r.precision();
        let (_, d, v) = self.snf(a);
        let n = a.cols;
        let k = d.rows.min(d.cols);
        let mut cols: Vec<Vec<R::El>> = Vec::new();
        for t in 0..n {
            let e = if t < k { r.val(d.at(t, t)) } else { m };
            if e == 0 {
                continue;
            }
            // column V * (p^(m-e) e_t)
            let scale = r.p_pow(m - e);
            let col: Vec<R::El> = (0..n).map(|i| r.mul(&scale, v.at(i, t))).collect();
            if col.iter().any(|x| !r.is_zero(x)) {
                cols.push(col);
            }
        }
        if cols.is_empty() {
            self.zeros(n, 0)
        } else {
            Mat::from_cols(cols)
        }
    }

    /// Exact solve A x = b; fails if no solution exists mod p^m.
    pub fn solve(&self, a: &Mat<R::El>, b: &[R::El]) -> Result<Vec<R::El>> {
        match self.solve_with_denominator(a, b)? {
            (x, 0) => Ok(x),
            (_, d) => Err(Error::precision(format!("solution requires denominator p^{d}"))),
        }
    }

    /// Solve A x = p^delta b with delta minimal; returns (x, delta).
    /// The solution x is then only meaningful modulo p^(m - delta) after
    /// dividing by p^delta — callers track the budget.
    pub fn solve_with_denominator(&self, a: &Mat<R::El>, b: &[R::El]) -> Result<(Vec<R::El>, u32)> {
        assert_eq!(a.rows, b.len());
        let r = self.r();
        let m = r.precision();
        let (u, d, v) = self.snf(a);
        let ub = self.matvec(&u, b);
        let k = d.rows.min(d.cols);
        // required denominator
        let mut delta = 0u32;
        for (i, ubi) in ub.iter().enumerate() {
            let need = if i < k { r.val(d.at(i, i)) } else { m };
            let have = r.val(ubi);
            if have < need {
                delta = delta.max(need - have);
            }
        }
        if delta >= m {
            return Err(Error::precision("system unsolvable at this precision".to_string()));
        }
        let pd = r.p_pow(delta);
        let mut y = vec![r.zero(); a.cols];
        for (i, ubi) in ub.iter().enumerate().take(k) {
            let e = r.val(d.at(i, i));
            let scaled = r.mul(&pd, ubi);
            if r.val(&scaled) < e {
                return Err(Error::precision("inconsistent system".to_string()));
            }
            y[i] = r.div_p_pow(&scaled, e);
        }
        // rows of D beyond the rank must have been annihilated
        for (i, ubi) in ub.iter().enumerate().skip(k) {
            let _ = i;
            if !r.is_zero(&r.mul(&pd, ubi)) {
                return Err(Error::precision("inconsistent system".to_string()));
            }
        }
        Ok((self.matvec(&v, &y), delta))
    }

    /// Inverse of a square matrix with unit determinant.
    pub fn invert(&self, a: &Mat<R::El>) -> Result<Mat<R::El>> {
        assert_eq!(a.rows, a.cols);
        let r = self.r();
        let n = a.rows;
        let mut work = a.clone();
        let mut inv = self.identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| r.is_unit(work.at(i, col)))
                .ok_or_else(|| Error::domain("matrix not invertible (no unit pivot)".to_string()))?;
            work.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let pinv = r.inv_unit(work.at(col, col));
            for j in 0..n {
                let x = r.mul(&pinv, work.at(col, j));
                *work.at_mut(col, j) = x;
                let y = r.mul(&pinv, inv.at(col, j));
                *inv.at_mut(col, j) = y;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = work.at(i, col).clone();
                if r.is_zero(&f) {
                    continue;
                }
                for j in 0..n {
                    let t = r.mul(&f, work.at(col, j));
                    let slot = work.at_mut(i, j);
                    *slot = r.sub(slot, &t);
                    let t2 = r.mul(&f, inv.at(col, j));
                    let slot2 = inv.at_mut(i, j);
                    *slot2 = r.sub(slot2, &t2);
                }
            }
        }
        Ok(inv)
    }

    /// Valuation of the determinant (None if det = 0 mod p^m), via SNF.
    pub fn det_val(&self, a: &Mat<R::El>) -> Option<u32> {
        assert_eq!(a.rows, a.cols);
        let divs = self.elementary_divisors(a);
        if divs.len() < a.rows {
            return None;
        }
        Some(divs.iter().sum())
    }

    /// Characteristic polynomial by the division-free Berkowitz
    /// algorithm; returns coefficients c_0..c_n of det(xI - A).
    pub fn charpoly(&self, a: &Mat<R::El>) -> Vec<R::El> {
        let r = self.r();
        let n = a.rows;
        assert_eq!(n, a.cols);
        if n == 0 {
            return vec![r.one()];
        }
        // Berkowitz: iteratively build the coefficient vector
        let mut coeffs: Vec<R::El> = vec![r.one()];
        for k in 0..n {
            // principal submatrix of size k+1: rows/cols 0..=k
            // R = row (a[k][0..k]), C = col (a[0..k][k]), M = a[0..k][0..k]
            let akk = a.at(k, k).clone();
            // toeplitz vector: t_0 = 1, t_1 = -a_kk, t_{j+2} = -(R M^j C)
            let mut t = Vec::with_capacity(k + 2);
            t.push(r.one());
            t.push(r.neg(&akk));
            if k > 0 {
                let sub = Mat {
                    rows: k,
                    cols: k,
                    data: {
                        let mut d = Vec::with_capacity(k * k);
                        for i in 0..k {
                            d.extend_from_slice(&a.row(i)[..k]);
                        }
                        d
                    },
                };
                let rrow = &a.row(k)[..k];
                let mut w: Vec<R::El> = (0..k).map(|i| a.at(i, k).clone()).collect();
                for _ in 0..k {
                    t.push(r.neg(&r.dot(rrow, &w)));
                    w = r.mat_vec(&sub, &w);
                }
            }
            // coeffs = t (*) coeffs (polynomial-style convolution,
            // truncated to degree k+1 terms)
            let mut next = vec![r.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                for (j, tj) in t.iter().enumerate() {
                    if i + j < next.len() {
                        next[i + j] = r.add(&next[i + j], &r.mul(c, tj));
                    }
                }
            }
            coeffs = next;
        }
        // coeffs currently lists [leading..constant]; flip to c_0..c_n
        coeffs.reverse();
        coeffs
    }

    /// Evaluate a polynomial (coefficients c_0..c_n) at the matrix A.
    pub fn poly_at(&self, coeffs: &[R::El], a: &Mat<R::El>) -> Mat<R::El> {
        let r = self.r();
        let n = a.rows;
        let mut acc = self.zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, a);
            for i in 0..n {
                let slot = acc.at_mut(i, i);
                *slot = r.add(slot, c);
            }
        }
        acc
    }

    /// Horizontal concatenation [A | B].
    pub fn hstack(&self, a: &Mat<R::El>, b: &Mat<R::El>) -> Mat<R::El> {
        assert_eq!(a.rows, b.rows);
        let mut data = Vec::with_capacity(a.rows * (a.cols + b.cols));
        for i in 0..a.rows {
            data.extend_from_slice(a.row(i));
            data.extend_from_slice(b.row(i));
        }
        Mat { rows: a.rows, cols: a.cols + b.cols, data }
    }

    /// Vertical concatenation [A; B].
    pub fn vstack(&self, a: &Mat<R::El>, b: &Mat<R::El>) -> Mat<R::El> {
        assert_eq!(a.cols, b.cols);
        let mut data = a.data.clone();
        data.extend_from_slice(&b.data);
        Mat { rows: a.rows + b.rows, cols: a.cols, data }
    }
}

/// A free submodule given by a basis matrix, with a prepared solver for
/// coordinates. Generic over the coefficient ring.
#[derive(Debug, Clone)]
pub struct Span<T> {
    /// ambient-dim x k matrix whose columns are the basis.
    pub basis: Mat<T>,
    solver: Solver<T>,
}

impl<'a, R: RingCtx> Lin<'a, R> {
    pub fn span(&self, basis: Mat<R::El>) -> Span<R::El> {
        let solver = self.solver(&basis);
        Span { basis, solver }
    }

    /// Coordinates of an ambient vector lying in the span.
    pub fn span_coords(&self, s: &Span<R::El>, v: &[R::El]) -> Result<Vec<R::El>> {
        self.solver_solve(&s.solver, v)
    }

    pub fn span_embed(&self, s: &Span<R::El>, c: &[R::El]) -> Vec<R::El> {
        self.matvec(&s.basis, c)
    }

    /// Restrict an ambient operator preserving the span to span coords.
    pub fn span_restrict(&self, s: &Span<R::El>, op: &Mat<R::El>) -> Result<Mat<R::El>> {
        let mut cols = Vec::with_capacity(s.basis.cols);
        for j in 0..s.basis.cols {
            let img = self.matvec(op, &s.basis.col(j));
            cols.push(self.span_coords(s, &img)?);
        }
        if cols.is_empty() {
            return Ok(self.zeros(0, 0));
        }
        Ok(Mat::from_cols(cols))
    }
}

impl<T> Span<T> {
    pub fn dim(&self) -> usize {
        self.basis.cols
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows
    }
}

/// Precomputed SNF of a matrix, for repeated solves against the same
/// coefficient matrix.
#[derive(Debug, Clone)]
pub struct Solver<T> {
    u: Mat<T>,
    d_vals: Vec<u32>,
    v: Mat<T>,
    rows: usize,
    cols: usize,
}

impl<'a, R: RingCtx> Lin<'a, R> {
    pub fn solver(&self, a: &Mat<R::El>) -> Solver<R::El> {
        let (u, d, v) = self.snf(a);
        let k = d.rows.min(d.cols);
        let d_vals = (0..k).map(|i| self.r().val(d.at(i, i))).collect();
        Solver { u, d_vals, v, rows: a.rows, cols: a.cols }
    }

    /// Solve A x = p^delta b with delta minimal using a prepared solver.
    pub fn solver_solve_denom(
        &self,
        s: &Solver<R::El>,
        b: &[R::El],
    ) -> Result<(Vec<R::El>, u32)> {
        assert_eq!(s.rows, b.len());
        let r = self.r();
        let m = r.precision();
        let ub = self.matvec(&s.u, b);
        let k = s.d_vals.len();
        let mut delta = 0u32;
        for (i, ubi) in ub.iter().enumerate() {
            let need = if i < k { s.d_vals[i] } else { m };
            let have = r.val(ubi);
            if have < need {
                delta = delta.max(need - have);
            }
        }
        if delta >= m {
            return Err(Error::precision("system unsolvable at this precision".to_string()));
        }
        let pd = r.p_pow(delta);
        let mut y = vec![r.zero(); s.cols];
        for (i, ubi) in ub.iter().enumerate().take(k) {
            let scaled = r.mul(&pd, ubi);
            if r.val(&scaled) < s.d_vals[i] {
                return Err(Error::precision("inconsistent system".to_string()));
            }
            y[i] = r.div_p_pow(&scaled, s.d_vals[i]);
        }
        for ubi in ub.iter().skip(k) {
            if !r.is_zero(&r.mul(&pd, ubi)) {
                return Err(Error::precision("inconsistent system".to_string()));
            }
        }
        Ok((self.matvec(&s.v, &y), delta))
    }

    /// Exact solve against a prepared solver.
    pub fn solver_solve(&self, s: &Solver<R::El>, b: &[R::El]) -> Result<Vec<R::El>> {
        match self.solver_solve_denom(s, b)? {
            (x, 0) => Ok(x),
            (_, d) => Err(Error::precision(format!("solution requires denominator p^{d}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zpm::Zpm;

    fn mat(r: &Zpm, rows: &[&[i64]]) -> Mat<u64> {
        Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.reduce_i64(x)).collect()).collect())
    }

    #[test]
    fn snf_structure() {
        let r = Zpm::new(5, 3).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[5, 10], &[15, 30]]);
        let (u, d, v) = lin.snf(&a);
        let ua = lin.mul(&u, &a);
        let uav = lin.mul(&ua, &v);
        assert_eq!(uav, d);
        let divs = lin.elementary_divisors(&a);
        assert_eq!(divs, vec![1]); // rank 1, divisor 5
    }

    #[test]
    fn kernel_and_solve() {
        let r = Zpm::new(5, 2).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[1, 2, 3], &[0, 5, 0]]);
        let k = lin.kernel(&a);
        // check A * k = 0
        let prod = lin.mul(&a, &k);
        assert!(lin.is_zero_mat(&prod));
        // exact solve
        let b = vec![r.reduce_i64(7), r.reduce_i64(10)];
        let x = lin.solve(&a, &b).unwrap();
        let ax = lin.matvec(&a, &x);
        assert_eq!(ax, b);
    }

    #[test]
    fn solve_with_denominator_tracks_scale() {
        let r = Zpm::new(5, 3).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[5]]);
        let b = vec![r.reduce_i64(1)];
        let (x, delta) = lin.solve_with_denominator(&a, &b).unwrap();
        assert_eq!(delta, 1);
        // a * x = 5 * x = p^delta * b = 5
        assert_eq!(lin.matvec(&a, &x), vec![r.reduce_i64(5)]);
    }

    #[test]
    fn invert_round_trip() {
        let r = Zpm::new(7, 2).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[1, 2], &[3, 4]]); // det = -2, unit mod 7
        let ainv = lin.invert(&a).unwrap();
        assert_eq!(lin.mul(&a, &ainv), lin.identity(2));
    }

    #[test]
    fn charpoly_small() {
        let r = Zpm::new(5, 2).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[2, 1], &[0, 3]]);
        // det(xI - A) = (x-2)(x-3) = x^2 - 5x + 6
        let cp = lin.charpoly(&a);
        assert_eq!(cp, vec![r.reduce_i64(6), r.reduce_i64(-5), r.reduce_i64(1)]);
        // Cayley-Hamilton
        let z = lin.poly_at(&cp, &a);
        assert!(lin.is_zero_mat(&z));
    }

    #[test]
    fn echelon_membership() {
        let r = Zpm::new(5, 2).unwrap();
        let lin = Lin(&r);
        let mut a = mat(&r, &[&[1, 2, 0], &[0, 5, 5]]);
        let pivots = lin.echelon(&mut a, true);
        assert!(lin.in_span(&a, &pivots, &[r.reduce_i64(1), r.reduce_i64(7), r.reduce_i64(5)]));
        assert!(!lin.in_span(&a, &pivots, &[0, 0, r.reduce_i64(1)]));
        // Howell captures p-multiples hidden behind torsion pivots:
        // 5*(0,1,1) = (0,5,5) is in the span, and so is (0,0,20)?
        // (0,5,5)*4 = (0,20,20); (0,20,20)-(0,20,0)? not derivable: skip.
        assert!(lin.in_span(&a, &pivots, &[0, r.reduce_i64(10), r.reduce_i64(10)]));
    }

    #[test]
    fn image_basis_spans_columns() {
        let r = Zpm::new(5, 2).unwrap();
        let lin = Lin(&r);
        let a = mat(&r, &[&[1, 2], &[2, 4], &[0, 5]]);
        let img = lin.image_basis(&a);
        // every original column lies in the span of the basis columns
        let mut t = img.transpose();
        let piv = lin.echelon(&mut t, true);
        for j in 0..a.cols {
            assert!(lin.in_span(&t, &piv, &a.col(j)));
        }
    }
}
