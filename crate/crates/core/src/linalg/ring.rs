//! The minimal ring interface the linear algebra needs: a commutative
//! local ring in which every element is a unit times a power of p.

use super::dense::Mat;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::zpm::Zpm;
use crate::Result;
use std::fmt::Debug;

pub trait RingCtx: Clone + Sync {
    type El: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_i64(&self, c: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    /// p-adic valuation, capped at the precision m (val(0) = m).
    fn val(&self, a: &Self::El) -> u32;
    /// a = unit * p^v; returns (unit, v). Unit is arbitrary for a = 0.
    fn unit_and_val(&self, a: &Self::El) -> (Self::El, u32);
    /// Inverse of a unit.
    fn inv_unit(&self, a: &Self::El) -> Self::El;
    fn p(&self) -> u64;
    fn precision(&self) -> u32;

    fn is_unit(&self, a: &Self::El) -> bool {
        self.val(a) == 0
    }
    fn p_pow(&self, k: u32) -> Self::El {
        if k >= self.precision() {
            return self.zero();
        }
        self.from_i64(self.p().pow(k) as i64)
    }
    /// Exact division by p^k (caller guarantees val(a) >= k).
    fn div_p_pow(&self, a: &Self::El, k: u32) -> Self::El {
        let (u, v) = self.unit_and_val(a);
        if v >= self.precision() {
            return self.zero();
        }
        debug_assert!(v >= k);
        self.mul(&u, &self.p_pow(v - k))
    }

    /// Matrix product; rings with a cheap wide accumulator override this.
    fn mat_mul(&self, a: &Mat<Self::El>, b: &Mat<Self::El>) -> Mat<Self::El> {
        assert_eq!(a.cols, b.rows, "dimension mismatch");
        let mut out = Mat {
            rows: a.rows,
            cols: b.cols,
            data: vec![self.zero(); a.rows * b.cols],
        };
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.at(i, k);
                if self.is_zero(aik) {
                    continue;
                }
                for j in 0..b.cols {
                    let t = self.mul(aik, b.at(k, j));
                    let slot = out.at_mut(i, j);
                    *slot = self.add(slot, &t);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    fn mat_vec(&self, a: &Mat<Self::El>, v: &[Self::El]) -> Vec<Self::El> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|i| {
                let mut acc = self.zero();
                for k in 0..a.cols {
                    let aik = a.at(i, k);
                    if !self.is_zero(aik) && !self.is_zero(&v[k]) {
                        acc = self.add(&acc, &self.mul(aik, &v[k]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Dot product.
    fn dot(&self, a: &[Self::El], b: &[Self::El]) -> Self::El {
        let mut acc = self.zero();
        for (x, y) in a.iter().zip(b) {
            if !self.is_zero(x) && !self.is_zero(y) {
                acc = self.add(&acc, &self.mul(x, y));
            }
        }
        acc
    }
}

impl RingCtx for Zpm {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus()
    }
    fn from_i64(&self, c: i64) -> u64 {
        self.reduce_i64(c)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Zpm::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Zpm::sub(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        Zpm::neg(self, *a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Zpm::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn val(&self, a: &u64) -> u32 {
        Zpm::val(self, *a)
    }
    fn unit_and_val(&self, a: &u64) -> (u64, u32) {
        Zpm::unit_and_val(self, *a)
    }
    fn inv_unit(&self, a: &u64) -> u64 {
        Zpm::inv(self, *a).expect("inv_unit on non-unit")
    }
    fn p(&self) -> u64 {
        Zpm::p(self)
    }
    fn precision(&self) -> u32 {
        self.m()
    }

    /// Blocked product with a widening accumulator: sums of up to 2^63
    /// products fit in u128 before a single reduction.
    fn mat_mul(&self, a: &Mat<u64>, b: &Mat<u64>) -> Mat<u64> {
        assert_eq!(a.cols, b.rows, "dimension mismatch");
        let pm = self.modulus() as u128;
        // keep sum bounds safe: (pm-1)^2 * cols must fit in u128
        let safe = (self.modulus() as u128).pow(2).checked_mul(a.cols.max(1) as u128).is_some();
        if !safe {
            // fall back to per-op reduction
            let mut out = Mat { rows: a.rows, cols: b.cols, data: vec![0u64; a.rows * b.cols] };
            for i in 0..a.rows {
                for k in 0..a.cols {
                    let aik = *a.at(i, k);
                    if aik == 0 {
                        continue;
                    }
                    for j in 0..b.cols {
                        let t = Zpm::mul(self, aik, *b.at(k, j));
                        let slot = out.at_mut(i, j);
                        *slot = Zpm::add(self, *slot, t);
                    }
                }
            }
            return out;
        }
        let mut out = Mat { rows: a.rows, cols: b.cols, data: vec![0u64; a.rows * b.cols] };
        let mut acc = vec![0u128; b.cols];
        for i in 0..a.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..a.cols {
                let aik = *a.at(i, k) as u128;
                if aik == 0 {
                    continue;
                }
                let brow = b.row(k);
                for (slot, &bkj) in acc.iter_mut().zip(brow) {
                    *slot += aik * bkj as u128;
                }
            }
            for (j, &s) in acc.iter().enumerate() {
                out.data[i * b.cols + j] = (s % pm) as u64;
            }
        }
        out
    }

    fn mat_vec(&self, a: &Mat<u64>, v: &[u64]) -> Vec<u64> {
        assert_eq!(a.cols, v.len());
        let pm = self.modulus() as u128;
        let safe = pm.pow(2).checked_mul(a.cols.max(1) as u128).is_some();
        (0..a.rows)
            .map(|i| {
                let mut acc = 0u128;
                for (x, &vk) in a.row(i).iter().zip(v) {
                    acc += *x as u128 * vk as u128;
                    if !safe {
                        acc %= pm;
                    }
                }
                (acc % pm) as u64
            })
            .collect()
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let pm = self.modulus() as u128;
        let safe = pm.pow(2).checked_mul(a.len().max(1) as u128).is_some();
        let mut acc = 0u128;
        for (x, y) in a.iter().zip(b) {
            acc += *x as u128 * *y as u128;
            if !safe {
                acc %= pm;
            }
        }
        (acc % pm) as u64
    }
}

impl RingCtx for GaloisRing {
    type El = GrEl;

    fn zero(&self) -> GrEl {
        GaloisRing::zero(self)
    }
    fn one(&self) -> GrEl {
        GaloisRing::one(self)
    }
    fn from_i64(&self, c: i64) -> GrEl {
        GaloisRing::from_i64(self, c)
    }
    fn add(&self, a: &GrEl, b: &GrEl) -> GrEl {
        GaloisRing::add(self, a, b)
    }
    fn sub(&self, a: &GrEl, b: &GrEl) -> GrEl {
        GaloisRing::sub(self, a, b)
    }
    fn neg(&self, a: &GrEl) -> GrEl {
        GaloisRing::neg(self, a)
    }
    fn mul(&self, a: &GrEl, b: &GrEl) -> GrEl {
        GaloisRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &GrEl) -> bool {
        GaloisRing::is_zero(self, a)
    }
    fn val(&self, a: &GrEl) -> u32 {
        GaloisRing::val(self, a)
    }
    fn unit_and_val(&self, a: &GrEl) -> (GrEl, u32) {
        GaloisRing::unit_and_val(self, a)
    }
    fn inv_unit(&self, a: &GrEl) -> GrEl {
        GaloisRing::inv(self, a).expect("inv_unit on non-unit")
    }
    fn p(&self) -> u64 {
        GaloisRing::p(self)
    }
    fn precision(&self) -> u32 {
        self.m()
    }
}

/// Convenience: fallible unit inverse shared by callers that want errors.
pub fn try_inv<R: RingCtx>(ring: &R, a: &R::El) -> Result<R::El> {
    if !ring.is_unit(a) {
        return Err(crate::error::Error::domain("attempted inverse of a non-unit".to_string()));
    }
    Ok(ring.inv_unit(a))
}
