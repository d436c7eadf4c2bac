//! The coefficient ring Z/p^m for an odd prime p.
//!
//! Elements are plain `u64` residues in [0, p^m); the context struct holds
//! the modulus. Products go through `u128`, so any p^m < 2^63 is safe.

use crate::arith::egcd;
use crate::error::Error;
use crate::Result;

/// Context for arithmetic in Z/p^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zpm {
    p: u64,
    m: u32,
    pm: u64,
}

impl Zpm {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 2 || m == 0 {
            return Err(Error::config(format!("invalid modulus p={p}, m={m}")));
        }
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm = pm
                .checked_mul(p)
                .ok_or_else(|| Error::config(format!("p^m overflows u64: p={p}, m={m}")))?;
        }
        if pm >= 1 << 62 {
            return Err(Error::config(format!("p^m too large: p={p}, m={m}")));
        }
        Ok(Zpm { p, m, pm })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// The modulus p^m.
    pub fn modulus(&self) -> u64 {
        self.pm
    }

    /// Same prime, precision raised (or lowered) to `m`.
    pub fn with_precision(&self, m: u32) -> Result<Self> {
        Zpm::new(self.p, m)
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        let r = a.rem_euclid(self.pm as i64) as u64;
        r
    }

    pub fn reduce_u64(&self, a: u64) -> u64 {
        a % self.pm
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.pm {
            s - self.pm
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.pm - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.pm - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.pm as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64 % self.pm;
        a %= self.pm;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::domain(format!("{a} is not a unit mod {}^{}", self.p, self.m)));
        }
        let (g, x, _) = egcd(a as i64, self.pm as i64);
        debug_assert_eq!(g, 1);
        Ok(self.reduce_i64(x))
    }

    /// p-adic valuation, capped at m (v(0) = m).
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Write a = unit * p^v; returns (unit, v). For a = 0, returns (1, m).
    pub fn unit_and_val(&self, a: u64) -> (u64, u32) {
        if a == 0 {
            return (1, self.m);
        }
        let v = self.val(a);
        (a / self.p.pow(v), v)
    }

    /// The Teichmueller representative of a unit a: the unique element
    /// congruent to a mod p with w^(p-1) = 1 in Z/p^m. Computed by
    /// iterating a -> a^p, which is stationary after m-1 steps.
    pub fn teichmuller(&self, a: u64) -> Result<u64> {
        let a = self.reduce_u64(a);
        if !self.is_unit(a) {
            return Err(Error::domain(format!(
                "teichmuller lift of non-unit {a} mod {}^{}",
                self.p, self.m
            )));
        }
        let mut w = a;
        for _ in 0..self.m {
            w = self.pow(w, self.p);
        }
        debug_assert_eq!(self.pow(w, self.p), w);
        Ok(w)
    }

    /// kappa(a) = a * omega(a)^{-1} for a unit a (the 1 + pZ_p component).
    pub fn kappa_unit(&self, a: u64) -> Result<u64> {
        let w = self.teichmuller(a)?;
        Ok(self.mul(self.reduce_u64(a), self.inv(w)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_examples() {
        // fixed point at 1
        for (p, m) in [(5, 2), (7, 3), (37, 2)] {
            let r = Zpm::new(p, m).unwrap();
            assert_eq!(r.teichmuller(1).unwrap(), 1);
        }
        // omega(2) = 7 mod 25, and 7^4 = 1 mod 25
        let r = Zpm::new(5, 2).unwrap();
        let w = r.teichmuller(2).unwrap();
        assert_eq!(w, 7);
        assert_eq!(r.pow(w, 4), 1);
        // at m = 1 the lift is the residue itself
        let r = Zpm::new(7, 1).unwrap();
        assert_eq!(r.teichmuller(3).unwrap(), 3);
        // non-unit rejected
        let r = Zpm::new(5, 2).unwrap();
        assert!(r.teichmuller(10).is_err());
    }

    #[test]
    fn teichmuller_is_multiplicative_exhaustive() {
        for p in [5u64, 7] {
            for m in 1..=3u32 {
                let r = Zpm::new(p, m).unwrap();
                for a in 1..p.pow(m) {
                    if !r.is_unit(a) {
                        continue;
                    }
                    for b in 1..p.pow(m) {
                        if !r.is_unit(b) {
                            continue;
                        }
                        let lhs = r.teichmuller(r.mul(a, b)).unwrap();
                        let rhs = r.mul(r.teichmuller(a).unwrap(), r.teichmuller(b).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_val_decomposition() {
        let r = Zpm::new(5, 3).unwrap();
        assert_eq!(r.val(50), 2);
        assert_eq!(r.unit_and_val(50), (2, 2));
        assert_eq!(r.val(0), 3);
        let inv = r.inv(7).unwrap();
        assert_eq!(r.mul(7, inv), 1);
    }

    #[test]
    fn kappa_example() {
        // kappa(2) = 2 * omega(2)^{-1} = 2 * 7^{-1} mod 25
        let r = Zpm::new(5, 2).unwrap();
        let k = r.kappa_unit(2).unwrap();
        assert_eq!(k, r.mul(2, r.inv(7).unwrap()));
        // kappa lands in 1 + pZ
        assert_eq!(k % 5, 1);
    }
}
