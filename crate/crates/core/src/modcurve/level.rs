//! Levels N*p^r for the p-adic machinery.

use crate::arith::{euler_phi, gcd};
use crate::error::Error;
use crate::Result;

/// A level N*p^r with p >= 5, gcd(N, p) = 1 and p not dividing phi(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    n: u64,
    p: u64,
    r: u32,
    modulus: u64,
}

impl Level {
    pub fn new(n: u64, p: u64, r: u32) -> Result<Self> {
        if p < 5 {
            return Err(Error::config(format!("p = {p} < 5 is unsupported")));
        }
        if !is_prime(p) {
            return Err(Error::config(format!("p = {p} is not prime")));
        }
        if n == 0 || gcd(n, p) != 1 {
            return Err(Error::config(format!("N = {n} must be positive and prime to p = {p}")));
        }
        if euler_phi(n) % p == 0 {
            return Err(Error::config(format!("p = {p} divides phi(N) = phi({n})")));
        }
        if r == 0 {
            return Err(Error::config("level exponent r must be >= 1".to_string()));
        }
        let modulus = n
            .checked_mul(p.checked_pow(r).ok_or_else(|| Error::config("p^r overflow"))?)
            .ok_or_else(|| Error::config("N p^r overflow"))?;
        Ok(Level { n, p, r, modulus })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    /// M = N p^r.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The level N p^(r-1) below this one (r must be >= 2).
    pub fn lower(&self) -> Result<Level> {
        if self.r < 2 {
            return Err(Error::config("no lower level below r = 1".to_string()));
        }
        Level::new(self.n, self.p, self.r - 1)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Level::new(1, 5, 2).is_ok());
        assert!(Level::new(13, 5, 1).is_ok());
        assert!(Level::new(1, 37, 1).is_ok());
        // p < 5
        assert!(Level::new(1, 3, 1).is_err());
        // p | phi(N): phi(11) = 10, p = 5
        assert!(Level::new(11, 5, 1).is_err());
        // gcd(N, p) != 1
        assert!(Level::new(10, 5, 1).is_err());
        assert_eq!(Level::new(13, 5, 1).unwrap().modulus(), 65);
    }
}
