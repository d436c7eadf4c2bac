//! Cusps of X_1(M): canonical class keys, enumeration, and the genus and
//! cusp-count formulas used as independent rank oracles.
//!
//! Two cusps a/c and a'/c' (written as coprime columns) are identified
//! exactly when (a', c') = +-(a + jc, c) mod M for some integer j, so the
//! class of (a, c) is determined by (c mod M, a mod gcd(c, M)) up to the
//! simultaneous sign.

use crate::arith::{divisors, euler_phi, gcd};

/// Canonical key of the cusp class of the column (a; c) mod M.
pub fn cusp_key(a: i64, c: i64, m: u64) -> (u64, u64) {
    let mm = m as i64;
    let key = |a: u64, c: u64| -> (u64, u64) {
        let g = gcd(c, m);
        let g = if g == 0 { m } else { g };
        (c, a % g)
    };
    let a0 = a.rem_euclid(mm) as u64;
    let c0 = c.rem_euclid(mm) as u64;
    let k1 = key(a0, c0);
    let k2 = key((m - a0) % m, (m - c0) % m);
    std::cmp::min(k1, k2)
}

/// All cusp classes of X_1(M), as sorted canonical keys.
#[derive(Debug, Clone)]
pub struct CuspTable {
    modulus: u64,
    keys: Vec<(u64, u64)>,
}

impl CuspTable {
    pub fn new(m: u64) -> Self {
        let mut keys = Vec::new();
        for c in 0..m {
            for a in 0..m {
                if gcd(gcd(a, c), m) != 1 {
                    continue;
                }
                let k = cusp_key(a as i64, c as i64, m);
                keys.push(k);
            }
        }
        keys.sort_unstable();
        keys.dedup();
        CuspTable { modulus: m, keys }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Class index of the cusp a/c (coprime lift of a residue pair with
    /// gcd(a, c, M) = 1).
    pub fn index_of(&self, a: i64, c: i64) -> usize {
        let k = cusp_key(a, c, self.modulus);
        self.keys.binary_search(&k).expect("cusp key enumerated")
    }

    /// Index of the zero cusp 0/1.
    pub fn zero(&self) -> usize {
        self.index_of(0, 1)
    }

    /// Index of the infinity cusp 1/0.
    pub fn infinity(&self) -> usize {
        self.index_of(1, 0)
    }
}

/// Number of symbol pairs, i.e. the index of Gamma_1(M) in SL_2(Z).
pub fn gamma1_pair_count(m: u64) -> u64 {
    let mut count = m * m;
    for l in crate::arith::prime_divisors(m) {
        count = count / (l * l) * (l * l - 1);
    }
    count
}

/// Number of cusps of X_1(M), M >= 5.
pub fn gamma1_cusp_count(m: u64) -> u64 {
    assert!(m >= 5, "cusp formula needs M >= 5");
    let s: u64 = divisors(m).iter().map(|&d| euler_phi(d) * euler_phi(m / d)).sum();
    s / 2
}

/// Genus of X_1(M), M >= 5 (no elliptic points).
pub fn gamma1_genus(m: u64) -> u64 {
    assert!(m >= 5, "genus formula needs M >= 5");
    let index_psl = gamma1_pair_count(m) / 2;
    let cusps = gamma1_cusp_count(m);
    let num = 24 + 2 * index_psl - 12 * cusps;
    assert_eq!(num % 24, 0, "genus formula must be integral");
    num / 24
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_counts() {
        assert_eq!(gamma1_cusp_count(11), 10);
        assert_eq!(gamma1_genus(11), 1);
        assert_eq!(gamma1_cusp_count(13), 12);
        assert_eq!(gamma1_genus(13), 2);
        assert_eq!(gamma1_cusp_count(25), 28);
        assert_eq!(gamma1_genus(25), 12);
        assert_eq!(gamma1_cusp_count(37), 36);
        assert_eq!(gamma1_genus(37), 40);
        assert_eq!(gamma1_cusp_count(65), 96);
        assert_eq!(gamma1_genus(65), 121);
    }

    #[test]
    fn enumeration_matches_formula() {
        for m in [5u64, 7, 11, 13, 25, 37, 65] {
            let table = CuspTable::new(m);
            assert_eq!(table.len() as u64, gamma1_cusp_count(m), "M = {m}");
        }
    }

    #[test]
    fn translation_invariance() {
        let m = 25u64;
        // (a; c) ~ (a + jc; c) and ~ (-a; -c)
        for c in 0..m {
            for a in 0..m {
                if gcd(gcd(a, c), m) != 1 {
                    continue;
                }
                let k = cusp_key(a as i64, c as i64, m);
                for j in 1..5i64 {
                    assert_eq!(cusp_key(a as i64 + j * c as i64, c as i64, m), k);
                }
                assert_eq!(cusp_key(-(a as i64), -(c as i64), m), k);
            }
        }
    }
}
