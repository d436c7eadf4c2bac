//! Symbol indexing: pairs (u, v) in (Z/M)^2 generating the unit ideal,
//! taken modulo the simultaneous sign flip (u, v) ~ (-u, -v).
//!
//! Each class is one oriented edge of the Farey tessellation on X_1(M);
//! the right action of integer matrices implements all symbol operators.

use crate::arith::gcd;

/// Table of canonical pair representatives with O(1) lookup.
#[derive(Debug, Clone)]
pub struct PairTable {
    modulus: u64,
    pairs: Vec<(u64, u64)>,
    /// (u * M + v) -> index + 1, 0 for invalid.
    lookup: Vec<u32>,
}

impl PairTable {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 3, "modulus must be at least 3");
        let m = modulus;
        let mut pairs = Vec::new();
        let mut lookup = vec![0u32; (m * m) as usize];
        for u in 0..m {
            for v in 0..m {
                if gcd(gcd(u, v), m) != 1 {
                    continue;
                }
                let (cu, cv) = canonical(u, v, m);
                if (cu, cv) == (u, v) {
                    let idx = pairs.len() as u32 + 1;
                    pairs.push((u, v));
                    lookup[(u * m + v) as usize] = idx;
                }
            }
        }
        // second pass: point the non-canonical mates at the class index
        for u in 0..m {
            for v in 0..m {
                if gcd(gcd(u, v), m) != 1 {
                    continue;
                }
                if lookup[(u * m + v) as usize] == 0 {
                    let (cu, cv) = canonical(u, v, m);
                    lookup[(u * m + v) as usize] = lookup[(cu * m + cv) as usize];
                }
            }
        }
        PairTable { modulus: m, pairs, lookup }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, idx: usize) -> (u64, u64) {
        self.pairs[idx]
    }

    /// Index of the class of (u, v); None if gcd(u, v, M) > 1.
    pub fn index_of(&self, u: i64, v: i64) -> Option<usize> {
        let m = self.modulus as i64;
        let u = u.rem_euclid(m) as u64;
        let v = v.rem_euclid(m) as u64;
        let raw = self.lookup[(u * self.modulus + v) as usize];
        if raw == 0 {
            None
        } else {
            Some(raw as usize - 1)
        }
    }

    /// Right action of an integer matrix (a b; c d):
    /// (u, v) -> (a u + c v, b u + d v).
    pub fn act(&self, idx: usize, mat: &[i64; 4]) -> Option<usize> {
        let (u, v) = self.pairs[idx];
        let m = self.modulus as i64;
        let (u, v) = (u as i64, v as i64);
        let nu = (mat[0] * u + mat[2] * v).rem_euclid(m);
        let nv = (mat[1] * u + mat[3] * v).rem_euclid(m);
        self.index_of(nu, nv)
    }

    /// sigma = (0 -1; 1 0): reverses the edge.
    pub fn sigma(&self, idx: usize) -> usize {
        let (u, v) = self.pairs[idx];
        self.index_of(v as i64, -(u as i64)).expect("sigma preserves validity")
    }

    /// tau = (0 -1; 1 -1), of order three.
    pub fn tau(&self, idx: usize) -> usize {
        let (u, v) = self.pairs[idx];
        self.index_of(v as i64, -(u as i64) - v as i64).expect("tau preserves validity")
    }

    /// Scaling by a unit j: (u, v) -> (ju, jv).
    pub fn unit_scale(&self, idx: usize, j: u64) -> usize {
        let (u, v) = self.pairs[idx];
        self.index_of((j as i64) * u as i64, (j as i64) * v as i64)
            .expect("unit scaling preserves validity")
    }

    /// Star involution representative action: (u, v) -> (-u, v).
    pub fn star(&self, idx: usize) -> usize {
        let (u, v) = self.pairs[idx];
        self.index_of(-(u as i64), v as i64).expect("star preserves validity")
    }

    /// Lift the class representative to a matrix (a b; c d) in SL_2(Z)
    /// whose bottom row is congruent to (u, v) mod M.
    pub fn lift_to_sl2(&self, idx: usize) -> [i64; 4] {
        let (u, v) = self.pairs[idx];
        lift_pair_to_sl2(u, v, self.modulus)
    }
}

/// Canonical representative among {(u, v), (-u, -v)}: the lexicographic
/// minimum.
pub fn canonical(u: u64, v: u64, m: u64) -> (u64, u64) {
    let neg = ((m - u) % m, (m - v) % m);
    std::cmp::min((u, v), neg)
}

/// Lift a residue pair with gcd(u, v, M) = 1 to coprime integers (c, d),
/// then complete to (a b; c d) in SL_2(Z).
pub fn lift_pair_to_sl2(u: u64, v: u64, m: u64) -> [i64; 4] {
    let (c0, d0) = lift_coprime(u, v, m);
    // a d0 - b c0 = 1
    let (g, a, b) = crate::arith::egcd(d0, c0);
    debug_assert_eq!(g, 1);
    // a*d0 + b*c0 = 1 => matrix (a, -b; c0, d0)
    [a, -b, c0, d0]
}

/// Lift (u, v) mod M with gcd(u, v, M) = 1 to integers with gcd 1.
pub fn lift_coprime(u: u64, v: u64, m: u64) -> (i64, i64) {
    let (u, v, m) = ((u % m) as i64, (v % m) as i64, m as i64);
    if u == 0 {
        // v is then a unit mod m, so (m, v) is a coprime lift
        return (m, if v == 0 { panic!("invalid pair (0,0)") } else { v });
    }
    // adjust v by multiples of m until coprime to u
    let mut t = 0i64;
    loop {
        let cand = v + t * m;
        if crate::arith::egcd(u, cand).0.abs() == 1 {
            return (u, cand);
        }
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_counts() {
        // #pairs mod +-1: half of M^2 prod (1 - 1/l^2)
        assert_eq!(PairTable::new(11).len(), 60);
        assert_eq!(PairTable::new(13).len(), 84);
        assert_eq!(PairTable::new(25).len(), 300);
        assert_eq!(PairTable::new(37).len(), 684);
        assert_eq!(PairTable::new(65).len(), 2016);
    }

    #[test]
    fn involutions() {
        let t = PairTable::new(25);
        for i in 0..t.len() {
            // sigma^2 = 1 (mod the sign identification), tau^3 = 1
            assert_eq!(t.sigma(t.sigma(i)), i);
            assert_eq!(t.tau(t.tau(t.tau(i))), i);
            assert_eq!(t.star(t.star(i)), i);
            // no fixed points for odd modulus
            assert_ne!(t.sigma(i), i);
            assert_ne!(t.tau(i), i);
        }
    }

    #[test]
    fn sl2_lifts() {
        for m in [11u64, 25, 65] {
            let t = PairTable::new(m);
            for i in (0..t.len()).step_by(7) {
                let g = t.lift_to_sl2(i);
                assert_eq!(g[0] * g[3] - g[1] * g[2], 1, "det at {i}");
                let (u, v) = t.pair(i);
                assert_eq!(g[2].rem_euclid(m as i64) as u64, u);
                assert_eq!(g[3].rem_euclid(m as i64) as u64, v);
            }
        }
    }
}
