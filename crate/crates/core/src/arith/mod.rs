//! Exact arithmetic: Z/p^m scalars, Galois rings of character values,
//! Dirichlet and arithmetic characters, generalized Bernoulli numbers and
//! group rings over residue classes.

pub mod arith_char;
pub mod bernoulli;
pub mod dirichlet;
pub mod galois;
pub mod group_ring;
pub mod zpm;

pub use arith_char::ArithmeticCharacter;
pub use bernoulli::{bernoulli1, Valued};
pub use dirichlet::{DirichletCharacter, UnitGroup};
pub use galois::{GaloisRing, GrEl};
pub use group_ring::{GroupRingElem, StarGroupRingElem};
pub use zpm::Zpm;

/// Greatest common divisor of two non-negative integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Extended gcd over signed integers: returns (g, x, y) with a*x + b*y = g.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, x, y) = egcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Euler's phi, by trial factorization (arguments stay small here).
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut pk = 1u64;
            while n % d == 0 {
                n /= d;
                pk *= d;
            }
            phi *= pk - pk / d;
        }
        d += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Distinct prime divisors of n in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Positive divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Moebius function of n.
pub fn moebius(mut n: u64) -> i64 {
    let mut k = 0;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Primes up to and including `bound`, by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for q in 2..=n {
        if !is_comp[q] {
            out.push(q as u64);
            let mut j = q * q;
            while j <= n {
                is_comp[j] = true;
                j += q;
            }
        }
    }
    out
}

/// The p-adic valuation of n (n > 0).
pub fn val_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_number_theory() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(euler_phi(65), 48);
        assert_eq!(euler_phi(37), 36);
        assert_eq!(prime_divisors(65), vec![5, 13]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(65), 1);
        assert_eq!(moebius(5), -1);
        assert_eq!(moebius(25), 0);
        let (g, x, y) = egcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
    }
}
