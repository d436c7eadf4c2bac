//! Galois rings GR(p^m, e) = Z/p^m[x]/(h) with h monic of degree e and
//! irreducible mod p.
//!
//! This is the value ring for all characters in play: given the lcm d of
//! the prime-to-p character orders, we take e = ord_d(p), so the ring
//! contains a (Teichmueller) root of unity of exact order d. It is a local
//! ring with maximal ideal (p) and residue field F_{p^e}; every element is
//! a unit times a power of p, which keeps the linear algebra elementary.

use crate::arith::zpm::Zpm;
use crate::arith::prime_divisors;
use crate::error::Error;
use crate::Result;

/// An element: coefficient vector of length e, entries in [0, p^m).
pub type GrEl = Vec<u64>;

/// Context for GR(p^m, e), carrying a distinguished root of unity.
#[derive(Debug, Clone)]
pub struct GaloisRing {
    zpm: Zpm,
    e: u32,
    /// Monic modulus of degree e: coefficients c_0..c_{e-1} of the lower
    /// part, i.e. x^e = -(c_0 + c_1 x + ... + c_{e-1} x^{e-1}).
    modulus: Vec<u64>,
    /// Order of the distinguished root of unity `zeta`.
    d: u64,
    zeta: GrEl,
}

impl GaloisRing {
    /// The base ring Z/p^m itself (e = 1, zeta = 1, d = 1).
    pub fn base(zpm: Zpm) -> Self {
        GaloisRing {
            zpm,
            e: 1,
            modulus: vec![0],
            d: 1,
            zeta: vec![1 % zpm.modulus()],
        }
    }

    /// Smallest Galois ring over Z/p^m containing a root of unity of exact
    /// order d (requires gcd(d, p) = 1).
    pub fn with_root_of_unity(zpm: Zpm, d: u64) -> Result<Self> {
        let p = zpm.p();
        if d == 0 || d % p == 0 {
            return Err(Error::config(format!("root-of-unity order {d} not prime to p={p}")));
        }
        if d == 1 {
            return Ok(Self::base(zpm));
        }
        // e = multiplicative order of p mod d
        let mut e = 1u32;
        let mut pk = p % d;
        while pk != 1 {
            pk = (pk * (p % d)) % d;
            e += 1;
            if e > 64 {
                return Err(Error::config(format!("order of p mod {d} too large")));
            }
        }
        if e == 1 {
            // values live in Z/p^m; zeta = teich(g)^((p-1)/d) for g a
            // primitive root mod p
            let g = primitive_root_mod_p(p)?;
            let w = zpm.teichmuller(g)?;
            let zeta = zpm.pow(w, (p - 1) / d);
            return Ok(GaloisRing {
                zpm,
                e: 1,
                modulus: vec![0],
                d,
                zeta: vec![zeta],
            });
        }
        let h0 = find_irreducible(p, e)?;
        let mut ring = GaloisRing {
            zpm,
            e,
            modulus: h0.iter().map(|&c| c % zpm.modulus()).collect(),
            d,
            zeta: vec![0; e as usize],
        };
        // generator of F_{p^e}^x, then the d-th root, then its
        // Teichmueller lift
        let g = ring.field_generator()?;
        let pe_minus_1 = p.pow(e).checked_sub(1).ok_or_else(|| Error::internal("p^e overflow"))?;
        let z = ring.pow(&g, pe_minus_1 / d);
        ring.zeta = ring.teichmuller_lift(&z);
        debug_assert!(ring.is_one(&ring.pow(&ring.zeta, d)));
        debug_assert!(d == 1 || !ring.is_one(&ring.pow(&ring.zeta, d / prime_divisors(d)[0])));
        Ok(ring)
    }

    pub fn zpm(&self) -> Zpm {
        self.zpm
    }
    pub fn p(&self) -> u64 {
        self.zpm.p()
    }
    pub fn m(&self) -> u32 {
        self.zpm.m()
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    /// The order of [`Self::zeta`].
    pub fn zeta_order(&self) -> u64 {
        self.d
    }
    /// The distinguished root of unity of order [`Self::zeta_order`].
    pub fn zeta(&self) -> GrEl {
        self.zeta.clone()
    }

    /// Same residue structure at a different precision. The distinguished
    /// root of unity reduces compatibly between precisions.
    pub fn with_precision(&self, m: u32) -> Result<Self> {
        Self::with_root_of_unity(self.zpm.with_precision(m)?, self.d)
    }

    /// Reduce an element of a higher-precision copy of this ring into this
    /// one (coefficientwise).
    pub fn reduce_from(&self, x: &GrEl) -> GrEl {
        x.iter().map(|&c| c % self.zpm.modulus()).collect()
    }

    pub fn zero(&self) -> GrEl {
        vec![0; self.e as usize]
    }

    pub fn one(&self) -> GrEl {
        let mut v = self.zero();
        v[0] = 1 % self.zpm.modulus();
        v
    }

    pub fn is_zero(&self, a: &GrEl) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &GrEl) -> bool {
        a == &self.one()
    }

    pub fn from_scalar(&self, c: u64) -> GrEl {
        let mut v = self.zero();
        v[0] = self.zpm.reduce_u64(c);
        v
    }

    pub fn from_i64(&self, c: i64) -> GrEl {
        let mut v = self.zero();
        v[0] = self.zpm.reduce_i64(c);
        v
    }

    /// The scalar part, if the element is a constant.
    pub fn as_scalar(&self, a: &GrEl) -> Option<u64> {
        if a[1..].iter().all(|&c| c == 0) {
            Some(a[0])
        } else {
            None
        }
    }

    pub fn add(&self, a: &GrEl, b: &GrEl) -> GrEl {
        a.iter().zip(b).map(|(&x, &y)| self.zpm.add(x, y)).collect()
    }

    pub fn sub(&self, a: &GrEl, b: &GrEl) -> GrEl {
        a.iter().zip(b).map(|(&x, &y)| self.zpm.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &GrEl) -> GrEl {
        a.iter().map(|&x| self.zpm.neg(x)).collect()
    }

    pub fn scalar_mul(&self, c: u64, a: &GrEl) -> GrEl {
        a.iter().map(|&x| self.zpm.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &GrEl, b: &GrEl) -> GrEl {
        let e = self.e as usize;
        if e == 1 {
            return vec![self.zpm.mul(a[0], b[0])];
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = self.zpm.add(prod[i + j], self.zpm.mul(x, y));
            }
        }
        // reduce by the monic modulus: x^e = -(lower part)
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let t = self.zpm.mul(c, self.modulus[j]);
                prod[k - e + j] = self.zpm.sub(prod[k - e + j], t);
            }
        }
        prod.truncate(e);
        prod
    }

    /// p^k as a scalar in Z/p^m (zero once k reaches the precision).
    pub fn p_pow_u64(&self, k: u64) -> u64 {
        if k >= self.m() as u64 {
            0
        } else {
            self.zpm.pow(self.p(), k)
        }
    }

    /// Reduce a coefficient vector of any length by the modulus.
    pub fn reduce_poly(&self, a: &[u64]) -> GrEl {
        let e = self.e as usize;
        let mut prod: Vec<u64> = a.iter().map(|&c| self.zpm.reduce_u64(c)).collect();
        prod.resize(prod.len().max(e), 0);
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let t = self.zpm.mul(c, self.modulus[j]);
                prod[k - e + j] = self.zpm.sub(prod[k - e + j], t);
            }
        }
        prod.truncate(e);
        prod
    }

    pub fn pow(&self, a: &GrEl, mut n: u64) -> GrEl {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// p-adic valuation: min over coefficients, capped at m.
    pub fn val(&self, a: &GrEl) -> u32 {
        a.iter().map(|&c| self.zpm.val(c)).min().unwrap_or(self.m())
    }

    pub fn is_unit(&self, a: &GrEl) -> bool {
        self.val(a) == 0
    }

    /// Write a = p^v * u with u a unit (u arbitrary for a = 0).
    pub fn unit_and_val(&self, a: &GrEl) -> (GrEl, u32) {
        let v = self.val(a);
        if v >= self.m() {
            return (self.one(), self.m());
        }
        let pv = self.p().pow(v);
        (a.iter().map(|&c| c / pv).collect(), v)
    }

    pub fn p_pow(&self, k: u32) -> GrEl {
        if k >= self.m() {
            return self.zero();
        }
        self.from_scalar(self.p().pow(k))
    }

    /// Inverse of a unit, by inverting in the residue field and lifting
    /// with Newton iteration y -> y(2 - ay).
    pub fn inv(&self, a: &GrEl) -> Result<GrEl> {
        if !self.is_unit(a) {
            return Err(Error::domain("inverse of a non-unit in the character ring".to_string()));
        }
        if self.e == 1 {
            return Ok(vec![self.zpm.inv(a[0])?]);
        }
        let p = self.p();
        let abar: Vec<u64> = a.iter().map(|&c| c % p).collect();
        let h0: Vec<u64> = self.modulus.iter().map(|&c| c % p).collect();
        let y0 = field_inverse(p, &h0, &abar)?;
        let mut y: GrEl = y0.into_iter().map(|c| c % self.zpm.modulus()).collect();
        y.resize(self.e as usize, 0);
        // each step doubles the p-adic accuracy of the inverse
        let steps = 64 - u64::from(self.m()).leading_zeros();
        let two = self.from_scalar(2);
        for _ in 0..=steps {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        debug_assert!(self.is_one(&self.mul(a, &y)));
        Ok(y)
    }

    /// Teichmueller lift: iterate Frobenius-power x -> x^(p^e) until
    /// stationary mod p^m.
    fn teichmuller_lift(&self, a: &GrEl) -> GrEl {
        let q = self.p().pow(self.e);
        let mut w = a.clone();
        for _ in 0..self.m() {
            w = self.pow(&w, q);
        }
        w
    }

    /// A generator of the residue field's unit group, as a ring element
    /// with coefficients in [0, p).
    fn field_generator(&self) -> Result<GrEl> {
        let p = self.p();
        let q1 = p.pow(self.e) - 1;
        let qfactors = prime_divisors(q1);
        let h0: Vec<u64> = self.modulus.iter().map(|&c| c % p).collect();
        // candidates x + c, then 2x + c, ... — deterministic sweep
        for a1 in 1..p {
            for c in 0..p {
                let mut g = vec![0u64; self.e as usize];
                g[0] = c;
                g[1] = a1;
                if qfactors.iter().all(|&r| !fp_pow_is_one(p, &h0, &g, q1 / r)) {
                    return Ok(g);
                }
            }
        }
        Err(Error::internal("no residue-field generator found"))
    }
}

/// Smallest primitive root mod an odd prime p.
pub fn primitive_root_mod_p(p: u64) -> Result<u64> {
    let factors = prime_divisors(p - 1);
    'cand: for g in 2..p {
        for &q in &factors {
            if mod_pow(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    Err(Error::internal(format!("no primitive root mod {p}")))
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % p as u128) as u64;
        }
        a = (a as u128 * a as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

// ---- polynomial arithmetic over F_p (coefficient vectors, low..high) ----

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mul_mod(p: u64, h: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    // h is the *lower part* of a monic modulus of degree e = h.len()
    let e = h.len();
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for j in 0..e {
            prod[k - e + j] = (prod[k - e + j] + p * p - (c * h[j]) % p % (p * p)) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn fp_pow_is_one(p: u64, h: &[u64], a: &[u64], mut n: u64) -> bool {
    let e = h.len();
    let mut acc = vec![0u64; e];
    acc[0] = 1;
    let mut base = a.to_vec();
    base.resize(e, 0);
    while n > 0 {
        if n & 1 == 1 {
            acc = fp_mul_mod(p, h, &acc, &base);
        }
        base = fp_mul_mod(p, h, &base, &base);
        n >>= 1;
    }
    acc[0] == 1 && acc[1..].iter().all(|&c| c == 0)
}

/// Inverse of a unit in F_p[x]/(h) by the extended Euclidean algorithm.
fn field_inverse(p: u64, h: &[u64], a: &[u64]) -> Result<Vec<u64>> {
    // full modulus polynomial: h_full = x^e + h
    let e = h.len();
    let mut hf = h.to_vec();
    hf.push(1);
    let mut r0 = hf;
    let mut r1 = a.to_vec();
    fp_trim(&mut r1);
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    let inv_mod_p = |c: u64| -> u64 {
        // Fermat
        mod_pow(c, p - 2, p)
    };
    while !r1.is_empty() {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut quo = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
        let lead_inv = inv_mod_p(*r1.last().unwrap());
        while rem.len() >= r1.len() && !rem.is_empty() {
            let k = rem.len() - r1.len();
            let c = (*rem.last().unwrap() * lead_inv) % p;
            if c != 0 {
                quo[k] = c;
                for (j, &hj) in r1.iter().enumerate() {
                    let sub = (c * hj) % p;
                    rem[k + j] = (rem[k + j] + p - sub) % p;
                }
            }
            // top coefficient is now zero
            rem.pop();
            fp_trim(&mut rem);
            if rem.len() < r1.len() {
                break;
            }
        }
        // t2 = t0 - quo * t1
        let mut qt = vec![0u64; quo.len() + t1.len()];
        for (i, &qc) in quo.iter().enumerate() {
            if qc == 0 {
                continue;
            }
            for (j, &tc) in t1.iter().enumerate() {
                qt[i + j] = (qt[i + j] + qc * tc) % p;
            }
        }
        let mut t2 = vec![0u64; qt.len().max(t0.len())];
        for (i, slot) in t2.iter_mut().enumerate() {
            let a0 = t0.get(i).copied().unwrap_or(0);
            let b0 = qt.get(i).copied().unwrap_or(0);
            *slot = (a0 + p - b0) % p;
        }
        fp_trim(&mut t2);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    // r0 = gcd must be a nonzero constant
    if r0.len() != 1 || r0[0] == 0 {
        return Err(Error::domain("element not invertible in residue field".to_string()));
    }
    let c = inv_mod_p(r0[0]);
    let mut out: Vec<u64> = t0.iter().map(|&t| (t * c) % p).collect();
    out.resize(e, 0);
    Ok(out)
}

/// Deterministic search for a monic irreducible polynomial of degree e
/// over F_p, returned as its lower part (length e).
fn find_irreducible(p: u64, e: u32) -> Result<Vec<u64>> {
    let e = e as usize;
    let efactors = prime_divisors(e as u64);
    let total = p.pow(e as u32);
    for code in 0..total {
        let mut h = vec![0u64; e];
        let mut c = code;
        for slot in h.iter_mut() {
            *slot = c % p;
            c /= p;
        }
        if h[0] == 0 {
            continue; // divisible by x
        }
        if is_irreducible(p, &h, &efactors) {
            return Ok(h);
        }
    }
    Err(Error::internal(format!("no irreducible of degree {e} over F_{p}")))
}

/// Irreducibility test: x^(p^e) = x mod h and gcd-degree checks via
/// x^(p^(e/q)) != x for prime divisors q of e.
fn is_irreducible(p: u64, h: &[u64], efactors: &[u64]) -> bool {
    let e = h.len();
    // frobenius power x^(p^k) mod h computed by k-fold powering
    let xpow = |k: usize| -> Vec<u64> {
        let mut cur = vec![0u64; e];
        if e == 1 {
            cur[0] = 0;
        } else {
            cur[1] = 1;
        }
        for _ in 0..k {
            // cur = cur^p
            let mut acc = vec![0u64; e];
            acc[0] = 1;
            let mut base = cur.clone();
            let mut n = p;
            while n > 0 {
                if n & 1 == 1 {
                    acc = fp_mul_mod(p, h, &acc, &base);
                }
                base = fp_mul_mod(p, h, &base, &base);
                n >>= 1;
            }
            cur = acc;
        }
        cur
    };
    let x_id: Vec<u64> = {
        let mut v = vec![0u64; e];
        if e > 1 {
            v[1] = 1;
        }
        v
    };
    if xpow(e) != x_id {
        return false;
    }
    for &q in efactors {
        let k = e / q as usize;
        let xq = xpow(k);
        // x^(p^k) - x must be a unit mod h <=> gcd(x^(p^k)-x, h) = 1;
        // since h has no root structure check, use: xq != x and the
        // difference invertible
        let mut diff = xq;
        if e > 1 {
            diff[1] = (diff[1] + p - 1) % p;
        }
        fp_trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if field_inverse(p, h, &diff).is_err() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_ring_round_trip() {
        let zpm = Zpm::new(37, 2).unwrap();
        let w = GaloisRing::base(zpm);
        let a = w.from_scalar(40);
        let b = w.from_scalar(100);
        assert_eq!(w.mul(&a, &b), w.from_scalar(4000 % 1369));
    }

    #[test]
    fn order_twelve_root_at_p5() {
        // characters of (Z/65)^x have order dividing 12; ord_12(5) = 2
        let zpm = Zpm::new(5, 2).unwrap();
        let w = GaloisRing::with_root_of_unity(zpm, 12).unwrap();
        assert_eq!(w.degree(), 2);
        let z = w.zeta();
        assert!(w.is_one(&w.pow(&z, 12)));
        assert!(!w.is_one(&w.pow(&z, 6)));
        assert!(!w.is_one(&w.pow(&z, 4)));
        // inverse of a unit
        let zi = w.inv(&z).unwrap();
        assert!(w.is_one(&w.mul(&z, &zi)));
        // valuation structure
        let five = w.from_scalar(5);
        let x = w.mul(&five, &z);
        assert_eq!(w.val(&x), 1);
        let (u, v) = w.unit_and_val(&x);
        assert_eq!(v, 1);
        assert!(w.is_unit(&u));
    }

    #[test]
    fn degree_one_root_in_base() {
        // mu_4 lives in Z/5^m already
        let zpm = Zpm::new(5, 3).unwrap();
        let w = GaloisRing::with_root_of_unity(zpm, 4).unwrap();
        assert_eq!(w.degree(), 1);
        let z = w.zeta();
        assert!(w.is_one(&w.pow(&z, 4)));
        assert!(!w.is_one(&w.pow(&z, 2)));
    }

    #[test]
    fn precision_compatibility() {
        let zpm = Zpm::new(5, 2).unwrap();
        let w2 = GaloisRing::with_root_of_unity(zpm, 12).unwrap();
        let w4 = w2.with_precision(4).unwrap();
        let reduced = w2.reduce_from(&w4.zeta());
        assert_eq!(reduced, w2.zeta());
    }
}
