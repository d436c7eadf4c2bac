//! Arithmetic characters: products psi * kappa^t of a tame finite part
//! and an integer power of the projection kappa to 1 + pZ_p.
//!
//! kappa is extended completely multiplicatively to nonzero p-adic
//! integers by kappa(p) = p and kappa(u) = u * omega(u)^{-1} for units;
//! for a prime l | N this gives kappa(l) = l * omega(l)^{-1} by viewing l
//! inside Z_p^x. Evaluation at 0 is 0.

use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone)]
pub struct ArithmeticCharacter {
    finite: DirichletCharacter,
    t: i64,
}

impl ArithmeticCharacter {
    pub fn new(finite: DirichletCharacter, t: i64) -> Self {
        ArithmeticCharacter { finite, t }
    }

    /// kappa^t with the constant-one finite part (period 1).
    pub fn kappa_power(ring: &GaloisRing, t: i64) -> Self {
        let group1 = crate::arith::dirichlet::UnitGroup::new(1).expect("modulus 1");
        ArithmeticCharacter { finite: DirichletCharacter::trivial(ring, &group1), t }
    }

    pub fn finite_part(&self) -> &DirichletCharacter {
        &self.finite
    }

    pub fn kappa_exponent(&self) -> i64 {
        self.t
    }

    pub fn ring(&self) -> &GaloisRing {
        self.finite.ring()
    }

    /// Prime-to-p part of the period of the finite part.
    pub fn f_chi(&self) -> u64 {
        let p = self.ring().p();
        let mut f = self.finite.modulus();
        while f % p == 0 {
            f /= p;
        }
        f
    }

    /// Parity (kappa is even, so this is the finite part's parity).
    pub fn is_even(&self) -> bool {
        self.finite.is_even()
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// kappa(a)^t for a nonzero integer a, in the value ring.
    pub fn kappa_t(&self, a: i64) -> Result<GrEl> {
        let ring = self.ring();
        let zpm = ring.zpm();
        let p = zpm.p();
        if a == 0 {
            return Err(Error::domain("kappa at 0".to_string()));
        }
        let mut u = a.unsigned_abs();
        let mut s = 0u32;
        while u % p == 0 {
            u /= p;
            s += 1;
        }
        // the sign is absorbed: kappa(-1) = (-1) * omega(-1)^{-1} = 1
        let ku = zpm.kappa_unit(u % zpm.modulus())?;
        let t = self.t;
        if t >= 0 {
            let st = (s as i64 * t) as u32;
            if st >= zpm.m() {
                return Ok(ring.zero());
            }
            let val = zpm.mul(zpm.pow(p, st as u64), zpm.pow(ku, t as u64));
            Ok(ring.from_scalar(val))
        } else {
            if s > 0 {
                return Err(Error::domain(
                    "negative kappa power at a non-unit argument".to_string(),
                ));
            }
            let kinv = zpm.inv(ku)?;
            Ok(ring.from_scalar(zpm.pow(kinv, (-t) as u64)))
        }
    }

    /// chi(a) = finite(a) * kappa(a)^t, with chi(0) = 0.
    pub fn eval_i64(&self, a: i64) -> GrEl {
        let ring = self.ring();
        if a == 0 {
            return ring.zero();
        }
        let fv = self.finite.eval_i64(a);
        if ring.is_zero(&fv) {
            return fv;
        }
        match self.kappa_t(a) {
            Ok(kv) => ring.mul(&fv, &kv),
            Err(_) => ring.zero(),
        }
    }

    /// Evaluate at a residue class modulo `level`, using the canonical
    /// representative in [0, level).
    pub fn eval_residue(&self, j: u64, level: u64) -> GrEl {
        self.eval_i64((j % level) as i64)
    }

    /// Product of two arithmetic characters (finite parts extended to the
    /// lcm of their moduli).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let qa = self.finite.modulus();
        let qb = other.finite.modulus();
        let l = qa / crate::arith::gcd(qa, qb) * qb;
        let fa = self.finite.extend_to(l)?;
        let fb = other.finite.extend_to(l)?;
        Ok(ArithmeticCharacter { finite: fa.mul(&fb)?, t: self.t + other.t })
    }

    /// Inverse character, with the finite part taken at its own modulus.
    pub fn inverse(&self) -> Self {
        ArithmeticCharacter { finite: self.finite.inverse(), t: -self.t }
    }

    /// Same character data with the finite part reduced to its minimal
    /// period (used when forming quotient characters like alpha/chi).
    pub fn minimal_period(&self) -> Result<Self> {
        Ok(ArithmeticCharacter { finite: self.finite.primitive_part()?, t: self.t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dirichlet::{char_ring_for_modulus, UnitGroup};
    use crate::arith::zpm::Zpm;

    #[test]
    fn trivial_finite_part_t0_is_one_on_units() {
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let chi = ArithmeticCharacter::kappa_power(&ring, 0);
        for a in [1i64, 2, 3, 4, 6, 7] {
            if a % 5 == 0 {
                continue;
            }
            assert!(ring.is_one(&chi.eval_i64(a)));
        }
        assert!(ring.is_zero(&chi.eval_i64(0)));
    }

    #[test]
    fn kappa_one_example() {
        // p=5, m=2: kappa(2) = 2 * omega(2)^{-1} = 2 * 7^{-1} mod 25
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let chi = ArithmeticCharacter::kappa_power(&ring, 1);
        let expect = zpm.mul(2, zpm.inv(7).unwrap());
        assert_eq!(chi.eval_i64(2), ring.from_scalar(expect));
        // kappa(5) = 5, kappa(10) = 5 * kappa(2)
        assert_eq!(chi.eval_i64(5), ring.from_scalar(5));
        assert_eq!(chi.eval_i64(10), ring.from_scalar(zpm.mul(5, expect)));
    }

    #[test]
    fn complete_multiplicativity() {
        let zpm = Zpm::new(5, 3).unwrap();
        let ring = char_ring_for_modulus(zpm, 65).unwrap();
        let _group = UnitGroup::new(65).unwrap();
        let omega = DirichletCharacter::teichmuller(&ring).unwrap().extend_to(65).unwrap();
        let chi = ArithmeticCharacter::new(omega, 2);
        for a in 1i64..40 {
            for b in 1i64..20 {
                let lhs = chi.eval_i64(a * b);
                let rhs = ring.mul(&chi.eval_i64(a), &chi.eval_i64(b));
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }
}
