//! Generalized Bernoulli numbers B_{1,theta} = (1/f) sum_{a=1}^{f} theta(a) a.
//!
//! When p | f the division by f loses p-adic precision, so the sum is
//! computed in a lifted copy of the value ring at precision m + v_p(f)
//! and divided exactly. The result can have negative valuation (the
//! omega^{-1} case), so it is reported as a unit part and a valuation.

use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::GrEl;
use crate::arith::val_p;
use crate::Result;

/// A ring element together with its p-adic valuation, allowing negative
/// valuations: the value is unit * p^val.
#[derive(Debug, Clone)]
pub struct Valued {
    /// Valuation; `None` means zero to the working precision.
    pub val: Option<i64>,
    /// Unit part at the target precision (meaningless when `val` is None).
    pub unit: GrEl,
}

impl Valued {
    /// Is the value divisible by p (i.e. val >= 1), as far as visible?
    /// Zero-to-precision counts as divisible.
    pub fn divisible_by_p(&self) -> bool {
        match self.val {
            None => true,
            Some(v) => v >= 1,
        }
    }
}

/// B_{1,theta} for a tame Dirichlet character, with exact valuation
/// bookkeeping. `theta` should be taken at its conductor for the
/// classical quantity; the formula is applied at theta's modulus f.
pub fn bernoulli1(theta: &DirichletCharacter) -> Result<Valued> {
    let ring = theta.ring();
    let p = ring.p();
    let m = ring.m();
    let f = theta.modulus().max(1);
    let vf = val_p(f, p);
    // work at raised precision so the division by f is exact
    let m_hi = m + vf + 1;
    let ring_hi = ring.with_precision(m_hi)?;
    let theta_hi =
        DirichletCharacter::from_exponents(&ring_hi, theta.group(), theta.exponents())?;
    let mut sum = ring_hi.zero();
    for a in 1..=f {
        let tv = theta_hi.eval(a % f.max(1));
        if ring_hi.is_zero(&tv) {
            continue;
        }
        sum = ring_hi.add(&sum, &ring_hi.scalar_mul(a % ring_hi.zpm().modulus(), &tv));
    }
    // divide by f = p^vf * f'
    let fp = f / p.pow(vf);
    let fp_inv = ring_hi.inv(&ring_hi.from_scalar(fp % ring_hi.zpm().modulus()))?;
    sum = ring_hi.mul(&sum, &fp_inv);
    let v_sum = ring_hi.val(&sum);
    if v_sum as i64 >= (m + vf) as i64 {
        // |B| <= p^{-(m)} cannot be distinguished from 0 at precision m
        return Ok(Valued { val: None, unit: ring.one() });
    }
    let (unit_hi, v) = ring_hi.unit_and_val(&sum);
    let val = v as i64 - vf as i64;
    Ok(Valued { val: Some(val), unit: ring.reduce_from(&unit_hi) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dirichlet::{char_ring_for_modulus, DirichletCharacter, UnitGroup};
    use crate::arith::zpm::Zpm;

    #[test]
    fn even_nontrivial_characters_vanish() {
        // a -> f - a kills the sum for even nontrivial theta
        for q in [5u64, 7, 13, 37, 65] {
            let zpm = Zpm::new(5, 2).unwrap();
            let ring = char_ring_for_modulus(zpm, q).unwrap();
            let group = UnitGroup::new(q).unwrap();
            for theta in DirichletCharacter::all(&ring, &group).unwrap() {
                if theta.is_even() && !theta.is_trivial() && theta.is_primitive() {
                    let b = bernoulli1(&theta).unwrap();
                    assert!(b.val.is_none(), "B_1 of even theta mod {q} should vanish");
                }
            }
        }
    }

    #[test]
    fn p5_omega_is_a_unit() {
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let omega = DirichletCharacter::teichmuller(&ring).unwrap();
        let b = bernoulli1(&omega).unwrap();
        assert_eq!(b.val, Some(0));
    }

    #[test]
    fn p5_omega_inverse_has_valuation_minus_one() {
        // theta = omega^{-1} = omega^3: the 1/f loss is genuine
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let omega = DirichletCharacter::teichmuller(&ring).unwrap();
        let b = bernoulli1(&omega.pow(3)).unwrap();
        assert_eq!(b.val, Some(-1));
    }

    #[test]
    fn p37_irregular_index() {
        // v_37(B_{1, omega^31}) = 1; cross-checked against the classical
        // Bernoulli number via the Kummer congruence in tests/oracles.
        let zpm = Zpm::new(37, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 37).unwrap();
        let omega = DirichletCharacter::teichmuller(&ring).unwrap();
        let b = bernoulli1(&omega.pow(31)).unwrap();
        assert_eq!(b.val, Some(1));
        // and all the other odd exponents are units
        for k in (1..36).step_by(2) {
            if k == 31 {
                continue;
            }
            let b = bernoulli1(&omega.pow(k)).unwrap();
            if k == 35 {
                // omega^{-1}: valuation -1
                assert_eq!(b.val, Some(-1), "k={k}");
            } else {
                assert_eq!(b.val, Some(0), "k={k}");
            }
        }
    }
}
