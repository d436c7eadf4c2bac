//! Group rings over residue classes: the unit-supported ring
//! W[(Z/M)^x] and the star module W[(Z/M)*] on all nonzero residues
//! with [0] = 0.

use crate::arith::arith_char::ArithmeticCharacter;
use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::{euler_phi, gcd};
use crate::error::Error;
use crate::Result;

/// Element of W[(Z/M)^x]; coefficients off the unit classes stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingElem {
    pub modulus: u64,
    pub coeffs: Vec<GrEl>,
}

impl GroupRingElem {
    pub fn zero(ring: &GaloisRing, modulus: u64) -> Self {
        GroupRingElem { modulus, coeffs: vec![ring.zero(); modulus as usize] }
    }

    pub fn basis(ring: &GaloisRing, modulus: u64, j: u64) -> Result<Self> {
        if gcd(j % modulus, modulus) != 1 {
            return Err(Error::domain(format!("[{j}] is not a unit class mod {modulus}")));
        }
        let mut e = Self::zero(ring, modulus);
        e.coeffs[(j % modulus) as usize] = ring.one();
        Ok(e)
    }

    pub fn add(&self, ring: &GaloisRing, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        GroupRingElem {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, ring: &GaloisRing, c: &GrEl) -> Self {
        GroupRingElem {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| ring.mul(c, a)).collect(),
        }
    }

    /// Group-ring product (convolution over unit classes).
    pub fn mul(&self, ring: &GaloisRing, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let mut out = Self::zero(ring, m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if ring.is_zero(b) {
                    continue;
                }
                let k = ((i as u64 * j as u64) % m) as usize;
                out.coeffs[k] = ring.add(&out.coeffs[k], &ring.mul(a, b));
            }
        }
        out
    }

    pub fn is_zero(&self, ring: &GaloisRing) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// The identity element [1].
    pub fn one(ring: &GaloisRing, modulus: u64) -> Self {
        Self::basis(ring, modulus, 1).expect("[1] exists")
    }
}

/// The idempotent eps_chi = (1/phi(M)) sum_i chi(i)^{-1} [i] in
/// W[(Z/M)^x], projecting onto the chi-eigenspace. Requires phi(M)
/// prime to p.
pub fn epsilon_idempotent(chi: &DirichletCharacter) -> Result<GroupRingElem> {
    let ring = chi.ring();
    let m = chi.modulus();
    let phi = euler_phi(m);
    let zpm = ring.zpm();
    if phi % zpm.p() == 0 {
        return Err(Error::domain(format!("phi({m}) is divisible by p; no idempotent")));
    }
    let phi_inv = ring.inv(&ring.from_scalar(phi % zpm.modulus()))?;
    let chi_inv = chi.inverse();
    let mut out = GroupRingElem::zero(ring, m);
    for i in chi.group().units() {
        out.coeffs[i as usize] = ring.mul(&phi_inv, &chi_inv.eval(i));
    }
    Ok(out)
}

/// Element of the star module W[(Z/M)*]: coefficients on all residues,
/// the class of 0 identified with 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StarGroupRingElem {
    pub modulus: u64,
    pub coeffs: Vec<GrEl>,
}

impl StarGroupRingElem {
    pub fn zero(ring: &GaloisRing, modulus: u64) -> Self {
        StarGroupRingElem { modulus, coeffs: vec![ring.zero(); modulus as usize] }
    }

    pub fn basis(ring: &GaloisRing, modulus: u64, j: u64) -> Self {
        let mut e = Self::zero(ring, modulus);
        let j = j % modulus;
        if j != 0 {
            e.coeffs[j as usize] = ring.one();
        }
        e
    }

    pub fn set(&mut self, j: u64, c: GrEl) {
        let j = (j % self.modulus) as usize;
        if j != 0 {
            self.coeffs[j] = c;
        }
    }

    pub fn add_at(&mut self, ring: &GaloisRing, j: u64, c: &GrEl) {
        let j = (j % self.modulus) as usize;
        if j != 0 {
            self.coeffs[j] = ring.add(&self.coeffs[j], c);
        }
    }

    pub fn add(&self, ring: &GaloisRing, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        StarGroupRingElem {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, ring: &GaloisRing, c: &GrEl) -> Self {
        StarGroupRingElem {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| ring.mul(c, a)).collect(),
        }
    }

    pub fn is_zero(&self, ring: &GaloisRing) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// Unit-group action: j * [i] = [ji].
    pub fn unit_translate(&self, ring: &GaloisRing, j: u64) -> Result<Self> {
        if gcd(j % self.modulus, self.modulus) != 1 {
            return Err(Error::domain("translation by a non-unit".to_string()));
        }
        let mut out = Self::zero(ring, self.modulus);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !ring.is_zero(c) {
                let k = (i as u64 * j) % self.modulus;
                out.coeffs[k as usize] = ring.add(&out.coeffs[k as usize], c);
            }
        }
        Ok(out)
    }

    /// Pushforward along Z/M -> Z/M' for M' | M: [j] -> [j mod M'],
    /// with classes hitting 0 mod M' discarded.
    pub fn pushforward(&self, ring: &GaloisRing, new_modulus: u64) -> Result<Self> {
        if self.modulus % new_modulus != 0 {
            return Err(Error::domain("pushforward target must divide the modulus".to_string()));
        }
        let mut out = Self::zero(ring, new_modulus);
        for (i, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let k = (i as u64 % new_modulus) as usize;
            if k != 0 {
                out.coeffs[k] = ring.add(&out.coeffs[k], c);
            }
        }
        Ok(out)
    }

    /// Specialization chi~: [j] -> chi(j), extended linearly. Rejects
    /// characters that do not kill [0] (trivial finite part with t = 0).
    pub fn specialize(&self, ring: &GaloisRing, chi: &ArithmeticCharacter) -> Result<GrEl> {
        if chi.finite_part().modulus() == 1 && chi.kappa_exponent() == 0 {
            return Err(Error::domain(
                "specialization character must vanish at 0 on the star module".to_string(),
            ));
        }
        let mut acc = ring.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let v = chi.eval_residue(j as u64, self.modulus);
            if !ring.is_zero(&v) {
                acc = ring.add(&acc, &ring.mul(c, &v));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dirichlet::{char_ring_for_modulus, UnitGroup};
    use crate::arith::zpm::Zpm;

    #[test]
    fn idempotents_decompose_unity() {
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let group = UnitGroup::new(5).unwrap();
        let chars = DirichletCharacter::all(&ring, &group).unwrap();
        let mut total = GroupRingElem::zero(&ring, 5);
        for chi in &chars {
            let e = epsilon_idempotent(chi).unwrap();
            // idempotency
            assert_eq!(e.mul(&ring, &e), e);
            total = total.add(&ring, &e);
        }
        assert_eq!(total, GroupRingElem::one(&ring, 5));
        // orthogonality of distinct idempotents
        let e0 = epsilon_idempotent(&chars[0]).unwrap();
        let e1 = epsilon_idempotent(&chars[1]).unwrap();
        assert!(e0.mul(&ring, &e1).is_zero(&ring));
    }

    #[test]
    fn epsilon_projects_to_eigenvalue() {
        // eps_chi * [a] = chi(a) * eps_chi
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 5).unwrap();
        let group = UnitGroup::new(5).unwrap();
        let omega = DirichletCharacter::teichmuller(&ring).unwrap();
        let e = epsilon_idempotent(&omega).unwrap();
        for a in group.units() {
            let ta = GroupRingElem::basis(&ring, 5, a).unwrap();
            let lhs = e.mul(&ring, &ta);
            let rhs = e.scale(&ring, &omega.eval(a));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_pushforward_kills_new_zero() {
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 65).unwrap();
        let x = StarGroupRingElem::basis(&ring, 65, 13);
        // 13 = 0 mod 13: dies
        let y = x.pushforward(&ring, 13).unwrap();
        assert!(y.is_zero(&ring));
        // but survives mod 5
        let z = x.pushforward(&ring, 5).unwrap();
        assert!(!z.is_zero(&ring));
    }

    #[test]
    fn specialization_basics() {
        let zpm = Zpm::new(5, 2).unwrap();
        let ring = char_ring_for_modulus(zpm, 25).unwrap();
        let _group5 = UnitGroup::new(5).unwrap();
        let kappa = ArithmeticCharacter::kappa_power(&ring, 1);
        let one = StarGroupRingElem::basis(&ring, 25, 1);
        assert!(ring.is_one(&one.specialize(&ring, &kappa).unwrap()));
        // off-support: finite part mod 5 vanishes on multiples of 5
        let omega = DirichletCharacter::teichmuller(&ring).unwrap();
        let chi = ArithmeticCharacter::new(omega, 0);
        let five = StarGroupRingElem::basis(&ring, 25, 5);
        assert!(ring.is_zero(&five.specialize(&ring, &chi).unwrap()));
        // kappa(5) = 5 keeps it visible
        assert_eq!(five.specialize(&ring, &kappa).unwrap(), ring.from_scalar(5));
    }
}
