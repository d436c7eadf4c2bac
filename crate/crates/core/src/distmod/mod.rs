//! The universal distribution module of cyclotomic numbers at level
//! N p^r: formal symbols g(d, i) standing for 1 - zeta_d^i (d | N p^r,
//! d > 1, i nonzero mod d), modulo the distribution relation
//! g(d, i) = sum_k g(D, i + k d) for d | D and the sign relation
//! g(d, -i) = g(d, i).
//!
//! Normal forms push all mass to the maximal modulus and fold signs, so
//! the normal-form space is free on the folded top-level classes; the
//! unit elements eta and alpha and their comparison identities live here.

use crate::arith::arith_char::ArithmeticCharacter;
use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::group_ring::StarGroupRingElem;
use crate::arith::{divisors, euler_phi, gcd, moebius, prime_divisors, val_p};
use crate::error::Error;
use crate::Result;
use std::collections::BTreeMap;

/// A formal W-combination of symbols g(d, i).
#[derive(Debug, Clone, PartialEq)]
pub struct DistModElement {
    /// The ambient level N p^r (maximal modulus).
    pub level: u64,
    pub coeffs: BTreeMap<(u64, u64), GrEl>,
}

impl DistModElement {
    pub fn zero(level: u64) -> Self {
        DistModElement { level, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, w: &GaloisRing, d: u64, i: u64, c: &GrEl) -> Result<()> {
        if d <= 1 || self.level % d != 0 {
            return Err(Error::domain(format!("modulus {d} invalid at level {}", self.level)));
        }
        let i = i % d;
        if i == 0 {
            return Err(Error::domain("zero index symbol is excluded".to_string()));
        }
        let e = self.coeffs.entry((d, i)).or_insert_with(|| w.zero());
        *e = w.add(e, c);
        Ok(())
    }

    pub fn add(&self, w: &GaloisRing, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            let e = out.coeffs.entry(k).or_insert_with(|| w.zero());
            *e = w.add(e, c);
        }
        out
    }

    pub fn scale(&self, w: &GaloisRing, c: &GrEl) -> Self {
        DistModElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, w.mul(c, v))).collect(),
        }
    }

    pub fn neg(&self, w: &GaloisRing) -> Self {
        DistModElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, w.neg(v))).collect(),
        }
    }

    pub fn sub(&self, w: &GaloisRing, other: &Self) -> Self {
        self.add(w, &other.neg(w))
    }

    /// Normal form: push every symbol to the maximal modulus via the
    /// distribution relation, then fold the sign i ~ -i. Idempotent.
    pub fn normal_form(&self, w: &GaloisRing) -> Self {
        let lev = self.level;
        let mut out: BTreeMap<(u64, u64), GrEl> = BTreeMap::new();
        for (&(d, i), c) in &self.coeffs {
            if w.is_zero(c) {
                continue;
            }
            let e = lev / d;
            for k in 0..e {
                let j = (i + k * d) % lev;
                // j = 0 cannot occur: i != 0 mod d and j = i mod d
                debug_assert!(j != 0);
                let jf = j.min(lev - j);
                let slot = out.entry((lev, jf)).or_insert_with(|| w.zero());
                *slot = w.add(slot, c);
            }
        }
        out.retain(|_, c| !w.is_zero(c));
        DistModElement { level: lev, coeffs: out }
    }

    /// Coefficientwise congruence of normal forms at target precision.
    pub fn eq_mod(&self, w: &GaloisRing, other: &Self, m_target: u32) -> bool {
        let a = self.normal_form(w);
        let b = other.normal_form(w);
        let modulus = w.p().pow(m_target);
        let keys: std::collections::BTreeSet<_> =
            a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
        keys.into_iter().all(|k| {
            let zero = w.zero();
            let x = a.coeffs.get(&k).unwrap_or(&zero);
            let y = b.coeffs.get(&k).unwrap_or(&zero);
            x.iter().zip(y.iter()).all(|(&cx, &cy)| cx % modulus == cy % modulus)
        })
    }

    pub fn is_zero_mod(&self, w: &GaloisRing, m_target: u32) -> bool {
        self.eq_mod(w, &Self::zero(self.level), m_target)
    }
}

/// eta^psi_{M,r,t} = prod_{(i,M)=1, 0<i<Np^r} g(Np^r, i)^{psi kappa^{t-1}(i)}.
pub fn build_eta(
    w: &GaloisRing,
    level: u64,
    m_div: u64,
    psi: &DirichletCharacter,
    t: i64,
) -> Result<DistModElement> {
    let chi = ArithmeticCharacter::new(psi.clone(), t - 1);
    let mut out = DistModElement::zero(level);
    for i in 1..level {
        if gcd(i, m_div) != 1 {
            continue;
        }
        let c = chi.eval_residue(i, level);
        if !w.is_zero(&c) {
            out.add_term(w, level, i, &c)?;
        }
    }
    Ok(out)
}

/// alpha^{Q,psi}_{r,t} = prod_{(i,Np)=1, 0<i<Np^r} g(Qp^r, i)^{psi kappa^{t-1}(i)}.
pub fn build_alpha(
    w: &GaloisRing,
    level: u64,
    np: u64,
    q_div: u64,
    p: u64,
    r: u32,
    psi: &DirichletCharacter,
    t: i64,
) -> Result<DistModElement> {
    let chi = ArithmeticCharacter::new(psi.clone(), t - 1);
    let qpr = q_div * p.pow(r);
    let mut out = DistModElement::zero(level);
    for i in 1..level {
        if gcd(i, np) != 1 {
            continue;
        }
        let c = chi.eval_residue(i, level);
        if !w.is_zero(&c) {
            out.add_term(w, qpr, i % qpr, &c)?;
        }
    }
    Ok(out)
}

/// Effective precision at which the Euler-factor identity (part a) is
/// exact at this finite level.
pub fn compare_units_a_exactness(
    w: &GaloisRing,
    np: u64,
    p: u64,
    r: u32,
    m_div: u64,
    psi: &DirichletCharacter,
    t: i64,
) -> u32 {
    let chi = ArithmeticCharacter::new(psi.clone(), t - 1);
    let mut m_eff = u32::MAX;
    for d in divisors(np) {
        if d == 1 || moebius(d) == 0 || gcd(d, m_div) != 1 {
            continue;
        }
        let value = chi.eval_i64(d as i64);
        if w.is_zero(&value) {
            continue;
        }
        let vp_d = val_p(d, p);
        // the claim-one congruence loses p^(r - v_p(d)) unless psi's
        // period divides (N/gcd(d,N)) p^(r - v_p(d)) and t = 1
        let period = psi.modulus();
        let dp = d / p.pow(vp_d);
        let level_over = np / p * p.pow(r) / dp / p.pow(vp_d);
        let period_ok = level_over % period == 0;
        let guarantee = if !period_ok {
            w.val(&value)
        } else if t == 1 {
            u32::MAX
        } else {
            w.val(&value) + r - vp_d
        };
        m_eff = m_eff.min(guarantee);
    }
    m_eff
}

/// Outcome of a comparison at an effective precision.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitCompareOutcome {
    Pass { effective_precision: u32 },
    Fail { effective_precision: u32 },
    Skipped(String),
}

/// Part a: alpha^psi = eta_M^psi scaled by
/// prod_{l | Np, l not dividing M} (1 - psi kappa^{t-1}(l)).
pub fn verify_compare_units_a(
    w: &GaloisRing,
    n: u64,
    p: u64,
    r: u32,
    m_div: u64,
    psi: &DirichletCharacter,
    t: i64,
    m_target: u32,
) -> Result<UnitCompareOutcome> {
    let np = n * p;
    let level = n * p.pow(r);
    if np % m_div != 0 {
        return Err(Error::domain(format!("M = {m_div} must divide Np = {np}")));
    }
    let m_eff = compare_units_a_exactness(w, np, p, r, m_div, psi, t).min(m_target);
    if m_eff == 0 {
        return Ok(UnitCompareOutcome::Skipped(
            "no precision is guaranteed at this level".to_string(),
        ));
    }
    let alpha = build_alpha(w, level, np, n, p, r, psi, t)?;
    let eta = build_eta(w, level, m_div, psi, t)?;
    let chi = ArithmeticCharacter::new(psi.clone(), t - 1);
    let mut factor = w.one();
    for l in prime_divisors(np) {
        if m_div % l == 0 {
            continue;
        }
        factor = w.mul(&factor, &w.sub(&w.one(), &chi.eval_i64(l as i64)));
    }
    let rhs = eta.scale(w, &factor);
    if alpha.eq_mod(w, &rhs, m_eff) {
        Ok(UnitCompareOutcome::Pass { effective_precision: m_eff })
    } else {
        Ok(UnitCompareOutcome::Fail { effective_precision: m_eff })
    }
}

/// Part b: alpha^psi = alpha^{Q,psi} scaled by
/// (phi(Q)/phi(N)) prod_{l | N, l not dividing Q} (1 - psi kappa^{t-1}(l)),
/// under the hypothesis f_psi | Q.
#[allow(clippy::too_many_arguments)]
pub fn verify_compare_units_b(
    w: &GaloisRing,
    n: u64,
    p: u64,
    r: u32,
    q_div: u64,
    psi: &DirichletCharacter,
    t: i64,
    m_target: u32,
) -> Result<UnitCompareOutcome> {
    let np = n * p;
    let level = n * p.pow(r);
    if n % q_div != 0 {
        return Err(Error::domain(format!("Q = {q_div} must divide N = {n}")));
    }
    let f_psi = {
        let mut f = psi.conductor();
        while f % p == 0 {
            f /= p;
        }
        f
    };
    if q_div % f_psi != 0 {
        return Ok(UnitCompareOutcome::Skipped(format!(
            "f_psi = {f_psi} does not divide Q = {q_div}"
        )));
    }
    let m_eff = if t == 1 { m_target } else { m_target.min(r) };
    if m_eff == 0 {
        return Ok(UnitCompareOutcome::Skipped("no precision at this level".to_string()));
    }
    let alpha_full = build_alpha(w, level, np, n, p, r, psi, t)?;
    let alpha_q = build_alpha(w, level, np, q_div, p, r, psi, t)?;
    let chi = ArithmeticCharacter::new(psi.clone(), t - 1);
    let mut factor = w.mul(
        &w.from_scalar(euler_phi(q_div) % w.zpm().modulus()),
        &w.inv(&w.from_scalar(euler_phi(n) % w.zpm().modulus()))?,
    );
    for l in prime_divisors(n) {
        if q_div % l == 0 {
            continue;
        }
        factor = w.mul(&factor, &w.sub(&w.one(), &chi.eval_i64(l as i64)));
    }
    let rhs = alpha_q.scale(w, &factor);
    if alpha_full.eq_mod(w, &rhs, m_eff) {
        Ok(UnitCompareOutcome::Pass { effective_precision: m_eff })
    } else {
        Ok(UnitCompareOutcome::Fail { effective_precision: m_eff })
    }
}

/// The Moebius sieve identity in the star group ring:
/// sum_{d | Np, (d,M)=1} mu(d) sum_{(i,M)=1, i < Np^r/d} [d i] = sum_{(i,Np)=1} [i].
pub fn mobius_sieve_check(w: &GaloisRing, n: u64, p: u64, r: u32, m_div: u64) -> bool {
    let np = n * p;
    let level = n * p.pow(r);
    let mut lhs = StarGroupRingElem::zero(w, level);
    for d in divisors(np) {
        let mu = moebius(d);
        if mu == 0 || gcd(d, m_div) != 1 {
            continue;
        }
        let c = w.from_i64(mu);
        for i in 1..(level / d) {
            if gcd(i, m_div) != 1 {
                continue;
            }
            lhs.add_at(w, d * i, &c);
        }
    }
    let mut rhs = StarGroupRingElem::zero(w, level);
    for i in 1..level {
        if gcd(i, np) == 1 {
            rhs.add_at(w, i, &w.one());
        }
    }
    lhs == rhs
}

/// A linear functional on the normal-form space at one level, stored on
/// the folded top-level classes i ~ -i.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    pub level: u64,
    /// values[i] for 1 <= i <= level/2.
    values: Vec<GrEl>,
}

impl DualFunctional {
    /// Construct from values on the folded top-level basis.
    pub fn from_basis_values(level: u64, values: Vec<GrEl>) -> Result<Self> {
        if values.len() != (level / 2) as usize {
            return Err(Error::domain("wrong number of functional values".to_string()));
        }
        Ok(DualFunctional { level, values })
    }

    /// Construct from raw values on all symbols (d, i); validates the
    /// distribution and sign relations and reports a witness on failure.
    pub fn from_raw_values(
        w: &GaloisRing,
        level: u64,
        raw: &BTreeMap<(u64, u64), GrEl>,
    ) -> Result<Self> {
        let half = (level / 2) as usize;
        let mut values = vec![w.zero(); half];
        for i in 1..=level / 2 {
            if let Some(v) = raw.get(&(level, i)) {
                values[(i - 1) as usize] = v.clone();
            }
        }
        let fun = DualFunctional { level, values };
        for (&(d, i), v) in raw {
            if d == level {
                // sign relation g(level, i) = g(level, -i)
                let folded = i.min(level - i);
                let expect = raw.get(&(level, folded)).cloned().unwrap_or_else(|| w.zero());
                if *v != expect && i != folded {
                    return Err(Error::domain(format!(
                        "sign relation violated at top-level index {i}"
                    )));
                }
                continue;
            }
            // distribution relation: value must equal the pushed sum
            let mut elem = DistModElement::zero(level);
            elem.add_term(w, d, i, &w.one())?;
            let expect = fun.eval(w, &elem);
            if expect != *v {
                return Err(Error::domain(format!(
                    "distribution relation violated at g({d}, {i})"
                )));
            }
        }
        Ok(fun)
    }

    pub fn eval(&self, w: &GaloisRing, x: &DistModElement) -> GrEl {
        let nf = x.normal_form(w);
        let mut acc = w.zero();
        for (&(d, i), c) in &nf.coeffs {
            debug_assert_eq!(d, self.level);
            let idx = (i.min(self.level - i) - 1) as usize;
            acc = w.add(&acc, &w.mul(c, &self.values[idx]));
        }
        acc
    }

    /// The functional induced at a lower level through the distribution
    /// embedding.
    pub fn restrict_to_level(&self, w: &GaloisRing, lower: u64) -> Result<DualFunctional> {
        if self.level % lower != 0 || lower % 2 == 0 {
            return Err(Error::domain("invalid restriction level".to_string()));
        }
        let half = (lower / 2) as usize;
        let mut values = vec![w.zero(); half];
        for i in 1..=lower / 2 {
            let mut elem = DistModElement::zero(self.level);
            elem.add_term(w, lower, i, &w.one())?;
            values[(i - 1) as usize] = self.eval(w, &elem);
        }
        Ok(DualFunctional { level: lower, values })
    }

    /// The dual pushforward sum_i phi(g(level, i)) [i] in the star ring.
    pub fn pushforward(&self, w: &GaloisRing) -> StarGroupRingElem {
        let mut out = StarGroupRingElem::zero(w, self.level);
        for i in 1..self.level {
            let idx = (i.min(self.level - i) - 1) as usize;
            out.set(i, self.values[idx].clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dirichlet::char_ring_for_modulus;
    use crate::arith::zpm::Zpm;

    fn ring5() -> GaloisRing {
        char_ring_for_modulus(Zpm::new(5, 3).unwrap(), 5).unwrap()
    }

    #[test]
    fn normal_form_idempotent_and_relation_complete() {
        let w = ring5();
        let level = 25u64;
        // g(5, i) - sum_k g(25, i + 5k) normal-forms to zero
        for i in 1..5u64 {
            let mut x = DistModElement::zero(level);
            x.add_term(&w, 5, i, &w.one()).unwrap();
            for k in 0..5u64 {
                x.add_term(&w, 25, i + 5 * k, &w.from_i64(-1)).unwrap();
            }
            assert!(x.is_zero_mod(&w, 3));
        }
        // idempotency
        let mut y = DistModElement::zero(level);
        y.add_term(&w, 5, 2, &w.from_scalar(3)).unwrap();
        y.add_term(&w, 25, 7, &w.one()).unwrap();
        let n1 = y.normal_form(&w);
        let n2 = n1.normal_form(&w);
        assert_eq!(n1, n2);
        // sign relation: g(25, 3) = g(25, 22)
        let mut a = DistModElement::zero(level);
        a.add_term(&w, 25, 3, &w.one()).unwrap();
        let mut b = DistModElement::zero(level);
        b.add_term(&w, 25, 22, &w.one()).unwrap();
        assert!(a.eq_mod(&w, &b, 3));
    }

    #[test]
    fn mobius_sieve_at_25() {
        let w = ring5();
        assert!(mobius_sieve_check(&w, 1, 5, 2, 1));
        let w65 = char_ring_for_modulus(Zpm::new(5, 2).unwrap(), 65).unwrap();
        assert!(mobius_sieve_check(&w65, 13, 5, 1, 1));
        assert!(mobius_sieve_check(&w65, 13, 5, 1, 13));
    }

    #[test]
    fn trivial_psi_eta_has_unit_exponents() {
        let w = ring5();
        let group1 = crate::arith::dirichlet::UnitGroup::new(1).unwrap();
        let psi = DirichletCharacter::trivial(&w, &group1);
        let eta = build_eta(&w, 25, 25, &psi, 1).unwrap();
        // exponents all 1 on units mod 25
        for i in 1..25u64 {
            if gcd(i, 25) == 1 {
                assert!(w.is_one(eta.coeffs.get(&(25, i)).unwrap()));
            } else {
                assert!(!eta.coeffs.contains_key(&(25, i)));
            }
        }
    }

    #[test]
    fn compare_units_a_euler_factor_instance() {
        // p=5, N=1, M=1: alpha = eta_1 ^ (1 - psi kappa^{t-1}(5));
        // exact mod p^(r-1) for t != 1, so use r = 3, target 2
        let zpm = Zpm::new(5, 2).unwrap();
        let w = char_ring_for_modulus(zpm, 5).unwrap();
        let omega = DirichletCharacter::teichmuller(&w).unwrap();
        let psi = omega.pow(2); // even character
        let out = verify_compare_units_a(&w, 1, 5, 3, 1, &psi, 2, 2).unwrap();
        assert_eq!(out, UnitCompareOutcome::Pass { effective_precision: 2 });
        // and the trivial case M = Np is an identity at any precision
        let out2 = verify_compare_units_a(&w, 1, 5, 2, 5, &psi, 3, 2).unwrap();
        assert_eq!(out2, UnitCompareOutcome::Pass { effective_precision: 2 });
    }

    #[test]
    fn dual_functional_relations_and_pushforward() {
        let w = ring5();
        let level = 25u64;
        // a functional dual to one maximal-modulus class
        let mut values = vec![w.zero(); 12];
        values[4] = w.one(); // phi(g(25, 5-folded... index 5)) = 1
        let phi = DualFunctional::from_basis_values(level, values).unwrap();
        let push = phi.pushforward(&w);
        // support: classes 5 and 20
        for i in 1..25u64 {
            let expect = i == 5 || i == 20;
            assert_eq!(!w.is_zero(&push.coeffs[i as usize]), expect, "i={i}");
        }
        // raw-value validation catches a broken distribution relation
        let mut raw: BTreeMap<(u64, u64), GrEl> = BTreeMap::new();
        for i in 1..=12u64 {
            raw.insert((25, i), w.zero());
        }
        raw.insert((25, 5), w.one());
        raw.insert((5, 1), w.from_scalar(3)); // should be phi(sum) = 0
        assert!(DualFunctional::from_raw_values(&w, level, &raw).is_err());
    }

    #[test]
    fn cross_level_compatibility() {
        // pushforward of the level-25 functional restricted to level 5
        // agrees with the star-ring pushforward of the original
        let w = ring5();
        let mut values = Vec::new();
        for i in 1..=12u64 {
            values.push(w.from_scalar(i * i % 7 + 1));
        }
        let phi2 = DualFunctional::from_basis_values(25, values).unwrap();
        let phi1 = phi2.restrict_to_level(&w, 5).unwrap();
        let lhs = phi2.pushforward(&w).pushforward(&w, 5).unwrap();
        let rhs = phi1.pushforward(&w);
        assert_eq!(lhs, rhs);
    }
}
