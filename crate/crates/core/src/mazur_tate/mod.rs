//! Finite layers of the two-variable theta elements
//! sum_j U_p^{-r} xi_r(j:M) (x) [j]_r, their character specializations,
//! the diamond-relation quotients P_{alpha kappa^k}, and mechanical
//! verification of the distribution, functional-equation and comparison
//! identities.

use crate::arith::arith_char::ArithmeticCharacter;
use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::group_ring::StarGroupRingElem;
use crate::arith::{divisors, euler_phi, gcd, moebius, prime_divisors, val_p};
use crate::hecke::eisenstein::{cast_mat, cast_vec, QuotientStructure};
use crate::hecke::{OrdinaryLevel, ScaledVec};
use crate::linalg::dense::{Lin, Mat};
use crate::modcurve::operators::{diamond_matrix, u_composite};
use crate::par::Exec;
use crate::error::Error;
use crate::Result;

/// A W-coefficient vector with a power-of-p denominator and a validity
/// budget, mirroring [`ScaledVec`] over the character ring.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledWVec {
    pub denom: u32,
    pub valid: u32,
    pub vec: Vec<GrEl>,
}

impl ScaledWVec {
    pub fn zero(w: &GaloisRing, dim: usize) -> Self {
        ScaledWVec { denom: 0, valid: w.m(), vec: vec![w.zero(); dim] }
    }

    pub fn from_scaled(w: &GaloisRing, s: &ScaledVec) -> Self {
        ScaledWVec { denom: s.denom, valid: s.valid, vec: cast_vec(w, &s.vec) }
    }

    pub fn add(&self, w: &GaloisRing, other: &Self) -> Self {
        let d = self.denom.max(other.denom);
        let a = w.p_pow_u64((d - self.denom) as u64);
        let b = w.p_pow_u64((d - other.denom) as u64);
        let vec = self
            .vec
            .iter()
            .zip(&other.vec)
            .map(|(x, y)| w.add(&w.scalar_mul(a, x), &w.scalar_mul(b, y)))
            .collect();
        ScaledWVec { denom: d, valid: self.valid.min(other.valid), vec }
    }

    pub fn scale(&self, w: &GaloisRing, c: &GrEl) -> Self {
        ScaledWVec {
            denom: self.denom,
            valid: self.valid,
            vec: self.vec.iter().map(|x| w.mul(c, x)).collect(),
        }
    }

    pub fn neg(&self, w: &GaloisRing) -> Self {
        ScaledWVec {
            denom: self.denom,
            valid: self.valid,
            vec: self.vec.iter().map(|x| w.neg(x)).collect(),
        }
    }

    pub fn sub(&self, w: &GaloisRing, other: &Self) -> Self {
        self.add(w, &other.neg(w))
    }

    pub fn apply(&self, w: &GaloisRing, op: &Mat<GrEl>) -> Self {
        ScaledWVec { denom: self.denom, valid: self.valid, vec: Lin(w).matvec(op, &self.vec) }
    }

    /// Equality of the underlying values at target precision.
    pub fn eq_mod(&self, w: &GaloisRing, other: &Self, m_target: u32) -> Result<bool> {
        let d = self.denom.max(other.denom);
        let budget = self.valid.min(other.valid);
        if m_target > budget {
            return Err(Error::precision(format!(
                "comparison at p^{m_target} exceeds the valid budget {budget}"
            )));
        }
        if d + m_target > w.m() {
            return Err(Error::precision("storage precision exhausted by denominators".to_string()));
        }
        let a = w.p_pow_u64((d - self.denom) as u64);
        let b = w.p_pow_u64((d - other.denom) as u64);
        let modulus = w.p().pow(m_target + d);
        Ok(self.vec.iter().zip(&other.vec).all(|(x, y)| {
            let xs = w.scalar_mul(a, x);
            let ys = w.scalar_mul(b, y);
            xs.iter().zip(&ys).all(|(&cx, &cy)| cx % modulus == cy % modulus)
        }))
    }

    pub fn is_zero_mod(&self, w: &GaloisRing, m_target: u32) -> Result<bool> {
        let z = ScaledWVec::zero(w, self.vec.len());
        self.eq_mod(w, &z, m_target)
    }
}

/// Finite layer of a theta element: j -> U_p^{-r} xi_r(j:M) over the
/// star support ((j, M) = 1) or the unit support ((j, Np) = 1).
#[derive(Debug, Clone)]
pub struct MazurTateElement {
    /// Divisor M of N in the symbols (j : M).
    pub divisor: u64,
    pub star: bool,
    /// Level modulus N p^r.
    pub modulus: u64,
    /// Coefficients in cuspidal coordinates; None off the support.
    pub coeffs: Vec<Option<ScaledVec>>,
}

/// Build the level-r layer of the theta element.
pub fn theta_element(ol: &OrdinaryLevel, m_div: u64, star: bool) -> Result<MazurTateElement> {
    let level = ol.level;
    if level.n() % m_div != 0 {
        return Err(Error::domain(format!("divisor {m_div} does not divide N = {}", level.n())));
    }
    let modulus = level.modulus();
    let np = level.n() * level.p();
    let mut coeffs: Vec<Option<ScaledVec>> = vec![None; modulus as usize];
    for j in 1..modulus {
        let in_support = if star { gcd(j, m_div) == 1 } else { gcd(j, np) == 1 };
        if !in_support {
            continue;
        }
        let xi = ol.xi(j as i64, m_div as i64)?;
        coeffs[j as usize] = Some(ol.up_inv_pow(&xi, level.r()));
    }
    Ok(MazurTateElement { divisor: m_div, star, modulus, coeffs })
}

impl MazurTateElement {
    /// chi-tilde specialization: sum_j chi(j) coeff_j, in W coefficients.
    pub fn specialize(&self, ol: &OrdinaryLevel, chi: &ArithmeticCharacter) -> ScaledWVec {
        let w = chi.ring();
        let dim = ol.space.cuspidal().dim();
        let mut acc = ScaledWVec::zero(w, dim);
        for (j, c) in self.coeffs.iter().enumerate() {
            let Some(cv) = c else { continue };
            let val = chi.eval_residue(j as u64, self.modulus);
            if w.is_zero(&val) {
                continue;
            }
            let term = ScaledWVec::from_scaled(w, cv).scale(w, &val);
            acc = acc.add(w, &term);
        }
        acc
    }

    /// Pushforward to the lower level r-1 (coefficients through the
    /// level map, star classes through residue reduction).
    pub fn pushforward(
        &self,
        ol_hi: &OrdinaryLevel,
        ol_lo: &OrdinaryLevel,
        push_cusp: &Mat<u64>,
    ) -> Result<MazurTateElement> {
        let ring = ol_hi.ring();
        let lo_mod = ol_lo.level.modulus();
        let mut coeffs: Vec<Option<ScaledVec>> = vec![None; lo_mod as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            let Some(cv) = c else { continue };
            let jlo = (j as u64 % lo_mod) as usize;
            if jlo == 0 {
                continue; // star class [0] dies
            }
            let pushed = cv.apply(ring, push_cusp);
            coeffs[jlo] = Some(match &coeffs[jlo] {
                None => pushed,
                Some(prev) => prev.add(ring, &pushed),
            });
        }
        Ok(MazurTateElement {
            divisor: self.divisor,
            star: self.star,
            modulus: lo_mod,
            coeffs,
        })
    }

    /// The coefficients as a star-group-ring element with scalar entries
    /// given by one cuspidal coordinate (used in separation tests).
    pub fn coordinate_slice(&self, w: &GaloisRing, coord: usize) -> StarGroupRingElem {
        let mut out = StarGroupRingElem::zero(w, self.modulus);
        for (j, c) in self.coeffs.iter().enumerate() {
            if let Some(cv) = c {
                if cv.denom == 0 {
                    out.set(j as u64, w.from_scalar(cv.vec[coord]));
                }
            }
        }
        out
    }
}

/// The diamond-relation quotient P_{alpha kappa^k}: cuspidal coords
/// tensor W modulo (⟨a⟩ - alpha omega^{-2} kappa^{k-2}(a)) for a over
/// the unit group of the level.
pub struct DiamondQuotient {
    pub quotient: QuotientStructure,
    pub w: GaloisRing,
    dim: usize,
}

pub fn diamond_quotient(
    ol: &OrdinaryLevel,
    alpha: &DirichletCharacter,
    k: i64,
) -> Result<DiamondQuotient> {
    let w = alpha.ring().clone();
    let lw = Lin(&w);
    let ring = ol.ring();
    let level = ol.level;
    let np = level.n() * level.p();
    if alpha.modulus() != np && alpha.modulus() != 1 {
        return Err(Error::config("alpha must be a tame character mod Np".to_string()));
    }
    let omega = DirichletCharacter::teichmuller(&w)?.extend_to(np)?;
    let target_finite = alpha.extend_to(np)?.mul(&omega.pow(-2))?;
    let target = ArithmeticCharacter::new(target_finite, k - 2);
    let dim = ol.space.cuspidal().dim();
    let group = crate::arith::dirichlet::UnitGroup::new(level.modulus())?;
    let mut rel_cols: Vec<Vec<GrEl>> = Vec::new();
    for &(g, _) in group.generators() {
        let dmat = diamond_matrix(&ol.space, g)?;
        let dc = ol.space.cuspidal().restrict(ring, &dmat)?;
        let val = target.eval_residue(g, level.modulus());
        let mut rel = cast_mat(&w, &dc);
        for i in 0..dim {
            let slot = rel.at_mut(i, i);
            *slot = w.sub(slot, &val);
        }
        for j in 0..dim {
            rel_cols.push(rel.col(j));
        }
    }
    let relations =
        if rel_cols.is_empty() { lw.zeros(dim, 0) } else { Mat::from_cols(rel_cols) };
    let quotient = QuotientStructure::new(&w, dim, &relations);
    Ok(DiamondQuotient { quotient, w, dim })
}

impl DiamondQuotient {
    /// Canonical representative of the class of a scaled W-vector.
    pub fn reduce(&self, v: &ScaledWVec) -> ScaledWVec {
        ScaledWVec {
            denom: v.denom,
            valid: v.valid,
            vec: self.quotient.reduce(&v.vec),
        }
    }

    pub fn zero(&self) -> ScaledWVec {
        ScaledWVec::zero(&self.w, self.dim)
    }
}

/// An L-value layer: P_{alpha kappa^k} (chi kappa^{s-1})~ (theta elem).
pub fn specialize_l(
    ol: &OrdinaryLevel,
    theta_elem: &MazurTateElement,
    dq: &DiamondQuotient,
    chi: &DirichletCharacter,
    s: i64,
) -> ScaledWVec {
    let chi_s = ArithmeticCharacter::new(chi.clone(), s - 1);
    let spec = theta_elem.specialize(ol, &chi_s);
    dq.reduce(&spec)
}

/// Outcome of one verified case.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseOutcome {
    Pass,
    Fail(String),
    SkippedHypothesis(String),
}

/// Report for a family of cases.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub passes: usize,
    pub failures: Vec<String>,
    pub skipped: Vec<String>,
}

impl VerifyReport {
    pub fn record(&mut self, label: String, outcome: CaseOutcome) {
        match outcome {
            CaseOutcome::Pass => self.passes += 1,
            CaseOutcome::Fail(why) => self.failures.push(format!("{label}: {why}")),
            CaseOutcome::SkippedHypothesis(why) => self.skipped.push(format!("{label}: {why}")),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive check of the Hecke aggregation identity
/// U_t xi_r(t u : v) = sum_k xi_r(u + k Q : v), Q = N p^r / t,
/// over all valid (t, u, v) at the level.
pub fn verify_distribution(ol: &OrdinaryLevel, exec: Exec) -> Result<VerifyReport> {
    let ring = ol.ring();
    let level = ol.level;
    let modulus = level.modulus();
    let np = level.n() * level.p();
    let m_target = ol.m_target;
    let mut report = VerifyReport::default();
    // xi cache over residue pairs
    let mut cache: Vec<Option<ScaledVec>> = vec![None; (modulus * modulus) as usize];
    let mut xi_cached = |ol: &OrdinaryLevel, u: u64, v: u64| -> Result<ScaledVec> {
        let key = (u * modulus + v) as usize;
        if cache[key].is_none() {
            cache[key] = Some(ol.xi(u as i64, v as i64)?);
        }
        Ok(cache[key].clone().unwrap())
    };
    let _ = exec;
    for t in divisors(modulus) {
        if t == 1 {
            continue;
        }
        let q = modulus / t;
        let ut = u_composite(&ol.space, t, exec)?;
        let ut_cusp = ol.space.cuspidal().restrict(ring, &ut)?;
        for u in 1..modulus {
            for v in 1..modulus {
                // (t u, v, Np) = 1 as integers
                if gcd(gcd(t * u, v), np) != 1 {
                    continue;
                }
                let lhs_sym = xi_cached(ol, (t * u) % modulus, v)?;
                let lhs = lhs_sym.apply(ring, &ut_cusp);
                let mut rhs = ScaledVec::zero(ring, lhs.dim());
                for k in 0..t {
                    let uk = (u + k * q) % modulus;
                    rhs = rhs.add(ring, &xi_cached(ol, uk, v)?);
                }
                match lhs.eq_mod(ring, &rhs, m_target) {
                    Ok(true) => report.passes += 1,
                    Ok(false) => report
                        .failures
                        .push(format!("t={t} u={u} v={v}: aggregation identity failed")),
                    Err(e) => report.failures.push(format!("t={t} u={u} v={v}: {e}")),
                }
            }
        }
    }
    Ok(report)
}

/// Exhaustive check of the diamond-inversion identity
/// P(xi_r(j:1)) = -alpha^{-1} omega^2 kappa^{2-k}(j) P(xi_r(-j^{-1}:1))
/// for all units j, at one (alpha, k).
pub fn verify_diamond_inversion(
    ol: &OrdinaryLevel,
    alpha: &DirichletCharacter,
    k: i64,
) -> Result<VerifyReport> {
    let w = alpha.ring().clone();
    let level = ol.level;
    let modulus = level.modulus();
    let np = level.n() * level.p();
    let m_target = ol.m_target;
    let dq = diamond_quotient(ol, alpha, k)?;
    let omega = DirichletCharacter::teichmuller(&w)?.extend_to(np)?;
    let factor_char =
        ArithmeticCharacter::new(alpha.extend_to(np)?.inverse().mul(&omega.pow(2))?, 2 - k);
    let mut report = VerifyReport::default();
    for j in 1..modulus {
        if gcd(j, modulus) != 1 {
            continue;
        }
        let ji = mod_inverse(j, modulus);
        let lhs = dq.reduce(&ScaledWVec::from_scaled(&w, &ol.xi(j as i64, 1)?));
        let other = ol.xi(-(ji as i64), 1)?;
        let factor = w.neg(&factor_char.eval_residue(j, modulus));
        let rhs = dq.reduce(&ScaledWVec::from_scaled(&w, &other).scale(&w, &factor));
        match lhs.eq_mod(&w, &rhs, m_target) {
            Ok(true) => report.passes += 1,
            Ok(false) => report.failures.push(format!("j={j}: diamond inversion failed")),
            Err(e) => report.failures.push(format!("j={j}: {e}")),
        }
    }
    Ok(report)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (_, x, _) = crate::arith::egcd(a as i64, m as i64);
    x.rem_euclid(m as i64) as u64
}

/// The assembled functional equation at one grid point:
/// L(alpha, k, chi, s) = -chi(-1) L(alpha, k, alpha chi^{-1} omega^{-2}, k - s).
pub fn verify_functional_equation_case(
    ol: &OrdinaryLevel,
    theta_full: &MazurTateElement,
    alpha: &DirichletCharacter,
    k: i64,
    chi: &DirichletCharacter,
    s: i64,
) -> Result<CaseOutcome> {
    let w = alpha.ring().clone();
    let np = ol.level.n() * ol.level.p();
    let m_target = ol.m_target;
    let dq = diamond_quotient(ol, alpha, k)?;
    let lhs = specialize_l(ol, theta_full, &dq, &chi.extend_to(np)?, s);
    let omega = DirichletCharacter::teichmuller(&w)?.extend_to(np)?;
    let chi2 = alpha.extend_to(np)?.mul(&chi.extend_to(np)?.inverse())?.mul(&omega.pow(-2))?;
    let rhs_raw = specialize_l(ol, theta_full, &dq, &chi2, k - s);
    let sign = chi.eval_i64(-1);
    let rhs = rhs_raw.scale(&w, &w.neg(&sign));
    match lhs.eq_mod(&w, &rhs, m_target)? {
        true => Ok(CaseOutcome::Pass),
        false => Ok(CaseOutcome::Fail("functional equation mismatch".to_string())),
    }
}

/// Effective precision at which the full-vs-star comparison is exact at
/// this finite level for the specialization character chi kappa^{s-1}.
pub fn compare_exactness(
    ol: &OrdinaryLevel,
    chi: &DirichletCharacter,
    s: i64,
    m_div: u64,
) -> u32 {
    let w = chi.ring();
    let level = ol.level;
    let np = level.n() * level.p();
    let r = level.r();
    let chi_s = ArithmeticCharacter::new(chi.clone(), s - 1);
    let mut m_eff = u32::MAX;
    for d in divisors(np) {
        if d == 1 || moebius(d) == 0 || gcd(d, m_div) != 1 {
            continue;
        }
        let value = chi_s.eval_i64(d as i64);
        if w.is_zero(&value) {
            continue; // the term vanishes identically
        }
        let val = w.val(&value);
        // period condition for the finite part
        let period = chi.modulus();
        let level_over_d = np as u128 * level.p().pow(r - 1) as u128 / d as u128;
        let period_ok = level_over_d % period as u128 == 0;
        let guarantee = if !period_ok {
            val
        } else if s == 1 {
            u32::MAX
        } else {
            val + r - val_p(d, level.p())
        };
        m_eff = m_eff.min(guarantee);
    }
    m_eff
}

/// Lemma-grade comparison of the full and star theta layers:
/// U_D chi~(theta) = prod_{l | Np, l not dividing M} (U_l - chi kappa^{s-1}(l)) chi~(theta*).
pub fn verify_compare_full_star(
    ol: &OrdinaryLevel,
    theta: &MazurTateElement,
    theta_star: &MazurTateElement,
    chi: &DirichletCharacter,
    s: i64,
    exec: Exec,
) -> Result<CaseOutcome> {
    let w = chi.ring().clone();
    let ring = ol.ring();
    let level = ol.level;
    let np = level.n() * level.p();
    let m_div = theta.divisor;
    let m_target = ol.m_target;
    let m_eff = compare_exactness(ol, chi, s, m_div);
    if m_eff < m_target {
        return Ok(CaseOutcome::SkippedHypothesis(format!(
            "identity only guaranteed mod p^{m_eff} at this level"
        )));
    }
    let chi_s = ArithmeticCharacter::new(chi.extend_to(np)?, s - 1);
    let d_prod: u64 = prime_divisors(np).into_iter().filter(|&l| m_div % l != 0).product();
    let ud = u_composite(&ol.space, d_prod, exec)?;
    let ud_cusp = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ud)?);
    let lhs = theta.specialize(ol, &chi_s).apply(&w, &ud_cusp);
    let mut rhs = theta_star.specialize(ol, &chi_s);
    for l in prime_divisors(np) {
        if m_div % l == 0 {
            continue;
        }
        let ul = u_composite(&ol.space, l, exec)?;
        let mut ul_w = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ul)?);
        let val = chi_s.eval_i64(l as i64);
        for i in 0..ul_w.rows {
            let slot = ul_w.at_mut(i, i);
            *slot = w.sub(slot, &val);
        }
        rhs = rhs.apply(&w, &ul_w);
    }
    match lhs.eq_mod(&w, &rhs, m_target)? {
        true => Ok(CaseOutcome::Pass),
        false => Ok(CaseOutcome::Fail("full-vs-star comparison failed".to_string())),
    }
}

/// The specialized comparison (same identity after P_{alpha kappa^k}).
#[allow(clippy::too_many_arguments)]
pub fn verify_compare_specialized(
    ol: &OrdinaryLevel,
    theta: &MazurTateElement,
    theta_star: &MazurTateElement,
    alpha: &DirichletCharacter,
    k: i64,
    chi: &DirichletCharacter,
    s: i64,
    exec: Exec,
) -> Result<CaseOutcome> {
    let w = chi.ring().clone();
    let ring = ol.ring();
    let level = ol.level;
    let np = level.n() * level.p();
    let m_div = theta.divisor;
    let m_target = ol.m_target;
    let m_eff = compare_exactness(ol, chi, s, m_div);
    if m_eff < m_target {
        return Ok(CaseOutcome::SkippedHypothesis(format!(
            "identity only guaranteed mod p^{m_eff} at this level"
        )));
    }
    let dq = diamond_quotient(ol, alpha, k)?;
    let chi_s = ArithmeticCharacter::new(chi.extend_to(np)?, s - 1);
    let d_prod: u64 = prime_divisors(np).into_iter().filter(|&l| m_div % l != 0).product();
    let ud = u_composite(&ol.space, d_prod, exec)?;
    let ud_cusp = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ud)?);
    let lhs = dq.reduce(&theta.specialize(ol, &chi_s).apply(&w, &ud_cusp));
    let mut rhs = theta_star.specialize(ol, &chi_s);
    for l in prime_divisors(np) {
        if m_div % l == 0 {
            continue;
        }
        let ul = u_composite(&ol.space, l, exec)?;
        let mut ul_w = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ul)?);
        let val = chi_s.eval_i64(l as i64);
        for i in 0..ul_w.rows {
            let slot = ul_w.at_mut(i, i);
            *slot = w.sub(slot, &val);
        }
        rhs = rhs.apply(&w, &ul_w);
    }
    let rhs = dq.reduce(&rhs);
    match lhs.eq_mod(&w, &rhs, m_target)? {
        true => Ok(CaseOutcome::Pass),
        false => Ok(CaseOutcome::Fail("specialized comparison failed".to_string())),
    }
}

/// The divisor-level comparison: with Q = N/M, D = prod_{l | N, l not
/// dividing Q} l and beta = alpha chi^{-1} omega^{-2} kappa^{k-s-1},
/// U_D L(alpha,k,chi,s) = (phi(Q)/phi(N)) U_M prod (U_l - beta(l)) L_M(alpha,k,chi,s).
#[allow(clippy::too_many_arguments)]
pub fn verify_compare_divisor_level(
    ol: &OrdinaryLevel,
    theta_full: &MazurTateElement,
    theta_m: &MazurTateElement,
    alpha: &DirichletCharacter,
    k: i64,
    chi: &DirichletCharacter,
    s: i64,
    exec: Exec,
) -> Result<CaseOutcome> {
    let w = chi.ring().clone();
    let ring = ol.ring();
    let level = ol.level;
    let np = level.n() * level.p();
    let n = level.n();
    let m_div = theta_m.divisor;
    let q = n / m_div;
    let m_target = ol.m_target;
    // hypothesis: f_{alpha chi^{-1}} | Q
    let alpha_np = alpha.extend_to(np)?;
    let chi_np = chi.extend_to(np)?;
    let quot_char = alpha_np.mul(&chi_np.inverse())?.primitive_part()?;
    let mut f = quot_char.modulus();
    while f % level.p() == 0 {
        f /= level.p();
    }
    if q % f != 0 {
        return Ok(CaseOutcome::SkippedHypothesis(format!(
            "f_(alpha/chi) = {f} does not divide Q = {q}"
        )));
    }
    // exactness: the kappa exponent k - s - 1 must vanish unless the
    // level exponent covers the target precision
    let e = k - s - 1;
    if e != 0 && level.r() < m_target {
        return Ok(CaseOutcome::SkippedHypothesis(format!(
            "kappa exponent {e} only guaranteed mod p^{}",
            level.r()
        )));
    }
    let dq = diamond_quotient(ol, alpha, k)?;
    let d_prod: u64 = prime_divisors(n).into_iter().filter(|&l| q % l != 0).product();
    let ud = u_composite(&ol.space, d_prod, exec)?;
    let ud_w = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ud)?);
    let lhs = specialize_l(ol, theta_full, &dq, &chi_np, s).apply(&w, &ud_w);
    // rhs
    let omega = DirichletCharacter::teichmuller(&w)?.extend_to(np)?;
    let beta_finite = alpha_np.mul(&chi_np.inverse())?.mul(&omega.pow(-2))?;
    let beta = ArithmeticCharacter::new(beta_finite, e);
    let mut rhs = specialize_l(ol, theta_m, &dq, &chi_np, s);
    let um = u_composite(&ol.space, m_div.max(1), exec)?;
    let um_w = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &um)?);
    rhs = rhs.apply(&w, &um_w);
    for l in prime_divisors(n) {
        if q % l == 0 {
            continue;
        }
        let ul = u_composite(&ol.space, l, exec)?;
        let mut ul_w = cast_mat(&w, &ol.space.cuspidal().restrict(ring, &ul)?);
        let val = beta.eval_i64(l as i64);
        for i in 0..ul_w.rows {
            let slot = ul_w.at_mut(i, i);
            *slot = w.sub(slot, &val);
        }
        rhs = rhs.apply(&w, &ul_w);
    }
    // phi(Q)/phi(N): a p-unit ratio since p does not divide phi(N)
    let ratio = w.mul(
        &w.from_scalar(euler_phi(q) % w.zpm().modulus()),
        &w.inv(&w.from_scalar(euler_phi(n) % w.zpm().modulus()))?,
    );
    let rhs = dq.reduce(&rhs.scale(&w, &ratio));
    let lhs = dq.reduce(&lhs);
    match lhs.eq_mod(&w, &rhs, m_target)? {
        true => Ok(CaseOutcome::Pass),
        false => Ok(CaseOutcome::Fail("divisor-level comparison failed".to_string())),
    }
}

/// The star layer vanishes under odd alpha after P_{alpha kappa^k}.
pub fn verify_star_odd_vanishing(
    ol: &OrdinaryLevel,
    theta_star: &MazurTateElement,
    alpha: &DirichletCharacter,
    k: i64,
    chi: &DirichletCharacter,
    s: i64,
) -> Result<CaseOutcome> {
    if alpha.is_even() {
        return Ok(CaseOutcome::SkippedHypothesis("alpha is even".to_string()));
    }
    let w = chi.ring().clone();
    let np = ol.level.n() * ol.level.p();
    let dq = diamond_quotient(ol, alpha, k)?;
    let val = specialize_l(ol, theta_star, &dq, &chi.extend_to(np)?, s);
    match val.is_zero_mod(&w, ol.m_target)? {
        true => Ok(CaseOutcome::Pass),
        false => Ok(CaseOutcome::Fail("star layer did not vanish for odd alpha".to_string())),
    }
}
