//! Ordinary parts, the xi symbols, Eisenstein loci and localized
//! quotients at a level N p^r.

pub mod eisenstein;
pub mod ordinary;
pub mod splitting;

pub use eisenstein::{
    check_eisenstein_nontriviality, congruence_module, eisenstein_quotient, CongruenceModule,
    EisensteinLocus, EisensteinQuotient, ThetaSector,
};
pub use ordinary::{
    invert_on_ordinary, nilpotent_projector, ordinary_projector, ordinary_projector_w,
    OrdinaryProjector,
};
pub use splitting::{horner_vec, OrdinarySplitting, ScaledVec};

use crate::arith::zpm::Zpm;
use crate::linalg::dense::{Lin, Mat};
use crate::modcurve::level::Level;
use crate::modcurve::operators::{atkin_lehner_matrix, hecke_matrix, paper_symbol, star_matrix};
use crate::modcurve::space::SymbolSpace;
use crate::par::Exec;
use crate::error::Error;
use crate::Result;

/// A symbol space at level N p^r together with everything the ordinary
/// theory needs: U_p, the ordinary idempotent, the splitting, and the
/// star and Atkin-Lehner involutions.
///
/// The space is built at an internal precision m_target + guard so that
/// splitting denominators do not eat into the requested precision.
#[derive(Debug, Clone)]
pub struct OrdinaryLevel {
    pub level: Level,
    pub m_target: u32,
    pub space: SymbolSpace,
    pub w: Mat<u64>,
    pub star: Mat<u64>,
    /// U_p on the ambient space.
    pub up: Mat<u64>,
    /// Ordinary idempotent on the ambient space.
    pub e: OrdinaryProjector<u64>,
    /// U_p and the ordinary idempotent on cuspidal coordinates.
    pub up_cusp: Mat<u64>,
    pub e_cusp: OrdinaryProjector<u64>,
    /// Inverse of U_p on the ordinary cuspidal part (times the idempotent).
    pub up_cusp_inv: Mat<u64>,
    /// Star involution on cuspidal coordinates.
    pub star_cusp: Mat<u64>,
    /// Ordinary idempotent on the boundary quotient.
    pub e_bnd: OrdinaryProjector<u64>,
    sp: OrdinarySplitting,
}

impl OrdinaryLevel {
    /// Build at internal precision m_target + guard, escalating the guard
    /// when the splitting denominators demand it.
    pub fn build(level: Level, m_target: u32, guard: u32, exec: Exec) -> Result<Self> {
        let mut g = guard;
        loop {
            match Self::build_at(level, m_target, g, exec) {
                Err(Error::Precision(_)) if g < guard + 12 => g += 2,
                other => return other,
            }
        }
    }

    fn build_at(level: Level, m_target: u32, guard: u32, exec: Exec) -> Result<Self> {
        let ring = Zpm::new(level.p(), m_target + guard)?;
        let space = SymbolSpace::build(ring, level.modulus())?;
        let lin = Lin(&ring);
        let w = atkin_lehner_matrix(&space, exec);
        let star = star_matrix(&space);
        let up = hecke_matrix(&space, level.p(), exec);
        let e = ordinary_projector(&ring, &up)?;
        let up_cusp = space.cuspidal().restrict(&ring, &up)?;
        let e_cusp = ordinary_projector(&ring, &up_cusp)?;
        let up_cusp_inv = invert_on_ordinary(&ring, &up_cusp, &e_cusp)?;
        let star_cusp = space.cuspidal().restrict(&ring, &star)?;
        // consistency: the idempotent restricted to cuspidal agrees
        let e_restr = space.cuspidal().restrict(&ring, &e.e)?;
        if e_restr != e_cusp.e {
            return Err(Error::internal("ordinary idempotent does not restrict".to_string()));
        }
        // star and w commute with U_p-ordinary structure
        debug_assert_eq!(lin.mul(&star, &up), lin.mul(&up, &star));
        let up_bnd = space.boundary_induced(&up)?;
        let e_bnd = ordinary_projector(&ring, &up_bnd)?;
        let sp = OrdinarySplitting::build(&space, &e.e, &e_cusp.e, &e_bnd.e, exec)?;
        if sp.denom_bound + m_target >= ring.m() {
            return Err(Error::precision(format!(
                "splitting denominator bound {} leaves fewer than {m_target} digits",
                sp.denom_bound
            )));
        }
        Ok(OrdinaryLevel {
            level,
            m_target,
            space,
            w,
            star,
            up,
            e,
            up_cusp,
            e_cusp,
            up_cusp_inv,
            star_cusp,
            e_bnd,
            sp,
        })
    }

    pub fn ring(&self) -> &Zpm {
        self.space.ring()
    }

    pub fn splitting(&self) -> &OrdinarySplitting {
        &self.sp
    }

    /// The twisted symbol [u:v] in ambient coordinates.
    pub fn symbol(&self, u: i64, v: i64) -> Result<Vec<u64>> {
        paper_symbol(&self.space, &self.w, u, v)
    }

    /// xi_r(u:v) = e_r s_r([u:v]) in cuspidal coordinates. Integral
    /// whenever u and v are both nonzero mod p^r.
    pub fn xi(&self, u: i64, v: i64) -> Result<ScaledVec> {
        let ring = self.ring();
        let lin = Lin(ring);
        let x = self.symbol(u, v)?;
        let pr = self.level.p().pow(self.level.r()) as i64;
        let u0 = u.rem_euclid(pr);
        let v0 = v.rem_euclid(pr);
        if u0 != 0 && v0 != 0 {
            // integral path: e_r [u:v] already lies in the cuspidal part
            let ex = lin.matvec(&self.e.e, &x);
            if !self.space.is_cuspidal(&ex) {
                return Err(Error::internal(format!(
                    "e_r [{u}:{v}] failed to be cuspidal at level {}",
                    self.level.modulus()
                )));
            }
            let coords = self.space.cuspidal().coords(ring, &ex)?;
            return Ok(ScaledVec::integral_with(ring, coords));
        }
        self.sp.split_ordinary(&self.space, &x)
    }

    /// Apply U_p^(-k) on the ordinary cuspidal part.
    pub fn up_inv_pow(&self, v: &ScaledVec, k: u32) -> ScaledVec {
        let ring = self.ring();
        let mut out = v.clone();
        for _ in 0..k {
            out = out.apply(ring, &self.up_cusp_inv);
        }
        out
    }

    /// Plus-part projection on cuspidal coordinates.
    pub fn plus_projector_cusp(&self) -> Mat<u64> {
        crate::modcurve::operators::star_projector(self.ring(), &self.star_cusp, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_integral_matches_split_route() {
        // level 25, p = 5: for u, v nonzero mod p^r the two routes agree
        let level = Level::new(1, 5, 2).unwrap();
        let ol = OrdinaryLevel::build(level, 2, 2, Exec::Sequential).unwrap();
        let ring = ol.ring();
        for (u, v) in [(1i64, 2i64), (3, 7), (11, 1)] {
            let fast = ol.xi(u, v).unwrap();
            // slow route: the splitting applied to [u:v]
            let x = ol.symbol(u, v).unwrap();
            let slow = ol.splitting().split_ordinary(&ol.space, &x).unwrap();
            assert!(fast.eq_mod(ring, &slow, 2).unwrap(), "({u}:{v})");
        }
    }

    #[test]
    fn ordinary_projector_kills_infinity_type_cusps() {
        // On the boundary module, cusps (a : p^r b) with p^r not dividing
        // a die under the ordinary projector; the (0 : 1)-type classes
        // survive (they generate the congruence module).
        let level = Level::new(1, 5, 2).unwrap();
        let ol = OrdinaryLevel::build(level, 2, 1, Exec::Sequential).unwrap();
        let ring = ol.ring();
        let lin = Lin(ring);
        let up = hecke_matrix(&ol.space, 5, Exec::Sequential);
        let up_bnd = ol.space.boundary_induced(&up).unwrap();
        let e_bnd = ordinary_projector(ring, &up_bnd).unwrap();
        let cusps = ol.space.cusps();
        // difference of two infinity-type cusps (denominator 0 mod 25)
        let c1 = cusps.index_of(1, 0);
        let c2 = cusps.index_of(7, 0);
        assert_ne!(c1, c2);
        let mut divisor = vec![0u64; cusps.len()];
        divisor[c1] = 1;
        divisor[c2] = ring.reduce_i64(-1);
        let f = ol.space.boundary_coords(&divisor);
        let image = lin.matvec(&e_bnd.e, &f);
        assert!(image.iter().all(|&c| c == 0));
        // while [0] - [infinity] has nonzero ordinary part
        let z = cusps.zero();
        let i = cusps.infinity();
        let mut divisor2 = vec![0u64; cusps.len()];
        divisor2[z] = 1;
        divisor2[i] = ring.reduce_i64(-1);
        let f2 = ol.space.boundary_coords(&divisor2);
        let image2 = lin.matvec(&e_bnd.e, &f2);
        assert!(image2.iter().any(|&c| c != 0));
    }
}
