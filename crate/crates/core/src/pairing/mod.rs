//! The intersection pairing on the modular curve, computed from the
//! Farey triangulation, together with its Atkin-Lehner/U_p twists and the
//! diamond-group-ring layer.
//!
//! Faces of the triangulation are the orbits of the symbol set under
//! R = sigma^{-1} tau sigma, with boundary [x] + [xR] + [xR^2]; the dual
//! graph has one node per face and one edge per unoriented symbol pair
//! {x, x sigma}. Cycles in the dual graph represent homology classes of
//! the open curve; a dual cycle is homotoped onto the edge system by the
//! corner rule, and the pairing of a relative class with a dual cycle is
//! the signed count of crossings. On cuspidal classes this computes the
//! intersection form of the closed surface.

pub mod surface;

pub use surface::IntersectionPairing;

use crate::arith::galois::GaloisRing;
use crate::arith::group_ring::GroupRingElem;
use crate::arith::zpm::Zpm;
use crate::hecke::OrdinaryLevel;
use crate::linalg::dense::{Lin, Mat};
use crate::linalg::ring::RingCtx;
use crate::modcurve::operators::diamond_matrix;
use crate::Result;

/// The twisted pairing (x, y) = x . (w U_p^r y) on cuspidal coordinates;
/// with `up_power` = 0 this is the plain Atkin-Lehner twist x . (w y).
pub fn twisted_gram(
    ring: &Zpm,
    gram: &Mat<u64>,
    w_cusp: &Mat<u64>,
    up_cusp: &Mat<u64>,
    up_power: u32,
) -> Mat<u64> {
    let lin = Lin(ring);
    let mut twist = w_cusp.clone();
    for _ in 0..up_power {
        twist = lin.mul(&twist, up_cusp);
    }
    lin.mul(gram, &twist)
}

/// x^T G y.
pub fn bilinear(lin: &Lin<'_, Zpm>, gram: &Mat<u64>, x: &[u64], y: &[u64]) -> u64 {
    let gy = lin.matvec(gram, y);
    lin.0.dot(x, &gy)
}

/// The group-ring layer of the pairing at one level:
/// sum over units j of (x, <j^{-1}> y)_r [j].
pub fn group_ring_pairing(
    ol: &OrdinaryLevel,
    gram_twisted: &Mat<u64>,
    x: &[u64],
    y: &[u64],
    ring_w: &GaloisRing,
) -> Result<GroupRingElem> {
    let ring = ol.ring();
    let lin = Lin(ring);
    let m = ol.level.modulus();
    let mut out = GroupRingElem::zero(ring_w, m);
    for j in 1..m {
        if crate::arith::gcd(j, m) != 1 {
            continue;
        }
        let jinv = inverse_mod(j, m);
        let dj = diamond_matrix(&ol.space, jinv)?;
        let djc = ol.space.cuspidal().restrict(ring, &dj)?;
        let val = bilinear(&lin, gram_twisted, x, &lin.matvec(&djc, y));
        out.coeffs[j as usize] = ring_w.from_scalar(val);
    }
    Ok(out)
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (_, x, _) = crate::arith::egcd(a as i64, m as i64);
    x.rem_euclid(m as i64) as u64
}
