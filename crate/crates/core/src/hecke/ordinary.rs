//! The ordinary idempotent of an operator over Z/p^m: the unique
//! projector onto the part where the operator acts invertibly, along its
//! topologically nilpotent part.
//!
//! Construction: the characteristic polynomial splits by Hensel's lemma
//! as f = f_nil * f_unit with f_nil = x^a mod p and f_unit(0) a unit;
//! with a Bezout identity u f_nil + v f_unit = 1 the idempotent is
//! e = (u f_nil)(A). Being a polynomial in A it commutes with everything
//! commuting with A, and it is exact at the working precision. Operators
//! over a Galois ring are handled by restriction of scalars.

use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::zpm::Zpm;
use crate::linalg::dense::{Lin, Mat};
use crate::linalg::poly::{poly_mul, split_nil_unit};
use crate::error::Error;
use crate::Result;

/// The idempotent onto the invertible (ordinary) part of an operator.
#[derive(Debug, Clone)]
pub struct OrdinaryProjector<T> {
    pub e: Mat<T>,
    /// Degree of the x-power factor of the characteristic polynomial
    /// (the generalized non-ordinary rank).
    pub nil_degree: usize,
    pub ordinary_rank: usize,
}

/// Ordinary projector of a square matrix over Z/p^m.
pub fn ordinary_projector(ring: &Zpm, a: &Mat<u64>) -> Result<OrdinaryProjector<u64>> {
    let lin = Lin(ring);
    let n = a.rows;
    assert_eq!(n, a.cols);
    if n == 0 {
        return Ok(OrdinaryProjector { e: lin.zeros(0, 0), nil_degree: 0, ordinary_rank: 0 });
    }
    let f = lin.charpoly(a);
    debug_assert_eq!(*f.last().unwrap(), 1 % ring.modulus());
    let split = split_nil_unit(ring, &f)?;
    let (e, nil_degree) = match &split {
        None => {
            if f[0] % ring.p() != 0 {
                (lin.identity(n), 0)
            } else {
                (lin.zeros(n, n), n)
            }
        }
        Some(s) => {
            let coeffs = poly_mul(ring, &s.u, &s.f_nil);
            (lin.poly_at(&coeffs, a), s.f_nil.len() - 1)
        }
    };
    if lin.mul(&e, &e) != e || lin.mul(&e, a) != lin.mul(a, &e) {
        return Err(Error::internal("ordinary idempotent failed its defining checks".to_string()));
    }
    Ok(OrdinaryProjector { e, nil_degree, ordinary_rank: n - nil_degree })
}

/// The nilpotent-part projector 1 - e.
pub fn nilpotent_projector(ring: &Zpm, proj: &OrdinaryProjector<u64>) -> Mat<u64> {
    let lin = Lin(ring);
    lin.sub(&lin.identity(proj.e.rows), &proj.e)
}

/// Invert an operator on its ordinary part: returns b with
/// a b = b a = e, i.e. the inverse on the image of e.
pub fn invert_on_ordinary(
    ring: &Zpm,
    a: &Mat<u64>,
    proj: &OrdinaryProjector<u64>,
) -> Result<Mat<u64>> {
    let lin = Lin(ring);
    // a + (1 - e) is invertible: a on the ordinary part, 1 elsewhere
    let shifted = lin.add(a, &nilpotent_projector(ring, proj));
    let inv = lin.invert(&shifted)?;
    let b = lin.mul(&inv, &proj.e);
    debug_assert!(lin.mul(a, &b) == proj.e && lin.mul(&b, a) == proj.e);
    Ok(b)
}

/// Ordinary projector of a W-linear operator, W = GR(p^m, e), via
/// restriction of scalars: the idempotent of the realified operator is a
/// polynomial in it, hence W-linear again.
pub fn ordinary_projector_w(w: &GaloisRing, a: &Mat<GrEl>) -> Result<OrdinaryProjector<GrEl>> {
    let deg = w.degree() as usize;
    let n = a.rows;
    assert_eq!(n, a.cols);
    let zpm = w.zpm();
    let lw = Lin(w);
    if n == 0 {
        return Ok(OrdinaryProjector { e: lw.zeros(0, 0), nil_degree: 0, ordinary_rank: 0 });
    }
    if deg == 1 {
        // plain Z/p^m with constant entries
        let az = Mat {
            rows: n,
            cols: n,
            data: a.data.iter().map(|c| c[0]).collect(),
        };
        let proj = ordinary_projector(&zpm, &az)?;
        let e = Mat {
            rows: n,
            cols: n,
            data: proj.e.data.iter().map(|&c| vec![c]).collect(),
        };
        return Ok(OrdinaryProjector {
            e,
            nil_degree: proj.nil_degree,
            ordinary_rank: proj.ordinary_rank,
        });
    }
    // realify: each W-entry becomes the deg x deg matrix of
    // multiplication by it on the power basis
    let lin = Lin(&zpm);
    let mut big = lin.zeros(n * deg, n * deg);
    for i in 0..n {
        for j in 0..n {
            let entry = a.at(i, j);
            if w.is_zero(entry) {
                continue;
            }
            // columns: entry * x^k
            let mut pw = entry.clone();
            for k in 0..deg {
                for (rr, &c) in pw.iter().enumerate() {
                    *big.at_mut(i * deg + rr, j * deg + k) = c;
                }
                if k + 1 < deg {
                    // multiply by x
                    let mut shifted = vec![0u64; deg + 1];
                    shifted[1..].copy_from_slice(&pw);
                    pw = w.reduce_poly(&shifted);
                }
            }
        }
    }
    let proj = ordinary_projector(&zpm, &big)?;
    // de-realify: block (i, j) is multiplication by its first column
    let mut e = lw.zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let col: GrEl = (0..deg).map(|rr| *proj.e.at(i * deg + rr, j * deg)).collect();
            *e.at_mut(i, j) = col;
        }
    }
    if lw.mul(&e, &e) != e || lw.mul(&e, a) != lw.mul(a, &e) {
        return Err(Error::internal("W-linear ordinary idempotent failed checks".to_string()));
    }
    debug_assert_eq!(proj.nil_degree % deg, 0);
    Ok(OrdinaryProjector {
        e,
        nil_degree: proj.nil_degree / deg,
        ordinary_rank: n - proj.nil_degree / deg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_of_mixed_operator() {
        let r = Zpm::new(5, 2).unwrap();
        let lin = Lin(&r);
        let a = Mat::from_rows(vec![vec![2u64, 1, 0], vec![1, 1, 0], vec![0, 0, 5]]);
        let proj = ordinary_projector(&r, &a).unwrap();
        assert_eq!(proj.ordinary_rank, 2);
        assert_eq!(lin.mul(&proj.e, &proj.e), proj.e);
        let b = invert_on_ordinary(&r, &a, &proj).unwrap();
        assert_eq!(lin.mul(&a, &b), proj.e);
    }

    #[test]
    fn unit_operator_is_fully_ordinary() {
        let r = Zpm::new(7, 2).unwrap();
        let a = Mat::from_rows(vec![vec![1u64, 3], vec![2, 2]]); // det = -4, unit
        let proj = ordinary_projector(&r, &a).unwrap();
        assert_eq!(proj.ordinary_rank, 2);
    }

    #[test]
    fn shear_operator_splits_exactly() {
        // non-semisimple mixing of a unit and a p-slope direction; the
        // finite-power construction cannot split this, the polynomial
        // idempotent can
        let r = Zpm::new(5, 4).unwrap();
        let lin = Lin(&r);
        let a = Mat::from_rows(vec![vec![1u64, 1], vec![0, 5]]);
        let proj = ordinary_projector(&r, &a).unwrap();
        assert_eq!(proj.ordinary_rank, 1);
        assert_eq!(lin.mul(&proj.e, &proj.e), proj.e);
        assert_eq!(lin.mul(&proj.e, &a), lin.mul(&a, &proj.e));
    }

    #[test]
    fn w_linear_projector() {
        use crate::arith::galois::GaloisRing;
        let zpm = Zpm::new(5, 2).unwrap();
        let w = GaloisRing::with_root_of_unity(zpm, 12).unwrap();
        let lw = Lin(&w);
        // diag(zeta, 5) with a shear
        let z = w.zeta();
        let a = Mat {
            rows: 2,
            cols: 2,
            data: vec![z.clone(), w.one(), w.zero(), w.from_scalar(5)],
        };
        let proj = ordinary_projector_w(&w, &a).unwrap();
        assert_eq!(proj.ordinary_rank, 1);
        assert_eq!(lw.mul(&proj.e, &proj.e), proj.e);
    }
}
