//! Operators on the symbol space: Hecke T_n / U_l, diamonds, the star
//! involution, the Atkin-Lehner involution, paper symbols [u:v], and
//! level pushforwards.

use crate::arith::zpm::Zpm;
use crate::linalg::dense::{Lin, Mat};
use crate::modcurve::heilbronn::merel_matrices;
use crate::modcurve::paths::{path_to_symbols, CuspPoint};
use crate::modcurve::space::SymbolSpace;
use crate::par::{map_indexed, Exec};
use crate::error::Error;
use crate::Result;

/// Names for the operators we construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpName {
    Hecke(u64),
    AtkinU(u64),
    Diamond(u64),
    Star,
    AtkinLehner,
}

/// An operator matrix on the quotient basis of a symbol space.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub name: OpName,
    pub mat: Mat<u64>,
}

/// The n-th Hecke operator via Merel's matrix family. For primes l not
/// dividing M this is T_l; for l | M it is U_l.
pub fn hecke_matrix(space: &SymbolSpace, n: u64, exec: Exec) -> Mat<u64> {
    let mats = merel_matrices(n);
    let pairs = space.pairs();
    let cols = map_indexed(exec, space.rank(), |j| {
        let gen = space.presentation().basis[j];
        let mut terms: Vec<(usize, i64)> = Vec::with_capacity(mats.len());
        for g in &mats {
            if let Some(idx) = pairs.act(gen, g) {
                terms.push((idx, 1));
            }
        }
        space.reduce_terms(&terms)
    });
    Mat::from_cols(cols)
}

/// Named constructor enforcing the T vs U distinction.
pub fn hecke_operator(space: &SymbolSpace, l: u64, adic: bool, exec: Exec) -> Result<OperatorMatrix> {
    if !crate::modcurve::level::is_prime(l) {
        return Err(Error::domain(format!("Hecke index {l} must be prime")));
    }
    let divides = space.modulus() % l == 0;
    if adic && !divides {
        return Err(Error::domain(format!("U_{l} requested but {l} does not divide the level")));
    }
    if !adic && divides {
        return Err(Error::domain(format!("T_{l} requested but {l} divides the level")));
    }
    let mat = hecke_matrix(space, l, exec);
    Ok(OperatorMatrix { name: if adic { OpName::AtkinU(l) } else { OpName::Hecke(l) }, mat })
}

/// U_t = prod U_l^{v_l(t)} over primes l | t (t must divide M-powers).
pub fn u_composite(space: &SymbolSpace, t: u64, exec: Exec) -> Result<Mat<u64>> {
    let lin = Lin(space.ring());
    let mut acc = lin.identity(space.rank());
    let mut rest = t;
    let mut l = 2u64;
    while rest > 1 {
        if rest % l == 0 {
            if space.modulus() % l != 0 {
                return Err(Error::domain(format!("U_{t}: prime {l} does not divide the level")));
            }
            let ul = hecke_matrix(space, l, exec);
            while rest % l == 0 {
                acc = lin.mul(&ul, &acc);
                rest /= l;
            }
        }
        l += 1;
    }
    Ok(acc)
}

/// Diamond operator <j>: acts on symbols by (u, v) -> (ju, jv).
pub fn diamond_matrix(space: &SymbolSpace, j: u64) -> Result<Mat<u64>> {
    let m = space.modulus();
    if crate::arith::gcd(j % m, m) != 1 {
        return Err(Error::domain(format!("diamond index {j} not a unit mod {m}")));
    }
    let pairs = space.pairs();
    let cols: Vec<Vec<u64>> = (0..space.rank())
        .map(|col| {
            let gen = space.presentation().basis[col];
            space.gen_vector(pairs.unit_scale(gen, j % m))
        })
        .collect();
    Ok(Mat::from_cols(cols))
}

/// The star involution (complex-conjugation eigenspaces):
/// symbol (u, v) -> (-u, v).
pub fn star_matrix(space: &SymbolSpace) -> Mat<u64> {
    let pairs = space.pairs();
    let cols: Vec<Vec<u64>> = (0..space.rank())
        .map(|col| {
            let gen = space.presentation().basis[col];
            space.gen_vector(pairs.star(gen))
        })
        .collect();
    Mat::from_cols(cols)
}

/// The Atkin-Lehner involution w_M, computed on each basis symbol by
/// expanding the image path {-d/(Mb), -c/(Ma)} of the lift (a b; c d).
pub fn atkin_lehner_matrix(space: &SymbolSpace, exec: Exec) -> Mat<u64> {
    let m = space.modulus() as i128;
    let cols = map_indexed(exec, space.rank(), |j| {
        let gen = space.presentation().basis[j];
        let g = space.pairs().lift_to_sl2(gen);
        let (a, b, c, d) = (g[0] as i128, g[1] as i128, g[2] as i128, g[3] as i128);
        let alpha = CuspPoint::rational(-d, m * b);
        let beta = CuspPoint::rational(-c, m * a);
        let terms = path_to_symbols(space.pairs(), alpha, beta);
        space.reduce_terms(&terms)
    });
    Mat::from_cols(cols)
}

/// The twisted symbol [u:v] = w_M (class of (u, v)); `w` must be the
/// Atkin-Lehner matrix of the space.
pub fn paper_symbol(space: &SymbolSpace, w: &Mat<u64>, u: i64, v: i64) -> Result<Vec<u64>> {
    let idx = space
        .pairs()
        .index_of(u, v)
        .ok_or_else(|| Error::domain(format!("({u}, {v}) does not generate the unit ideal")))?;
    Ok(Lin(space.ring()).matvec(w, &space.gen_vector(idx)))
}

/// Pushforward along X_1(M) -> X_1(M') for M' | M: a symbol class maps
/// to the class of the same pair reduced mod M'. Returns the
/// rank(lo) x rank(hi) matrix.
pub fn level_pushforward(hi: &SymbolSpace, lo: &SymbolSpace) -> Result<Mat<u64>> {
    if hi.modulus() % lo.modulus() != 0 {
        return Err(Error::domain("pushforward target must divide the level".to_string()));
    }
    let cols: Vec<Vec<u64>> = (0..hi.rank())
        .map(|j| {
            let (u, v) = hi.pairs().pair(hi.presentation().basis[j]);
            let idx = lo
                .pairs()
                .index_of(u as i64, v as i64)
                .expect("unit ideal persists under reduction");
            lo.gen_vector(idx)
        })
        .collect();
    Ok(Mat::from_cols(cols))
}

/// Projector (1 + sign * star)/2 onto a star eigenspace.
pub fn star_projector(ring: &Zpm, star: &Mat<u64>, sign: i64) -> Mat<u64> {
    let lin = Lin(ring);
    let n = star.rows;
    let half = ring.inv(2).expect("2 is a unit for odd p");
    let mut out = star.clone();
    if sign < 0 {
        out = lin.sub(&lin.zeros(n, n), &out);
    }
    for i in 0..n {
        let slot = out.at_mut(i, i);
        *slot = ring.add(*slot, 1);
    }
    lin.scale(&half, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcurve::space::{SymbolSpace, Subspace};

    fn space11() -> SymbolSpace {
        SymbolSpace::build(Zpm::new(5, 3).unwrap(), 11).unwrap()
    }

    #[test]
    fn star_and_diamond_structure() {
        let s = space11();
        let ring = *s.ring();
        let lin = Lin(&ring);
        let star = star_matrix(&s);
        assert_eq!(lin.mul(&star, &star), lin.identity(s.rank()));
        // diamonds form a group: <2><6> = <12> = <1> mod 11
        let d2 = diamond_matrix(&s, 2).unwrap();
        let d6 = diamond_matrix(&s, 6).unwrap();
        assert_eq!(lin.mul(&d2, &d6), lin.identity(s.rank()));
        // star commutes with diamonds
        assert_eq!(lin.mul(&star, &d2), lin.mul(&d2, &star));
    }

    #[test]
    fn hecke_preserves_cuspidal_and_t2_eigenvalue() {
        let s = space11();
        let ring = *s.ring();
        let lin = Lin(&ring);
        let t2 = hecke_matrix(&s, 2, Exec::Sequential);
        // preserves the cuspidal subspace and acts there by -2
        // (the weight-two level-11 eigenvalue; oracle in tests/)
        for j in 0..s.cuspidal().dim() {
            let v = s.cuspidal().basis.col(j);
            let img = lin.matvec(&t2, &v);
            assert!(s.is_cuspidal(&img));
            let expect: Vec<u64> = v.iter().map(|&x| ring.mul(ring.reduce_i64(-2), x)).collect();
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn atkin_lehner_is_an_involution() {
        let s = space11();
        let ring = *s.ring();
        let lin = Lin(&ring);
        let w = atkin_lehner_matrix(&s, Exec::Sequential);
        assert_eq!(lin.mul(&w, &w), lin.identity(s.rank()));
        // w <j> w = <j>^{-1}
        let d2 = diamond_matrix(&s, 2).unwrap();
        let d2inv = diamond_matrix(&s, 6).unwrap(); // 2*6 = 12 = 1 mod 11
        let conj = lin.mul(&w, &lin.mul(&d2, &w));
        assert_eq!(conj, d2inv);
    }

    #[test]
    fn paper_symbol_relations() {
        // [u:v] + [-v:u] = 0 and <j>^{-1}[u:v] = [ju:jv]
        let s = space11();
        let ring = *s.ring();
        let lin = Lin(&ring);
        let w = atkin_lehner_matrix(&s, Exec::Sequential);
        for (u, v) in [(1i64, 0i64), (2, 3), (5, 7), (0, 1), (4, 4)] {
            let a = paper_symbol(&s, &w, u, v).unwrap();
            let b = paper_symbol(&s, &w, -v, u).unwrap();
            let sum: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| ring.add(x, y)).collect();
            assert!(sum.iter().all(|&c| c == 0), "({u}:{v})");
        }
        let d3inv = diamond_matrix(&s, 4).unwrap(); // 3*4 = 12 = 1 mod 11
        for (u, v) in [(1i64, 2i64), (3, 1), (0, 1)] {
            let lhs = lin.matvec(&d3inv, &paper_symbol(&s, &w, u, v).unwrap());
            let rhs = paper_symbol(&s, &w, 3 * u, 3 * v).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_infinity_is_one_zero_symbol() {
        // {0, inf} = [1:0] on the nose
        let s = space11();
        let w = atkin_lehner_matrix(&s, Exec::Sequential);
        let path = s.path_vector(CuspPoint::rational(0, 1), CuspPoint::Infinity);
        let sym = paper_symbol(&s, &w, 1, 0).unwrap();
        assert_eq!(path, sym);
    }

    #[test]
    fn paper_symbol_matches_direct_path_definition() {
        // [u:v] is the class of {b/(dM), a/(cM)} for any lift; checked
        // against two essentially different lifts.
        let s = space11();
        let m = s.modulus() as i128;
        for (u, v) in [(2i64, 3i64), (1, 5), (7, 2)] {
            let w = atkin_lehner_matrix(&s, Exec::Sequential);
            let via_w = paper_symbol(&s, &w, u, v).unwrap();
            // direct lift (a b; c d), u = a, v = b mod M
            for t in 0..2i64 {
                // vary the lift: a -> a + tM forces different c, d
                let (a, b) = (u + t * 11, v);
                let (g, x, y) = crate::arith::egcd(a, b);
                if g.abs() != 1 {
                    continue;
                }
                // a d - b c = 1 with d = x*sign, c = -y*sign
                let sign = g.signum();
                let (c, d) = (-y * sign, x * sign);
                assert_eq!(a * d - b * c, 1);
                let alpha = CuspPoint::rational(b as i128, (d as i128) * m);
                let beta = CuspPoint::rational(a as i128, (c as i128) * m);
                let direct = s.path_vector(alpha, beta);
                assert_eq!(direct, via_w, "(u,v)=({u},{v}), lift t={t}");
            }
        }
    }

    #[test]
    fn u_operator_matches_coset_definition() {
        // U_5 at M=25 from Merel matrices equals the double-coset sum
        // sum_k {(alpha+k)/5, (beta+k)/5} computed on paths.
        let ring = Zpm::new(5, 2).unwrap();
        let s = SymbolSpace::build(ring, 25).unwrap();
        let lin = Lin(&ring);
        let u5 = hecke_matrix(&s, 5, Exec::Sequential);
        for j in (0..s.rank()).step_by(11) {
            let gen = s.presentation().basis[j];
            let g = s.pairs().lift_to_sl2(gen);
            let (a, b, c, d) = (g[0] as i128, g[1] as i128, g[2] as i128, g[3] as i128);
            // the basis symbol is the path {b/d, a/c}
            let mut acc = vec![0u64; s.rank()];
            for k in 0..5i128 {
                let alpha = CuspPoint::rational(b + k * d, 5 * d);
                let beta = CuspPoint::rational(a + k * c, 5 * c);
                let seg = s.path_vector(alpha, beta);
                for (slot, x) in acc.iter_mut().zip(seg) {
                    *slot = ring.add(*slot, x);
                }
            }
            let direct = lin.matvec(&u5, &s.gen_vector(gen));
            assert_eq!(acc, direct, "basis column {j}");
        }
    }

    #[test]
    fn hecke_commutativity() {
        for m in [11u64, 25] {
            let ring = Zpm::new(5, 2).unwrap();
            let s = SymbolSpace::build(ring, m).unwrap();
            let lin = Lin(&ring);
            let ops: Vec<Mat<u64>> = [2u64, 3, 7]
                .iter()
                .filter(|&&l| m % l != 0)
                .map(|&l| hecke_matrix(&s, l, Exec::Sequential))
                .collect();
            for a in &ops {
                for b in &ops {
                    assert_eq!(lin.mul(a, b), lin.mul(b, a));
                }
                let d = diamond_matrix(&s, 2).unwrap();
                assert_eq!(lin.mul(a, &d), lin.mul(&d, a));
            }
        }
    }

    #[test]
    fn star_eigenspaces_decompose() {
        let s = space11();
        let ring = *s.ring();
        let lin = Lin(&ring);
        let star = star_matrix(&s);
        let plus = star_projector(&ring, &star, 1);
        let minus = star_projector(&ring, &star, -1);
        assert_eq!(lin.mul(&plus, &plus), plus);
        assert_eq!(lin.mul(&minus, &minus), minus);
        let sum = lin.add(&plus, &minus);
        assert_eq!(sum, lin.identity(s.rank()));
        let pb = lin.image_basis(&plus);
        let mb = lin.image_basis(&minus);
        assert_eq!(pb.cols + mb.cols, s.rank());
        // restriction machinery round-trips
        let sub = Subspace::from_basis(&ring, pb);
        let t2 = hecke_matrix(&s, 2, Exec::Sequential);
        let rt2 = sub.restrict(&ring, &t2).unwrap();
        assert_eq!(rt2.rows, sub.dim());
    }
}
