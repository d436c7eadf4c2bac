//! The symbol space: relative H_1 of X_1(M) with Z/p^m coefficients,
//! presented on pair classes modulo the two- and three-term relations,
//! with the boundary map to cusps and the cuspidal kernel.

use crate::arith::zpm::Zpm;
use crate::linalg::dense::{Lin, Mat, Solver};
#[allow(unused_imports)]
use crate::linalg::ring::RingCtx;
use crate::linalg::sparse::{QuotientPresentation, SparseEliminator};
use crate::modcurve::cusps::{gamma1_cusp_count, gamma1_genus, CuspTable};
use crate::modcurve::p1::PairTable;
use crate::modcurve::paths::{path_to_symbols, CuspPoint};
use crate::error::Error;
use crate::Result;

/// A free direct summand of the symbol space, with a prepared solver for
/// expressing members in its basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    /// ambient-dim x k basis matrix (columns are basis vectors).
    pub basis: Mat<u64>,
    solver: Solver<u64>,
}

impl Subspace {
    pub fn from_basis(ring: &Zpm, basis: Mat<u64>) -> Self {
        let lin = Lin(ring);
        let solver = lin.solver(&basis);
        Subspace { basis, solver }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows
    }

    /// Coordinates of an ambient vector known to lie in the subspace.
    pub fn coords(&self, ring: &Zpm, v: &[u64]) -> Result<Vec<u64>> {
        Lin(ring).solver_solve(&self.solver, v)
    }

    /// Ambient vector of subspace coordinates.
    pub fn embed(&self, ring: &Zpm, c: &[u64]) -> Vec<u64> {
        Lin(ring).matvec(&self.basis, c)
    }

    /// Restrict an ambient operator that preserves this subspace.
    pub fn restrict(&self, ring: &Zpm, op: &Mat<u64>) -> Result<Mat<u64>> {
        let lin = Lin(ring);
        let mut cols = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let img = lin.matvec(op, &self.basis.col(j));
            cols.push(self.coords(ring, &img)?);
        }
        Ok(Mat::from_cols(cols))
    }
}

/// Relative homology of X_1(M) with Z/p^m coefficients, on the Manin
/// presentation.
#[derive(Debug, Clone)]
pub struct SymbolSpace {
    ring: Zpm,
    modulus: u64,
    pairs: PairTable,
    pres: QuotientPresentation,
    cusps: CuspTable,
    /// Boundary matrix: rows = cusp classes, cols = basis vectors.
    boundary: Mat<u64>,
    cuspidal: Subspace,
    boundary_solver: Solver<u64>,
    /// Per pair class: (source cusp, target cusp) of the oriented edge.
    endpoints: Vec<(usize, usize)>,
}

impl SymbolSpace {
    /// Build the presentation at modulus M >= 5 over Z/p^m.
    pub fn build(ring: Zpm, modulus: u64) -> Result<Self> {
        if modulus < 5 {
            return Err(Error::config(format!("modulus {modulus} < 5 unsupported")));
        }
        let pairs = PairTable::new(modulus);
        let n = pairs.len();
        let mut elim = SparseEliminator::new(ring, n);
        let mut seen_sigma = vec![false; n];
        let mut seen_tau = vec![false; n];
        for x in 0..n {
            if !seen_sigma[x] {
                let sx = pairs.sigma(x);
                seen_sigma[x] = true;
                seen_sigma[sx] = true;
                elim.add_relation(&[(x, 1), (sx, 1)]);
            }
            if !seen_tau[x] {
                let tx = pairs.tau(x);
                let ttx = pairs.tau(tx);
                seen_tau[x] = true;
                seen_tau[tx] = true;
                seen_tau[ttx] = true;
                elim.add_relation(&[(x, 1), (tx, 1), (ttx, 1)]);
            }
        }
        let pres = elim.finish()?;
        let expected = 2 * gamma1_genus(modulus) + gamma1_cusp_count(modulus) - 1;
        if pres.rank() as u64 != expected {
            return Err(Error::internal(format!(
                "presentation rank {} differs from 2g + c - 1 = {expected} at M = {modulus}",
                pres.rank()
            )));
        }
        let cusps = CuspTable::new(modulus);
        let mut endpoints = Vec::with_capacity(n);
        for x in 0..n {
            let g = pairs.lift_to_sl2(x);
            // edge from g.0 = b/d to g.inf = a/c
            let from = cusps.index_of(g[1], g[3]);
            let to = cusps.index_of(g[0], g[2]);
            endpoints.push((from, to));
        }
        // boundary of each basis generator: [to] - [from]
        let lin = Lin(&ring);
        let mut boundary = lin.zeros(cusps.len(), pres.rank());
        for (j, &g) in pres.basis.iter().enumerate() {
            let (from, to) = endpoints[g];
            let slot_to = boundary.at_mut(to, j);
            *slot_to = ring.add(*slot_to, 1);
            let slot_from = boundary.at_mut(from, j);
            *slot_from = ring.sub(*slot_from, 1);
        }
        let kernel = lin.kernel(&boundary);
        if kernel.cols as u64 != 2 * gamma1_genus(modulus) {
            return Err(Error::internal(format!(
                "cuspidal rank {} differs from 2g = {} at M = {modulus}",
                kernel.cols,
                2 * gamma1_genus(modulus)
            )));
        }
        let cuspidal = Subspace::from_basis(&ring, kernel);
        let boundary_solver = lin.solver(&boundary);
        Ok(SymbolSpace {
            ring,
            modulus,
            pairs,
            pres,
            cusps,
            boundary,
            cuspidal,
            boundary_solver,
            endpoints,
        })
    }

    pub fn ring(&self) -> &Zpm {
        &self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pairs(&self) -> &PairTable {
        &self.pairs
    }

    pub fn cusps(&self) -> &CuspTable {
        &self.cusps
    }

    pub fn presentation(&self) -> &QuotientPresentation {
        &self.pres
    }

    pub fn rank(&self) -> usize {
        self.pres.rank()
    }

    pub fn cuspidal(&self) -> &Subspace {
        &self.cuspidal
    }

    pub fn cusp_endpoints(&self, pair_idx: usize) -> (usize, usize) {
        self.endpoints[pair_idx]
    }

    /// Dense coordinates of a pair class in the quotient basis.
    pub fn gen_vector(&self, pair_idx: usize) -> Vec<u64> {
        self.pres.gen_coords(pair_idx)
    }

    /// Dense coordinates of a sparse integer combination of pair classes.
    pub fn reduce_terms(&self, terms: &[(usize, i64)]) -> Vec<u64> {
        let converted: Vec<(usize, u64)> =
            terms.iter().map(|&(i, c)| (i, self.ring.reduce_i64(c))).collect();
        self.pres.combo_coords(&self.ring, &converted)
    }

    /// Class of the geodesic {alpha, beta}.
    pub fn path_vector(&self, alpha: CuspPoint, beta: CuspPoint) -> Vec<u64> {
        let terms = path_to_symbols(&self.pairs, alpha, beta);
        self.reduce_terms(&terms)
    }

    /// Boundary of a vector, in cusp-class coordinates.
    pub fn boundary_of(&self, v: &[u64]) -> Vec<u64> {
        Lin(&self.ring).matvec(&self.boundary, v)
    }

    pub fn is_cuspidal(&self, v: &[u64]) -> bool {
        self.boundary_of(v).iter().all(|&c| c == 0)
    }

    /// The boundary matrix (rows = cusp classes).
    pub fn boundary_matrix(&self) -> &Mat<u64> {
        &self.boundary
    }

    /// The operator induced on the boundary quotient (reduced cusp
    /// divisors, coordinates f_i = e_i - e_last for i < #cusps - 1) by an
    /// ambient operator preserving the cuspidal subspace.
    pub fn boundary_induced(&self, op: &Mat<u64>) -> Result<Mat<u64>> {
        let ring = self.ring;
        let lin = Lin(&ring);
        let n_cusps = self.cusps.len();
        let bdim = n_cusps - 1;
        let mut out = lin.zeros(bdim, bdim);
        for j in 0..bdim {
            let mut f = vec![0u64; n_cusps];
            f[j] = 1;
            f[n_cusps - 1] = ring.reduce_i64(-1);
            let pre = lin.solver_solve(&self.boundary_solver, &f)?;
            let img = self.boundary_of(&lin.matvec(op, &pre));
            for i in 0..bdim {
                *out.at_mut(i, j) = img[i];
            }
        }
        Ok(out)
    }

    /// Coordinates of a degree-zero cusp divisor in the f-basis.
    pub fn boundary_coords(&self, divisor: &[u64]) -> Vec<u64> {
        divisor[..divisor.len() - 1].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_11_and_13() {
        let ring = Zpm::new(5, 3).unwrap();
        let s11 = SymbolSpace::build(ring, 11).unwrap();
        assert_eq!(s11.rank(), 11);
        assert_eq!(s11.cuspidal().dim(), 2);
        let s13 = SymbolSpace::build(ring, 13).unwrap();
        assert_eq!(s13.rank(), 15);
        assert_eq!(s13.cuspidal().dim(), 4);
    }

    #[test]
    fn boundary_kills_relations() {
        let ring = Zpm::new(5, 2).unwrap();
        let s = SymbolSpace::build(ring, 11).unwrap();
        // boundary of sigma- and tau-relation combinations vanishes
        let pairs = s.pairs();
        for x in (0..pairs.len()).step_by(3) {
            let sx = pairs.sigma(x);
            let v = s.reduce_terms(&[(x, 1), (sx, 1)]);
            assert!(v.iter().all(|&c| c == 0));
            let tx = pairs.tau(x);
            let ttx = pairs.tau(tx);
            let w = s.reduce_terms(&[(x, 1), (tx, 1), (ttx, 1)]);
            assert!(w.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn path_classes_are_relative_cycles() {
        let ring = Zpm::new(5, 2).unwrap();
        let s = SymbolSpace::build(ring, 11).unwrap();
        // {0, inf} has boundary [inf] - [0]
        let v = s.path_vector(CuspPoint::rational(0, 1), CuspPoint::Infinity);
        let b = s.boundary_of(&v);
        let zero = s.cusps().zero();
        let inf = s.cusps().infinity();
        for (i, &c) in b.iter().enumerate() {
            if i == zero {
                assert_eq!(c, ring.reduce_i64(-1));
            } else if i == inf {
                assert_eq!(c, 1);
            } else {
                assert_eq!(c, 0);
            }
        }
        // additivity: {a, b} + {b, c} = {a, c}
        let a = CuspPoint::rational(1, 3);
        let b2 = CuspPoint::rational(2, 7);
        let c = CuspPoint::rational(-3, 5);
        let lhs1 = s.path_vector(a, b2);
        let lhs2 = s.path_vector(b2, c);
        let rhs = s.path_vector(a, c);
        let sum: Vec<u64> = lhs1.iter().zip(&lhs2).map(|(&x, &y)| ring.add(x, y)).collect();
        assert_eq!(sum, rhs);
    }
}
