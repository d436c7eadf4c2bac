//! The Farey-triangulation surface model and the Lefschetz-dual
//! computation of the intersection Gram matrix on the cuspidal subspace.

use crate::linalg::dense::{Lin, Mat};
use crate::modcurve::space::SymbolSpace;
use crate::error::Error;
use crate::Result;

/// Combinatorial surface: faces are R-orbits of symbols for
/// R = sigma^{-1} tau sigma, each face keeping its three sides in cyclic
/// boundary order; geometric edges are sigma-orbits.
struct Surface {
    sigma: Vec<usize>,
    /// symbol -> (face, position 0..3)
    face_pos: Vec<(usize, usize)>,
    faces: Vec<[usize; 3]>,
    /// geometric edge id -> representative symbol (the smaller index)
    edges: Vec<usize>,
    edge_of: Vec<usize>,
}

impl Surface {
    fn build(space: &SymbolSpace) -> Result<Self> {
        let pairs = space.pairs();
        let n = pairs.len();
        let _ = pairs.modulus();
        // R = sigma^{-1} tau sigma sends (u, v) to (v - u, -u)
        let r_of = |idx: usize| -> usize {
            let (u, v) = pairs.pair(idx);
            let (u, v) = (u as i64, v as i64);
            pairs.index_of(v - u, -u).expect("R preserves validity")
        };
        let sigma: Vec<usize> = (0..n).map(|i| pairs.sigma(i)).collect();
        let mut face_pos = vec![(usize::MAX, 3usize); n];
        let mut faces = Vec::new();
        for x in 0..n {
            if face_pos[x].0 != usize::MAX {
                continue;
            }
            let x1 = r_of(x);
            let x2 = r_of(x1);
            if x1 == x || x2 == x || r_of(x2) != x {
                return Err(Error::internal("triangle orbit is not free of order three".to_string()));
            }
            let fid = faces.len();
            faces.push([x, x1, x2]);
            face_pos[x] = (fid, 0);
            face_pos[x1] = (fid, 1);
            face_pos[x2] = (fid, 2);
        }
        let mut edges = Vec::new();
        let mut edge_of = vec![usize::MAX; n];
        for x in 0..n {
            if x <= sigma[x] {
                let eid = edges.len();
                edges.push(x);
                edge_of[x] = eid;
                edge_of[sigma[x]] = eid;
            }
        }
        Ok(Surface { sigma, face_pos, faces, edges, edge_of })
    }

    fn n_faces(&self) -> usize {
        self.faces.len()
    }

    fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Face to the left of the oriented symbol x (the face whose
    /// boundary contains +x).
    fn left_face(&self, x: usize) -> usize {
        self.face_pos[x].0
    }

    fn right_face(&self, x: usize) -> usize {
        self.face_pos[self.sigma[x]].0
    }
}

/// Ends of an oriented edge, in the local corner bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    From,
    To,
}

/// A dual-graph cycle, stored as the sequence of symbols whose left face
/// the walk exits (i.e. crossings left(x) -> right(x)).
type Walk = Vec<usize>;

/// The intersection pairing on cuspidal coordinates.
#[derive(Debug, Clone)]
pub struct IntersectionPairing {
    /// Gram matrix: gram[i][j] = <c_i, c_j> for the cuspidal basis.
    pub gram: Mat<u64>,
}

impl IntersectionPairing {
    pub fn build(space: &SymbolSpace) -> Result<Self> {
        if space.modulus() % 2 == 0 {
            return Err(Error::config("intersection pairing requires an odd level".to_string()));
        }
        let ring = *space.ring();
        let lin = Lin(&ring);
        let surf = Surface::build(space)?;
        let walks = fundamental_cycles(&surf);
        let expected = surf.n_edges() - surf.n_faces() + 1;
        if walks.len() != expected {
            return Err(Error::internal("dual graph cycle rank mismatch".to_string()));
        }
        // pi matrix: each walk becomes a symbol chain, reduced to coords
        let mut pi_cols: Vec<Vec<u64>> = Vec::with_capacity(walks.len());
        // crossing rows: functional on chains (indexed by basis position)
        let mut cross_rows: Vec<Vec<u64>> = Vec::with_capacity(walks.len());
        let mut basis_pos = vec![usize::MAX; space.pairs().len()];
        for (j, &g) in space.presentation().basis.iter().enumerate() {
            basis_pos[g] = j;
        }
        for walk in &walks {
            let terms = homotope_walk(&surf, walk);
            pi_cols.push(space.reduce_terms(&terms));
            let mut row = vec![0u64; space.rank()];
            for &x in walk {
                // net flow of the chain along the oriented symbol x
                if basis_pos[x] != usize::MAX {
                    let slot = &mut row[basis_pos[x]];
                    *slot = ring.add(*slot, 1);
                }
                let sx = surf.sigma[x];
                if basis_pos[sx] != usize::MAX {
                    let slot = &mut row[basis_pos[sx]];
                    *slot = ring.sub(*slot, 1);
                }
            }
            cross_rows.push(row);
        }
        let pi = Mat::from_cols(pi_cols);
        let cross = Mat::from_rows(cross_rows); // walks x rank
        // lift each cuspidal basis vector through pi
        let solver = lin.solver(&pi);
        let cdim = space.cuspidal().dim();
        let mut lift_cols = Vec::with_capacity(cdim);
        for jj in 0..cdim {
            let target = space.cuspidal().basis.col(jj);
            let c = lin.solver_solve(&solver, &target).map_err(|e| {
                Error::internal(format!("cuspidal class failed to lift through the dual graph: {e}"))
            })?;
            lift_cols.push(c);
        }
        let lifts = Mat::from_cols(lift_cols); // walks x cdim
        // gram = (cross * cuspidal_basis)^T * lifts
        let cf = lin.mul(&cross, &space.cuspidal().basis); // walks x cdim
        let gram = lin.mul(&cf.transpose(), &lifts);
        Ok(IntersectionPairing { gram })
    }
}

/// Spanning-tree fundamental cycles of the dual graph, each as a closed
/// walk of symbol crossings.
fn fundamental_cycles(surf: &Surface) -> Vec<Walk> {
    let nf = surf.n_faces();
    // BFS tree: parent[face] = symbol x crossed from parent-side
    // (walking left(x) -> right(x) = face)
    let mut parent: Vec<Option<usize>> = vec![None; nf];
    let mut depth = vec![usize::MAX; nf];
    let mut queue = std::collections::VecDeque::new();
    depth[0] = 0;
    queue.push_back(0usize);
    let mut tree_edges = vec![false; surf.n_edges()];
    while let Some(f) = queue.pop_front() {
        for &x in &surf.faces[f] {
            // crossing through side x: left(x) = f, arrive right(x)
            let g = surf.right_face(x);
            if depth[g] == usize::MAX {
                depth[g] = depth[f] + 1;
                parent[g] = Some(x);
                tree_edges[surf.edge_of[x]] = true;
                queue.push_back(g);
            }
        }
    }
    // non-tree edges spawn cycles: chord x from left(x) to right(x),
    // then tree path back
    let mut cycles = Vec::new();
    for eid in 0..surf.n_edges() {
        if tree_edges[eid] {
            continue;
        }
        let x = surf.edges[eid];
        let (mut a, mut b) = (surf.right_face(x), surf.left_face(x));
        // walk: chord crossing (left -> right), then path right ->.. root
        // meet ..-> left
        let mut up_from_right: Vec<usize> = Vec::new();
        let mut up_from_left: Vec<usize> = Vec::new();
        while depth[a] > depth[b] {
            let px = parent[a].unwrap();
            up_from_right.push(px);
            a = surf.left_face(px);
        }
        while depth[b] > depth[a] {
            let px = parent[b].unwrap();
            up_from_left.push(px);
            b = surf.left_face(px);
        }
        while a != b {
            let pa = parent[a].unwrap();
            up_from_right.push(pa);
            a = surf.left_face(pa);
            let pb = parent[b].unwrap();
            up_from_left.push(pb);
            b = surf.left_face(pb);
        }
        // assemble: cross chord x (left->right), then from right(x) climb
        // to the meeting face (crossing each parent edge right->left,
        // i.e. through sigma of the stored symbol), then descend to
        // left(x) crossing parent edges left->right
        let mut walk: Walk = vec![x];
        for &px in &up_from_right {
            walk.push(surf.sigma[px]);
        }
        for &px in up_from_left.iter().rev() {
            walk.push(px);
        }
        cycles.push(walk);
    }
    cycles
}

/// Homotope a closed dual walk onto the edge system: each crossed edge
/// contributes -1, 0 or +1 times its symbol, by the corner rule.
fn homotope_walk(surf: &Surface, walk: &Walk) -> Vec<(usize, i64)> {
    let len = walk.len();
    let mut terms: Vec<(usize, i64)> = Vec::new();
    for i in 0..len {
        let x = walk[i]; // crossing left(x) -> right(x)
        let x_next = walk[(i + 1) % len];
        let x_prev = walk[(i + len - 1) % len];
        // departure end of edge {x} inside face left(x): the transit
        // entered left(x) through sigma(x_prev) and exits through x
        let dep = transit_corner_on_exit(surf, surf.sigma[x_prev], x);
        // arrival end of edge {x} inside face right(x): the transit
        // enters through sigma(x) and exits through x_next
        let arr_local = transit_corner_on_entry(surf, surf.sigma[x], x_next);
        // arr_local is an end of sigma(x); translate to x-orientation
        let arr = flip(arr_local);
        let coeff = match (dep, arr) {
            (End::From, End::To) => 1,
            (End::To, End::From) => -1,
            _ => 0,
        };
        if coeff != 0 {
            terms.push((x, coeff));
        }
    }
    terms
}

fn flip(e: End) -> End {
    match e {
        End::From => End::To,
        End::To => End::From,
    }
}

/// For a transit inside one face entering through side `a_sym` and
/// exiting through side `b_sym`, the corner passed is an end of both
/// sides; report it as an end of the EXIT side.
fn transit_corner_on_exit(surf: &Surface, a_sym: usize, b_sym: usize) -> End {
    let (fa, a) = surf.face_pos[a_sym];
    let (fb, b) = surf.face_pos[b_sym];
    debug_assert_eq!(fa, fb, "transit within one face");
    debug_assert_ne!(a, b);
    if (a + 1) % 3 == b {
        // corner between consecutive sides a, a+1: from-end of side b
        End::From
    } else {
        End::To
    }
}

/// Same corner, reported as an end of the ENTRY side.
fn transit_corner_on_entry(surf: &Surface, a_sym: usize, b_sym: usize) -> End {
    let (fa, a) = surf.face_pos[a_sym];
    let (fb, b) = surf.face_pos[b_sym];
    debug_assert_eq!(fa, fb, "transit within one face");
    debug_assert_ne!(a, b);
    if (a + 1) % 3 == b {
        // corner = to-end of side a
        End::To
    } else {
        End::From
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zpm::Zpm;

    #[test]
    fn surface_counts() {
        let ring = Zpm::new(5, 2).unwrap();
        let space = SymbolSpace::build(ring, 11).unwrap();
        let surf = Surface::build(&space).unwrap();
        assert_eq!(surf.n_faces(), 20); // 60 symbols / 3
        assert_eq!(surf.n_edges(), 30); // 60 / 2
        // euler characteristic of the open curve: V - E + F with
        // V = cusps: 10 - 30 + 20 = 0 = 2 - 2g - 0... chi(open) = 2-2g-c+c
        let cycles = fundamental_cycles(&surf);
        assert_eq!(cycles.len(), 11); // 2g + c - 1
    }

    #[test]
    fn gram_on_genus_one_is_symplectic() {
        let ring = Zpm::new(5, 3).unwrap();
        let space = SymbolSpace::build(ring, 11).unwrap();
        let pairing = IntersectionPairing::build(&space).unwrap();
        let g = &pairing.gram;
        assert_eq!(g.rows, 2);
        // antisymmetric
        assert_eq!(*g.at(0, 0), 0);
        assert_eq!(*g.at(1, 1), 0);
        assert_eq!(*g.at(0, 1), ring.neg(*g.at(1, 0)));
        // perfect: the off-diagonal entry is a unit
        assert!(ring.is_unit(*g.at(0, 1)));
    }

    #[test]
    fn gram_antisymmetric_and_unimodular_at_25() {
        let ring = Zpm::new(5, 2).unwrap();
        let space = SymbolSpace::build(ring, 25).unwrap();
        let pairing = IntersectionPairing::build(&space).unwrap();
        let lin = Lin(&ring);
        let g = &pairing.gram;
        let gt = g.transpose();
        let sum = lin.add(g, &gt);
        assert!(lin.is_zero_mat(&sum));
        // unimodular on the full cuspidal space (closed-surface duality)
        assert_eq!(lin.det_val(g), Some(0));
    }

    #[test]
    fn hecke_adjoint_under_atkin_lehner_twist() {
        // (T x, w y) = (x, w T y) after twisting by w
        let ring = Zpm::new(5, 3).unwrap();
        let space = SymbolSpace::build(ring, 11).unwrap();
        let pairing = IntersectionPairing::build(&space).unwrap();
        let lin = Lin(&ring);
        let w = crate::modcurve::operators::atkin_lehner_matrix(&space, crate::par::Exec::Sequential);
        let wc = space.cuspidal().restrict(&ring, &w).unwrap();
        let t2 = crate::modcurve::operators::hecke_matrix(&space, 2, crate::par::Exec::Sequential);
        let t2c = space.cuspidal().restrict(&ring, &t2).unwrap();
        let gw = lin.mul(&pairing.gram, &wc);
        // G_w T = T^t G_w
        let lhs = lin.mul(&gw, &t2c);
        let rhs = lin.mul(&t2c.transpose(), &gw);
        assert_eq!(lhs, rhs);
    }
}
