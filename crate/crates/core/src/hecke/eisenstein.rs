//! Theta sectors of the ordinary cuspidal part, localization at the
//! Eisenstein maximal ideal, the quotient by the Eisenstein ideal with
//! its symbol table (u, v) -> xi_bar(u:v), and the congruence module on
//! the cusp side.
//!
//! Coordinate chain: cuspidal coords tensor W (dim d) contains the theta
//! sector (dim s) contains the Eisenstein locus (dim t) contains the
//! star-plus part (dim y); all heavy work happens in the small frames.

use crate::arith::bernoulli::bernoulli1;
use crate::arith::dirichlet::DirichletCharacter;
use crate::arith::galois::{GaloisRing, GrEl};
use crate::arith::zpm::Zpm;
use crate::arith::{euler_phi, primes_up_to};
use crate::hecke::ordinary::ordinary_projector_w;
use crate::hecke::OrdinaryLevel;
use crate::linalg::dense::{Lin, Mat, Span};
use crate::modcurve::operators::{diamond_matrix, hecke_matrix};
use crate::par::Exec;
use crate::error::Error;
use crate::Result;

/// Cast a Z/p^m matrix into a Galois ring over the same Z/p^m.
pub fn cast_mat(w: &GaloisRing, m: &Mat<u64>) -> Mat<GrEl> {
    Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|&c| w.from_scalar(c)).collect() }
}

pub fn cast_vec(w: &GaloisRing, v: &[u64]) -> Vec<GrEl> {
    v.iter().map(|&c| w.from_scalar(c)).collect()
}

/// The level's Hecke operators restricted to cuspidal coordinates, built
/// once and shared across all theta sectors, plus the corresponding
/// operators induced on the boundary (cusp) module.
#[derive(Debug, Clone)]
pub struct LevelHecke {
    /// (l, T_l on cuspidal coords) for primes l not dividing Np.
    pub t_cusp: Vec<(u64, Mat<u64>)>,
    /// (l, U_l on cuspidal coords) for primes l | Np.
    pub u_cusp: Vec<(u64, Mat<u64>)>,
    /// <1+p> on cuspidal coords.
    pub wild_diamond_cusp: Mat<u64>,
    /// Tame diamond <j-hat> on cuspidal coords, indexed by j in (Z/Np)^x.
    pub tame_diamond_cusp: Vec<(u64, Mat<u64>)>,
    /// Full diamond <l> on cuspidal coords for the T_l primes.
    pub full_diamond_cusp: Vec<(u64, Mat<u64>)>,
    /// The same operators induced on the boundary quotient.
    pub t_bnd: Vec<(u64, Mat<u64>)>,
    pub u_bnd: Vec<(u64, Mat<u64>)>,
    pub wild_diamond_bnd: Mat<u64>,
    pub tame_diamond_bnd: Vec<(u64, Mat<u64>)>,
    pub full_diamond_bnd: Vec<(u64, Mat<u64>)>,
    /// U_p induced on the boundary quotient.
    pub up_bnd: Mat<u64>,
}

impl LevelHecke {
    /// Build with T_l for primes l not dividing Np up to `prime_bound`.
    pub fn build(ol: &OrdinaryLevel, prime_bound: u64, exec: Exec) -> Result<Self> {
        let ring = ol.ring();
        let level = ol.level;
        let np = level.n() * level.p();
        let mut t_cusp = Vec::new();
        let mut t_bnd = Vec::new();
        let mut full_diamond_cusp = Vec::new();
        let mut full_diamond_bnd = Vec::new();
        for l in primes_up_to(prime_bound) {
            if np % l == 0 {
                continue;
            }
            let tl = hecke_matrix(&ol.space, l, exec);
            t_cusp.push((l, ol.space.cuspidal().restrict(ring, &tl)?));
            t_bnd.push((l, ol.space.boundary_induced(&tl)?));
            let dl = diamond_matrix(&ol.space, l % level.modulus())?;
            full_diamond_cusp.push((l, ol.space.cuspidal().restrict(ring, &dl)?));
            full_diamond_bnd.push((l, ol.space.boundary_induced(&dl)?));
        }
        let mut u_cusp = Vec::new();
        let mut u_bnd = Vec::new();
        for l in crate::arith::prime_divisors(np) {
            let ul = hecke_matrix(&ol.space, l, exec);
            u_cusp.push((l, ol.space.cuspidal().restrict(ring, &ul)?));
            u_bnd.push((l, ol.space.boundary_induced(&ul)?));
        }
        let wild_idx = (1 + level.p()) % level.modulus();
        let wild = diamond_matrix(&ol.space, wild_idx)?;
        let wild_diamond_cusp = ol.space.cuspidal().restrict(ring, &wild)?;
        let wild_diamond_bnd = ol.space.boundary_induced(&wild)?;
        let mut tame_diamond_cusp = Vec::new();
        let mut tame_diamond_bnd = Vec::new();
        for j in 1..np {
            if crate::arith::gcd(j, np) != 1 {
                continue;
            }
            let jh = tame_lift(j, level.n(), level.p(), level.r());
            let d = diamond_matrix(&ol.space, jh % level.modulus())?;
            tame_diamond_cusp.push((j, ol.space.cuspidal().restrict(ring, &d)?));
            tame_diamond_bnd.push((j, ol.space.boundary_induced(&d)?));
        }
        let up_bnd = ol.space.boundary_induced(&ol.up)?;
        Ok(LevelHecke {
            t_cusp,
            u_cusp,
            wild_diamond_cusp,
            tame_diamond_cusp,
            full_diamond_cusp,
            t_bnd,
            u_bnd,
            wild_diamond_bnd,
            tame_diamond_bnd,
            full_diamond_bnd,
            up_bnd,
        })
    }
}

/// The unique unit mod N p^r of prime-to-p order congruent to j mod Np.
pub fn tame_lift(j: u64, n: u64, p: u64, r: u32) -> u64 {
    let pr = p.pow(r);
    let zr = Zpm::new(p, r).expect("p^r context");
    let tj = zr.teichmuller(j % p).expect("unit mod p");
    let m = n * pr;
    if n == 1 {
        return tj % m;
    }
    for x in 0..m {
        if x % n == j % n && x % pr == tj {
            return x;
        }
    }
    unreachable!("CRT lift exists")
}

/// Default prime cutoff for the Eisenstein ideal generator sweep: the
/// weight-two Sturm bound for small levels, a fixed window otherwise.
pub fn eisenstein_prime_bound(modulus: u64) -> u64 {
    if modulus <= 40 {
        (crate::modcurve::cusps::gamma1_pair_count(modulus) / 6).max(20)
    } else {
        30
    }
}

/// A sector frame: a projector on an ambient space together with a basis
/// of its image and the operators restricted to that basis.
#[derive(Debug, Clone)]
struct Frame {
    basis: Span<GrEl>,
}

impl Frame {
    fn new(w: &GaloisRing, projector: &Mat<GrEl>) -> Self {
        let lw = Lin(w);
        Frame { basis: lw.span(lw.image_basis(projector)) }
    }

    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn restrict(&self, w: &GaloisRing, op: &Mat<GrEl>) -> Result<Mat<GrEl>> {
        Lin(w).span_restrict(&self.basis, op)
    }

    fn coords(&self, w: &GaloisRing, v: &[GrEl]) -> Result<Vec<GrEl>> {
        Lin(w).span_coords(&self.basis, v)
    }

}

/// The theta-eigenspace of the ordinary cuspidal part over the character
/// ring: tame diamonds act by (theta omega^{-1})(j).
#[derive(Debug, Clone)]
pub struct ThetaSector {
    pub ring_w: GaloisRing,
    pub theta: DirichletCharacter,
    /// Sector projector on cuspidal coords tensor W.
    pub projector: Mat<GrEl>,
    frame: Frame,
}

impl ThetaSector {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Basis of the sector inside cuspidal coordinates tensor W.
    pub fn basis_matrix(&self) -> &Mat<GrEl> {
        &self.frame.basis.basis
    }
}

/// The idempotent projecting a module-with-tame-diamond-action onto the
/// (theta omega^{-1})-eigenspace, assembled over W.
fn sector_projector(
    w: &GaloisRing,
    theta: &DirichletCharacter,
    np: u64,
    tame_diamonds: &[(u64, Mat<u64>)],
    e_ord: &Mat<u64>,
) -> Result<Mat<GrEl>> {
    let lw = Lin(w);
    let omega = DirichletCharacter::teichmuller(w)?.extend_to(np)?;
    let chi = theta.mul(&omega.inverse())?;
    let chi_inv = chi.inverse();
    let phi_inv = w.inv(&w.from_scalar(euler_phi(np) % w.zpm().modulus()))?;
    let d = e_ord.rows;
    let mut eps = lw.zeros(d, d);
    for (j, dmat) in tame_diamonds {
        let coeff = w.mul(&phi_inv, &chi_inv.eval(*j));
        if w.is_zero(&coeff) {
            continue;
        }
        eps = lw.add(&eps, &lw.scale(&coeff, &cast_mat(w, dmat)));
    }
    let proj = lw.mul(&eps, &cast_mat(w, e_ord));
    debug_assert!(lw.mul(&proj, &proj) == proj);
    Ok(proj)
}

pub fn theta_sector(
    ol: &OrdinaryLevel,
    lh: &LevelHecke,
    theta: &DirichletCharacter,
) -> Result<ThetaSector> {
    let w = theta.ring().clone();
    let np = ol.level.n() * ol.level.p();
    if theta.modulus() != np {
        return Err(Error::config(format!(
            "theta must have modulus Np = {np}, got {}",
            theta.modulus()
        )));
    }
    let proj = sector_projector(&w, theta, np, &lh.tame_diamond_cusp, &ol.e_cusp.e)?;
    let frame = Frame::new(&w, &proj);
    Ok(ThetaSector { ring_w: w, theta: theta.clone(), projector: proj, frame })
}

/// The Eisenstein locus: the part of a theta sector supported at the
/// Eisenstein maximal ideal, cut out as the joint generalized kernel of
/// the ideal generators (all computed in sector coordinates).
#[derive(Debug, Clone)]
pub struct EisensteinLocus {
    pub sector: ThetaSector,
    /// Projector onto the locus, in sector coordinates.
    proj_small: Mat<GrEl>,
    frame: Frame,
    /// Ideal generators restricted to locus coordinates, with labels.
    pub ideal_gens: Vec<(String, Mat<GrEl>)>,
    pub primes_used: Vec<u64>,
}

impl EisensteinLocus {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }
}

/// Ideal generators as matrices on sector coordinates.
fn ideal_gens_on_frame(
    w: &GaloisRing,
    frame: &Frame,
    t_ops: &[(u64, Mat<u64>)],
    full_diamonds: &[(u64, Mat<u64>)],
    u_ops: &[(u64, Mat<u64>)],
    wild_diamond: &Mat<u64>,
) -> Result<Vec<(String, Mat<GrEl>)>> {
    let lw = Lin(w);
    let s = frame.dim();
    let id = lw.identity(s);
    let mut out = Vec::new();
    out.push(("D1p".to_string(), lw.sub(&frame.restrict(w, &cast_mat(w, wild_diamond))?, &id)));
    for ((l, tl), (l2, dl)) in t_ops.iter().zip(full_diamonds) {
        debug_assert_eq!(l, l2);
        let tl_s = frame.restrict(w, &cast_mat(w, tl))?;
        let dl_s = frame.restrict(w, &cast_mat(w, dl))?;
        let mut g = lw.sub(&tl_s, &id);
        g = lw.sub(&g, &lw.scale(&w.from_scalar(*l % w.zpm().modulus()), &dl_s));
        out.push((format!("T{l}"), g));
    }
    for (l, ul) in u_ops {
        out.push((format!("U{l}"), lw.sub(&frame.restrict(w, &cast_mat(w, ul))?, &id)));
    }
    Ok(out)
}

/// Joint generalized kernel of the given commuting generators, as a
/// projector in the frame's coordinates.
fn nil_locus_projector(w: &GaloisRing, gens: &[(String, Mat<GrEl>)], dim: usize) -> Result<Mat<GrEl>> {
    let lw = Lin(w);
    let mut proj = lw.identity(dim);
    for (_, g) in gens {
        let gp = lw.mul(&lw.mul(&proj, g), &proj);
        let og = ordinary_projector_w(w, &gp)?;
        proj = lw.mul(&lw.sub(&lw.identity(dim), &og.e), &proj);
        if lw.rank(&proj) == 0 {
            break;
        }
    }
    Ok(proj)
}

/// Localize a theta sector at the Eisenstein maximal ideal
/// m = (ideal gens, p, <1+p> - 1).
pub fn m_localize(_ol: &OrdinaryLevel, lh: &LevelHecke, sector: &ThetaSector) -> Result<EisensteinLocus> {
    let w = sector.ring_w.clone();
    let gens = ideal_gens_on_frame(
        &w,
        &sector.frame,
        &lh.t_cusp,
        &lh.full_diamond_cusp,
        &lh.u_cusp,
        &lh.wild_diamond_cusp,
    )?;
    let proj_small = nil_locus_projector(&w, &gens, sector.dim())?;
    let frame = Frame::new(&w, &proj_small);
    // ideal generators restricted further to the locus (for the quotient);
    // skip the wild diamond, which is an m-generator but not an
    // Eisenstein-ideal generator
    let mut ideal_gens = Vec::new();
    if frame.dim() > 0 {
        for (name, g) in gens.iter().skip(1) {
            ideal_gens.push((name.clone(), frame.restrict(&w, g)?));
        }
        // the wild diamond constraint <1+p> - 1 belongs to m, not to the
        // ideal; quotient relations use only the ideal generators
    }
    let primes_used = lh.t_cusp.iter().map(|&(l, _)| l).collect();
    Ok(EisensteinLocus { sector: sector.clone(), proj_small, frame, ideal_gens, primes_used })
}

/// Z_p-length data for the quotient of W^d by a span of relation columns.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    pub ring_w: GaloisRing,
    ech: Mat<GrEl>,
    pivots: Vec<(usize, usize, u32)>,
    pub divisors: Vec<u32>,
    pub ambient_dim: usize,
    /// Z_p-length of the quotient (degree-weighted).
    pub p_length: u64,
    /// False when a divisor reached p^m or a free summand remains, i.e.
    /// the length claim needs more precision.
    pub definite: bool,
}

impl QuotientStructure {
    pub fn new(w: &GaloisRing, ambient_dim: usize, relations: &Mat<GrEl>) -> Self {
        let lw = Lin(w);
        let m = w.m() as u64;
        let deg = w.degree() as u64;
        let mut ech = relations.transpose();
        let pivots = lw.echelon(&mut ech, true);
        let divisors = lw.elementary_divisors(relations);
        let rank = divisors.len();
        let mut length: u64 = divisors.iter().map(|&e| e as u64).sum();
        length += (ambient_dim - rank) as u64 * m;
        let definite =
            ambient_dim == 0 || (rank == ambient_dim && divisors.iter().all(|&e| (e as u64) < m));
        QuotientStructure {
            ring_w: w.clone(),
            ech,
            pivots,
            divisors,
            ambient_dim,
            p_length: length * deg,
            definite,
        }
    }

    /// Canonical representative of the class of v.
    pub fn reduce(&self, v: &[GrEl]) -> Vec<GrEl> {
        Lin(&self.ring_w).reduce_vector(&self.ech, &self.pivots, v)
    }

    pub fn is_zero_class(&self, v: &[GrEl]) -> bool {
        let w = &self.ring_w;
        self.reduce(v).iter().all(|c| w.is_zero(c))
    }
}

/// The Eisenstein quotient: star-plus part of the locus modulo the
/// Eisenstein ideal, with the projection used to evaluate xi_bar(u:v).
#[derive(Debug, Clone)]
pub struct EisensteinQuotient {
    pub locus: EisensteinLocus,
    /// Basis of the star-plus part, in locus coordinates.
    plus: Span<GrEl>,
    pub quotient: QuotientStructure,
}

pub fn eisenstein_quotient(ol: &OrdinaryLevel, locus: &EisensteinLocus) -> Result<EisensteinQuotient> {
    let w = locus.sector.ring_w.clone();
    let lw = Lin(&w);
    if locus.dim() == 0 {
        let plus = lw.span(lw.zeros(0, 0));
        let quotient = QuotientStructure::new(&w, 0, &lw.zeros(0, 0));
        return Ok(EisensteinQuotient { locus: locus.clone(), plus, quotient });
    }
    // star on locus coordinates
    let star_w = cast_mat(&w, &ol.star_cusp);
    let star_sector = locus.sector.frame.restrict(&w, &star_w)?;
    let star_loc = locus.frame.restrict(&w, &star_sector)?;
    let t = locus.dim();
    let half = w.inv(&w.from_scalar(2))?;
    let mut plus_proj = star_loc.clone();
    for i in 0..t {
        let slot = plus_proj.at_mut(i, i);
        *slot = w.add(slot, &w.one());
    }
    plus_proj = lw.scale(&half, &plus_proj);
    let plus = lw.span(lw.image_basis(&plus_proj));
    // relations: ideal-generator images of the plus basis
    let mut rel_cols: Vec<Vec<GrEl>> = Vec::new();
    for (_, g_loc) in &locus.ideal_gens {
        for j in 0..plus.dim() {
            let gv = lw.matvec(g_loc, &plus.basis.col(j));
            // the ideal commutes with star, so the image stays in plus
            let gv_plus = lw.span_coords(&plus, &gv)?;
            rel_cols.push(gv_plus);
        }
    }
    let relations =
        if rel_cols.is_empty() { lw.zeros(plus.dim(), 0) } else { Mat::from_cols(rel_cols) };
    let quotient = QuotientStructure::new(&w, plus.dim(), &relations);
    Ok(EisensteinQuotient { locus: locus.clone(), plus, quotient })
}

impl EisensteinQuotient {
    pub fn is_trivial(&self) -> bool {
        self.plus.dim() == 0 || self.quotient.p_length == 0
    }

    pub fn plus_dim(&self) -> usize {
        self.plus.dim()
    }

    /// xi_bar(u:v): canonical representative of the image of
    /// xi_r(u:v)^+ in the quotient. Requires an integral xi.
    pub fn xi_bar(&self, ol: &OrdinaryLevel, u: i64, v: i64) -> Result<Vec<GrEl>> {
        let w = &self.locus.sector.ring_w;
        let lw = Lin(w);
        if self.is_trivial() {
            return Ok(vec![]);
        }
        let xi = ol.xi(u, v)?;
        if xi.denom != 0 {
            return Err(Error::precision(format!(
                "xi({u}:{v}) carries a denominator p^{}; xi_bar needs the integral part",
                xi.denom
            )));
        }
        // plus part first (integral over Z/p^m)
        let plus_z = ol.plus_projector_cusp();
        let xplus = Lin(ol.ring()).matvec(&plus_z, &xi.vec);
        let xw = cast_vec(w, &xplus);
        let in_sector = lw.matvec(&self.locus.sector.projector, &xw);
        let sc = self.locus.sector.frame.coords(w, &in_sector)?;
        let in_locus_small = lw.matvec(&self.locus.proj_small, &sc);
        let lc = self.locus.frame.coords(w, &in_locus_small)?;
        let pc = lw.span_coords(&self.plus, &lc)?;
        Ok(self.quotient.reduce(&pc))
    }
}

/// The congruence module: the Eisenstein-local star-plus sector of the
/// splitting lattice modulo the integral cuspidal lattice, generated by
/// the image of xi(0:1). Its order measures the splitting denominators
/// on the Eisenstein part.
#[derive(Debug, Clone)]
pub struct CongruenceModule {
    pub p_length: u64,
    /// Length of the submodule generated by the (0,1)-symbol image and
    /// its Hecke translates.
    pub generator_length: u64,
    pub generated_by_zero_one_cusp: bool,
}

pub fn congruence_module(
    ol: &OrdinaryLevel,
    lh: &LevelHecke,
    theta: &DirichletCharacter,
) -> Result<CongruenceModule> {
    let w = theta.ring().clone();
    let lw = Lin(&w);
    let ring = ol.ring();
    let sector = theta_sector(ol, lh, theta)?;
    let locus = m_localize(ol, lh, &sector)?;
    if locus.dim() == 0 {
        return Ok(CongruenceModule {
            p_length: 0,
            generator_length: 0,
            generated_by_zero_one_cusp: true,
        });
    }
    let quot = eisenstein_quotient(ol, &locus)?;
    if quot.plus.dim() == 0 {
        return Ok(CongruenceModule {
            p_length: 0,
            generator_length: 0,
            generated_by_zero_one_cusp: true,
        });
    }
    // common denominator D across the splittings of all symbol classes
    let denom = ol.splitting().denom_bound;
    let scale = ring.pow(ring.p(), denom as u64);
    // plus-locus coordinates of p^D * s_r(x) for x over the symbol basis
    let plus_z = ol.plus_projector_cusp();
    let to_plus_coords = |v: &[u64]| -> Result<Vec<GrEl>> {
        let vp = Lin(ring).matvec(&plus_z, v);
        let xw = cast_vec(&w, &vp);
        let in_sector = lw.matvec(&sector.projector, &xw);
        let sc = sector.frame.coords(&w, &in_sector)?;
        let in_locus = lw.matvec(&locus.proj_small, &sc);
        let lc = locus.frame.coords(&w, &in_locus)?;
        lw.span_coords(&quot.plus, &lc)
    };
    let mut cols: Vec<Vec<GrEl>> = Vec::new();
    let gen_col: Vec<GrEl>;
    for &g in ol.space.presentation().basis.iter() {
        let x = ol.space.gen_vector(g);
        let s = ol.splitting().split_ordinary(&ol.space, &x)?;
        // p^D * value = p^(D - s.denom) * s.vec
        let extra = ring.pow(ring.p(), (denom - s.denom) as u64);
        let scaled: Vec<u64> = s.vec.iter().map(|&c| ring.mul(extra, c)).collect();
        cols.push(to_plus_coords(&scaled)?);
    }
    // the distinguished generator: p^D * xi(0:1)
    {
        let xi = ol.xi(0, 1)?;
        let extra = ring.pow(ring.p(), (denom - xi.denom) as u64);
        let scaled: Vec<u64> = xi.vec.iter().map(|&c| ring.mul(extra, c)).collect();
        gen_col = to_plus_coords(&scaled)?;
    }
    let y = quot.plus.dim();
    // lattice columns p^D * Id
    let lattice: Vec<Vec<GrEl>> = (0..y)
        .map(|i| {
            let mut v = vec![w.zero(); y];
            v[i] = w.from_scalar(scale);
            v
        })
        .collect();
    let length_of = |module_cols: &[Vec<GrEl>]| -> u64 {
        let mut all = module_cols.to_vec();
        all.extend(lattice.clone());
        let mat = Mat::from_cols(all);
        let mut t = mat.transpose();
        let piv = lw.echelon(&mut t, true);
        piv.iter().map(|&(_, _, e)| (denom as u64).saturating_sub(e as u64) * w.degree() as u64).sum()
    };
    let p_length = length_of(&cols);
    // generator module: xi(0:1) plus a few Hecke translates
    let gen = gen_col;
    let mut gen_cols = vec![gen.clone()];
    for (_, tmat) in lh.t_cusp.iter().take(3) {
        let ts = sector.frame.restrict(&w, &cast_mat(&w, tmat))?;
        let tl = locus.frame.restrict(&w, &ts)?;
        let tp = lw.span_restrict(&quot.plus, &tl)?;
        gen_cols.push(lw.matvec(&tp, &gen));
    }
    let generator_length = length_of(&gen_cols);
    Ok(CongruenceModule {
        p_length,
        generator_length,
        generated_by_zero_one_cusp: generator_length == p_length && p_length > 0,
    })
}

/// The nontriviality biconditional: p | B_{1,theta} versus a nonzero
/// Eisenstein locus, both sides computed independently.
#[derive(Debug, Clone)]
pub struct Nontriviality {
    pub bernoulli_divisible: bool,
    pub bernoulli_valuation: Option<i64>,
    pub locus_rank: usize,
    pub locus_nonzero: bool,
    pub agree: bool,
}

pub fn check_eisenstein_nontriviality(
    ol: &OrdinaryLevel,
    lh: &LevelHecke,
    theta: &DirichletCharacter,
) -> Result<Nontriviality> {
    if !theta.is_odd() || !theta.is_primitive() {
        return Err(Error::domain("theta must be odd and primitive mod Np".to_string()));
    }
    let b = bernoulli1(theta)?;
    let sector = theta_sector(ol, lh, theta)?;
    let locus = m_localize(ol, lh, &sector)?;
    let locus_nonzero = locus.dim() > 0;
    let bernoulli_divisible = b.divisible_by_p();
    Ok(Nontriviality {
        bernoulli_divisible,
        bernoulli_valuation: b.val,
        locus_rank: locus.dim(),
        locus_nonzero,
        agree: bernoulli_divisible == locus_nonzero,
    })
}
