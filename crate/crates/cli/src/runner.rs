//! Subcommand implementations: each builds the needed objects and
//! returns an ordered list of check rows.

use eiskit::arith::dirichlet::{char_ring_for_modulus, DirichletCharacter, UnitGroup};
use eiskit::arith::galois::GaloisRing;
use eiskit::arith::zpm::Zpm;
use eiskit::arith::{divisors, gcd, primes_up_to};
use eiskit::cache::{cache_get, cache_key, cache_put};
use eiskit::distmod;
use eiskit::error::Error;
use eiskit::hecke::eisenstein::{
    self, cast_mat, check_eisenstein_nontriviality, congruence_module, eisenstein_prime_bound,
    eisenstein_quotient, m_localize, theta_sector, LevelHecke,
};
use eiskit::hecke::OrdinaryLevel;
use eiskit::linalg::dense::{Lin, Mat};
use eiskit::mazur_tate::{
    self, theta_element, verify_compare_divisor_level,
    verify_compare_full_star, verify_compare_specialized, verify_diamond_inversion,
    verify_distribution, verify_functional_equation_case, verify_star_odd_vanishing, CaseOutcome,
};
use eiskit::modcurve::cusps::{gamma1_cusp_count, gamma1_genus};
use eiskit::modcurve::level::Level;
use eiskit::modcurve::operators::{
    diamond_matrix, hecke_matrix, level_pushforward, star_projector,
};
use eiskit::modcurve::space::SymbolSpace;
use eiskit::pairing::{bilinear, twisted_gram, IntersectionPairing};
use eiskit::par::Exec;
use eiskit::relmod::{PairingSymbolModule, VarpiMap};
use eiskit::report::{CheckRow, Grade, Status};
use eiskit::Result;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub p: u64,
    pub n: u64,
    pub r: u32,
    pub m: u32,
    pub theta: String,
    pub exec: Exec,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    fn level(&self) -> Result<Level> {
        Level::new(self.n, self.p, self.r)
    }

    fn params(&self) -> String {
        format!("p={} N={} r={} m={}", self.p, self.n, self.r, self.m)
    }

    fn w_np(&self) -> Result<GaloisRing> {
        let zpm = Zpm::new(self.p, self.m + 1)?;
        char_ring_for_modulus(zpm, self.n * self.p)
    }

    /// Resolve the theta selector to odd primitive orbit representatives.
    fn thetas(&self) -> Result<Vec<DirichletCharacter>> {
        let w = self.w_np()?;
        let np = self.n * self.p;
        let group = UnitGroup::new(np)?;
        if self.theta == "all-odd-primitive" {
            let all = DirichletCharacter::all(&w, &group)?;
            return Ok(all
                .into_iter()
                .filter(|c| c.is_odd() && c.is_primitive() && c.is_orbit_representative())
                .collect());
        }
        if let Some(k) = self.theta.strip_prefix('w') {
            let k: i64 = k
                .parse()
                .map_err(|_| Error::config(format!("bad theta selector {}", self.theta)))?;
            let omega = DirichletCharacter::teichmuller(&w)?.extend_to(np)?;
            return Ok(vec![omega.pow(k)]);
        }
        if let Some(spec) = self.theta.strip_prefix("e:") {
            let exps: Vec<u64> = spec
                .split(',')
                .map(|t| t.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::config(format!("bad theta selector {}", self.theta)))?;
            return Ok(vec![DirichletCharacter::from_exponents(&w, &group, &exps)?]);
        }
        Err(Error::config(format!("unknown theta selector {}", self.theta)))
    }
}

type Rows = (String, Vec<CheckRow>);

fn build_level(cfg: &RunConfig) -> Result<OrdinaryLevel> {
    OrdinaryLevel::build(cfg.level()?, cfg.m, 2, cfg.exec)
}

// ---------------------------------------------------------------- space

pub fn run_space(cfg: &RunConfig, modulus_override: Option<u64>) -> Result<Rows> {
    let modulus = modulus_override.unwrap_or(cfg.n * cfg.p.pow(cfg.r));
    let ring = Zpm::new(cfg.p, cfg.m)?;
    let space = SymbolSpace::build(ring, modulus)?;
    let mut rows = Vec::new();
    let g = gamma1_genus(modulus);
    let c = gamma1_cusp_count(modulus);
    let rank_ok = space.rank() as u64 == 2 * g + c - 1;
    let cusp_ok = space.cuspidal().dim() as u64 == 2 * g;
    rows.push(CheckRow::new(
        "presentation-rank",
        Grade::Theorem,
        if rank_ok && cusp_ok { Status::Pass } else { Status::Fail },
        format!("{} modulus={modulus}", cfg.params()),
        format!(
            "relative rank {} (expected {}), cuspidal rank {} (expected {})",
            space.rank(),
            2 * g + c - 1,
            space.cuspidal().dim(),
            2 * g
        ),
    ));
    // spot relation rows on every symbol class
    let pairs = space.pairs();
    let mut two_ok = true;
    let mut three_ok = true;
    for idx in 0..pairs.len() {
        let (u, v) = pairs.pair(idx);
        let (u, v) = (u as i64, v as i64);
        let lev = modulus as i64;
        let a = pairs.index_of(u, v).unwrap();
        let b = pairs.index_of(-v, u).unwrap();
        if space.reduce_terms(&[(a, 1), (b, 1)]).iter().any(|&x| x != 0) {
            two_ok = false;
        }
        let s = (u + v).rem_euclid(lev);
        if s != 0 || gcd(u.rem_euclid(lev) as u64, modulus) == 1 {
            let c1 = pairs.index_of(u, s);
            let c2 = pairs.index_of(s, v);
            if let (Some(c1), Some(c2)) = (c1, c2) {
                if space
                    .reduce_terms(&[(a, 1), (c1, -1), (c2, -1)])
                    .iter()
                    .any(|&x| x != 0)
                {
                    three_ok = false;
                }
            }
        }
    }
    rows.push(CheckRow::new(
        "two-term-relation",
        Grade::Theorem,
        if two_ok { Status::Pass } else { Status::Fail },
        format!("{} modulus={modulus}", cfg.params()),
        format!("exhaustive over {} classes", pairs.len()),
    ));
    rows.push(CheckRow::new(
        "three-term-relation",
        Grade::Theorem,
        if three_ok { Status::Pass } else { Status::Fail },
        format!("{} modulus={modulus}", cfg.params()),
        "exhaustive over all classes with defined terms".to_string(),
    ));
    // cache round trip on a Hecke matrix
    if let Some(dir) = &cfg.cache_dir {
        let l = if modulus % 2 == 0 { 3 } else { 2 };
        let t = hecke_matrix(&space, l, cfg.exec);
        let key = cache_key(&format!("T{l}"), cfg.p, cfg.m, modulus, "");
        cache_put(dir, &key, ring.modulus(), &t)?;
        let back = cache_get(dir, &key)?;
        let ok = back.map(|(md, mat)| md == ring.modulus() && mat == t).unwrap_or(false);
        rows.push(CheckRow::new(
            "cache-roundtrip",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            format!("{} modulus={modulus}", cfg.params()),
            format!("key {key}"),
        ));
    }
    Ok(("space".to_string(), rows))
}

// ----------------------------------------------------------- eisenstein

pub fn run_eisenstein(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let bound = eisenstein_prime_bound(ol.level.modulus());
    let lh = LevelHecke::build(&ol, bound, cfg.exec)?;
    let thetas = cfg.thetas()?;
    let mut rows = Vec::new();
    for theta in &thetas {
        let nt = check_eisenstein_nontriviality(&ol, &lh, theta)?;
        let label = format!(
            "{} theta-exps={:?} locus-rank={} B-val={:?}",
            cfg.params(),
            theta.exponents(),
            nt.locus_rank,
            nt.bernoulli_valuation
        );
        rows.push(CheckRow::new(
            "eisenstein-locus-vs-bernoulli",
            Grade::Theorem,
            if nt.agree { Status::Pass } else { Status::Fail },
            label.clone(),
            format!(
                "p | B: {}, locus nonzero: {}",
                nt.bernoulli_divisible, nt.locus_nonzero
            ),
        ));
        if nt.locus_nonzero {
            let sector = theta_sector(&ol, &lh, theta)?;
            let locus = m_localize(&ol, &lh, &sector)?;
            let quot = eisenstein_quotient(&ol, &locus)?;
            rows.push(CheckRow::new(
                "eisenstein-quotient-order",
                Grade::Theorem,
                if quot.quotient.definite { Status::Pass } else { Status::Skipped },
                label.clone(),
                format!(
                    "plus dim {}, p-length {} (order p^{})",
                    quot.plus_dim(),
                    quot.quotient.p_length,
                    quot.quotient.p_length
                ),
            ));
            let cm = congruence_module(&ol, &lh, theta)?;
            rows.push(CheckRow::new(
                "congruence-module-cyclic",
                Grade::Theorem,
                if cm.generated_by_zero_one_cusp && cm.p_length == quot.quotient.p_length {
                    Status::Pass
                } else {
                    Status::Fail
                },
                label,
                format!(
                    "length {} (quotient {}), generator spans {}",
                    cm.p_length, quot.quotient.p_length, cm.generator_length
                ),
            ));
        }
    }
    Ok(("eisenstein".to_string(), rows))
}

// ------------------------------------------------------------- xi table

pub fn run_xi_table(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let bound = eisenstein_prime_bound(ol.level.modulus());
    let lh = LevelHecke::build(&ol, bound, cfg.exec)?;
    let thetas = cfg.thetas()?;
    let modulus = ol.level.modulus();
    let np = cfg.n * cfg.p;
    let mut rows = Vec::new();
    for theta in &thetas {
        let sector = theta_sector(&ol, &lh, theta)?;
        let locus = m_localize(&ol, &lh, &sector)?;
        let quot = eisenstein_quotient(&ol, &locus)?;
        if quot.is_trivial() {
            rows.push(CheckRow::new(
                "xi-table",
                Grade::Theorem,
                Status::Pass,
                format!("{} theta-exps={:?}", cfg.params(), theta.exponents()),
                "trivial quotient; empty table".to_string(),
            ));
            continue;
        }
        for u in 1..modulus {
            for v in 1..modulus {
                if gcd(gcd(u, v), np) != 1 {
                    continue;
                }
                let class = quot.xi_bar(&ol, u as i64, v as i64)?;
                let w = theta.ring();
                let entries: Vec<String> = class
                    .iter()
                    .map(|c| if w.is_zero(c) { "0".to_string() } else { format!("{c:?}") })
                    .collect();
                rows.push(CheckRow::new(
                    "xi-table",
                    Grade::Theorem,
                    Status::Pass,
                    format!("{} theta-exps={:?} u={u} v={v}", cfg.params(), theta.exponents()),
                    entries.join(";"),
                ));
            }
        }
    }
    Ok(("xi-table".to_string(), rows))
}

// ------------------------------------------------------------ mazur-tate

/// Even characters mod Np at the working precision, orbit-deduplicated.
fn even_characters(cfg: &RunConfig) -> Result<Vec<DirichletCharacter>> {
    let w = cfg.w_np()?;
    let group = UnitGroup::new(cfg.n * cfg.p)?;
    Ok(DirichletCharacter::all(&w, &group)?
        .into_iter()
        .filter(|c| c.is_even())
        .collect())
}

pub fn run_mazur_tate(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let mut rows = Vec::new();
    // distribution identity, exhaustive
    let rep = verify_distribution(&ol, cfg.exec)?;
    rows.push(CheckRow::new(
        "hecke-aggregation",
        Grade::Theorem,
        if rep.all_passed() { Status::Pass } else { Status::Fail },
        cfg.params(),
        format!("{} cases, {} failures", rep.passes + rep.failures.len(), rep.failures.len()),
    ));
    // residue invariance of xi on shifted representatives
    {
        let ring = ol.ring();
        let modulus = ol.level.modulus() as i64;
        let mut ok = true;
        for (u, v) in [(1i64, 1i64), (2, 3), (1, 0), (0, 1)] {
            let a = ol.xi(u, v)?;
            let b = ol.xi(u + modulus, v - modulus)?;
            if !a.eq_mod(ring, &b, cfg.m)? {
                ok = false;
            }
        }
        rows.push(CheckRow::new(
            "xi-residue-invariance",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            "shifted-representative recomputation".to_string(),
        ));
    }
    let evens = even_characters(cfg)?;
    let w = cfg.w_np()?;
    let group1 = UnitGroup::new(1)?;
    let trivial = DirichletCharacter::trivial(&w, &group1);
    // diamond inversion, exhaustive in j at two (alpha, k) points
    for (alpha, k) in [(&trivial, 2i64), (evens.last().unwrap_or(&trivial), 3i64)] {
        let rep = verify_diamond_inversion(&ol, alpha, k)?;
        rows.push(CheckRow::new(
            "diamond-inversion",
            Grade::Theorem,
            if rep.all_passed() { Status::Pass } else { Status::Fail },
            format!("{} alpha-exps={:?} k={k}", cfg.params(), alpha.exponents()),
            format!("{} units checked", rep.passes),
        ));
    }
    // theta layers
    let theta_full = theta_element(&ol, 1, false)?;
    let theta_star = theta_element(&ol, 1, true)?;
    // functional equation grid (20 points)
    let alphas: Vec<DirichletCharacter> = evens.iter().take(2).cloned().collect();
    let chis: Vec<DirichletCharacter> = evens.iter().rev().take(3).cloned().collect();
    let mut fe_pass = 0usize;
    let mut fe_fail = Vec::new();
    let mut count = 0usize;
    'fe: for alpha in &alphas {
        for k in [2i64, 3] {
            for chi in &chis {
                for s in [1i64, 2] {
                    if count >= 20 {
                        break 'fe;
                    }
                    count += 1;
                    match verify_functional_equation_case(&ol, &theta_full, alpha, k, chi, s)? {
                        CaseOutcome::Pass => fe_pass += 1,
                        CaseOutcome::Fail(w) => fe_fail.push(format!("k={k} s={s}: {w}")),
                        CaseOutcome::SkippedHypothesis(_) => {}
                    }
                }
            }
        }
    }
    rows.push(CheckRow::new(
        "functional-equation",
        Grade::Theorem,
        if fe_fail.is_empty() { Status::Pass } else { Status::Fail },
        cfg.params(),
        format!("{fe_pass} grid points passed; failures: {fe_fail:?}"),
    ));
    // star layer vanishes under odd alpha
    {
        let odd = DirichletCharacter::all(&w, &UnitGroup::new(cfg.n * cfg.p)?)?
            .into_iter()
            .find(|c| c.is_odd());
        if let Some(alpha) = odd {
            let out = verify_star_odd_vanishing(&ol, &theta_star, &alpha, 2, &trivial, 1)?;
            rows.push(CheckRow::new(
                "star-odd-vanishing",
                Grade::Theorem,
                match out {
                    CaseOutcome::Pass => Status::Pass,
                    CaseOutcome::Fail(_) => Status::Fail,
                    CaseOutcome::SkippedHypothesis(_) => Status::Skipped,
                },
                format!("{} alpha-exps odd", cfg.params()),
                "P_(alpha kappa^2) of the star layer".to_string(),
            ));
        }
    }
    // comparison identities (nontrivial only for N > 1 or M = 1 vs N)
    let mut cmp_rows = run_compare_block(cfg, &ol, &theta_full, &theta_star, &evens)?;
    rows.append(&mut cmp_rows);
    // level pushforward when r >= 2
    if cfg.r >= 2 {
        let lo_cfg = RunConfig { r: cfg.r - 1, ..cfg.clone() };
        let ol_lo = build_level(&lo_cfg)?;
        let push = level_pushforward(&ol.space, &ol_lo.space)?;
        // restrict to cuspidal coordinates
        let ring = ol.ring();
        let lin = Lin(ring);
        let mut cols = Vec::new();
        for j in 0..ol.space.cuspidal().dim() {
            let amb_hi = ol.space.cuspidal().basis.col(j);
            let amb_lo = lin.matvec(&push, &amb_hi);
            cols.push(ol_lo.space.cuspidal().coords(ring, &amb_lo)?);
        }
        let push_cusp = if cols.is_empty() {
            lin.zeros(ol_lo.space.cuspidal().dim(), 0)
        } else {
            Mat::from_cols(cols)
        };
        let pushed = theta_star.pushforward(&ol, &ol_lo, &push_cusp)?;
        let target = theta_element(&ol_lo, 1, true)?;
        let mut ok = true;
        for j in 0..ol_lo.level.modulus() {
            let a = pushed.coeffs[j as usize].clone();
            let b = target.coeffs[j as usize].clone();
            match (a, b) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    if !x.eq_mod(ring, &y, cfg.m)? {
                        ok = false;
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    if !x.is_zero_mod(ring, cfg.m)? {
                        ok = false;
                    }
                }
            }
        }
        rows.push(CheckRow::new(
            "theta-pushforward",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            format!("level {} -> {}", ol.level.modulus(), ol_lo.level.modulus()),
        ));
    }
    // Eisenstein-local membership of the star coefficients
    {
        let bound = eisenstein_prime_bound(ol.level.modulus());
        let lh = LevelHecke::build(&ol, bound, cfg.exec)?;
        let mut ok = true;
        let mut checked = 0usize;
        for theta in cfg.thetas()? {
            let sector = theta_sector(&ol, &lh, &theta)?;
            let locus = m_localize(&ol, &lh, &sector)?;
            if locus.dim() == 0 {
                continue;
            }
            let quot = eisenstein_quotient(&ol, &locus)?;
            if quot.is_trivial() {
                continue;
            }
            for c in theta_star.coeffs.iter().flatten() {
                if c.denom > 0 {
                    checked += 1;
                    // the locus projection of the scaled vector must be
                    // divisible by the denominator
                    let ring = ol.ring();
                    let w = theta.ring();
                    let lw = Lin(w);
                    let xw = eisenstein::cast_vec(w, &c.vec);
                    let proj = lw.matvec(&sector.projector, &xw);
                    let div = proj.iter().all(|x| w.val(x) >= c.denom);
                    if !div {
                        ok = false;
                    }
                    let _ = ring;
                }
            }
        }
        rows.push(CheckRow::new(
            "theta-local-membership",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            format!("{checked} denominator-bearing coefficients checked"),
        ));
    }
    Ok(("mazur-tate".to_string(), rows))
}

fn run_compare_block(
    cfg: &RunConfig,
    ol: &OrdinaryLevel,
    theta_full: &mazur_tate::MazurTateElement,
    _theta_star: &mazur_tate::MazurTateElement,
    evens: &[DirichletCharacter],
) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let theta_star = theta_element(ol, 1, true)?;
    // full-vs-star and specialized comparisons over a grid of chi, s
    let full_period: Vec<&DirichletCharacter> =
        evens.iter().filter(|c| c.is_primitive() && !c.is_trivial()).collect();
    let mut grid: Vec<(DirichletCharacter, i64)> = Vec::new();
    for chi in full_period.iter().take(4) {
        grid.push(((*chi).clone(), 1));
        grid.push(((*chi).clone(), 2));
    }
    // kappa-heavy fallback points (exact because the finite part kills
    // the Euler terms or the kappa power vanishes mod p^m)
    if let Some(chi) = full_period.first() {
        grid.push(((*chi).clone(), 3));
        grid.push(((*chi).clone(), 4));
    }
    let mut pass = 0usize;
    let mut skipped = 0usize;
    let mut failures = Vec::new();
    for (chi, s) in &grid {
        match verify_compare_full_star(ol, theta_full, &theta_star, chi, *s, cfg.exec)? {
            CaseOutcome::Pass => pass += 1,
            CaseOutcome::SkippedHypothesis(_) => skipped += 1,
            CaseOutcome::Fail(w) => {
                failures.push(format!("chi-exps={:?} s={s}: {w}", chi.exponents()))
            }
        }
    }
    rows.push(CheckRow::new(
        "compare-full-vs-star",
        Grade::Theorem,
        if failures.is_empty() && pass > 0 {
            Status::Pass
        } else if failures.is_empty() {
            Status::Skipped
        } else {
            Status::Fail
        },
        cfg.params(),
        format!("{pass} pass, {skipped} skipped; failures: {failures:?}"),
    ));
    // specialized version at one (alpha, k)
    if let Some(alpha) = evens.first() {
        let mut pass = 0usize;
        let mut skipped = 0usize;
        let mut failures = Vec::new();
        for (chi, s) in grid.iter().take(5) {
            match verify_compare_specialized(ol, theta_full, &theta_star, alpha, 2, chi, *s, cfg.exec)? {
                CaseOutcome::Pass => pass += 1,
                CaseOutcome::SkippedHypothesis(_) => skipped += 1,
                CaseOutcome::Fail(w) => failures.push(w),
            }
        }
        rows.push(CheckRow::new(
            "compare-specialized",
            Grade::Theorem,
            if failures.is_empty() && pass > 0 {
                Status::Pass
            } else if failures.is_empty() {
                Status::Skipped
            } else {
                Status::Fail
            },
            format!("{} alpha-exps={:?} k=2", cfg.params(), alpha.exponents()),
            format!("{pass} pass, {skipped} skipped; failures: {failures:?}"),
        ));
    }
    // divisor-level comparison for each divisor M of N
    if cfg.n > 1 {
        let mut pass = 0usize;
        let mut skipped = 0usize;
        let mut failures = Vec::new();
        for m_div in divisors(cfg.n) {
            if m_div == cfg.n {
                continue; // Q = 1 handled, M = N is the identity case
            }
            let theta_m = theta_element(ol, m_div, false)?;
            // hypothesis f_{alpha/chi} | Q with alpha = chi: always holds
            for chi in evens.iter().filter(|c| !c.is_trivial()).take(2) {
                for s in [1i64, 2] {
                    let k = s + 1; // kappa exponent k-s-1 = 0: exact
                    match verify_compare_divisor_level(
                        ol, theta_full, &theta_m, chi, k, chi, s, cfg.exec,
                    )? {
                        CaseOutcome::Pass => pass += 1,
                        CaseOutcome::SkippedHypothesis(_) => skipped += 1,
                        CaseOutcome::Fail(w) => {
                            failures.push(format!("M={m_div} s={s}: {w}"))
                        }
                    }
                }
            }
        }
        rows.push(CheckRow::new(
            "compare-divisor-level",
            Grade::Theorem,
            if failures.is_empty() && pass > 0 {
                Status::Pass
            } else if failures.is_empty() {
                Status::Skipped
            } else {
                Status::Fail
            },
            cfg.params(),
            format!("{pass} pass, {skipped} skipped; failures: {failures:?}"),
        ));
    }
    Ok(rows)
}

// ----------------------------------------------------------------- units

pub fn run_units(cfg: &RunConfig) -> Result<Rows> {
    let w = cfg.w_np()?;
    let mut rows = Vec::new();
    // Moebius sieve in the star group ring
    let sieve_ok = distmod::mobius_sieve_check(&w, cfg.n, cfg.p, cfg.r, 1)
        && distmod::mobius_sieve_check(&w, cfg.n, cfg.p, cfg.r, cfg.n);
    rows.push(CheckRow::new(
        "mobius-sieve",
        Grade::Theorem,
        if sieve_ok { Status::Pass } else { Status::Fail },
        cfg.params(),
        "star-group-ring aggregation identity".to_string(),
    ));
    // normal-form idempotency and relation completeness at this level
    {
        let level = cfg.n * cfg.p.pow(cfg.r);
        let mut ok = true;
        for d in divisors(level) {
            if d <= 1 || d == level {
                continue;
            }
            for i in 1..d {
                let mut x = distmod::DistModElement::zero(level);
                x.add_term(&w, d, i, &w.one())?;
                for k in 0..(level / d) {
                    x.add_term(&w, level, (i + k * d) % level, &w.from_i64(-1))?;
                }
                if !x.is_zero_mod(&w, cfg.m) {
                    ok = false;
                }
            }
        }
        rows.push(CheckRow::new(
            "distribution-normal-form",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            "relation submodule normal-forms to zero".to_string(),
        ));
    }
    // unit comparisons: run at a level exponent high enough for the
    // requested precision
    let r_units = cfg.m + 1;
    let evens: Vec<DirichletCharacter> = {
        let group = UnitGroup::new(cfg.n * cfg.p)?;
        DirichletCharacter::all(&w, &group)?.into_iter().filter(|c| c.is_even()).collect()
    };
    let mut a_pass = 0usize;
    let mut a_skip = 0usize;
    let mut a_fail = Vec::new();
    for m_div in divisors(cfg.n * cfg.p) {
        for psi in evens.iter().take(3) {
            for t in [1i64, 2] {
                match distmod::verify_compare_units_a(
                    &w, cfg.n, cfg.p, r_units, m_div, psi, t, cfg.m,
                )? {
                    distmod::UnitCompareOutcome::Pass { .. } => a_pass += 1,
                    distmod::UnitCompareOutcome::Skipped(_) => a_skip += 1,
                    distmod::UnitCompareOutcome::Fail { effective_precision } => a_fail
                        .push(format!(
                            "M={m_div} psi-exps={:?} t={t} (mod p^{effective_precision})",
                            psi.exponents()
                        )),
                }
            }
        }
    }
    rows.push(CheckRow::new(
        "unit-euler-factor",
        Grade::Theorem,
        if a_fail.is_empty() { Status::Pass } else { Status::Fail },
        format!("{} r-units={r_units}", cfg.params()),
        format!("{a_pass} pass, {a_skip} skipped; failures: {a_fail:?}"),
    ));
    let mut b_pass = 0usize;
    let mut b_skip = 0usize;
    let mut b_fail = Vec::new();
    for q_div in divisors(cfg.n) {
        for psi in evens.iter().take(3) {
            for t in [1i64, 2] {
                match distmod::verify_compare_units_b(
                    &w, cfg.n, cfg.p, r_units, q_div, psi, t, cfg.m,
                )? {
                    distmod::UnitCompareOutcome::Pass { .. } => b_pass += 1,
                    distmod::UnitCompareOutcome::Skipped(_) => b_skip += 1,
                    distmod::UnitCompareOutcome::Fail { effective_precision } => b_fail
                        .push(format!(
                            "Q={q_div} psi-exps={:?} t={t} (mod p^{effective_precision})",
                            psi.exponents()
                        )),
                }
            }
        }
    }
    rows.push(CheckRow::new(
        "unit-index-ratio",
        Grade::Theorem,
        if b_fail.is_empty() { Status::Pass } else { Status::Fail },
        format!("{} r-units={r_units}", cfg.params()),
        format!("{b_pass} pass, {b_skip} skipped; failures: {b_fail:?}"),
    ));
    // dual pushforward cross-level compatibility
    {
        let hi = cfg.n * cfg.p.pow(cfg.r + 1);
        let lo = cfg.n * cfg.p.pow(cfg.r);
        let mut values = Vec::new();
        for i in 1..=hi / 2 {
            values.push(w.from_scalar((i * i + 3 * i + 1) % w.zpm().modulus()));
        }
        let phi_hi = distmod::DualFunctional::from_basis_values(hi, values)?;
        let phi_lo = phi_hi.restrict_to_level(&w, lo)?;
        let lhs = phi_hi.pushforward(&w).pushforward(&w, lo)?;
        let rhs = phi_lo.pushforward(&w);
        rows.push(CheckRow::new(
            "dual-pushforward-compat",
            Grade::Theorem,
            if lhs == rhs { Status::Pass } else { Status::Fail },
            format!("{} levels {hi} -> {lo}", cfg.params()),
            "functional pushforward matches restriction".to_string(),
        ));
    }
    Ok(("units".to_string(), rows))
}

// ---------------------------------------------------------------- varpi

pub fn run_varpi(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let thetas = cfg.thetas()?;
    let mut rows = Vec::new();
    for theta in &thetas {
        let module = PairingSymbolModule::build(ol.level.modulus(), cfg.n * cfg.p, theta)?;
        let varpi = VarpiMap::new(&module, &ol)?;
        let (checked, failures) = varpi.verify_well_defined()?;
        rows.push(CheckRow::new(
            "relation-module-well-defined",
            Grade::Theorem,
            if failures.is_empty() { Status::Pass } else { Status::Fail },
            format!("{} theta-exps={:?}", cfg.params(), theta.exponents()),
            format!("{checked} relation images checked; failures: {failures:?}"),
        ));
        // equivariance samples
        let modulus = ol.level.modulus();
        let mut samples = Vec::new();
        for j in 2..modulus.min(6) {
            if gcd(j, modulus) == 1 {
                samples.push((1i64, 2i64, j));
                samples.push((3i64, 1i64, j));
            }
        }
        let eq_failures = varpi.verify_equivariance(&samples)?;
        rows.push(CheckRow::new(
            "relation-module-equivariance",
            Grade::Theorem,
            if eq_failures.is_empty() { Status::Pass } else { Status::Fail },
            format!("{} theta-exps={:?}", cfg.params(), theta.exponents()),
            format!("{} samples", samples.len()),
        ));
        // Eisenstein transport: T_2 and T_3 are theorem-grade
        for l in [2u64, 3] {
            if (cfg.n * cfg.p) % l == 0 {
                continue;
            }
            let (checked, failures) = varpi.verify_eisenstein_property(l, cfg.exec)?;
            rows.push(CheckRow::new(
                "eisenstein-hecke-transport",
                Grade::Theorem,
                if failures.is_empty() { Status::Pass } else { Status::Fail },
                format!("{} theta-exps={:?} l={l}", cfg.params(), theta.exponents()),
                format!("{checked} cuspidal plus basis vectors"),
            ));
        }
        // exploratory primes: conjecture-grade
        for l in primes_up_to(11) {
            if l <= 3 || (cfg.n * cfg.p) % l == 0 {
                continue;
            }
            let (checked, failures) = varpi.verify_eisenstein_property(l, cfg.exec)?;
            rows.push(CheckRow::new(
                "eisenstein-hecke-transport",
                Grade::Conjecture,
                if failures.is_empty() { Status::Pass } else { Status::Finding },
                format!("{} theta-exps={:?} l={l}", cfg.params(), theta.exponents()),
                format!("{checked} cuspidal plus basis vectors (exploratory)"),
            ));
        }
    }
    Ok(("varpi".to_string(), rows))
}

// ---------------------------------------------------------------- shadow

pub fn run_shadow(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let bound = eisenstein_prime_bound(ol.level.modulus());
    let lh = LevelHecke::build(&ol, bound, cfg.exec)?;
    let thetas = cfg.thetas()?;
    let modulus = ol.level.modulus();
    let np = cfg.n * cfg.p;
    let mut rows = Vec::new();
    for theta in &thetas {
        let sector = theta_sector(&ol, &lh, theta)?;
        let locus = m_localize(&ol, &lh, &sector)?;
        let quot = eisenstein_quotient(&ol, &locus)?;
        let label = format!("{} theta-exps={:?}", cfg.params(), theta.exponents());
        if quot.is_trivial() {
            for check in ["shadow-antisymmetry", "shadow-diagonal", "shadow-negation"] {
                rows.push(CheckRow::new(
                    check,
                    Grade::Conjecture,
                    Status::Pass,
                    label.clone(),
                    "trivial quotient (vacuous)".to_string(),
                ));
            }
            continue;
        }
        let w = theta.ring();
        // memoize xi-bar over residues
        let mut memo: Vec<Option<Vec<eiskit::arith::galois::GrEl>>> =
            vec![None; (modulus * modulus) as usize];
        let mut xi_bar = |u: u64, v: u64| -> Result<Vec<eiskit::arith::galois::GrEl>> {
            let key = (u * modulus + v) as usize;
            if memo[key].is_none() {
                memo[key] = Some(quot.xi_bar(&ol, u as i64, v as i64)?);
            }
            Ok(memo[key].clone().unwrap())
        };
        let mut anti_fail = Vec::new();
        let mut diag_fail = Vec::new();
        let mut neg_fail = Vec::new();
        let mut checked = 0usize;
        for u in 1..modulus {
            for v in 1..modulus {
                if gcd(gcd(u, v), np) != 1 {
                    continue;
                }
                checked += 1;
                let a = xi_bar(u, v)?;
                let b = xi_bar(v, u)?;
                let sum: Vec<_> = a.iter().zip(&b).map(|(x, y)| w.add(x, y)).collect();
                if !quot.quotient.is_zero_class(&sum) {
                    anti_fail.push((u, v));
                }
                if u == v && !quot.quotient.is_zero_class(&a) {
                    diag_fail.push(u);
                }
                let c = xi_bar(u, (modulus - v) % modulus)?;
                let d = xi_bar((modulus - u) % modulus, (modulus - v) % modulus)?;
                if a != c || a != d {
                    neg_fail.push((u, v));
                }
            }
        }
        let mk = |name: &'static str, fails: usize, detail: String| {
            CheckRow::new(
                name,
                Grade::Conjecture,
                if fails == 0 { Status::Pass } else { Status::Finding },
                label.clone(),
                detail,
            )
        };
        rows.push(mk(
            "shadow-antisymmetry",
            anti_fail.len(),
            format!("{checked} pairs; failures: {anti_fail:?}"),
        ));
        rows.push(mk(
            "shadow-diagonal",
            diag_fail.len(),
            format!("failures: {diag_fail:?}"),
        ));
        rows.push(mk(
            "shadow-negation",
            neg_fail.len(),
            format!("failures: {neg_fail:?}"),
        ));
    }
    Ok(("shadow".to_string(), rows))
}

// --------------------------------------------------------------- pairing

pub fn run_pairing(cfg: &RunConfig) -> Result<Rows> {
    let ol = build_level(cfg)?;
    let ring = ol.ring();
    let lin = Lin(ring);
    let space = &ol.space;
    let pairing = IntersectionPairing::build(space)?;
    let mut rows = Vec::new();
    // antisymmetry
    let gt = pairing.gram.transpose();
    let sum = lin.add(&pairing.gram, &gt);
    rows.push(CheckRow::new(
        "pairing-antisymmetry",
        Grade::Theorem,
        if lin.is_zero_mat(&sum) { Status::Pass } else { Status::Fail },
        cfg.params(),
        "Gram + Gram^T = 0 on the cuspidal space".to_string(),
    ));
    // twisted pairing on the ordinary part
    let wc = space.cuspidal().restrict(ring, &ol.w)?;
    let g_tw = twisted_gram(ring, &pairing.gram, &wc, &ol.up_cusp, cfg.r);
    let ord_basis = lin.image_basis(&ol.e_cusp.e);
    let (perfect, dim_ord) = if ord_basis.cols == 0 {
        (true, 0)
    } else {
        let m_ord = lin.mul(&lin.mul(&ord_basis.transpose(), &g_tw), &ord_basis);
        (lin.det_val(&m_ord) == Some(0), ord_basis.cols)
    };
    rows.push(CheckRow::new(
        "pairing-perfect",
        Grade::Theorem,
        if perfect { Status::Pass } else { Status::Fail },
        cfg.params(),
        format!("ordinary rank {dim_ord}; unit Gram determinant: {perfect}"),
    ));
    // self-adjointness of Hecke operators for the twisted pairing
    let mut adjoint_ok = true;
    for l in [2u64, 3, 7] {
        if ol.level.modulus() % l == 0 {
            continue;
        }
        let t = hecke_matrix(space, l, cfg.exec);
        let tc = space.cuspidal().restrict(ring, &t)?;
        let lhs = lin.mul(&g_tw, &tc);
        let rhs = lin.mul(&tc.transpose(), &g_tw);
        if ord_basis.cols > 0 {
            let d = lin.sub(&lhs, &rhs);
            let dd = lin.mul(&lin.mul(&ord_basis.transpose(), &d), &ord_basis);
            if !lin.is_zero_mat(&dd) {
                adjoint_ok = false;
            }
        }
    }
    // U_p self-adjointness
    {
        let d = lin.sub(&lin.mul(&g_tw, &ol.up_cusp), &lin.mul(&ol.up_cusp.transpose(), &g_tw));
        if ord_basis.cols > 0 {
            let dd = lin.mul(&lin.mul(&ord_basis.transpose(), &d), &ord_basis);
            if !lin.is_zero_mat(&dd) {
                adjoint_ok = false;
            }
        }
    }
    rows.push(CheckRow::new(
        "pairing-self-adjoint",
        Grade::Theorem,
        if adjoint_ok { Status::Pass } else { Status::Fail },
        cfg.params(),
        "T_2, T_3, T_7, U_p on the ordinary part".to_string(),
    ));
    // star-eigenspace isotropy
    {
        let plus = star_projector(ring, &ol.star_cusp, 1);
        let minus = star_projector(ring, &ol.star_cusp, -1);
        let pp = lin.mul(&lin.mul(&plus.transpose(), &g_tw), &plus);
        let mm = lin.mul(&lin.mul(&minus.transpose(), &g_tw), &minus);
        let ok = lin.is_zero_mat(&pp) && lin.is_zero_mat(&mm);
        rows.push(CheckRow::new(
            "pairing-isotropy",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            "each star eigenspace pairs trivially with itself".to_string(),
        ));
    }
    // diamond bilinearity of the group-ring layer on samples
    {
        let w = cfg.w_np()?;
        let mut ok = true;
        let cd = space.cuspidal().dim();
        if cd >= 2 {
            let mut x = vec![0u64; cd];
            x[0] = 1;
            let mut y = vec![0u64; cd];
            y[cd - 1] = 1;
            let base = eiskit::pairing::group_ring_pairing(&ol, &g_tw, &x, &y, &w)?;
            for a in 2..ol.level.modulus().min(8) {
                if gcd(a, ol.level.modulus()) != 1 {
                    continue;
                }
                let da = diamond_matrix(space, a)?;
                let dac = space.cuspidal().restrict(ring, &da)?;
                let ax = lin.matvec(&dac, &x);
                let lhs = eiskit::pairing::group_ring_pairing(&ol, &g_tw, &ax, &y, &w)?;
                let rhs = {
                    let ta = eiskit::arith::group_ring::GroupRingElem::basis(
                        &w,
                        ol.level.modulus(),
                        a,
                    )?;
                    base.mul(&w, &ta)
                };
                if lhs != rhs {
                    ok = false;
                }
            }
        }
        rows.push(CheckRow::new(
            "pairing-diamond-bilinear",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            "<<a>x, y> = [a] <x, y> on samples".to_string(),
        ));
    }
    // sector perfectness of the group-ring layer at the theta sectors
    {
        let bound = eisenstein_prime_bound(ol.level.modulus());
        let lh = LevelHecke::build(&ol, bound, cfg.exec)?;
        let mut ok = true;
        let mut nontrivial = 0usize;
        for theta in cfg.thetas()? {
            let sector = theta_sector(&ol, &lh, &theta)?;
            if sector.dim() == 0 {
                continue;
            }
            nontrivial += 1;
            let w = theta.ring();
            let lw = Lin(w);
            let g_w = cast_mat(w, &g_tw);
            let sb = sector.basis_matrix();
            let m_sec = lw.mul(&lw.mul(&sb.transpose(), &g_w), sb);
            if lw.det_val(&m_sec) != Some(0) {
                ok = false;
            }
        }
        rows.push(CheckRow::new(
            "pairing-sector-perfect",
            Grade::Theorem,
            if ok { Status::Pass } else { Status::Fail },
            cfg.params(),
            format!("{nontrivial} nontrivial sectors"),
        ));
    }
    // level compatibility when r >= 2
    if cfg.r >= 2 {
        let lo_cfg = RunConfig { r: cfg.r - 1, ..cfg.clone() };
        let ol_lo = build_level(&lo_cfg)?;
        let status = verify_pairing_level_compat(cfg, &ol, &ol_lo)?;
        rows.push(status);
    }
    Ok(("pairing".to_string(), rows))
}

/// The level-compatibility identity of the pairing layers:
/// (a, sum_k <1+kNp^(r-1)> b)_r = (push a, push b)_(r-1) on ordinary
/// cuspidal classes.
fn verify_pairing_level_compat(
    cfg: &RunConfig,
    ol: &OrdinaryLevel,
    ol_lo: &OrdinaryLevel,
) -> Result<CheckRow> {
    let ring = ol.ring();
    let lin = Lin(ring);
    let space = &ol.space;
    let pairing_hi = IntersectionPairing::build(space)?;
    let pairing_lo = IntersectionPairing::build(&ol_lo.space)?;
    let w_hi = space.cuspidal().restrict(ring, &ol.w)?;
    let w_lo = ol_lo.space.cuspidal().restrict(ring, &ol_lo.w)?;
    let g_hi = twisted_gram(ring, &pairing_hi.gram, &w_hi, &ol.up_cusp, cfg.r);
    let g_lo = twisted_gram(ring, &pairing_lo.gram, &w_lo, &ol_lo.up_cusp, cfg.r - 1);
    // diamond sum operator sum_k <1 + k N p^(r-1)>
    let np_low = cfg.n * cfg.p.pow(cfg.r - 1);
    let mut dsum = lin.zeros(space.cuspidal().dim(), space.cuspidal().dim());
    for k in 0..cfg.p {
        let idx = (1 + k * np_low) % ol.level.modulus();
        let d = diamond_matrix(space, idx)?;
        dsum = lin.add(&dsum, &space.cuspidal().restrict(ring, &d)?);
    }
    // pushforward on cuspidal coordinates
    let push = level_pushforward(space, &ol_lo.space)?;
    let mut cols = Vec::new();
    for j in 0..space.cuspidal().dim() {
        let amb = space.cuspidal().basis.col(j);
        let lo = lin.matvec(&push, &amb);
        cols.push(ol_lo.space.cuspidal().coords(ring, &lo)?);
    }
    let push_cusp = Mat::from_cols(cols);
    // ordinary bases
    let ord = lin.image_basis(&ol.e_cusp.e);
    let mut ok = true;
    let mut checked = 0usize;
    for i in 0..ord.cols {
        for j in 0..ord.cols {
            let a = ord.col(i);
            let b = ord.col(j);
            let lhs = bilinear(&lin, &g_hi, &a, &lin.matvec(&dsum, &b));
            let pa = lin.matvec(&push_cusp, &a);
            let pb = lin.matvec(&push_cusp, &b);
            let rhs = bilinear(&lin, &g_lo, &pa, &pb);
            checked += 1;
            let modulus = ring.p().pow(cfg.m);
            if lhs % modulus != rhs % modulus {
                ok = false;
            }
        }
    }
    Ok(CheckRow::new(
        "pairing-level-compat",
        Grade::Theorem,
        if ok { Status::Pass } else { Status::Fail },
        cfg.params(),
        format!(
            "{checked} ordinary pairs at levels {} -> {}",
            ol.level.modulus(),
            ol_lo.level.modulus()
        ),
    ))
}

// ------------------------------------------------------------------- all

pub fn run_all(cfg: &RunConfig) -> Result<Rows> {
    let mut rows = Vec::new();
    let (_, mut r) = run_space(cfg, None)?;
    rows.append(&mut r);
    let (_, mut r) = run_eisenstein(cfg)?;
    rows.append(&mut r);
    let (_, mut r) = run_mazur_tate(cfg)?;
    rows.append(&mut r);
    let (_, mut r) = run_units(cfg)?;
    rows.append(&mut r);
    let (_, mut r) = run_varpi(cfg)?;
    rows.append(&mut r);
    let (_, mut r) = run_shadow(cfg)?;
    rows.append(&mut r);
    let (_, mut r) = run_pairing(cfg)?;
    rows.append(&mut r);
    Ok(("all".to_string(), rows))
}
