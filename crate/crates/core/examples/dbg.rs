use eiskit::arith::dirichlet::{char_ring_for_modulus, DirichletCharacter};
use eiskit::arith::zpm::Zpm;
use eiskit::hecke::OrdinaryLevel;
use eiskit::linalg::dense::Lin;
use eiskit::modcurve::level::Level;
use eiskit::modcurve::operators::{diamond_matrix, hecke_matrix, star_projector};
use eiskit::par::Exec;
use eiskit::relmod::{PairingSymbolModule, VarpiMap};

fn main() {
    let level = Level::new(1, 5, 2).unwrap();
    let ol = OrdinaryLevel::build(level, 2, 2, Exec::Parallel).unwrap();
    let ring = ol.ring();
    let lin = Lin(ring);
    let w = char_ring_for_modulus(Zpm::new(5, 4).unwrap(), 5).unwrap();
    let omega = DirichletCharacter::teichmuller(&w).unwrap();
    let module = PairingSymbolModule::build(25, 5, &omega).unwrap();
    let varpi = VarpiMap::new(&module, &ol).unwrap();
    let (n, fails) = varpi.verify_well_defined().unwrap();
    println!("well-defined: {n} checked, {} failures", fails.len());
    // cuspidal plus basis
    let plus_amb = star_projector(ring, &ol.star, 1);
    let emb = lin.mul(&plus_amb, &ol.space.cuspidal().basis);
    let cplus = lin.image_basis(&emb);
    println!("cuspidal plus dim {}", cplus.cols);
    for l in [2u64, 3] {
        let tl = hecke_matrix(&ol.space, l, Exec::Parallel);
        let dl = diamond_matrix(&ol.space, l).unwrap();
        let dlinv = diamond_matrix(&ol.space, {
            // inverse of l mod 25
            let (_, x, _) = eiskit::arith::egcd(l as i64, 25);
            x.rem_euclid(25) as u64
        })
        .unwrap();
        for (name, dmat) in [("<l>", &dl), ("<l>^-1", &dlinv)] {
            let mut ok = true;
            for j in 0..cplus.cols {
                let x = cplus.col(j);
                let mut y = lin.matvec(&tl, &x);
                for (s, v) in y.iter_mut().zip(&x) {
                    *s = ring.sub(*s, *v);
                }
                let dx = lin.matvec(dmat, &x);
                for (s, v) in y.iter_mut().zip(&dx) {
                    *s = ring.sub(*s, ring.mul(l, *v));
                }
                let img = varpi.apply(&y).unwrap();
                if img.iter().any(|c| !module.w.is_zero(c)) {
                    ok = false;
                }
            }
            println!("l={l} diamond={name}: transport ok = {ok}");
        }
    }
}
