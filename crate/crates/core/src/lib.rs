//! Exact arithmetic for weight-two modular symbols at level N·p^r with
//! coefficients in Z/p^m, and the Eisenstein-ideal machinery built on top
//! of it.
//!
//! The crate is organized bottom-up:
//!
//! - [`arith`]: Z/p^m scalars, Galois rings of character values, Dirichlet
//!   and arithmetic characters, generalized Bernoulli numbers, group rings.
//! - [`linalg`]: dense Howell/Smith forms, kernels and solvers over local
//!   rings Z/p^m and GR(p^m, e), plus the sparse eliminator used to build
//!   symbol spaces.
//! - [`modcurve`]: the Manin-symbol presentation of relative homology of
//!   X_1(M), cusps and the boundary map, Hecke/diamond/Atkin-Lehner/star
//!   operators, and continued-fraction path expansion.
//! - [`hecke`]: ordinary projectors, Eisenstein loci, localized quotients,
//!   congruence modules and the symbol table u,v -> xi_bar(u:v).
//! - [`pairing`]: the combinatorial intersection pairing on the modular
//!   curve and its Atkin-Lehner/U_p twists and group-ring layers.
//! - [`mazur_tate`]: finite layers of the two-variable theta elements,
//!   their character specializations and the comparison identities.
//! - [`distmod`]: the universal distribution module of cyclotomic numbers.
//! - [`relmod`]: the universal target of the symbol relations and the map
//!   from plus-part relative homology into it.
//! - [`report`] / [`cache`]: machine-readable check rows and the binary
//!   result cache.

pub mod arith;
pub mod cache;
pub mod distmod;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod mazur_tate;
pub mod modcurve;
pub mod pairing;
pub mod par;
pub mod relmod;
pub mod report;

pub use error::Error;
pub use par::Exec;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
