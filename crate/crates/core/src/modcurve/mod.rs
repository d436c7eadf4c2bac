//! Modular-curve combinatorics: symbol pairs, cusps, paths, the symbol
//! space presentation, and the operator algebra on it.

pub mod cusps;
pub mod heilbronn;
pub mod level;
pub mod operators;
pub mod p1;
pub mod paths;
pub mod space;

pub use cusps::{gamma1_cusp_count, gamma1_genus, gamma1_pair_count, CuspTable};
pub use level::Level;
pub use operators::{
    atkin_lehner_matrix, diamond_matrix, hecke_matrix, hecke_operator, level_pushforward,
    paper_symbol, star_matrix, star_projector, u_composite, OpName, OperatorMatrix,
};
pub use p1::PairTable;
pub use paths::{path_to_symbols, CuspPoint};
pub use space::{Subspace, SymbolSpace};
