//! Exact linear algebra over the local rings Z/p^m and GR(p^m, e).
//!
//! Every element of these rings is a unit times a power of p, so Gaussian
//! elimination with valuation pivoting, Howell forms and Smith forms all
//! exist and are computed without fractions.

pub mod dense;
pub mod poly;
pub mod ring;
pub mod sparse;

pub use dense::{Lin, Mat};
pub use ring::RingCtx;
pub use sparse::SparseEliminator;
