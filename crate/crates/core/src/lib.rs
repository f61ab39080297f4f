//! Exact symbolic machinery for noetherianity questions about logical formulas
//! over fields.

pub mod arith;
pub mod poly;
pub mod formula;
pub mod cover;
pub mod galois;
pub mod qe;
pub mod noether;
