//! Exact computations around the commutator `C = XY − YX` of two generic
//! `n×n` matrices: the ideals `I` (diagonal) and `J` (anti-diagonal), their
//! systems of parameters, Gröbner bases over `F_p`, Fedder's F-purity
//! criterion, and the binomial identities behind the `n = 3, 4` cases.

pub mod error;
pub mod fedder;
pub mod groebner;
pub mod lemmas;
pub mod matrices;
pub mod polycore;
pub mod sop;

pub use error::{Error, Result};
