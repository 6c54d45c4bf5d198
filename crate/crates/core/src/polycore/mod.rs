//! Exact sparse multivariate polynomials over `F_p` or `Z` in the
//! variables `x_ij`, `y_ij` of two generic `n×n` matrices.

mod json;
mod monomial;
mod poly;
mod scalar;
mod var;

pub use monomial::Monomial;
pub use poly::Poly;
pub use scalar::{is_prime, mod_pow, primes_up_to, Ring, Scalar, MAX_CHAR};
pub use var::{MatrixKind, VarId};
