//! Exact sparse polynomials in `z_1..z_n, u_1..u_n` and the operator
//! machinery around the image of `Theta_i = u_i - d/dz_i`: the evaluation
//! map `E`, the Laurent map `Z`, twisted Taylor expansion, membership
//! oracles, first-order operator families, and finite instance checks of
//! the vanishing and Jacobian conjectures.

pub mod cli;
pub mod error;
pub mod expr;
pub mod field;
pub mod harness;
pub mod image;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod random;
pub mod weyl;
pub mod worked;

pub use error::{Error, Result};
pub use expr::parse_poly;
pub use field::{Coeff, FieldTag};
pub use harness::PolyMap;
pub use image::{eval_e, eval_z, member_bruteforce, member_theta, twisted_taylor, MembershipReport};
pub use laurent::LaurentPoly;
pub use linalg::Matrix;
pub use monomial::{Monomial, MultiIndex};
pub use poly::{Block, Poly};
pub use weyl::{ConstCoeffOp, FirstOrderOp};
