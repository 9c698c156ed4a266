//! Exact sparse multivariate polynomials over the integers, with the
//! substitution operators (`Gamma_l`, homogenization, monomial substitution)
//! and the binomial rewriting used to build `F*`.

mod monomial;
mod poly;
mod rewrite;
mod text;

pub use monomial::Monomial;
pub use poly::SparsePoly;
pub use rewrite::{reduce, reduce_monomial, RewriteRule};

pub(crate) use poly::pow_mod;
