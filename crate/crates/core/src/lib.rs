//! Extensions of projective monomial curves and the hypersurfaces that cut
//! them out set-theoretically.
//!
//! Starting from a monomial curve `C(m_1, ..., m_n)` that is a set-theoretic
//! complete intersection on `f_1 = ... = f_{n-1} = 0`, the crate builds the
//! extension `C(l*m_1, ..., l*m_n, m)` one dimension up, decides whether its
//! semigroup is a gluing, writes down the extra hypersurface (`G`, `F` or the
//! rewritten `F*`) and checks all of it with independent oracles.
//!
//! Modules, bottom-up:
//!
//! * [`numsg`]: numerical semigroup membership and the degree `delta(m)`.
//! * [`mpoly`]: exact sparse polynomials, substitution and binomial rewriting.
//! * [`curves`]: curves, extensions, parameterizations and equation builders.
//! * [`gluing`]: gluing criteria with explicit witnesses.
//! * [`oracle`]: symbolic vanishing, toric binomials, finite-field zero sets.
//! * [`cli`]: the `stci` command line front end and its reports.

pub mod cli;
pub mod curves;
pub mod error;
pub mod gluing;
pub mod mpoly;
pub mod numsg;
pub mod oracle;

pub use error::{Error, Result};
