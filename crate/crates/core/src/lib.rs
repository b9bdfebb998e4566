//! Exact construction of the generating functions
//! `R_m(z) = sum_{n>=1} n^(n-m) z^n / n!` for every integer `m`, expressed as
//! canonical rational functions of the tree variable `lambda = T(z)` and the
//! endofunction variable `zeta = lambda / (1 - lambda)`.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact_arith`]: the [`ExactRational`] scalar and integer combinatorics
//! - [`poly_algebra`]: polynomials, canonical rational functions, truncated power series
//! - [`triangles`]: the coefficient triangles and the identities relating them
//! - [`carlitz_seq`]: the bilateral `G_m(lambda)` / `H_m(zeta)` sequence
//! - [`series_oracle`]: ground-truth checks against the defining series
//! - [`analysis`]: alternating sums, integrality, the `1/e` limit and asymptotic fits
//! - [`cli`]: the command-line front end used by the `carlitz` binary
//!
//! ```
//! use carlitz_core::{CarlitzSequence, ExactRational, Var};
//!
//! let mut seq = CarlitzSequence::new();
//! let g = seq.build(-3).unwrap();
//! assert_eq!(g.render(Var::Lambda), "G_{-3} = lambda(1+8lambda+6lambda^2)/(1-lambda)^7");
//! assert_eq!(g.render(Var::Zeta), "H_{-3} = zeta(1+zeta)^4(1+10zeta+15zeta^2)");
//!
//! assert_eq!(seq.tables().g_rec(6, 4), ExactRational::new(415, 3456));
//! ```

pub mod analysis;
pub mod carlitz_seq;
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod poly_algebra;
pub mod series_oracle;
pub mod triangles;

pub use carlitz_seq::{CarlitzSequence, SequenceEntry};
pub use error::{Error, Result};
pub use exact_arith::ExactRational;
pub use poly_algebra::{Polynomial, PowerSeries, RationalFunction, Var};
pub use triangles::{Rule, Tables, Triangle};
