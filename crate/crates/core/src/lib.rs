//! Exact truncated q-series arithmetic and a verifier for
//! Andrews-Gordon-Bressoud type sum = product identities.
//!
//! Every series is a truncated Laurent series in `t = q^{1/2}` with
//! big-integer coefficients ([`QSeries`]); a Laurent polynomial in `z`
//! over those ([`ZLaurent`]) carries the Bressoud polynomials
//! `H_{2n}(z, a | q)` symbolically in `z`. The [`catalog`] module builds both
//! sides of each identity and compares them coefficient by coefficient.

pub mod catalog;
pub mod error;
pub mod half;
pub mod hfamily;
pub mod laurent;
pub mod oracle;
pub mod product;
pub mod qobjects;
pub mod series;
pub mod suite;
pub mod summation;

pub use catalog::{verify, IdentityCase, IdentityId, Status, VerificationReport};
pub use error::{Error, Result};
pub use half::HalfInt;
pub use laurent::ZLaurent;
pub use qobjects::Monomial;
pub use series::{Comparison, Mismatch, QSeries};
