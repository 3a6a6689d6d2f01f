//! Exact construction and certification of the superelliptic polynomial
//! families `P_{j0,k}(c)` generated by the three-term recursion
//!
//! ```text
//! (2r+m+km) P_k = 2c(r+(1+k-r)m) P_{k-r} - (k-(2r-1)) m P_{k-2r},   k >= 0,
//! ```
//!
//! seeded by a unit vector on `[-2r, -1]`. Everything is rational arithmetic;
//! every check is an exact identity.

pub mod classify;
pub mod error;
pub mod exact;
pub mod family;
pub mod ode;
pub mod orth;
pub mod parallel;
pub mod series;

pub use error::{Error, Result};
pub use exact::{CPoly, ExactRational, Parity, RatMatrix};
pub use family::{Family, FamilyParams, FamilyType};
