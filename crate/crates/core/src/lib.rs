//! High relative accuracy eigenvectors of symmetric tridiagonal matrices with
//! unit off-diagonals and increasing diagonals `A_j = 2 + f_j`.

// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::should_implement_trait,
    clippy::needless_range_loop
)]

pub mod bessel;
pub mod dd;
pub mod eigensolve;
pub mod error;
pub mod hira;
pub mod oracle;
pub mod scalar;
pub mod scaled;
pub mod tridiag;

pub use dd::DDReal;
pub use error::{Error, Result, Stage};
pub use scalar::{Angle, Cplx, Real};
pub use tridiag::{sign_agreements, DiagonalProfile, SturmScan, TridiagMatrix};
