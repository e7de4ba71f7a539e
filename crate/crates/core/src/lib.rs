//! Bessel quotient, Bessel heat semigroup and numerical verification of
//! Li-Yau, Harnack, Struwe and Poon type properties.
//!
//! The crate evaluates the modified Bessel function `I_nu` and the quotient
//! `y_nu = I_{nu+1}/I_nu` for real `nu > -1`, builds the Neumann heat kernel
//! `p^(a)` of `B = d^2/dz^2 + (a/z) d/dz` on `(0, inf)` with measure `z^a dz`,
//! and checks the associated identities and inequalities on parameter grids.

pub mod cd_gamma;
pub mod error;
pub mod kernels;
pub mod kimura;
pub mod monotonicity;
pub mod par;
pub mod quadrature;
pub mod report;
pub mod semigroup;
pub mod special_fn;
pub mod verify;
pub mod vmf;

pub use error::{Error, Result};
pub use quadrature::{QuadResult, QuadratureSpec, Support};
pub use special_fn::{BesselParam, EvalResult, Method, Regime};
