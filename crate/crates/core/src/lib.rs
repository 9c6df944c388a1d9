//! Centers of concave functions on convex bodies, sharp truncated-cone upper
//! bounds for averages of convex gauges of concave functions, and the
//! machinery to check those bounds against direct integration.
//!
//! The pipeline for a body `C` and a concave `f ≥ 0`:
//!
//! 1. [`center::supporting_affine`] picks an affine majorant of `f` touching
//!    it at a start point; its gradient fixes a slicing direction.
//! 2. [`symmetrize::schwarz_profile`] records the section measures of `C`
//!    along that direction.
//! 3. [`conesolver::equal_split_cone`] fits the truncated cone of equal
//!    volume whose two excess lobes balance; its median `t_R` fixes a slice.
//! 4. [`center::find_center`] maximizes `f` over that slice, giving the
//!    center point and `f0`.
//! 5. [`bounds::reduced_bound`] maximizes the one-parameter cone integral
//!    over slopes, giving the upper bound for `∫_C φ(f)`.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod center;
pub mod conesolver;
pub mod error;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod roots;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
