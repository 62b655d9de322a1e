//! Special functions needed by the closed-form solutions: integer-order
//! Bessel functions of the first kind and the Faddeeva function.

mod bessel;
mod faddeeva;

pub use bessel::{bessel_j, bessel_j_seq, BesselSequence};
pub use faddeeva::faddeeva_w;
