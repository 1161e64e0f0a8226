//! Real-order Bessel and Riccati-Bessel functions.

mod bessel;
mod riccati;
mod zeros;

pub use bessel::{
    bessel_jy, bessel_jy_asymptotic, bessel_jy_recurrence, hankel_threshold, BesselJY,
};
pub use riccati::{
    cross_wronskian, regular_wronskian_of, riccati, wronskian_of, FunctionPair, Order,
};
pub use zeros::{
    interlacing_check, positive_zeros, ChainEntry, ChainMember, Interlacing, InterlacingViolation,
    ZeroKind,
};
