//! Scaled modified Bessel functions and Chebyshev polynomials.

mod bessel;
mod chebyshev;

pub use bessel::{
    bessel_i, bessel_i_scaled, ScaledBessel, ScaledBesselTable, MAX_ORDER, RAW_ARGUMENT_LIMIT,
};
pub use chebyshev::{
    cheb_neumann_denominator, chebyshev, chebyshev_signed, ChebKind, ExactScalar, Ring,
};
