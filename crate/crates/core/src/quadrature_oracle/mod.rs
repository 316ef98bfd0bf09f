//! Independent numerical routes used to cross-check the series in
//! [`crate::specfun`] and [`crate::kernels`].

mod asymptotic;
pub mod integrate;
mod laplace;
mod representations;

pub use asymptotic::{asymptotic_tail, AsymptoticFamily, AsymptoticParams, AsymptoticValue};
pub use integrate::{
    integrate, integrate_to_infinity, integrate_with_breaks, Integral, QuadratureSpec,
};
pub use laplace::{inverse_laplace, laplace_transform, InverseLaplaceMethod, InverseLaplaceSpec};
pub use representations::{
    eh_conv_unity, eh_integral, hn_kernel_spectral, hn_relaxation_spectral, hn_resolvent_spectral,
    i_alpha, p_conv_unity, q_conv_unity,
};
