//! Hereditary relaxation kernels of fractional type and the machinery to
//! cross-check them.
//!
//! The crate is split by concern:
//!
//! * [`specfun`]: Γ, Kummer ₁F₁, ₂F₁(1,1;c;x), Mittag-Leffler series and the
//!   Rabotnov (eh)_α kernel.
//! * [`kernels`]: time-domain kernels for the Abel, Rabotnov,
//!   Rzhanitsyn-Davidson, confluent-hypergeometric and Havriliak-Negami
//!   families.
//! * [`resolvent`]: transform-domain operator algebra (resolvent symbols,
//!   the splitting identity, moduli and compliances).
//! * [`spectra`]: complex moduli/compliances and relaxation-time spectra.
//! * [`quadrature_oracle`]: adaptive quadrature, integral representations,
//!   numerical inverse Laplace transform and large-time asymptotics.
//! * [`extensions`]: Vanin's asymmetric density and Suvorova's nonlinear
//!   hereditary stress.
//! * [`fit`]: Havriliak-Negami least-squares fitting.
//! * [`validate`]: the invariant suite behind `hereditary validate`.

// `!(x > 0.0)` is how arguments are checked: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod error;
pub mod extensions;
pub mod fit;
pub mod kernels;
pub mod quadrature_oracle;
pub mod resolvent;
pub mod specfun;
pub mod spectra;
pub mod sum;
pub mod validate;

pub use error::{Error, Result};
pub use kernels::{Family, HNParams, KernelModel};
pub use num_complex::Complex64;
pub use quadrature_oracle::{InverseLaplaceMethod, InverseLaplaceSpec, QuadratureSpec};
pub use resolvent::{ResolventSpec, Variant};
pub use specfun::FractionalOrder;
pub use sum::SeriesControl;

/// Numerical route that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Quadrature,
    Asymptotic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::Asymptotic => "asymptotic",
        })
    }
}

/// A value together with the route used to compute it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub method: Method,
}

impl Evaluation {
    pub fn series(value: f64) -> Self {
        Self {
            value,
            method: Method::Series,
        }
    }

    pub fn quadrature(value: f64) -> Self {
        Self {
            value,
            method: Method::Quadrature,
        }
    }
}

/// A `(ω, M(iω))` record, as read from or written to CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySample {
    pub omega: f64,
    pub value: Complex64,
}

/// A `(t, f(t))` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSample {
    pub t: f64,
    pub value: f64,
}
