//! Large-time estimates of κ·(resolvent)∗1 for the three basic operators.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::gamma_raw;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticFamily {
    EH,
    Q,
    P,
}

/// Constants of the asymptotic formulas. None of them is derived here: the
/// caller supplies every one, including `kappa1`, which only labels the
/// shifted operator and does not enter the value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub k: f64,
    pub m: f64,
    pub alpha: f64,
    pub lambda0: f64,
    pub kappa1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: f64,
    /// Set when θ < 10, outside the regime where the estimate is meaningful.
    pub regime_warning: bool,
}

pub const ASYMPTOTIC_REGIME: f64 = 10.0;

pub fn asymptotic_tail(
    family: AsymptoticFamily,
    params: &AsymptoticParams,
    theta: f64,
) -> Result<AsymptoticValue> {
    let AsymptoticParams {
        k,
        m,
        alpha,
        lambda0,
        ..
    } = *params;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("asymptotic_tail", "requires 0 < alpha < 1"));
    }
    if !(theta > 0.0) {
        return Err(domain("asymptotic_tail", "requires theta > 0"));
    }
    let plateau = k * (1.0 - m);
    let g = gamma_raw(1.0 - alpha);
    let correction = match family {
        AsymptoticFamily::EH => k * theta.powf(-alpha) / g,
        AsymptoticFamily::Q => {
            k * alpha * (1.0 + lambda0 - k).powi(-2) * theta.powf(-alpha - 1.0) * (-theta).exp() / g
        }
        AsymptoticFamily::P => k * theta.powf(-alpha) / (gamma_raw(alpha - 1.0) * (lambda0 + 1.0)),
    };
    let value = plateau * (1.0 - correction);
    if !value.is_finite() {
        return Err(domain(
            "asymptotic_tail",
            "non-finite value for the supplied constants",
        ));
    }
    if theta < ASYMPTOTIC_REGIME {
        log::warn!("asymptotic_tail evaluated at theta = {theta} < {ASYMPTOTIC_REGIME}");
    }
    Ok(AsymptoticValue {
        value,
        regime_warning: theta < ASYMPTOTIC_REGIME,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature_oracle::{i_alpha, QuadratureSpec};

    fn params(m: f64) -> AsymptoticParams {
        AsymptoticParams {
            k: 1.0,
            m,
            alpha: 0.5,
            lambda0: 0.5,
            kappa1: 0.0,
        }
    }

    #[test]
    fn no_relaxation_when_m_is_one() {
        for fam in [
            AsymptoticFamily::EH,
            AsymptoticFamily::Q,
            AsymptoticFamily::P,
        ] {
            assert_eq!(asymptotic_tail(fam, &params(1.0), 20.0).unwrap().value, 0.0);
        }
    }

    #[test]
    fn eh_tail_error_shrinks() {
        let q = QuadratureSpec::default();
        let err = |theta: f64| {
            let exact = 1.0 - i_alpha(0.5, theta, &q).unwrap();
            (asymptotic_tail(AsymptoticFamily::EH, &params(0.0), theta)
                .unwrap()
                .value
                - exact)
                .abs()
        };
        assert!(err(40.0) < err(20.0));
    }

    #[test]
    fn q_tail_is_exponentially_small() {
        let v = asymptotic_tail(AsymptoticFamily::Q, &params(0.0), 30.0)
            .unwrap()
            .value;
        assert!((1.0 - v).abs() < 1e-10);
    }

    #[test]
    fn regime_flag() {
        assert!(
            asymptotic_tail(AsymptoticFamily::EH, &params(0.0), 5.0)
                .unwrap()
                .regime_warning
        );
        assert!(
            !asymptotic_tail(AsymptoticFamily::EH, &params(0.0), 15.0)
                .unwrap()
                .regime_warning
        );
    }
}
