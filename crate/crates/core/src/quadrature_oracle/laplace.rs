//! Numerical inverse Laplace transform.
//!
//! Two unrelated methods are offered so that a disagreement between them
//! points at the transform rather than at the inversion:
//!
//! * fixed Talbot contour (Abate-Valkó),
//! * Euler-accelerated Bromwich trapezoid sum (Abate-Whitt).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::{integrate_to_infinity, QuadratureSpec};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseLaplaceMethod {
    /// Fixed Talbot contour.
    DeformedContour,
    /// Bromwich trapezoid sum with Euler (binomial) acceleration.
    BromwichEuler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseLaplaceSpec {
    pub method: InverseLaplaceMethod,
    pub node_count: usize,
    /// Multiplier on the contour size (Talbot) or abscissa (Euler).
    pub scale: f64,
}

impl Default for InverseLaplaceSpec {
    fn default() -> Self {
        Self {
            method: InverseLaplaceMethod::DeformedContour,
            node_count: 32,
            scale: 1.0,
        }
    }
}

impl InverseLaplaceSpec {
    pub fn euler() -> Self {
        Self {
            method: InverseLaplaceMethod::BromwichEuler,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(Error::InvalidParameter(
                "inverse Laplace needs node_count >= 16".into(),
            ));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(
                "inverse Laplace scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Largest tolerated ratio between the biggest summand and the result.
const CANCELLATION_LIMIT: f64 = 1e10;

/// f(t) from its Laplace transform F(p).
pub fn inverse_laplace<F>(f: F, t: f64, spec: &InverseLaplaceSpec) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    spec.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Contour {
            t,
            reason: "requires t > 0".into(),
        });
    }
    match spec.method {
        InverseLaplaceMethod::DeformedContour => talbot(&f, t, spec),
        InverseLaplaceMethod::BromwichEuler => euler(&f, t, spec),
    }
}

fn finish(t: f64, value: f64, largest: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Contour {
            t,
            reason: "non-finite transform value on the contour".into(),
        });
    }
    if largest > CANCELLATION_LIMIT * value.abs() && largest > 1e-300 {
        return Err(Error::Contour {
            t,
            reason: format!("cancellation: largest term {largest:e} against result {value:e}"),
        });
    }
    Ok(value)
}

fn talbot<F: Fn(Complex64) -> Complex64>(f: &F, t: f64, spec: &InverseLaplaceSpec) -> Result<f64> {
    let m = spec.node_count;
    let r = spec.scale * 2.0 * m as f64 / (5.0 * t);
    let mut acc = NeumaierSum::new();
    let first = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    acc.add(first);
    let mut largest = first.abs();
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = ((s * t).exp() * f(s) * Complex64::new(1.0, sigma)).re;
        largest = largest.max(term.abs());
        acc.add(term);
    }
    let scale = r / m as f64;
    finish(t, acc.total() * scale, largest * scale)
}

fn euler<F: Fn(Complex64) -> Complex64>(f: &F, t: f64, spec: &InverseLaplaceSpec) -> Result<f64> {
    // M terms of binomial averaging on 2M + 1 Bromwich nodes
    let m = spec.node_count / 2;
    let a = spec.scale * m as f64 * std::f64::consts::LN_10 / 3.0;
    let mut xi = vec![0.0; 2 * m + 1];
    xi[0] = 0.5;
    for x in xi.iter_mut().take(m + 1).skip(1) {
        *x = 1.0;
    }
    let two_m = 2.0f64.powi(-(m as i32));
    xi[2 * m] = two_m;
    let mut binom = 1.0;
    for k in 1..m {
        binom *= (m - k + 1) as f64 / k as f64;
        xi[2 * m - k] = xi[2 * m - k + 1] + two_m * binom;
    }
    let mut acc = NeumaierSum::new();
    let mut largest = 0.0f64;
    for (k, x) in xi.iter().enumerate() {
        let beta = Complex64::new(a, PI * k as f64);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * x * f(beta / t).re;
        largest = largest.max(term.abs());
        acc.add(term);
    }
    let scale = a.exp() / t;
    finish(t, acc.total() * scale, largest * scale)
}

/// F(p) = ∫₀^∞ f(t) e^(−pt) dt for real p > 0, by quadrature.
pub fn laplace_transform<F: Fn(f64) -> f64>(f: F, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(crate::error::domain("laplace_transform", "requires p > 0"));
    }
    let g = |t: f64| {
        let e = (-p * t).exp();
        if e == 0.0 {
            0.0
        } else {
            f(t) * e
        }
    };
    Ok(integrate_to_infinity(g, 0.0, spec)?.value)
}
