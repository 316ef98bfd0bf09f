//! Integral representations of the fractional kernels and of their
//! convolutions with unity.
//!
//! Every semi-infinite integral is split at the natural scale and the upper
//! half is folded back onto `[0, 1]` by `u -> 1/u`, so no truncation of the
//! range is needed.

use std::f64::consts::PI;

use super::integrate::{integrate, integrate_with_breaks, QuadratureSpec};
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::specfun::{cexpm1, cln1p};

fn open_order(function: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(
            function,
            format!("requires 0 < alpha < 1, got {alpha}"),
        ))
    }
}

fn check_theta(function: &'static str, theta: f64) -> Result<()> {
    if theta >= 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(domain(
            function,
            format!("requires finite theta >= 0, got {theta}"),
        ))
    }
}

/// e^(−θw), with the θ = 0 case exact even for infinite w.
fn decay(theta: f64, w: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        (-theta * w).exp()
    }
}

/// Break points around u = θ^(−α), where e^(−θu^(1/α)) turns over.
fn scale_breaks(theta: f64, alpha: f64) -> Vec<f64> {
    if theta <= 1.0 {
        return Vec::new();
    }
    let u = theta.powf(-alpha);
    [0.1 * u, u, 10.0 * u]
        .into_iter()
        .filter(|&x| x < 1.0)
        .collect()
}

fn weight(alpha: f64) -> f64 {
    (alpha * PI).sin() / (alpha * PI)
}

/// Integral representation of (eh)_α with λ = τ^(−α):
///
/// eh = τ^(α−1) (sin απ / απ) ∫₀^∞ u^(1/α) e^(−θu^(1/α)) / (1 + 2u cos απ + u²) du.
pub fn eh_integral(alpha: f64, tau: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    open_order("eh_integral", alpha)?;
    if !(tau > 0.0) || !(t > 0.0) {
        return Err(domain("eh_integral", "requires tau > 0 and t > 0"));
    }
    let theta = t / tau;
    let c = (alpha * PI).cos();
    let inv = 1.0 / alpha;
    let lower = |u: f64| {
        let w = u.powf(inv);
        w * (-theta * w).exp() / (1.0 + 2.0 * u * c + u * u)
    };
    let upper = |v: f64| {
        let w = v.powf(-inv);
        let e = (-theta * w).exp();
        if e == 0.0 {
            0.0
        } else {
            w * e / (1.0 + 2.0 * v * c + v * v)
        }
    };
    let a = integrate_with_breaks(lower, 0.0, 1.0, &scale_breaks(theta, alpha), spec)?;
    let b = integrate(upper, 0.0, 1.0, spec)?;
    Ok(tau.powf(alpha - 1.0) * weight(alpha) * (a.value + b.value))
}

/// I_α(θ) = 1 − τ^(−α)(eh)_α∗1, the Rabotnov relaxation function.
///
/// Evaluated as (sin απ/απ) ∫₀¹ [e^(−θu^(1/α)) + e^(−θu^(−1/α))] / (1 + 2u cos απ + u²) du.
pub fn i_alpha(alpha: f64, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    open_order("i_alpha", alpha)?;
    check_theta("i_alpha", theta)?;
    let c = (alpha * PI).cos();
    let inv = 1.0 / alpha;
    let f = |u: f64| {
        let near = decay(theta, u.powf(inv));
        let far = if u == 0.0 {
            0.0
        } else {
            decay(theta, u.powf(-inv))
        };
        (near + far) / (1.0 + 2.0 * u * c + u * u)
    };
    let r = integrate_with_breaks(f, 0.0, 1.0, &scale_breaks(theta, alpha), spec)?;
    Ok(weight(alpha) * r.value)
}

/// τ^(−α)(eh)_α∗1 = 1 − I_α(θ).
pub fn eh_conv_unity(alpha: f64, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 - i_alpha(alpha, theta, spec)?)
}

/// τ^(−α) Q*_α(λ)·1 with λ = n τ^(−α), θ = t/τ.
///
/// 1/(n+1) − (sin απ/π) ∫₁^∞ ξ e^(−θx) / ((ξ² + 2ξn cos απ + n²) x) dx with
/// ξ = (x−1)^α, evaluated after the substitution w = ξ.
pub fn q_conv_unity(alpha: f64, n: f64, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    open_order("q_conv_unity", alpha)?;
    check_theta("q_conv_unity", theta)?;
    if !(n >= 0.0) {
        return Err(domain("q_conv_unity", "requires n >= 0"));
    }
    let c = (alpha * PI).cos();
    let inv = 1.0 / alpha;
    let lower = |w: f64| {
        let s = w.powf(inv);
        s * decay(theta, 1.0 + s) / ((w * w + 2.0 * w * n * c + n * n) * (1.0 + s))
    };
    let upper = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        let s = v.powf(-inv);
        decay(theta, 1.0 + s) / ((1.0 + 2.0 * v * n * c + n * n * v * v) * (1.0 + 1.0 / s))
    };
    let j1 = if n == 0.0 {
        // integrand ~ w^(1/α − 2) at the origin
        let gamma = inv - 2.0;
        let s = if gamma < 0.0 {
            spec.with_singularity(gamma)
        } else {
            *spec
        };
        integrate(lower, 0.0, 1.0, &s)?
    } else {
        let mut breaks = scale_breaks(theta, alpha);
        if n < 1.0 {
            breaks.push(n);
            breaks.sort_by(f64::total_cmp);
        }
        integrate_with_breaks(lower, 0.0, 1.0, &breaks, spec)?
    };
    let j2 = integrate(upper, 0.0, 1.0, spec)?;
    Ok(1.0 / (n + 1.0) - weight(alpha) * (j1.value + j2.value))
}

/// τ^α P*_α(λ)·1 with λ = n τ^α, θ = t/τ.
///
/// The spectral integral over ξ = (1/x − 1)^α accounts for the branch cut;
/// for n > 0 the symbol also has a simple real pole at
/// p₀ = −c/(c − 1), c = ((1+n)/n)^(1/α), whose residue is added explicitly.
pub fn p_conv_unity(alpha: f64, n: f64, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    open_order("p_conv_unity", alpha)?;
    check_theta("p_conv_unity", theta)?;
    if !(n >= 0.0) {
        return Err(domain("p_conv_unity", "requires n >= 0"));
    }
    let c = (alpha * PI).cos();
    let inv = 1.0 / alpha;
    let np = 1.0 + n;
    let lower = |w: f64| {
        let s = w.powf(inv);
        let den = w * w * np * np - 2.0 * w * np * n * c + n * n;
        s * decay(theta, 1.0 / (1.0 + s)) / (den * (1.0 + s))
    };
    let upper = |v: f64| {
        let s = v.powf(inv);
        let den = np * np - 2.0 * v * np * n * c + n * n * v * v;
        decay(theta, s / (1.0 + s)) / (den * (1.0 + s))
    };
    let k1 = if n == 0.0 {
        let gamma = inv - 2.0;
        let s = if gamma < 0.0 {
            spec.with_singularity(gamma)
        } else {
            *spec
        };
        integrate(lower, 0.0, 1.0, &s)?
    } else {
        let w0 = n / np;
        integrate_with_breaks(lower, 0.0, 1.0, &[w0], spec)?
    };
    let k2 = integrate(upper, 0.0, 1.0, spec)?;
    let mut value = 1.0 / np - weight(alpha) * (k1.value + k2.value);
    if n > 0.0 {
        let cp = (np / n).powf(inv);
        let p0 = -cp / (cp - 1.0);
        let residue = 1.0 / (n * alpha * np * (1.0 - cp));
        value += residue * (p0 * theta).exp();
    }
    Ok(value)
}

/// Havriliak-Negami relaxation-time density per unit ln x, x = τ₀/τ:
/// h = (1/π) |1 + u e^(iπα)|^(−β) sin(β arg(1 + u e^(iπα))), u = x^α.
fn hn_density(alpha: f64, beta: f64, u: f64) -> f64 {
    let (s, c) = (alpha * PI).sin_cos();
    let re = 1.0 + u * c;
    let im = u * s;
    let arg = im.atan2(re);
    re.hypot(im).powf(-beta) * (beta * arg).sin() / PI
}

/// (1/α) ∫₀^∞ h(u) u^(1/α − 1) e^(−θu^(1/α)) du, the time kernel (in units of
/// 1/τ₀) belonging to a density h over u = (τ₀/τ)^α.
///
/// `lower_exponent` is the power of u in h near the origin.
fn spectral_kernel<H: Fn(f64) -> f64>(
    alpha: f64,
    theta: f64,
    h: H,
    lower_exponent: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let inv = 1.0 / alpha;
    let lower = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        h(u) * u.powf(inv - 1.0) * (-theta * u.powf(inv)).exp()
    };
    let upper = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        let e = (-theta * v.powf(-inv)).exp();
        if e == 0.0 {
            0.0
        } else {
            h(1.0 / v) * v.powf(-1.0 - inv) * e
        }
    };
    let gamma = lower_exponent + inv - 1.0;
    let a = if gamma < 0.0 {
        integrate(lower, 0.0, 1.0, &spec.with_singularity(gamma))?
    } else {
        integrate_with_breaks(lower, 0.0, 1.0, &scale_breaks(theta, alpha), spec)?
    };
    let b = integrate(upper, 0.0, 1.0, spec)?;
    Ok((a.value + b.value) / alpha)
}

/// τ₀·R(t) for the Havriliak-Negami kernel from its relaxation spectrum.
///
/// `beta` may exceed 1 here: the creep resolvent is a sum of such kernels
/// with shape nβ.
pub fn hn_kernel_spectral(alpha: f64, beta: f64, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    open_order("hn_kernel_spectral", alpha)?;
    if !(beta > 0.0) {
        return Err(domain("hn_kernel_spectral", "requires beta > 0"));
    }
    if !(theta > 0.0) {
        return Err(domain("hn_kernel_spectral", "requires theta > 0"));
    }
    spectral_kernel(alpha, theta, |u| hn_density(alpha, beta, u), 1.0, spec)
}

/// τ₀·K(t) for the creep resolvent of the Havriliak-Negami kernel, whose
/// transform is 1/((1 + (pτ₀)^α)^β − 1).
pub fn hn_resolvent_spectral(
    alpha: f64,
    beta: f64,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    open_order("hn_resolvent_spectral", alpha)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain("hn_resolvent_spectral", "requires 0 < beta <= 1"));
    }
    if !(theta > 0.0) {
        return Err(domain("hn_resolvent_spectral", "requires theta > 0"));
    }
    let e = Complex64::from_polar(1.0, alpha * PI);
    let h = |u: f64| {
        // (1 + u e^(iπα))^β − 1, kept accurate as u → 0
        let d = cexpm1(beta * cln1p(u * e));
        -(1.0 / d).im / PI
    };
    spectral_kernel(alpha, theta, h, -1.0, spec)
}

/// Havriliak-Negami relaxation function ∫₀ᵗ R from the spectrum:
/// 1 − (1/α) ∫₀^∞ (h(u)/u) e^(−θu^(1/α)) du.
pub fn hn_relaxation_spectral(
    alpha: f64,
    beta: f64,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    open_order("hn_relaxation_spectral", alpha)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain("hn_relaxation_spectral", "requires 0 < beta <= 1"));
    }
    check_theta("hn_relaxation_spectral", theta)?;
    let inv = 1.0 / alpha;
    let lower = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        hn_density(alpha, beta, u) / u * decay(theta, u.powf(inv))
    };
    let upper = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        hn_density(alpha, beta, 1.0 / v) / v * decay(theta, v.powf(-inv))
    };
    let a = integrate_with_breaks(lower, 0.0, 1.0, &scale_breaks(theta, alpha), spec)?;
    // h(1/v)/v ~ v^(β−1) at the origin
    let s = if beta < 1.0 {
        spec.with_singularity(beta - 1.0)
    } else {
        *spec
    };
    let b = integrate(upper, 0.0, 1.0, &s)?;
    Ok(1.0 - (a.value + b.value) / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{eh_alpha_series, FractionalOrder};
    use crate::sum::SeriesControl;
    use approx::assert_relative_eq;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn eh_integral_matches_series_in_overlap() {
        let ctl = SeriesControl::default();
        for a in [0.25, 0.5, 0.75] {
            for t in [0.5, 2.0, 6.0] {
                let s = eh_alpha_series(FractionalOrder::new(a).unwrap(), 1.0, t, &ctl).unwrap();
                let i = eh_integral(a, 1.0, t, &q()).unwrap();
                assert_relative_eq!(i, s, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn i_alpha_limits() {
        for a in [0.2, 0.5, 0.9] {
            assert_relative_eq!(i_alpha(a, 0.0, &q()).unwrap(), 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(
            i_alpha(0.5, 2.0, &q()).unwrap(),
            0.33620400244634121,
            max_relative = 1e-11
        );
        assert!((i_alpha(0.999, 1.0, &q()).unwrap() - (-1.0f64).exp()).abs() < 1e-3);
        assert!(i_alpha(1.0, 1.0, &q()).is_err());
    }

    #[test]
    fn q_conv_unity_reference_values() {
        assert_relative_eq!(
            q_conv_unity(0.5, 1.0, 1.0, &q()).unwrap(),
            0.4716049381348696,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            q_conv_unity(0.7, 0.3, 2.0, &q()).unwrap(),
            0.73630059371868,
            max_relative = 1e-10
        );
        for (a, n) in [(0.5, 0.0), (0.8, 0.0), (0.3, 2.0)] {
            assert!(q_conv_unity(a, n, 0.0, &q()).unwrap().abs() < 1e-11);
        }
    }

    #[test]
    fn p_conv_unity_reference_values() {
        assert_relative_eq!(
            p_conv_unity(0.5, 0.5, 1.0, &q()).unwrap(),
            0.31891514237930591,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            p_conv_unity(0.3, 2.0, 3.0, &q()).unwrap(),
            0.24923093213293320,
            max_relative = 1e-10
        );
        assert!(p_conv_unity(0.5, 0.5, 0.0, &q()).unwrap().abs() < 1e-11);
    }

    #[test]
    fn hn_spectral_reduces_to_rabotnov() {
        // β = 1: τ₀R = (eh)_α with τ = τ₀
        let a = 0.5;
        for theta in [0.5, 3.0, 20.0] {
            let r = hn_kernel_spectral(a, 1.0, theta, &q()).unwrap();
            let e = eh_integral(a, 1.0, theta, &q()).unwrap();
            assert_relative_eq!(r, e, max_relative = 1e-10);
            let f = hn_relaxation_spectral(a, 1.0, theta, &q()).unwrap();
            assert_relative_eq!(
                f,
                1.0 - i_alpha(a, theta, &q()).unwrap(),
                max_relative = 1e-10
            );
        }
    }
}
