//! Vanin's asymmetric distribution density and Suvorova's nonlinear
//! hereditary stress.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature_oracle::{integrate, integrate_with_breaks, QuadratureSpec};
use crate::specfun::{
    eh_lambda, gamma, gauss_2f1_11, kummer_1f1, ln_gamma, rgamma, FractionalOrder,
};
use crate::sum::SeriesControl;

/// Highest moment order accepted by [`vanin_moment`].
pub const VANIN_MAX_ORDER: u32 = 8;

/// p(x) = A x^b exp(−x²/2σ²) sh(ax/σ) on x ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaninDistribution {
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    /// Normalizing factor A, from the closed ₁F₁ expression.
    pub norm: f64,
}

impl VaninDistribution {
    pub fn new(a: f64, b: f64, sigma: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Vanin shape a must be positive, got {a}"
            )));
        }
        if !(b > -1.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Vanin exponent b must exceed -1, got {b}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Vanin scale sigma must be positive, got {sigma}"
            )));
        }
        let h = 1.0 + 0.5 * b;
        let f = kummer_1f1(
            h,
            1.5,
            0.5 * a * a,
            &SeriesControl::default().with_max_terms(5000),
        )?;
        let inv = 2f64.powf(0.5 * b) * a * sigma.powf(1.0 + b) * gamma(h)? * f;
        let norm = 1.0 / inv;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Vanin normalizer is not finite for a = {a}"
            )));
        }
        Ok(Self { a, b, sigma, norm })
    }

    /// x^b exp(−x²/2σ²) sh(ax/σ), evaluated without overflowing sh.
    pub fn unnormalized(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let y = x / self.sigma;
        let g = -0.5 * y * y;
        let s = self.a * y;
        // sh(s) e^g = ½ e^(g+s) (1 − e^(−2s))
        x.powf(self.b) * 0.5 * (g + s).exp() * -(-2.0 * s).exp_m1()
    }

    fn upper(&self) -> f64 {
        self.sigma * (self.a + 40.0)
    }

    fn integral_of<F: Fn(f64) -> f64>(&self, f: F, quad: &QuadratureSpec) -> Result<f64> {
        let s = self.sigma;
        let breaks = [0.5 * s, s * self.a, s * (self.a + 3.0), s * (self.a + 8.0)];
        let head = integrate(
            &f,
            0.0,
            s * 0.5,
            &quad.with_singularity(self.b.min(0.0) + 1.0),
        )?;
        let body = integrate_with_breaks(&f, s * 0.5, self.upper(), &breaks, quad)?;
        Ok(head.value + body.value)
    }

    /// ∫₀^∞ of the unnormalized density, by quadrature.
    pub fn unnormalized_mass(&self, quad: &QuadratureSpec) -> Result<f64> {
        self.integral_of(|x| self.unnormalized(x), quad)
    }

    /// |A·∫(unnormalized) − 1|.
    pub fn normalization_defect(&self, quad: &QuadratureSpec) -> Result<f64> {
        Ok((self.norm * self.unnormalized_mass(quad)? - 1.0).abs())
    }
}

pub fn vanin_pdf(d: &VaninDistribution, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain("vanin_pdf", format!("requires x >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(d.norm * d.unnormalized(x))
}

/// Initial moment ∫ x^order p(x) dx, computed by quadrature.
pub fn vanin_moment(d: &VaninDistribution, order: u32, quad: &QuadratureSpec) -> Result<f64> {
    if order > VANIN_MAX_ORDER {
        return Err(domain(
            "vanin_moment",
            format!("order must not exceed {VANIN_MAX_ORDER}"),
        ));
    }
    if order == 0 {
        return Ok(1.0);
    }
    Ok(d.norm * d.integral_of(|x| x.powi(order as i32) * d.unnormalized(x), quad)?)
}

/// Nonlinear hereditary solid φ(ε) = (1 + K*)σ with φ(ε) = a ln(1 + bε),
/// K(t) = k t^(−α) and a constant strain rate ε = ε̇ t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuvorovaModel {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub alpha: FractionalOrder,
    pub strain_rate: f64,
}

impl SuvorovaModel {
    pub fn new(a: f64, b: f64, k: f64, alpha: FractionalOrder, strain_rate: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a must be finite, got {a}"
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "b must be positive, got {b}"
            )));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k must be non-negative, got {k}"
            )));
        }
        alpha.require_open("suvorova")?;
        if !(strain_rate >= 0.0 && strain_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "strain rate must be non-negative, got {strain_rate}"
            )));
        }
        Ok(Self {
            a,
            b,
            k,
            alpha,
            strain_rate,
        })
    }

    /// φ(ε(t)) = a ln(1 + bε̇t).
    pub fn phi(&self, t: f64) -> f64 {
        self.a * (self.b * self.strain_rate * t).ln_1p()
    }

    /// The series ratio c = −kΓ(1−α).
    pub fn ratio(&self) -> f64 {
        -self.k * gamma(1.0 - self.alpha.value()).unwrap_or(f64::NAN)
    }
}

fn check_t(function: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("requires finite t >= 0, got {t}")))
    }
}

/// The kernel in its Γ(1−α)-weighted form,
/// t^(−α) Σ [−kΓ(1−α)]ⁿ t^(n(1−α)) / Γ[(n+1)(1−α)].
///
/// This is (eh)_γ(λ, t) of [`eh_lambda`] with order γ = 1 − α and
/// λ = kΓ(1−α), which is how it is evaluated.
pub fn suvorova_eh(alpha: FractionalOrder, k: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    let a = alpha.require_open("suvorova_eh")?;
    let g = FractionalOrder::new(1.0 - a)?;
    eh_lambda(g, k * gamma(1.0 - a)?, t, ctl)
}

/// σ(t) = φ + Σ_{n≥1} a cⁿ b ε̇ t^(nγ+1) / Γ(nγ+2) · ₂F₁(1,1; 2+nγ; −bε̇t),
/// with c = −kΓ(1−α) and γ = 1 − α.
pub fn suvorova_stress_series(m: &SuvorovaModel, t: f64, ctl: &SeriesControl) -> Result<f64> {
    check_t("suvorova_stress_series", t)?;
    let phi = m.phi(t);
    if t == 0.0 || m.k == 0.0 || m.a == 0.0 || m.strain_rate == 0.0 {
        return Ok(phi);
    }
    let g = 1.0 - m.alpha.value();
    let c = m.ratio();
    let x = -m.b * m.strain_rate * t;
    let (ln_c, ln_t) = (c.abs().ln(), t.ln());
    let mut err = None;
    let tail = ctl.sum("suvorova_stress_series", |i| {
        let n = (i + 1) as f64;
        let arg = n * g + 2.0;
        let mag = (n * ln_c + (n * g + 1.0) * ln_t - ln_gamma(arg).unwrap_or(f64::NAN)).exp();
        let sign = if c < 0.0 && (i + 1) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        match gauss_2f1_11(arg, x) {
            Ok(f) => Some(sign * mag * f),
            Err(e) => {
                err = Some(e);
                None
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(phi + m.a * m.b * m.strain_rate * tail)
}

/// σ(t) = φ(ε(t)) − ∫₀ᵗ kΓ(1−α) eh(−k, t−τ) φ(ε(τ)) dτ by quadrature.
///
/// The substitution t−τ = v^(1/γ) absorbs the s^(−α) singularity of the
/// kernel, leaving (c/γ) ∫₀^(t^γ) E_{γ,γ}(cv) φ(t − v^(1/γ)) dv.
pub fn suvorova_convolution(m: &SuvorovaModel, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_t("suvorova_convolution", t)?;
    let phi = m.phi(t);
    if t == 0.0 || m.k == 0.0 {
        return Ok(phi);
    }
    let g = 1.0 - m.alpha.value();
    let order = FractionalOrder::new(g)?;
    let c = m.ratio();
    let ctl = SeriesControl::default();
    let integrand = |v: f64| {
        let s = v.powf(1.0 / g).min(t);
        // E_{γ,γ}(c s^γ) = s^(1−γ) eh_γ(−c, s)
        let e = if s == 0.0 {
            rgamma(g)
        } else {
            s.powf(1.0 - g) * eh_lambda(order, -c, s, &ctl).unwrap_or(f64::NAN)
        };
        e * m.phi(t - s)
    };
    let i = integrate(integrand, 0.0, t.powf(g), quad)?;
    Ok(phi + c / g * i.value)
}
