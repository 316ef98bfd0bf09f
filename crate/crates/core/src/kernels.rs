//! Time-domain hereditary kernels.
//!
//! Kernels are normalised so that their Laplace transform equals the
//! dimensionless relaxation symbol of the family, e.g. 1/(1 + (pτ)^α) for
//! the Rabotnov kernel; multiply by ΔM for a modulus-weighted kernel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature_oracle::{self, QuadratureSpec};
use crate::specfun::{
    eh_alpha_evaluated, eh_lambda, kummer_1f1, mittag_leffler, rgamma, FractionalOrder,
};
use crate::sum::SeriesControl;
use crate::Evaluation;

/// Largest t/τ₀ at which the Havriliak-Negami power series is trusted.
pub const HN_SERIES_CROSSOVER: f64 = 5.0;

/// Largest t/τ₀ for the double series of the creep resolvent. The shapes nβ
/// grow with n and the inner series cancel far more strongly than the
/// kernel's own series, so the spectral route takes over earlier.
pub const HN_RESOLVENT_SERIES_CROSSOVER: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Abel,
    Rabotnov,
    RzhanitsynDavidson,
    Chgf,
    HavriliakNegami,
}

impl Family {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "abel" => Some(Self::Abel),
            "rabotnov" | "cole-cole" => Some(Self::Rabotnov),
            "rzhanitsyn-davidson" | "rzhanitsyn" | "davidson-cole" => {
                Some(Self::RzhanitsynDavidson)
            }
            "chgf" => Some(Self::Chgf),
            "hn" | "havriliak-negami" => Some(Self::HavriliakNegami),
            "debye" => Some(Self::HavriliakNegami),
            _ => None,
        }
    }
}

/// A kernel family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub family: Family,
    pub alpha: FractionalOrder,
    /// Havriliak-Negami only; 1 for every other family.
    pub beta: FractionalOrder,
    pub tau: f64,
    pub m_inf: Option<f64>,
    pub m_0: Option<f64>,
}

impl KernelModel {
    pub fn new(
        family: Family,
        alpha: FractionalOrder,
        beta: FractionalOrder,
        tau: f64,
    ) -> Result<Self> {
        let model = Self {
            family,
            alpha,
            beta: if family == Family::HavriliakNegami {
                beta
            } else {
                FractionalOrder::ONE
            },
            tau,
            m_inf: None,
            m_0: None,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_moduli(mut self, m_inf: f64, m_0: f64) -> Result<Self> {
        self.m_inf = Some(m_inf);
        self.m_0 = Some(m_0);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if self.family != Family::HavriliakNegami && !self.beta.is_one() {
            return Err(Error::InvalidParameter(
                "beta applies to the Havriliak-Negami family only".into(),
            ));
        }
        if let (Some(mi), Some(m0)) = (self.m_inf, self.m_0) {
            check_moduli(mi, m0)?;
        }
        Ok(())
    }

    /// ΔM = M∞ − M₀ when both moduli are present.
    pub fn delta_m(&self) -> Option<f64> {
        Some(self.m_inf? - self.m_0?)
    }

    pub fn hn_params(&self) -> HNParams {
        HNParams {
            alpha: self.alpha,
            beta: self.beta,
            tau0: self.tau,
            m_inf: self.m_inf.unwrap_or(2.0),
            m_0: self.m_0.unwrap_or(1.0),
        }
    }

    /// Dimensionless relaxation symbol R̃(p), the Laplace transform of
    /// [`KernelModel::kernel`].
    pub fn transform(&self, p: Complex64) -> Complex64 {
        let a = self.alpha.value();
        let pt = p * self.tau;
        match self.family {
            Family::Abel => pt.powf(-a),
            Family::Rabotnov => 1.0 / (1.0 + pt.powf(a)),
            Family::RzhanitsynDavidson => (1.0 + pt).powf(-a),
            Family::Chgf => 1.0 - (1.0 + 1.0 / pt).powf(-a),
            Family::HavriliakNegami => (1.0 + pt.powf(a)).powf(-self.beta.value()),
        }
    }

    /// Time kernel R(t) with the route used.
    pub fn kernel(&self, t: f64, ctl: &SeriesControl, quad: &QuadratureSpec) -> Result<Evaluation> {
        let a = self.alpha;
        let tau = self.tau;
        match self.family {
            Family::Abel => {
                check_t("abel_kernel", t)?;
                Ok(Evaluation::series(abel_kernel(a.value(), tau, t)))
            }
            Family::Rabotnov => {
                let e = eh_alpha_evaluated(a, tau, t, ctl, quad)?;
                Ok(Evaluation {
                    value: e.value * tau.powf(-a.value()),
                    method: e.method,
                })
            }
            Family::RzhanitsynDavidson => {
                check_t("rzhanitsyn_kernel", t)?;
                Ok(Evaluation::series(rzhanitsyn_kernel(a.value(), tau, t)))
            }
            Family::Chgf => Ok(Evaluation::series(chgf_kernel_r(a, tau, t, ctl)?)),
            Family::HavriliakNegami => {
                hn_relaxation_kernel_evaluated(&self.hn_params(), t, ctl, quad)
            }
        }
    }
}

fn check_moduli(m_inf: f64, m_0: f64) -> Result<()> {
    if !(m_0 > 0.0 && m_inf >= m_0 && m_inf.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "moduli must satisfy M_inf >= M_0 > 0, got M_inf = {m_inf}, M_0 = {m_0}"
        )));
    }
    Ok(())
}

fn check_t(function: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("requires finite t >= 0, got {t}")))
    }
}

/// (1/τ)(t/τ)^(α−1)/Γ(α).
pub fn abel_kernel(alpha: f64, tau: f64, t: f64) -> f64 {
    (t / tau).powf(alpha - 1.0) * rgamma(alpha) / tau
}

/// (1/τ)(t/τ)^(α−1) e^(−t/τ)/Γ(α), transform (1 + pτ)^(−α).
pub fn rzhanitsyn_kernel(alpha: f64, tau: f64, t: f64) -> f64 {
    let theta = t / tau;
    theta.powf(alpha - 1.0) * (-theta).exp() * rgamma(alpha) / tau
}

/// Havriliak-Negami parameter set {α, β, τ₀, M∞, M₀}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HNParams {
    pub alpha: FractionalOrder,
    pub beta: FractionalOrder,
    pub tau0: f64,
    pub m_inf: f64,
    pub m_0: f64,
}

impl HNParams {
    pub fn new(alpha: f64, beta: f64, tau0: f64, m_inf: f64, m_0: f64) -> Result<Self> {
        let p = Self {
            alpha: FractionalOrder::new(alpha)?,
            beta: FractionalOrder::new(beta)?,
            tau0,
            m_inf,
            m_0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Shape-only parameters with unit relaxation strength (M∞ = 2, M₀ = 1).
    pub fn shape(alpha: f64, beta: f64, tau0: f64) -> Result<Self> {
        Self::new(alpha, beta, tau0, 2.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau0 must be positive, got {}",
                self.tau0
            )));
        }
        check_moduli(self.m_inf, self.m_0)
    }

    pub fn delta_m(&self) -> f64 {
        self.m_inf - self.m_0
    }
}

/// Relaxation function S(t) = ₁F₁(α, 1, −t/τ_ε) of the confluent
/// hypergeometric kernel.
pub fn chgf_relaxation_s(
    alpha: FractionalOrder,
    tau_eps: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_tau("chgf_relaxation_s", tau_eps)?;
    check_t("chgf_relaxation_s", t)?;
    kummer_1f1(alpha.value(), 1.0, -t / tau_eps, ctl)
}

/// Kernel R(t) = (α/τ_ε)·₁F₁(1+α, 2, −t/τ_ε) = −dS/dt.
pub fn chgf_kernel_r(
    alpha: FractionalOrder,
    tau_eps: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_tau("chgf_kernel_r", tau_eps)?;
    check_t("chgf_kernel_r", t)?;
    let a = alpha.value();
    Ok(a / tau_eps * kummer_1f1(1.0 + a, 2.0, -t / tau_eps, ctl)?)
}

fn check_tau(function: &'static str, tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("requires tau > 0, got {tau}")))
    }
}

/// Q_α(λ, t) = e^(−t/τ)·(eh)_α(λ, t), transform 1/(λ + (p + 1/τ)^α).
pub fn q_kernel(
    alpha: FractionalOrder,
    lambda: f64,
    tau: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_tau("q_kernel", tau)?;
    check_t("q_kernel", t)?;
    let damping = (-t / tau).exp();
    let eh = eh_lambda(alpha, lambda, t, ctl)?;
    if damping == 0.0 {
        return Ok(0.0);
    }
    Ok(damping * eh)
}

/// P_α(λ, t) with λ = n τ^α:
///
/// τ^(−α−1) Σₖ nᵏ/(n+1)^(k+1) {α(k+1)·₁F₁[α(k+1)+1, 2, −θ] − kα·₁F₁(kα+1, 2, −θ)},
/// whose transform is τ^(−α)(1 − X)/(1 + n − nX), X = (pτ/(1+pτ))^α.
pub fn p_kernel(
    alpha: FractionalOrder,
    n: f64,
    tau: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_tau("p_kernel", tau)?;
    check_t("p_kernel", t)?;
    if !(n >= 0.0 && n.is_finite()) {
        return Err(domain("p_kernel", format!("requires n >= 0, got {n}")));
    }
    let a = alpha.value();
    let x = -t / tau;
    let ratio = n / (n + 1.0);
    let mut weight = 1.0 / (n + 1.0);
    let mut err = None;
    let sum = ctl.sum("p_kernel", |k| {
        if k > 0 {
            weight *= ratio;
            if weight == 0.0 {
                return None;
            }
        }
        let kf = k as f64;
        let lead = a * (kf + 1.0);
        let first = match kummer_1f1(lead + 1.0, 2.0, x, ctl) {
            Ok(v) => lead * v,
            Err(e) => {
                err = Some(e);
                return Some(f64::NAN);
            }
        };
        let second = if k == 0 {
            0.0
        } else {
            match kummer_1f1(kf * a + 1.0, 2.0, x, ctl) {
                Ok(v) => kf * a * v,
                Err(e) => {
                    err = Some(e);
                    return Some(f64::NAN);
                }
            }
        };
        Some(weight * (first - second))
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(tau.powf(-a - 1.0) * sum?)
}

/// Havriliak-Negami relaxation kernel R(t), transform (1 + (pτ₀)^α)^(−β).
pub fn hn_relaxation_kernel(p: &HNParams, t: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(hn_relaxation_kernel_evaluated(p, t, ctl, &QuadratureSpec::default())?.value)
}

/// [`hn_relaxation_kernel`] with its route: power series up to
/// [`HN_SERIES_CROSSOVER`], spectral quadrature beyond; closed forms for α = 1.
pub fn hn_relaxation_kernel_evaluated(
    p: &HNParams,
    t: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    p.validate()?;
    check_t("hn_relaxation_kernel", t)?;
    let (a, b, tau0) = (p.alpha.value(), p.beta.value(), p.tau0);
    let theta = t / tau0;
    if t == 0.0 {
        let v = if a * b < 1.0 {
            f64::INFINITY
        } else {
            1.0 / tau0
        };
        return Ok(Evaluation::series(v));
    }
    if a == 1.0 {
        return Ok(Evaluation::series(rzhanitsyn_kernel(b, tau0, t)));
    }
    let e = hn_kernel_generic(a, b, theta, ctl, quad)?;
    Ok(Evaluation {
        value: e.value / tau0,
        ..e
    })
}

/// τ₀·R without the closed-form shortcuts: series up to
/// [`HN_SERIES_CROSSOVER`], spectral integral beyond (α < 1 only).
pub(crate) fn hn_kernel_generic(
    a: f64,
    b: f64,
    theta: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    if theta <= HN_SERIES_CROSSOVER {
        return Ok(Evaluation::series(hn_shape_series(a, b, theta, ctl)?));
    }
    Ok(Evaluation::quadrature(
        quadrature_oracle::hn_kernel_spectral(a, b, theta, quad)?,
    ))
}

/// τ₀·R for shape b (b may exceed 1):
/// Σᵢ (−1)ⁱ (b)ᵢ/i! · θ^(α(b+i)−1) / Γ(α(b+i)).
fn hn_shape_series(a: f64, b: f64, theta: f64, ctl: &SeriesControl) -> Result<f64> {
    let ln_theta = theta.ln();
    let mut coef = 1.0;
    ctl.sum("hn_relaxation_kernel", |i| {
        let fi = i as f64;
        if i > 0 {
            coef *= -(b + fi - 1.0) / fi;
        }
        let e = a * (b + fi);
        Some(coef * ((e - 1.0) * ln_theta).exp() * rgamma(e))
    })
}

/// Relaxation function ∫₀ᵗ R(s) ds of the Havriliak-Negami kernel.
pub fn hn_relaxation_function(p: &HNParams, t: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(hn_relaxation_function_evaluated(p, t, ctl, &QuadratureSpec::default())?.value)
}

pub fn hn_relaxation_function_evaluated(
    p: &HNParams,
    t: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    p.validate()?;
    check_t("hn_relaxation_function", t)?;
    let (a, b, tau0) = (p.alpha.value(), p.beta.value(), p.tau0);
    let theta = t / tau0;
    if t == 0.0 {
        return Ok(Evaluation::series(0.0));
    }
    if a == 1.0 {
        // regularised lower incomplete gamma P(β, θ) = θ^β e^(−θ) E_{1,β+1}(θ)
        if theta > 600.0 {
            return Ok(Evaluation::series(1.0));
        }
        let v = theta.powf(b) * (-theta).exp() * mittag_leffler(1.0, b + 1.0, theta, ctl)?;
        return Ok(Evaluation::series(v));
    }
    if theta <= HN_SERIES_CROSSOVER {
        let ln_theta = theta.ln();
        let mut coef = 1.0;
        let v = ctl.sum("hn_relaxation_function", |i| {
            let fi = i as f64;
            if i > 0 {
                coef *= -(b + fi - 1.0) / fi;
            }
            let e = a * (b + fi);
            Some(coef * (e * ln_theta).exp() * rgamma(e + 1.0))
        })?;
        return Ok(Evaluation::series(v));
    }
    let v = quadrature_oracle::hn_relaxation_spectral(a, b, theta, quad)?;
    Ok(Evaluation::quadrature(v))
}

/// Creep resolvent K(t) of the Havriliak-Negami kernel, K̃ = R̃/(1 − R̃).
///
/// K = Σ_{n≥1} R(α, nβ): inner power series per n, then the outer sum.
/// Reductions: β = 1 gives the Abel kernel, α = 1 gives
/// (e^(−θ)/t) Σₙ θ^(nβ)/Γ(nβ). The Debye case α = β = 1 has no tabulated
/// resolvent and returns [`Error::NoResolvent`].
pub fn hn_creep_resolvent(p: &HNParams, t: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(hn_creep_resolvent_evaluated(p, t, ctl, &QuadratureSpec::default())?.value)
}

pub fn hn_creep_resolvent_evaluated(
    p: &HNParams,
    t: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    p.validate()?;
    let (a, b, tau0) = (p.alpha.value(), p.beta.value(), p.tau0);
    if a == 1.0 && b == 1.0 {
        return Err(Error::NoResolvent);
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(
            "hn_creep_resolvent",
            format!("requires t > 0, got {t}"),
        ));
    }
    let theta = t / tau0;
    if b == 1.0 {
        return Ok(Evaluation::series(abel_kernel(a, tau0, t)));
    }
    if a == 1.0 {
        let ln_theta = theta.ln();
        let s = ctl.sum("hn_creep_resolvent", |n| {
            let e = (n + 1) as f64 * b;
            Some(((e * ln_theta) - theta).exp() * rgamma(e))
        })?;
        return Ok(Evaluation::series(s / t));
    }
    let e = hn_resolvent_generic(a, b, theta, ctl, quad)?;
    Ok(Evaluation {
        value: e.value / tau0,
        ..e
    })
}

/// τ₀·K without the closed-form shortcuts: double series up to
/// [`HN_RESOLVENT_SERIES_CROSSOVER`], spectral integral beyond.
pub(crate) fn hn_resolvent_generic(
    a: f64,
    b: f64,
    theta: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    if theta <= HN_RESOLVENT_SERIES_CROSSOVER {
        let mut err = None;
        let s = ctl.sum("hn_creep_resolvent", |n| {
            match hn_shape_series(a, (n + 1) as f64 * b, theta, ctl) {
                Ok(v) => Some(v),
                Err(e) => {
                    err = Some(e);
                    Some(f64::NAN)
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        return Ok(Evaluation::series(s?));
    }
    Ok(Evaluation::quadrature(
        quadrature_oracle::hn_resolvent_spectral(a, b, theta, quad)?,
    ))
}

/// Choice of the standard-linear-solid parameter q_ν from the modulus ratio m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PNuVariant {
    /// q = 1/m − 1
    Three,
    /// q = m − 1
    Four,
}

impl PNuVariant {
    pub fn q(self, m: f64) -> f64 {
        match self {
            Self::Three => 1.0 / m - 1.0,
            Self::Four => m - 1.0,
        }
    }
}

/// Step response P_ν(t) whose transform is (1 + q)/(p((1 + 1/(pτ))^α + q)).
///
/// For |q| < 1: (1+q) Σₙ (−q)ⁿ ₁F₁[α(n+1), 1, −θ];
/// for |q| > 1: (1 + 1/q) Σₙ (−q)^(−n) ₁F₁(−αn, 1, −θ).
pub fn p_nu_response(
    alpha: FractionalOrder,
    m: f64,
    tau_nu: f64,
    variant: PNuVariant,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain("p_nu_response", format!("requires m > 0, got {m}")));
    }
    check_tau("p_nu_response", tau_nu)?;
    check_t("p_nu_response", t)?;
    let q = variant.q(m);
    let a = alpha.value();
    let x = -t / tau_nu;
    if q.abs() == 1.0 {
        return Err(Error::BranchDegeneracy { q });
    }
    let mut err = None;
    let mut power = 1.0;
    let (ratio, prefactor) = if q.abs() < 1.0 {
        (-q, 1.0 + q)
    } else {
        (-1.0 / q, 1.0 + 1.0 / q)
    };
    let outer = ctl.sum("p_nu_response", |n| {
        if n > 0 {
            power *= ratio;
            if power == 0.0 {
                return None;
            }
        }
        let nf = n as f64;
        let first = if q.abs() < 1.0 {
            a * (nf + 1.0)
        } else {
            -a * nf
        };
        match kummer_1f1(first, 1.0, x, ctl) {
            Ok(v) => Some(power * v),
            Err(e) => {
                err = Some(e);
                Some(f64::NAN)
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(prefactor * outer?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::eh_alpha;
    use crate::Method;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn fo(x: f64) -> FractionalOrder {
        FractionalOrder::new(x).unwrap()
    }

    #[test]
    fn chgf_anchor_values() {
        assert_relative_eq!(
            chgf_relaxation_s(fo(1.0), 1.0, 3.0, &ctl()).unwrap(),
            (-3.0f64).exp(),
            max_relative = 1e-13
        );
        assert_eq!(chgf_relaxation_s(fo(0.3), 2.0, 0.0, &ctl()).unwrap(), 1.0);
        assert_eq!(chgf_kernel_r(fo(1.0), 1.0, 0.0, &ctl()).unwrap(), 1.0);
        assert_relative_eq!(
            chgf_kernel_r(fo(1.0), 2.0, 2.0, &ctl()).unwrap(),
            0.5 * (-1.0f64).exp(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn chgf_kernel_is_minus_derivative() {
        let h = 1e-5;
        for t in [0.2, 0.7, 3.0, 12.0] {
            let d = (chgf_relaxation_s(fo(0.5), 1.0, t + h, &ctl()).unwrap()
                - chgf_relaxation_s(fo(0.5), 1.0, t - h, &ctl()).unwrap())
                / (2.0 * h);
            assert!((chgf_kernel_r(fo(0.5), 1.0, t, &ctl()).unwrap() + d).abs() < 1e-6);
        }
    }

    #[test]
    fn q_kernel_values() {
        assert_relative_eq!(
            q_kernel(fo(1.0), 1.0, 1.0, 1.0, &ctl()).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-13
        );
        let eh = eh_alpha(fo(0.5), 1.0, 0.5, &ctl()).unwrap();
        assert_relative_eq!(
            q_kernel(fo(0.5), 1.0, 1.0, 0.5, &ctl()).unwrap(),
            (-0.5f64).exp() * eh,
            max_relative = 1e-14
        );
    }

    #[test]
    fn p_kernel_values() {
        // n = 0 leaves the k = 0 term α·₁F₁(α+1, 2, −θ)
        assert_relative_eq!(
            p_kernel(fo(1.0), 0.0, 1.0, 1.0, &ctl()).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            p_kernel(fo(0.5), 0.5, 1.0, 1.0, &ctl()).unwrap(),
            0.19085644641477540,
            max_relative = 1e-11
        );
        assert!(matches!(
            p_kernel(fo(0.5), 1e6, 1.0, 1.0, &ctl()),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn hn_table_rows() {
        let debye = HNParams::shape(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(
            hn_relaxation_kernel(&debye, 2.0, &ctl()).unwrap(),
            0.5 * (-1.0f64).exp(),
            max_relative = 1e-14
        );
        let rd = HNParams::shape(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(
            hn_relaxation_kernel(&rd, 1.0, &ctl()).unwrap(),
            (-1.0f64).exp() / PI.sqrt(),
            max_relative = 1e-13
        );
        let cc = HNParams::shape(0.5, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            hn_relaxation_kernel(&cc, 0.2, &ctl()).unwrap(),
            eh_alpha(fo(0.5), 1.0, 0.2, &ctl()).unwrap(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn hn_kernel_series_meets_quadrature() {
        let p = HNParams::shape(0.61, 0.8, 1.0).unwrap();
        let q = QuadratureSpec::default();
        for theta in [0.5, 2.0, 5.0] {
            let s = hn_shape_series(0.61, 0.8, theta, &ctl()).unwrap();
            let i = quadrature_oracle::hn_kernel_spectral(0.61, 0.8, theta, &q).unwrap();
            assert_relative_eq!(s, i, max_relative = 1e-9);
        }
        let e = hn_relaxation_kernel_evaluated(&p, 8.0, &ctl(), &q).unwrap();
        assert_eq!(e.method, Method::Quadrature);
    }

    #[test]
    fn hn_resolvent_rows() {
        let abel = HNParams::shape(0.5, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            hn_creep_resolvent(&abel, 4.0, &ctl()).unwrap(),
            1.0 / (2.0 * PI.sqrt()),
            max_relative = 1e-13
        );
        let kolt = HNParams::shape(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(
            hn_creep_resolvent(&kolt, 1.0, &ctl()).unwrap(),
            2.0502545416600122,
            max_relative = 1e-12
        );
        let debye = HNParams::shape(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            hn_creep_resolvent(&debye, 1.0, &ctl()),
            Err(Error::NoResolvent)
        );
    }

    #[test]
    fn hn_resolvent_series_meets_quadrature() {
        let q = QuadratureSpec::default();
        let p = HNParams::shape(0.6, 0.7, 1.0).unwrap();
        for theta in [0.1, 0.5, 1.0] {
            let s = hn_creep_resolvent(&p, theta, &ctl()).unwrap();
            let i = quadrature_oracle::hn_resolvent_spectral(0.6, 0.7, theta, &q).unwrap();
            assert_relative_eq!(s, i, max_relative = 1e-9);
        }
        // high-precision inverse transform of 1/((1 + p^0.6)^0.7 − 1)
        let far = hn_creep_resolvent_evaluated(&p, 4.5, &ctl(), &q).unwrap();
        assert_eq!(far.method, Method::Quadrature);
        assert_relative_eq!(far.value, 0.52719059396021541, max_relative = 1e-11);
    }

    #[test]
    fn hn_relaxation_function_values() {
        let any = HNParams::shape(0.4, 0.3, 1.0).unwrap();
        assert_eq!(hn_relaxation_function(&any, 0.0, &ctl()).unwrap(), 0.0);
        let debye = HNParams::shape(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            hn_relaxation_function(&debye, 1.0, &ctl()).unwrap(),
            1.0 - (-1.0f64).exp(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn p_nu_values() {
        assert_relative_eq!(
            p_nu_response(fo(1.0), 0.5, 1.0, PNuVariant::Four, 0.0, &ctl()).unwrap(),
            1.0,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            p_nu_response(fo(0.63), 0.5, 1.0, PNuVariant::Four, 1.0, &ctl()).unwrap(),
            0.32886139923123495,
            max_relative = 1e-11
        );
        // q = 1.5 takes the |q| > 1 branch
        assert_relative_eq!(
            p_nu_response(fo(0.63), 2.5, 1.0, PNuVariant::Four, 1.0, &ctl()).unwrap(),
            0.79433496855774619,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            p_nu_response(fo(0.5), 0.25, 1.0, PNuVariant::Three, 2.0, &ctl()).unwrap(),
            0.81833611757029599,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            p_nu_response(fo(0.7), 1.5, 1.0, PNuVariant::Four, 3.0, &ctl()).unwrap(),
            0.33524495145714235,
            max_relative = 1e-11
        );
        assert!(matches!(
            p_nu_response(fo(1.0), 2.0, 1.0, PNuVariant::Four, 1.0, &ctl()),
            Err(Error::BranchDegeneracy { .. })
        ));
    }

    #[test]
    fn p_nu_debye_limit() {
        // α = 1: exp(−t/((1+q)τ))
        for (m, v) in [
            (0.5, PNuVariant::Four),
            (0.2, PNuVariant::Three),
            (3.5, PNuVariant::Four),
        ] {
            let q = v.q(m);
            let t = 1.3;
            assert_relative_eq!(
                p_nu_response(fo(1.0), m, 1.0, v, t, &ctl()).unwrap(),
                (-t / (1.0 + q)).exp(),
                max_relative = 1e-10
            );
        }
    }
}
