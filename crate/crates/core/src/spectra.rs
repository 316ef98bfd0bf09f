//! Complex moduli and compliances, and relaxation-time spectra.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{Family, HNParams, KernelModel};
use crate::quadrature_oracle::{integrate, integrate_to_infinity, QuadratureSpec};
use crate::specfun::FractionalOrder;

fn check_omega(function: &'static str, omega: f64) -> Result<()> {
    if omega >= 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(domain(
            function,
            format!("requires finite omega >= 0, got {omega}"),
        ))
    }
}

fn iw(omega: f64) -> Complex64 {
    Complex64::new(0.0, omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplianceForm {
    /// J∞ + J∞(iωτ)^(−α)
    Abel,
    /// J∞ + ΔJ(1 + iωτ)^(−α)
    RzhanitsynDavidson,
    /// J₀ − ΔJ(1 + 1/(iωτ))^(−α)
    Chgf,
}

/// Compliance of a simple hereditary solid in one of three forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplianceImageForm {
    pub form: ComplianceForm,
    pub alpha: FractionalOrder,
    pub tau: f64,
    pub j_inf: f64,
    pub j_0: f64,
}

impl ComplianceImageForm {
    pub fn new(
        form: ComplianceForm,
        alpha: FractionalOrder,
        tau: f64,
        j_inf: f64,
        j_0: f64,
    ) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(j_inf > 0.0 && j_0 > j_inf && j_0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "compliances must satisfy J_0 > J_inf > 0, got J_0 = {j_0}, J_inf = {j_inf}"
            )));
        }
        Ok(Self {
            form,
            alpha,
            tau,
            j_inf,
            j_0,
        })
    }

    pub fn delta_j(&self) -> f64 {
        self.j_0 - self.j_inf
    }

    /// m = J∞/J₀.
    pub fn m(&self) -> f64 {
        self.j_inf / self.j_0
    }

    /// The coefficient κ in J = J∞(1 + κ/LT): τ^(−α) for the Abel form,
    /// (1/m − 1)τ^(−α) for the Rzhanitsyn-Davidson form and (1/m − 1)τ^α for
    /// the confluent-hypergeometric form.
    pub fn kappa(&self) -> f64 {
        let a = self.alpha.value();
        match self.form {
            ComplianceForm::Abel => self.tau.powf(-a),
            ComplianceForm::RzhanitsynDavidson => (1.0 / self.m() - 1.0) * self.tau.powf(-a),
            ComplianceForm::Chgf => (1.0 / self.m() - 1.0) * self.tau.powf(a),
        }
    }

    /// Symbol LT(iω) of the basic operator belonging to the form.
    pub fn operator_symbol(&self, omega: f64) -> Complex64 {
        let a = self.alpha.value();
        let p = iw(omega);
        match self.form {
            ComplianceForm::Abel => p.powf(a),
            ComplianceForm::RzhanitsynDavidson => (1.0 / self.tau + p).powf(a),
            ComplianceForm::Chgf => {
                let x = (p * self.tau / (1.0 + p * self.tau)).powf(a);
                self.tau.powf(a) / (1.0 - x)
            }
        }
    }
}

/// J(iω) of the printed compliance forms.
pub fn compliance_image(f: &ComplianceImageForm, omega: f64) -> Result<Complex64> {
    check_omega("compliance_image", omega)?;
    let a = f.alpha.value();
    let z = iw(omega) * f.tau;
    match f.form {
        ComplianceForm::Abel => {
            if omega == 0.0 {
                return Err(domain(
                    "compliance_image",
                    "the Abel form diverges at omega = 0",
                ));
            }
            Ok(f.j_inf + f.j_inf * z.powf(-a))
        }
        ComplianceForm::RzhanitsynDavidson => Ok(f.j_inf + f.delta_j() * (1.0 + z).powf(-a)),
        ComplianceForm::Chgf => {
            if omega == 0.0 {
                return Err(domain(
                    "compliance_image",
                    "the hypergeometric form needs omega > 0",
                ));
            }
            Ok(f.j_0 - f.delta_j() * (1.0 + 1.0 / z).powf(-a))
        }
    }
}

/// The same compliance written as J∞(1 + κ/LT(iω)).
pub fn compliance_image_kappa_form(f: &ComplianceImageForm, omega: f64) -> Result<Complex64> {
    check_omega("compliance_image", omega)?;
    if omega == 0.0 {
        return Err(domain(
            "compliance_image",
            "the operator form needs omega > 0",
        ));
    }
    Ok(f.j_inf * (1.0 + f.kappa() / f.operator_symbol(omega)))
}

/// M(iω) = M∞ − ΔM/(1 + (iωτ_ε)^α).
pub fn rabotnov_modulus(
    m_inf: f64,
    dm: f64,
    alpha: FractionalOrder,
    tau_eps: f64,
    omega: f64,
) -> Result<Complex64> {
    check_omega("rabotnov_modulus", omega)?;
    if !(tau_eps > 0.0) {
        return Err(domain("rabotnov_modulus", "requires tau_eps > 0"));
    }
    Ok(m_inf - dm / (1.0 + (iw(omega) * tau_eps).powf(alpha.value())))
}

/// J(iω) = J∞ − ΔJ/(1 + (iωτ_σ)^α) with ΔJ = J∞ − J₀, so that J(0) = J₀.
pub fn rabotnov_compliance(
    j_inf: f64,
    j_0: f64,
    alpha: FractionalOrder,
    tau_sigma: f64,
    omega: f64,
) -> Result<Complex64> {
    check_omega("rabotnov_compliance", omega)?;
    if !(tau_sigma > 0.0) {
        return Err(domain("rabotnov_compliance", "requires tau_sigma > 0"));
    }
    let dj = j_inf - j_0;
    Ok(j_inf - dj / (1.0 + (iw(omega) * tau_sigma).powf(alpha.value())))
}

/// Retardation time from (τ_ε/τ_σ)^α = M₀/M∞.
pub fn retardation_time(m_inf: f64, m_0: f64, alpha: FractionalOrder, tau_eps: f64) -> f64 {
    tau_eps * (m_inf / m_0).powf(1.0 / alpha.value())
}

/// M(iω) = M₀ + (M∞ − M₀)(1 + iωτ_ε)^(−α), as printed: M(0) = M∞ and
/// M(∞) = M₀.
pub fn chgf_modulus(
    m_0: f64,
    m_inf: f64,
    alpha: FractionalOrder,
    tau_eps: f64,
    omega: f64,
) -> Result<Complex64> {
    check_omega("chgf_modulus", omega)?;
    if !(tau_eps > 0.0) {
        return Err(domain("chgf_modulus", "requires tau_eps > 0"));
    }
    Ok(m_0 + (m_inf - m_0) * (1.0 + iw(omega) * tau_eps).powf(-alpha.value()))
}

/// m̃(jω) = [1 + (jωτ₀)^α]^(−β).
pub fn hn_normalized(p: &HNParams, omega: f64) -> Result<Complex64> {
    check_omega("hn_normalized", omega)?;
    let z = (iw(omega) * p.tau0).powf(p.alpha.value());
    Ok((1.0 + z).powf(-p.beta.value()))
}

/// M̃(jω) = M∞ − ΔM·m̃(jω).
pub fn hn_modulus(p: &HNParams, omega: f64) -> Result<Complex64> {
    Ok(p.m_inf - p.delta_m() * hn_normalized(p, omega)?)
}

/// Symmetric Rabotnov spectrum per unit ln τ:
/// (1/2π) sin απ / (ch[α ln(τ/τ_ref)] + cos απ).
pub fn rabotnov_spectrum_h(alpha: FractionalOrder, tau_ref: f64, tau: f64) -> Result<f64> {
    if alpha.is_one() {
        return Err(Error::Degenerate(
            "alpha = 1 concentrates the spectrum in a single relaxation time".into(),
        ));
    }
    if !(tau_ref > 0.0 && tau > 0.0) {
        return Err(domain("rabotnov_spectrum", "requires tau, tau_ref > 0"));
    }
    Ok(rabotnov_spectrum_log(alpha.value(), (tau / tau_ref).ln()))
}

/// Retardation spectrum L(τ): the same shape centred on τ_σ.
pub fn rabotnov_spectrum_l(alpha: FractionalOrder, tau_sigma: f64, tau: f64) -> Result<f64> {
    rabotnov_spectrum_h(alpha, tau_sigma, tau)
}

/// Rabotnov spectrum as a function of u = ln(τ/τ_ref).
pub fn rabotnov_spectrum_log(alpha: f64, u: f64) -> f64 {
    let b = alpha * PI;
    b.sin() / (2.0 * PI * ((alpha * u).cosh() + b.cos()))
}

/// ∫ H d ln τ over the whole line, by quadrature.
pub fn rabotnov_spectrum_mass(alpha: FractionalOrder, quad: &QuadratureSpec) -> Result<f64> {
    if alpha.is_one() {
        return Err(Error::Degenerate(
            "alpha = 1 has no continuous spectrum".into(),
        ));
    }
    let a = alpha.value();
    let right = integrate_to_infinity(|u| rabotnov_spectrum_log(a, u), 0.0, quad)?;
    let left = integrate_to_infinity(|u| rabotnov_spectrum_log(a, -u), 0.0, quad)?;
    Ok(left.value + right.value)
}

/// Offset of the evaluation point above the negative real axis, relative to 1/τ.
const CUT_ANGLE: f64 = 1e-13;

/// Relaxation spectrum of a kernel from its transform symbol:
/// H(τ) = −(1/π) Im R̃(−1/τ + i0).
pub fn numeric_spectrum(model: &KernelModel, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain("numeric_spectrum", "requires tau > 0"));
    }
    let p = Complex64::from_polar(1.0 / tau, PI - CUT_ANGLE);
    Ok(-model.transform(p).im / PI)
}

/// Spectrum of a kernel, in closed form where one exists and from the
/// transform symbol otherwise. The closed forms avoid the loss of the
/// branch-cut evaluation near a support edge.
pub fn spectrum_density(model: &KernelModel, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain("spectrum_density", "requires tau > 0"));
    }
    let a = model.alpha.value();
    let edge = |order: f64, x: f64| (order * PI).sin() / PI * x.powf(order);
    match model.family {
        Family::Rabotnov if a < 1.0 => rabotnov_spectrum_h(model.alpha, model.tau, tau),
        Family::RzhanitsynDavidson => Ok(if tau < model.tau {
            edge(a, tau / (model.tau - tau))
        } else {
            0.0
        }),
        Family::Chgf => Ok(if tau > model.tau {
            edge(a, model.tau / (tau - model.tau))
        } else {
            0.0
        }),
        Family::HavriliakNegami if a == 1.0 => {
            let b = model.beta.value();
            Ok(if tau < model.tau {
                edge(b, tau / (model.tau - tau))
            } else {
                0.0
            })
        }
        _ => numeric_spectrum(model, tau),
    }
}

/// Density at τ = τ_model·e^(dir·s). Near a support edge the closed forms
/// are written in s so that τ₀ − τ does not cancel.
fn density_offset(model: &KernelModel, dir: f64, s: f64) -> Result<f64> {
    let edge = |order: f64| (order * PI).sin() / PI * s.exp_m1().powf(-order);
    let a = model.alpha.value();
    match model.family {
        Family::RzhanitsynDavidson if dir < 0.0 => Ok(edge(a)),
        Family::Chgf if dir > 0.0 => Ok(edge(a)),
        Family::HavriliakNegami if a == 1.0 && dir < 0.0 => Ok(edge(model.beta.value())),
        _ => spectrum_density(model, model.tau * (dir * s).exp()),
    }
}

/// Location summary of a spectrum over u = ln τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumStats {
    pub mass: f64,
    pub mean: f64,
    pub median: f64,
}

impl SpectrumStats {
    /// Sign of mean − median: negative for a long tail toward short times.
    pub fn skew_sign(&self) -> f64 {
        (self.mean - self.median).signum()
    }
}

/// Where the spectrum lives relative to the centre c = ln τ of the model.
#[derive(Debug, Clone, Copy)]
struct Support {
    left: bool,
    right: bool,
    /// Exponent of the integrable singularity at the centre, 0 if none.
    edge_exponent: f64,
}

fn support_of(model: &KernelModel) -> Result<Support> {
    let a = model.alpha.value();
    match model.family {
        Family::Abel => Err(Error::Degenerate(
            "the Abel spectrum is not normalisable".into(),
        )),
        Family::RzhanitsynDavidson => Ok(Support {
            left: true,
            right: false,
            edge_exponent: -a,
        }),
        Family::Chgf => Ok(Support {
            left: false,
            right: true,
            edge_exponent: -a,
        }),
        Family::HavriliakNegami if a == 1.0 => {
            if model.beta.is_one() {
                return Err(Error::Degenerate(
                    "the Debye spectrum is a single line".into(),
                ));
            }
            Ok(Support {
                left: true,
                right: false,
                edge_exponent: -model.beta.value(),
            })
        }
        Family::Rabotnov | Family::HavriliakNegami => {
            if a == 1.0 {
                return Err(Error::Degenerate(
                    "the Debye spectrum is a single line".into(),
                ));
            }
            Ok(Support {
                left: true,
                right: true,
                edge_exponent: 0.0,
            })
        }
    }
}

/// ∫₀^∞ g(s) ds with an s^γ singularity allowed at 0.
fn half_line<G: Fn(f64) -> f64>(g: G, gamma: f64, quad: &QuadratureSpec) -> Result<f64> {
    let near = integrate(&g, 0.0, 1.0, &quad.with_singularity(gamma))?;
    let far = integrate_to_infinity(&g, 1.0, quad)?;
    Ok(near.value + far.value)
}

/// Mass, mean and median of the spectrum in ln τ.
pub fn log_spectrum_stats(model: &KernelModel, quad: &QuadratureSpec) -> Result<SpectrumStats> {
    let sup = support_of(model)?;
    // the general HN density comes off the branch cut and carries ~1e-13 noise
    let quad = &QuadratureSpec {
        rel_tol: quad.rel_tol.max(1e-10),
        abs_tol: quad.abs_tol.max(1e-13),
        ..*quad
    };
    let c = model.tau.ln();
    let h = |dir: f64, s: f64| density_offset(model, dir, s).unwrap_or(f64::NAN);
    let g = sup.edge_exponent;
    let side = |dir: f64, moment: bool| -> Result<f64> {
        half_line(|s| if moment { s * h(dir, s) } else { h(dir, s) }, g, quad)
    };
    let (mut mass, mut first) = (0.0, 0.0);
    let mut left_mass = 0.0;
    for (present, dir) in [(sup.left, -1.0), (sup.right, 1.0)] {
        if present {
            let m = side(dir, false)?;
            if dir < 0.0 {
                left_mass = m;
            }
            mass += m;
            first += c * m + dir * side(dir, true)?;
        }
    }
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::Degenerate(format!(
            "spectrum mass {mass} is not positive"
        )));
    }
    let mean = first / mass;
    // cumulative mass between the centre and c ± s
    let partial = |dir: f64, s: f64| -> Result<f64> {
        Ok(integrate(|x| h(dir, x), 0.0, s, &quad.with_singularity(g))?.value)
    };
    let half = 0.5 * mass;
    let (dir, target) = if left_mass >= half {
        // median left of the centre: mass in [m, c] equals left_mass − half
        (-1.0, left_mass - half)
    } else {
        (1.0, half - left_mass)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while partial(dir, hi)? < target {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::Degenerate("spectrum median not bracketed".into()));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if partial(dir, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * (1.0 + hi) {
            break;
        }
    }
    Ok(SpectrumStats {
        mass,
        mean,
        median: c + dir * 0.5 * (lo + hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fo(x: f64) -> FractionalOrder {
        FractionalOrder::new(x).unwrap()
    }

    #[test]
    fn compliance_limits_and_operator_forms() {
        let rd =
            ComplianceImageForm::new(ComplianceForm::RzhanitsynDavidson, fo(0.4), 1.0, 1.0, 3.0)
                .unwrap();
        assert_relative_eq!(
            compliance_image(&rd, 1e12).unwrap().re,
            1.0,
            max_relative = 1e-4
        );
        assert_relative_eq!(
            compliance_image(&rd, 0.0).unwrap().re,
            3.0,
            max_relative = 1e-15
        );
        let ch = ComplianceImageForm::new(ComplianceForm::Chgf, fo(0.4), 1.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(
            compliance_image(&ch, 1e-12).unwrap().re,
            3.0,
            max_relative = 1e-4
        );
        let ab = ComplianceImageForm::new(ComplianceForm::Abel, fo(0.5), 1.0, 1.0, 2.0).unwrap();
        let direct = 1.0 + Complex64::new(0.0, 1.0).powf(-0.5);
        assert_relative_eq!(
            (compliance_image(&ab, 1.0).unwrap() - direct).norm(),
            0.0,
            epsilon = 1e-15
        );
        for f in [rd, ch, ab] {
            for w in [0.01, 0.3, 1.0, 7.0, 300.0] {
                let a = compliance_image(&f, w).unwrap();
                let b = compliance_image_kappa_form(&f, w).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm(), "{:?} at {w}", f.form);
            }
        }
        assert!(compliance_image(&ab, 0.0).is_err());
        assert!(ComplianceImageForm::new(ComplianceForm::Abel, fo(0.5), 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn rabotnov_modulus_limits() {
        let m = rabotnov_modulus(3.0, 2.0, FractionalOrder::ONE, 1.0, 0.0).unwrap();
        assert_eq!(m, Complex64::new(1.0, 0.0));
        let (mi, m0, a, te) = (3.0, 1.0, fo(0.61), 1.0);
        let ts = retardation_time(mi, m0, a, te);
        for w in [0.0, 0.1, 1.0, 10.0] {
            let m = rabotnov_modulus(mi, mi - m0, a, te, w).unwrap();
            let j = rabotnov_compliance(1.0 / mi, 1.0 / m0, a, ts, w).unwrap();
            assert!((m * j - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn chgf_modulus_limits() {
        assert_eq!(
            chgf_modulus(1.0, 3.0, fo(0.5), 1.0, 0.0).unwrap(),
            Complex64::new(3.0, 0.0)
        );
        assert_relative_eq!(
            chgf_modulus(1.0, 3.0, fo(0.5), 1.0, 1e16).unwrap().re,
            1.0,
            max_relative = 1e-7
        );
        let v = chgf_modulus(1.0, 3.0, FractionalOrder::ONE, 1.0, 1.0).unwrap();
        let w = 1.0 + 2.0 / Complex64::new(1.0, 1.0);
        assert_relative_eq!((v - w).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hn_limits_and_reductions() {
        let d = HNParams::new(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let m = hn_normalized(&d, 1.0).unwrap();
        assert_relative_eq!(m.re, 0.5, max_relative = 1e-15);
        assert_relative_eq!(m.im, -0.5, max_relative = 1e-15);
        let cc = HNParams::new(0.5, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(hn_normalized(&cc, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        for w in [0.01, 1.0, 100.0] {
            let a = hn_modulus(&cc, w).unwrap();
            let b = rabotnov_modulus(2.0, 1.0, fo(0.5), 1.0, w).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn rabotnov_spectrum_values() {
        assert_relative_eq!(
            rabotnov_spectrum_h(fo(0.5), 1.0, 1.0).unwrap(),
            1.0 / (2.0 * PI),
            max_relative = 1e-15
        );
        let a = rabotnov_spectrum_h(fo(0.5), 1.0, 3.7).unwrap();
        let b = rabotnov_spectrum_h(fo(0.5), 1.0, 1.0 / 3.7).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-15);
        assert!(matches!(
            rabotnov_spectrum_h(FractionalOrder::ONE, 1.0, 1.0),
            Err(Error::Degenerate(_))
        ));
        for al in [0.25, 0.5, 0.9] {
            let m = rabotnov_spectrum_mass(fo(al), &QuadratureSpec::default()).unwrap();
            assert!((m - 1.0).abs() < 1e-10, "alpha {al}: {m}");
        }
    }

    #[test]
    fn numeric_spectrum_matches_closed_forms() {
        let q = KernelModel::new(Family::Rabotnov, fo(0.5), FractionalOrder::ONE, 1.0).unwrap();
        for tau in [0.1, 1.0, 5.0] {
            let a = numeric_spectrum(&q, tau).unwrap();
            let b = rabotnov_spectrum_h(fo(0.5), 1.0, tau).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
        let rd = KernelModel::new(
            Family::RzhanitsynDavidson,
            fo(0.4),
            FractionalOrder::ONE,
            2.0,
        )
        .unwrap();
        let tau = 0.5;
        let closed = (0.4 * PI).sin() / PI * (tau / (2.0f64 - tau)).powf(0.4);
        assert_relative_eq!(
            numeric_spectrum(&rd, tau).unwrap(),
            closed,
            max_relative = 1e-9
        );
        assert!(numeric_spectrum(&rd, 3.0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn skewness_signs_oppose() {
        let quad = QuadratureSpec::default();
        let rd = KernelModel::new(
            Family::RzhanitsynDavidson,
            fo(0.5),
            FractionalOrder::ONE,
            1.0,
        )
        .unwrap();
        let ch = KernelModel::new(Family::Chgf, fo(0.5), FractionalOrder::ONE, 1.0).unwrap();
        let s_rd = log_spectrum_stats(&rd, &quad).unwrap();
        let s_ch = log_spectrum_stats(&ch, &quad).unwrap();
        assert_relative_eq!(s_rd.mass, 1.0, max_relative = 1e-8);
        assert_relative_eq!(s_ch.mass, 1.0, max_relative = 1e-8);
        assert_eq!(s_rd.skew_sign(), -1.0);
        assert_eq!(s_ch.skew_sign(), 1.0);
    }

    #[test]
    fn closed_densities_match_the_cut() {
        let cd =
            KernelModel::new(Family::HavriliakNegami, FractionalOrder::ONE, fo(0.6), 1.0).unwrap();
        let ch = KernelModel::new(Family::Chgf, fo(0.3), FractionalOrder::ONE, 2.0).unwrap();
        for (m, tau) in [(cd, 0.4), (cd, 0.05), (ch, 3.0), (ch, 40.0)] {
            let a = spectrum_density(&m, tau).unwrap();
            let b = numeric_spectrum(&m, tau).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
        let hn = KernelModel::new(Family::HavriliakNegami, fo(0.7), fo(0.5), 1.0).unwrap();
        let s = log_spectrum_stats(&hn, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(s.mass, 1.0, max_relative = 1e-8);
    }
}
