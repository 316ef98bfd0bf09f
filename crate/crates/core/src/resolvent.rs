//! Operator algebra in the transform domain.
//!
//! A basic operator T is represented by its symbol LT(p); the resolvent
//! R*(λ) = (λ + T)^(−1) by 1/(λ + LT(p)). All complex powers use the
//! principal branch and frequencies are restricted to ω ≥ 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{cexpm1, cln1p, FractionalOrder};

/// Tolerance of the construction-time parameter relations.
pub const RELATION_TOL: f64 = 1e-12;

/// Below this magnitude |shift + LT| is treated as singular.
pub const SINGULAR_SYMBOL: f64 = 1e-14;

/// Basic operator: T₁ = I^(−α) (Abel), T₂ damped by e^(−t/τ), T₃ the
/// rational variant with symbol [τ^(−α) − (τ + 1/p)^(−α)]^(−1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    EH,
    Q,
    P,
}

/// Parameters of a resolvent-based standard hereditary solid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventSpec {
    pub variant: Variant,
    pub alpha: FractionalOrder,
    pub tau: f64,
    pub lambda: f64,
    pub mu: f64,
    pub kappa: f64,
    pub m: f64,
    pub n_eps: f64,
    pub n_sigma: f64,
}

impl ResolventSpec {
    /// EH variant from the relaxation and retardation times, τ_ε ≤ τ_σ.
    pub fn eh(alpha: FractionalOrder, tau_eps: f64, tau_sigma: f64) -> Result<Self> {
        if !(tau_eps > 0.0 && tau_sigma >= tau_eps && tau_sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "EH variant needs 0 < tau_eps <= tau_sigma, got {tau_eps}, {tau_sigma}"
            )));
        }
        let a = alpha.value();
        let lambda = tau_eps.powf(-a);
        let m = (tau_eps / tau_sigma).powf(a);
        let spec = Self {
            variant: Variant::EH,
            alpha,
            tau: tau_eps,
            lambda,
            mu: lambda * m,
            kappa: lambda * (1.0 - m),
            m,
            n_eps: 0.0,
            n_sigma: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Q variant (scale τ^(−α)) or P variant (scale τ^α) from n_ε ≥ n_σ ≥ 0.
    pub fn from_n(
        variant: Variant,
        alpha: FractionalOrder,
        tau: f64,
        n_eps: f64,
        n_sigma: f64,
    ) -> Result<Self> {
        if variant == Variant::EH {
            return Err(Error::InvalidParameter(
                "the EH variant is parameterised by tau_eps and tau_sigma".into(),
            ));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if !(n_sigma >= 0.0 && n_eps >= n_sigma && n_eps.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need n_eps >= n_sigma >= 0, got {n_eps}, {n_sigma}"
            )));
        }
        let scale = variant_scale(variant, alpha.value(), tau);
        let m = (1.0 + n_sigma) / (1.0 + n_eps);
        let spec = Self {
            variant,
            alpha,
            tau,
            lambda: n_eps * scale,
            mu: n_sigma * scale,
            kappa: (1.0 - m) * (n_eps + 1.0) * scale,
            m,
            n_eps,
            n_sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn q(alpha: FractionalOrder, tau: f64, n_eps: f64, n_sigma: f64) -> Result<Self> {
        Self::from_n(Variant::Q, alpha, tau, n_eps, n_sigma)
    }

    pub fn p(alpha: FractionalOrder, tau: f64, n_eps: f64, n_sigma: f64) -> Result<Self> {
        Self::from_n(Variant::P, alpha, tau, n_eps, n_sigma)
    }

    /// Largest relative defect among the parameter relations of the variant.
    pub fn relation_defect(&self) -> f64 {
        let rel = |a: f64, b: f64| {
            let s = a.abs().max(b.abs());
            if s == 0.0 {
                0.0
            } else {
                (a - b).abs() / s
            }
        };
        let a = self.alpha.value();
        let mut d = [
            rel(self.lambda, self.mu + self.kappa),
            rel(self.kappa, self.lambda * (1.0 - self.m)),
            0.0,
            0.0,
            0.0,
            0.0,
        ];
        match self.variant {
            Variant::EH => {
                d[2] = rel(self.lambda, self.tau.powf(-a));
                if self.m > 0.0 {
                    d[3] = rel(self.kappa, self.mu * (1.0 / self.m - 1.0));
                }
            }
            Variant::Q | Variant::P => {
                let scale = variant_scale(self.variant, a, self.tau);
                d[1] = rel(self.kappa, (1.0 - self.m) * (self.n_eps + 1.0) * scale);
                d[2] = rel(self.lambda, self.n_eps * scale);
                d[3] = rel(self.mu, self.n_sigma * scale);
                d[4] = rel(self.m, (1.0 + self.n_sigma) / (1.0 + self.n_eps));
                d[5] = rel(
                    self.kappa,
                    (1.0 / self.m - 1.0) * (self.n_sigma + 1.0) * scale,
                );
            }
        }
        d.into_iter().fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "m must lie in (0, 1], got {}",
                self.m
            )));
        }
        let defect = self.relation_defect();
        if !(defect <= RELATION_TOL) {
            return Err(Error::InvalidParameter(format!(
                "resolvent parameters violate their relations (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// Symbol LT(p) of the basic operator at complex p.
    pub fn operator_symbol(&self, p: Complex64) -> Result<Complex64> {
        let a = self.alpha.value();
        match self.variant {
            Variant::EH => Ok(p.powf(a)),
            Variant::Q => Ok((1.0 / self.tau + p).powf(a)),
            Variant::P => {
                if p == Complex64::new(0.0, 0.0) {
                    return Err(domain(
                        "basic_operator_transform",
                        "the P operator needs p != 0",
                    ));
                }
                // 1 − (pτ/(1+pτ))^α = −expm1(−α ln(1 + 1/(pτ)))
                let one_minus_x = -cexpm1(-a * cln1p(1.0 / (p * self.tau)));
                Ok(self.tau.powf(a) / one_minus_x)
            }
        }
    }

    /// Resolvent symbol 1/(shift + LT(p)).
    pub fn resolvent_symbol(&self, shift: f64, p: Complex64) -> Result<Complex64> {
        let d = shift + self.operator_symbol(p)?;
        let magnitude = d.norm();
        if !(magnitude >= SINGULAR_SYMBOL) {
            return Err(Error::SingularSymbol { magnitude });
        }
        Ok(1.0 / d)
    }
}

fn variant_scale(variant: Variant, alpha: f64, tau: f64) -> f64 {
    match variant {
        Variant::EH | Variant::Q => tau.powf(-alpha),
        Variant::P => tau.powf(alpha),
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega >= 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(domain(
            "resolvent",
            format!("requires finite omega >= 0, got {omega}"),
        ))
    }
}

fn iw(omega: f64) -> Complex64 {
    Complex64::new(0.0, omega)
}

/// LT(iω) for the spec's variant.
pub fn basic_operator_transform(spec: &ResolventSpec, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    spec.operator_symbol(iw(omega))
}

/// 1/(shift + LT(iω)).
pub fn resolvent_transform(spec: &ResolventSpec, shift: f64, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    spec.resolvent_symbol(shift, iw(omega))
}

/// Complex modulus M = M∞[1 − κR*(λ)] and compliance J = J∞[1 + κR*(μ)],
/// J∞ = 1/M∞.
pub fn modulus_compliance_transform(
    spec: &ResolventSpec,
    m_inf: f64,
    omega: f64,
) -> Result<(Complex64, Complex64)> {
    if !(m_inf > 0.0 && m_inf.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "M_inf must be positive, got {m_inf}"
        )));
    }
    let r_l = resolvent_transform(spec, spec.lambda, omega)?;
    let r_m = resolvent_transform(spec, spec.mu, omega)?;
    let m = m_inf * (1.0 - spec.kappa * r_l);
    let j = (1.0 + spec.kappa * r_m) / m_inf;
    Ok((m, j))
}

/// max over ω of |R*(λ₁)R*(λ₂) − [R*(λ₁) − R*(λ₂)]/(λ₂ − λ₁)|.
pub fn hilbert_identity_residual(
    spec: &ResolventSpec,
    lambda1: f64,
    lambda2: f64,
    omegas: &[f64],
) -> Result<f64> {
    hilbert_residual(spec, lambda1, lambda2, omegas, 1.0)
}

/// `sign = −1` evaluates a deliberately wrong identity; used to check that
/// the validation suite can fail.
pub(crate) fn hilbert_residual(
    spec: &ResolventSpec,
    lambda1: f64,
    lambda2: f64,
    omegas: &[f64],
    sign: f64,
) -> Result<f64> {
    if lambda1 == lambda2 {
        return Err(Error::Degenerate(
            "splitting identity needs lambda1 != lambda2".into(),
        ));
    }
    let mut worst = 0.0f64;
    for &w in omegas {
        let r1 = resolvent_transform(spec, lambda1, w)?;
        let r2 = resolvent_transform(spec, lambda2, w)?;
        let lhs = r1 * r2;
        let rhs = sign * (r1 - r2) / (lambda2 - lambda1);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// |R*(λ)² + ∂R*/∂λ| with a central difference of step h
/// (default 1e-6·|λ| + 1e-9).
pub fn degree_lowering_residual(
    spec: &ResolventSpec,
    shift: f64,
    omega: f64,
    h: Option<f64>,
) -> Result<f64> {
    let h = h.unwrap_or(1e-6 * shift.abs() + 1e-9);
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(
            "difference step must be positive".into(),
        ));
    }
    let r = resolvent_transform(spec, shift, omega)?;
    let up = resolvent_transform(spec, shift + h, omega)?;
    let down = resolvent_transform(spec, shift - h, omega)?;
    Ok((r * r + (up - down) / (2.0 * h)).norm())
}

/// Volterra resolvent ratio K̃ = R̃/(1 − R̃).
pub fn volterra_resolvent_transform(r: Complex64) -> Result<Complex64> {
    let d = 1.0 - r;
    if d.norm() < SINGULAR_SYMBOL {
        return Err(Error::Pole {
            function: "volterra_resolvent_transform",
            at: r.re,
        });
    }
    Ok(r / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fo(x: f64) -> FractionalOrder {
        FractionalOrder::new(x).unwrap()
    }

    #[test]
    fn construction_relations() {
        let s = ResolventSpec::eh(fo(0.5), 1.0, 4.0).unwrap();
        assert_relative_eq!(s.m, 0.5, max_relative = 1e-15);
        assert_relative_eq!(s.kappa, s.mu * (1.0 / s.m - 1.0), max_relative = 1e-14);
        assert!(ResolventSpec::eh(fo(0.5), 2.0, 1.0).is_err());
        let q = ResolventSpec::q(fo(0.5), 1.0, 3.0, 1.0).unwrap();
        assert_relative_eq!(q.m, 0.5);
        assert!(ResolventSpec::p(fo(0.5), 1.0, 1.0, 3.0).is_err());
        let mut bad = q;
        bad.kappa *= 1.0 + 1e-9;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn operator_symbols() {
        let eh = ResolventSpec::eh(fo(0.5), 1.0, 2.0).unwrap();
        let v = basic_operator_transform(&eh, 1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(v.re, h, max_relative = 1e-15);
        assert_relative_eq!(v.im, h, max_relative = 1e-15);
        let q = ResolventSpec::q(FractionalOrder::ONE, 1.0, 1.0, 0.5).unwrap();
        let v = basic_operator_transform(&q, 1.0).unwrap();
        assert_relative_eq!(v.re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(v.im, 1.0, max_relative = 1e-15);
        let p = ResolventSpec::p(fo(0.5), 1.0, 1.0, 0.5).unwrap();
        let direct = 1.0 / (1.0 - (1.0 + 1.0 / Complex64::new(0.0, 2.0)).powf(-0.5));
        let v = basic_operator_transform(&p, 2.0).unwrap();
        assert_relative_eq!(v.re, direct.re, max_relative = 1e-13);
        assert_relative_eq!(v.im, direct.im, max_relative = 1e-13);
        assert!(basic_operator_transform(&p, 0.0).is_err());
    }

    #[test]
    fn resolvent_reductions() {
        let s = ResolventSpec::eh(FractionalOrder::ONE, 1.0, 2.0).unwrap();
        let r = resolvent_transform(&s, s.lambda, 3.0).unwrap();
        let sls = 1.0 / Complex64::new(s.lambda, 3.0);
        assert_relative_eq!((r - sls).norm(), 0.0, epsilon = 1e-15);
        let s = ResolventSpec::eh(fo(0.5), 1.0, 2.0).unwrap();
        let r = resolvent_transform(&s, 0.0, 1.0).unwrap();
        let abel = Complex64::new(0.0, 1.0).powf(-0.5);
        assert_relative_eq!((r - abel).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            resolvent_transform(&s, 0.0, 0.0),
            Err(Error::SingularSymbol { .. })
        ));
    }

    #[test]
    fn modulus_limits_and_inverse_pairing() {
        let s = ResolventSpec::eh(fo(0.6), 1.0, 3.0).unwrap();
        let (m0, _) = modulus_compliance_transform(&s, 2.0, 1e-12).unwrap();
        assert_relative_eq!(m0.re, 2.0 * s.m, max_relative = 1e-6);
        let (minf, _) = modulus_compliance_transform(&s, 2.0, 1e14).unwrap();
        assert_relative_eq!(minf.re, 2.0, max_relative = 1e-6);
        let q = ResolventSpec::q(fo(0.5), 1.0, 3.0, 1.0).unwrap();
        let (m, j) = modulus_compliance_transform(&q, 1.7, 1.0).unwrap();
        assert_relative_eq!((m * j - 1.0).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn splitting_and_degree_lowering() {
        let grid: Vec<f64> = (0..10).map(|k| 0.1 * 2f64.powi(k)).collect();
        let s = ResolventSpec::eh(FractionalOrder::ONE, 1.0, 2.0).unwrap();
        assert!(hilbert_identity_residual(&s, 1.0, 2.0, &grid).unwrap() <= 1e-14);
        assert!(hilbert_residual(&s, 1.0, 2.0, &grid, -1.0).unwrap() > 1e-3);
        assert!(matches!(
            hilbert_identity_residual(&s, 1.0, 1.0, &grid),
            Err(Error::Degenerate(_))
        ));
        assert!(degree_lowering_residual(&s, 1.0, 1.0, None).unwrap() <= 1e-10);
        let p = ResolventSpec::p(fo(0.3), 1.0, 1.0, 0.5).unwrap();
        assert!(degree_lowering_residual(&p, 0.4, 0.5, None).unwrap() <= 1e-6);
    }

    #[test]
    fn volterra_ratio() {
        assert_eq!(
            volterra_resolvent_transform(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // Debye: R̃ = 1/(1 + p) ⇒ K̃ = 1/p
        let p = Complex64::new(0.3, 1.1);
        let k = volterra_resolvent_transform(1.0 / (1.0 + p)).unwrap();
        assert_relative_eq!((k - 1.0 / p).norm(), 0.0, epsilon = 1e-15);
        assert!(volterra_resolvent_transform(Complex64::new(1.0, 0.0)).is_err());
    }
}
