//! Scalar special functions: Γ, Kummer ₁F₁, the Gauss ₂F₁(1,1;c;x) family,
//! two-parameter Mittag-Leffler series and the Rabotnov fractional-exponential
//! kernel.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature_oracle::{self, QuadratureSpec};
use crate::sum::SeriesControl;
use crate::Evaluation;

/// Fractional order α (also used for the HN shape parameter β).
///
/// The type enforces `0 < value <= 1`; individual operations may demand the
/// strict upper bound.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "fractional order must lie in (0, 1], got {value}"
            )))
        }
    }

    pub const ONE: Self = Self(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    /// Reject α = 1 for operations defined only on the open interval.
    pub fn require_open(self, function: &'static str) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(domain(function, "requires 0 < alpha < 1"))
        }
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(v: FractionalOrder) -> f64 {
        v.0
    }
}

/// Crossover θ* = t/τ above which the fractional-exponential series hands over
/// to the integral representation.
pub const EH_SERIES_CROSSOVER: f64 = 10.0;

/// Below this argument a negative-x ₁F₁ keeps the direct series unless the
/// Kummer-transformed series has no sign changes.
pub const KUMMER_TRANSFORM_THRESHOLD: f64 = -5.0;

const LANCZOS_R: f64 = 10.900511;
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (k, d)| s + d / (x + k as f64 - 1.0))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub(crate) fn gamma_raw(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x > 0.0 && x == x.floor() && x <= 171.0 {
        return factorial(x as u32 - 1);
    }
    if x > 171.62 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma_raw(1.0 - x));
    }
    if x >= 2.0 {
        // the power term loses ~x ulp; recur down to [1, 2) instead
        let n = x.floor() as u32 - 1;
        let f = x - n as f64;
        return (0..n).fold(lanczos_gamma(f), |acc, k| acc * (f + k as f64));
    }
    lanczos_gamma(x)
}

fn lanczos_gamma(x: f64) -> f64 {
    lanczos_sum(x) * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
}

/// Γ(x) by a Lanczos-type rational approximation, with reflection below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            at: x,
        });
    }
    Ok(gamma_raw(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("ln_gamma", format!("requires x > 0, got {x}")));
    }
    Ok(ln_gamma_raw(x))
}

pub(crate) fn ln_gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_raw(x).ln();
    }
    lanczos_sum(x).ln() + TWO_SQRT_E_OVER_PI.ln() + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / E).ln()
}

/// 1/Γ(x), entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 171.0 {
        return (-ln_gamma_raw(x)).exp();
    }
    1.0 / gamma_raw(x)
}

/// Raw Kummer series Σ (a)ₙ/(c)ₙ · xⁿ/n! with no transformation.
pub fn kummer_1f1_direct(a: f64, c: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "kummer_1f1",
            at: c,
        });
    }
    ctl.validate()?;
    let mut term = 1.0;
    ctl.sum("kummer_1f1", |n| {
        if n > 0 {
            let k = (n - 1) as f64;
            term *= (a + k) / (c + k) * x / (k + 1.0);
            if term == 0.0 && is_nonpositive_integer(a) && (n as f64) > -a {
                return None;
            }
        }
        Some(term)
    })
}

/// Large-|x| expansion of ₁F₁(a, c, -y), y → +∞, dropping the e^(-y) branch.
fn kummer_1f1_negative_asymptotic(a: f64, c: f64, y: f64) -> f64 {
    let prefactor = gamma_raw(c) * rgamma(c - a) * y.powf(-a);
    if prefactor == 0.0 {
        return 0.0;
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let kf = k as f64;
        term *= (a + kf) * (a - c + 1.0 + kf) / ((kf + 1.0) * y);
        if term.abs() >= prev || term == 0.0 {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

/// Confluent hypergeometric function ₁F₁(a; c; x).
///
/// For x < 0 the Kummer transformation ₁F₁(a,c,x) = eˣ ₁F₁(c−a,c,−x) is
/// applied whenever x < −5, and also for any x < 0 when c − a ≥ 0 (the
/// transformed series then has no sign changes). Beyond −x = 500 the
/// algebraic asymptotic expansion is used.
pub fn kummer_1f1(a: f64, c: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "kummer_1f1",
            at: c,
        });
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        if x < -500.0 && !is_nonpositive_integer(a) {
            return Ok(kummer_1f1_negative_asymptotic(a, c, -x));
        }
        if x < KUMMER_TRANSFORM_THRESHOLD || c - a >= 0.0 {
            let v = kummer_1f1_direct(c - a, c, -x, ctl)?;
            return Ok(x.exp() * v);
        }
    }
    let v = kummer_1f1_direct(a, c, x, ctl)?;
    if !v.is_finite() {
        return Err(domain("kummer_1f1", format!("overflow at x = {x}")));
    }
    Ok(v)
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0;
    ctl.sum("gauss_2f1", |n| {
        if n > 0 {
            let k = (n - 1) as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
            if term == 0.0 {
                return None;
            }
        }
        Some(term)
    })
}

/// Below this x, ₂F₁(1,1;c;x) with c > 1 switches from the Pfaff series
/// (ratio x/(x−1) > 0.9) to the Euler integral.
pub const GAUSS_SERIES_FLOOR: f64 = -9.0;

/// Default control for ₂F₁(1,1;c;x).
pub fn gauss_2f1_control() -> SeriesControl {
    SeriesControl {
        max_terms: 20_000,
        rel_tol: 1e-15,
        abs_tol: 0.0,
    }
}

/// ₂F₁(1, 1; c; x) for c > 0 and x < 1.
///
/// Uses the hypergeometric series for −½ ≤ x < 1 and the Pfaff
/// transformation ₂F₁(1,1;c;x) = (1−x)⁻¹ ₂F₁(c−1,1;c;x/(x−1)) below −½.
/// For c > 1 and x < [`GAUSS_SERIES_FLOOR`] the Euler integral
/// (c−1) ∫₀¹ (1−t)^(c−2) / (1 − xt) dt is used instead.
pub fn gauss_2f1_11(c: f64, x: f64) -> Result<f64> {
    gauss_2f1_11_with(c, x, &gauss_2f1_control())
}

pub fn gauss_2f1_11_with(c: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(c > 0.0) {
        return Err(domain("gauss_2f1_11", format!("requires c > 0, got {c}")));
    }
    if !(x < 1.0) {
        return Err(domain("gauss_2f1_11", format!("requires x < 1, got {x}")));
    }
    ctl.validate()?;
    if c == 1.0 {
        return Ok(1.0 / (1.0 - x));
    }
    if x >= -0.5 {
        gauss_series(1.0, 1.0, c, x, ctl)
    } else if x >= GAUSS_SERIES_FLOOR || c < 1.0 {
        let z = x / (x - 1.0);
        Ok(gauss_series(c - 1.0, 1.0, c, z, ctl)? / (1.0 - x))
    } else {
        gauss_euler_integral(c, x)
    }
}

fn gauss_euler_integral(c: f64, x: f64) -> Result<f64> {
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 5e-14,
        max_subdivisions: 400,
        endpoint_singularity_exponent: 0.0,
    };
    let f = |t: f64| (1.0 - t).powf(c - 2.0) / (1.0 - x * t);
    let w = 1.0 / -x;
    let near =
        quadrature_oracle::integrate_with_breaks(f, 0.0, 0.5, &[w, 10.0 * w, 100.0 * w], &spec)?;
    // s = 1 − t carries the (c−2) power to the lower endpoint
    let g = |s: f64| s.powf(c - 2.0) / (1.0 - x * (1.0 - s));
    let far =
        quadrature_oracle::integrate(g, 0.0, 0.5, &spec.with_singularity((c - 2.0).min(0.0)))?;
    Ok((c - 1.0) * (near.value + far.value))
}

/// ln(1 + z) without cancellation for small |z|.
pub(crate) fn cln1p(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    Complex64::new(0.5 * (x * (2.0 + x) + y * y).ln_1p(), y.atan2(1.0 + x))
}

/// e^z − 1 without cancellation for small |z|.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let h = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * h * h, x.exp() * y.sin())
}


/// Two-parameter Mittag-Leffler series E_{a,b}(z) = Σ zⁿ / Γ(a n + b).
///
/// Plain power series; accurate while the largest term stays within a few
/// decades of the result.
pub fn mittag_leffler(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("mittag_leffler", "requires a > 0"));
    }
    ctl.validate()?;
    if z == 0.0 {
        return Ok(rgamma(b));
    }
    let ln_abs = z.abs().ln();
    ctl.sum("mittag_leffler", |n| {
        let arg = a * n as f64 + b;
        let sign = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        if arg <= 170.0 {
            Some(z.powi(n as i32) * rgamma(arg))
        } else {
            Some(sign * (n as f64 * ln_abs - ln_gamma_raw(arg)).exp())
        }
    })
}

/// Fractional-exponential series t^(α−1) Σ (−1)ⁿ (t/τ)^(αn) / Γ[α(n+1)].
pub fn eh_alpha_series(
    alpha: FractionalOrder,
    tau: f64,
    t: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_time("eh_alpha", tau, t)?;
    let a = alpha.value();
    if t == 0.0 {
        return Ok(if a < 1.0 { f64::INFINITY } else { 1.0 });
    }
    let theta = t / tau;
    Ok(t.powf(a - 1.0) * mittag_leffler(a, a, -theta.powf(a), ctl)?)
}

/// (eh)_α(λ, t) = t^(α−1) E_{α,α}(−λ t^α) for an arbitrary real λ.
///
/// λ > 0 is [`eh_alpha`] with τ = λ^(−1/α); λ = 0 gives the Abel kernel
/// t^(α−1)/Γ(α); λ < 0 sums the (then positive) series directly.
pub fn eh_lambda(alpha: FractionalOrder, lambda: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain("eh_lambda", format!("requires t >= 0, got {t}")));
    }
    let a = alpha.value();
    if lambda > 0.0 {
        return eh_alpha(alpha, lambda.powf(-1.0 / a), t, ctl);
    }
    if t == 0.0 {
        return Ok(if a < 1.0 { f64::INFINITY } else { 1.0 });
    }
    if lambda == 0.0 {
        return Ok(t.powf(a - 1.0) * rgamma(a));
    }
    Ok(t.powf(a - 1.0) * mittag_leffler(a, a, -lambda * t.powf(a), ctl)?)
}

fn check_time(function: &'static str, tau: f64, t: f64) -> Result<()> {
    if !(tau > 0.0) {
        return Err(domain(function, format!("requires tau > 0, got {tau}")));
    }
    if !(t >= 0.0) {
        return Err(domain(function, format!("requires t >= 0, got {t}")));
    }
    Ok(())
}

/// Rabotnov fractional-exponential kernel (eh)_α with λ = τ^(−α).
///
/// Series for t/τ ≤ [`EH_SERIES_CROSSOVER`], integral representation beyond;
/// at α = 1 the kernel is exactly e^(−t/τ). Diverges like t^(α−1) at t = 0,
/// where `+∞` is returned for α < 1.
pub fn eh_alpha(alpha: FractionalOrder, tau: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(eh_alpha_evaluated(alpha, tau, t, ctl, &QuadratureSpec::default())?.value)
}

/// [`eh_alpha`] with the route taken reported alongside the value.
pub fn eh_alpha_evaluated(
    alpha: FractionalOrder,
    tau: f64,
    t: f64,
    ctl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    check_time("eh_alpha", tau, t)?;
    if alpha.is_one() {
        return Ok(Evaluation::series((-t / tau).exp()));
    }
    if t / tau <= EH_SERIES_CROSSOVER {
        return Ok(Evaluation::series(eh_alpha_series(alpha, tau, t, ctl)?));
    }
    let v = quadrature_oracle::eh_integral(alpha.value(), tau, t, quad)?;
    Ok(Evaluation::quadrature(v))
}
