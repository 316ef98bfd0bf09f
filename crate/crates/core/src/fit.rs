//! Havriliak-Negami fitting to complex-modulus data.
//!
//! Damped Gauss-Newton (Levenberg-Marquardt) on the stacked real and
//! imaginary residuals over x = (α, β, ln τ₀, M∞, M₀), with the analytic
//! Jacobian and box constraints enforced by projection. Parameters pinned
//! at a bound with the gradient pushing outward are frozen for the step.
//!
//! The starting point is deterministic:
//! * M₀, M∞ from Re M at the lowest and highest frequency;
//! * τ₀ = 1/ω_peak, with ω_peak the loss peak refined by a parabola in ln ω;
//! * α from the full width at half maximum of the loss peak, read as a
//!   Cole-Cole peak of width (2/α)·arcosh(2 + cos(απ/2)) in ln ω;
//! * β = 1.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::HNParams;
use crate::FrequencySample;

/// Minimum number of samples accepted by [`fit_hn`].
pub const MIN_SAMPLES: usize = 8;

/// Lower bound imposed on α and β during the search.
const SHAPE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence when the projected gradient is below
    /// `grad_tol · N · (max |data|)²`.
    pub grad_tol: f64,
    pub initial_damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            grad_tol: 1e-10,
            initial_damping: 1e-3,
        }
    }
}

/// Standard errors of the fitted parameters, from the Gauss-Newton
/// covariance σ²(JᵀJ)⁻¹ with σ² = 2·cost/(2N − 5).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StdErrors {
    pub alpha: f64,
    pub beta: f64,
    pub tau0: f64,
    pub m_inf: f64,
    pub m_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub params: HNParams,
    /// Euclidean norm of the complex residual vector.
    pub residual_norm: f64,
    pub std_errors: StdErrors,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

const NP: usize = 5;

#[derive(Debug, Clone, Copy)]
struct Bounds {
    lo: [f64; NP],
    hi: [f64; NP],
}

impl Bounds {
    fn for_point(x: &[f64; NP]) -> Self {
        let m_inf = x[3];
        Self {
            lo: [
                SHAPE_FLOOR,
                SHAPE_FLOOR,
                f64::NEG_INFINITY,
                f64::MIN_POSITIVE,
                f64::MIN_POSITIVE,
            ],
            hi: [1.0, 1.0, f64::INFINITY, f64::INFINITY, m_inf],
        }
    }

    fn project(x: &mut [f64; NP]) {
        x[0] = x[0].clamp(SHAPE_FLOOR, 1.0);
        x[1] = x[1].clamp(SHAPE_FLOOR, 1.0);
        x[3] = x[3].max(f64::MIN_POSITIVE);
        x[4] = x[4].clamp(f64::MIN_POSITIVE, x[3]);
    }
}

/// Model value and its derivatives with respect to x at one frequency.
fn model(x: &[f64; NP], omega: f64) -> (Complex64, [Complex64; NP]) {
    let (a, b, ln_tau, m_inf, m_0) = (x[0], x[1], x[2], x[3], x[4]);
    let dm = m_inf - m_0;
    let l = Complex64::new(omega.ln() + ln_tau, std::f64::consts::FRAC_PI_2);
    let z = (a * l).exp();
    let u = 1.0 + z;
    let ln_u = u.ln();
    let g = (-b * ln_u).exp();
    let common = dm * b * g * z / u;
    let value = m_inf - dm * g;
    let d = [common * l, dm * ln_u * g, common * a, 1.0 - g, g];
    (value, d)
}

fn residuals(x: &[f64; NP], data: &[FrequencySample]) -> (DVector<f64>, DMatrix<f64>) {
    let n = data.len();
    let mut r = DVector::zeros(2 * n);
    let mut j = DMatrix::zeros(2 * n, NP);
    for (k, s) in data.iter().enumerate() {
        let (v, d) = model(x, s.omega);
        let e = v - s.value;
        r[2 * k] = e.re;
        r[2 * k + 1] = e.im;
        for (c, dc) in d.iter().enumerate() {
            j[(2 * k, c)] = dc.re;
            j[(2 * k + 1, c)] = dc.im;
        }
    }
    (r, j)
}

/// Components pinned at a bound with the descent direction pointing out.
fn frozen(x: &[f64; NP], grad: &DVector<f64>) -> [bool; NP] {
    let bounds = Bounds::for_point(x);
    let mut f = [false; NP];
    for i in 0..NP {
        let at_lo = x[i] <= bounds.lo[i];
        let at_hi = x[i] >= bounds.hi[i];
        f[i] = (at_lo && grad[i] > 0.0) || (at_hi && grad[i] < 0.0);
    }
    f
}

fn projected_gradient_norm(x: &[f64; NP], grad: &DVector<f64>) -> f64 {
    let f = frozen(x, grad);
    (0..NP)
        .filter(|&i| !f[i])
        .map(|i| grad[i].abs())
        .fold(0.0, f64::max)
}

/// Deterministic starting point; see the module docs.
pub fn initial_guess(data: &[FrequencySample]) -> Result<HNParams> {
    check_data(data)?;
    let mut sorted: Vec<FrequencySample> = data.to_vec();
    sorted.sort_by(|p, q| p.omega.total_cmp(&q.omega));
    let first = sorted[0].value.re;
    let last = sorted[sorted.len() - 1].value.re;
    let (mut m_0, mut m_inf) = (first.min(last), first.max(last));
    if !(m_0 > 0.0) {
        m_0 = 0.5 * m_inf.abs().max(1e-300);
    }
    if m_inf <= m_0 {
        m_inf = 2.0 * m_0;
    }
    let dm = m_inf - m_0;
    let loss: Vec<f64> = sorted.iter().map(|s| s.value.im).collect();
    let x: Vec<f64> = sorted.iter().map(|s| s.omega.ln()).collect();
    let (k, &peak) = loss
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.total_cmp(q.1))
        .expect("non-empty");
    let mut x_peak = x[k];
    if k > 0 && k + 1 < x.len() {
        // vertex of the parabola through the three points around the peak
        let (x0, x1, x2) = (x[k - 1], x[k], x[k + 1]);
        let (y0, y1, y2) = (loss[k - 1], loss[k], loss[k + 1]);
        let den = (x0 - x1) * (x0 - x2) * (x1 - x2);
        let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
        let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
        if a < 0.0 {
            x_peak = (-b / (2.0 * a)).clamp(x0, x2);
        }
    }
    let tau0 = (-x_peak).exp();
    let alpha = alpha_from_width(&x, &loss, k, peak)
        .unwrap_or_else(|| (4.0 / std::f64::consts::PI) * (2.0 * peak / dm).atan())
        .clamp(0.05, 1.0);
    HNParams::new(alpha, 1.0, tau0, m_inf, m_0)
}

/// α of the Cole-Cole peak with the observed full width at half maximum.
fn alpha_from_width(x: &[f64], loss: &[f64], k: usize, peak: f64) -> Option<f64> {
    if !(peak > 0.0) {
        return None;
    }
    let half = 0.5 * peak;
    let crossing = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = k;
        for i in range {
            if loss[i] <= half {
                let t = (loss[prev] - half) / (loss[prev] - loss[i]);
                return Some(x[prev] + t * (x[i] - x[prev]));
            }
            prev = i;
        }
        None
    };
    let left = crossing(&mut (0..k).rev())?;
    let right = crossing(&mut (k + 1..x.len()))?;
    let width = right - left;
    let w = |a: f64| 2.0 / a * (2.0 + (0.5 * a * std::f64::consts::PI).cos()).acosh();
    // w decreases in α from +∞ to 2 arcosh(2) at α = 1
    if width <= w(1.0) {
        return Some(1.0);
    }
    let (mut lo, mut hi) = (1e-3, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if w(mid) > width {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn check_data(data: &[FrequencySample]) -> Result<()> {
    if data.len() < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "fitting needs at least {MIN_SAMPLES} samples, got {}",
            data.len()
        )));
    }
    for s in data {
        if !(s.omega > 0.0
            && s.omega.is_finite()
            && s.value.re.is_finite()
            && s.value.im.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "samples need omega > 0 and finite values, got omega = {}",
                s.omega
            )));
        }
    }
    Ok(())
}

/// Fit the HN modulus to `data` from the deterministic starting point.
pub fn fit_hn(data: &[FrequencySample], opts: &FitOptions) -> Result<FitResult> {
    let start = initial_guess(data)?;
    fit_hn_from(data, &start, opts)
}

pub fn fit_hn_from(
    data: &[FrequencySample],
    start: &HNParams,
    opts: &FitOptions,
) -> Result<FitResult> {
    check_data(data)?;
    start.validate()?;
    let scale = data.iter().map(|s| s.value.norm()).fold(0.0, f64::max);
    let threshold = opts.grad_tol * data.len() as f64 * scale * scale;
    let mut x = [
        start.alpha.value(),
        start.beta.value(),
        start.tau0.ln(),
        start.m_inf,
        start.m_0,
    ];
    Bounds::project(&mut x);
    let (mut r, mut j) = residuals(&x, data);
    let mut cost = 0.5 * r.norm_squared();
    let mut mu = opts.initial_damping;
    let mut iterations = 0;
    let mut grad = j.tr_mul(&r);
    while iterations < opts.max_iterations {
        if projected_gradient_norm(&x, &grad) <= threshold {
            break;
        }
        iterations += 1;
        let fz = frozen(&x, &grad);
        let jtj = j.tr_mul(&j);
        let mut improved = false;
        for _ in 0..60 {
            let mut a = jtj.clone();
            let mut rhs = -grad.clone();
            for i in 0..NP {
                if fz[i] {
                    for c in 0..NP {
                        a[(i, c)] = 0.0;
                        a[(c, i)] = 0.0;
                    }
                    a[(i, i)] = 1.0;
                    rhs[i] = 0.0;
                } else {
                    a[(i, i)] += mu * jtj[(i, i)].max(1e-300);
                }
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&rhs)) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = x;
            for i in 0..NP {
                trial[i] += step[i];
            }
            Bounds::project(&mut trial);
            let (r_t, j_t) = residuals(&trial, data);
            let cost_t = 0.5 * r_t.norm_squared();
            if cost_t.is_finite() && cost_t < cost {
                x = trial;
                r = r_t;
                j = j_t;
                cost = cost_t;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
            if mu > 1e16 {
                break;
            }
        }
        grad = j.tr_mul(&r);
        if !improved {
            break;
        }
    }
    let gradient_norm = projected_gradient_norm(&x, &grad);
    let converged = gradient_norm <= threshold;
    if !converged {
        log::warn!("HN fit stopped after {iterations} iterations with projected gradient {gradient_norm:e}");
    }
    let dof = (2 * data.len()).saturating_sub(NP).max(1) as f64;
    let s2 = 2.0 * cost / dof;
    let cov = j.tr_mul(&j).try_inverse().map(|m| m * s2);
    let se = |i: usize| cov.as_ref().map_or(f64::NAN, |c| c[(i, i)].max(0.0).sqrt());
    let params = HNParams::new(x[0], x[1], x[2].exp(), x[3], x[4])?;
    Ok(FitResult {
        params,
        residual_norm: r.norm(),
        std_errors: StdErrors {
            alpha: se(0),
            beta: se(1),
            tau0: params.tau0 * se(2),
            m_inf: se(3),
            m_0: se(4),
        },
        iterations,
        converged,
        gradient_norm,
    })
}

/// Noiseless HN modulus samples at the given frequencies.
pub fn hn_samples(p: &HNParams, omegas: &[f64]) -> Result<Vec<FrequencySample>> {
    omegas
        .iter()
        .map(|&omega| {
            Ok(FrequencySample {
                omega,
                value: crate::spectra::hn_modulus(p, omega)?,
            })
        })
        .collect()
}

/// `n` log-spaced frequencies over [lo, hi].
pub fn log_frequencies(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}
