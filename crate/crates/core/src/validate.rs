//! Invariant suite run by `hereditary validate`.
//!
//! Every check measures one residual against a fixed tolerance. Parameter
//! sets come from fixed grids and a van der Corput sequence, so a run is
//! reproducible bit for bit.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{
    suvorova_convolution, suvorova_stress_series, SuvorovaModel, VaninDistribution,
};
use crate::fit::{fit_hn, hn_samples, log_frequencies, FitOptions};
use crate::kernels::{
    abel_kernel, hn_kernel_generic, hn_resolvent_generic, p_kernel, q_kernel, rzhanitsyn_kernel,
    Family, HNParams, KernelModel,
};
use crate::quadrature_oracle::{
    eh_conv_unity, eh_integral, integrate, inverse_laplace, p_conv_unity, q_conv_unity,
    InverseLaplaceSpec, QuadratureSpec,
};
use crate::resolvent::{
    degree_lowering_residual, hilbert_residual, modulus_compliance_transform,
    volterra_resolvent_transform, ResolventSpec, Variant,
};
use crate::specfun::{eh_alpha_series, gauss_2f1_11, kummer_1f1, FractionalOrder};
use crate::spectra::{
    log_spectrum_stats, numeric_spectrum, rabotnov_spectrum_h, rabotnov_spectrum_mass,
};
use crate::sum::SeriesControl;

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Module names accepted by `only`.
pub const MODULES: [&str; 7] = [
    "specfun",
    "kernels",
    "quadrature_oracle",
    "resolvent",
    "spectra",
    "extensions",
    "fit",
];

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Flip the sign of the splitting identity so that its check must fail.
    pub sabotage: bool,
}

struct Ctx {
    sabotage: bool,
    ctl: SeriesControl,
    quad: QuadratureSpec,
}

/// One invariant of the suite.
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub tolerance: f64,
    measure: fn(&Ctx) -> Result<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub sabotage: bool,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn new(outcomes: Vec<CheckOutcome>, opts: &ValidateOptions) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            sabotage: opts.sabotage,
            passed: outcomes.iter().all(|c| c.passed),
            checks: outcomes,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl Check {
    pub fn run(&self, opts: &ValidateOptions) -> CheckOutcome {
        let ctx = Ctx {
            sabotage: opts.sabotage,
            ctl: SeriesControl::default(),
            quad: QuadratureSpec::default(),
        };
        let (residual, error) = match (self.measure)(&ctx) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        CheckOutcome {
            module: self.module,
            name: self.name,
            residual,
            tolerance: self.tolerance,
            passed: residual.is_some_and(|r| r <= self.tolerance),
            error,
        }
    }
}

/// Checks belonging to the listed modules, in suite order; all when empty.
pub fn select(only: &[String]) -> Result<Vec<&'static Check>> {
    for m in only {
        if !MODULES.contains(&m.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "unknown module '{m}', expected one of {}",
                MODULES.join(", ")
            )));
        }
    }
    Ok(CHECKS
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|m| m == c.module))
        .collect())
}

/// Run the selected checks in order.
pub fn run_suite(only: &[String], opts: &ValidateOptions) -> Result<Report> {
    let outcomes = select(only)?.into_iter().map(|c| c.run(opts)).collect();
    Ok(Report::new(outcomes, opts))
}

fn fo(x: f64) -> FractionalOrder {
    FractionalOrder::new(x).expect("fixed order in (0, 1]")
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// Radical inverse of `i` in `base`, a point of [0, 1).
fn corput(mut i: u64, base: u64) -> f64 {
    let (mut x, mut f) = (0.0, 1.0 / base as f64);
    while i > 0 {
        x += (i % base) as f64 * f;
        i /= base;
        f /= base as f64;
    }
    x
}

fn t_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    log_frequencies(lo, hi, n)
}

const ORDERS: [f64; 3] = [0.25, 0.5, 0.75];

static CHECKS: [Check; 24] = [
    Check {
        module: "specfun",
        name: "kummer exponential degeneration",
        tolerance: 1e-12,
        measure: |c| {
            let mut worst = 0.0f64;
            for i in 0..500 {
                let theta = 50.0 * i as f64 / 499.0;
                worst = worst.max(rel(kummer_1f1(1.0, 1.0, -theta, &c.ctl)?, (-theta).exp()));
            }
            Ok(worst)
        },
    },
    Check {
        module: "specfun",
        name: "gauss logarithm identity",
        tolerance: 1e-10,
        measure: |_| {
            let mut worst = 0.0f64;
            for i in 0..40 {
                let x = 1e-4 * 10f64.powf(8.0 * i as f64 / 39.0);
                worst = worst.max(rel(gauss_2f1_11(2.0, -x)? * x, x.ln_1p()));
            }
            Ok(worst)
        },
    },
    Check {
        module: "specfun",
        name: "eh series against integral form",
        // the alternating series loses ~1e-8 to cancellation at the crossover
        tolerance: 1e-7,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for t in t_grid(12, 0.05, 10.0) {
                    let s = eh_alpha_series(fo(a), 1.0, t, &c.ctl)?;
                    worst = worst.max(rel(s, eh_integral(a, 1.0, t, &c.quad)?));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "kernels",
        name: "debye reduction",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for t in t_grid(20, 0.05, 5.0) {
                let v = hn_kernel_generic(1.0, 1.0, t, &c.ctl, &c.quad)?.value;
                worst = worst.max(rel(v, (-t).exp()));
            }
            Ok(worst)
        },
    },
    Check {
        module: "kernels",
        name: "rzhanitsyn-davidson reduction",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for b in ORDERS {
                for t in t_grid(20, 0.05, 5.0) {
                    let v = hn_kernel_generic(1.0, b, t, &c.ctl, &c.quad)?.value;
                    worst = worst.max(rel(v, rzhanitsyn_kernel(b, 1.0, t)));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "kernels",
        name: "cole-cole reduction",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for t in t_grid(20, 0.05, 20.0) {
                    let v = hn_kernel_generic(a, 1.0, t, &c.ctl, &c.quad)?.value;
                    worst = worst.max(rel(v, eh_integral(a, 1.0, t, &c.quad)?));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "kernels",
        name: "rabotnov resolvent reduces to abel",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for t in t_grid(20, 0.05, 5.0) {
                    let v = hn_resolvent_generic(a, 1.0, t, &c.ctl, &c.quad)?.value;
                    worst = worst.max(rel(v, abel_kernel(a, 1.0, t)));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "kernels",
        name: "time kernels against inverse laplace",
        tolerance: 1e-6,
        measure: |c| {
            let spec = InverseLaplaceSpec::default();
            let mut worst = 0.0f64;
            for a in ORDERS {
                let models = [
                    KernelModel::new(Family::Rabotnov, fo(a), FractionalOrder::ONE, 1.0)?,
                    KernelModel::new(Family::RzhanitsynDavidson, fo(a), FractionalOrder::ONE, 1.0)?,
                    KernelModel::new(Family::Chgf, fo(a), FractionalOrder::ONE, 1.0)?,
                    KernelModel::new(Family::HavriliakNegami, fo(a), fo(0.6), 1.0)?,
                ];
                for m in &models {
                    for t in t_grid(10, 0.05, 5.0) {
                        let direct = m.kernel(t, &c.ctl, &c.quad)?.value;
                        let inverted = inverse_laplace(|p| m.transform(p), t, &spec)?;
                        worst = worst.max(rel(direct, inverted));
                    }
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "quadrature_oracle",
        name: "eh convolution with unity",
        tolerance: 1e-6,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for theta in [0.1, 0.7, 2.0, 5.0] {
                    let direct = integrate(
                        |s| eh_alpha_series(fo(a), 1.0, s, &c.ctl).unwrap_or(f64::NAN),
                        0.0,
                        theta,
                        &c.quad.with_singularity(a - 1.0),
                    )?;
                    worst = worst.max(rel(direct.value, eh_conv_unity(a, theta, &c.quad)?));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "quadrature_oracle",
        name: "damped convolution with unity",
        tolerance: 1e-6,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for n in [0.0, 0.3, 2.0] {
                    for theta in [0.1, 0.7, 2.0, 5.0] {
                        let direct = integrate(
                            |s| q_kernel(fo(a), n, 1.0, s, &c.ctl).unwrap_or(f64::NAN),
                            0.0,
                            theta,
                            &c.quad.with_singularity(a - 1.0),
                        )?;
                        worst = worst.max(rel(direct.value, q_conv_unity(a, n, theta, &c.quad)?));
                    }
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "quadrature_oracle",
        name: "rational convolution with unity",
        tolerance: 1e-6,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                for n in [0.0, 0.5, 2.0] {
                    for theta in [0.1, 0.7, 2.0, 5.0] {
                        let direct = integrate(
                            |s| p_kernel(fo(a), n, 1.0, s, &c.ctl).unwrap_or(f64::NAN),
                            0.0,
                            theta,
                            &c.quad,
                        )?;
                        worst = worst.max(rel(direct.value, p_conv_unity(a, n, theta, &c.quad)?));
                    }
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "resolvent",
        name: "splitting condition",
        tolerance: 1e-12,
        measure: |c| {
            let sign = if c.sabotage { -1.0 } else { 1.0 };
            let omegas = log_frequencies(1e-3, 1e3, 13);
            let mut worst = 0.0f64;
            for spec in sample_specs()? {
                for i in 0..4u64 {
                    let l1 = 0.1 * 100f64.powf(corput(2 * i + 1, 3));
                    let l2 = 0.1 * 100f64.powf(corput(2 * i + 2, 3));
                    worst = worst.max(hilbert_residual(&spec, l1, l2, &omegas, sign)?);
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "resolvent",
        name: "degree lowering",
        tolerance: 1e-6,
        measure: |_| {
            let mut worst = 0.0f64;
            for spec in sample_specs()? {
                for w in log_frequencies(1e-2, 1e2, 5) {
                    worst = worst.max(degree_lowering_residual(&spec, spec.lambda, w, None)?);
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "resolvent",
        name: "modulus compliance pairing",
        tolerance: 1e-10,
        measure: |_| {
            let mut worst = 0.0f64;
            for spec in sample_specs()? {
                for w in log_frequencies(1e-3, 1e3, 9) {
                    let (m, j) = modulus_compliance_transform(&spec, 2.5, w)?;
                    worst = worst.max((m * j - 1.0).norm());
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "resolvent",
        name: "volterra resolvent of rabotnov is abel",
        tolerance: 1e-8,
        measure: |_| {
            let mut worst = 0.0f64;
            for a in ORDERS {
                let r = KernelModel::new(Family::Rabotnov, fo(a), FractionalOrder::ONE, 1.5)?;
                let k = KernelModel::new(Family::Abel, fo(a), FractionalOrder::ONE, 1.5)?;
                for w in log_frequencies(1e-2, 1e2, 10) {
                    let p = Complex64::new(0.0, w);
                    worst = worst.max(crel(
                        volterra_resolvent_transform(r.transform(p))?,
                        k.transform(p),
                    ));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "spectra",
        name: "spectrum normalisation",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
                worst = worst.max((rabotnov_spectrum_mass(fo(a), &c.quad)? - 1.0).abs());
            }
            Ok(worst)
        },
    },
    Check {
        module: "spectra",
        name: "log symmetry",
        tolerance: 1e-14,
        measure: |_| {
            let mut worst = 0.0f64;
            for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
                for u in [0.1f64, 0.5, 1.0, 3.0, 10.0] {
                    let up = rabotnov_spectrum_h(fo(a), 2.0, 2.0 * u.exp())?;
                    let down = rabotnov_spectrum_h(fo(a), 2.0, 2.0 * (-u).exp())?;
                    worst = worst.max(rel(up, down));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "spectra",
        name: "retardation spectrum shift",
        tolerance: 1e-9,
        measure: |_| {
            let (tau_eps, tau_sigma) = (1.0, 3.0);
            let mut worst = 0.0f64;
            for a in [0.3, 0.6] {
                let creep =
                    KernelModel::new(Family::Rabotnov, fo(a), FractionalOrder::ONE, tau_sigma)?;
                for tau in [0.1, 1.0, 3.0, 30.0] {
                    let shifted = rabotnov_spectrum_h(fo(a), tau_eps, tau * tau_eps / tau_sigma)?;
                    worst = worst.max(rel(numeric_spectrum(&creep, tau)?, shifted));
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "spectra",
        name: "skewness opposition",
        tolerance: 0.0,
        measure: |c| {
            let mut bad = 0.0;
            for a in ORDERS {
                let rd =
                    KernelModel::new(Family::RzhanitsynDavidson, fo(a), FractionalOrder::ONE, 1.0)?;
                let ch = KernelModel::new(Family::Chgf, fo(a), FractionalOrder::ONE, 1.0)?;
                let s_rd = log_spectrum_stats(&rd, &c.quad)?.skew_sign();
                let s_ch = log_spectrum_stats(&ch, &c.quad)?.skew_sign();
                if !(s_rd < 0.0 && s_ch > 0.0) {
                    bad += 1.0;
                }
            }
            Ok(bad)
        },
    },
    Check {
        module: "extensions",
        name: "vanin normalisation",
        tolerance: 1e-8,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in [1.0, 2.0] {
                for b in [0.0, 1.0, 2.0] {
                    for s in [0.5, 1.0] {
                        worst = worst
                            .max(VaninDistribution::new(a, b, s)?.normalization_defect(&c.quad)?);
                    }
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "extensions",
        name: "suvorova series against convolution",
        tolerance: 1e-5,
        measure: |c| {
            let mut worst = 0.0f64;
            for a in [0.7, 0.9] {
                for k in [0.05, 0.1] {
                    let m = SuvorovaModel::new(1.0, 1.0, k, fo(a), 1.0)?;
                    for t in [0.5, 1.0, 2.0] {
                        let s = suvorova_stress_series(&m, t, &c.ctl)?;
                        worst = worst.max(rel(s, suvorova_convolution(&m, t, &c.quad)?));
                    }
                }
            }
            Ok(worst)
        },
    },
    Check {
        module: "extensions",
        name: "suvorova without heredity",
        tolerance: 1e-15,
        measure: |c| {
            let m = SuvorovaModel::new(1.0, 1.0, 0.0, fo(0.5), 1.0)?;
            Ok(rel(
                suvorova_stress_series(&m, std::f64::consts::E - 1.0, &c.ctl)?,
                1.0,
            ))
        },
    },
    Check {
        module: "fit",
        name: "noiseless round trip",
        tolerance: 5e-3,
        measure: |_| {
            let truth = HNParams::shape(0.61, 0.8, 1.0)?;
            let data = hn_samples(&truth, &log_frequencies(1e-3, 1e3, 50))?;
            let fit = fit_hn(&data, &FitOptions::default())?;
            let p = fit.params;
            Ok(rel(p.alpha.value(), 0.61)
                .max(rel(p.beta.value(), 0.8))
                .max(rel(p.tau0, 1.0)))
        },
    },
    Check {
        module: "fit",
        name: "debye corner",
        tolerance: 1e-3,
        measure: |_| {
            let truth = HNParams::shape(1.0, 1.0, 1.0)?;
            let data = hn_samples(&truth, &log_frequencies(1e-2, 1e2, 40))?;
            let p = fit_hn(&data, &FitOptions::default())?.params;
            Ok((1.0 - p.alpha.value()).max(1.0 - p.beta.value()))
        },
    },
];

/// Twenty admissible parameter sets per variant.
fn sample_specs() -> Result<Vec<ResolventSpec>> {
    let mut out = Vec::with_capacity(60);
    for i in 1..=20u64 {
        let a = fo(0.05 + 0.9 * corput(i, 2));
        let tau = 0.1 * 100f64.powf(corput(i, 3));
        let ratio = 1.0 + 9.0 * corput(i, 5);
        out.push(ResolventSpec::eh(a, tau, tau * ratio)?);
        let n_sigma = 3.0 * corput(i, 7);
        let n_eps = n_sigma + 5.0 * corput(i, 11);
        out.push(ResolventSpec::from_n(Variant::Q, a, tau, n_eps, n_sigma)?);
        out.push(ResolventSpec::from_n(Variant::P, a, tau, n_eps, n_sigma)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&[], &ValidateOptions::default()).unwrap();
        for c in &report.checks {
            assert!(
                c.passed,
                "{} / {}: {:?} vs {} ({:?})",
                c.module, c.name, c.residual, c.tolerance, c.error
            );
        }
        assert!(report.passed);
    }

    #[test]
    fn sabotage_trips_the_splitting_condition() {
        let report = run_suite(&["resolvent".into()], &ValidateOptions { sabotage: true }).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(failed, ["splitting condition"]);
    }

    #[test]
    fn only_filters_and_rejects_unknown_modules() {
        let checks = select(&["spectra".into()]).unwrap();
        assert!(checks.iter().all(|c| c.module == "spectra"));
        assert!(!checks.is_empty());
        assert!(select(&["nope".into()]).is_err());
    }

    #[test]
    fn corput_points() {
        assert_eq!(corput(1, 2), 0.5);
        assert_eq!(corput(3, 2), 0.75);
        assert!((corput(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }
}
