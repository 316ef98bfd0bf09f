//! Deterministic adaptive Gauss-Kronrod (10/21) quadrature.
//!
//! The interval with the largest error estimate is bisected until the global
//! estimate meets the tolerance. Ties are broken by position, and partial
//! results are summed left to right, so a given integrand and spec always
//! produce bitwise-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Tolerances and budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Exponent γ of an `x^γ`-type weight at the lower endpoint; `0` for none.
    pub endpoint_singularity_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_subdivisions: 400,
            endpoint_singularity_exponent: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least 8 subdivisions".into(),
            ));
        }
        if self.endpoint_singularity_exponent <= -1.0 {
            return Err(Error::InvalidParameter(
                "endpoint singularity exponent must exceed -1".into(),
            ));
        }
        Ok(())
    }

    /// Same spec with twice the subdivision budget and tolerances tightened tenfold.
    pub fn refined(&self) -> Self {
        Self {
            abs_tol: self.abs_tol * 0.1,
            rel_tol: self.rel_tol * 0.1,
            max_subdivisions: self.max_subdivisions * 2,
            ..*self
        }
    }

    pub fn with_singularity(self, exponent: f64) -> Self {
        Self {
            endpoint_singularity_exponent: exponent,
            ..self
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = 0.0;
    let mut kronrod = WGK[10] * fc;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    let mut ordered: Vec<&Segment> = segments.iter().collect();
    ordered.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = NeumaierSum::new();
    let mut error = NeumaierSum::new();
    for s in ordered {
        value.add(s.value);
        error.add(s.error);
    }
    (value.total(), error.total())
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// A non-zero `endpoint_singularity_exponent` γ triggers the substitution
/// `x = a + (b - a) s^m` with `m = 2 / (1 + γ)`, which turns an `(x - a)^γ`
/// endpoint behaviour into a smooth `s^1` one before subdivision starts.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let gamma = spec.endpoint_singularity_exponent;
    if gamma != 0.0 {
        let m = 2.0 / (1.0 + gamma);
        let width = b - a;
        let g = |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let x = a + width * s.powf(m);
            f(x) * width * m * s.powf(m - 1.0)
        };
        return adaptive(&g, 0.0, 1.0, spec);
    }
    adaptive(&f, a, b, spec)
}

/// Integrate over `[a, ∞)` through `x = a + s / (1 - s)`.
///
/// Intended for integrands with at least exponential or `x^-2` decay; slowly
/// decaying algebraic tails should be mapped explicitly by the caller.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = a + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, &spec.with_singularity(0.0))
}

/// Integrate over `[a, b]` with the interval pre-split at `breaks`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    points.push(b);
    let segments: Vec<Segment> = points.windows(2).map(|w| gk21(&f, w[0], w[1])).collect();
    refine(&f, segments, spec)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let first = gk21(f, a, b);
    refine(f, vec![first], spec)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    mut segments: Vec<Segment>,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mut splits = 0usize;
    loop {
        let (value, error) = totals(&segments);
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                subdivisions: segments.len(),
            });
        }
        // worst segment that can still be split
        let mut worst: Option<usize> = None;
        for (i, s) in segments.iter().enumerate() {
            let mid = 0.5 * (s.a + s.b);
            let splittable = mid > s.a
                && mid < s.b
                && (s.b - s.a).abs()
                    > 1e3 * f64::EPSILON * s.a.abs().max(s.b.abs()).max(f64::MIN_POSITIVE);
            if !splittable {
                continue;
            }
            match worst {
                Some(w) if segments[w].error >= s.error => {}
                _ => worst = Some(i),
            }
        }
        let Some(w) = worst else {
            // every remaining segment is at roundoff width
            if error.is_finite() && error <= 1e3 * target {
                return Ok(Integral {
                    value,
                    error,
                    subdivisions: segments.len(),
                });
            }
            return Err(Error::Quadrature {
                estimate: value,
                error,
                subdivisions: segments.len(),
            });
        };
        if splits >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                subdivisions: segments.len(),
            });
        }
        let s = segments[w];
        let mid = 0.5 * (s.a + s.b);
        segments[w] = gk21(f, s.a, mid);
        segments.insert(w + 1, gk21(f, mid, s.b));
        splits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 8.0, max_relative = 1e-15);
    }

    #[test]
    fn endpoint_singularity_substitution() {
        // ∫₀¹ x^(-1/2) dx = 2
        let spec = QuadratureSpec::default().with_singularity(-0.5);
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &spec).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r =
            integrate_to_infinity(|x: f64| (-x).exp(), 0.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn breaks_split_the_interval() {
        let f = |x: f64| (x - 1.0).abs();
        let r = integrate_with_breaks(f, 0.0, 3.0, &[1.0], &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 2.5, max_relative = 1e-14);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let spec = QuadratureSpec {
            max_subdivisions: 8,
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            ..Default::default()
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec {
            max_subdivisions: 4,
            ..Default::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &spec).is_err());
    }
}
