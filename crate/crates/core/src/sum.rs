//! Compensated summation and the shared series-truncation rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Truncation policy for every infinite series in the crate.
///
/// A series stops once two consecutive terms both fall below
/// `rel_tol * |partial sum| + abs_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 500,
            rel_tol: 1e-12,
            abs_tol: 0.0,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let ctl = Self {
            max_terms,
            rel_tol,
            abs_tol,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter(
                "max_terms must be at least 1".into(),
            ));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter(
                "series tolerances must satisfy rel_tol > 0, abs_tol >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self { max_terms, ..self }
    }

    /// Sum `term(n)` for n = 0, 1, ... under this policy.
    ///
    /// `term` may return `None` to signal exact termination.
    pub(crate) fn sum<F>(&self, function: &'static str, mut term: F) -> Result<f64>
    where
        F: FnMut(usize) -> Option<f64>,
    {
        let mut acc = NeumaierSum::new();
        let mut prev_small = false;
        let mut last = f64::NAN;
        for n in 0..self.max_terms {
            let Some(t) = term(n) else {
                return Ok(acc.total());
            };
            if !t.is_finite() {
                return Err(Error::NonConvergence {
                    function,
                    terms: n,
                    last_term: t,
                });
            }
            acc.add(t);
            last = t;
            let small = t.abs() <= self.rel_tol * acc.total().abs() + self.abs_tol;
            if small && prev_small {
                return Ok(acc.total());
            }
            prev_small = small;
        }
        Err(Error::NonConvergence {
            function,
            terms: self.max_terms,
            last_term: last,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_bits() {
        let mut s = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.total(), 2.0);
    }

    #[test]
    fn geometric_series_stops() {
        let ctl = SeriesControl::default();
        let v = ctl.sum("geom", |n| Some(0.5f64.powi(n as i32))).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn exhaustion_reports_non_convergence() {
        let ctl = SeriesControl::default().with_max_terms(10);
        let r = ctl.sum("harmonic", |n| Some(1.0 / (n + 1) as f64));
        assert!(matches!(r, Err(Error::NonConvergence { terms: 10, .. })));
    }

    #[test]
    fn validation() {
        assert!(SeriesControl::new(0, 1e-12, 0.0).is_err());
        assert!(SeriesControl::new(10, 0.0, 0.0).is_err());
        assert!(SeriesControl::new(10, 1e-8, -1.0).is_err());
        assert!(SeriesControl::new(10, 1e-8, 0.0).is_ok());
    }
}
