use std::fmt::Write as _;
use std::fs::File;
use std::io::Read;

use hereditary::fit::{fit_hn, FitOptions, FitResult};
use hereditary::kernels::{hn_creep_resolvent_evaluated, hn_relaxation_function_evaluated};
use hereditary::quadrature_oracle::inverse_laplace;
use hereditary::spectra::spectrum_density;
use hereditary::validate::{select, Report, ValidateOptions};
use hereditary::{Complex64, Evaluation, FrequencySample, InverseLaplaceSpec};
use rayon::prelude::*;
use serde::Deserialize;

use crate::config::{as_hn, Command, Quantity, RunConfig};
use crate::Failure;

/// Text written to the output, and whether every invariant held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cfg.command {
        Command::Eval => cmd_eval(cfg).map(Outcome::ok),
        Command::Spectrum => cmd_spectrum(cfg).map(Outcome::ok),
        Command::Fit => cmd_fit(cfg).map(Outcome::ok),
        Command::Invert => cmd_invert(cfg).map(Outcome::ok),
        Command::Validate => cmd_validate(cfg),
    }
}

/// Seventeen significant digits, enough to round-trip any double.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evaluate `f` on every node in parallel, failing on the first node (in
/// grid order) that errors.
fn on_grid<T, F>(nodes: &[f64], label: &str, f: F) -> Result<Vec<T>, Failure>
where
    T: Send,
    F: Fn(f64) -> hereditary::Result<T> + Sync,
{
    let results: Vec<_> = nodes.par_iter().map(|&x| f(x)).collect();
    results
        .into_iter()
        .zip(nodes)
        .map(|(r, &x)| r.map_err(|e| Failure::from_core(e, format!("{label} = {}", num(x)))))
        .collect()
}

pub fn cmd_eval(cfg: &RunConfig) -> Result<String, Failure> {
    let model = cfg.model()?;
    let nodes = cfg.grid()?.nodes();
    let (ctl, quad) = cfg.controls()?;
    let rows: Vec<Evaluation> = match cfg.quantity {
        Quantity::Kernel => on_grid(&nodes, "t", |t| model.kernel(t, &ctl, &quad))?,
        Quantity::Relaxation => {
            let p = as_hn(&model)?;
            on_grid(&nodes, "t", |t| {
                hn_relaxation_function_evaluated(&p, t, &ctl, &quad)
            })?
        }
        Quantity::Resolvent => {
            let p = as_hn(&model)?;
            on_grid(&nodes, "t", |t| {
                hn_creep_resolvent_evaluated(&p, t, &ctl, &quad)
            })?
        }
    };
    let mut out = String::from("t,value,method\n");
    for (t, e) in nodes.iter().zip(rows) {
        writeln!(out, "{},{},{}", num(*t), num(e.value), e.method).unwrap();
    }
    Ok(out)
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, Failure> {
    let model = cfg.model()?;
    let nodes = cfg.grid()?.nodes();
    let values = on_grid(&nodes, "tau", |tau| spectrum_density(&model, tau))?;
    let mut out = String::from("tau,value\n");
    for (tau, v) in nodes.iter().zip(values) {
        writeln!(out, "{},{}", num(*tau), num(v)).unwrap();
    }
    Ok(out)
}

pub fn cmd_invert(cfg: &RunConfig) -> Result<String, Failure> {
    let model = cfg.model()?;
    let nodes = cfg.grid()?.nodes();
    if nodes[0] <= 0.0 {
        return Err(Failure::Config("inversion needs t > 0".into()));
    }
    let (ctl, quad) = cfg.controls()?;
    let spec = InverseLaplaceSpec {
        method: cfg.method.into(),
        ..InverseLaplaceSpec::default()
    };
    let rows = on_grid(&nodes, "t", |t| {
        let inverted = inverse_laplace(|p: Complex64| model.transform(p), t, &spec)?;
        let series = model.kernel(t, &ctl, &quad).ok().map(|e| e.value);
        Ok((series, inverted))
    })?;
    let mut out = String::from("t,series_value,inverted_value,rel_diff\n");
    for (t, (series, inverted)) in nodes.iter().zip(rows) {
        let (s, d) = match series {
            Some(s) => (
                num(s),
                num((s - inverted).abs() / s.abs().max(inverted.abs())),
            ),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{},{s},{},{d}", num(*t), num(inverted)).unwrap();
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Row {
    omega: f64,
    re: f64,
    im: f64,
}

/// Parse fit data with the exact header `omega,re,im`.
pub fn read_samples(reader: impl Read) -> Result<Vec<FrequencySample>, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Failure::Config(format!("csv: {e}")))?;
    if header != vec!["omega", "re", "im"] {
        return Err(Failure::Config(format!(
            "csv header must be 'omega,re,im', got '{}'",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Failure::Config(format!("csv: {e}")))?;
        if !(row.omega > 0.0 && row.omega.is_finite() && row.re.is_finite() && row.im.is_finite()) {
            return Err(Failure::Config(format!(
                "csv row {}: need omega > 0 and finite values",
                i + 2
            )));
        }
        samples.push(FrequencySample {
            omega: row.omega,
            value: Complex64::new(row.re, row.im),
        });
    }
    Ok(samples)
}

pub fn cmd_fit(cfg: &RunConfig) -> Result<String, Failure> {
    let data = match &cfg.input {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            read_samples(file)?
        }
        None => read_samples(std::io::stdin().lock())?,
    };
    let mut opts = FitOptions::default();
    if let Some(n) = cfg.max_iterations {
        opts.max_iterations = n;
    }
    if let Some(tol) = cfg.tol {
        opts.grad_tol = tol;
    }
    let fit: FitResult = fit_hn(&data, &opts).map_err(|e| match e {
        hereditary::Error::InvalidParameter(m) => Failure::Config(m),
        other => Failure::from_core(other, "fit".into()),
    })?;
    if !fit.converged {
        log::warn!(
            "fit stopped after {} iterations without converging",
            fit.iterations
        );
    }
    Ok(serde_json::to_string_pretty(&fit).expect("fit result serialises") + "\n")
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let opts = ValidateOptions {
        sabotage: cfg.sabotage,
    };
    let checks = select(&cfg.only).map_err(|e| Failure::Config(e.to_string()))?;
    let outcomes = checks.par_iter().map(|c| c.run(&opts)).collect();
    let report = Report::new(outcomes, &opts);
    for c in report.failures() {
        log::error!(
            "{} / {} failed: residual {:?}, tolerance {:e}",
            c.module,
            c.name,
            c.residual,
            c.tolerance
        );
    }
    Ok(Outcome {
        text: serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
        ok: report.passed,
    })
}
