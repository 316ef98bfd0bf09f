//! Run configuration, shared by the flag parser and the JSON config file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hereditary::{
    Family, FractionalOrder, HNParams, InverseLaplaceMethod, KernelModel, QuadratureSpec,
    SeriesControl,
};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Version accepted in the `schema` field of a config file.
pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Spectrum,
    Fit,
    Invert,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// Relaxation kernel R(t).
    #[default]
    Kernel,
    /// Normalised relaxation function.
    Relaxation,
    /// Creep resolvent.
    Resolvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InvertMethod {
    #[default]
    Talbot,
    Euler,
}

impl From<InvertMethod> for InverseLaplaceMethod {
    fn from(m: InvertMethod) -> Self {
        match m {
            InvertMethod::Talbot => InverseLaplaceMethod::DeformedContour,
            InvertMethod::Euler => InverseLaplaceMethod::BromwichEuler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.points < 2 {
            return Err(Failure::Config(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Failure::Config(format!(
                "grid needs finite start < stop, got {}:{}",
                self.start, self.stop
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Failure::Config("log spacing needs start > 0".into()));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let (a, b) = match self.spacing {
            Spacing::Lin => (self.start, self.stop),
            Spacing::Log => (self.start.ln(), self.stop.ln()),
        };
        (0..self.points)
            .map(|i| {
                let x = if i + 1 == self.points {
                    b
                } else {
                    a + (b - a) * i as f64 / last
                };
                match self.spacing {
                    Spacing::Lin => x,
                    Spacing::Log if i == 0 => self.start,
                    Spacing::Log if i + 1 == self.points => self.stop,
                    Spacing::Log => x.exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Failure;

    /// `start:stop:points[:lin|log]`
    fn from_str(s: &str) -> Result<Self, Failure> {
        let bad = || Failure::Config(format!("grid '{s}' is not start:stop:points[:lin|log]"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let spacing = match parts.get(3).copied() {
            None | Some("lin") => Spacing::Lin,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad()),
        };
        let grid = Grid {
            start: parts[0].parse().map_err(|_| bad())?,
            stop: parts[1].parse().map_err(|_| bad())?,
            points: parts[2].parse().map_err(|_| bad())?,
            spacing,
        };
        grid.validate()?;
        Ok(grid)
    }
}

/// Model as written by the user, before validation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_0: Option<f64>,
}

impl FromStr for ModelSpec {
    type Err = Failure;

    /// `family[:key=value,...]`
    fn from_str(s: &str) -> Result<Self, Failure> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = ModelSpec {
            family: family.trim().to_string(),
            ..Self::default()
        };
        for pair in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Failure::Config(format!("model parameter '{pair}' is not key=value"))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Failure::Config(format!("model parameter '{pair}' is not a number"))
            })?;
            let slot = match key.trim() {
                "alpha" => &mut spec.alpha,
                "beta" => &mut spec.beta,
                "tau" => &mut spec.tau,
                "m_inf" => &mut spec.m_inf,
                "m_0" => &mut spec.m_0,
                other => {
                    return Err(Failure::Config(format!(
                        "unknown model parameter '{other}'"
                    )))
                }
            };
            if slot.replace(value).is_some() {
                return Err(Failure::Config(format!(
                    "model parameter '{key}' given twice"
                )));
            }
        }
        Ok(spec)
    }
}

fn order(name: &str, v: f64) -> Result<FractionalOrder, Failure> {
    FractionalOrder::new(v).map_err(|e| Failure::Config(format!("{name}: {e}")))
}

impl ModelSpec {
    pub fn build(&self) -> Result<KernelModel, Failure> {
        let name = self.family.to_ascii_lowercase();
        let family = Family::parse(&name)
            .ok_or_else(|| Failure::Config(format!("unknown model family '{}'", self.family)))?;
        let tau = self.tau.unwrap_or(1.0);
        let (alpha, beta) = if name == "debye" {
            if self.alpha.is_some() || self.beta.is_some() {
                return Err(Failure::Config("debye takes no alpha or beta".into()));
            }
            (FractionalOrder::ONE, FractionalOrder::ONE)
        } else {
            let alpha = self
                .alpha
                .ok_or_else(|| Failure::Config(format!("{name} needs alpha")))?;
            let beta = match (family, self.beta) {
                (Family::HavriliakNegami, b) => order("beta", b.unwrap_or(1.0))?,
                (_, None) => FractionalOrder::ONE,
                (_, Some(_)) => return Err(Failure::Config(format!("{name} takes no beta"))),
            };
            (order("alpha", alpha)?, beta)
        };
        let model = KernelModel::new(family, alpha, beta, tau)
            .map_err(|e| Failure::Config(e.to_string()))?;
        match (self.m_inf, self.m_0) {
            (None, None) => Ok(model),
            (Some(mi), Some(m0)) => model
                .with_moduli(mi, m0)
                .map_err(|e| Failure::Config(e.to_string())),
            _ => Err(Failure::Config(
                "m_inf and m_0 must be given together".into(),
            )),
        }
    }
}

/// Havriliak-Negami parameters of a model, for the families that are
/// special cases of it.
pub fn as_hn(model: &KernelModel) -> Result<HNParams, Failure> {
    let p = model.hn_params();
    let (alpha, beta) = match model.family {
        Family::HavriliakNegami => (p.alpha, p.beta),
        Family::Rabotnov => (model.alpha, FractionalOrder::ONE),
        Family::RzhanitsynDavidson => (FractionalOrder::ONE, model.alpha),
        Family::Abel | Family::Chgf => {
            return Err(Failure::Config(format!(
                "{:?} is not a Havriliak-Negami special case",
                model.family
            )))
        }
    };
    Ok(HNParams { alpha, beta, ..p })
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub quantity: Quantity,
    #[serde(default)]
    pub method: InvertMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Relative tolerance for series and quadrature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub only: Vec<String>,
    #[serde(default)]
    pub sabotage: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            schema: CONFIG_SCHEMA,
            command,
            model: None,
            grid: None,
            quantity: Quantity::default(),
            method: InvertMethod::default(),
            input: None,
            output: None,
            tol: None,
            max_iterations: None,
            only: Vec::new(),
            sabotage: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Failure> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Failure::Config(format!("config: {e}")))?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(Failure::Config(format!(
                "config schema {} is not supported (expected {CONFIG_SCHEMA})",
                cfg.schema
            )));
        }
        if let Some(g) = &cfg.grid {
            g.validate()?;
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Result<KernelModel, Failure> {
        self.model
            .as_ref()
            .ok_or_else(|| Failure::Config("a model is required".into()))?
            .build()
    }

    pub fn grid(&self) -> Result<Grid, Failure> {
        let g = self
            .grid
            .ok_or_else(|| Failure::Config("a grid is required".into()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn controls(&self) -> Result<(SeriesControl, QuadratureSpec), Failure> {
        let mut ctl = SeriesControl::default();
        let mut quad = QuadratureSpec::default();
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Failure::Config(format!(
                    "tol must lie in (0, 1), got {tol}"
                )));
            }
            ctl.rel_tol = tol;
            quad.rel_tol = tol;
        }
        Ok((ctl, quad))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Eval => "eval",
            Command::Spectrum => "spectrum",
            Command::Fit => "fit",
            Command::Invert => "invert",
            Command::Validate => "validate",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:5:6".parse().unwrap();
        assert_eq!(g.nodes(), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let g: Grid = "0.01:100:5:log".parse().unwrap();
        let n = g.nodes();
        assert_eq!((n[0], n[4]), (0.01, 100.0));
        assert!((n[2] - 1.0).abs() < 1e-15);
        for bad in ["0:5", "0:5:1", "5:0:3", "0:5:3:log", "0:5:3:cubic", "a:5:3"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn model_parsing() {
        let m: ModelSpec = "hn:alpha=0.6,beta=0.8,tau=2".parse().unwrap();
        let k = m.build().unwrap();
        assert_eq!(k.family, Family::HavriliakNegami);
        assert_eq!((k.alpha.value(), k.beta.value(), k.tau), (0.6, 0.8, 2.0));
        let d = "debye".parse::<ModelSpec>().unwrap().build().unwrap();
        assert!(d.alpha.is_one() && d.beta.is_one());
        for bad in [
            "rabotnov",
            "rabotnov:alpha=1.5",
            "rabotnov:alpha=0.5,beta=0.5",
            "debye:alpha=0.5",
            "nope:alpha=0.5",
            "hn:alpha=0.5,gamma=1",
            "hn:alpha=0.5,alpha=0.6",
            "hn:alpha",
            "hn:alpha=0.5,m_inf=2",
        ] {
            let r = bad.parse::<ModelSpec>().and_then(|m| m.build());
            assert!(r.is_err(), "{bad}");
        }
    }

    #[test]
    fn config_rejects_unknown_keys_and_schemas() {
        let ok = r#"{"schema":1,"command":"eval","model":{"family":"debye"},"grid":{"start":0,"stop":1,"points":3}}"#;
        RunConfig::from_json(ok).unwrap();
        let extra = r#"{"schema":1,"command":"eval","colour":"red"}"#;
        assert!(RunConfig::from_json(extra).is_err());
        let nested = r#"{"schema":1,"command":"eval","model":{"family":"debye","gamma":1}}"#;
        assert!(RunConfig::from_json(nested).is_err());
        let future = r#"{"schema":2,"command":"eval"}"#;
        assert!(RunConfig::from_json(future).is_err());
    }

    #[test]
    fn hn_embedding() {
        let rd = "rzhanitsyn-davidson:alpha=0.4"
            .parse::<ModelSpec>()
            .unwrap()
            .build()
            .unwrap();
        let p = as_hn(&rd).unwrap();
        assert_eq!((p.alpha.value(), p.beta.value()), (1.0, 0.4));
        let chgf = "chgf:alpha=0.4"
            .parse::<ModelSpec>()
            .unwrap()
            .build()
            .unwrap();
        assert!(as_hn(&chgf).is_err());
    }
}
