//! Model configuration documents, grids, and `--at` point specifications.

use std::path::Path;

use serde::Deserialize;
use tps_core::chart::coordinate_names;
use tps_core::field::EvalError;
use tps_core::thermo::{
    FundamentalRelation, IdealGas, IdealGasEnergy, IdealGasEntropy, Quadratic, VanDerWaals, VdwEnergy, VdwEntropy,
};
use tps_core::{DarbouxPoint, Field, Real};

use crate::error::CliError;

fn one() -> f64 {
    1.0
}

fn zero() -> f64 {
    0.0
}

fn two() -> usize {
    2
}

/// Flat JSON object selecting a model, e.g.
/// `{"model":"vdw","a":1,"b":1,"cv":1.5}`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Vdw {
        a: f64,
        b: f64,
        cv: f64,
        #[serde(default = "one")]
        r: f64,
    },
    #[serde(alias = "ideal_gas")]
    Ideal {
        #[serde(default = "one")]
        cv: f64,
        #[serde(default = "one")]
        r: f64,
        #[serde(default = "zero")]
        s0: f64,
        #[serde(default = "one")]
        u0: f64,
        #[serde(default = "one")]
        v0: f64,
    },
    Quadratic {
        #[serde(default = "two")]
        n: usize,
    },
}

/// Which fundamental relation of a model to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Rep {
    Energy,
    Entropy,
}

/// Parsed and validated model.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Vdw(VanDerWaals),
    Ideal(IdealGas),
    Quadratic(usize),
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Model, CliError> {
        let cfg: ModelConfig = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("model config: {e}")))?;
        cfg.build()
    }

    pub fn build(&self) -> Result<Model, CliError> {
        Ok(match *self {
            ModelConfig::Vdw { a, b, cv, r } => Model::Vdw(VanDerWaals::new(a, b, cv, r)?),
            ModelConfig::Ideal { cv, r, s0, u0, v0 } => Model::Ideal(IdealGas::with_reference(cv, r, s0, u0, v0)?),
            ModelConfig::Quadratic { n } => {
                if n == 0 {
                    return Err(CliError::Usage("n must be ≥ 1".into()));
                }
                Model::Quadratic(n)
            }
        })
    }
}

impl Model {
    pub fn relation(&self, rep: Rep) -> Relation {
        match (self, rep) {
            (Model::Vdw(m), Rep::Energy) => Relation::VdwEnergy(m.energy()),
            (Model::Vdw(m), Rep::Entropy) => Relation::VdwEntropy(m.entropy()),
            (Model::Ideal(m), Rep::Energy) => Relation::IdealEnergy(m.energy()),
            (Model::Ideal(m), Rep::Entropy) => Relation::IdealEntropy(m.entropy()),
            (Model::Quadratic(n), _) => Relation::Quadratic(Quadratic { n: *n }),
        }
    }

    /// Names of the independent variables of the chosen relation.
    pub fn variables(&self, rep: Rep) -> Vec<String> {
        match (self, rep) {
            (Model::Quadratic(n), _) => (1..=*n).map(|a| format!("q{a}")).collect(),
            (_, Rep::Energy) => vec!["s".into(), "v".into()],
            (_, Rep::Entropy) => vec!["u".into(), "v".into()],
        }
    }

    /// Default sampling grid, 5 points per axis.
    pub fn default_grid(&self, rep: Rep) -> Grid {
        let axes = match (self, rep) {
            (Model::Quadratic(n), _) => vec![Axis { lo: -1.0, hi: 1.0, count: 5 }; *n],
            (Model::Ideal(_), Rep::Energy) => {
                vec![Axis { lo: -1.0, hi: 1.0, count: 5 }, Axis { lo: 0.5, hi: 2.5, count: 5 }]
            }
            (Model::Ideal(_), Rep::Entropy) => {
                vec![Axis { lo: 0.5, hi: 2.5, count: 5 }, Axis { lo: 0.5, hi: 2.5, count: 5 }]
            }
            (Model::Vdw(m), Rep::Energy) => {
                vec![Axis { lo: 0.0, hi: 2.0, count: 5 }, Axis { lo: 2.0 * m.b, hi: 6.0 * m.b, count: 5 }]
            }
            (Model::Vdw(m), Rep::Entropy) => {
                let uc = m.cv * m.critical_temperature();
                vec![Axis { lo: uc, hi: 3.0 * uc, count: 5 }, Axis { lo: 2.0 * m.b, hi: 6.0 * m.b, count: 5 }]
            }
        };
        Grid { axes }
    }
}

/// A fundamental relation chosen at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum Relation {
    Quadratic(Quadratic),
    IdealEnergy(IdealGasEnergy),
    IdealEntropy(IdealGasEntropy),
    VdwEnergy(VdwEnergy),
    VdwEntropy(VdwEntropy),
}

impl Field for Relation {
    fn eval<T: Real>(&self, x: &[T]) -> Result<T, EvalError> {
        match self {
            Relation::Quadratic(f) => f.eval(x),
            Relation::IdealEnergy(f) => f.eval(x),
            Relation::IdealEntropy(f) => f.eval(x),
            Relation::VdwEnergy(f) => f.eval(x),
            Relation::VdwEntropy(f) => f.eval(x),
        }
    }
}

impl FundamentalRelation for Relation {
    fn arity(&self) -> usize {
        match self {
            Relation::Quadratic(f) => f.arity(),
            Relation::IdealEnergy(f) => f.arity(),
            Relation::IdealEntropy(f) => f.arity(),
            Relation::VdwEnergy(f) => f.arity(),
            Relation::VdwEntropy(f) => f.arity(),
        }
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        match self {
            Relation::Quadratic(f) => f.in_domain(q),
            Relation::IdealEnergy(f) => f.in_domain(q),
            Relation::IdealEntropy(f) => f.in_domain(q),
            Relation::VdwEnergy(f) => f.in_domain(q),
            Relation::VdwEntropy(f) => f.in_domain(q),
        }
    }
}

/// `lo:hi:count` on one axis. `count = 1` samples `lo` only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.lo + k as f64 * step).collect()
    }
}

/// Cartesian grid, first axis varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    /// Parses `lo:hi:count,lo:hi:count,...`.
    pub fn parse(text: &str) -> Result<Grid, CliError> {
        let bad = |why: &str| CliError::Usage(format!("grid `{text}`: {why}"));
        let axes = text
            .split(',')
            .map(|part| {
                let fields: Vec<&str> = part.trim().split(':').collect();
                if fields.len() != 3 {
                    return Err(bad("each axis needs lo:hi:count"));
                }
                let lo: f64 = fields[0].trim().parse().map_err(|_| bad("lo is not a number"))?;
                let hi: f64 = fields[1].trim().parse().map_err(|_| bad("hi is not a number"))?;
                let count: usize = fields[2].trim().parse().map_err(|_| bad("count is not a positive integer"))?;
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(bad("bounds must be finite"));
                }
                if count == 0 {
                    return Err(bad("count must be ≥ 1"));
                }
                Ok(Axis { lo, hi, count })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Grid { axes })
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// Parses `w=…,p1=…,q1=…`; every coordinate of the `n`-chart must appear
/// exactly once.
pub fn parse_point(text: &str, n: usize) -> Result<DarbouxPoint, CliError> {
    let names = coordinate_names(n);
    let mut values: Vec<Option<f64>> = vec![None; names.len()];
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (key, value) =
            part.split_once('=').ok_or_else(|| CliError::Usage(format!("--at: expected name=value, got `{part}`")))?;
        let key = key.trim();
        let idx = names
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| CliError::Usage(format!("--at: unknown coordinate `{key}` for n = {n}")))?;
        let v: f64 =
            value.trim().parse().map_err(|_| CliError::Usage(format!("--at: `{}` is not a number", value.trim())))?;
        if values[idx].replace(v).is_some() {
            return Err(CliError::Usage(format!("--at: `{key}` given twice")));
        }
    }
    let coords = values
        .into_iter()
        .zip(&names)
        .map(|(v, name)| v.ok_or_else(|| CliError::Usage(format!("--at: missing `{name}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DarbouxPoint::from_coords(n, coords)?)
}

/// A JSON argument given inline (starting with `{`) or as a file path.
pub fn json_argument(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Usage(format!("cannot read `{arg}`: {e}")))
    }
}
