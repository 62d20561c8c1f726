//! Job configuration: flags merged over an optional JSON file, plus the value parsers.

use std::path::Path;

use hogeom_core::multiplicity::Mult;
use hogeom_core::taufun::{EvalOptions, Method};
use hogeom_core::verify::SuiteConfig;
use hogeom_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    /// F_{ℓ,λ}(m; x)
    #[default]
    F,
    /// G_{ℓ,λ}(m; x)
    G,
    /// F_λ(m; x) for an arbitrary multiplicity
    Generic,
    /// G_λ(m; x) for an arbitrary multiplicity
    GenericG,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub schema_version: u32,
    pub command: String,
    pub rank: Option<usize>,
    pub m: Option<[f64; 3]>,
    pub ell: f64,
    /// Comma-separated reals or re:im pairs, or "rho".
    pub lambda: Option<String>,
    pub function: Function,
    pub x: Vec<Vec<f64>>,
    /// start:stop:count, one per axis separated by commas, or a single spec for all axes.
    pub grid: Option<String>,
    pub method: Method,
    pub max_height: Option<usize>,
    pub degree: Option<usize>,
    pub json: bool,
    pub seed: u64,
    pub tolerance: Option<f64>,
    /// Sweep parameter: "ell" or "lambda.K" (1-based real part).
    pub param: Option<String>,
    pub range: Option<String>,
    pub suite: Option<String>,
    pub suite_config: Option<SuiteConfig>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            schema_version: SCHEMA_VERSION,
            command: String::new(),
            rank: None,
            m: None,
            ell: 0.0,
            lambda: None,
            function: Function::F,
            x: Vec::new(),
            grid: None,
            method: Method::Auto,
            max_height: None,
            degree: None,
            json: false,
            seed: 0,
            tolerance: None,
            param: None,
            range: None,
            suite: None,
            suite_config: None,
        }
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let cfg: JobConfig =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn mult(&self) -> Result<Mult, CliError> {
        let [s, m, l] = self.m.ok_or_else(|| CliError::config("missing --m"))?;
        Ok(Mult::new(s, m, l))
    }

    pub fn options(&self) -> EvalOptions {
        EvalOptions { method: self.method, max_height: self.max_height, degree: self.degree, ..EvalOptions::default() }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let mut cfg = self.suite_config.clone().unwrap_or_default();
        cfg.seed = self.seed;
        if let Some(t) = self.tolerance {
            cfg.slack = t;
        }
        if self.max_height.is_some() {
            cfg.options.max_height = self.max_height;
        }
        if self.degree.is_some() {
            cfg.options.degree = self.degree;
        }
        cfg
    }

    /// Rank from --rank, else from the λ or x dimension, else the grid axis count.
    pub fn rank(&self) -> Result<usize, CliError> {
        if let Some(r) = self.rank {
            if r == 0 {
                return Err(CliError::config("rank must be positive"));
            }
            return Ok(r);
        }
        if let Some(l) = &self.lambda {
            if l.trim() != "rho" {
                return Ok(parse_lambda(l)?.len());
            }
        }
        if let Some(x) = self.x.first() {
            return Ok(x.len());
        }
        Ok(self.grid.as_deref().map_or(1, |g| g.split(',').count()))
    }

    /// λ, resolving "rho" against the given ρ.
    pub fn lambda(&self, rank: usize, rho: &[f64]) -> Result<Vec<C64>, CliError> {
        let text = self.lambda.as_deref().ok_or_else(|| CliError::config("missing --lambda"))?;
        let lam =
            if text.trim() == "rho" { rho.iter().map(|&v| C64::new(v, 0.0)).collect() } else { parse_lambda(text)? };
        if lam.len() != rank {
            return Err(CliError::config(format!("lambda has {} coordinates, rank is {rank}", lam.len())));
        }
        Ok(lam)
    }

    /// Points from --x, then --grid.
    pub fn points(&self, rank: usize) -> Result<Vec<Vec<f64>>, CliError> {
        let mut pts = self.x.clone();
        if let Some(g) = &self.grid {
            pts.extend(parse_grid(g, rank)?);
        }
        if pts.is_empty() {
            return Err(CliError::config("no evaluation points; pass --x or --grid"));
        }
        if let Some(p) = pts.iter().find(|p| p.len() != rank) {
            return Err(CliError::config(format!("point {p:?} does not have {rank} coordinates")));
        }
        Ok(pts)
    }
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::config(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(CliError::config(format!("not finite: {s:?}")));
    }
    Ok(v)
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_f64).collect()
}

pub fn parse_mult(s: &str) -> Result<[f64; 3], CliError> {
    let v = parse_reals(s)?;
    <[f64; 3]>::try_from(v).map_err(|_| CliError::config(format!("--m expects three values s,m,l, got {s:?}")))
}

pub fn parse_lambda(s: &str) -> Result<Vec<C64>, CliError> {
    s.split(',')
        .map(|c| match c.split_once(':') {
            Some((re, im)) => Ok(C64::new(parse_f64(re)?, parse_f64(im)?)),
            None => Ok(C64::new(parse_f64(c)?, 0.0)),
        })
        .collect()
}

/// start:stop:count, inclusive of both ends.
pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(CliError::config(format!("range {s:?} is not start:stop:count")));
    };
    let (a, b) = (parse_f64(a)?, parse_f64(b)?);
    let n: usize = n.trim().parse().map_err(|_| CliError::config(format!("bad count in {s:?}")))?;
    match n {
        0 => Err(CliError::config(format!("empty range {s:?}"))),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
    }
}

/// Cartesian product of per-axis ranges; a single range applies to every axis.
pub fn parse_grid(s: &str, rank: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut axes: Vec<Vec<f64>> = s.split(',').map(parse_range).collect::<Result<_, _>>()?;
    if axes.len() == 1 {
        axes = vec![axes[0].clone(); rank];
    }
    if axes.len() != rank {
        return Err(CliError::config(format!("grid has {} axes, rank is {rank}", axes.len())));
    }
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        out = out.iter().flat_map(|p| axis.iter().map(move |&v| [p.as_slice(), &[v]].concat())).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_forms() {
        assert_eq!(parse_lambda("1.5,-2").unwrap(), vec![C64::new(1.5, 0.0), C64::new(-2.0, 0.0)]);
        assert_eq!(parse_lambda("0.5:1.2").unwrap(), vec![C64::new(0.5, 1.2)]);
        assert!(parse_lambda("a").is_err());
    }

    #[test]
    fn mult_needs_three() {
        assert_eq!(parse_mult("2,1,1").unwrap(), [2.0, 1.0, 1.0]);
        assert!(parse_mult("2,1").is_err());
        assert!(parse_mult("2,1,x").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid("0:1:2", 2).unwrap();
        assert_eq!(g, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(parse_grid("0:1:2,5:5:1", 2).unwrap().len(), 2);
        assert!(parse_grid("0:1:2,0:1:2", 3).is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = JobConfig {
            command: "eval".into(),
            m: Some([2.0, 1.0, 1.0]),
            lambda: Some("rho".into()),
            ..JobConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<JobConfig>(&text).unwrap(), cfg);
    }
}
