//! Run configuration: defaults, a `key = value` file, and flag overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{TetradChart, CHART_NAMES};
use crate::tolerance::{Tier, Tolerances};

/// A chart name with parameter overrides, written `NAME[:key=value...]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

impl ChartSpec {
    pub fn build(&self) -> Result<TetradChart> {
        TetradChart::by_name(&self.name, &self.params)
    }
}

impl FromStr for ChartSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default().trim().to_string();
        if name.is_empty() {
            return Err(Error::Config(format!("empty chart name in `{s}`")));
        }
        let mut params = BTreeMap::new();
        for kv in parts {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("chart parameter `{kv}` is not key=value")))?;
            params.insert(k.trim().to_string(), parse_f64(v, k)?);
        }
        Ok(Self { name, params })
    }
}

impl fmt::Display for ChartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (k, v) in &self.params {
            write!(f, ":{k}={v}")?;
        }
        Ok(())
    }
}

/// Everything a suite needs to know besides the suite itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub charts: Vec<ChartSpec>,
    pub seeds: Vec<u64>,
    pub points: usize,
    pub degree: u32,
    pub bound: f64,
    pub mass: f64,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            charts: CHART_NAMES.iter().map(|n| ChartSpec { name: n.to_string(), params: BTreeMap::new() }).collect(),
            seeds: vec![1, 2, 3],
            points: 32,
            degree: 2,
            bound: 1.0,
            mass: 1.0,
            tolerances: Tolerances::default(),
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub charts: Option<Vec<ChartSpec>>,
    pub seeds: Option<Vec<u64>>,
    pub points: Option<usize>,
    pub degree: Option<u32>,
    pub bound: Option<f64>,
    pub mass: Option<f64>,
}

fn parse_f64(v: &str, key: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| Error::Config(format!("`{key}` expects a number, got `{}`", v.trim())))
}

fn parse_int<T: FromStr>(v: &str, key: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}` expects a non-negative integer, got `{}`", v.trim())))
}

/// Comma-separated chart specifications.
pub fn parse_charts(s: &str) -> Result<Vec<ChartSpec>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Comma-separated seeds.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| parse_int(p, "seed")).collect()
}

impl RunConfig {
    /// Parses the `key = value` file format. Blank lines and lines starting
    /// with `#` are ignored. Keys: `charts`, `seeds`, `points`, `degree`,
    /// `bound`, `mass` and `tolerance.<tier>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            match k {
                "charts" => cfg.charts = parse_charts(v)?,
                "seeds" => cfg.seeds = parse_seeds(v)?,
                "points" => cfg.points = parse_int(v, k)?,
                "degree" => cfg.degree = parse_int(v, k)?,
                "bound" => cfg.bound = parse_f64(v, k)?,
                "mass" => cfg.mass = parse_f64(v, k)?,
                _ => match k.strip_prefix("tolerance.") {
                    Some(tier) => cfg.tolerances.set(tier.parse::<Tier>()?, parse_f64(v, k)?)?,
                    None => return Err(Error::Config(format!("line {}: unknown key `{k}`", n + 1))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.charts {
            self.charts = v;
        }
        if let Some(v) = o.seeds {
            self.seeds = v;
        }
        if let Some(v) = o.points {
            self.points = v;
        }
        if let Some(v) = o.degree {
            self.degree = v;
        }
        if let Some(v) = o.bound {
            self.bound = v;
        }
        if let Some(v) = o.mass {
            self.mass = v;
        }
    }

    /// Checks the numeric ranges and that every chart can be built.
    pub fn validate(&self) -> Result<()> {
        if self.points < 1 {
            return Err(Error::Config("points must be at least 1".into()));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::Config(format!("bound must be positive, got {}", self.bound)));
        }
        if self.charts.is_empty() || self.seeds.is_empty() {
            return Err(Error::Config("at least one chart and one seed are required".into()));
        }
        self.build_charts().map(|_| ())
    }

    pub fn build_charts(&self) -> Result<Vec<TetradChart>> {
        self.charts.iter().map(ChartSpec::build).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.charts.len(), 6);
        assert_eq!((c.seeds.clone(), c.points, c.degree), (vec![1, 2, 3], 32, 2));
        c.validate().unwrap();
    }

    #[test]
    fn chart_spec_round_trip() {
        let s: ChartSpec = "schwarzschild:M=2.5".parse().unwrap();
        assert_eq!(s.name, "schwarzschild");
        assert_eq!(s.params["M"], 2.5);
        assert_eq!(s.to_string(), "schwarzschild:M=2.5");
        assert!("schwarzschild:M".parse::<ChartSpec>().is_err());
        assert!(":M=1".parse::<ChartSpec>().is_err());
    }

    #[test]
    fn file_then_flags() {
        let text = "# comment\ncharts = frw_flat:H=0.25, minkowski_diag\nseeds = 7\npoints = 4\ntolerance.identity = 1e-6\n";
        let mut c = RunConfig::parse(text).unwrap();
        assert_eq!(c.charts.len(), 2);
        assert_eq!(c.tolerances.get(Tier::Identity), 1e-6);
        c.apply(Overrides { points: Some(9), ..Default::default() });
        assert_eq!((c.seeds.clone(), c.points), (vec![7], 9));
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::parse("points = -1").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("tolerance.algebra = 0").is_err());
        assert!(RunConfig::parse("no equals sign").is_err());
        let mut c = RunConfig::default();
        c.points = 0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.mass = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.charts = parse_charts("kerr").unwrap();
        assert!(matches!(c.validate(), Err(Error::UnknownChart(_))));
    }
}
