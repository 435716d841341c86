use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::stepper::{SolverConfig, StartScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Heat1d,
    Semilinear2d,
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heat1d" => Ok(ProblemKind::Heat1d),
            "semilinear2d" => Ok(ProblemKind::Semilinear2d),
            other => Err(Error::Parse(format!("unknown problem {other:?}"))),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Heat1d => "heat1d",
            ProblemKind::Semilinear2d => "semilinear2d",
        })
    }
}

/// `Csbdf2` runs on the uniform mesh, `Vsbdf2` on a graded or geometric one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Csbdf2,
    Vsbdf2,
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csbdf2" => Ok(SchemeKind::Csbdf2),
            "vsbdf2" => Ok(SchemeKind::Vsbdf2),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Csbdf2 => "CSBDF2",
            SchemeKind::Vsbdf2 => "VSBDF2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Study description. Read from flat `key = value` text; every key has a
/// CLI flag of the same name and CLI values override the file.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub problem: ProblemKind,
    /// Spatial resolution; `None` picks the problem default (100 or 32).
    pub cells: Option<usize>,
    pub b: f64,
    pub epsilon: f64,
    /// Final time; `None` picks the problem default (4 or 1).
    pub horizon: Option<f64>,
    pub scheme: SchemeKind,
    pub grading: f64,
    /// Geometric ratio for `vsbdf2`; overrides the grading when set.
    pub ratio: Option<f64>,
    pub start: StartScheme,
    pub n_list: Vec<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub solver: SolverConfig,
    /// `c1` of the certificate's step-size condition.
    pub c1: f64,
    /// Ratio grid of the stability sweep.
    pub ratios: Vec<f64>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Heat1d,
            cells: None,
            b: 2.0,
            epsilon: 0.01,
            horizon: None,
            scheme: SchemeKind::Vsbdf2,
            grading: 3.0,
            ratio: None,
            start: StartScheme::Trapezoidal,
            n_list: vec![20, 40, 80, 160, 320],
            format: OutputFormat::Markdown,
            out: None,
            solver: SolverConfig::default(),
            c1: 0.9,
            ratios: Vec::new(),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {value:?} for {key}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

impl StudyConfig {
    /// Apply one `key = value` setting. Keys are case-sensitive where the
    /// flags are (`M`, `T`, `N`); `-` and `_` are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "problem" => self.problem = value.parse()?,
            "M" => self.cells = Some(parse_num(key, value)?),
            "b" => self.b = parse_num(key, value)?,
            "epsilon" => self.epsilon = parse_num(key, value)?,
            "T" => self.horizon = Some(parse_num(key, value)?),
            "scheme" => self.scheme = value.parse()?,
            "grading" => self.grading = parse_num(key, value)?,
            "ratio" => self.ratio = Some(parse_num(key, value)?),
            "start" => self.start = value.parse()?,
            "N" => self.n_list = parse_list(key, value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "fp-tol" => self.solver.tolerance = parse_num(key, value)?,
            "fp-maxit" => self.solver.max_iterations = parse_num(key, value)?,
            "c1" => self.c1 = parse_num(key, value)?,
            "ratios" => self.ratios = parse_list(key, value)?,
            other => return Err(Error::Parse(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key, value)
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn cells(&self) -> usize {
        self.cells.unwrap_or(match self.problem {
            ProblemKind::Heat1d => 100,
            ProblemKind::Semilinear2d => 32,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(match self.problem {
            ProblemKind::Heat1d => 4.0,
            ProblemKind::Semilinear2d => 1.0,
        })
    }

    /// Scheme label such as `VSBDF2-TF`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.scheme, self.start.label())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::InvalidParameter("N list is empty".into()));
        }
        if self.n_list.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter("every N must be at least 2".into()));
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "N list must be strictly increasing".into(),
            ));
        }
        if !(self.horizon() > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {}",
                self.horizon()
            )));
        }
        if !(self.grading >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grading must be >= 1, got {}",
                self.grading
            )));
        }
        if let Some(r) = self.ratio {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "ratio must be positive, got {r}"
                )));
            }
        }
        if self.ratios.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter(
                "sweep ratios must be positive".into(),
            ));
        }
        if !(self.solver.tolerance > 0.0) || self.solver.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "fixed-point controls must be positive".into(),
            ));
        }
        Ok(())
    }
}
