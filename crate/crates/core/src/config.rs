//! Run configuration: a TOML document with `[lattice]`, `[coin1]`, `[coin2]`,
//! `[game]` and `[output]` sections.
//!
//! ```toml
//! [lattice]
//! dim = 1
//! side = 10
//!
//! [coin1]
//! alpha = "pi/3"
//! beta = "pi/3"
//! theta = "pi/4"
//!
//! [coin2]
//! alpha = 1.0471975511965976
//! beta = "pi/3"
//! theta = "23pi/12"
//!
//! [game]
//! n1 = 1
//! n2 = 1
//! horizon = 1000
//! marked = [0]
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Angles are either plain radians or expressions `[k][*]pi[/n]` (`π` also
//! accepted), e.g. `"pi/3"`, `"-pi/4"`, `"23pi/12"`, `"0.5*pi"`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::CoinParams;
use crate::scan::{SweepSpec, TheoremOptions};
use crate::state::{LatticeSpec, MarkedSet, Measure};

/// Parses a radian value or a `[k][*]pi[/n]` expression.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = |msg: &str| Error::config("angle", format!("{msg}: {text:?}"));
    let s = text.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim_start()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim_start()),
    };
    let lower = body.to_ascii_lowercase();
    let pi_at = lower
        .find("pi")
        .map(|i| (i, 2))
        .or_else(|| lower.find('π').map(|i| (i, 'π'.len_utf8())));

    let value = match pi_at {
        None => parse_number(body).ok_or_else(|| bad("not a number"))?,
        Some((at, len)) => {
            let coef = lower[..at].trim_end();
            let coef = coef.strip_suffix('*').unwrap_or(coef).trim();
            let coef = if coef.is_empty() {
                1.0
            } else {
                parse_number(coef).ok_or_else(|| bad("bad coefficient"))?
            };
            let rest = lower[at + len..].trim();
            let den = if rest.is_empty() {
                1.0
            } else {
                let d = rest
                    .strip_prefix('/')
                    .ok_or_else(|| bad("expected `/` after pi"))?;
                parse_number(d.trim()).ok_or_else(|| bad("bad denominator"))?
            };
            if den == 0.0 {
                return Err(bad("zero denominator"));
            }
            coef * PI / den
        }
    };
    let value = sign * value;
    if !value.is_finite() {
        return Err(bad("not finite"));
    }
    Ok(value)
}

/// Finite decimal numbers only; `inf`, `nan` and signs are rejected here.
fn parse_number(s: &str) -> Option<f64> {
    if s.is_empty()
        || !s
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'-' | b'+'))
    {
        return None;
    }
    if !s.as_bytes()[0].is_ascii_digit() && s.as_bytes()[0] != b'.' {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// An angle as written in the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Expr(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Radians(x) if x.is_finite() => Ok(*x),
            Angle::Radians(x) => Err(Error::config("angle", format!("not finite: {x}"))),
            Angle::Expr(s) => parse_angle(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub dim: usize,
    pub side: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinSection {
    pub alpha: Angle,
    pub beta: Angle,
    pub theta: Angle,
}

impl CoinSection {
    fn resolve(&self, name: &str) -> Result<CoinParams> {
        let get = |a: &Angle, field: &str| {
            a.radians().map_err(|e| match e {
                Error::Config { msg, .. } => Error::config(format!("{name}.{field}"), msg),
                other => other,
            })
        };
        Ok(CoinParams::new(
            get(&self.alpha, "alpha")?,
            get(&self.beta, "beta")?,
            get(&self.theta, "theta")?,
        ))
    }
}

fn default_guard() -> f64 {
    1e-9
}
fn default_resolution() -> usize {
    360
}
fn default_margin() -> f64 {
    1e-4
}
fn default_verify_horizon() -> usize {
    500
}
fn default_random_states() -> usize {
    20
}
fn default_threshold() -> f64 {
    1e-10
}
fn default_parity_threshold() -> f64 {
    1e-12
}
fn default_parity_horizon() -> usize {
    20
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub n1: usize,
    pub n2: usize,
    /// `T`, in blocks.
    pub horizon: usize,
    /// Marked positions, applied on every axis.
    pub marked: Vec<usize>,
    /// Coin components counted over a marked vertex.
    #[serde(default)]
    pub measure: Measure,
    /// Classification guard for `simulate`.
    #[serde(default = "default_guard")]
    pub guard: f64,
    /// Classification guard for `sweep`; strict inequalities by default.
    #[serde(default)]
    pub sweep_guard: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_margin")]
    pub symmetry_margin: f64,
    #[serde(default = "default_verify_horizon")]
    pub verify_horizon: usize,
    #[serde(default = "default_random_states")]
    pub random_states: usize,
    /// Largest accepted theorem difference for `verify`.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_parity_threshold")]
    pub parity_threshold: f64,
    #[serde(default = "default_parity_horizon")]
    pub parity_horizon: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Tsv,
}

impl OutputFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            OutputFormat::Csv => b',',
            OutputFormat::Tsv => b'\t',
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Tsv => "tsv",
        }
    }
}

fn default_dir() -> String {
    "out".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeSection,
    pub coin1: CoinSection,
    pub coin2: CoinSection,
    pub game: GameSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    /// Parses and validates a config document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .and_then(|sp| text.get(..sp.start))
                .map(|prefix| format!("line {}", prefix.matches('\n').count() + 1))
                .unwrap_or_else(|| "document".into());
            Error::config(field, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        LatticeSpec::new(self.lattice.dim, self.lattice.side).map_err(|e| match e {
            Error::InvalidLattice(msg) => Error::config("lattice", msg),
            other => other,
        })?;
        self.coin1.resolve("coin1")?;
        self.coin2.resolve("coin2")?;
        let g = &self.game;
        if g.marked.is_empty() {
            return Err(Error::config(
                "game.marked",
                "at least one position must be marked",
            ));
        }
        if let Some(&j) = g.marked.iter().find(|&&j| j >= self.lattice.side) {
            return Err(Error::config(
                "game.marked",
                format!("position {j} is out of range for side {}", self.lattice.side),
            ));
        }
        let mut sorted = g.marked.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("game.marked", "duplicate position"));
        }
        if g.n1 + g.n2 == 0 {
            return Err(Error::config("game.n1", "n1 + n2 must be at least 1"));
        }
        if g.horizon == 0 {
            return Err(Error::config("game.horizon", "must be at least 1"));
        }
        if g.resolution < 2 {
            return Err(Error::config(
                "game.resolution",
                format!("need at least 2 grid points, got {}", g.resolution),
            ));
        }
        for (name, v) in [
            ("game.guard", g.guard),
            ("game.sweep_guard", g.sweep_guard),
            ("game.symmetry_margin", g.symmetry_margin),
            ("game.threshold", g.threshold),
            ("game.parity_threshold", g.parity_threshold),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(
                    name,
                    format!("must be a finite non-negative number, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.lattice.dim, self.lattice.side)
    }

    pub fn coin1(&self) -> Result<CoinParams> {
        self.coin1.resolve("coin1")
    }

    pub fn coin2(&self) -> Result<CoinParams> {
        self.coin2.resolve("coin2")
    }

    pub fn marked_set(&self) -> Result<MarkedSet> {
        Ok(MarkedSet::product(&self.lattice()?, &self.game.marked)?.with_measure(self.game.measure))
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        Ok(SweepSpec {
            lattice: self.lattice()?,
            axis_marks: self.game.marked.clone(),
            coin1: self.coin1()?,
            coin2_base: self.coin2()?,
            schedule: (self.game.n1, self.game.n2),
            horizon: self.game.horizon,
            resolution: self.game.resolution,
            guard: self.game.sweep_guard,
            measure: self.game.measure,
        })
    }

    pub fn theorem_options(&self) -> TheoremOptions {
        TheoremOptions {
            random_states: self.game.random_states,
            seed: self.game.seed,
        }
    }
}
