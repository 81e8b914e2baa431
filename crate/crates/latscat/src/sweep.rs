//! `var=start:stop:points[:log]` sweep specifications.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variable {
    /// Wave vector (Å⁻¹).
    #[serde(rename = "k")]
    K,
    /// δ₀ (eV).
    #[serde(rename = "detuning")]
    Detuning,
    /// θ (rad).
    #[serde(rename = "theta")]
    Theta,
    /// θ in degrees, converted to radians on use.
    #[serde(rename = "theta_deg")]
    ThetaDeg,
    /// ħJ̄ (eV).
    #[serde(rename = "J_bar")]
    JBar,
    /// Lattice size; values are rounded to the nearest odd integer.
    #[serde(rename = "N_side")]
    NSide,
}

impl Variable {
    pub fn name(&self) -> &'static str {
        match self {
            Variable::K => "k",
            Variable::Detuning => "detuning",
            Variable::Theta => "theta",
            Variable::ThetaDeg => "theta_deg",
            Variable::JBar => "J_bar",
            Variable::NSide => "N_side",
        }
    }

    /// Copy of `cfg` with this variable set to `x`.
    pub fn apply(&self, cfg: &Config, x: f64) -> Config {
        let mut c = cfg.clone();
        match self {
            Variable::K => c.k = x,
            Variable::Detuning => c.detuning = Some(x),
            Variable::Theta => c.theta = x,
            Variable::ThetaDeg => c.theta = x.to_radians(),
            Variable::JBar => {
                c.j_bar = Some(x);
                c.mu = None;
                c.r = None;
            }
            Variable::NSide => c.n_side = odd_size(x),
        }
        c
    }
}

/// Nearest odd integer ≥ 5.
pub fn odd_size(x: f64) -> usize {
    let n = x.round().max(5.0) as usize;
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

impl FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "k" => Variable::K,
            "detuning" => Variable::Detuning,
            "theta" => Variable::Theta,
            "theta_deg" => Variable::ThetaDeg,
            "J_bar" | "jbar" => Variable::JBar,
            "N_side" | "n_side" => Variable::NSide,
            _ => return Err(format!("unknown sweep variable `{s}` (k, detuning, theta, theta_deg, J_bar, N_side)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn new(variable: Variable, start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Self, String> {
        if points < 2 {
            return Err(format!("sweep needs at least 2 points, got {points}"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if !(start < stop) {
            return Err(format!("sweep start {start} must be below stop {stop}"));
        }
        if spacing == Spacing::Log && !(start > 0.0) {
            return Err(format!("log spacing needs start > 0, got {start}"));
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
            spacing,
        })
    }

    /// Grid values; both end points are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (var, range) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep `{s}` is not of the form var=start:stop:points[:log]"))?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("sweep `{s}` is not of the form var=start:stop:points[:log]"));
        }
        let num = |p: &str| p.parse::<f64>().map_err(|_| format!("cannot parse `{p}` in sweep `{s}`"));
        let points = parts[2]
            .parse::<usize>()
            .map_err(|_| format!("point count `{}` in sweep `{s}` is not an integer", parts[2]))?;
        let spacing = match parts.get(3).copied() {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(o) => return Err(format!("unknown spacing `{o}` (lin or log)")),
        };
        Self::new(var.trim().parse()?, num(parts[0])?, num(parts[1])?, points, spacing)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}:{}:{}", self.variable.name(), self.start, self.stop, self.points)?;
        if self.spacing == Spacing::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}
