//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Keys are the parameter names listed on [`Config`]; every key is optional
//! and falls back to the default shown there. Units: eV, Å, Å⁻¹, radians.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use latscat_core::Occupancy;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Bare exciton off a vacancy in a singly occupied lattice.
    ExcitonVacancy,
    /// Lower polariton off a vacancy in a singly occupied lattice.
    PolaritonVacancy,
    /// Lower polariton off a singly occupied site in a doubly occupied lattice.
    TwoAtom,
    /// Lower polariton off an elongated singly occupied site at angle θ.
    Asymmetric,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::ExcitonVacancy => "exciton-vacancy",
            Scenario::PolaritonVacancy => "polariton-vacancy",
            Scenario::TwoAtom => "two-atom",
            Scenario::Asymmetric => "asymmetric",
        }
    }

    pub fn occupancy(&self) -> Occupancy {
        match self {
            Scenario::ExcitonVacancy | Scenario::PolaritonVacancy => Occupancy::Single,
            Scenario::TwoAtom | Scenario::Asymmetric => Occupancy::Double,
        }
    }

    pub fn is_polariton(&self) -> bool {
        !matches!(self, Scenario::ExcitonVacancy)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Scenario as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleDispersion {
    /// E₀ + Δ(qa/π)² inside the disk |q| < π/a, matching the closed forms.
    Parabolic,
    /// Nearest-neighbour tight-binding band over the full zone.
    Cosine,
}

/// Fully resolved parameters. Field names double as configuration keys,
/// except where a `rename` is given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub scenario: Scenario,
    /// Lattice constant (Å). Default 2000.
    pub a: f64,
    /// Sites per side for the lattice problems. Default 201.
    #[serde(rename = "N_side")]
    pub n_side: usize,
    /// `single` or `double`; defaults to what the scenario needs.
    #[serde(serialize_with = "ser_occupancy")]
    pub occupancy: Option<Occupancy>,
    /// Atomic transition energy (eV). Default 2.
    #[serde(rename = "E_A")]
    pub e_a: f64,
    /// Nearest-neighbour transfer, single occupancy (eV). Default −1e-7.
    #[serde(rename = "J")]
    pub j: f64,
    /// On-site transfer, double occupancy (eV). Default −1e-3.
    #[serde(rename = "J0")]
    pub j0: f64,
    /// Nearest-neighbour transfer, double occupancy (eV). Default −1e-7.
    #[serde(rename = "J1")]
    pub j1: f64,
    /// Mirror spacing (Å). When absent the cavity is placed 2·detuning above
    /// the exciton band edge.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    /// Dielectric constant. Default 1.
    pub epsilon: f64,
    /// Exciton-photon coupling ħg (eV). Default 1e-4.
    pub g: f64,
    /// Half the k = 0 photon-exciton offset δ₀ (eV). Default 0, or 0.6g for
    /// the asymmetric scenario.
    pub detuning: Option<f64>,
    /// ħJ̄ (eV). Default 1e-3 unless `mu` and `R` are given.
    #[serde(rename = "J_bar")]
    pub j_bar: Option<f64>,
    /// Dipole angle θ (rad). Default 0.
    pub theta: f64,
    /// Transition dipole (e·Å), with `R` an alternative to `J_bar`.
    pub mu: Option<f64>,
    /// Intra-site separation (Å).
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Probe wave vector (Å⁻¹). Default 1e-6.
    pub k: f64,
    /// Wave-vector grid for `dispersion` (Å⁻¹). Default 0 to 1e-4, 201 points.
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    /// Include the logarithmic term in polariton denominators. Default false.
    pub exact_denominator: bool,
    /// Wave vector for the integral checks (Å⁻¹). Default 1e-4.
    pub oracle_k: f64,
    /// kr for the oscillating-integral check. Default 50.
    pub oracle_kr: f64,
    /// Smallest lattice of the finite-lattice check; a second one three times
    /// larger follows. Default 401.
    #[serde(rename = "oracle_N_side")]
    pub oracle_n_side: usize,
    /// Requested ka of the finite-lattice check, snapped to the reciprocal
    /// grid. Default 2π·13/401.
    pub oracle_ka: f64,
    /// Default parabolic.
    pub oracle_dispersion: OracleDispersion,
    /// Defect strength S for the finite-lattice check (eV). Default E_A for
    /// single occupancy, J0 for double.
    pub strength: Option<f64>,
    /// Grid size for `wavefield`. Default 401.
    #[serde(rename = "wavefield_N_side")]
    pub wavefield_n_side: usize,
    /// Incident |k| for `wavefield` (Å⁻¹), along x. Default 5e-5.
    pub wavefield_k: f64,
    /// Amplitude override for `wavefield`; both parts default to the
    /// scenario's f when absent.
    pub f_re: Option<f64>,
    pub f_im: Option<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scenario: Scenario::PolaritonVacancy,
            a: 2000.0,
            n_side: 201,
            occupancy: None,
            e_a: 2.0,
            j: -1e-7,
            j0: -1e-3,
            j1: -1e-7,
            l: None,
            epsilon: 1.0,
            g: 1e-4,
            detuning: None,
            j_bar: None,
            theta: 0.0,
            mu: None,
            r: None,
            k: 1e-6,
            k_min: 0.0,
            k_max: 1e-4,
            k_points: 201,
            exact_denominator: false,
            oracle_k: 1e-4,
            oracle_kr: 50.0,
            oracle_n_side: 401,
            oracle_ka: 2.0 * std::f64::consts::PI * 13.0 / 401.0,
            oracle_dispersion: OracleDispersion::Parabolic,
            strength: None,
            wavefield_n_side: 401,
            wavefield_k: 5e-5,
            f_re: None,
            f_im: None,
        }
    }
}

fn ser_occupancy<S: serde::Serializer>(o: &Option<Occupancy>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match o {
        Some(Occupancy::Single) => s.serialize_some("single"),
        Some(Occupancy::Double) => s.serialize_some("double"),
        None => s.serialize_none(),
    }
}

fn parse_num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse `{v}` as a number"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("cannot parse `{v}` as a boolean")),
    }
}

fn parse_occupancy(v: &str) -> std::result::Result<Occupancy, String> {
    match v.to_ascii_lowercase().as_str() {
        "single" => Ok(Occupancy::Single),
        "double" => Ok(Occupancy::Double),
        _ => Err(format!("occupancy must be `single` or `double`, not `{v}`")),
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_named(&text, &path.display().to_string())
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_named(text, "<config>")
    }

    fn parse_named(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| CliError::ConfigLine {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(fail(format!("missing value for `{key}`")));
            }
            if seen.iter().any(|s| s == key) {
                return Err(fail(format!("duplicate key `{key}`")));
            }
            cfg.set(key, value).map_err(fail)?;
            seen.push(key.to_string());
        }
        Ok(cfg)
    }

    /// Assign one key from its textual value.
    pub fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "scenario" => self.scenario = v.parse()?,
            "a" => self.a = parse_num(v)?,
            "N_side" => self.n_side = parse_num(v)?,
            "occupancy" => self.occupancy = Some(parse_occupancy(v)?),
            "E_A" => self.e_a = parse_num(v)?,
            "J" => self.j = parse_num(v)?,
            "J0" => self.j0 = parse_num(v)?,
            "J1" => self.j1 = parse_num(v)?,
            "L" => self.l = Some(parse_num(v)?),
            "epsilon" => self.epsilon = parse_num(v)?,
            "g" => self.g = parse_num(v)?,
            "detuning" => self.detuning = Some(parse_num(v)?),
            "J_bar" => self.j_bar = Some(parse_num(v)?),
            "theta" => self.theta = parse_num(v)?,
            "mu" => self.mu = Some(parse_num(v)?),
            "R" => self.r = Some(parse_num(v)?),
            "k" => self.k = parse_num(v)?,
            "k_min" => self.k_min = parse_num(v)?,
            "k_max" => self.k_max = parse_num(v)?,
            "k_points" => self.k_points = parse_num(v)?,
            "exact_denominator" => self.exact_denominator = parse_bool(v)?,
            "oracle_k" => self.oracle_k = parse_num(v)?,
            "oracle_kr" => self.oracle_kr = parse_num(v)?,
            "oracle_N_side" => self.oracle_n_side = parse_num(v)?,
            "oracle_ka" => self.oracle_ka = parse_num(v)?,
            "oracle_dispersion" => {
                self.oracle_dispersion = match v.to_ascii_lowercase().as_str() {
                    "parabolic" => OracleDispersion::Parabolic,
                    "cosine" => OracleDispersion::Cosine,
                    _ => return Err(format!("oracle_dispersion must be `parabolic` or `cosine`, not `{v}`")),
                }
            }
            "strength" => self.strength = Some(parse_num(v)?),
            "wavefield_N_side" => self.wavefield_n_side = parse_num(v)?,
            "wavefield_k" => self.wavefield_k = parse_num(v)?,
            "f_re" => self.f_re = Some(parse_num(v)?),
            "f_im" => self.f_im = Some(parse_num(v)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Occupancy in force: the explicit key if set, else the scenario's.
    pub fn occupancy(&self) -> Occupancy {
        self.occupancy.unwrap_or(self.scenario.occupancy())
    }

    pub fn detuning(&self) -> f64 {
        self.detuning.unwrap_or(match self.scenario {
            Scenario::Asymmetric => 0.6 * self.g,
            _ => 0.0,
        })
    }

    /// J̄ from `J_bar` or from `mu` and `R`.
    pub fn j_bar(&self) -> Result<f64> {
        match (self.j_bar, self.mu, self.r) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(CliError::config("give either J_bar or mu and R, not both"))
            }
            (Some(j), None, None) => Ok(j),
            (None, Some(mu), Some(r)) => Ok(latscat_core::units::jbar_from_dipole(mu, r)?),
            (None, None, None) => Ok(1e-3),
            _ => Err(CliError::config("mu and R must be given together")),
        }
    }

    /// Resolved configuration as `(key, value)` pairs in a fixed order.
    pub fn entries(&self) -> Result<Vec<(String, String)>> {
        let v = serde_json::to_value(self)?;
        let mut out = Vec::new();
        if let serde_json::Value::Object(map) = v {
            for (k, v) in map {
                let s = match v {
                    serde_json::Value::Null => continue,
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push((k, s));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::parse("# only a comment\n\n").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.occupancy(), Occupancy::Single);
        assert_eq!(c.j_bar().unwrap(), 1e-3);
    }

    #[test]
    fn assignments_and_comments() {
        let c = Config::parse("a = 1500 # Å\nscenario=two-atom\noccupancy = double\nexact_denominator = yes\n").unwrap();
        assert_eq!(c.a, 1500.0);
        assert_eq!(c.scenario, Scenario::TwoAtom);
        assert_eq!(c.occupancy(), Occupancy::Double);
        assert!(c.exact_denominator);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Config::parse("a = 2000\n\n g = abc\n").unwrap_err();
        match &e {
            CliError::ConfigLine { line, .. } => assert_eq!(*line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(e.exit_code(), 1);
        assert!(matches!(Config::parse("nope = 1").unwrap_err(), CliError::ConfigLine { line: 1, .. }));
        assert!(matches!(Config::parse("a = 1\na = 2").unwrap_err(), CliError::ConfigLine { line: 2, .. }));
        assert!(matches!(Config::parse("a 1").unwrap_err(), CliError::ConfigLine { line: 1, .. }));
        assert!(matches!(Config::parse("a =").unwrap_err(), CliError::ConfigLine { line: 1, .. }));
    }

    #[test]
    fn dipole_alternative() {
        let c = Config::parse("mu = 1\nR = 2000").unwrap();
        let j = c.j_bar().unwrap();
        assert!(j > 0.0);
        assert!(Config::parse("mu = 1").unwrap().j_bar().is_err());
        assert!(Config::parse("mu = 1\nR = 1\nJ_bar = 1e-3").unwrap().j_bar().is_err());
    }

    #[test]
    fn entries_are_complete_and_ordered() {
        let c = Config::default();
        let e = c.entries().unwrap();
        assert_eq!(e[0], ("scenario".to_string(), "polariton-vacancy".to_string()));
        assert!(e.iter().any(|(k, _)| k == "N_side"));
        assert!(!e.iter().any(|(k, _)| k == "L"));
        // Every emitted key parses back.
        let mut text = String::new();
        for (k, v) in &e {
            text.push_str(&format!("{k} = {v}\n"));
        }
        assert_eq!(Config::parse(&text).unwrap(), c);
    }
}
