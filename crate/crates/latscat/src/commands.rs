//! The four subcommands. Each returns its files in memory; the binary writes
//! them out.

use std::f64::consts::PI;
use std::time::Instant;

use latscat_core::exec::Executor;
use latscat_core::oracle::integrals::{i_os_quadrature, i_st_polariton_model, i_st_quadrature, EtaSchedule};
use latscat_core::oracle::lattice::{extract_amplitude, FiniteLatticeProblem, LatticeDispersion, LATTICE_ETA_LEVELS};
use latscat_core::polariton::branches;
use latscat_core::scattering::{oscillating_integral_far_field, static_integral, POLE_TOLERANCE_EV};
use latscat_core::wavefield::{evaluate_field, ring_profile};
use latscat_core::{BandModel, CavityParams, Complex64, LatticeParams, Occupancy};
use serde::Serialize;
use serde_json::json;

use crate::config::{Config, OracleDispersion};
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};
use crate::scenario::{denominator_mode, lattice_band, Model, Point};
use crate::sweep::{odd_size, SweepSpec, Variable};

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn csv(name: &str, t: &Table) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            bytes: t.to_csv()?,
        })
    }

    fn json(name: &str, v: &serde_json::Value) -> Result<Self> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        Ok(Self {
            name: name.to_string(),
            bytes: s.into_bytes(),
        })
    }
}

fn header(t: &mut Table, command: &str, cfg: &Config, sweep: Option<&SweepSpec>) -> Result<()> {
    t.meta("generator", concat!("latscat ", env!("CARGO_PKG_VERSION")));
    t.meta("command", command);
    if let Some(s) = sweep {
        t.meta("sweep", s);
    }
    for (k, v) in cfg.entries()? {
        t.meta(format!("config.{k}"), v);
    }
    Ok(())
}

fn derived_meta(t: &mut Table, derived: &[(&'static str, f64)]) {
    for (k, v) in derived {
        t.meta(format!("derived.{k}"), crate::output::fmt_f64(*v));
    }
}

fn derived_json(derived: &[(&'static str, f64)]) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (k, v) in derived {
        m.insert(k.to_string(), json!(v));
    }
    serde_json::Value::Object(m)
}

fn collect<T>(items: Vec<Result<T>>) -> Result<Vec<T>> {
    items.into_iter().collect()
}

/// Band and cavity for `dispersion`: the scenario's lower-branch setup when it
/// has one, otherwise the configured band with a cavity placed as for the
/// polariton scenarios.
fn band_and_cavity(cfg: &Config) -> Result<(BandModel, CavityParams)> {
    if cfg.scenario.is_polariton() {
        let b = Model::build(cfg)?
            .branch()?
            .ok_or_else(|| CliError::Internal("polariton scenario without branch".into()))?;
        return Ok((b.exciton, b.cavity));
    }
    let (_, band) = lattice_band(cfg)?;
    let c = match cfg.l {
        Some(l) => CavityParams::new(l, cfg.epsilon, cfg.g)?,
        None => CavityParams::resonant_with(band.e0 + 2.0 * cfg.detuning(), cfg.epsilon, cfg.g)?,
    };
    Ok((band, c))
}

/// Both polariton branches, Hopfield weights and detuning over a k grid.
pub fn dispersion<E: Executor>(cfg: &Config, sweep: Option<&SweepSpec>, exec: &E) -> Result<Vec<Artifact>> {
    let ks = match sweep {
        Some(s) if s.variable == Variable::K => s.values(),
        Some(s) => return Err(CliError::config(format!("dispersion sweeps k only, not {}", s.variable.name()))),
        None => SweepSpec::new(Variable::K, cfg.k_min, cfg.k_max, cfg.k_points, crate::sweep::Spacing::Linear)
            .map_err(CliError::Config)?
            .values(),
    };
    let (band, cav) = band_and_cavity(cfg)?;
    let pts = collect(exec.map_indexed(ks.len(), |i| Ok(branches(&cav, &band, ks[i])?)))?;
    let mut t = Table::new(&[
        "k",
        "omega_cav",
        "omega_ex",
        "omega_plus",
        "omega_minus",
        "x_minus_sq",
        "y_minus_sq",
        "detuning",
    ]);
    header(&mut t, "dispersion", cfg, sweep)?;
    let gap = pts
        .iter()
        .map(|p| p.omega_plus - p.omega_minus)
        .fold(f64::INFINITY, f64::min);
    let derived = vec![
        ("E0_eV", band.e0),
        ("Delta_eV", band.delta),
        ("L_angstrom", cav.l),
        ("cavity_cutoff_eV", cav.cutoff_energy()),
        ("min_splitting_eV", gap),
    ];
    derived_meta(&mut t, &derived);
    for p in &pts {
        t.push(vec![
            p.k.into(),
            p.omega_cav.into(),
            p.omega_ex.into(),
            p.omega_plus.into(),
            p.omega_minus.into(),
            p.weights.x_minus_sq().into(),
            p.weights.y_minus_sq().into(),
            p.detuning.into(),
        ]);
    }
    let side = json!({
        "command": "dispersion",
        "config": cfg,
        "sweep": sweep,
        "derived": derived_json(&derived),
        "columns": t.columns,
        "rows": t.rows.len(),
    });
    Ok(vec![Artifact::csv("dispersion.csv", &t)?, Artifact::json("dispersion.json", &side)?])
}

fn check_variable(cfg: &Config, v: Variable) -> Result<()> {
    let asym = cfg.scenario == crate::config::Scenario::Asymmetric;
    match v {
        Variable::K => Ok(()),
        Variable::Detuning if !cfg.scenario.is_polariton() => {
            Err(CliError::config(format!("scenario {} has no cavity to detune", cfg.scenario)))
        }
        Variable::Detuning if cfg.l.is_some() => Err(CliError::config("a detuning sweep needs L unset")),
        Variable::Detuning => Ok(()),
        Variable::Theta | Variable::ThetaDeg | Variable::JBar if !asym => Err(CliError::config(format!(
            "{} sweeps need scenario asymmetric, not {}",
            v.name(),
            cfg.scenario
        ))),
        Variable::Theta | Variable::ThetaDeg | Variable::JBar => Ok(()),
        Variable::NSide => Err(CliError::config("N_side sweeps apply to the oracle command")),
    }
}

/// A pole located between two sweep points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPole {
    pub x: f64,
    pub bracket: (f64, f64),
    pub denominator_ev: f64,
    /// True when a grid point itself is the pole.
    pub on_grid: bool,
}

fn evaluate_at(cfg: &Config, v: Variable, x: f64) -> Result<(Point, Option<f64>)> {
    let c = v.apply(cfg, x);
    let m = Model::build(&c)?;
    let mode = denominator_mode(&c);
    Ok((m.evaluate(c.k, mode)?, m.denominator_energy(c.k, mode)?))
}

fn bisect_pole(cfg: &Config, v: Variable, lo: f64, hi: f64, dlo: f64) -> Result<(f64, f64)> {
    let den = |x: f64| -> Result<f64> {
        evaluate_at(cfg, v, x)?
            .1
            .ok_or_else(|| CliError::Internal("denominator vanished mid-sweep".into()))
    };
    let (mut lo, mut hi, mut dlo) = (lo, hi, dlo);
    let mut mid = 0.5 * (lo + hi);
    let mut dm = den(mid)?;
    for _ in 0..200 {
        if dm.abs() < POLE_TOLERANCE_EV * 1e-3 || mid <= lo || mid >= hi {
            break;
        }
        if dm.signum() == dlo.signum() {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        dm = den(mid)?;
    }
    Ok((mid, dm))
}

/// Amplitude over a one-parameter sweep, with poles emitted as flagged rows.
pub fn scatter<E: Executor>(cfg: &Config, sweep: &SweepSpec, exec: &E) -> Result<Vec<Artifact>> {
    check_variable(cfg, sweep.variable)?;
    let v = sweep.variable;
    let xs = sweep.values();
    let pts = collect(exec.map_indexed(xs.len(), |i| evaluate_at(cfg, v, xs[i])))?;

    let is_pole = |i: usize| matches!(pts[i].0, Point::Pole { .. });
    let brackets: Vec<usize> = (1..xs.len())
        .filter(|&i| match (pts[i - 1].1, pts[i].1) {
            (Some(a), Some(b)) => !is_pole(i - 1) && !is_pole(i) && a.signum() != b.signum(),
            _ => false,
        })
        .collect();
    let found = collect(exec.map_indexed(brackets.len(), |j| {
        let i = brackets[j];
        bisect_pole(cfg, v, xs[i - 1], xs[i], pts[i - 1].1.unwrap_or(0.0))
    }))?;
    let mut poles: Vec<SweepPole> = brackets
        .iter()
        .zip(&found)
        .map(|(&i, &(x, d))| SweepPole {
            x,
            bracket: (xs[i - 1], xs[i]),
            denominator_ev: d,
            on_grid: false,
        })
        .collect();
    for (i, (p, _)) in pts.iter().enumerate() {
        if let Point::Pole { denominator_energy } = p {
            poles.push(SweepPole {
                x: xs[i],
                bracket: (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]),
                denominator_ev: denominator_energy.re,
                on_grid: true,
            });
        }
    }
    poles.sort_by(|a, b| a.x.total_cmp(&b.x));

    let mut t = Table::new(&[
        v.name(),
        "re_f",
        "im_f",
        "abs_f",
        "sigma",
        "potential_class",
        "effective_height_eV",
        "denominator_eV",
    ]);
    header(&mut t, "scatter", cfg, Some(sweep))?;
    let derived = Model::build(cfg)?.derived(cfg.k)?;
    derived_meta(&mut t, &derived);
    t.meta("poles", poles.len());

    let pole_row = |x: f64, d: f64| -> Vec<Cell> {
        vec![
            x.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            f64::INFINITY.into(),
            f64::INFINITY.into(),
            "pole".into(),
            f64::NAN.into(),
            d.into(),
        ]
    };
    let mut off_grid = poles.iter().filter(|p| !p.on_grid).peekable();
    for (i, (p, den)) in pts.iter().enumerate() {
        while let Some(q) = off_grid.next_if(|q| q.x < xs[i]) {
            t.push(pole_row(q.x, q.denominator_ev));
        }
        match p {
            Point::Finite(r) => t.push(vec![
                xs[i].into(),
                r.f.re.into(),
                r.f.im.into(),
                r.f.norm().into(),
                r.sigma.into(),
                r.potential_class.as_str().into(),
                r.effective_height.into(),
                den.unwrap_or(f64::NAN).into(),
            ]),
            Point::Pole { denominator_energy } => t.push(pole_row(xs[i], denominator_energy.re)),
        }
    }
    for q in off_grid {
        t.push(pole_row(q.x, q.denominator_ev));
    }
    let side = json!({
        "command": "scatter",
        "config": cfg,
        "sweep": sweep,
        "derived": derived_json(&derived),
        "columns": t.columns,
        "rows": t.rows.len(),
        "poles": poles,
    });
    Ok(vec![Artifact::csv("scatter.csv", &t)?, Artifact::json("scatter.json", &side)?])
}

/// One pass/fail line of the oracle verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn below(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            pass: value < tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `Err` naming the failed checks, for the exit code.
    pub fn verdict(&self) -> Result<()> {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::ChecksFailed {
                failed: failed.len(),
                total: self.checks.len(),
                names: failed.join(", "),
            })
        }
    }
}

fn rel_err(x: Complex64, reference: Complex64) -> f64 {
    let d = (x - reference).norm();
    if reference.norm() > 0.0 {
        d / reference.norm()
    } else {
        d
    }
}

/// Row layout of the convergence table.
#[allow(clippy::too_many_arguments)]
fn oracle_row(check: &str, n: Option<usize>, ka: f64, eta: f64, x: Complex64, reference: Complex64, ms: f64) -> Vec<Cell> {
    vec![
        check.into(),
        n.map(Cell::from).unwrap_or(Cell::Text(String::new())),
        ka.into(),
        eta.into(),
        x.re.into(),
        x.im.into(),
        (x - reference).norm().into(),
        rel_err(x, reference).into(),
        ms.into(),
    ]
}

fn millis(t: Instant) -> f64 {
    // Whole microseconds keep the column short.
    (t.elapsed().as_micros() as f64) / 1e3
}

/// Finite-lattice sizes: an `N_side` sweep if given, else N and 3N.
pub fn oracle_sizes(cfg: &Config, sweep: Option<&SweepSpec>) -> Result<Vec<usize>> {
    match sweep {
        Some(s) if s.variable == Variable::NSide => {
            let mut v: Vec<usize> = s.values().into_iter().map(odd_size).collect();
            v.dedup();
            Ok(v)
        }
        Some(s) => Err(CliError::config(format!("oracle sweeps N_side only, not {}", s.variable.name()))),
        None => {
            let n = odd_size(cfg.oracle_n_side as f64);
            Ok(vec![n, 3 * n])
        }
    }
}

/// Quadrature checks of the static and oscillating integrals, the two-part
/// polariton static sum, and the finite-lattice amplitude across sizes.
pub fn oracle<E: Executor>(cfg: &Config, sweep: Option<&SweepSpec>, exec: &E) -> Result<OracleReport> {
    let sizes = oracle_sizes(cfg, sweep)?;
    let (_, band) = lattice_band(cfg)?;
    let schedule = EtaSchedule::default();
    let mut t = Table::new(&["check", "N_side", "ka", "eta", "re", "im", "abs_err", "rel_err", "wall_time_ms"]);
    header(&mut t, "oracle", cfg, sweep)?;
    let mut checks = Vec::new();

    let k = cfg.oracle_k;
    let r = cfg.oracle_kr / k;
    let t0 = Instant::now();
    let q = i_os_quadrature(k, r, &band, &schedule)?;
    let closed = oscillating_integral_far_field(k, r, &band);
    t.push(oracle_row("i_os", None, k * band.a, q.eta, q.value, closed, millis(t0)));
    checks.push(Check::below(
        "i_os",
        rel_err(q.value, closed),
        1e-2,
        format!("kr = {}, quadrature error estimate {:e}", cfg.oracle_kr, q.estimated_error),
    ));

    let t0 = Instant::now();
    let q = i_st_quadrature(k, &band, &schedule, 1.0)?;
    let closed = static_integral(k, &band);
    t.push(oracle_row("i_st", None, k * band.a, q.eta, q.value, closed, millis(t0)));
    checks.push(Check::below(
        "i_st",
        rel_err(q.value, closed),
        5e-3,
        format!("ka = {:e}, quadrature error estimate {:e}", k * band.a, q.estimated_error),
    ));

    if cfg.scenario.is_polariton() {
        let m = Model::build(cfg)?;
        if let Some(lp) = m.branch()? {
            let t0 = Instant::now();
            let parts = i_st_polariton_model(cfg.k, &lp, &schedule)?;
            t.push(oracle_row(
                "i_st_two_part",
                None,
                cfg.k * band.a,
                parts.total.eta,
                parts.total.value,
                parts.closed_form,
                millis(t0),
            ));
            checks.push(Check::below(
                "i_st_two_part",
                rel_err(parts.total.value, parts.closed_form),
                5e-3,
                format!("k = {:e}, k0 = {:e}", cfg.k, lp.k0),
            ));
            checks.push(Check::below(
                "ln_term_small",
                (parts.ln_term / parts.flat_closed_form).abs(),
                1e-2,
                format!("ln term {:e} vs pi/(4 Lambda) = {:e}", parts.ln_term, parts.flat_closed_form),
            ));
        }
    }

    let strength = cfg.strength.unwrap_or(match cfg.occupancy() {
        Occupancy::Single => cfg.e_a,
        Occupancy::Double => cfg.j0,
    });
    let dispersion = match cfg.oracle_dispersion {
        OracleDispersion::Parabolic => LatticeDispersion::Parabolic,
        OracleDispersion::Cosine => LatticeDispersion::Cosine,
    };
    let mut errs: Vec<f64> = Vec::new();
    let mut trend = Vec::new();
    for &n in &sizes {
        let m = ((cfg.oracle_ka * n as f64 / (2.0 * PI)).round() as usize).max(1);
        let p = FiniteLatticeProblem::along_x(n, m, band, dispersion, strength, 1.0);
        let kk = p.k[0];
        let analytic = PI * strength / (2.0 * band.delta) / (1.0 - strength * static_integral(kk, &band));
        let t0 = Instant::now();
        match extract_amplitude(&p, &LATTICE_ETA_LEVELS, exec) {
            Ok(x) => {
                let ms = millis(t0);
                for &(eta, f, _) in &x.levels {
                    t.push(oracle_row("finite_lattice", Some(n), kk * band.a, eta, f, analytic, ms));
                }
                t.push(oracle_row("finite_lattice", Some(n), kk * band.a, 0.0, x.f, analytic, ms));
                errs.push(rel_err(x.f, analytic));
                trend.push(format!("N={n} ka={:.4} err={:.3e}", kk * band.a, rel_err(x.f, analytic)));
            }
            Err(e) if e.is_numerical() || matches!(e, latscat_core::Error::OffGrid { .. }) => {
                let nan = Complex64::new(f64::NAN, f64::NAN);
                t.push(oracle_row("finite_lattice", Some(n), kk * band.a, f64::NAN, nan, analytic, millis(t0)));
                errs.push(f64::INFINITY);
                trend.push(format!("N={n}: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let trivial = |e: f64| e < 1e-12;
    checks.push(Check::below("finite_lattice", errs[0], 2e-2, trend.join("; ")));
    let decreasing = errs.windows(2).all(|w| w[1] < w[0] || (trivial(w[0]) && trivial(w[1])));
    checks.push(Check {
        name: "finite_lattice_convergence".into(),
        value: *errs.last().unwrap_or(&f64::NAN),
        tolerance: errs[0],
        pass: decreasing && errs.iter().all(|e| e.is_finite()),
        detail: trend.join("; "),
    });

    for c in &checks {
        t.meta(format!("check.{}", c.name), if c.pass { "pass" } else { "fail" });
    }
    let side = json!({
        "command": "oracle",
        "config": cfg,
        "sizes": sizes,
        "all_pass": checks.iter().all(|c| c.pass),
        "checks": checks,
    });
    Ok(OracleReport {
        artifacts: vec![
            Artifact::csv("oracle_convergence.csv", &t)?,
            Artifact::json("oracle_verdict.json", &side)?,
        ],
        checks,
    })
}

/// Sampled wavefunction and its momentum-space ring.
pub fn wavefield<E: Executor>(cfg: &Config, f_zero: bool, exec: &E) -> Result<Vec<Artifact>> {
    let k = cfg.wavefield_k;
    let (f, weight, source) = if f_zero {
        (Complex64::new(0.0, 0.0), 1.0, "override")
    } else if cfg.f_re.is_some() || cfg.f_im.is_some() {
        (Complex64::new(cfg.f_re.unwrap_or(0.0), cfg.f_im.unwrap_or(0.0)), 1.0, "override")
    } else {
        let m = Model::build(cfg)?;
        match m.evaluate(k, denominator_mode(cfg))? {
            Point::Finite(r) => (r.f, m.hopfield_x(k)?, "scenario"),
            Point::Pole { denominator_energy } => {
                return Err(latscat_core::Error::SingularDenominator {
                    lambda: denominator_energy.norm(),
                }
                .into())
            }
        }
    };
    let lat = LatticeParams::new(cfg.a, cfg.wavefield_n_side, cfg.occupancy())?;
    let w = evaluate_field([k, 0.0], f, &lat, Some(weight))?;
    let ring = ring_profile(&w, exec)?;

    let mut g = Table::new(&["ix", "iy", "x", "y", "re_psi", "im_psi", "abs_psi_sq", "flagged"]);
    header(&mut g, "wavefield", cfg, None)?;
    g.meta("f_source", source);
    g.meta("f_re", crate::output::fmt_f64(f.re));
    g.meta("f_im", crate::output::fmt_f64(f.im));
    g.meta("hopfield_x", crate::output::fmt_f64(weight));
    let n = w.n_side;
    for ix in 0..n {
        for iy in 0..n {
            let i = w.index(ix, iy);
            let (x, y) = w.position(ix, iy);
            let p = w.psi[i];
            g.push(vec![
                ix.into(),
                iy.into(),
                x.into(),
                y.into(),
                p.re.into(),
                p.im.into(),
                p.norm_sqr().into(),
                w.flagged[i].into(),
            ]);
        }
    }

    let mut r = Table::new(&["k", "intensity"]);
    header(&mut r, "wavefield", cfg, None)?;
    r.meta("k_in", crate::output::fmt_f64(k));
    r.meta("bin_width", crate::output::fmt_f64(ring.bin_width));
    r.meta("peak_k", ring.peak_k.map(crate::output::fmt_f64).unwrap_or_else(|| "none".into()));
    for (kk, v) in ring.k.iter().zip(&ring.intensity) {
        r.push(vec![(*kk).into(), (*v).into()]);
    }

    let side = json!({
        "command": "wavefield",
        "config": cfg,
        "f_source": source,
        "f": [f.re, f.im],
        "hopfield_x": weight,
        "k_in": [k, 0.0],
        "n_side": n,
        "flagged_sites": w.flagged.iter().filter(|&&b| b).count(),
        "ring": {
            "bin_width": ring.bin_width,
            "peak_k": ring.peak_k,
            "peak_width": ring.peak_width(),
        },
        "files": ["wavefield.csv", "ring_profile.csv"],
    });
    Ok(vec![
        Artifact::csv("wavefield.csv", &g)?,
        Artifact::csv("ring_profile.csv", &r)?,
        Artifact::json("wavefield.json", &side)?,
    ])
}
