//! Turn a [`Config`] into the band, branch and defect of one scenario.

use latscat_core::exciton::{exciton_band, symmetric_exciton_band};
use latscat_core::scattering::{
    asymmetric_amplitude, exciton_vacancy_amplitude, polariton_static_integral, polariton_vacancy_amplitude,
    twoatom_polariton_amplitude, AsymmetricOutcome, AsymmetricSetup, Denominator, POLE_TOLERANCE_EV,
};
use latscat_core::units::j0_of_theta;
use latscat_core::{
    AsymmetricSiteParams, AtomParams, BandModel, CavityParams, Complex64, DefectSpec, LatticeParams, Occupancy,
    PolaritonBranch, ScatteringResult,
};

use crate::config::{Config, Scenario};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Exciton {
        band: BandModel,
        defect: DefectSpec,
    },
    /// Vacancy or two-atom defect seen by the lower polariton.
    Polariton {
        branch: PolaritonBranch,
        defect: DefectSpec,
    },
    Asymmetric {
        setup: AsymmetricSetup,
        site: AsymmetricSiteParams,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(ScatteringResult),
    /// Denominator energy Λ_k(1 − S·I_st) below tolerance.
    Pole { denominator_energy: Complex64 },
}

pub fn denominator_mode(cfg: &Config) -> Denominator {
    if cfg.exact_denominator {
        Denominator::Exact
    } else {
        Denominator::Approximate
    }
}

/// Cavity from `L` if given, else 2·detuning above `edge`.
fn cavity(cfg: &Config, edge: f64) -> Result<CavityParams> {
    match (cfg.l, cfg.detuning) {
        (Some(_), Some(_)) => Err(CliError::config("give either L or detuning, not both")),
        (Some(l), None) => Ok(CavityParams::new(l, cfg.epsilon, cfg.g)?),
        (None, _) => Ok(CavityParams::resonant_with(edge + 2.0 * cfg.detuning(), cfg.epsilon, cfg.g)?),
    }
}

/// Exciton band of the configured lattice (symmetric band for double occupancy).
pub fn lattice_band(cfg: &Config) -> Result<(LatticeParams, BandModel)> {
    let lat = LatticeParams::new(cfg.a, cfg.n_side, cfg.occupancy())?;
    let band = match cfg.occupancy() {
        Occupancy::Single => exciton_band(&lat, &AtomParams::single(cfg.e_a, cfg.j)?)?,
        Occupancy::Double => symmetric_exciton_band(&lat, &AtomParams::double(cfg.e_a, cfg.j0, cfg.j1)?)?,
    };
    Ok((lat, band))
}

impl Model {
    pub fn build(cfg: &Config) -> Result<Self> {
        let need = cfg.scenario.occupancy();
        if cfg.occupancy() != need {
            return Err(CliError::config(format!(
                "scenario {} needs occupancy = {}",
                cfg.scenario,
                if need == Occupancy::Single { "single" } else { "double" }
            )));
        }
        Ok(match cfg.scenario {
            Scenario::ExcitonVacancy => {
                let (_, band) = lattice_band(cfg)?;
                Model::Exciton {
                    band,
                    defect: DefectSpec::vacancy(cfg.e_a)?,
                }
            }
            Scenario::PolaritonVacancy => {
                let (_, band) = lattice_band(cfg)?;
                let c = cavity(cfg, band.e0)?;
                Model::Polariton {
                    branch: PolaritonBranch::lower(&c, &band, band.e0)?,
                    defect: DefectSpec::vacancy(cfg.e_a)?,
                }
            }
            Scenario::TwoAtom => {
                let (_, band) = lattice_band(cfg)?;
                let c = cavity(cfg, band.e0)?;
                Model::Polariton {
                    branch: PolaritonBranch::lower(&c, &band, cfg.e_a + cfg.j0)?,
                    defect: DefectSpec::two_atom(cfg.j0)?,
                }
            }
            Scenario::Asymmetric => {
                let setup = match cfg.l {
                    Some(_) if cfg.detuning.is_some() => {
                        return Err(CliError::config("give either L or detuning, not both"))
                    }
                    Some(l) => AsymmetricSetup {
                        a: cfg.a,
                        e_a: cfg.e_a,
                        j1: cfg.j1,
                        cavity: CavityParams::new(l, cfg.epsilon, cfg.g)?,
                    },
                    None => AsymmetricSetup::with_detuning(cfg.a, cfg.e_a, cfg.j1, cfg.epsilon, cfg.g, cfg.detuning())?,
                };
                let site = AsymmetricSiteParams::new(cfg.j_bar()?, cfg.theta)?;
                // Fail early on an unusable branch rather than at the first point.
                setup.branch(j0_of_theta(&site))?;
                Model::Asymmetric { setup, site }
            }
        })
    }

    /// Lower-polariton branch in force (θ-dependent for asymmetric sites).
    pub fn branch(&self) -> Result<Option<PolaritonBranch>> {
        Ok(match self {
            Model::Exciton { .. } => None,
            Model::Polariton { branch, .. } => Some(*branch),
            Model::Asymmetric { setup, site } => Some(setup.branch(j0_of_theta(site))?),
        })
    }

    pub fn strength(&self) -> f64 {
        match self {
            Model::Exciton { defect, .. } | Model::Polariton { defect, .. } => defect.strength,
            Model::Asymmetric { site, .. } => j0_of_theta(site),
        }
    }

    /// Real part of Λ_k(1 − S·I_st) in eV for polariton models.
    pub fn denominator_energy(&self, k: f64, mode: Denominator) -> Result<Option<f64>> {
        Ok(match self {
            Model::Exciton { .. } => None,
            Model::Polariton { branch, defect } => {
                let i_st = polariton_static_integral(k, branch, mode)?;
                Some((branch.lambda(k)? * (1.0 - defect.strength * i_st)).re)
            }
            Model::Asymmetric { setup, site } => Some(setup.denominator_energy(k, site, mode)?.re),
        })
    }

    pub fn evaluate(&self, k: f64, mode: Denominator) -> Result<Point> {
        Ok(match self {
            Model::Exciton { band, defect } => Point::Finite(exciton_vacancy_amplitude(k, band, defect)?),
            Model::Polariton { branch, defect } => {
                let i_st = polariton_static_integral(k, branch, mode)?;
                let de = branch.lambda(k)? * (1.0 - defect.strength * i_st);
                if de.norm() < POLE_TOLERANCE_EV {
                    return Ok(Point::Pole { denominator_energy: de });
                }
                let r = match defect.occupancy {
                    Occupancy::Single => polariton_vacancy_amplitude(k, branch, defect, mode)?,
                    Occupancy::Double => twoatom_polariton_amplitude(k, branch, defect, mode)?,
                };
                Point::Finite(r)
            }
            Model::Asymmetric { setup, site } => match asymmetric_amplitude(k, setup, site, mode)? {
                AsymmetricOutcome::Finite(r) => Point::Finite(r),
                AsymmetricOutcome::Pole { denominator_energy, .. } => Point::Pole { denominator_energy },
            },
        })
    }

    /// Exciton amplitude X of the scattering state (1 for bare excitons).
    pub fn hopfield_x(&self, k: f64) -> Result<f64> {
        Ok(match self.branch()? {
            None => 1.0,
            Some(b) => b.exciton_weight(k)?.sqrt(),
        })
    }

    /// Band quantities worth recording next to the output.
    pub fn derived(&self, k: f64) -> Result<Vec<(&'static str, f64)>> {
        let mut out = Vec::new();
        match self {
            Model::Exciton { band, .. } => {
                out.push(("E0_eV", band.e0));
                out.push(("Delta_eV", band.delta));
                out.push(("ka", k * band.a));
            }
            _ => {
                let b = self.branch()?.ok_or_else(|| CliError::Internal("polariton model without branch".into()))?;
                let e_a = match self {
                    Model::Asymmetric { setup, .. } => setup.e_a,
                    _ => b.exciton.e0,
                };
                out.push(("E0_eV", b.exciton.e0));
                out.push(("Delta_eV", b.exciton.delta));
                out.push(("L_angstrom", b.cavity.l));
                out.push(("cavity_cutoff_eV", b.cavity.cutoff_energy()));
                out.push(("Delta_p_eV", b.delta_p()));
                out.push(("E_flat_eV", b.e_flat));
                out.push(("k0_inv_angstrom", b.k0));
                out.push(("Lambda_k_eV", b.lambda(k)?));
                out.push(("X_minus_sq", b.exciton_weight(k)?));
                out.push(("strength_eV", self.strength()));
                // Regime indicators: the long-wavelength forms assume both ≫ 1.
                out.push(("Delta_p_over_E_A", b.delta_p() / e_a));
                out.push(("strength_over_Lambda_k", self.strength().abs() / b.lambda(k)?));
                out.push(("ka", k * b.exciton.a));
            }
        }
        Ok(out)
    }
}
