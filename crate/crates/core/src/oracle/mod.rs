//! Numerical re-derivation of the closed-form results.
//!
//! [`integrals`] evaluates the oscillating and static Green's-function
//! integrals by quadrature at finite regularization η and extrapolates
//! η → 0. [`lattice`] solves the single-defect problem exactly on a finite
//! periodic lattice and extracts f from the far field.

pub mod integrals;
pub mod lattice;

pub use integrals::{
    i_os_quadrature, i_st_lattice_sum, i_st_polariton_model, i_st_quadrature, EtaSchedule, IntegralResult, Method,
    PolaritonStaticParts,
};
pub use lattice::{
    extract_amplitude, finite_lattice_solve, AmplitudeExtraction, FiniteLatticeProblem, LatticeDispersion,
    LatticeSolution,
};
