#![no_std]

//! Exciton and cavity-polariton scattering off single-site defects in
//! two-dimensional optical lattices.
//!
//! Energies are in eV, lengths in Å and wave vectors in Å⁻¹. Frequencies are
//! always carried as energies ħω, so the only physical constant the crate needs
//! is ħc (see [`units::HBAR_C`]).
//!
//! The crate is split into an analytic layer and an independent numerical
//! layer:
//!
//! * [`units`], [`exciton`], [`polariton`] and [`scattering`] hold the band
//!   models and the closed-form scattering amplitudes.
//! * [`oracle`] re-derives the same quantities numerically: quadrature of the
//!   oscillating and static Green's-function integrals, and an exact rank-1
//!   Lippmann–Schwinger solve on a finite periodic lattice.
//! * [`wavefield`] samples the scattered wave on lattice sites and computes its
//!   momentum-space ring.
//!
//! Everything here is `no_std` (with `alloc`). File formats, sweeps and the
//! command-line driver live in the `latscat` crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dft;
pub mod error;
pub mod exciton;
pub mod exec;
pub mod oracle;
pub mod polariton;
pub mod quadrature;
pub mod scattering;
pub mod special;
pub mod units;
pub mod wavefield;

pub use error::{Error, Result};
pub use exciton::{BandKind, BandModel};
pub use polariton::{HopfieldWeights, PolaritonBranch};
pub use scattering::{DefectSpec, PotentialClass, ScatteringResult};
pub use units::{AsymmetricSiteParams, AtomParams, CavityParams, LatticeParams, Occupancy};

pub use num_complex::Complex64;
