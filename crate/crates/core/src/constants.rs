//! Physical constants (CODATA 2018) and the crate's single point of
//! SI unit conversion.
//!
//! The dephasing pipeline mixes dimensionless spectra with SI device
//! parameters; every ħ, k_B, mₑ and e in the crate comes from this table.

use crate::real::Real;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

pub fn hbar<R: Real>() -> R {
    R::of(HBAR)
}

pub fn boltzmann<R: Real>() -> R {
    R::of(BOLTZMANN)
}

pub fn electron_mass<R: Real>() -> R {
    R::of(ELECTRON_MASS)
}

pub fn elementary_charge<R: Real>() -> R {
    R::of(ELEMENTARY_CHARGE)
}
