//! Device geometry, acoustic bath, phonon polarizations, and thermal
//! occupation.
//!
//! The quantization volume never appears here or anywhere else: it
//! cancels between |g|² and the k-sum density when the spectral density
//! is assembled, so storing it would only create a meaningless knob.

use crate::constants;
use crate::error::{Error, Result};
use crate::real::Real;

/// Physical transmon: two semicircular islands of radius R joined by a
/// junction, film thickness T, junction critical current I_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceGeometry<R> {
    /// Island radius, m.
    pub radius: R,
    /// Film thickness, m.
    pub thickness: R,
    /// Junction critical current, A.
    pub critical_current: R,
}

impl<R: Real> DeviceGeometry<R> {
    pub fn new(radius: R, thickness: R, critical_current: R) -> Result<Self> {
        let g = DeviceGeometry {
            radius,
            thickness,
            critical_current,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > R::zero()) {
            return Err(Error::invalid("radius must be positive"));
        }
        if !(self.thickness > R::zero()) {
            return Err(Error::invalid("thickness must be positive"));
        }
        if !(self.critical_current >= R::zero()) {
            return Err(Error::invalid("critical current must be non-negative"));
        }
        Ok(())
    }

    /// Thin-film validity: T ≪ λ/2π for the operating phonon wavelength.
    pub fn thin_film_valid(&self, wavelength: R) -> bool {
        self.thickness < wavelength / R::of(2.0 * std::f64::consts::PI)
    }
}

/// Acoustic bath: mass density, transverse/longitudinal sound speeds,
/// temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams<R> {
    /// kg/m³.
    pub mass_density: R,
    /// Transverse sound speed, m/s.
    pub c_transverse: R,
    /// Longitudinal sound speed, m/s.
    pub c_longitudinal: R,
    /// K.
    pub temperature: R,
}

impl<R: Real> BathParams<R> {
    pub fn new(mass_density: R, c_transverse: R, c_longitudinal: R, temperature: R) -> Result<Self> {
        let b = BathParams {
            mass_density,
            c_transverse,
            c_longitudinal,
            temperature,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass_density > R::zero()) {
            return Err(Error::invalid("mass density must be positive"));
        }
        if !(self.c_transverse > R::zero()) || !(self.c_longitudinal > R::zero()) {
            return Err(Error::invalid("sound speeds must be positive"));
        }
        if self.c_longitudinal < self.c_transverse {
            return Err(Error::invalid(
                "elastic media have c_longitudinal ≥ c_transverse",
            ));
        }
        if !(self.temperature >= R::zero()) {
            return Err(Error::invalid("temperature must be non-negative"));
        }
        Ok(())
    }
}

/// Phonon propagation direction: θ from ẑ (normal to the transmon),
/// φ from x̂ (transecting it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<R> {
    pub theta: R,
    pub phi: R,
}

impl<R: Real> Direction<R> {
    pub fn new(theta: R, phi: R) -> Result<Self> {
        if !(theta >= R::zero() && theta <= R::of(std::f64::consts::PI)) {
            return Err(Error::invalid("theta must lie in [0, π]"));
        }
        if !(phi >= R::zero() && phi < R::of(2.0 * std::f64::consts::PI)) {
            return Err(Error::invalid("phi must lie in [0, 2π)"));
        }
        Ok(Direction { theta, phi })
    }
}

/// Polarization label; indices follow the dispersion convention
/// ω₁,₂ = c_T k (transverse), ω₃ = c_L k (longitudinal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// ê₁: transverse, in the transmon plane.
    TransverseInPlane,
    /// ê₂: transverse, out of plane.
    TransverseOutOfPlane,
    /// ê₃ = k̂.
    Longitudinal,
}

impl Polarization {
    pub const ALL: [Polarization; 3] = [
        Polarization::TransverseInPlane,
        Polarization::TransverseOutOfPlane,
        Polarization::Longitudinal,
    ];

    pub fn index(self) -> u8 {
        match self {
            Polarization::TransverseInPlane => 1,
            Polarization::TransverseOutOfPlane => 2,
            Polarization::Longitudinal => 3,
        }
    }

    pub fn from_index(s: u8) -> Result<Self> {
        match s {
            1 => Ok(Polarization::TransverseInPlane),
            2 => Ok(Polarization::TransverseOutOfPlane),
            3 => Ok(Polarization::Longitudinal),
            other => Err(Error::invalid(format!(
                "polarization index {other} not in 1..=3"
            ))),
        }
    }

    pub fn sound_speed<R: Real>(self, bath: &BathParams<R>) -> R {
        match self {
            Polarization::Longitudinal => bath.c_longitudinal,
            _ => bath.c_transverse,
        }
    }
}

pub type Vec3<R> = [R; 3];

pub fn dot3<R: Real>(a: &Vec3<R>, b: &Vec3<R>) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3<R: Real>(a: &Vec3<R>, b: &Vec3<R>) -> Vec3<R> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal polarization triad for a propagation direction.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationTriad<R> {
    pub e1: Vec3<R>,
    pub e2: Vec3<R>,
    pub e3: Vec3<R>,
}

impl<R: Real> PolarizationTriad<R> {
    pub fn vector(&self, s: Polarization) -> &Vec3<R> {
        match s {
            Polarization::TransverseInPlane => &self.e1,
            Polarization::TransverseOutOfPlane => &self.e2,
            Polarization::Longitudinal => &self.e3,
        }
    }
}

/// The component forms of the triad. These stay well defined at θ = 0,
/// where the (k̂ × ẑ)/|k̂ × ẑ| expression for ê₁ degenerates to 0/0.
pub fn polarization_vectors<R: Real>(d: &Direction<R>) -> PolarizationTriad<R> {
    let (st, ct) = d.theta.sin_cos();
    let (sp, cp) = d.phi.sin_cos();
    PolarizationTriad {
        e1: [sp, -cp, R::zero()],
        e2: [cp * ct, sp * ct, -st],
        e3: [cp * st, sp * st, ct],
    }
}

/// ω_s(k): linear dispersion with the polarization's sound speed.
pub fn phonon_dispersion<R: Real>(k: R, s: Polarization, bath: &BathParams<R>) -> Result<R> {
    if !(k >= R::zero()) {
        return Err(Error::invalid("wavenumber must be non-negative"));
    }
    Ok(s.sound_speed(bath) * k)
}

/// Bose-Einstein occupation N_ω = 1/(e^{ħω/k_BT} − 1).
///
/// Formulated through expm1 so the deep exponential tail (ħω ≫ k_BT)
/// underflows to e^{−ħω/k_BT} instead of losing precision; T = 0 returns
/// exactly zero.
pub fn thermal_occupation<R: Real>(omega: R, temperature: R) -> Result<R> {
    if !(omega > R::zero()) {
        return Err(Error::invalid("omega must be positive"));
    }
    if !(temperature >= R::zero()) {
        return Err(Error::invalid("temperature must be non-negative"));
    }
    if temperature == R::zero() {
        return Ok(R::zero());
    }
    let x = constants::hbar::<R>() * omega / (constants::boltzmann::<R>() * temperature);
    Ok(R::one() / x.exp_m1())
}
