use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Newtonian constant of gravitation (CODATA 2018), m^3 kg^-1 s^-2.
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
pub const DAYS_PER_JULIAN_CENTURY: f64 = 36_525.0;
pub const ARCSEC_PER_RADIAN: f64 = 648_000.0 / PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    semi_major_axis: f64,
    eccentricity: f64,
    period_days: f64,
    central_mass: f64,
}

impl OrbitSpec {
    /// `semi_major_axis` in meters, `period_days` in days, `central_mass` in kg.
    pub fn new(semi_major_axis: f64, eccentricity: f64, period_days: f64, central_mass: f64) -> Result<Self> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(semi_major_axis) {
            return Err(Error::domain(format!("semi-major axis must be positive, got {semi_major_axis}")));
        }
        if !(eccentricity.is_finite() && (0.0..1.0).contains(&eccentricity)) {
            return Err(Error::domain(format!(
                "eccentricity must lie in [0, 1) for a bound orbit, got {eccentricity}"
            )));
        }
        if !positive(period_days) {
            return Err(Error::domain(format!("orbital period must be positive, got {period_days}")));
        }
        if !positive(central_mass) {
            return Err(Error::domain(format!("central mass must be positive, got {central_mass}")));
        }
        Ok(Self {
            semi_major_axis,
            eccentricity,
            period_days,
            central_mass,
        })
    }

    /// Mercury about the Sun.
    pub fn mercury() -> Self {
        Self {
            semi_major_axis: 5.7909e10,
            eccentricity: 0.205_630,
            period_days: 87.9691,
            central_mass: 1.988_92e30,
        }
    }

    pub fn semi_major_axis(&self) -> f64 {
        self.semi_major_axis
    }

    pub fn eccentricity(&self) -> f64 {
        self.eccentricity
    }

    pub fn period_days(&self) -> f64 {
        self.period_days
    }

    pub fn central_mass(&self) -> f64 {
        self.central_mass
    }
}

/// Relativistic perihelion advance per orbit, radians:
/// `6 pi G M / (a (1 - e^2) c^2)`.
pub fn gr_precession_per_orbit(orbit: &OrbitSpec) -> f64 {
    let e2 = orbit.eccentricity * orbit.eccentricity;
    6.0 * PI * GRAVITATIONAL_CONSTANT * orbit.central_mass
        / (orbit.semi_major_axis * (1.0 - e2) * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// Relativistic perihelion advance accumulated over a Julian century.
pub fn gr_precession_arcsec_per_century(orbit: &OrbitSpec) -> f64 {
    let orbits = DAYS_PER_JULIAN_CENTURY / orbit.period_days;
    gr_precession_per_orbit(orbit) * orbits * ARCSEC_PER_RADIAN
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mercury_is_about_43_arcsec() {
        let mu = gr_precession_arcsec_per_century(&OrbitSpec::mercury());
        assert!((mu - 42.98).abs() < 0.1, "{mu}");
    }

    #[test]
    fn kepler_scaled_orbit() {
        let m = OrbitSpec::mercury();
        let far = OrbitSpec::new(
            10.0 * m.semi_major_axis(),
            m.eccentricity(),
            m.period_days() * 10f64.powf(1.5),
            m.central_mass(),
        )
        .unwrap();
        let ratio = gr_precession_arcsec_per_century(&far) / gr_precession_arcsec_per_century(&m);
        assert!((ratio / 10f64.powf(-2.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eccentricity_factor() {
        let circ = OrbitSpec::new(1e11, 0.0, 100.0, 2e30).unwrap();
        let ecc = OrbitSpec::new(1e11, 0.2, 100.0, 2e30).unwrap();
        let ratio = gr_precession_arcsec_per_century(&ecc) / gr_precession_arcsec_per_century(&circ);
        assert!((ratio - 1.0 / 0.96).abs() < 1e-12);
    }

    #[test]
    fn invalid_orbits() {
        assert!(OrbitSpec::new(1e11, 1.0, 100.0, 2e30).is_err());
        assert!(OrbitSpec::new(1e11, -0.1, 100.0, 2e30).is_err());
        assert!(OrbitSpec::new(0.0, 0.1, 100.0, 2e30).is_err());
        assert!(OrbitSpec::new(1e11, 0.1, -1.0, 2e30).is_err());
        assert!(OrbitSpec::new(1e11, 0.1, 100.0, 0.0).is_err());
    }
}
