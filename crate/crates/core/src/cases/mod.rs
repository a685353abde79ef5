//! Reproductions of the two celestial-mechanics episodes.

mod mercury;
mod neptune;
mod orbit;
mod residuals;

pub use mercury::{run_mercury_case, MercuryParams, ARCSEC_PER_CENTURY, H2, H2_PRIOR, H3, H3_IDEAL, IDEALIZED_GR_PREDICTION};
pub use neptune::{default_pattern, demo_pattern, neptune_models, run_neptune_case, H0, H1, ORACLE_REL_TOL};
pub use orbit::{
    gr_precession_arcsec_per_century, gr_precession_per_orbit, OrbitSpec, ARCSEC_PER_RADIAN, DAYS_PER_JULIAN_CENTURY,
    GRAVITATIONAL_CONSTANT, SPEED_OF_LIGHT,
};
pub use residuals::{generate_uranus_residuals, GaussianStream};
