//! Lorentz spectra of 3x3 real matrices.

mod closed_form;
mod solver;
mod types;

use thiserror::Error;

pub use closed_form::{closed_form_spectrum, FamilyTag};
pub use solver::{
    boundary_residual, boundary_spectrum, detect_infinite, full_spectrum, full_spectrum_batch,
    interior_residual, interior_spectrum, scaled_tol, solve_system_i, solve_systems_ii_iii_iv,
    system_i_polynomial, BoundarySpectrum,
};
pub use types::{
    BoundaryWitness, Interval, LEigenvalue, Nature, Spectrum, DEDUP_REL, DEGENERATE_INTERVAL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("{0} is not an eigenvalue of the leading 2x2 block")]
    InvalidMu(f64),
    #[error("no closed form for the general family")]
    UnsupportedFamily,
    #[error("family parameters out of domain: {0}")]
    DomainError(String),
}
