//! Lorentz-cone (second-order cone) eigenvalue spectra of 3x3 real
//! matrices, a brute-force oracle for them, and tooling that builds,
//! verifies and inverts the linear maps on 3x3 matrices preserving those
//! spectra.
//!
//! A real `λ` is a Lorentz eigenvalue of `A` when some nonzero `x` in the
//! cone `{[ξ; t] : ‖ξ‖ ≤ t}` has `(A − λI)x` in the cone and
//! `xᵀ(A − λI)x = 0`.

pub mod cli;
pub mod oracle;
pub mod preserver;
pub mod smallmat;
pub mod spectrum;

pub use smallmat::{Mat2, Mat3, Vec2};
pub use spectrum::{full_spectrum, Interval, LEigenvalue, Nature, Spectrum};
