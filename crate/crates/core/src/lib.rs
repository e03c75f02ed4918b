//! Relativistic electromagnetic force on a small polarizable particle moving
//! at constant velocity parallel to a planar Drude half-space.
//!
//! Three published formulations of the same force are evaluated side by
//! side so that their proportionality can be checked numerically.
//!
//! Units are natural (`ħ = c = k_B = 1`, unit vacuum permittivity);
//! frequencies, temperatures and inverse lengths share one scale.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod integrands;
pub mod physics;
pub mod quadrature;
pub mod response;

pub use error::{ForceError, Result};
