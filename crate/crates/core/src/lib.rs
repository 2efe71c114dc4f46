//! One-dimensional non-Hermitian quantum mechanics for complex
//! piecewise-constant potentials.

pub mod bloch;
pub mod bound_states;
pub mod cli;
pub mod error;
pub mod model;
pub mod numerics;
pub mod output;
pub mod scattering;
pub mod wavepacket;

pub use error::{Error, Result};
pub use model::{PhysicalParams, PiecewisePotential, Segment};
