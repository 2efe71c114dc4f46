use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate interface: |kL + kR| = {magnitude:.3e} (kL = {k_left}, kR = {k_right})")]
    DegenerateInterface {
        k_left: Complex64,
        k_right: Complex64,
        magnitude: f64,
    },

    #[error("no root in bracket [{lo:.6e}, {hi:.6e}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}")]
    NoRoot { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no convergence after {iterations} iterations in {context}; last iterate {last}")]
    NonConvergence {
        context: String,
        iterations: usize,
        last: Complex64,
    },

    #[error("root count mismatch: winding number {expected}, polished roots {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("E = {energy} lies outside the normalizable region (q = {q:.3e})")]
    InvalidRegion { energy: Complex64, q: f64 },

    #[error("unit-cell transmission vanishes at E = {energy} (|T| = {magnitude:.3e})")]
    TransmissionVanishes { energy: Complex64, magnitude: f64 },

    #[error("PT identity violated: |T* - T/(T^2 - RrRl)| = {residual:.3e}")]
    IdentityViolation { residual: f64 },

    #[error("zero momentum: |k+ k-| = {magnitude:.3e}")]
    ZeroMomentum { magnitude: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("c-product denominator underflow: |<phi_L|phi_R>| = {magnitude:.3e}")]
    DenominatorUnderflow { magnitude: f64 },

    #[error("{side} lump not separated from the barrier: edge/peak = {ratio:.3}")]
    NotSeparated { side: &'static str, ratio: f64 },

    #[error("unstable time stepping: norm drift {drift:.3e} per unit time")]
    Stability { drift: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether this error came out of a numerical procedure, as opposed to
    /// bad input or I/O.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidParameter(_) | Error::Io(_) | Error::Json(_))
    }
}
