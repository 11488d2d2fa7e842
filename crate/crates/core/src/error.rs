use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("quadrature on [{a}, {b}] failed: {message} (error estimate {error:e})")]
    Quadrature {
        a: f64,
        b: f64,
        error: f64,
        message: String,
    },

    #[error("scattering solver failed: {0}")]
    Scattering(String),

    #[error("the Fourier transform of g is not a function for a hard-core potential; regularize first")]
    HardCoreTransform,

    #[error("tail truncation would cut into the hard core (remaining integral {remaining:e})")]
    CoreNotIntegrable { remaining: f64 },

    #[error("negative radicand in Bogoliubov dispersion at |p|={p:e}: tau={tau:e}, rho_z*ghat={coupling:e}")]
    NegativeRadicand { p: f64, tau: f64, coupling: f64 },

    #[error("lattice enumeration needs {requested} points, budget is {budget}")]
    LatticeBudget { requested: u64, budget: u64 },

    #[error("lattice truncation insufficient: tail estimate {tail:e} exceeds {limit:e}")]
    Truncation { tail: f64, limit: f64 },

    #[error("finite-difference steps disagree: {0}")]
    Resolution(String),
}
