use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error(
        "frequency grid [{start:.6e}, {end:.6e}] Hz does not cover the transducer main lobe [{need_lo:.6e}, {need_hi:.6e}] Hz"
    )]
    GridTooNarrow {
        start: f64,
        end: f64,
        need_lo: f64,
        need_hi: f64,
    },

    #[error("frequency grid is not uniform near sample {index}")]
    NonUniformGrid { index: usize },

    #[error(
        "gate [{t_lo:.6e}, {t_hi:.6e}] s lies outside the alias-free range [0, {limit:.6e}] s"
    )]
    GateOutOfRange { t_lo: f64, t_hi: f64, limit: f64 },

    #[error("could not separate crosstalk and acoustic arrivals: {0}")]
    ArrivalNotFound(&'static str),

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("frequency {f:.6e} Hz outside admittance table range [{lo:.6e}, {hi:.6e}] Hz")]
    OutOfTableRange { f: f64, lo: f64, hi: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (last update {last_update:.3e} kT/q)")]
    NotConverged { iterations: usize, last_update: f64 },

    #[error("simulation domain too short: back-contact field is {ratio:.3e} of the surface field")]
    DomainTooShort { ratio: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of an iterative solver or a detection step, as opposed
    /// to rejected inputs.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::DomainTooShort { .. } | Error::ArrivalNotFound(_)
        )
    }
}
