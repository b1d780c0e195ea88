use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("commanded force ratio gives non-positive extension leg force ({force})")]
    NoValidSpring { force: f64 },

    #[error("yielding dynamics are singular for a massless foot (mu = 0)")]
    SingularFootMass,

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("exceeded {cap} transition events within a single hop")]
    EventCapExceeded { cap: usize },

    #[error("no gait: injected energy {eps_inj} is below the existence boundary {minimum}")]
    NoGait { eps_inj: f64, minimum: f64 },

    #[error("fixed-point cubic does not have a unique admissible root (discriminant {discriminant})")]
    AmbiguousCubicRoot { discriminant: f64 },

    #[error("map evaluation failed at eps_td = {at}")]
    MapFailure { at: f64 },

    #[error("no root in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
}

pub(crate) fn check(name: &'static str, ok: bool, reason: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: reason() })
    }
}
