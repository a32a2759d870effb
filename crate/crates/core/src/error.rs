use thiserror::Error;

/// Errors raised by this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The zerofree version cannot be computed from the declared support.
    #[error("support of `{0}` is undecidable: declare support metadata or supply a scan bound")]
    UndecidableSupport(String),

    /// An index computation left the `u64` range.
    #[error("index overflow: {0}")]
    Overflow(String),

    /// An operation that needs an all-nonzero (zerofree) sequence got something else.
    #[error("sequence `{0}` is not zerofree")]
    NotZerofree(String),

    /// A coordinate norm evaluated to NaN or infinity.
    #[error("non-finite coordinate norm at index {index}")]
    NonFinite { index: u64 },

    /// The envelope's tail series diverges for the requested exponent.
    #[error("envelope tail diverges for exponent {exponent}")]
    EnvelopeDiverges { exponent: f64 },

    /// Every coordinate of the truncation is zero.
    #[error("all of the first {depth} coordinates vanish")]
    ZeroSequence { depth: u64 },

    /// The Luxemburg bisection could not find ρ with the defining sum on both sides of 1.
    #[error("no bracket for the Luxemburg gauge: {0}")]
    NoBracket(String),

    /// The witness carries no certificate usable as a certified-upper norm.
    #[error("witness `{0}` has no membership certificate for its home space")]
    MissingMembershipCertificate(String),

    /// Some basis block has no coordinate within the requested depth.
    #[error("depth {depth} is too shallow: block {block} starts at index {first_index}")]
    DepthTooShallow {
        depth: u64,
        block: u64,
        first_index: u64,
    },

    /// A norm-one direction was requested from the zero vector.
    #[error("degenerate direction: the attainment point is zero")]
    DegenerateDirection,

    /// A parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
