//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by graph construction, counting, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested level exceeds a configured resource limit.
    #[error("level t={t} exceeds the resource limit ({limit}); set MGRAPH_MAX_T to raise it")]
    ResourceLimit { t: u32, limit: u32 },

    /// Unknown export or output format name.
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    /// An operation that needs two distinct vertices got the same one twice.
    #[error("vertices must be distinct (got {0} twice)")]
    IdenticalVertices(u32),

    /// Vertex index outside the graph.
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(u32),

    /// The Laplacian cofactor vanished: the graph is not connected.
    #[error("graph is disconnected; spanning tree count is zero")]
    Disconnected,

    /// The closed-form ratio evaluated to something with a nonzero sqrt(2)
    /// component. This cannot happen unless the formula or its evaluation
    /// is wrong, so it is surfaced loudly instead of being swallowed.
    #[error("closed form at t={t} has a nonzero sqrt(2) component: {detail}")]
    IrrationalResidue { t: u32, detail: String },

    /// The product formula evaluated to a non-integer.
    #[error("product formula at t={t} is not an integer (denominator {den})")]
    NonIntegerProduct { t: u32, den: String },

    /// Level below the operation's defined range (e.g. ratios start at t=1).
    #[error("operation undefined for t={t}; requires t >= {min}")]
    LevelTooSmall { t: u32, min: u32 },

    /// Precision request below the supported minimum.
    #[error("precision {0} too small; minimum is 10 digits")]
    PrecisionTooSmall(u32),

    /// Degree variance is zero, so the degree correlation is undefined.
    #[error("assortativity undefined: all degrees equal at t={0}")]
    DegenerateDegrees(u32),

    /// Modulus given to a mod-p computation is not prime.
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
