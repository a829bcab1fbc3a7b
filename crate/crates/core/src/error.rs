use thiserror::Error;

use crate::exact::Int;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative input {0}")]
    NegativeInput(Int),
    #[error("empty input")]
    EmptyInput,
    #[error("integer overflow")]
    Overflow,

    #[error("invalid disk symbol ({xdot},{ydot},{curv},{cocurv}): {reason}")]
    InvalidDisk {
        xdot: Int,
        ydot: Int,
        curv: Int,
        cocurv: Int,
        reason: &'static str,
    },
    #[error("disks are equal up to orientation")]
    SameDisk,
    #[error("disks are not tangent")]
    NotTangent,
    #[error("tangency spinor is not integral (radicands {0}, {1})")]
    NonIntegralSpinor(Int, Int),
    #[error("curvature and co-curvature have different parity")]
    ParityViolation,
    #[error("both disks are half-planes, tangent at infinity")]
    BothHalfPlanes,

    #[error("invalid triple {triple:?}: {reason}")]
    InvalidTriple { triple: [Int; 3], reason: String },
    #[error("triple {0:?} is not proper")]
    NotProper([Int; 3]),
    #[error("invalid quadruple {quad:?}: {reason}")]
    InvalidQuadruple { quad: [Int; 4], reason: String },
    #[error("descent stalled at {0}")]
    NonTermination(String),
    #[error("slot {0} out of range")]
    BadSlot(usize),
    #[error("{0:?} is not a permutation of (0,0,1,1)")]
    BadPattern([Int; 4]),

    #[error("dimension {0} is not supported (need m >= 2)")]
    InvalidDimension(usize),
    #[error("Apollonian generators are undefined in dimension 3")]
    DimThreeUndefined,
    #[error("reflection axis is isotropic")]
    IsotropicAxis,
    #[error("axis length {0} does not match matrix dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("element budget of {0} exhausted")]
    BudgetExhausted(usize),

    #[error("root configuration failed verification: {0}")]
    InvalidRoot(String),
    #[error("curvature bound {bound} is below root curvature {needed}")]
    BoundTooSmall { bound: Int, needed: Int },
    #[error("packing is unbounded; a region is required")]
    RegionRequired,
    #[error("unknown thread family {0:?}")]
    UnknownFamily(String),
    #[error("packing failed verification: {0}")]
    VerificationFailed(String),
    #[error("degenerate viewport")]
    DegenerateViewport,
}
