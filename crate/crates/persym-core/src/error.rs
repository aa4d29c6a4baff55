use core::fmt;

/// Errors shared by all modules. Every variant is a contract violation the
/// caller can act on; internal arithmetic failures that would indicate a bug
/// (for example a closed form evaluating to a non-integer) get their own
/// variants so tests can pin them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// n = 0 or k = 0; every family needs at least one block and one column.
    EmptyShape { n: u32, k: u32 },
    /// k exceeds what fits in one machine word per row / coefficient block.
    ColumnCap { k: u32 },
    /// Matrix dimensions exceed the 64 x 64 bit-packing cap.
    DimensionCap { rows: usize, cols: usize },
    /// A packed row had bits set at or above the column count.
    StrayBits { row: usize },
    /// Parameter index outside [0, 2^(n(k+1))).
    IndexRange { index: u64, bits: u32 },
    /// A sub-range [lo, hi) is not contained in the parameter space.
    BadRange { lo: u64, hi: u64, bits: u32 },
    /// n(k+1) exceeds the census feasibility guard and no override was given.
    CensusGuard { bits: u32, limit: u32 },
    /// n(k+1) does not fit the 63-bit enumeration index even with an override.
    IndexWidth { bits: u32 },
    /// No closed-form line exists for this rank index in the chosen family.
    NoSuchLine { i: u32, max: u32 },
    /// The value's block count differs from what the operation expects.
    BlockCount { expected_n: u32, got_n: u32 },
    /// Two histograms over different family shapes cannot be combined.
    HistogramShapes { a: (u32, u32), b: (u32, u32) },
    /// An enumeration guard for the polynomial-system module was exceeded.
    EnumerationGuard { bits: u32, limit: u32 },
    /// An exact rational that must be an integer was not; names the quantity.
    NonIntegral(&'static str),
    /// A linear system in the derivation had no unique solution.
    SingularSystem(&'static str),
    /// A reproduced quantity disagrees with the closed forms it must match.
    DerivationMismatch(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyShape { n, k } => {
                write!(f, "family shape needs n >= 1 and k >= 1, got n={n}, k={k}")
            }
            Error::ColumnCap { k } => {
                write!(f, "k={k} exceeds the 63-column cap of the packed parameter model")
            }
            Error::DimensionCap { rows, cols } => {
                write!(f, "matrix {rows}x{cols} exceeds the 64x64 bit-packing cap")
            }
            Error::StrayBits { row } => {
                write!(f, "row {row} has bits set beyond the column count")
            }
            Error::IndexRange { index, bits } => {
                write!(f, "parameter index {index} outside [0, 2^{bits})")
            }
            Error::BadRange { lo, hi, bits } => {
                write!(f, "range [{lo}, {hi}) not contained in [0, 2^{bits})")
            }
            Error::CensusGuard { bits, limit } => {
                write!(
                    f,
                    "census over 2^{bits} parameters exceeds the 2^{limit} guard; \
                     pass force to run anyway"
                )
            }
            Error::IndexWidth { bits } => {
                write!(f, "census over 2^{bits} parameters does not fit a 63-bit index")
            }
            Error::NoSuchLine { i, max } => {
                write!(f, "no closed-form line for rank {i}; this family stops at rank {max}")
            }
            Error::BlockCount { expected_n, got_n } => {
                write!(f, "operation expects n={expected_n} blocks, got n={got_n}")
            }
            Error::HistogramShapes { a, b } => {
                write!(
                    f,
                    "histograms over (n={}, k={}) and (n={}, k={}) cannot be combined",
                    a.0, a.1, b.0, b.1
                )
            }
            Error::EnumerationGuard { bits, limit } => {
                write!(f, "enumeration of 2^{bits} tuples exceeds the 2^{limit} guard")
            }
            Error::NonIntegral(what) => {
                write!(f, "{what} must be an integer but evaluated to a proper fraction")
            }
            Error::SingularSystem(which) => {
                write!(f, "linear system for {which} has no unique solution")
            }
            Error::DerivationMismatch(what) => {
                write!(f, "derivation disagrees with closed forms at {what}")
            }
        }
    }
}

impl core::error::Error for Error {}
