use thiserror::Error;

/// Errors produced by parameter derivation, norm evaluation, coding, and the
/// brute-force oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// The target accuracy eps must lie strictly inside (0, a).
    #[error("eps = {eps} is outside the admissible range (0, {a})")]
    InvalidEpsilon { eps: f64, a: f64 },

    /// Class parameters must be strictly positive and finite.
    #[error("invalid class parameters: a = {a}, b = {b}")]
    InvalidClass { a: f64, b: f64 },

    /// A certified enclosure could not be tightened to the requested width.
    #[error("tolerance {tol} unreachable within {max_grid} grid points")]
    ToleranceUnreachable { tol: f64, max_grid: usize },

    /// Z-transform evaluation is restricted to the closed unit disk.
    #[error("|z| = {modulus} exceeds 1")]
    OutsideUnitDisk { modulus: f64 },

    /// A mixed-radix digit fell outside its radix.
    #[error("digit {digit} at slot {slot} out of range for radix {radix}")]
    DigitOutOfRange { slot: usize, digit: u64, radix: u64 },

    /// Digit and radix sequences must have equal length.
    #[error("index has {digits} digits but {radices} radices")]
    IndexLengthMismatch { digits: usize, radices: usize },

    /// The impulse response violates the envelope |k[t]| <= a e^{-bt}.
    #[error("impulse response exceeds the class envelope at t = {t}: |{value}| > {bound}")]
    NotAMember { t: usize, value: f64, bound: f64 },

    /// A derived quantity failed its defining inequality (indicates a bug or
    /// pathological rounding).
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// A bitstream header could not be parsed.
    #[error("malformed bitstream: {0}")]
    Format(String),

    /// A bitstream parsed but carries an impossible payload.
    #[error("corrupt bitstream: {0}")]
    Corrupt(String),

    /// The requested brute-force instance exceeds the exhaustive-search cap.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    /// An interval comparison could not be certified even at the tightest
    /// tolerance; the threshold lies inside the enclosure.
    #[error("cannot certify comparison of [{lower}, {upper}] against {threshold}")]
    Ambiguous {
        lower: f64,
        upper: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
