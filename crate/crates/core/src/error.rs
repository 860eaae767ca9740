use thiserror::Error;

/// Which of the two impossible vanishing cases of the sanitizing chain fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contradiction {
    /// The odd part of the form vanished, which would force `N/4` to be even.
    OddPartVanishes,
    /// After descending by `p`, the part coprime to `p` vanished again,
    /// which would force `p^2 | N` together with a conductor that cannot divide the level.
    DescentVanishes { p: u64 },
    /// The level or character does not satisfy the hypotheses the chain relies on.
    Hypotheses,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("{0} is not the negative of a discriminant")]
    InvalidDiscriminant(u64),

    #[error("no odd prime value found with |x|, |y| <= {bound}")]
    BoundExhausted { bound: i64 },

    #[error("coefficient for ({a}, {b}, {c}) not available")]
    MissingCoefficient { a: i64, b: i64, c: i64 },

    #[error("out of precision: needed {needed}, available {available}")]
    OutOfPrecision { needed: u64, available: u64 },

    #[error("inconsistent table: {0}")]
    InconsistentTable(String),

    #[error("no nonzero odd-prime slice within precision")]
    NotFoundWithinPrecision,

    #[error("character must be odd")]
    CharacterParity,

    #[error("resulting precision would be below one")]
    PrecisionShrunkBelowOne,

    #[error("coefficient a({n}) is nonzero but {p} does not divide {n}")]
    NotSupportedOnMultiples { n: u64, p: u64 },

    #[error("level obstruction: {0}")]
    LevelObstruction(String),

    #[error("hypothesis violation ({which:?}): {detail}")]
    HypothesisViolation { which: Contradiction, detail: String },

    #[error("input form is zero")]
    ZeroInput,

    #[error("precision {precision} too low for X = {x} (need at least {needed})")]
    PrecisionTooLow { precision: u64, x: f64, needed: u64 },

    #[error("no threshold found up to {cap}")]
    NotFound { cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
