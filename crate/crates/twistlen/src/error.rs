use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus m={m} out of range for text of length {n} (need 1 <= m <= {n})")]
    ModulusOutOfRange { m: usize, n: usize },

    #[error("empty coset has no sample signature")]
    EmptyCoset,

    #[error("text has {0} letters, need at least 2")]
    TextTooShort(usize),

    #[error("key must contain at least one letter")]
    EmptyKey,

    #[error("shift {0} outside 0..=25")]
    ShiftOutOfRange(u8),

    #[error("letter code {0} outside 0..=25")]
    LetterOutOfRange(u8),

    #[error("m-domain {lo}..={hi} is empty (need 1 <= lo <= hi)")]
    EmptyDomain { lo: usize, hi: usize },

    #[error("m-domain {lo}..={hi} is invalid (need {min_lo} <= lo <= hi <= {max_hi})")]
    InvalidDomain {
        lo: usize,
        hi: usize,
        min_lo: usize,
        max_hi: usize,
    },

    #[error("series covers m=1..={have}, need values through m={need}")]
    SeriesTooShort { have: usize, need: usize },

    #[error("Friedman estimate undefined: text too close to uniform (IC = {ic:.6})")]
    FriedmanUndefined { ic: f64 },

    #[error("n-gram size must be at least 2, got {0}")]
    NgramTooSmall(usize),

    #[error("text of length {len} has no {n}-grams")]
    TextShorterThanNgram { len: usize, n: usize },

    #[error("Kasiski inconclusive: no repeated n-gram distances to analyze")]
    KasiskiInconclusive,

    #[error("divisor ceiling must be at least 2, got {0}")]
    DivisorCeilingTooSmall(usize),

    #[error("key length for divisor analysis must be at least 2, got {0}")]
    KeyLengthTooSmall(usize),

    #[error("corpus has {len} usable letters, need at least {need}")]
    CorpusTooShort { len: usize, need: usize },

    #[error("experiment config invalid: {0}")]
    InvalidConfig(String),

    #[error("no grid cell for N={n}, k={k}, method={method}")]
    MissingCell { n: usize, k: usize, method: String },

    #[error("monotonicity case needs m >= 1, lambda >= 1 and lambda*m <= N (got m={m}, lambda={lambda}, N={n})")]
    MonotonicityCaseOutOfRange { m: usize, lambda: usize, n: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("CSV write failed: {0}")]
    Csv(#[from] csv::Error),
}
