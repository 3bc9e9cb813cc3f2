use thiserror::Error;

/// Rejected simulation or sweep parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("population size must be at least 2, got {0}")]
    PopulationTooSmall(u32),
    #[error("defector count {defectors} exceeds population size {n}")]
    TooManyDefectors { defectors: u32, n: u32 },
    #[error("attention capacity {memory} exceeds population size {n}")]
    MemoryTooLarge { memory: u32, n: u32 },
    #[error("tau must be positive and finite, got {0}")]
    InvalidTau(f64),
    #[error("payoffs must satisfy S < P < R < T, got T={t}, R={r}, P={p}, S={s}")]
    PayoffOrdering { t: f64, r: f64, p: f64, s: f64 },
    #[error("payoffs must satisfy T + S < 2R, got T={t}, R={r}, S={s}")]
    PayoffRepetition { t: f64, r: f64, s: f64 },
    #[error("realization count must be at least 1")]
    NoRealizations,
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("{0} grid must be strictly ascending")]
    UnsortedGrid(&'static str),
    #[error("{axis} grid value {value} outside [0, {n}]")]
    GridOutOfRange { axis: &'static str, value: u32, n: u32 },
    #[error("no strategies requested")]
    NoStrategies,
    #[error("no tau values requested")]
    NoTau,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{0} mean is undefined for this population")]
    UndefinedPopulation(&'static str),
    #[error("enumeration needs {needed} leaves, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("surfaces do not share the same grid and tau")]
    MismatchedGrids,
}

/// Failures while reading or writing the CSV interchange files.
#[derive(Debug, Error)]
pub enum TableError {
    #[error("row {row}: {message}")]
    Malformed { row: u64, message: String },
    #[error("unexpected header: {0}")]
    Header(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
