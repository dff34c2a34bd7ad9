use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown specialty {label:?}; valid labels: {}", valid.join(", "))]
    UnknownSpecialty { label: String, valid: Vec<String> },

    #[error("specialty map: {0}")]
    SpecialtyMap(String),

    #[error("empty slice")]
    EmptySlice,

    #[error("mixed slice: {0}")]
    MixedSlice(String),

    #[error("degenerate network: {0}")]
    DegenerateNetwork(String),

    #[error("no paths: network has no edges")]
    NoPaths,

    #[error("no power-law support: {0}")]
    NoPowerLawSupport(String),

    #[error("unknown format {0:?}; supported formats: graphml, dot, csv")]
    UnknownFormat(String),

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("rank-deficient design: column(s) {} collinear", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("too few observations: {got} (need at least {need})")]
    TooFewObservations { got: usize, need: usize },

    #[error("missing column {0:?}")]
    MissingColumn(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid generator config: {0}")]
    Config(String),
}
