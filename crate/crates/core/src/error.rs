use core::fmt;

/// Errors raised by the numeric pipeline.
///
/// Row and column indices are 0-based here; the file loaders in the `edd`
/// crate translate them to file positions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer points than the operation needs.
    TooFewPoints { needed: usize, found: usize },
    /// A matrix with no rows or no columns.
    EmptyDataset,
    /// A row whose length differs from the first row.
    RaggedRows { row: usize, expected: usize, found: usize },
    /// NaN or infinite entry.
    NonFinite { row: usize, col: usize },
    /// Dimension with zero spread under the `error` policy.
    ZeroVariance(usize),
    /// Every dimension was constant under the `drop` policy.
    AllDimensionsConstant,
    /// The z-scoring factor must be finite and positive.
    BadFactor,
    DimensionMismatch { expected: usize, found: usize },
    LabelLengthMismatch { labels: usize, points: usize },
    /// A class id below the class count with no members.
    EmptyClass(usize),
    UnknownClass(usize),
    SameClass(usize),
    /// A class with a single member has no intra-class pairs.
    SingletonClass(usize),
    TooFewClasses(usize),
    EmptyDistances,
    TooFewBins(usize),
    BadRange { lo: f64, hi: f64 },
    InvalidSpec(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Variant name, used as a stable tag in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::EmptyDataset => "EmptyDataset",
            Error::RaggedRows { .. } => "RaggedRows",
            Error::NonFinite { .. } => "NonFinite",
            Error::ZeroVariance(_) => "ZeroVariance",
            Error::AllDimensionsConstant => "AllDimensionsConstant",
            Error::BadFactor => "BadFactor",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LabelLengthMismatch { .. } => "LabelLengthMismatch",
            Error::EmptyClass(_) => "EmptyClass",
            Error::UnknownClass(_) => "UnknownClass",
            Error::SameClass(_) => "SameClass",
            Error::SingletonClass(_) => "SingletonClass",
            Error::TooFewClasses(_) => "TooFewClasses",
            Error::EmptyDistances => "EmptyDistances",
            Error::TooFewBins(_) => "TooFewBins",
            Error::BadRange { .. } => "BadRange",
            Error::InvalidSpec(_) => "InvalidSpec",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Error::TooFewPoints { needed, found } => {
                write!(f, "need at least {needed} points, found {found}")
            }
            Error::EmptyDataset => write!(f, "dataset has no rows or no columns"),
            Error::RaggedRows { row, expected, found } => {
                write!(f, "row {row} has {found} columns, expected {expected}")
            }
            Error::NonFinite { row, col } => write!(f, "non-finite value at row {row}, column {col}"),
            Error::ZeroVariance(d) => write!(f, "dimension {d} is constant"),
            Error::AllDimensionsConstant => write!(f, "every dimension is constant"),
            Error::BadFactor => write!(f, "z-score factor must be finite and positive"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            Error::LabelLengthMismatch { labels, points } => {
                write!(f, "{labels} labels for {points} points")
            }
            Error::EmptyClass(c) => write!(f, "class {c} has no members"),
            Error::UnknownClass(c) => write!(f, "class {c} does not exist"),
            Error::SameClass(c) => write!(f, "class {c} given twice"),
            Error::SingletonClass(c) => write!(f, "class {c} has a single member"),
            Error::TooFewClasses(l) => write!(f, "need at least 2 classes, found {l}"),
            Error::EmptyDistances => write!(f, "no distances to bin"),
            Error::TooFewBins(b) => write!(f, "need at least 2 bins, got {b}"),
            Error::BadRange { lo, hi } => write!(f, "range [{lo}, {hi}] is empty"),
            Error::InvalidSpec(why) => write!(f, "{why}"),
        }
    }
}

impl core::error::Error for Error {}
