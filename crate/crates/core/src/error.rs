use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?} (expected an integer or p/q)")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row}, {col}) is not an integer")]
    NonIntegral { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix has a non-integral entry")]
    NonIntegral,
    #[error("lattice is degenerate (discriminant 0)")]
    Degenerate,
    #[error("pairing matrix has {rows} rows but only {cols} columns; cannot certify saturation")]
    TooManyRows { rows: usize, cols: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FujikiError {
    #[error("slot count {0} is odd")]
    OddSlots(usize),
    #[error("slot count {slots} exceeds the cap of {cap}")]
    TooManySlots { slots: usize, cap: usize },
    #[error("expected {expected} classes, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("class index {index} out of range for a {size}x{size} form")]
    ClassOutOfRange { index: usize, size: usize },
    #[error("Fujiki constant must be positive")]
    NonPositiveConstant,
    #[error("Beauville gram must be square and symmetric")]
    BadGram,
    #[error("family {family} is not defined at n = {n}")]
    FamilyMismatch { family: &'static str, n: u32 },
    #[error("malformed Fujiki input: {0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("malformed solver input: {0}")]
    Input(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("pattern {pattern} has degree {degree}, expected {expected}")]
    WrongDegree {
        pattern: String,
        degree: u32,
        expected: u32,
    },
    #[error(
        "pattern {pattern}: unit_power {got} does not match {reference_slots} reference slots"
    )]
    UnitPower {
        pattern: String,
        got: i64,
        reference_slots: u32,
    },
    #[error("missing required datum {0}")]
    MissingDatum(String),
    #[error("reference-only datum must be positive, got {0}")]
    NonPositiveReference(String),
    #[error("reference square must be positive, got {0}")]
    NonPositiveReferenceSquare(String),
    #[error("pattern {pattern}: odd reference count forces value 0, got {value}")]
    NonOrthogonal { pattern: String, value: String },
    #[error("inconsistent data for {pattern}: datum says {given}, solution predicts {predicted}")]
    Inconsistent {
        pattern: String,
        given: String,
        predicted: String,
    },
    #[error("no positive scale makes the assembled form integral (all entries vanish)")]
    NoScale,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fujiki(#[from] FujikiError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("genus must satisfy 1 <= p <= {cap}, got {p}")]
    Genus { p: u32, cap: u32 },
    #[error("degree {q} out of range 0..={max}")]
    Degree { q: usize, max: usize },
    #[error("exterior power of dimension {dim} exceeds the cap of {cap}")]
    WedgeTooLarge { dim: usize, cap: usize },
    #[error("closed forms exist only for degree 1 or 2, got {0}")]
    NoClosedForm(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("contradiction at term {term:?}: interval [{lo}, {hi}] is empty\n{trace}")]
    Contradiction {
        term: String,
        lo: String,
        hi: String,
        trace: String,
    },
    #[error("lower bound of {term:?} grows without limit, so no finite dimensions fit\n{trace}")]
    Unbounded { term: String, trace: String },
    #[error("malformed ledger: {0}")]
    Malformed(String),
}
