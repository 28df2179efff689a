use thiserror::Error;

/// Errors raised by series algebra, classification, quadrature and symmetry code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("composition requires positive valuation (inner valuation {0})")]
    CompositionValuation(i32),
    #[error("composition requires an outer series without poles (outer valuation {0})")]
    OuterPole(i32),
    #[error("essential exponential: exp of a series with valuation {0}")]
    EssentialExponential(i32),
    #[error("log of non-unit series (valuation {0})")]
    LogOfNonUnit(i32),
    #[error("series reversion needs valuation exactly 1 (got {0})")]
    Reversion(i32),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid developing map: {0}")]
    InvalidMap(String),
    #[error("degenerate developing map: the metric density vanishes identically")]
    DegenerateMap,
    #[error("evaluation at puncture")]
    EvaluationAtPuncture,
    #[error("log singularity on grid at {re}{im:+}i")]
    LogSingularityOnGrid { re: f64, im: f64 },
    #[error("pole-order misdetection: leading coefficient of the pole part vanishes")]
    PoleOrderMisdetection,
    #[error("working order {order} too small: need at least {required}")]
    InsufficientOrder { order: i32, required: i32 },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("invalid normal form: {0}")]
    InvalidNormalForm(String),
    #[error("invalid coordinate change: {0}")]
    InvalidChange(String),
    #[error("annulus touches a zero or singularity of the density at radius {radius}")]
    AnnulusSingular { radius: f64 },
    #[error("invalid area scan: {0}")]
    InvalidScan(String),
    #[error("symmetry family {family} does not act on the {form} normal form")]
    FamilyMismatch { family: String, form: String },
    #[error("invalid symmetry element: {0}")]
    InvalidElement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
