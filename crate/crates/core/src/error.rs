use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("input depends on x0; CK extension needs data on the hyperplane x0 = 0")]
    NonRestrictedInput,
    #[error("polynomial is not Fueter regular")]
    NotRegular,
    #[error("function is not axial: {0}")]
    NotAxial(String),
    #[error("Appell expansion does not reproduce the input")]
    ExpansionMismatch,
    #[error("weight sequences differ: {0} vs {1}")]
    WeightMismatch(String, String),
    #[error("point outside the convergence domain: {0}")]
    OutOfDomain(String),
    #[error("quadrature defect {defect:e} exceeds tolerance {tolerance:e}: {context}")]
    QuadratureFailure {
        context: String,
        defect: f64,
        tolerance: f64,
    },
    #[error("result depends on the imaginary unit (spread {0:e})")]
    UnitDependence(f64),
    #[error("quadrature rule not exact for degree {requested} (exact up to {exact})")]
    ExactnessExceeded { requested: usize, exact: usize },
    #[error("coefficient and symbolic modes disagree: {0}")]
    ModeDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short variant name, used in CLI diagnostics and reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Index(_) => "IndexError",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::NonRestrictedInput => "NonRestrictedInput",
            Error::NotRegular => "NotRegular",
            Error::NotAxial(_) => "NotAxial",
            Error::ExpansionMismatch => "ExpansionMismatch",
            Error::WeightMismatch(..) => "WeightMismatch",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::UnitDependence(_) => "UnitDependence",
            Error::ExactnessExceeded { .. } => "ExactnessExceeded",
            Error::ModeDisagreement(_) => "ModeDisagreement",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}
