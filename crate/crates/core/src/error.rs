use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("odd characteristic required, got {0}")]
    NotOddPrime(u64),
    #[error("field {p}^{r} exceeds the configured size bound")]
    TooLarge { p: u64, r: u32 },
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("degree {source_degree} field does not embed into degree {target_degree} field")]
    NotSubfield { source_degree: u32, target_degree: u32 },
    #[error("source modulus has no root in the target field")]
    NoRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the line is not contained in the cubic")]
    LineNotOnCubic,
    #[error("line matrix does not have rank 2")]
    DegenerateLine,
    #[error("cubic form is identically zero")]
    ZeroCubic,
    #[error("monomial {0:?} does not have degree 3")]
    BadMonomial([u8; 5]),
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("delta coherence violated at {point:?}: -delta1 and -delta2 have different square classes")]
    Incoherent { point: [u64; 3] },
    #[error("enumeration of {needed} points exceeds the budget of {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeilError {
    #[error("trace vector is not admissible: Newton step {step} is not integral")]
    NonIntegralNewton { step: usize },
    #[error("missing traces: need {needed}, got {got}")]
    MissingTraces { needed: usize, got: usize },
    #[error("non-exact division in {0}")]
    InexactDivision(&'static str),
    #[error("negative point count {count} for r = {r}")]
    NegativeCount { r: u32, count: alloc::string::String },
    #[error("root finder did not converge (max residual {residual:e})")]
    NoConvergence { residual: f64 },
}
