use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("input error: {0}")]
    Input(String),
    #[error("no rational line found over F_{p}^e for e in {from}..={to}; pass a line or a larger base extension")]
    NoLine { p: u64, from: u32, to: u32 },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
            AppError::NoLine { .. } => 3,
            AppError::Resource(_) | AppError::Io { .. } => 4,
            AppError::Invariant(_) => 5,
        }
    }
}

impl From<fanozeta_core::CountError> for AppError {
    fn from(e: fanozeta_core::CountError) -> Self {
        use fanozeta_core::CountError::*;
        match e {
            Budget { .. } | Field(_) => AppError::Resource(e.to_string()),
            Incoherent { .. } => AppError::Invariant(e.to_string()),
        }
    }
}

impl From<fanozeta_core::WeilError> for AppError {
    fn from(e: fanozeta_core::WeilError) -> Self {
        AppError::Invariant(e.to_string())
    }
}

impl From<fanozeta_core::GeometryError> for AppError {
    fn from(e: fanozeta_core::GeometryError) -> Self {
        use fanozeta_core::GeometryError::*;
        match e {
            Budget { .. } => AppError::Resource(e.to_string()),
            Field(_) => AppError::Resource(e.to_string()),
            _ => AppError::Input(e.to_string()),
        }
    }
}
