use ldl::diff::DiffError;
use ldl::metatheory::MetaError;
use ldl::optimize::OptError;
use ldl::semantics::SemanticsError;
use ldl::speclang::SpecError;
use serde::Serialize;

/// How a failure maps onto the exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// Bad flags or input: exit 2.
    Usage,
    /// A check ran and failed: exit 1.
    Check,
    /// Anything else: exit 3.
    Internal,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Check => 1,
            Kind::Usage => 2,
            Kind::Internal => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: Kind,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

impl CliError {
    pub fn new(kind: Kind, code: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, code, message: message.into(), line: None, col: None }
    }

    pub fn usage(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, code, message)
    }

    pub fn check(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Kind::Check, code, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(Kind::Internal, "internal", message)
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        let code = match e {
            SpecError::Parse(_) => "parse_error",
            SpecError::Undeclared { .. } => "undeclared",
            SpecError::Duplicate { .. } => "duplicate",
            SpecError::InvalidParameter(_) => "invalid_parameter",
            SpecError::Type { .. } | SpecError::Lang(_) => "type_error",
        };
        let mut err = CliError::usage(code, e.to_string());
        if let Some((line, col)) = e.position() {
            err.line = Some(line);
            err.col = Some(col);
        }
        err
    }
}

impl From<SemanticsError> for CliError {
    fn from(e: SemanticsError) -> Self {
        let code = match e {
            SemanticsError::NegationUndefined => "negation_undefined",
            SemanticsError::DomainViolation { .. } => "domain_violation",
            SemanticsError::NonDifferentiablePoint => "non_differentiable",
            SemanticsError::InvalidParameter(_) => "invalid_parameter",
            _ => "semantics",
        };
        CliError::usage(code, e.to_string())
    }
}

impl From<DiffError> for CliError {
    fn from(e: DiffError) -> Self {
        match e {
            DiffError::Semantics(s) => s.into(),
            DiffError::NoConvergence { .. } | DiffError::NonFinite { .. } => CliError::check("no_derivative", e.to_string()),
            other => CliError::usage("leaf", other.to_string()),
        }
    }
}

impl From<MetaError> for CliError {
    fn from(e: MetaError) -> Self {
        match e {
            MetaError::Semantics(s) => s.into(),
            MetaError::Diff(d) => d.into(),
            MetaError::InvalidParameter(m) => CliError::usage("invalid_parameter", m),
            other => CliError::usage("metatheory", other.to_string()),
        }
    }
}

impl From<OptError> for CliError {
    fn from(e: OptError) -> Self {
        match e {
            OptError::Diff(d) => d.into(),
            OptError::InvalidParameter(m) => CliError::usage("invalid_parameter", m),
            other => CliError::check("optimize", other.to_string()),
        }
    }
}
