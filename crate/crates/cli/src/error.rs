use std::fmt;

use eulerseries::cohring::CohError;
use eulerseries::eulereng::EulerError;
use eulerseries::exactnum::ArithError;
use eulerseries::gradedmod::GradedError;
use eulerseries::trajcalc::TrajError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// An invariant check failed (exit 1).
    Check,
    /// Malformed or inconsistent input (exit 2).
    Input,
    /// Outside what the engine can handle, e.g. stacky poles (exit 3).
    Engine,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Check => 1,
            ErrorKind::Input => 2,
            ErrorKind::Engine => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrorKind::Check => "check",
            ErrorKind::Input => "input",
            ErrorKind::Engine => "engine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct CliError {
    pub kind: ErrorKind,
    pub code: &'static str,
    /// 1-based line and column in the input document.
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl CliError {
    pub fn input(code: &'static str, location: Option<(usize, usize)>, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Input,
            code,
            location,
            message: message.into(),
        }
    }

    pub fn engine(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Engine,
            code,
            location: None,
            message: message.into(),
        }
    }

    pub fn check(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Check,
            code,
            location: None,
            message: message.into(),
        }
    }
}

/// `error kind=<kind> code=<code> at=<line>:<col> msg=<message>` on one line.
impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error kind={} code={}", self.kind.name(), self.code)?;
        if let Some((l, c)) = self.location {
            write!(f, " at={l}:{c}")?;
        }
        write!(f, " msg={}", self.message.replace('\n', " "))
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::NotClearable { .. } => CliError::engine("not-clearable", e.to_string()),
            ArithError::DivisionByZero => CliError::input("division-by-zero", None, e.to_string()),
            _ => CliError::input("arith", None, e.to_string()),
        }
    }
}

impl From<CohError> for CliError {
    fn from(e: CohError) -> Self {
        match e {
            CohError::NotEffective(_) => CliError::engine("not-effective", e.to_string()),
            CohError::NoTangentModel => CliError::engine("no-tangent-model", e.to_string()),
            _ => CliError::input("cohomology", None, e.to_string()),
        }
    }
}

impl From<EulerError> for CliError {
    fn from(e: EulerError) -> Self {
        match e {
            EulerError::Coh(c) => c.into(),
            EulerError::Arith(a) => a.into(),
            EulerError::BoundViolated { .. } => CliError::check("bound-violated", e.to_string()),
            _ => CliError::input("section", None, e.to_string()),
        }
    }
}

impl From<GradedError> for CliError {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::Arith(a) => a.into(),
            _ => CliError::input("graded", None, e.to_string()),
        }
    }
}

impl From<TrajError> for CliError {
    fn from(e: TrajError) -> Self {
        match e {
            TrajError::Arith(a) => a.into(),
            TrajError::Pole { .. } => CliError::engine("pole", e.to_string()),
            _ => CliError::input("trajectory", None, e.to_string()),
        }
    }
}
