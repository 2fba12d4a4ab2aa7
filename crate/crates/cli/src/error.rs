use lacunary_core::Error as CoreError;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// A failed run, rendered on stderr as `{code, message, context}`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub context: Value,
    pub exit: i32,
}

impl CliError {
    pub fn validation(code: &str, message: impl Into<String>) -> Self {
        Self { code: code.into(), message: message.into(), context: Value::Null, exit: EXIT_VALIDATION }
    }

    pub fn with_context(mut self, context: Value) -> Self {
        self.context = context;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({ "code": self.code, "message": self.message, "context": self.context })
    }
}

fn core_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::Domain(_) => "domain",
        CoreError::Overflow { .. } => "overflow",
        CoreError::Convergence { .. } => "convergence",
        CoreError::NonConvergence { .. } => "non_convergence",
        CoreError::GapViolation { .. } => "gap_violation",
        CoreError::NonMonotone { .. } => "non_monotone",
        CoreError::Precondition(_) => "precondition",
        CoreError::LengthMismatch { .. } => "length_mismatch",
        CoreError::Capacity { .. } => "capacity",
        CoreError::DimensionMismatch { .. } => "dimension_mismatch",
        CoreError::ZeroPolynomial => "zero_polynomial",
        CoreError::SpectrumNotContained { .. } => "spectrum_not_contained",
        CoreError::Parse(_) => "parse",
    }
}

fn core_context(e: &CoreError) -> Value {
    match e {
        CoreError::Overflow { degree } => json!({ "degree": degree }),
        CoreError::Convergence { degree, iterations } => json!({ "degree": degree, "iterations": iterations }),
        CoreError::NonConvergence { nodes, last, previous } => {
            json!({ "nodes": nodes, "last": last, "previous": previous })
        }
        CoreError::GapViolation { index, gap, required } => {
            json!({ "index": index, "gap": gap, "required": required })
        }
        CoreError::NonMonotone { index } => json!({ "index": index }),
        CoreError::LengthMismatch { expected, got } => json!({ "expected": expected, "got": got }),
        CoreError::Capacity { needed, available } => json!({ "needed": needed, "available": available }),
        CoreError::DimensionMismatch { left, right } => json!({ "left": left, "right": right }),
        CoreError::SpectrumNotContained { degree } => json!({ "degree": degree }),
        _ => Value::Null,
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self {
            code: core_code(&e).into(),
            message: e.to_string(),
            context: core_context(&e),
            exit: if e.is_numeric() { EXIT_NUMERIC } else { EXIT_VALIDATION },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::validation("io", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::validation("io", e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let numeric: CliError = CoreError::NonConvergence { nodes: 8, last: 1.0, previous: 2.0 }.into();
        assert_eq!(numeric.exit, EXIT_NUMERIC);
        let gap: CliError = CoreError::GapViolation { index: 1, gap: 2, required: 3 }.into();
        assert_eq!(gap.exit, EXIT_VALIDATION);
        assert_eq!(gap.to_json()["context"]["required"], 3);
        assert_eq!(gap.to_json()["code"], "gap_violation");
    }
}
