//! Pass/fail records shared by every verification routine.

use serde::{Serialize, Serializer};

/// Serialized as `{name, status: "pass" | "fail", witness?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(rename = "status", serialize_with = "status")]
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn status<S: Serializer>(passed: &bool, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(if *passed { "pass" } else { "fail" })
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// Pass if `ok`, otherwise fail with the lazily built witness.
    pub fn expect(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    /// A passing check that carries an informational note.
    pub fn note(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: Some(note.into()),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// The failing subset, for assertion messages.
pub fn failures(checks: &[Check]) -> Vec<&Check> {
    checks.iter().filter(|c| !c.passed).collect()
}
