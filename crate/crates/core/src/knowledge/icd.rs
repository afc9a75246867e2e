use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// An ICD-10 code such as `R22.0` or `J00`.
///
/// A letter, two digits and an optional suffix of one to three alphanumerics
/// after a dot, so at most six significant characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IcdCode(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ICD-10 code `{0}`")]
pub struct InvalidIcdCode(pub String);

impl IcdCode {
    pub fn parse(text: &str) -> Result<Self, InvalidIcdCode> {
        if is_valid(text) {
            Ok(IcdCode(text.to_owned()))
        } else {
            Err(InvalidIcdCode(text.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The three-character category, e.g. `R68` for `R68.8`.
    pub fn category(&self) -> &str {
        &self.0[..3]
    }
}

fn is_valid(text: &str) -> bool {
    let b = text.as_bytes();
    if b.len() < 3 || !b[0].is_ascii_uppercase() || !b[1].is_ascii_digit() || !b[2].is_ascii_digit() {
        return false;
    }
    match &b[3..] {
        [] => true,
        [b'.', rest @ ..] => {
            (1..=3).contains(&rest.len()) && rest.iter().all(|c| c.is_ascii_digit() || c.is_ascii_uppercase())
        }
        _ => false,
    }
}

impl FromStr for IcdCode {
    type Err = InvalidIcdCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IcdCode::parse(s)
    }
}

impl TryFrom<String> for IcdCode {
    type Error = InvalidIcdCode;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        if is_valid(&value) {
            Ok(IcdCode(value))
        } else {
            Err(InvalidIcdCode(value))
        }
    }
}

impl From<IcdCode> for String {
    fn from(code: IcdCode) -> Self {
        code.0
    }
}

impl fmt::Display for IcdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
