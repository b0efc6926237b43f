use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Named search-budget sizes shared by the unordered and ordered analyzers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Preset {
    Small,
    #[default]
    Default,
    Large,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(Preset::Small),
            "default" => Ok(Preset::Default),
            "large" => Ok(Preset::Large),
            other => Err(Error::domain(format!(
                "unknown budget preset {other:?} (expected small, default or large)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Small => "small",
            Preset::Default => "default",
            Preset::Large => "large",
        })
    }
}
