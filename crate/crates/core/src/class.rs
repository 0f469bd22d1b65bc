use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Binary perceived-quality class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Class {
    Low,
    High,
}

impl Class {
    pub const ALL: [Class; 2] = [Class::Low, Class::High];

    pub fn index(self) -> usize {
        match self {
            Class::Low => 0,
            Class::High => 1,
        }
    }

    pub fn from_index(i: usize) -> Class {
        if i == 0 {
            Class::Low
        } else {
            Class::High
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Class::Low => "LOW",
            Class::High => "HIGH",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LOW" | "0" => Ok(Class::Low),
            "HIGH" | "1" => Ok(Class::High),
            other => Err(format!("unknown class label {other:?}")),
        }
    }
}
