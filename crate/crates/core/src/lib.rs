//! Exact Weingarten calculus and trace cumulants for truncations of Haar
//! unitary and orthogonal matrices, with a Monte Carlo harness for the
//! centred partial-trace process `W(s, t) = T_{⌊ns⌋,⌊nt⌋} - ⌊ns⌋⌊nt⌋/n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub mod combinatorics;
pub mod cumulants;
pub mod empirics;
pub mod error;
pub mod haar;
pub mod weingarten;

pub use error::{Error, Result};

/// The compact group the random matrix is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Unitary,
    Orthogonal,
}

impl Group {
    /// Dyson index: 2 for unitary, 1 for orthogonal.
    pub fn beta(self) -> u32 {
        match self {
            Group::Unitary => 2,
            Group::Orthogonal => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Unitary => "unitary",
            Group::Orthogonal => "orthogonal",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unitary" | "u" => Ok(Group::Unitary),
            "orthogonal" | "o" => Ok(Group::Orthogonal),
            _ => Err(Error::Argument(format!("unknown group {s:?}"))),
        }
    }
}
