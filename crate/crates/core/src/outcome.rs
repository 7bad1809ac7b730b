//! Dichotomic outcome encoding shared by every table in the crate.
//!
//! Outcomes carry the values `+1` and `-1`. Tables store them by index,
//! with `+1 -> 0` and `-1 -> 1`. Settings are plain indices `0` and `1`.

use serde::{Deserialize, Serialize};

/// A two-valued measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(index: usize) -> Self {
        match index {
            0 => Outcome::Plus,
            1 => Outcome::Minus,
            _ => panic!("outcome index {index} out of range"),
        }
    }

    /// The eigenvalue, `+1.0` or `-1.0`.
    pub fn value(self) -> f64 {
        sign(self.index())
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Eigenvalue for a table index: `0 -> +1.0`, `1 -> -1.0`.
#[inline]
pub fn sign(index: usize) -> f64 {
    if index == 0 {
        1.0
    } else {
        -1.0
    }
}
