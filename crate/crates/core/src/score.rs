//! Extended-real choice scores.

use std::cmp::Ordering;
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A choice score: a finite real, or the minus-infinity sentinel given to
/// choices with no evidence (zero denominator, unknown word, zero vector).
///
/// Ordering is total; the sentinel is below every finite value.
#[derive(Debug, Clone, Copy)]
pub struct Score(f64);

impl Score {
    pub const MINUS_INFINITY: Score = Score(f64::NEG_INFINITY);

    /// Wraps a value. NaN is mapped to the sentinel.
    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            Score::MINUS_INFINITY
        } else {
            Score(value)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_minus_infinity(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `numerator / denominator`, or the sentinel when the denominator is zero.
    pub fn ratio(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            Score::MINUS_INFINITY
        } else {
            Score(numerator as f64 / denominator as f64)
        }
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        // -0.0 and 0.0 compare equal
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_minus_infinity() {
            f.write_str("-inf")
        } else if let Some(precision) = f.precision() {
            write!(f, "{:.*}", precision, self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_minus_infinity() {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(Score::new(v)),
            Repr::Text(s) if s == "-inf" => Ok(Score::MINUS_INFINITY),
            Repr::Text(s) => Err(de::Error::custom(format!("invalid score {s:?}"))),
        }
    }
}

/// Index of the maximum score (lowest index wins ties) and every index
/// attaining it. `None` for an empty slice.
pub fn argmax(scores: &[Score]) -> Option<(usize, Vec<usize>)> {
    let best = *scores.iter().max()?;
    let tied: Vec<usize> = scores
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == best)
        .map(|(i, _)| i)
        .collect();
    Some((tied[0], tied))
}
