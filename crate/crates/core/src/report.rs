//! Verdicts and number formatting shared by scan and verification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Inequality held on every instance.
    Holds,
    /// Some instance violated the inequality.
    Violated,
    /// A scanned quantity stays bounded (or a ratio trend is flat).
    Bounded,
    /// A scanned quantity blows up.
    Divergent,
    /// A series converges.
    Converges,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Bounded => "bounded",
            Verdict::Divergent => "divergent",
            Verdict::Converges => "converges",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// 17 significant digits, so that reruns diff cleanly and values round-trip.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_digits() {
        for x in [0.1, 1.0 / 3.0, 6.0, 1e-300, -2.5e17] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }
}
