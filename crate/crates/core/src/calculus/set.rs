use std::fmt;
use std::str::FromStr;

use super::operator::CanonicalOperator;
use crate::error::Error;

/// Which of the four generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetLabel {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl SetLabel {
    pub const ALL: [SetLabel; 4] = [SetLabel::Q1, SetLabel::Q2, SetLabel::Q3, SetLabel::Q4];

    pub fn as_str(&self) -> &'static str {
        match self {
            SetLabel::Q1 => "q1",
            SetLabel::Q2 => "q2",
            SetLabel::Q3 => "q3",
            SetLabel::Q4 => "q4",
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "q1" => Ok(SetLabel::Q1),
            "q2" => Ok(SetLabel::Q2),
            "q3" => Ok(SetLabel::Q3),
            "q4" => Ok(SetLabel::Q4),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// Original (`H = γ₀γₐpₐ + γ₀γ₄m`) or canonical (`H^c = γ₀E`) picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Picture {
    Original,
    Canonical,
}

impl Picture {
    pub fn as_str(&self) -> &'static str {
        match self {
            Picture::Original => "original",
            Picture::Canonical => "canonical",
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Picture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "original" => Ok(Picture::Original),
            "canonical" => Ok(Picture::Canonical),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// Ten generators `P₀, Pₐ, J_ab, J₀ₐ`, all on-shell reduced.
///
/// Rotations are stored cyclically as `J₂₃, J₃₁, J₁₂`.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub label: String,
    pub picture: Picture,
    pub energy: CanonicalOperator,
    pub momentum: [CanonicalOperator; 3],
    pub rotation: [CanonicalOperator; 3],
    pub boost: [CanonicalOperator; 3],
}

/// Generator names in reporting order.
pub const GENERATOR_NAMES: [&str; 10] = ["P0", "P1", "P2", "P3", "J23", "J31", "J12", "J01", "J02", "J03"];

impl OperatorSet {
    pub fn dim(&self) -> usize {
        self.energy.dim()
    }

    /// `P_μ`, `μ ∈ 0..=3`.
    pub fn p(&self, mu: usize) -> &CanonicalOperator {
        if mu == 0 {
            &self.energy
        } else {
            &self.momentum[mu - 1]
        }
    }

    /// `J_μν` as `(sign, generator)`; `None` on the diagonal.
    pub fn j(&self, mu: usize, nu: usize) -> Option<(f64, &CanonicalOperator)> {
        if mu == nu {
            return None;
        }
        let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        let op = match (lo, hi) {
            (0, a) => &self.boost[a - 1],
            (2, 3) => &self.rotation[0],
            (1, 3) => return Some((-sign, &self.rotation[1])),
            (1, 2) => &self.rotation[2],
            _ => return None,
        };
        Some((sign, op))
    }

    /// All ten generators with their names, in [`GENERATOR_NAMES`] order.
    pub fn generators(&self) -> Vec<(&'static str, &CanonicalOperator)> {
        let ops = [
            &self.energy,
            &self.momentum[0],
            &self.momentum[1],
            &self.momentum[2],
            &self.rotation[0],
            &self.rotation[1],
            &self.rotation[2],
            &self.boost[0],
            &self.boost[1],
            &self.boost[2],
        ];
        GENERATOR_NAMES.iter().copied().zip(ops).collect()
    }

    /// Same set with the boosts replaced.
    pub fn with_boosts(&self, boost: [CanonicalOperator; 3], label: impl Into<String>) -> Self {
        Self { label: label.into(), boost, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for l in SetLabel::ALL {
            assert_eq!(l.as_str().parse::<SetLabel>().unwrap(), l);
        }
        assert_eq!("q5".parse::<SetLabel>().unwrap_err(), Error::UnknownLabel("q5".into()));
        assert_eq!("canonical".parse::<Picture>().unwrap(), Picture::Canonical);
    }
}
