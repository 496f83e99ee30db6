//! Tolerance tiers shared by tests, the CLI and the acceptance suite.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Pure matrix algebra and exact reductions.
pub const EXACT: f64 = 1e-12;

/// A named accuracy tier. Each tier covers computations of similar depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    /// Algebraic identities evaluated on values.
    Algebra,
    /// Anything involving one derivative of the tetrad or field.
    FirstDerivative,
    /// Formulation equivalence and curvature.
    Curvature,
    /// Second covariant derivatives against Riemann contractions.
    Identity,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Algebra, Tier::FirstDerivative, Tier::Curvature, Tier::Identity];

    pub fn default_value(self) -> f64 {
        match self {
            Tier::Algebra => 1e-10,
            Tier::FirstDerivative => 1e-9,
            Tier::Curvature => 1e-8,
            Tier::Identity => 1e-7,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tier::Algebra => "algebra",
            Tier::FirstDerivative => "first_derivative",
            Tier::Curvature => "curvature",
            Tier::Identity => "identity",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Tier::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown tolerance tier '{s}'")))
    }
}

/// Tier values with optional overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    values: [f64; 4],
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { values: Tier::ALL.map(Tier::default_value) }
    }
}

impl Tolerances {
    pub fn get(&self, tier: Tier) -> f64 {
        self.values[tier as usize]
    }

    pub fn set(&mut self, tier: Tier, value: f64) -> Result<(), Error> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Config(format!("tolerance for {tier} must be positive, got {value}")));
        }
        self.values[tier as usize] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Tier, f64)> + '_ {
        Tier::ALL.into_iter().map(|t| (t, self.get(t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiers_are_ordered_and_parse() {
        let t = Tolerances::default();
        assert!(t.get(Tier::Algebra) < t.get(Tier::FirstDerivative));
        assert!(t.get(Tier::Curvature) < t.get(Tier::Identity));
        for tier in Tier::ALL {
            assert_eq!(tier.name().parse::<Tier>().unwrap(), tier);
        }
        assert!("loose".parse::<Tier>().is_err());
    }

    #[test]
    fn overrides_must_be_positive() {
        let mut t = Tolerances::default();
        t.set(Tier::Identity, 1e-6).unwrap();
        assert_eq!(t.get(Tier::Identity), 1e-6);
        assert!(t.set(Tier::Algebra, 0.0).is_err());
        assert!(t.set(Tier::Algebra, f64::NAN).is_err());
    }
}
