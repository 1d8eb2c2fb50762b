use std::fmt;
use std::str::FromStr;

use crate::error::{GaborError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Tight,
    Dual,
}

/// Iteration family. `Tight(m)` / `Dual(m)` are the order-m polynomial
/// iterations; II = Tight(2), III = Tight(3), IV = Dual(2), V = Dual(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Algorithm I: averaged γ and S_k^{-1}γ.
    FrameInverse,
    Tight(usize),
    Dual(usize),
}

impl Algorithm {
    pub const I: Algorithm = Algorithm::FrameInverse;
    pub const II: Algorithm = Algorithm::Tight(2);
    pub const III: Algorithm = Algorithm::Tight(3);
    pub const IV: Algorithm = Algorithm::Dual(2);
    pub const V: Algorithm = Algorithm::Dual(3);

    pub const NAMED: [Algorithm; 5] = [Self::I, Self::II, Self::III, Self::IV, Self::V];

    pub fn target(&self) -> Target {
        match self {
            Algorithm::FrameInverse | Algorithm::Tight(_) => Target::Tight,
            Algorithm::Dual(_) => Target::Dual,
        }
    }

    /// Convergence order of the method (algorithm I counts as 2).
    pub fn order(&self) -> usize {
        match *self {
            Algorithm::FrameInverse => 2,
            Algorithm::Tight(m) | Algorithm::Dual(m) => m,
        }
    }

    pub fn from_order(target: Target, m: usize) -> Result<Algorithm> {
        if m < 1 {
            return Err(GaborError::InvalidConfig("order must be at least 1".into()));
        }
        Ok(match target {
            Target::Tight => Algorithm::Tight(m),
            Target::Dual => Algorithm::Dual(m),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Algorithm::FrameInverse => write!(f, "I"),
            Algorithm::Tight(2) => write!(f, "II"),
            Algorithm::Tight(3) => write!(f, "III"),
            Algorithm::Dual(2) => write!(f, "IV"),
            Algorithm::Dual(3) => write!(f, "V"),
            Algorithm::Tight(m) => write!(f, "tight{m}"),
            Algorithm::Dual(m) => write!(f, "dual{m}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = GaborError;

    /// Accepts I..V, `tight<m>` and `dual<m>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Self::I),
            "II" => Ok(Self::II),
            "III" => Ok(Self::III),
            "IV" => Ok(Self::IV),
            "V" => Ok(Self::V),
            _ => {
                let parse = |rest: &str| {
                    rest.parse::<usize>()
                        .ok()
                        .filter(|&m| m >= 1)
                        .ok_or_else(|| GaborError::InvalidArgument(format!("unknown algorithm {s:?}")))
                };
                if let Some(rest) = s.strip_prefix("tight") {
                    Ok(Algorithm::Tight(parse(rest)?))
                } else if let Some(rest) = s.strip_prefix("dual") {
                    Ok(Algorithm::Dual(parse(rest)?))
                } else {
                    Err(GaborError::InvalidArgument(format!("unknown algorithm {s:?}")))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    /// Every polynomial term divided by its own norm.
    Norm,
    /// g replaced by g/√B̂ once, raw polynomial afterwards.
    Initial(f64),
    /// Initial scaling with the optimal constant from the exact bounds.
    InitialOptimal,
    /// Optimal constant recomputed from the bounds of every iterand.
    ConstantOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopMode {
    /// Relative step below eps^{1/m}.
    Auto,
    /// Exactly `max_steps` steps.
    FixedSteps,
    Tolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub algorithm: Algorithm,
    pub scaling: Scaling,
    pub max_steps: usize,
    pub stop: StopMode,
}

impl IterationConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, scaling: Scaling::Norm, max_steps: 100, stop: StopMode::Auto }
    }

    pub fn scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn max_steps(mut self, steps: usize) -> Self {
        self.max_steps = steps;
        self
    }

    pub fn stop(mut self, stop: StopMode) -> Self {
        self.stop = stop;
        self
    }

    pub fn target(&self) -> Target {
        self.algorithm.target()
    }

    /// Threshold for the relative step size: √eps for quadratic methods,
    /// eps^{1/3} for cubic ones, eps^{1/m} in general.
    pub fn auto_threshold(&self) -> f64 {
        f64::EPSILON.powf(1.0 / self.algorithm.order().max(2) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.algorithm, self.scaling) {
            (Algorithm::FrameInverse, Scaling::Norm) => {}
            (Algorithm::FrameInverse, _) => {
                return Err(GaborError::InvalidConfig("algorithm I supports norm scaling only".into()))
            }
            (Algorithm::Tight(0) | Algorithm::Dual(0), _) => {
                return Err(GaborError::InvalidConfig("order must be at least 1".into()))
            }
            (_, Scaling::Initial(b)) if !(b > 0.0 && b.is_finite()) => {
                return Err(GaborError::InvalidConfig(format!("invalid scaling constant {b}")))
            }
            _ => {}
        }
        if let StopMode::Tolerance(t) = self.stop {
            if !(t > 0.0) {
                return Err(GaborError::InvalidConfig("tolerance must be positive".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let c2 = IterationConfig::new(Algorithm::II);
        assert!((c2.auto_threshold() - 1.4901161193847656e-8).abs() < 1e-20);
        let c3 = IterationConfig::new(Algorithm::V);
        assert!((c3.auto_threshold() - 6.055454452393343e-6).abs() < 1e-18);
        assert_eq!(IterationConfig::new(Algorithm::I).auto_threshold(), c2.auto_threshold());
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::NAMED.iter().chain(&[Algorithm::Tight(4), Algorithm::Dual(5)]) {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), *a);
        }
        assert!("VI".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::I.target(), Target::Tight);
        assert_eq!(Algorithm::from_order(Target::Dual, 3).unwrap(), Algorithm::V);
    }

    #[test]
    fn algorithm_one_is_norm_only() {
        let c = IterationConfig::new(Algorithm::I).scaling(Scaling::Initial(2.0));
        assert!(c.validate().is_err());
        assert!(IterationConfig::new(Algorithm::I).validate().is_ok());
        assert!(IterationConfig::new(Algorithm::II).scaling(Scaling::Initial(-1.0)).validate().is_err());
    }
}
