//! Pointwise and two-valued Zak-domain recursions with known thresholds.

use num_complex::Complex64;

use crate::error::{GaborError, Result};

/// Γ_{k+1} = (3/2)Γ_k − (1/2)|Γ_k|²Γ_k; returns Γ_0..Γ_steps.
pub fn pointwise_tight(gamma0: Complex64, steps: usize) -> Vec<Complex64> {
    let mut out = vec![gamma0];
    let mut z = gamma0;
    for _ in 0..steps {
        z = z * (1.5 - 0.5 * z.norm_sqr());
        out.push(z);
    }
    out
}

/// Γ_{k+1} = 2Γ_k − |Γ_k|² G; returns Γ_0..Γ_steps.
pub fn pointwise_dual(gamma0: Complex64, g: Complex64, steps: usize) -> Vec<Complex64> {
    let mut out = vec![gamma0];
    let mut z = gamma0;
    for _ in 0..steps {
        z = 2.0 * z - z.norm_sqr() * g;
        out.push(z);
    }
    out
}

/// Two-valued function: c on a set of measure 1 − ε, d on a set of measure ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointState {
    pub c: f64,
    pub d: f64,
    pub eps: f64,
}

impl TwoPointState {
    /// ((1 − ε)c² + εd²)^{1/2}
    pub fn norm(&self) -> f64 {
        self.weighted(self.c, self.d)
    }

    fn weighted(&self, c: f64, d: f64) -> f64 {
        ((1.0 - self.eps) * c * c + self.eps * d * d).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoPointAlgorithm {
    II,
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoPointClass {
    /// Fixed point with d = c > 0.
    BothToOne,
    /// Fixed point with d = −c.
    SignFlip,
    /// Fixed point with d/c = 1/x (dual recursion).
    Reciprocal,
    /// d stays negative (dual recursion).
    NegativeD,
    /// Bounded without settling at a fixed point.
    Chaotic,
    Unbounded,
    /// Fixed point not matching any of the above.
    Other,
}

impl TwoPointClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::BothToOne => "both_to_one",
            Self::SignFlip => "sign_flip",
            Self::Reciprocal => "reciprocal",
            Self::NegativeD => "negative_d",
            Self::Chaotic => "chaotic",
            Self::Unbounded => "unbounded",
            Self::Other => "other",
        }
    }
}

/// Norm-scaled recursion for Γ_0 = G = (1 on N, x on M).
pub fn two_point_trace(x: f64, eps: f64, algorithm: TwoPointAlgorithm, steps: usize) -> Result<Vec<TwoPointState>> {
    if !(x > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(GaborError::InvalidArgument(format!("need x > 0 and 0 < ε < 1, got x = {x}, ε = {eps}")));
    }
    let mut s = TwoPointState { c: 1.0, d: x, eps };
    let mut out = vec![s];
    for _ in 0..steps {
        let n1 = s.norm();
        let (c, d) = match algorithm {
            TwoPointAlgorithm::II => {
                let n3 = s.weighted(s.c.powi(3), s.d.powi(3));
                (1.5 * s.c / n1 - 0.5 * s.c.powi(3) / n3, 1.5 * s.d / n1 - 0.5 * s.d.powi(3) / n3)
            }
            TwoPointAlgorithm::IV => {
                let (tc, td) = (s.c * s.c, s.d * s.d * x);
                let n2 = s.weighted(tc, td);
                (2.0 * s.c / n1 - tc / n2, 2.0 * s.d / n1 - td / n2)
            }
        };
        s = TwoPointState { c, d, eps };
        out.push(s);
    }
    Ok(out)
}

/// Steps inspected at the end of a run.
pub const TAIL: usize = 50;
const FIXED_TOL: f64 = 1e-10;
const RATIO_TOL: f64 = 1e-6;
const BOUND: f64 = 1e8;

/// Classify the long-run behaviour of the norm-scaled two-point recursion.
///
/// Fixed points are identified by their ratio d/c; any bounded orbit that
/// does not settle (periodic or not) is `Chaotic`.
pub fn two_point_norm_scaled(x: f64, eps: f64, algorithm: TwoPointAlgorithm, steps: usize) -> Result<TwoPointClass> {
    let tr = two_point_trace(x, eps, algorithm, steps.max(TAIL + 1))?;
    let tail = &tr[tr.len() - TAIL..];
    if tail.iter().any(|s| !s.c.is_finite() || !s.d.is_finite() || s.c.abs().max(s.d.abs()) > BOUND) {
        return Ok(TwoPointClass::Unbounded);
    }
    if algorithm == TwoPointAlgorithm::IV && tail.iter().all(|s| s.d < 0.0) {
        return Ok(TwoPointClass::NegativeD);
    }
    let moved = tail
        .windows(2)
        .map(|w| (w[1].c - w[0].c).abs().max((w[1].d - w[0].d).abs()))
        .fold(0.0, f64::max);
    let last = tail[TAIL - 1];
    let scale = last.c.abs().max(last.d.abs());
    if moved > FIXED_TOL * scale {
        return Ok(TwoPointClass::Chaotic);
    }
    let ratio = last.d / last.c;
    let near = |target: f64| (ratio - target).abs() <= RATIO_TOL * target.abs();
    Ok(match algorithm {
        TwoPointAlgorithm::II if near(1.0) => TwoPointClass::BothToOne,
        TwoPointAlgorithm::II if near(-1.0) => TwoPointClass::SignFlip,
        TwoPointAlgorithm::IV if near(1.0 / x) => TwoPointClass::Reciprocal,
        _ => TwoPointClass::Other,
    })
}
