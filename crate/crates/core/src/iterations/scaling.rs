use super::config::Algorithm;
use crate::diagnostics::adjoint_correlations;
use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::signal::Signal;

/// Optimal initial scaling constant B̂ (tight) or F̂ (dual) for spectral
/// bounds `lower ≤ upper` (A, B for tight methods, E, F for dual ones).
pub fn optimal_scaling_constant(lower: f64, upper: f64, algorithm: Algorithm) -> Result<f64> {
    if !(lower > 0.0 && lower <= upper && upper.is_finite()) {
        return Err(GaborError::InvalidArgument(format!("invalid bounds ({lower}, {upper})")));
    }
    let (a, b) = (lower, upper);
    Ok(match algorithm {
        Algorithm::FrameInverse => (a * b).sqrt(),
        Algorithm::Tight(2) => (a + (a * b).sqrt() + b) / 3.0,
        Algorithm::Tight(3) => {
            0.3 * (b + a) + 0.4 * (0.5 * (b * b + a * a) + (b - a) * (b - a) / 16.0).sqrt()
        }
        Algorithm::Dual(2) => (a + b) / 2.0,
        Algorithm::Dual(3) => {
            (b + a) / 3.0 + (0.5 * (b * b + a * a) + 0.5 * (b - a) * (b - a)).sqrt() / 3.0
        }
        other => {
            return Err(GaborError::InvalidConfig(format!("no optimal scaling constant for {other}")))
        }
    })
}

/// B̂ = (MN/L) Σ_{j<b, l<a} |⟨g, π(jM, lN) g⟩|, an upper frame bound that
/// equals 1 for a canonical tight window.
pub fn upper_bound_estimate(g: &Signal, lattice: &GaborLattice) -> f64 {
    let k = (lattice.m * lattice.n) as f64 / lattice.len as f64;
    k * adjoint_correlations(g, g, lattice).iter().map(|z| z.norm()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::testing::random_signal;
    use crate::synthesis::reference_tight;
    use crate::windows::gaussian_window;
    use crate::zak::frame_bounds_of;

    #[test]
    fn degenerate_interval() {
        for alg in Algorithm::NAMED {
            let v = optimal_scaling_constant(0.37, 0.37, alg).unwrap();
            assert!((v - 0.37).abs() < 1e-15);
        }
        assert_eq!(optimal_scaling_constant(1.0, 3.0, Algorithm::IV).unwrap(), 2.0);
        assert!(optimal_scaling_constant(2.0, 1.0, Algorithm::II).is_err());
        assert!(optimal_scaling_constant(1.0, 2.0, Algorithm::Tight(4)).is_err());
    }

    #[test]
    fn estimate_is_one_for_tight_window() {
        let lat = GaborLattice::new(432, 18, 18).unwrap();
        let gt = reference_tight(&gaussian_window(432, 1.0), &lat).unwrap();
        assert!((upper_bound_estimate(&gt, &lat) - 1.0).abs() < 1e-10);
        assert!((frame_bounds_of(&gt, &lat).unwrap().upper - 1.0).abs() < 1e-10);
    }

    #[test]
    fn estimate_bounds_frame_bound_and_is_quadratic() {
        let lat = GaborLattice::new(432, 18, 18).unwrap();
        for seed in 0..50 {
            let g = random_signal(432, seed);
            let b = frame_bounds_of(&g, &lat).unwrap().upper;
            assert!(upper_bound_estimate(&g, &lat) >= b * (1.0 - 1e-12));
        }
        let g = random_signal(432, 99);
        let r = upper_bound_estimate(&g.scale_real(3.0), &lat) / upper_bound_estimate(&g, &lat);
        assert!((r - 9.0).abs() < 1e-10);
    }
}
