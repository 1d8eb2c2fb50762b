//! Error measures and spectral summaries.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::signal::Signal;
use crate::zak::{block_gram, SpectralSummary, ZakFactorization};

/// ⟨f, π(jM, lN) h⟩ for j < b, l < a, stored at `j·a + l`.
///
/// π(x, ω)h(t) = e^{2πiωt/L} h(t − x); the adjoint lattice has time step
/// M = L/b and frequency step N = L/a.
pub fn adjoint_correlations(f: &Signal, h: &Signal, lattice: &GaborLattice) -> Vec<Complex64> {
    let GaborLattice { len, a, b, m, .. } = *lattice;
    assert_eq!(f.len(), len);
    assert_eq!(h.len(), len);
    let fft = FftPlanner::new().plan_fft_forward(a);
    (0..b)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut folded = vec![Complex64::new(0.0, 0.0); a];
            for x in 0..len {
                folded[x % a] += f.values()[x] * h.at(x as i64 - (j * m) as i64).conj();
            }
            fft.process(&mut folded);
            folded
        })
        .collect()
}

fn off_origin_sum(corr: &[Complex64]) -> f64 {
    corr.iter().skip(1).map(|z| z.norm()).sum()
}

fn janssen_factor(lattice: &GaborLattice) -> f64 {
    (lattice.m * lattice.n) as f64 / lattice.len as f64
}

/// (MN/L) Σ_{(j,l)≠0} |⟨γ, π(jM, lN) γ⟩|; bounds ‖S_γ − (MN/L)‖γ‖² I‖.
pub fn dual_lattice_norm_tight(gamma: &Signal, lattice: &GaborLattice) -> f64 {
    janssen_factor(lattice) * off_origin_sum(&adjoint_correlations(gamma, gamma, lattice))
}

/// (MN/L) Σ_{(j,l)≠0} |⟨g, π(jM, lN) γ⟩|; bounds ‖Z − (MN/L)⟨g,γ⟩ I‖.
pub fn dual_lattice_norm_dual(g: &Signal, gamma: &Signal, lattice: &GaborLattice) -> f64 {
    janssen_factor(lattice) * off_origin_sum(&adjoint_correlations(g, gamma, lattice))
}

/// Tight dual lattice norm divided by the origin term (MN/L)‖γ‖².
pub fn relative_dual_lattice_norm_tight(gamma: &Signal, lattice: &GaborLattice) -> f64 {
    let corr = adjoint_correlations(gamma, gamma, lattice);
    off_origin_sum(&corr) / corr[0].norm()
}

/// Dual lattice norm divided by the origin term (MN/L)|⟨g, γ⟩|.
pub fn relative_dual_lattice_norm_dual(g: &Signal, gamma: &Signal, lattice: &GaborLattice) -> f64 {
    let corr = adjoint_correlations(g, gamma, lattice);
    off_origin_sum(&corr) / corr[0].norm()
}

/// max_{j,l} |⟨g, π(jM, lN) γ⟩ − κ δ_{j0} δ_{l0}| with κ = L/(MN).
pub fn wexler_raz_residual(g: &Signal, gamma: &Signal, lattice: &GaborLattice) -> f64 {
    let kappa = lattice.wexler_raz_constant();
    adjoint_correlations(g, gamma, lattice)
        .iter()
        .enumerate()
        .map(|(i, z)| if i == 0 { (z - kappa).norm() } else { z.norm() })
        .fold(0.0, f64::max)
}

/// (1 − Q^{1/4}) √(2/(1 + Q)).
pub fn kantorovich_bound_tight(q: f64) -> f64 {
    (1.0 - q.powf(0.25)) * (2.0 / (1.0 + q)).sqrt()
}

/// (1 − R^{1/2}) √(2/(1 + R)).
pub fn kantorovich_bound_dual(r: f64) -> f64 {
    (1.0 - r.sqrt()) * (2.0 / (1.0 + r)).sqrt()
}

/// Ratio above which an eigenvalue of Z counts as noticeably complex.
pub const COMPLEX_WARN: f64 = 1e-6;

/// Bounds of Z = S_{g,γ} from the eigenvalues of the blocks A^{g,γ}.
///
/// E and F are the smallest and largest eigenvalue moduli. `degenerate` is
/// set when some eigenvalue has nonpositive real part (Z indefinite), and
/// `complex_warning` when some |Im λ|/|Re λ| exceeds 1e−6, which signals
/// that γ has left the functional-calculus orbit of g.
pub fn z_bounds(phi_g: &ZakFactorization, phi_gamma: &ZakFactorization) -> Result<SpectralSummary> {
    let ev = block_gram(phi_g, phi_gamma)?.eigenvalues();
    if ev.len() != phi_g.lattice().blocks() * phi_g.lattice().p {
        return Err(GaborError::InvalidArgument("eigenvalue computation failed".into()));
    }
    let lower = ev.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let upper = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectralSummary {
        lower,
        upper,
        degenerate: ev.iter().any(|z| z.re <= 0.0),
        complex_warning: ev.iter().any(|z| z.im.abs() > COMPLEX_WARN * z.re.abs()),
    })
}

/// Window of values used for order estimation.
pub const ORDER_WINDOW: (f64, f64) = (1e-12, 0.6);

/// Least-squares slope of log e_{k+1} against log e_k.
///
/// Only the part of the sequence up to its minimum is used (later growth
/// is not convergence), and only pairs with both values inside
/// [`ORDER_WINDOW`]. At least two pairs are required.
pub fn convergence_order(errors: &[f64]) -> Result<f64> {
    let end = errors
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &e)| if e < best.1 { (i, e) } else { best })
        .0;
    let inside = |e: f64| e >= ORDER_WINDOW.0 && e <= ORDER_WINDOW.1;
    let pairs: Vec<(f64, f64)> = errors[..=end.min(errors.len().saturating_sub(1))]
        .windows(2)
        .filter(|w| inside(w[0]) && inside(w[1]))
        .map(|w| (w[0].ln(), w[1].ln()))
        .collect();
    if pairs.len() < 2 {
        return Err(GaborError::InsufficientData);
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(GaborError::InsufficientData);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::testing::random_signal;
    use crate::synthesis::{dense_frame_operator, reference_dual, reference_tight};
    use crate::windows::gaussian_window;
    use crate::zak::{factorize, frame_bounds};
    use nalgebra::DMatrix;

    fn lat(l: usize, a: usize, b: usize) -> GaborLattice {
        GaborLattice::new(l, a, b).unwrap()
    }

    fn brute(f: &Signal, h: &Signal, l: &GaborLattice) -> Vec<Complex64> {
        let mut out = vec![];
        for j in 0..l.b {
            for k in 0..l.a {
                out.push(f.inner(&h.tf_shift((j * l.m) as i64, (k * l.n) as i64)));
            }
        }
        out
    }

    fn op_norm(m: &DMatrix<Complex64>) -> f64 {
        crate::linalg::singular_values(m).unwrap()[0]
    }

    #[test]
    fn correlations_match_brute_force() {
        let l = lat(72, 6, 8);
        let f = random_signal(72, 1);
        let h = random_signal(72, 2);
        let fast = adjoint_correlations(&f, &h, &l);
        for (x, y) in fast.iter().zip(brute(&f, &h, &l)) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn janssen_representation_calibration() {
        // S = (MN/L) Σ ⟨g, π(jM,lN) g⟩ π(jM,lN), checked column by column
        let l = lat(48, 4, 6);
        let g = random_signal(48, 3);
        let s = dense_frame_operator(&g, &l).unwrap();
        let corr = adjoint_correlations(&g, &g, &l);
        let f = random_signal(48, 4);
        let mut sf = Signal::zeros(48);
        for j in 0..l.b {
            for k in 0..l.a {
                let c = corr[j * l.a + k];
                sf = &sf + &f.tf_shift((j * l.m) as i64, (k * l.n) as i64).scale(c);
            }
        }
        let sf = sf.scale_real(janssen_factor(&l));
        let want = &s * nalgebra::DVector::from_column_slice(f.values());
        assert!(sf.distance(&Signal::new(want.iter().cloned().collect())) < 1e-11);
    }

    #[test]
    fn canonical_windows_have_vanishing_norms() {
        let l = lat(432, 18, 18);
        let g = gaussian_window(432, 1.0);
        let gt = reference_tight(&g, &l).unwrap();
        let gd = reference_dual(&g, &l).unwrap();
        assert!(dual_lattice_norm_tight(&gt, &l) < 1e-10);
        assert!(dual_lattice_norm_dual(&g, &gd, &l) < 1e-10);
        assert!(wexler_raz_residual(&g, &gd, &l) < 1e-10);
        assert!(wexler_raz_residual(&gt, &gt, &l) < 1e-10);
        assert!(wexler_raz_residual(&g, &g, &l) > 1e-3);
    }

    #[test]
    fn norms_bound_operator_distance() {
        for (i, l) in [lat(48, 4, 6), lat(120, 10, 8), lat(240, 12, 15)].iter().enumerate() {
            let g = random_signal(l.len, 10 + i as u64);
            let gam = random_signal(l.len, 20 + i as u64);
            let k = janssen_factor(l);
            let id = DMatrix::<Complex64>::identity(l.len, l.len);
            let s = dense_frame_operator(&gam, l).unwrap();
            let dist = op_norm(&(&s - &id * Complex64::new(k * gam.norm_sqr(), 0.0)));
            assert!(dist <= dual_lattice_norm_tight(&gam, l) * (1.0 + 1e-12));
            // mixed operator Σ ⟨·, γ_λ⟩ g_λ
            let og = crate::synthesis::synthesis_matrix(&g, l).unwrap();
            let oh = crate::synthesis::synthesis_matrix(&gam, l).unwrap();
            let z = og.entries() * oh.entries().adjoint();
            let c = Complex64::new(k, 0.0) * g.inner(&gam);
            let dist = op_norm(&(&z - &id * c));
            assert!(dist <= dual_lattice_norm_dual(&g, &gam, l) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn swapped_dual_sum_is_equal() {
        let l = lat(60, 6, 5);
        let g = random_signal(60, 5);
        let gam = random_signal(60, 6);
        let x = dual_lattice_norm_dual(&g, &gam, &l);
        let y = dual_lattice_norm_dual(&gam, &g, &l);
        assert!((x - y).abs() < 1e-12 * x);
    }

    #[test]
    fn homogeneity() {
        let l = lat(60, 6, 5);
        let g = random_signal(60, 5);
        let gam = random_signal(60, 6);
        let t = dual_lattice_norm_tight(&gam.scale_real(-2.0), &l) / dual_lattice_norm_tight(&gam, &l);
        assert!((t - 4.0).abs() < 1e-12);
        let t = dual_lattice_norm_dual(&g.scale_real(3.0), &gam.scale_real(-0.5), &l)
            / dual_lattice_norm_dual(&g, &gam, &l);
        assert!((t - 1.5).abs() < 1e-12);
    }

    #[test]
    fn kantorovich_properties() {
        assert_eq!(kantorovich_bound_tight(1.0), 0.0);
        assert_eq!(kantorovich_bound_dual(1.0), 0.0);
        let grid: Vec<f64> = (1..=1000).map(|i| i as f64 / 1000.0).collect();
        for w in grid.windows(2) {
            assert!(kantorovich_bound_tight(w[1]) < kantorovich_bound_tight(w[0]));
            assert!(kantorovich_bound_dual(w[1]) < kantorovich_bound_dual(w[0]));
        }
    }

    #[test]
    fn z_bounds_special_cases() {
        let l = lat(432, 18, 18);
        let g = gaussian_window(432, 1.0);
        let pg = factorize(&g, &l).unwrap();
        let fb = frame_bounds(&block_gram(&pg, &pg).unwrap());
        let zb = z_bounds(&pg, &pg).unwrap();
        assert!((fb.lower - zb.lower).abs() < 1e-12 && (fb.upper - zb.upper).abs() < 1e-12);
        assert!(!zb.degenerate && !zb.complex_warning);
        let pd = factorize(&reference_dual(&g, &l).unwrap(), &l).unwrap();
        let zd = z_bounds(&pg, &pd).unwrap();
        // Z = I at the dual
        assert!((zd.lower - 1.0).abs() < 1e-8 && (zd.upper - 1.0).abs() < 1e-8);
    }

    #[test]
    fn order_of_synthetic_sequence() {
        let e: Vec<f64> = (0..6).map(|k| 10f64.powf(-(2f64.powi(k)))).collect();
        assert!((convergence_order(&e).unwrap() - 2.0).abs() < 0.05);
        let e: Vec<f64> = (0..5).map(|k| 0.5f64.powf(3f64.powi(k))).collect();
        assert!((convergence_order(&e).unwrap() - 3.0).abs() < 0.05);
        assert_eq!(convergence_order(&[0.1, 0.01]), Err(GaborError::InsufficientData));
        // growth after the minimum is ignored
        let mut e: Vec<f64> = (0..5).map(|k| 10f64.powf(-(2f64.powi(k)))).collect();
        e.extend([1e-15, 1e-10, 1e-5, 1e-2]);
        assert!((convergence_order(&e).unwrap() - 2.0).abs() < 0.05);
    }
}
