use gabiter_core::diagnostics::{dual_lattice_norm_tight, wexler_raz_residual};
use gabiter_core::synthesis::{reference_dual, reference_tight};
use gabiter_core::zak::frame_bounds_of;
use gabiter_core::*;
use proptest::prelude::*;

const LATTICES: [(usize, usize, usize); 5] = [(48, 4, 6), (60, 6, 5), (144, 12, 9), (240, 12, 12), (432, 18, 18)];

#[test]
fn direct_methods_match_dense_references() {
    for (l, a, b) in LATTICES {
        let lat = GaborLattice::new(l, a, b).unwrap();
        for g in [gaussian_window(l, 1.0), sech_window(l, 0.7)] {
            let phi = factorize(&g, &lat).unwrap();
            let dense_t = reference_tight(&g, &lat).unwrap();
            let dense_d = reference_dual(&g, &lat).unwrap();
            for tight in [svd_tight(&phi).unwrap(), eig_tight(&phi).unwrap()] {
                let t = unfactorize(&tight);
                assert!(t.distance(&dense_t) < 1e-10 * dense_t.norm(), "({l},{a},{b})");
            }
            let d = unfactorize(&inv_dual(&phi).unwrap());
            assert!(d.distance(&dense_d) < 1e-10 * dense_d.norm(), "({l},{a},{b})");
            let kappa = lat.wexler_raz_constant();
            let wr = wexler_raz_residual(&g, &d.scale_real(kappa / d.inner(&g).re), &lat);
            assert!(wr < 1e-10, "({l},{a},{b}): {wr:e}");
        }
    }
}

#[test]
fn every_algorithm_lands_on_its_canonical_window() {
    let lat = GaborLattice::new(240, 12, 12).unwrap();
    let g = sech_window(240, 1.3);
    for alg in Algorithm::NAMED {
        let t = run(&g, &lat, &IterationConfig::new(alg)).unwrap();
        assert!(t.converged && !t.diverging, "{alg}");
        assert!(t.errors().last().unwrap() < &1e-10, "{alg}: {:e}", t.errors().last().unwrap());
    }
    let t = run(&g, &lat, &IterationConfig::new(Algorithm::III)).unwrap();
    let gt = t.final_iterand().normalized().scale_real(lat.wexler_raz_constant().sqrt());
    assert!(dual_lattice_norm_tight(&gt, &lat) < 1e-10);
}

#[test]
fn singular_window_is_rejected_everywhere() {
    let lat = GaborLattice::new(48, 4, 6).unwrap();
    let g = Signal::delta(48, 0);
    assert!(frame_bounds_of(&g, &lat).unwrap().degenerate);
    let phi = factorize(&g, &lat).unwrap();
    assert!(matches!(svd_tight(&phi), Err(GaborError::NotAFrame { .. })));
    assert!(matches!(inv_dual(&phi), Err(GaborError::NotAFrame { .. })));
    assert!(reference_tight(&g, &lat).is_err());
}

fn window(l: usize) -> impl Strategy<Value = Signal> {
    // a random perturbation of a Gaussian keeps the system a frame
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), l).prop_map(move |v| {
        let base = gaussian_window(l, 1.0);
        let values = base
            .values()
            .iter()
            .zip(v)
            .map(|(g, (re, im))| g + Complex64::new(re, im) * 0.05)
            .collect();
        Signal::new(values)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn svd_and_eig_agree_on_perturbed_windows(
        (idx, g) in (0usize..4).prop_flat_map(|i| (Just(i), window(LATTICES[i].0)))
    ) {
        let (l, a, b) = LATTICES[idx];
        let lat = GaborLattice::new(l, a, b).unwrap();
        let bounds = frame_bounds_of(&g, &lat).unwrap();
        prop_assume!(!bounds.degenerate && bounds.condition() < 1e4);
        let phi = factorize(&g, &lat).unwrap();
        let s = unfactorize(&svd_tight(&phi).unwrap());
        let e = unfactorize(&eig_tight(&phi).unwrap());
        prop_assert!(s.distance(&e) < 1e-9 * s.norm());
        prop_assert!((s.norm_sqr() - lat.wexler_raz_constant()).abs() < 1e-9 * lat.wexler_raz_constant());
    }
}
