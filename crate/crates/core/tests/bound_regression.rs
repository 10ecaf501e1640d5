use eigenbound::bound::{crossover_diameter, CROSSOVER_TOLERANCE};
use eigenbound::{constant_c, wang_constant, BoundInput, ShootingConfig};
use eigenbound::{first_neumann_eigenvalue, RadialProblem};
use eigenbound::bound::{breakdown_with_pair, matched_radii};
use eigenbound_oracles::{disk_area, fd_theorem_constant};
use proptest::prelude::*;

const V: f64 = 3.41228;

#[test]
fn frozen_hyperbolic_breakdown() {
    let b = constant_c(&BoundInput::new(2, -1.0, -4.0, V, 2.0).unwrap()).unwrap();
    assert!((b.radius - 1.000_000_505_784_179).abs() < 1e-12);
    assert!((b.radius_prime - 0.910_894_823_906_055).abs() < 1e-12);
    assert!((b.ratio_radius - 1.543_081_229_2).abs() < 1e-9);
    assert!((b.ratio_diameter - 3.762_195_691).abs() < 1e-8);
    assert!((b.wang - 14.154_116_418).abs() < 1e-8);
    assert!((b.constant - 6.074_946_396).abs() < 1e-7);
    assert!((b.bound_value - 17.990_305_199).abs() < 1e-6);
}

#[test]
fn constant_matches_finite_difference_oracle() {
    for (n, k, big_k, volume, d) in [(2, -1.0, -4.0, V, 2.0), (3, -0.5, -1.0, 2.0, 1.5), (2, 1.0, 0.25, 1.0, 1.2)] {
        let input = BoundInput::new(n, k, big_k, volume, d).unwrap();
        let (r, rp) = matched_radii(n, k, big_k, volume).unwrap();
        let oracle = fd_theorem_constant(n, k, big_k, r, rp, d, 4000);
        let c = constant_c(&input).unwrap().constant;
        assert!((c - oracle).abs() < 1e-6 * oracle, "{c} vs {oracle}");
    }
}

#[test]
fn crossover_regression() {
    let d = crossover_diameter(2, -1.0, -4.0, V, 20.0, &ShootingConfig::default()).unwrap().unwrap();
    assert!((d - 1.058_676_709_817).abs() < 1e-7, "{d}");
    let at = |d: f64| constant_c(&BoundInput::new(2, -1.0, -4.0, V, d).unwrap()).unwrap();
    let beyond = at(2.0 * d);
    assert!(beyond.constant < beyond.wang);
    let before = at(0.5 * d);
    assert!(before.constant > before.wang);
    assert!(CROSSOVER_TOLERANCE <= 1e-8);
}

#[test]
fn normalization_does_not_change_the_constant() {
    let input = BoundInput::new(2, -1.0, -2.0, 2.0, 1.7).unwrap();
    let (r, rp) = matched_radii(2, -1.0, -2.0, 2.0).unwrap();
    let pair = first_neumann_eigenvalue(&RadialProblem::new(-1.0, 2, r).unwrap(), &ShootingConfig::default()).unwrap();
    let base = breakdown_with_pair(&input, rp, &pair).unwrap().constant;
    for factor in [0.01, -3.0, 250.0] {
        let scaled = breakdown_with_pair(&input, rp, &pair.scaled(factor)).unwrap().constant;
        assert!((scaled - base).abs() < 1e-12 * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn equal_curvatures_give_unit_constant(n in 2usize..=4, k in -4.0f64..1.0, frac in 0.05f64..0.4, d in 0.1f64..1.0) {
        let volume = if k > 0.0 {
            disk_area(k, frac * std::f64::consts::PI / k.sqrt())
        } else {
            disk_area(k, 2.0 * frac)
        };
        let d = if k > 0.0 { d * std::f64::consts::FRAC_PI_2 / k.sqrt() } else { 3.0 * d };
        let b = constant_c(&BoundInput::new(n, k, k, volume, d).unwrap()).unwrap();
        prop_assert!((b.constant - 1.0).abs() < 1e-9);
        prop_assert!((b.wang - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_nondecreasing_in_diameter(d0 in 0.2f64..4.0, step in 0.01f64..1.0) {
        let at = |d: f64| constant_c(&BoundInput::new(2, -0.5, -1.5, 2.5, d).unwrap()).unwrap().constant;
        prop_assert!(at(d0 + step) >= at(d0));
    }

    #[test]
    fn ratio_to_wang_decays_for_large_diameters(d in 2.0f64..8.0) {
        let at = |d: f64| {
            let b = constant_c(&BoundInput::new(2, -1.0, -4.0, V, d).unwrap()).unwrap();
            b.constant / b.wang
        };
        prop_assert!(at(d + 1.0) < at(d));
        prop_assert!((wang_constant(2, -1.0, -4.0, d).unwrap() - constant_c(&BoundInput::new(2, -1.0, -4.0, V, d).unwrap()).unwrap().wang).abs() < 1e-9 * wang_constant(2, -1.0, -4.0, d).unwrap());
    }
}
