use proptest::prelude::*;
use pseudoatom::pseudopotential::{
    partition_f, partition_screening, zeta, zeta_quadrature_oracle, ModelKind, Orientation,
    PotentialModel, ZetaTruncation,
};

#[test]
fn zeta_positive_on_log_grid() {
    let mut min_window = f64::INFINITY;
    for z in 1..=12u32 {
        for i in 0..=600 {
            let r = 10f64.powf(-4.0 + 6.0 * f64::from(i) / 600.0);
            let v = zeta(z, r).unwrap();
            assert!(v > 0.0, "Z={z} r={r}");
            let x = f64::from(z) * r;
            if (0.05..=10.0).contains(&x) {
                min_window = min_window.min(v);
            }
        }
    }
    assert!(min_window > 0.2);
    // zeta depends on Z r only; fine scan of the window
    let min_fine = (0..=200_000)
        .map(|i| 0.05 + 9.95 * f64::from(i) / 200_000.0)
        .map(|x| zeta(1, x).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!((min_fine - 0.274847).abs() < 1e-6, "{min_fine}");
}

#[test]
fn varying_tail_approaches_coulomb_quickly() {
    for z in [1u32, 3, 6, 12] {
        let m = PotentialModel::new(ModelKind::VaryingScreening, z, z.max(2)).unwrap();
        let charge = m.asymptotic_charge();
        let zf = f64::from(z);
        let mut r = 30.0 / zf;
        while r < 200.0 {
            let diff = (m.value(0, r).unwrap() + charge / r).abs();
            let bound = (-zf * r).exp() / (r * r);
            assert!(diff <= bound, "Z={z} r={r}: {diff:e} > {bound:e}");
            r *= 1.05;
        }
    }
}

#[test]
fn screening_form_consistency() {
    // the varying model is the partition form with f^(3/5) averaged into zeta
    for (z, n) in [(3u32, 3u32), (7, 7), (12, 12), (5, 3)] {
        let m = PotentialModel::new(ModelKind::VaryingScreening, z, n).unwrap();
        for r in [0.05, 0.3, 1.0, 4.0, 25.0] {
            let expected = partition_screening(z, n, 1.0) * zeta(z, r).unwrap();
            assert!((m.screening_charge(r) - expected).abs() < 1e-14);
        }
        assert_eq!(partition_screening(z, n, 0.0), 0.0);
        let full = partition_screening(z, n, 1.0);
        assert!((f64::from(z) - full - m.asymptotic_charge()).abs() < 1e-14);
        let mut last = 0.0;
        for i in 1..=50 {
            let s = partition_screening(z, n, f64::from(i) / 50.0);
            assert!(s > last);
            last = s;
        }
        // f^(3/5) scaling of the partition form
        let half = partition_screening(z, n, 0.5);
        assert!((half - full * 0.5f64.powf(0.6)).abs() < 1e-13);
    }
    assert_eq!(partition_screening(4, 1, 0.7), 0.0);
}

#[test]
fn oracle_regression_values() {
    let exact = ZetaTruncation::exact();
    let first = ZetaTruncation::first_order();
    let cases = [
        (&exact, Orientation::ActiveNumerator, 0.866549970542),
        (&exact, Orientation::PassiveNumerator, 0.356682042620),
        (&first, Orientation::ActiveNumerator, 0.822699989461),
        (&first, Orientation::PassiveNumerator, 0.322257723238),
    ];
    for (trunc, orientation, expected) in cases {
        let got = zeta_quadrature_oracle(3, 1.0, trunc, orientation).unwrap();
        assert!((got - expected).abs() < 1e-9, "{orientation:?} {trunc:?}: {got}");
    }
    let a = zeta_quadrature_oracle(1, 0.5, &exact, Orientation::ActiveNumerator).unwrap();
    let p = zeta_quadrature_oracle(1, 0.5, &exact, Orientation::PassiveNumerator).unwrap();
    assert!((a - 0.333774535868).abs() < 1e-9);
    assert!((p - 0.874182372919).abs() < 1e-9);
}

#[test]
fn oracle_monotone_scans() {
    let exact = ZetaTruncation::exact();
    for z in [1u32, 3, 8] {
        let mut prev_a = 0.0;
        let mut prev_p = f64::INFINITY;
        for i in 0..=80 {
            let r = 10f64.powf(-3.0 + 4.5 * f64::from(i) / 80.0) / f64::from(z);
            let a = zeta_quadrature_oracle(z, r, &exact, Orientation::ActiveNumerator).unwrap();
            let p = zeta_quadrature_oracle(z, r, &exact, Orientation::PassiveNumerator).unwrap();
            assert!(a > 0.0 && a <= 1.0 + 1e-12 && p > 0.0 && p <= 1.0 + 1e-12);
            assert!(a >= prev_a - 1e-12, "active not monotone at Z={z} r={r}");
            assert!(p <= prev_p + 1e-12, "passive not monotone at Z={z} r={r}");
            prev_a = a;
            prev_p = p;
        }
    }
}

proptest! {
    #[test]
    fn partition_complementarity(a in 1e-6f64..1e3, b in 1e-6f64..1e3) {
        let f = partition_f(a, b).unwrap();
        let g = partition_f(b, a).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f + g - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn single_electron_is_bare(z in 1u32..30, l in 0u32..6, r in 1e-5f64..500.0) {
        let bare = PotentialModel::new(ModelKind::BareCoulomb, z, 1).unwrap().value(l, r).unwrap();
        for kind in [ModelKind::ConstantScreening, ModelKind::VaryingScreening] {
            let v = PotentialModel::new(kind, z, 1).unwrap().value(l, r).unwrap();
            prop_assert_eq!(v, bare);
        }
    }

    #[test]
    fn partition_equal_radii(r in 1e-8f64..1e8) {
        prop_assert!((partition_f(r, r).unwrap() - 0.5).abs() < 1e-16);
    }
}
