use pseudoatom::pseudopotential::v1_eigenvalue_analytic;
use pseudoatom::units::HARTREE_EV;
use pseudoatom::{ModelKind, PotentialModel, RadialSolver, SolverConfig};

fn solver() -> RadialSolver {
    RadialSolver::new(SolverConfig::default()).unwrap()
}

fn model(kind: ModelKind, z: u32, n: u32) -> PotentialModel {
    PotentialModel::new(kind, z, n).unwrap()
}

#[test]
fn default_configuration() {
    let cfg = SolverConfig::default();
    assert_eq!((cfg.splines, cfg.r_max, cfg.order, cfg.quadrature_nodes), (600, 200.0, 10, 10));
    let solver = RadialSolver::new(cfg).unwrap();
    assert_eq!(solver.dimension(), 598);
    let first = solver.basis().knots().breakpoints()[1];
    assert!((first - 1e-4).abs() < 1e-9);
}

#[test]
fn hydrogen_and_helium_ion() {
    let s = solver();
    let h = s.solve_spectrum(&model(ModelKind::BareCoulomb, 1, 1), 0, 3).unwrap();
    let expected = [-0.5, -0.125, -1.0 / 18.0];
    for (state, e) in h.iter().zip(expected) {
        assert!((state.energy_raw - e).abs() < 1e-8, "{state:?}");
    }
    assert_eq!(h.iter().map(|s| s.nodes).collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(h.iter().map(|s| s.label()).collect::<Vec<_>>(), vec!["1s", "2s", "3s"]);

    let he_p = s.solve_spectrum(&model(ModelKind::BareCoulomb, 2, 1), 1, 1).unwrap();
    assert_eq!(he_p[0].label(), "2p");
    assert!((he_p[0].energy_raw + 0.5).abs() < 1e-8);
}

#[test]
fn constant_screening_is_hydrogenic() {
    let s = solver();
    let states = s
        .solve_spectrum(&model(ModelKind::ConstantScreening, 3, 3), 0, 2)
        .unwrap();
    let analytic = v1_eigenvalue_analytic(3, 3, 2).unwrap();
    assert!((states[1].energy_raw - analytic).abs() <= 1e-7 * analytic.abs());

    // accidental degeneracy across l
    let spectrum = s
        .solve_levels(&model(ModelKind::ConstantScreening, 3, 3), 4, 3)
        .unwrap();
    for n in 1..=4 {
        let base = spectrum.get(n, 0).unwrap().energy_raw;
        for l in 1..n {
            let e = spectrum.get(n, l).unwrap().energy_raw;
            assert!((e - base).abs() <= 1e-6, "n={n} l={l}");
        }
    }
}

#[test]
fn varying_screening_lifts_degeneracy() {
    let s = solver();
    let spectrum = s
        .solve_levels(&model(ModelKind::VaryingScreening, 3, 3), 4, 3)
        .unwrap();
    let e = |n, l| spectrum.get(n, l).unwrap().energy_raw;
    assert!(e(2, 0) < e(2, 1));
    assert!(e(3, 0) < e(3, 1) && e(3, 1) < e(3, 2));

    // 4f sits on the asymptotic hydrogenic level
    let tail = spectrum.model.asymptotic_charge();
    let hydrogenic = -tail * tail / 32.0;
    assert!((e(4, 3) - hydrogenic).abs() * HARTREE_EV < 2e-3);
    let expected_raw = 1.5 * (-0.983 / HARTREE_EV);
    assert!((e(4, 3) - expected_raw).abs() * HARTREE_EV < 3e-3);

    // scaled 2s level
    let scaled_ev = 2.0 / 3.0 * e(2, 0) * HARTREE_EV;
    assert!((scaled_ev + 4.977).abs() < 0.02, "{scaled_ev}");
}

#[test]
fn node_theorem_within_each_l() {
    let s = solver();
    for kind in [ModelKind::VaryingScreening, ModelKind::ConstantScreening] {
        for l in 0..3 {
            let states = s.solve_spectrum(&model(kind, 11, 11), l, 4).unwrap();
            for (i, st) in states.iter().enumerate() {
                assert_eq!(st.nodes as usize, i);
                assert_eq!(st.principal_n, st.nodes + l + 1);
                assert!(st.norm_check < 1e-10);
            }
            assert!(states.windows(2).all(|w| w[0].energy_raw < w[1].energy_raw));
        }
    }
}

#[test]
fn radial_function_evaluation() {
    let s = solver();
    let states = s.solve_spectrum(&model(ModelKind::BareCoulomb, 1, 1), 0, 1).unwrap();
    let c = &states[0].coefficients;
    // u_1s(r) = 2 r e^{-r}, positive sign convention
    for r in [0.1, 1.0, 3.0, 8.0] {
        let u = s.radial_function(c, r).unwrap();
        assert!((u - 2.0 * r * (-r as f64).exp()).abs() < 1e-7, "r={r}: {u}");
    }
    assert_eq!(s.radial_function(c, 0.0).unwrap(), 0.0);
    assert!(s.radial_function(c, 250.0).is_err());
}
