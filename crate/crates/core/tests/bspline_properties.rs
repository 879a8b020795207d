use pseudoatom::bspline::{BSplineBasis, GridLaw, KnotSequence};
use pseudoatom::quadrature::QuadratureRule;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn default_knots() -> KnotSequence {
    let law = GridLaw::exponential_with_first_interval(591, 200.0, 1e-4).unwrap();
    KnotSequence::build(600, 200.0, 10, law).unwrap()
}

/// Divided difference over possibly repeated nodes; `deriv(m, t)` must
/// return the m-th derivative of the function.
fn divided_difference(nodes: &[f64], deriv: &dyn Fn(usize, f64) -> f64) -> f64 {
    let n = nodes.len() - 1;
    if nodes[0] == nodes[n] {
        let fact: f64 = (1..=n).map(|v| v as f64).product();
        return deriv(n, nodes[0]) / fact;
    }
    (divided_difference(&nodes[1..], deriv) - divided_difference(&nodes[..n], deriv))
        / (nodes[n] - nodes[0])
}

/// `B_{i,k}(x) = (t_{i+k} - t_i) [t_i..t_{i+k}] (. - x)_+^{k-1}`
fn bspline_by_divided_difference(t: &[f64], i: usize, k: usize, x: f64) -> f64 {
    let p = (k - 1) as i32;
    let deriv = move |m: usize, s: f64| {
        if s <= x || m as i32 > p {
            return 0.0;
        }
        let falling: f64 = (0..m).map(|q| (p - q as i32) as f64).product();
        falling * (s - x).powi(p - m as i32)
    };
    (t[i + k] - t[i]) * divided_difference(&t[i..=i + k], &deriv)
}

#[test]
fn quadratic_matches_divided_difference_definition() {
    let knots = KnotSequence::from_breakpoints(vec![0.0, 1.0, 2.0, 3.0], 3).unwrap();
    assert_eq!(knots.knots(), &[0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0]);
    let basis = BSplineBasis::new(knots.clone());
    let values = basis.eval(1.5).unwrap();
    assert_eq!(values.len(), 3);
    let textbook = [(1, 0.125), (2, 0.75), (3, 0.125)];
    for ((i, v), (ti, tv)) in values.iter().zip(textbook) {
        assert_eq!(*i, ti);
        let oracle = bspline_by_divided_difference(knots.knots(), *i, 3, 1.5);
        assert!((v - oracle).abs() < 1e-14, "{i}: {v} vs {oracle}");
        assert!((v - tv).abs() < 1e-14);
    }
    // a few more points on every interval
    for x in [0.2, 0.7, 1.1, 2.4, 2.95] {
        for (i, v) in basis.eval(x).unwrap() {
            let oracle = bspline_by_divided_difference(knots.knots(), i, 3, x);
            assert!((v - oracle).abs() < 1e-13, "x={x} i={i}");
        }
    }
}

#[test]
fn partition_of_unity_and_locality() {
    let basis = BSplineBasis::new(default_knots());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        // log-uniform so the clustered region near the origin is sampled too
        let r = 10f64.powf(rng.gen_range(-5.0..2.3)).min(199.999);
        let values = basis.eval(r).unwrap();
        assert!(values.len() <= 10);
        assert!(values.iter().all(|&(_, v)| v >= 0.0));
        let sum: f64 = values.iter().map(|(_, v)| v).sum();
        assert!((sum - 1.0).abs() < 1e-12, "r={r}: {sum}");
        let dsum: f64 = basis.eval_derivative(r).unwrap().iter().map(|(_, v)| v).sum();
        let scale: f64 = basis
            .eval_derivative(r)
            .unwrap()
            .iter()
            .map(|(_, v)| v.abs())
            .sum::<f64>()
            .max(1.0);
        assert!(dsum.abs() < 1e-10 * scale, "r={r}: {dsum}");
    }
}

#[test]
fn derivative_matches_central_difference() {
    let knots = KnotSequence::build(60, 20.0, 6, GridLaw::Exponential { gamma: 3.0 }).unwrap();
    let basis = BSplineBasis::new(knots);
    let h = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let r = rng.gen_range(0.01..19.99);
        let at = |x: f64, i: usize| {
            basis
                .eval(x)
                .unwrap()
                .into_iter()
                .find(|(j, _)| *j == i)
                .map_or(0.0, |(_, v)| v)
        };
        for (i, d) in basis.eval_derivative(r).unwrap() {
            let fd = (at(r + h, i) - at(r - h, i)) / (2.0 * h);
            let scale = d.abs().max(1.0);
            assert!((fd - d).abs() <= 1e-6 * scale, "r={r} i={i}: {d} vs {fd}");
        }
    }
}

#[test]
fn quadrature_moments_per_interval() {
    let knots = default_knots();
    let rule = QuadratureRule::build(&knots, 10).unwrap();
    for (i, w) in knots.breakpoints().windows(2).enumerate().step_by(7) {
        let (a, b) = (w[0], w[1]);
        let (xs, ws) = rule.interval(i);
        for p in 0..20 {
            let exact = (b.powi(p + 1) - a.powi(p + 1)) / f64::from(p + 1);
            let got: f64 = xs.iter().zip(ws).map(|(x, w)| w * x.powi(p)).sum();
            assert!(
                (got - exact).abs() <= 1e-12 * exact.abs(),
                "interval {i} p={p}: {got} vs {exact}"
            );
        }
    }
}

#[test]
fn quadrature_gamma_integral() {
    let knots = default_knots();
    let rule = QuadratureRule::build(&knots, 10).unwrap();
    let z = 1.0_f64;
    let got = rule.integrate(|r| r * r * (-2.0 * z * r).exp());
    // int_0^R r^2 e^{-2r} dr = 1/4 [1 - e^{-2R}(1 + 2R + 2R^2)]
    let big_r = 200.0_f64;
    let exact = 0.25 / z.powi(3) * (1.0 - (-2.0 * big_r).exp() * (1.0 + 2.0 * big_r + 2.0 * big_r * big_r));
    assert!((got - exact).abs() < 1e-10, "{got} vs {exact}");
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fc: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let c = 0.5 * (a + b);
        let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
        let (fd, fe) = (f(d), f(e));
        let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
        let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
            + rec(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
    }
    rec(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[test]
fn overlap_matches_adaptive_quadrature() {
    let knots = KnotSequence::build(30, 15.0, 5, GridLaw::Exponential { gamma: 2.5 }).unwrap();
    let rule = QuadratureRule::build(&knots, 5).unwrap();
    let basis = BSplineBasis::new(knots.clone());
    let value = |i: usize, r: f64| {
        basis
            .eval(r)
            .unwrap()
            .into_iter()
            .find(|(j, _)| *j == i)
            .map_or(0.0, |(_, v)| v)
    };
    for (i, j) in [(0, 0), (3, 5), (5, 3), (10, 14), (12, 12), (28, 29)] {
        let gauss = rule.integrate(|r| value(i, r) * value(j, r));
        // integrate knot span by knot span, the product is smooth on each
        let mut oracle = 0.0;
        for w in knots.breakpoints().windows(2) {
            oracle += adaptive_simpson(&|r| value(i, r) * value(j, r), w[0], w[1], 1e-14, 40);
        }
        assert!((gauss - oracle).abs() < 1e-10, "({i},{j}): {gauss} vs {oracle}");
    }
}

proptest! {
    #[test]
    fn partition_of_unity_any_grid(
        gamma in 0.1f64..12.0,
        splines in 12usize..80,
        order in 2usize..7,
        t in 0.0f64..1.0,
    ) {
        prop_assume!(splines >= 2 * order);
        let knots = KnotSequence::build(splines, 50.0, order, GridLaw::Exponential { gamma }).unwrap();
        let basis = BSplineBasis::new(knots);
        let r = 50.0 * t;
        let values = basis.eval(r).unwrap();
        prop_assert!(values.len() <= order);
        let sum: f64 = values.iter().map(|(_, v)| v).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_widths_non_decreasing(gamma in 0.01f64..20.0, splines in 20usize..300) {
        let knots = KnotSequence::build(splines, 100.0, 4, GridLaw::Exponential { gamma }).unwrap();
        let w: Vec<f64> = knots.breakpoints().windows(2).map(|p| p[1] - p[0]).collect();
        for pair in w.windows(2) {
            prop_assert!(pair[1] >= pair[0] * (1.0 - 1e-9));
        }
    }
}
