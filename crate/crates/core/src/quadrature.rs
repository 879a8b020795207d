//! Gauss-Legendre rules, mapped onto every interval of a knot sequence.

use crate::bspline::KnotSequence;
use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule with a fixed number of nodes per knot interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes_per_interval: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Maps an `nodes_per_interval`-point rule onto each breakpoint interval.
    pub fn build(knots: &KnotSequence, nodes_per_interval: usize) -> Result<Self> {
        if nodes_per_interval < knots.order() {
            return Err(Error::InvalidParameter {
                name: "nodes_per_interval",
                reason: format!(
                    "{nodes_per_interval} nodes per interval is below the spline order {}",
                    knots.order()
                ),
            });
        }
        let (ref_nodes, ref_weights) = gauss_legendre(nodes_per_interval);
        let m = knots.n_intervals();
        let mut points = Vec::with_capacity(m * nodes_per_interval);
        let mut weights = Vec::with_capacity(m * nodes_per_interval);
        for w in knots.breakpoints().windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            for (x, wt) in ref_nodes.iter().zip(&ref_weights) {
                points.push(mid + half * x);
                weights.push(half * wt);
            }
        }
        Ok(Self {
            nodes_per_interval,
            points,
            weights,
        })
    }

    pub fn nodes_per_interval(&self) -> usize {
        self.nodes_per_interval
    }

    pub fn n_intervals(&self) -> usize {
        self.points.len() / self.nodes_per_interval
    }

    /// All nodes, interval by interval.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(nodes, weights)` of one interval.
    pub fn interval(&self, i: usize) -> (&[f64], &[f64]) {
        let range = i * self.nodes_per_interval..(i + 1) * self.nodes_per_interval;
        (&self.points[range.clone()], &self.weights[range])
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * f(r))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::GridLaw;

    #[test]
    fn reference_rules() {
        let (x, w) = gauss_legendre(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);

        let (x, w) = gauss_legendre(2);
        let a = 1.0 / 3.0_f64.sqrt();
        assert!((x[0] + a).abs() < 1e-15 && (x[1] - a).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);

        let (x, w) = gauss_legendre(3);
        assert!((x[2] - 0.6_f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_interior_and_weights_positive() {
        let knots = KnotSequence::build(40, 30.0, 6, GridLaw::Exponential { gamma: 4.0 }).unwrap();
        let rule = QuadratureRule::build(&knots, 6).unwrap();
        for (i, w) in knots.breakpoints().windows(2).enumerate() {
            let (xs, ws) = rule.interval(i);
            assert!(xs.iter().all(|&x| x > w[0] && x < w[1]));
            assert!(ws.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn rejects_too_few_nodes() {
        let knots = KnotSequence::build(20, 1.0, 5, GridLaw::Uniform).unwrap();
        assert!(QuadratureRule::build(&knots, 4).is_err());
    }

    #[test]
    fn integrates_unit_function() {
        let knots = KnotSequence::build(600, 200.0, 10, GridLaw::Exponential { gamma: 10.0 }).unwrap();
        let rule = QuadratureRule::build(&knots, 10).unwrap();
        assert!((rule.integrate(|_| 1.0) - 200.0).abs() < 1e-12 * 200.0);
    }
}
