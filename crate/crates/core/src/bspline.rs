//! Clamped B-spline bases on a radial box `[0, r_max]`.
//!
//! The knot vector repeats each endpoint `k` times and places the interior
//! breakpoints according to a [`GridLaw`]. With `M` intervals there are
//! `N = M + k - 1` splines of order `k` (polynomial degree `k - 1`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Placement of breakpoints on `[0, r_max]` as a function of a uniform
/// parameter `t in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GridLaw {
    Uniform,
    /// `r(t) = r_max * (exp(gamma t) - 1) / (exp(gamma) - 1)`
    Exponential { gamma: f64 },
}

impl GridLaw {
    /// Exponential law whose first interval has width `first_width`.
    ///
    /// The first width decreases monotonically with `gamma`, so a bisection
    /// on `gamma` is enough.
    pub fn exponential_with_first_interval(
        intervals: usize,
        r_max: f64,
        first_width: f64,
    ) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::InvalidParameter {
                name: "intervals",
                reason: "need at least one interval".into(),
            });
        }
        let uniform = r_max / intervals as f64;
        if !(first_width > 0.0 && first_width < uniform) {
            return Err(Error::InvalidParameter {
                name: "first_width",
                reason: format!("must lie in (0, {uniform}) for {intervals} intervals"),
            });
        }
        let width = |gamma: f64| r_max * (gamma / intervals as f64).exp_m1() / gamma.exp_m1();
        let (mut lo, mut hi) = (1e-8_f64, 600.0_f64);
        if width(hi) > first_width {
            return Err(Error::InvalidParameter {
                name: "first_width",
                reason: format!("{first_width:e} bohr is too small to reach"),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if width(mid) > first_width {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(GridLaw::Exponential {
            gamma: 0.5 * (lo + hi),
        })
    }

    fn map(&self, t: f64, r_max: f64) -> f64 {
        match *self {
            GridLaw::Uniform => r_max * t,
            GridLaw::Exponential { gamma } => r_max * (gamma * t).exp_m1() / gamma.exp_m1(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GridLaw::Uniform => Ok(()),
            GridLaw::Exponential { gamma } if gamma > 0.0 && gamma.is_finite() => Ok(()),
            GridLaw::Exponential { gamma } => Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("clustering parameter must be positive, got {gamma}"),
            }),
        }
    }
}

/// Clamped knot sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    breakpoints: Vec<f64>,
    knots: Vec<f64>,
    order: usize,
    r_max: f64,
    law: Option<GridLaw>,
}

impl KnotSequence {
    /// Builds the clamped sequence carrying `splines` B-splines of `order`.
    pub fn build(splines: usize, r_max: f64, order: usize, law: GridLaw) -> Result<Self> {
        if order == 0 || splines < 2 * order {
            return Err(Error::InvalidSize {
                splines,
                order,
                min: 2 * order.max(1),
            });
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "r_max",
                reason: format!("box radius must be positive, got {r_max}"),
            });
        }
        law.validate()?;

        let intervals = splines - order + 1;
        let mut breakpoints: Vec<f64> = (0..=intervals)
            .map(|j| law.map(j as f64 / intervals as f64, r_max))
            .collect();
        breakpoints[0] = 0.0;
        breakpoints[intervals] = r_max;
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "grid law produced coincident breakpoints".into(),
            });
        }

        let mut seq = Self::clamp(breakpoints, order);
        seq.law = Some(law);
        Ok(seq)
    }

    /// Clamped sequence on explicit breakpoints `0 = b_0 < ... < b_M = r_max`.
    ///
    /// Only requires one interval, so small textbook bases with fewer than
    /// `2k` splines can be built.
    pub fn from_breakpoints(breakpoints: Vec<f64>, order: usize) -> Result<Self> {
        if order == 0 || breakpoints.len() < 2 {
            return Err(Error::InvalidSize {
                splines: (breakpoints.len() + order).saturating_sub(2),
                order,
                min: order.max(1),
            });
        }
        if breakpoints[0] != 0.0 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "breakpoints",
                reason: "must start at 0 and increase strictly".into(),
            });
        }
        Ok(Self::clamp(breakpoints, order))
    }

    fn clamp(breakpoints: Vec<f64>, order: usize) -> Self {
        let r_max = *breakpoints.last().expect("non-empty");
        let mut knots = Vec::with_capacity(breakpoints.len() + 2 * order - 2);
        knots.extend(std::iter::repeat_n(0.0, order - 1));
        knots.extend_from_slice(&breakpoints);
        knots.extend(std::iter::repeat_n(r_max, order - 1));
        Self {
            breakpoints,
            knots,
            order,
            r_max,
            law: None,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Full knot vector, endpoints repeated `order` times.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Grid law used to place the breakpoints, if any.
    pub fn law(&self) -> Option<GridLaw> {
        self.law
    }

    pub fn n_intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn n_splines(&self) -> usize {
        self.n_intervals() + self.order - 1
    }

    /// Index of the breakpoint interval holding `r`; `r_max` maps to the last one.
    pub fn interval_of(&self, r: f64) -> Result<usize> {
        if !(0.0..=self.r_max).contains(&r) {
            return Err(Error::OutOfBox {
                r,
                r_max: self.r_max,
            });
        }
        let upper = self.breakpoints.partition_point(|&b| b <= r);
        Ok(upper.saturating_sub(1).min(self.n_intervals() - 1))
    }
}

/// B-spline basis with optional removal of the first and last spline.
///
/// Dropping the boundary splines enforces `u(0) = u(r_max) = 0`, since
/// every other spline vanishes at both endpoints of a clamped sequence.
#[derive(Debug, Clone)]
pub struct BSplineBasis {
    knots: KnotSequence,
    drop_first: bool,
    drop_last: bool,
}

impl BSplineBasis {
    /// All `N` splines, no boundary trimming.
    pub fn new(knots: KnotSequence) -> Self {
        Self::with_boundary(knots, false, false)
    }

    /// Basis for bound states: first and last splines removed.
    pub fn bound_state(knots: KnotSequence) -> Self {
        Self::with_boundary(knots, true, true)
    }

    pub fn with_boundary(knots: KnotSequence, drop_first: bool, drop_last: bool) -> Self {
        Self {
            knots,
            drop_first,
            drop_last,
        }
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.knots.order
    }

    /// Number of retained basis functions.
    pub fn dimension(&self) -> usize {
        self.knots.n_splines() - usize::from(self.drop_first) - usize::from(self.drop_last)
    }

    /// Maps a full spline index to the retained numbering.
    pub fn active_index(&self, full: usize) -> Option<usize> {
        let first = usize::from(self.drop_first);
        if full < first || full - first >= self.dimension() {
            None
        } else {
            Some(full - first)
        }
    }

    /// Values of the nonzero splines at `r` as `(index, value)` pairs.
    pub fn eval(&self, r: f64) -> Result<Vec<(usize, f64)>> {
        let interval = self.knots.interval_of(r)?;
        let mut values = vec![0.0; self.order()];
        let first = self.values_in_interval(interval, r, &mut values);
        Ok(self.collect_active(first, &values))
    }

    /// First derivatives of the nonzero splines at `r`.
    pub fn eval_derivative(&self, r: f64) -> Result<Vec<(usize, f64)>> {
        let interval = self.knots.interval_of(r)?;
        let k = self.order();
        let mut values = vec![0.0; k];
        let mut derivs = vec![0.0; k];
        let first = self.values_and_derivatives_in_interval(interval, r, &mut values, &mut derivs);
        Ok(self.collect_active(first, &derivs))
    }

    fn collect_active(&self, first_full: usize, values: &[f64]) -> Vec<(usize, f64)> {
        values
            .iter()
            .enumerate()
            .filter_map(|(p, &v)| self.active_index(first_full + p).map(|i| (i, v)))
            .collect()
    }

    /// Cox-de Boor evaluation of the `k` splines that are nonzero on
    /// breakpoint interval `interval`. Writes `B_{first + p}(r)` into
    /// `values[p]` and returns `first` (a full spline index).
    pub(crate) fn values_in_interval(&self, interval: usize, r: f64, values: &mut [f64]) -> usize {
        let k = self.order();
        self.cox_de_boor(interval, r, k, values);
        interval
    }

    /// Same as [`values_in_interval`](Self::values_in_interval) plus the
    /// first derivatives, via the order `k - 1` recurrence.
    pub(crate) fn values_and_derivatives_in_interval(
        &self,
        interval: usize,
        r: f64,
        values: &mut [f64],
        derivs: &mut [f64],
    ) -> usize {
        let k = self.order();
        let t = &self.knots.knots;
        let mu = interval + k - 1;
        let first = interval;
        if k == 1 {
            values[0] = 1.0;
            derivs[0] = 0.0;
            return first;
        }
        // lower[q] = B_{first + 1 + q, k-1}(r), q = 0..k-2
        let mut lower = vec![0.0; k - 1];
        self.cox_de_boor(interval, r, k - 1, &mut lower);
        let km1 = (k - 1) as f64;
        for p in 0..k {
            let i = first + p;
            let mut d = 0.0;
            if p >= 1 {
                let span = t[i + k - 1] - t[i];
                if span > 0.0 {
                    d += lower[p - 1] / span;
                }
            }
            if p + 1 < k {
                let span = t[i + k] - t[i + 1];
                if span > 0.0 {
                    d -= lower[p] / span;
                }
            }
            derivs[p] = km1 * d;
        }
        debug_assert!(mu < t.len());
        self.cox_de_boor(interval, r, k, values);
        first
    }

    /// Order-`ord` splines nonzero on knot span `mu = interval + k - 1`;
    /// `out[p] = B_{mu - ord + 1 + p, ord}(r)`.
    fn cox_de_boor(&self, interval: usize, r: f64, ord: usize, out: &mut [f64]) {
        let t = &self.knots.knots;
        let mu = interval + self.order() - 1;
        let mut left = vec![0.0; ord];
        let mut right = vec![0.0; ord];
        out[0] = 1.0;
        for j in 1..ord {
            left[j] = r - t[mu + 1 - j];
            right[j] = t[mu + j] - r;
            let mut saved = 0.0;
            for q in 0..j {
                let temp = out[q] / (right[q + 1] + left[j - q]);
                out[q] = saved + right[q + 1] * temp;
                saved = left[j - q] * temp;
            }
            out[j] = saved;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(splines: usize, r_max: f64, order: usize) -> KnotSequence {
        KnotSequence::build(splines, r_max, order, GridLaw::Uniform).unwrap()
    }

    #[test]
    fn minimal_uniform_grid() {
        let knots = uniform(4, 1.0, 2);
        let expected = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        assert_eq!(knots.breakpoints().len(), 4);
        for (b, e) in knots.breakpoints().iter().zip(expected) {
            assert!((b - e).abs() < 1e-15);
        }
        assert_eq!(knots.knots(), &[0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            KnotSequence::build(7, 1.0, 4, GridLaw::Uniform),
            Err(Error::InvalidSize { .. })
        ));
        assert!(KnotSequence::build(8, 0.0, 4, GridLaw::Uniform).is_err());
        assert!(KnotSequence::build(8, -3.0, 4, GridLaw::Uniform).is_err());
        assert!(KnotSequence::build(8, 1.0, 4, GridLaw::Exponential { gamma: 0.0 }).is_err());
    }

    #[test]
    fn exponential_breakpoints_follow_grid_law() {
        let gamma = 5.0;
        let knots = KnotSequence::build(20, 10.0, 4, GridLaw::Exponential { gamma }).unwrap();
        let m = knots.n_intervals();
        assert_eq!(m, 17);
        for (j, &b) in knots.breakpoints().iter().enumerate() {
            let t = j as f64 / m as f64;
            let expected = 10.0 * ((gamma * t).exp() - 1.0) / (gamma.exp() - 1.0);
            assert!((b - expected).abs() <= 1e-12 * expected.max(1.0), "{j}: {b} vs {expected}");
        }
        let widths: Vec<f64> = knots.breakpoints().windows(2).map(|w| w[1] - w[0]).collect();
        assert!(widths.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn first_interval_targeting() {
        let law = GridLaw::exponential_with_first_interval(591, 200.0, 1e-4).unwrap();
        let knots = KnotSequence::build(600, 200.0, 10, law).unwrap();
        assert_eq!(knots.n_splines(), 600);
        let first = knots.breakpoints()[1];
        assert!((first - 1e-4).abs() < 1e-9, "{first}");
        assert!(GridLaw::exponential_with_first_interval(10, 1.0, 0.5).is_err());
    }

    #[test]
    fn order_one_is_indicator() {
        let basis = BSplineBasis::new(uniform(5, 5.0, 1));
        assert_eq!(basis.dimension(), 5);
        for (r, idx) in [(0.5, 0), (1.5, 1), (3.2, 3), (4.9, 4), (5.0, 4)] {
            assert_eq!(basis.eval(r).unwrap(), vec![(idx, 1.0)]);
        }
    }

    #[test]
    fn hat_function_slopes() {
        let basis = BSplineBasis::new(uniform(6, 5.0, 2));
        // hat centred on breakpoint 2 is full index 2
        let d_left = basis.eval_derivative(1.5).unwrap();
        let d_right = basis.eval_derivative(2.5).unwrap();
        let slope = |d: &[(usize, f64)], i| d.iter().find(|(j, _)| *j == i).unwrap().1;
        assert!((slope(&d_left, 2) - 1.0).abs() < 1e-14);
        assert!((slope(&d_right, 2) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn out_of_box_is_rejected() {
        let basis = BSplineBasis::new(uniform(8, 2.0, 3));
        assert!(matches!(basis.eval(2.5), Err(Error::OutOfBox { .. })));
        assert!(basis.eval(-1e-9).is_err());
        assert!(basis.eval_derivative(3.0).is_err());
        assert!(basis.eval(2.0).is_ok());
    }

    #[test]
    fn boundary_trimming_renumbers() {
        let knots = uniform(8, 2.0, 3);
        let basis = BSplineBasis::bound_state(knots);
        assert_eq!(basis.dimension(), 6);
        assert_eq!(basis.active_index(0), None);
        assert_eq!(basis.active_index(1), Some(0));
        assert_eq!(basis.active_index(7), None);
        assert!(basis.eval(0.0).unwrap().iter().all(|&(_, v)| v == 0.0));
    }
}
