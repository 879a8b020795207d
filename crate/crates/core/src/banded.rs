//! Symmetric band matrices and a generalized eigensolver for `H c = E S c`.
//!
//! Eigenvalues are located by bisection on the inertia of `H - sigma S`
//! (Sylvester's law applied to the Cholesky-reduced standard problem),
//! and eigenvectors by shifted inverse iteration with a pivoted band LU.

use crate::error::{Error, Result};

/// Symmetric matrix stored as its upper band.
///
/// Element `(i, j)` with `i <= j <= i + bandwidth` lives at
/// `data[j * (bandwidth + 1) + bandwidth + i - j]`, i.e. column-major by
/// diagonal in the LAPACK `'U'` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBandMatrix {
    dim: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl SymmetricBandMatrix {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        Self {
            dim,
            bandwidth,
            data: vec![0.0; dim * (bandwidth + 1)],
        }
    }

    /// Band of a dense row-major matrix; entries outside the band are ignored.
    pub fn from_dense(dense: &[Vec<f64>], bandwidth: usize) -> Self {
        let dim = dense.len();
        let mut m = Self::zeros(dim, bandwidth);
        for j in 0..dim {
            for i in j.saturating_sub(bandwidth)..=j {
                m.set(i, j, dense[i][j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j - i > self.bandwidth || j >= self.dim {
            None
        } else {
            Some(j * (self.bandwidth + 1) + self.bandwidth + i - j)
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Sets `(i, j)` and, implicitly, `(j, i)`.
    ///
    /// Panics when the entry is outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] += value;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = vec![0.0; n];
        for j in 0..n {
            let base = j * (self.bandwidth + 1) + self.bandwidth;
            y[j] += self.data[base] * x[j];
            for i in j.saturating_sub(self.bandwidth)..j {
                let a = self.data[base + i - j];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
        }
        y
    }

    /// `self - sigma * other`, over the wider of the two bands.
    pub fn shifted(&self, other: &Self, sigma: f64) -> Self {
        let bw = self.bandwidth.max(other.bandwidth);
        let mut out = Self::zeros(self.dim, bw);
        for j in 0..self.dim {
            for i in j.saturating_sub(bw)..=j {
                out.set(i, j, self.get(i, j) - sigma * other.get(i, j));
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Lower band Cholesky factor, `S = L L^T`.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    dim: usize,
    bandwidth: usize,
    // row-major: L[i][j] at i * (bw + 1) + (j + bw - i), i - bw <= j <= i
    data: Vec<f64>,
}

impl BandCholesky {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i || i - j > self.bandwidth {
            0.0
        } else {
            self.data[i * (self.bandwidth + 1) + j + self.bandwidth - i]
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Solves `L L^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.dim, self.bandwidth);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in i.saturating_sub(bw)..i {
                s -= self.get(i, j) * y[j];
            }
            y[i] = s / self.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..(i + bw + 1).min(n) {
                s -= self.get(j, i) * y[j];
            }
            y[i] = s / self.get(i, i);
        }
        y
    }
}

/// Band Cholesky factorization of a symmetric positive definite matrix.
pub fn cholesky_banded(s: &SymmetricBandMatrix) -> Result<BandCholesky> {
    let (n, bw) = (s.dim, s.bandwidth);
    let mut l = BandCholesky {
        dim: n,
        bandwidth: bw,
        data: vec![0.0; n * (bw + 1)],
    };
    let at = |i: usize, j: usize| i * (bw + 1) + j + bw - i;
    for j in 0..n {
        let lo = j.saturating_sub(bw);
        let mut d = s.get(j, j);
        for p in lo..j {
            let v = l.data[at(j, p)];
            d -= v * v;
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d });
        }
        let ljj = d.sqrt();
        l.data[at(j, j)] = ljj;
        for i in j + 1..(j + bw + 1).min(n) {
            let mut v = s.get(i, j);
            for p in i.saturating_sub(bw)..j {
                v -= l.data[at(i, p)] * l.data[at(j, p)];
            }
            l.data[at(i, j)] = v / ljj;
        }
    }
    Ok(l)
}

/// Number of eigenvalues of `H c = E S c` strictly below `sigma`.
///
/// Counts negative pivots of an unpivoted `L D L^T` of `H - sigma S`.
/// Zero pivots are nudged to a tiny negative value.
pub fn inertia_below(h: &SymmetricBandMatrix, s: &SymmetricBandMatrix, sigma: f64) -> usize {
    let a = h.shifted(s, sigma);
    let (n, bw) = (a.dim, a.bandwidth);
    let tiny = f64::EPSILON * a.max_abs().max(f64::MIN_POSITIVE);
    // row-major unit-lower factor with the same band
    let mut l = vec![0.0; n * (bw + 1)];
    let mut d = vec![0.0; n];
    let at = |i: usize, j: usize| i * (bw + 1) + j + bw - i;
    let mut negatives = 0;
    // w[p] = L[i][p] * d[p] scratch for the current row
    let mut w = vec![0.0; bw + 1];
    for i in 0..n {
        let lo = i.saturating_sub(bw);
        for j in lo..i {
            let mut v = a.get(i, j);
            for p in lo.max(j.saturating_sub(bw))..j {
                v -= l[at(i, p)] * l[at(j, p)] * d[p];
            }
            l[at(i, j)] = v / d[j];
        }
        let mut di = a.get(i, i);
        for (q, p) in (lo..i).enumerate() {
            w[q] = l[at(i, p)] * d[p];
            di -= w[q] * l[at(i, p)];
        }
        if di.abs() < tiny {
            di = -tiny;
        }
        if di < 0.0 {
            negatives += 1;
        }
        d[i] = di;
    }
    negatives
}

/// Pivoted LU of a band matrix, used for shifted inverse iteration.
struct BandLu {
    n: usize,
    bw: usize,
    width: usize,
    // (i, j) at i * width + (j + bw - i), j - i in [-bw, 2 bw]
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    fn factor(a: &SymmetricBandMatrix) -> Self {
        let (n, bw) = (a.dim, a.bandwidth);
        let width = 3 * bw + 1;
        let mut data = vec![0.0; n * width];
        for i in 0..n {
            for j in i.saturating_sub(bw)..(i + bw + 1).min(n) {
                data[i * width + j + bw - i] = a.get(i, j);
            }
        }
        let tiny = f64::EPSILON * a.max_abs().max(f64::MIN_POSITIVE);
        let mut lu = Self {
            n,
            bw,
            width,
            data,
            pivots: vec![0; n],
        };
        for k in 0..n {
            let last_row = (k + bw).min(n - 1);
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = lu.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.pivots[k] = p;
            let last_col = (k + 2 * bw).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a_kj = lu.get(k, j);
                    let a_pj = lu.get(p, j);
                    lu.put(k, j, a_pj);
                    lu.put(p, j, a_kj);
                }
            }
            let mut pivot = lu.get(k, k);
            if pivot.abs() < tiny {
                pivot = if pivot < 0.0 { -tiny } else { tiny };
                lu.put(k, k, pivot);
            }
            for i in k + 1..=last_row {
                let m = lu.get(i, k) / pivot;
                lu.put(i, k, m);
                if m != 0.0 {
                    for j in k + 1..=last_col {
                        let v = lu.get(i, j) - m * lu.get(k, j);
                        lu.put(i, j, v);
                    }
                }
            }
        }
        lu
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize + self.bw as isize - i as isize;
        if off < 0 || off as usize >= self.width {
            None
        } else {
            Some(i * self.width + off as usize)
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |s| self.data[s])
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, v: f64) {
        match self.index(i, j) {
            Some(s) => self.data[s] = v,
            None => debug_assert!(v == 0.0, "fill outside LU band"),
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            for i in k + 1..(k + bw + 1).min(n) {
                x[i] -= self.get(i, k) * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..(k + 2 * bw + 1).min(n) {
                s -= self.get(k, j) * x[j];
            }
            x[k] = s / self.get(k, k);
        }
        x
    }
}

/// Lowest eigenpairs of a symmetric-definite band pencil.
#[derive(Debug, Clone)]
pub struct GeneralizedEigenSolution {
    /// Ascending, hartree when the pencil is a radial Hamiltonian.
    pub eigenvalues: Vec<f64>,
    /// S-orthonormal coefficient vectors.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `||H c - E S c|| / ||c||` per pair.
    pub residuals: Vec<f64>,
}

pub const INVERSE_ITERATION_CAP: usize = 100;
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The `count` algebraically smallest eigenpairs of `H c = E S c`.
pub fn eigs_lowest(
    h: &SymmetricBandMatrix,
    s: &SymmetricBandMatrix,
    count: usize,
) -> Result<GeneralizedEigenSolution> {
    let n = h.dim;
    if s.dim != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {n}x{n} but S is {0}x{0}",
            s.dim
        )));
    }
    if count == 0 || count > n {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: format!("requested {count} eigenpairs of a {n}-dimensional problem"),
        });
    }
    // positive definiteness of S is what makes the inertia count meaningful
    cholesky_banded(s)?;

    let count_below = |sigma: f64| inertia_below(h, s, sigma);

    let mut lower = -1.0;
    let mut steps = 0;
    while count_below(lower) > 0 {
        lower *= 2.0;
        steps += 1;
        if steps > 2100 {
            return Err(Error::ConvergenceFailure("no lower spectral bound".into()));
        }
    }
    let mut upper = 1.0;
    steps = 0;
    while count_below(upper) < count {
        upper *= 2.0;
        steps += 1;
        if steps > 2100 {
            return Err(Error::ConvergenceFailure("no upper spectral bound".into()));
        }
    }

    let mut values = Vec::with_capacity(count);
    let mut lo_start = lower;
    for j in 0..count {
        // smallest sigma with count_below(sigma) > j
        let (mut lo, mut hi) = (lo_start, upper);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        values.push(lambda);
        lo_start = lo;
    }

    let scale = h.max_abs().max(s.max_abs()).max(1.0);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for (j, &lambda) in values.iter().enumerate() {
        let cluster: Vec<usize> = (0..j)
            .filter(|&p| (values[p] - lambda).abs() <= 1e-10 * lambda.abs().max(1.0))
            .collect();
        let lu = BandLu::factor(&h.shifted(s, lambda));
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i * (j + 1)) as f64 * 0.7319).sin())
            .collect();
        let mut best: Option<(f64, f64, Vec<f64>)> = None;
        let mut previous = f64::INFINITY;
        for _ in 0..INVERSE_ITERATION_CAP {
            let mut y = lu.solve(&s.matvec(&x));
            for &p in &cluster {
                let c = dot(&y, &s.matvec(&vectors[p]));
                y.iter_mut().zip(&vectors[p]).for_each(|(a, b)| *a -= c * b);
            }
            let snorm = dot(&y, &s.matvec(&y)).sqrt();
            if !(snorm > 0.0) || !snorm.is_finite() {
                return Err(Error::ConvergenceFailure(format!(
                    "inverse iteration broke down for eigenvalue {j}"
                )));
            }
            y.iter_mut().for_each(|v| *v /= snorm);
            let hy = h.matvec(&y);
            let sy = s.matvec(&y);
            let rho = dot(&y, &hy);
            let r: Vec<f64> = hy.iter().zip(&sy).map(|(a, b)| a - rho * b).collect();
            let res = norm(&r) / norm(&y);
            x = y;
            if best.as_ref().is_none_or(|b| res < b.1) {
                best = Some((rho, res, x.clone()));
            }
            // stop once converged and no longer improving
            if res <= RESIDUAL_TOLERANCE && (res > 0.5 * previous || res <= 1e-15 * scale) {
                break;
            }
            previous = res;
        }
        match best {
            Some((rho, res, mut v)) if res <= RESIDUAL_TOLERANCE => {
                normalize_sign(&mut v);
                eigenvalues.push(rho);
                residuals.push(res);
                vectors.push(v);
            }
            _ => {
                return Err(Error::ConvergenceFailure(format!(
                    "eigenpair {j} (E = {lambda}) missed residual tolerance {RESIDUAL_TOLERANCE:e} \
                     after {INVERSE_ITERATION_CAP} steps"
                )))
            }
        }
    }

    order_degenerate(&mut eigenvalues, &mut vectors, &mut residuals);
    Ok(GeneralizedEigenSolution {
        eigenvalues,
        eigenvectors: vectors,
        residuals,
    })
}

fn first_significant(v: &[f64]) -> usize {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter().position(|x| x.abs() > 1e-6 * max).unwrap_or(0)
}

fn normalize_sign(v: &mut [f64]) {
    let i = first_significant(v);
    if v[i] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Within runs of equal eigenvalues, order vectors by the index of their
/// first significant coefficient.
fn order_degenerate(values: &mut [f64], vectors: &mut [Vec<f64>], residuals: &mut [f64]) {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len()
            && (values[end] - values[start]).abs() <= 1e-10 * values[start].abs().max(1.0)
        {
            end += 1;
        }
        if end - start > 1 {
            let mut idx: Vec<usize> = (start..end).collect();
            idx.sort_by_key(|&i| first_significant(&vectors[i]));
            let vs: Vec<Vec<f64>> = idx.iter().map(|&i| vectors[i].clone()).collect();
            let rs: Vec<f64> = idx.iter().map(|&i| residuals[i]).collect();
            let es: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
            for (q, i) in (start..end).enumerate() {
                vectors[i] = vs[q].clone();
                residuals[i] = rs[q];
                values[i] = es[q];
            }
        }
        start = end;
    }
}
