//! One-electron pseudopotentials for an electron in an `n`-electron atom.
//!
//! Both screened models are of Hellmann form `-Z/r + A s(r) / r`:
//!
//! * constant screening: `A s(r) = (n-1)/2 * [2Z/(n-1)]^(1/3)`, a pure
//!   Coulomb tail with a reduced charge;
//! * varying screening: `A s(r) = (n-1) [Z/(2(n-1))]^(3/5) zeta(r)`, where
//!   `zeta` approximates the hydrogenic average of `f^(3/5)` and
//!   `f(r_i, r_j) = r_i^2 / (r_i^2 + r_j^2)` is the pair partition weight.
//!
//! The pair coefficient between electrons is fixed at one half. For a
//! single electron both models collapse to the bare Coulomb potential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pair partition coefficient for sharing the correlation energy.
pub const PAIR_PARTITION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "coulomb")]
    BareCoulomb,
    #[serde(rename = "v1")]
    ConstantScreening,
    #[serde(rename = "v2")]
    VaryingScreening,
}

impl ModelKind {
    /// Short tag used on the command line and in reports.
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::BareCoulomb => "coulomb",
            ModelKind::ConstantScreening => "v1",
            ModelKind::VaryingScreening => "v2",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "coulomb" => Some(ModelKind::BareCoulomb),
            "v1" => Some(ModelKind::ConstantScreening),
            "v2" => Some(ModelKind::VaryingScreening),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A central potential for nuclear charge `z` and `n_electrons` electrons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    kind: ModelKind,
    z: u32,
    n_electrons: u32,
    alpha: f64,
}

impl PotentialModel {
    pub fn new(kind: ModelKind, z: u32, n_electrons: u32) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: "nuclear charge must be positive".into(),
            });
        }
        if n_electrons == 0 {
            return Err(Error::InvalidParameter {
                name: "n_electrons",
                reason: "need at least one electron".into(),
            });
        }
        let model = Self {
            kind,
            z,
            n_electrons,
            alpha: PAIR_PARTITION,
        };
        match kind {
            ModelKind::BareCoulomb => {}
            ModelKind::ConstantScreening => {
                v1_effective_charge(z, n_electrons)?;
            }
            ModelKind::VaryingScreening => {
                let charge = model.asymptotic_charge();
                if charge <= 0.0 {
                    return Err(Error::NonPhysical {
                        z,
                        n_electrons,
                        charge,
                    });
                }
            }
        }
        Ok(model)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn n_electrons(&self) -> u32 {
        self.n_electrons
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Charge seen by an electron far from the nucleus.
    pub fn asymptotic_charge(&self) -> f64 {
        let z = f64::from(self.z);
        match self.kind {
            ModelKind::BareCoulomb => z,
            ModelKind::ConstantScreening => z - constant_screening(self.z, self.n_electrons),
            ModelKind::VaryingScreening => z - partition_screening(self.z, self.n_electrons, 1.0),
        }
    }

    /// Screening charge `A s(r)` such that `V(r) = (-Z + A s(r)) / r`.
    pub fn screening_charge(&self, r: f64) -> f64 {
        match self.kind {
            ModelKind::BareCoulomb => 0.0,
            ModelKind::ConstantScreening => constant_screening(self.z, self.n_electrons),
            ModelKind::VaryingScreening if self.n_electrons == 1 => 0.0,
            ModelKind::VaryingScreening => {
                partition_screening(self.z, self.n_electrons, 1.0) * zeta_unchecked(self.z, r)
            }
        }
    }

    /// Radial potential including the centrifugal term `l(l+1)/(2 r^2)`.
    pub fn value(&self, l: u32, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
        Ok(self.value_unchecked(l, r))
    }

    pub(crate) fn value_unchecked(&self, l: u32, r: f64) -> f64 {
        let lf = f64::from(l);
        (self.screening_charge(r) - f64::from(self.z)) / r + lf * (lf + 1.0) / (2.0 * r * r)
    }
}

fn constant_screening(z: u32, n: u32) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let others = f64::from(n - 1);
    0.5 * others * (2.0 * f64::from(z) / others).cbrt()
}

/// Screening charge `(n-1) [Z f / (2(n-1))]^(3/5)` for a fixed partition weight `f`.
pub fn partition_screening(z: u32, n: u32, f: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let others = f64::from(n - 1);
    others * (f64::from(z) * f / (2.0 * others)).powf(0.6)
}

/// Effective charge of the constant-screening model.
pub fn v1_effective_charge(z: u32, n: u32) -> Result<f64> {
    let charge = f64::from(z) - constant_screening(z, n);
    if charge <= 0.0 {
        return Err(Error::NonPhysical {
            z,
            n_electrons: n,
            charge,
        });
    }
    Ok(charge)
}

/// Closed-form hydrogenic level `-Z_eff^2 / (2 principal^2)` of the
/// constant-screening model; independent of `l`.
pub fn v1_eigenvalue_analytic(z: u32, n: u32, principal: u32) -> Result<f64> {
    if principal == 0 {
        return Err(Error::InvalidParameter {
            name: "principal",
            reason: "principal quantum number starts at 1".into(),
        });
    }
    let charge = v1_effective_charge(z, n)?;
    let p = f64::from(principal);
    Ok(-charge * charge / (2.0 * p * p))
}

/// Approximate hydrogenic average of `f^(3/5)` seen at radius `r`.
///
/// Tends to 1 at large `r` and diverges like `6/(125 Z r)` at the origin.
pub fn zeta(z: u32, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    Ok(zeta_unchecked(z, r))
}

fn zeta_unchecked(z: u32, r: f64) -> f64 {
    let x = f64::from(z) * r;
    1.0 - (27.0 / 25.0 + 1.2 * x - 6.0 / (125.0 * x)) * (-2.0 * x).exp()
}

/// Pair partition weight `r_i^2 / (r_i^2 + r_j^2)`.
pub fn partition_f(r_i: f64, r_j: f64) -> Result<f64> {
    if r_i < 0.0 || r_j < 0.0 || !(r_i.is_finite() && r_j.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: format!("radii must be finite and non-negative, got ({r_i}, {r_j})"),
        });
    }
    if r_i == 0.0 && r_j == 0.0 {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "partition weight undefined when both radii vanish".into(),
        });
    }
    let (a, b) = (r_i * r_i, r_j * r_j);
    Ok(a / (a + b))
}

/// Which radius appears in the numerator of the averaged weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `r_i^2 / (r_i^2 + r_j^2)`, the active electron's radius on top.
    ActiveNumerator,
    /// `r_j^2 / (r_i^2 + r_j^2)`, the averaged-over electron on top.
    PassiveNumerator,
}

/// Truncation of the binomial series for `(1 + t^2)^(-3/5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaTruncation {
    /// Highest series index kept; `None` integrates the exact weight.
    pub k_max: Option<u32>,
    /// Absolute error target of the adaptive quadrature.
    pub tolerance: f64,
}

impl ZetaTruncation {
    pub fn exact() -> Self {
        Self {
            k_max: None,
            tolerance: 1e-12,
        }
    }

    /// The two-term series `1 - (3/5) t^2`.
    pub fn first_order() -> Self {
        Self {
            k_max: Some(1),
            tolerance: 1e-12,
        }
    }

    fn damping(&self, t: f64) -> f64 {
        match self.k_max {
            None => (1.0 + t * t).powf(-0.6),
            Some(k_max) => {
                let mut coeff = 1.0;
                let mut power = 1.0;
                let mut sum = 1.0;
                for k in 1..=k_max {
                    let kf = f64::from(k);
                    coeff *= (-0.6 - kf + 1.0) / kf;
                    power *= t * t;
                    sum += coeff * power;
                }
                sum
            }
        }
    }
}

impl Default for ZetaTruncation {
    fn default() -> Self {
        Self::first_order()
    }
}

/// Quadrature average of the partition weight to the 3/5 power over the
/// normalized hydrogenic density `4 Z^3 r_j^2 exp(-2 Z r_j)`.
///
/// The integral is split at `r_j = r_i` and written in `t = r_< / r_>`.
pub fn zeta_quadrature_oracle(
    z: u32,
    r_i: f64,
    trunc: &ZetaTruncation,
    orientation: Orientation,
) -> Result<f64> {
    if !(r_i > 0.0) || !r_i.is_finite() {
        return Err(Error::NonPositiveRadius(r_i));
    }
    if z == 0 {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "nuclear charge must be positive".into(),
        });
    }
    let zf = f64::from(z);
    let density = |r: f64| 4.0 * zf * zf * zf * r * r * (-2.0 * zf * r).exp();
    // inner: t = r_j / r_i; the weight with t in the numerator carries t^(6/5)
    let weighted = |t: f64, t_on_top: bool| {
        let d = trunc.damping(t);
        if t_on_top {
            t.powf(1.2) * d
        } else {
            d
        }
    };
    let inner_top = orientation == Orientation::PassiveNumerator;
    let inner = |r: f64| density(r) * weighted(r / r_i, inner_top);
    let outer = |r: f64| density(r) * weighted(r_i / r, !inner_top);

    // the density is below 1e-30 beyond 40/Z; panels of width 2.5/Z with a
    // breakpoint at r_i when it falls inside
    let end = 40.0 / zf;
    let panels = 16;
    let mut edges: Vec<f64> = (0..=panels).map(|p| end * p as f64 / panels as f64).collect();
    if r_i < end {
        edges.push(r_i);
        edges.sort_by(f64::total_cmp);
    }
    let tol = trunc.tolerance / edges.len() as f64;
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        total += if b <= r_i {
            adaptive_gauss(&inner, a, b, tol)?
        } else {
            adaptive_gauss(&outer, a, b, tol)?
        };
    }
    Ok(total)
}

fn gauss_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    // 10-point Gauss-Legendre, nodes/weights for [-1, 1]
    const X: [f64; 5] = [
        0.148_874_338_981_631_2,
        0.433_395_394_129_247_2,
        0.679_409_568_299_024_4,
        0.865_063_366_688_984_5,
        0.973_906_528_517_171_7,
    ];
    const W: [f64; 5] = [
        0.295_524_224_714_752_9,
        0.269_266_719_309_996_4,
        0.219_086_362_515_982_0,
        0.149_451_349_150_580_6,
        0.066_671_344_308_688_1,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in X.iter().zip(W) {
        s += w * (f(mid - half * x) + f(mid + half * x));
    }
    s * half
}

fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let left = gauss_panel(f, a, mid);
        let right = gauss_panel(f, mid, b);
        let refined = left + right;
        if (refined - whole).abs() <= tol.max(1e-17) {
            return Ok(refined);
        }
        if depth == 0 {
            return Err(Error::QuadratureNonConvergence(format!(
                "panel [{a}, {b}] still off by {:e}",
                (refined - whole).abs()
            )));
        }
        Ok(recurse(f, a, mid, left, 0.5 * tol, depth - 1)?
            + recurse(f, mid, b, right, 0.5 * tol, depth - 1)?)
    }
    recurse(f, a, b, gauss_panel(f, a, b), tol, 40)
}
