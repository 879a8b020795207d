//! Element data and the occupancy scaling `epsilon = (m/n) <h>`.
//!
//! `m` counts the non-vanishing one-body integrals among the `n!`
//! permutations of the ground configuration. It is tabulated, not derived.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudopotential::{ModelKind, PotentialModel};
use crate::radial::{orbital_label, RadialSolver, SolverConfig};
use crate::units::HARTREE_EV;

/// Per-element data for a neutral atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub symbol: String,
    pub z: u32,
    pub n_electrons: u32,
    pub m: u32,
    /// `(principal_n, l)` of the outermost occupied orbital.
    pub outermost: (u32, u32),
    pub reference_ip_ev: Option<f64>,
}

impl ElementRecord {
    fn row(symbol: &str, z: u32, m: u32, outermost: (u32, u32), reference: Option<f64>) -> Self {
        Self {
            symbol: symbol.to_owned(),
            z,
            n_electrons: z,
            m,
            outermost,
            reference_ip_ev: reference,
        }
    }

    /// Occupancy ratio `m/n`.
    pub fn occupancy(&self) -> f64 {
        f64::from(self.m) / f64::from(self.n_electrons)
    }

    /// Same element with a different permutation count.
    pub fn with_m(&self, m: u32) -> Result<Self> {
        if m == 0 || m > self.n_electrons {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: format!("m must lie in 1..={} for {}, got {m}", self.n_electrons, self.symbol),
            });
        }
        Ok(Self { m, ..self.clone() })
    }

    pub fn outermost_label(&self) -> String {
        orbital_label(self.outermost.0, self.outermost.1)
    }

    pub fn model(&self, kind: ModelKind) -> Result<PotentialModel> {
        PotentialModel::new(kind, self.z, self.n_electrons)
    }
}

/// Hydrogen through magnesium.
pub fn builtin_elements() -> Vec<ElementRecord> {
    vec![
        ElementRecord::row("H", 1, 1, (1, 0), None),
        ElementRecord::row("He", 2, 2, (1, 0), Some(24.60)),
        ElementRecord::row("Li", 3, 2, (2, 0), Some(5.39)),
        ElementRecord::row("Be", 4, 3, (2, 0), Some(9.32)),
        ElementRecord::row("B", 5, 3, (2, 1), Some(8.30)),
        ElementRecord::row("C", 6, 4, (2, 1), Some(11.26)),
        ElementRecord::row("N", 7, 4, (2, 1), Some(14.53)),
        ElementRecord::row("O", 8, 4, (2, 1), Some(13.62)),
        ElementRecord::row("F", 9, 5, (2, 1), Some(17.42)),
        ElementRecord::row("Ne", 10, 5, (2, 1), Some(21.56)),
        ElementRecord::row("Na", 11, 2, (3, 0), Some(5.14)),
        ElementRecord::row("Mg", 12, 2, (3, 0), Some(7.65)),
    ]
}

/// Case-insensitive lookup by chemical symbol.
pub fn lookup(symbol: &str) -> Result<ElementRecord> {
    builtin_elements()
        .into_iter()
        .find(|e| e.symbol.eq_ignore_ascii_case(symbol))
        .ok_or_else(|| Error::UnknownElement(symbol.to_owned()))
}

/// `(m/n) * raw`.
pub fn scale_energy(raw: f64, element: &ElementRecord) -> f64 {
    element.occupancy() * raw
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IonizationResult {
    pub symbol: String,
    pub z: u32,
    pub n_electrons: u32,
    pub m: u32,
    pub model: ModelKind,
    pub orbital: String,
    pub energy_raw_hartree: f64,
    pub energy_scaled_hartree: f64,
    pub energy_scaled_ev: f64,
    pub ip_ev: f64,
    pub reference_ip_ev: Option<f64>,
    pub hartree_ev: f64,
    pub config: SolverConfig,
}

/// Ionization potential from the outermost orbital of `element`.
pub fn ionization_potential(
    element: &ElementRecord,
    kind: ModelKind,
    solver: &RadialSolver,
) -> Result<IonizationResult> {
    ionization_potential_in(element, kind, solver, HARTREE_EV)
}

/// [`ionization_potential`] with an explicit hartree-to-eV factor.
pub fn ionization_potential_in(
    element: &ElementRecord,
    kind: ModelKind,
    solver: &RadialSolver,
    hartree_ev: f64,
) -> Result<IonizationResult> {
    let model = element.model(kind)?;
    let (principal, l) = element.outermost;
    let count = (principal - l) as usize;
    let states = solver.solve_spectrum(&model, l, count)?;
    let state = states
        .iter()
        .find(|s| s.principal_n == principal)
        .ok_or_else(|| Error::MissingOrbital {
            label: format!("{} {}", element.symbol, element.outermost_label()),
        })?;
    let scaled = scale_energy(state.energy_raw, element);
    Ok(IonizationResult {
        symbol: element.symbol.clone(),
        z: element.z,
        n_electrons: element.n_electrons,
        m: element.m,
        model: kind,
        orbital: state.label(),
        energy_raw_hartree: state.energy_raw,
        energy_scaled_hartree: scaled,
        energy_scaled_ev: scaled * hartree_ev,
        ip_ev: -scaled * hartree_ev,
        hartree_ev,
        reference_ip_ev: element.reference_ip_ev,
        config: *solver.config(),
    })
}

/// One scaled level of an excited-state table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub label: String,
    pub principal_n: u32,
    pub l: u32,
    pub energy_raw_hartree: f64,
    pub energy_scaled_hartree: f64,
    pub energy_scaled_ev: f64,
}

/// Scaled levels from the outermost shell up to `n_max`, for `l <= l_max`,
/// ordered by `(n, l)`.
pub fn excited_spectrum(
    element: &ElementRecord,
    kind: ModelKind,
    n_max: u32,
    l_max: u32,
    solver: &RadialSolver,
) -> Result<Vec<LevelEntry>> {
    excited_spectrum_in(element, kind, n_max, l_max, solver, HARTREE_EV)
}

/// [`excited_spectrum`] with an explicit hartree-to-eV factor.
pub fn excited_spectrum_in(
    element: &ElementRecord,
    kind: ModelKind,
    n_max: u32,
    l_max: u32,
    solver: &RadialSolver,
    hartree_ev: f64,
) -> Result<Vec<LevelEntry>> {
    if n_max < l_max + 1 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: format!("n_max = {n_max} cannot hold l_max = {l_max}"),
        });
    }
    let model = element.model(kind)?;
    let spectrum = solver.solve_levels(&model, n_max, l_max)?;
    let lowest = element.outermost.0;
    let mut levels: Vec<LevelEntry> = spectrum
        .states
        .iter()
        .filter(|s| s.principal_n >= lowest && s.principal_n <= n_max)
        .map(|s| {
            let scaled = scale_energy(s.energy_raw, element);
            LevelEntry {
                label: s.label(),
                principal_n: s.principal_n,
                l: s.l,
                energy_raw_hartree: s.energy_raw,
                energy_scaled_hartree: scaled,
                energy_scaled_ev: scaled * hartree_ev,
            }
        })
        .collect();
    levels.sort_by_key(|e| (e.principal_n, e.l));
    Ok(levels)
}

/// Catalog as CSV: `symbol,Z,n,m,outermost,ref_ip_eV`.
pub fn write_catalog_csv<W: Write>(elements: &[ElementRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["symbol", "Z", "n", "m", "outermost", "ref_ip_eV"])?;
    for e in elements {
        w.write_record([
            e.symbol.clone(),
            e.z.to_string(),
            e.n_electrons.to_string(),
            e.m.to_string(),
            e.outermost_label(),
            e.reference_ip_ev.map(|v| format!("{v:.2}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::hartree_to_ev;

    #[test]
    fn table_rows() {
        let li = lookup("Li").unwrap();
        assert_eq!((li.m, li.n_electrons), (2, 3));
        assert_eq!(li.outermost_label(), "2s");
        let ne = lookup("ne").unwrap();
        assert_eq!((ne.m, ne.n_electrons), (5, 10));
        assert_eq!(ne.outermost_label(), "2p");
        let h = lookup("H").unwrap();
        assert_eq!(h.occupancy(), 1.0);
        assert_eq!(h.outermost_label(), "1s");
        assert!(matches!(lookup("Xx"), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn catalog_invariants() {
        let all = builtin_elements();
        assert_eq!(all.len(), 12);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(e.z as usize, i + 1);
            assert!(e.m >= 1 && e.m <= e.n_electrons);
        }
        let expected = [
            ("He", "1s"),
            ("Li", "2s"),
            ("Be", "2s"),
            ("B", "2p"),
            ("O", "2p"),
            ("Ne", "2p"),
            ("Na", "3s"),
            ("Mg", "3s"),
        ];
        for (sym, orb) in expected {
            assert_eq!(lookup(sym).unwrap().outermost_label(), orb);
        }
    }

    #[test]
    fn scaling() {
        let li = lookup("Li").unwrap();
        let e = scale_energy(-0.303320, &li);
        assert!((e + 0.202213).abs() < 1e-6);
        assert!((hartree_to_ev(e) + 5.503).abs() < 1e-3);
        let be = lookup("Be").unwrap();
        let e = scale_energy(-0.460760, &be);
        assert!((e + 0.345570).abs() < 1e-6);
        assert!((hartree_to_ev(e) + 9.403).abs() < 1e-3);
        let h = lookup("H").unwrap();
        assert_eq!(scale_energy(-0.123, &h), -0.123);
    }

    #[test]
    fn m_override_bounds() {
        let mg = lookup("Mg").unwrap();
        assert_eq!(mg.with_m(3).unwrap().m, 3);
        assert!(mg.with_m(0).is_err());
        assert!(mg.with_m(13).is_err());
    }

    #[test]
    fn catalog_csv() {
        let mut buf = Vec::new();
        write_catalog_csv(&builtin_elements()[..3], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "symbol,Z,n,m,outermost,ref_ip_eV\nH,1,1,1,1s,\nHe,2,2,2,1s,24.60\nLi,3,3,2,2s,5.39\n"
        );
    }
}
