//! Ionization potential and excited levels of lithium under both screened models.

use pseudoatom::catalog::{excited_spectrum, ionization_potential, lookup};
use pseudoatom::{ModelKind, RadialSolver, SolverConfig};

fn main() -> pseudoatom::Result<()> {
    let solver = RadialSolver::new(SolverConfig::default())?;
    let li = lookup("Li")?;
    for kind in [ModelKind::ConstantScreening, ModelKind::VaryingScreening] {
        let ip = ionization_potential(&li, kind, &solver)?;
        println!("{kind}: IP {:.3} eV", ip.ip_ev);
        for level in excited_spectrum(&li, kind, 4, 3, &solver)? {
            println!("  {:>3} {:>8.3} eV", level.label, level.energy_scaled_ev);
        }
    }
    Ok(())
}
