//! Atomic units. Energies are hartree, lengths bohr.

/// CODATA 2018 hartree energy in electron volts.
pub const HARTREE_EV: f64 = 27.211386245988;

/// The rounded conversion `1 hartree = 27.2 eV` common in older tables.
pub const ROUNDED_HARTREE_EV: f64 = 27.2;

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_EV
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}
