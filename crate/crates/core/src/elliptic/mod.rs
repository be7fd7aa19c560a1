//! Lattices, Eisenstein invariants, `j`, and the Weierstrass `℘` function.

pub mod eisenstein;
pub mod lattice;
pub mod weierstrass;

pub use eisenstein::{eisenstein, EisensteinInvariants, LatticeSums, DEFAULT_TRUNC, MIN_TRUNC};
pub use lattice::{modular_action, Lattice, ModulusTau};
pub use weierstrass::{half_period_values, weierstrass_p, Weierstrass, WpValue};
