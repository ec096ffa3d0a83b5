//! Martingale Hardy-space tools: atoms, atomic synthesis, maximal functions and weak-`L_p`.

pub mod atom;
pub mod atom_file;
pub mod martingale;
pub mod probe;
pub mod weak;

pub use atom::{validate_atom, Atom, AtomVerdict};
pub use atom_file::{AtomFile, AtomValue};
pub use martingale::{martingale_from_atoms, maximal_function, MartingaleSpec, MaximalFunction};
pub use probe::atom_tail_weak_type_probe;
pub use weak::{lp_norm, weak_lp_distribution, weak_lp_quasinorm, WeakLp};
