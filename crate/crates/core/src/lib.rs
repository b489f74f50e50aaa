//! Exact symbolic workbench for Hochschild cochains of `Ga`, `T`, `B` and
//! `SL2` over `Z` and `Z/m`: integral lifts of Witt-vector cocycles, the
//! universal classes with divided-power coefficients, and the integral
//! pairing lattices that lift the mod-p pairings.

pub mod error;
pub mod exactalg;
pub mod groupschemes;
pub mod comodules;
pub mod hochschild;
pub mod classes;
pub mod pairlat;

pub use error::{AlgebraError, Result};
pub use exactalg::{IntegerLattice, IntegerMatrix, Polynomial, Ring, Scalar, Var, VarSet};
pub use groupschemes::{make_group, GroupHom, GroupName, GroupScheme};
pub use comodules::{Comodule, ComoduleMap};
pub use hochschild::{cup, Cochain, Pairing, TensorCochain};
pub use classes::UniversalClassSpec;
pub use pairlat::{DiagramCheck, PairingSetup};
