//! Exact scalars, sparse Laurent polynomials and integer matrix normal forms.

mod lattice;
mod matrix;
pub(crate) mod modp;
mod poly;
mod scalar;

use std::collections::HashMap;

use num_bigint::BigInt;

pub use lattice::IntegerLattice;
pub use matrix::IntegerMatrix;
pub use poly::{Exponents, Polynomial, Var, VarSet};
pub use scalar::{Ring, Scalar};

pub(crate) use poly::render_monomial;
pub(crate) use scalar::{binomial, is_prime};

use crate::error::Result;

pub fn poly_substitute(f: &Polynomial, assignment: &HashMap<String, Polynomial>) -> Result<Polynomial> {
    f.substitute_named(assignment)
}

pub fn exact_div_scalar(f: &Polynomial, n: impl Into<BigInt>) -> Result<Polynomial> {
    f.exact_div_scalar(&n.into())
}

pub fn reduce_mod(f: &Polynomial, m: u64) -> Result<Polynomial> {
    f.reduce_mod(m)
}

pub fn hnf(a: &IntegerMatrix) -> IntegerMatrix {
    a.hnf()
}

/// Kernel of `a`, viewed as a map `Z^n -> (Z/p)^k`, as a full-rank lattice.
pub fn lattice_preimage_mod(a: &IntegerMatrix, p: u64) -> Result<IntegerLattice> {
    IntegerLattice::preimage_mod(a, p)
}
