use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntegerMatrix;
use super::scalar::is_prime;
use crate::error::{AlgebraError, Result};

/// Sublattice of `Z^n`, stored by its row Hermite basis (no zero rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient: usize,
    basis: IntegerMatrix,
}

impl IntegerLattice {
    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntegerMatrix) -> IntegerLattice {
        let h = generators.hnf();
        let rows: Vec<Vec<BigInt>> = (0..h.rows())
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .map(|i| h.row_vec(i))
            .collect();
        IntegerLattice {
            ambient: generators.cols(),
            basis: IntegerMatrix::from_big_rows(rows, generators.cols()),
        }
    }

    pub fn full(n: usize) -> IntegerLattice {
        IntegerLattice {
            ambient: n,
            basis: IntegerMatrix::identity(n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient
    }

    /// `[Z^n : L]` for full-rank lattices.
    pub fn index(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some((0..self.rank()).map(|i| self.basis.get(i, i).clone()).product())
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut rest = v.to_vec();
        let pivots = self.basis.pivot_columns();
        let mut coords = Vec::with_capacity(self.rank());
        for (k, &pc) in pivots.iter().enumerate() {
            let (q, r) = rest[pc].div_rem(self.basis.get(k, pc));
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, x) in self.basis.row(k).iter().enumerate() {
                    if !x.is_zero() {
                        rest[j] -= &q * x;
                    }
                }
            }
            coords.push(q);
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> bool {
        self.ambient == other.ambient
            && (0..self.rank()).all(|i| other.contains(self.basis.row(i)))
    }

    /// `L ⊗ Q ∩ Z^n`.
    pub fn saturation(&self) -> IntegerLattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let perp = self.basis.integer_kernel();
        if perp.rows() == 0 {
            return IntegerLattice::full(self.ambient);
        }
        IntegerLattice::from_generators(&perp.integer_kernel())
    }

    pub fn scaled(&self, c: &BigInt) -> IntegerLattice {
        let rows: Vec<Vec<BigInt>> = (0..self.rank())
            .map(|i| self.basis.row(i).iter().map(|x| x * c).collect())
            .collect();
        IntegerLattice::from_generators(&IntegerMatrix::from_big_rows(rows, self.ambient))
    }

    /// `{v in Z^n : A v ≡ 0 mod p}` for a `k × n` matrix `A`. The result has
    /// full rank and index `p^(rank of A mod p)`.
    pub fn preimage_mod(a: &IntegerMatrix, p: u64) -> Result<IntegerLattice> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        let n = a.cols();
        let kernel = a.kernel_mod_p(p);
        let mut rows: Vec<Vec<BigInt>> = kernel
            .into_iter()
            .map(|v| v.into_iter().map(BigInt::from).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(p);
            rows.push(e);
        }
        Ok(IntegerLattice::from_generators(&IntegerMatrix::from_big_rows(rows, n)))
    }

    /// `c · L^*` where `L^* = {f : f(L) ⊆ Z}`, for full-rank `L`; errors
    /// unless the result is integral.
    pub fn scaled_dual(&self, c: &BigInt) -> Result<IntegerLattice> {
        if !self.is_full_rank() {
            return Err(AlgebraError::Dimension("dual of a non-full-rank lattice".into()));
        }
        let n = self.ambient;
        // L^* = B^{-1} Z^n (columns); solve B X = c I on the triangular basis
        let mut x = IntegerMatrix::zeros(n, n);
        for col in 0..n {
            for i in (0..n).rev() {
                let mut rhs = if i == col { c.clone() } else { BigInt::zero() };
                for k in i + 1..n {
                    let b = self.basis.get(i, k);
                    if !b.is_zero() {
                        rhs -= b * x.get(k, col);
                    }
                }
                let (q, r) = rhs.div_rem(self.basis.get(i, i));
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible {
                        divisor: self.basis.get(i, i).to_string(),
                        monomial: format!("dual basis entry ({i}, {col})"),
                    });
                }
                x.set(i, col, q);
            }
        }
        Ok(IntegerLattice::from_generators(&x.transpose()))
    }
}

impl fmt::Display for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}
