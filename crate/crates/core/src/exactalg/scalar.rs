use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};

/// Base ring of a computation: the integers or a residue ring `Z/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Mod(u64),
}

impl Ring {
    pub fn modulo(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(AlgebraError::InvalidModulus(m.to_string()));
        }
        Ok(Ring::Mod(m))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Ring::Integers => None,
            Ring::Mod(m) => Some(*m),
        }
    }

    /// Canonical representative of `x` in this ring.
    pub fn reduce(&self, x: BigInt) -> BigInt {
        match self {
            Ring::Integers => x,
            Ring::Mod(m) => x.mod_floor(&BigInt::from(*m)),
        }
    }

    pub fn reduce_ref(&self, x: &BigInt) -> BigInt {
        match self {
            Ring::Integers => x.clone(),
            Ring::Mod(m) => x.mod_floor(&BigInt::from(*m)),
        }
    }

    pub fn is_zero(&self, x: &BigInt) -> bool {
        match self {
            Ring::Integers => x.is_zero(),
            Ring::Mod(m) => (x % BigInt::from(*m)).is_zero(),
        }
    }

    /// Multiplicative inverse, if `x` is a unit.
    pub fn inverse(&self, x: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Integers => {
                if x.is_one() {
                    Some(BigInt::one())
                } else if (-x).is_one() {
                    Some(-BigInt::one())
                } else {
                    None
                }
            }
            Ring::Mod(m) => {
                let m = BigInt::from(*m);
                let g = x.extended_gcd(&m);
                if g.gcd.is_one() {
                    Some(g.x.mod_floor(&m))
                } else {
                    None
                }
            }
        }
    }

    pub fn ensure_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch(*self, *other))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

/// An element of `Z` or `Z/m`. Residues are kept in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: BigInt,
    ring: Ring,
}

impl Scalar {
    pub fn new(value: impl Into<BigInt>, ring: Ring) -> Scalar {
        Scalar {
            value: ring.reduce(value.into()),
            ring,
        }
    }

    pub fn integer(value: impl Into<BigInt>) -> Scalar {
        Scalar::new(value, Ring::Integers)
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&other.ring)?;
        Ok(Scalar::new(&self.value + &other.value, self.ring))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&other.ring)?;
        Ok(Scalar::new(&self.value - &other.value, self.ring))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&other.ring)?;
        Ok(Scalar::new(&self.value * &other.value, self.ring))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::new(-&self.value, self.ring)
    }

    /// Exact division: over `Z` the quotient must be an integer, over `Z/m`
    /// the divisor must be a unit.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&other.ring)?;
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        match self.ring {
            Ring::Integers => {
                let (q, r) = self.value.div_rem(&other.value);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible {
                        divisor: other.value.to_string(),
                        monomial: "1".into(),
                    });
                }
                Ok(Scalar::integer(q))
            }
            Ring::Mod(_) => {
                let inv = self
                    .ring
                    .inverse(&other.value)
                    .ok_or_else(|| AlgebraError::NotInvertible(other.to_string()))?;
                Ok(Scalar::new(&self.value * inv, self.ring))
            }
        }
    }

    /// Reduction `Z -> Z/m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Scalar> {
        if self.ring != Ring::Integers {
            return Err(AlgebraError::RequiresIntegers(self.ring));
        }
        Ok(Scalar::new(self.value.clone(), Ring::modulo(m)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_canonical() {
        let r = Ring::Mod(5);
        assert_eq!(Scalar::new(-3, r).value(), &BigInt::from(2));
        assert_eq!(Scalar::new(12, r).value(), &BigInt::from(2));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = Scalar::new(1, Ring::Mod(5));
        let b = Scalar::integer(1);
        assert_eq!(
            a.try_add(&b),
            Err(AlgebraError::RingMismatch(Ring::Mod(5), Ring::Integers))
        );
    }

    #[test]
    fn division() {
        assert_eq!(
            Scalar::integer(6).try_div(&Scalar::integer(3)).unwrap(),
            Scalar::integer(2)
        );
        assert!(Scalar::integer(7).try_div(&Scalar::integer(3)).is_err());
        assert_eq!(
            Scalar::integer(7).try_div(&Scalar::integer(0)),
            Err(AlgebraError::DivisionByZero)
        );
        let r = Ring::Mod(7);
        let q = Scalar::new(3, r).try_div(&Scalar::new(5, r)).unwrap();
        assert_eq!(q.try_mul(&Scalar::new(5, r)).unwrap(), Scalar::new(3, r));
        assert!(Scalar::new(1, Ring::Mod(4))
            .try_div(&Scalar::new(2, Ring::Mod(4)))
            .is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(125, 0), BigInt::one());
    }

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
