//! The Witt-vector cocycles of `Ga` and the universal classes built from
//! them.
//!
//! `Φ(X,Y)` is defined by `(X+Y)^p = X^p + Y^p + pΦ(X,Y)` and
//! `c_r(X,Y) = ((X+Y)^{p^r} - X^{p^r} - Y^{p^r}) / p`. The universal cochain
//! is `c_{j+1}^{∪mp^{r-1}} ⊗ e_α^[mp^{r+j}]` on the root subgroup with
//! coefficients in `Γ^{mp^{r+j}}(gl2)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::comodules::{
    div_power, gl2_conjugation, gamma_composition_map, reduce_mod, restrict, twist_projection,
    Comodule, Multisets, E_ALPHA,
};
use crate::error::{AlgebraError, Result};
use crate::exactalg::{binomial, is_prime, Polynomial, Ring, VarSet};
use crate::groupschemes::{make_group, root_hom, GroupName};
use crate::hochschild::{bounded_cohomology_ga, ClassStatus, Cochain, TensorCochain};

/// Largest coefficient rank of `Γ^N(gl2)` the universal class is built for.
pub const MAX_COEFFICIENT_RANK: usize = 500;
/// Largest cohomological degree of a cup power.
pub const MAX_CUP_DEGREE: usize = 8;
/// Default bound on the number of terms an expanded cup power may have.
pub const DEFAULT_EXPANSION_CAP: usize = 200_000;

const Z: Ring = Ring::Integers;

fn xy() -> Arc<VarSet> {
    VarSet::polynomial(&["X", "Y"])
}

fn prime_power(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&q| q <= i32::MAX as u64)
        .ok_or_else(|| AlgebraError::CapExceeded(format!("{p}^{e}")))
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(AlgebraError::NotPrime(p))
    }
}

/// `(X+Y)^n - X^n - Y^n`, written down from binomial coefficients.
fn middle_binomial(n: u64) -> Polynomial {
    let vars = xy();
    let terms = (1..n).map(|k| (vec![k as i32, (n - k) as i32], binomial(n, k)));
    Polynomial::from_terms(&vars, Z, terms).expect("two variables")
}

/// `Φ(X, Y) ∈ Z[X, Y]`.
pub fn phi(p: u64) -> Result<Polynomial> {
    check_prime(p)?;
    middle_binomial(p).exact_div_scalar(&BigInt::from(p))
}

/// `Φ(X^{p^s}, Y^{p^s})`.
pub fn phi_twisted(p: u64, s: u32) -> Result<Polynomial> {
    let q = prime_power(p, s)?;
    Ok(phi(p)?.scale_exponents(q as i32))
}

/// `c_r(X, Y) ∈ Z[X, Y]`.
pub fn witt_polynomial(p: u64, r: u32) -> Result<Polynomial> {
    check_prime(p)?;
    if r == 0 {
        return Err(AlgebraError::InvalidParameter("r must be at least 1".into()));
    }
    let q = prime_power(p, r)?;
    middle_binomial(q).exact_div_scalar(&BigInt::from(p))
}

/// A polynomial in `X, Y` as a function on `Ga^2`.
pub fn as_ga_cochain(f: &Polynomial) -> Result<Cochain> {
    let ga = make_group(GroupName::Ga);
    let vars = ga.copies(2);
    let k = Comodule::trivial(&ga, f.ring(), 1);
    Cochain::new(&k, 2, &VarSet::empty(), vec![f.rename(&vars, &[0, 1])?])
}

/// `c_r` as a 2-cochain of `Ga` with coefficients `Z`.
pub fn witt_cocycle(p: u64, r: u32) -> Result<Cochain> {
    as_ga_cochain(&witt_polynomial(p, r)?)
}

/// `p·c_r = d(-X^{p^r})`.
pub fn check_coboundary_identity(p: u64, r: u32) -> Result<bool> {
    let ga = make_group(GroupName::Ga);
    let q = prime_power(p, r)?;
    let k = Comodule::trivial(&ga, Z, 1);
    let x = Polynomial::monomial(&ga.copies(1), Z, vec![q as i32], -BigInt::one());
    let d = Cochain::new(&k, 1, &VarSet::empty(), vec![x])?.differential()?;
    Ok(d == witt_cocycle(p, r)?.scale(&BigInt::from(p)))
}

/// `c_r ≡ Φ(X^{p^{r-1}}, Y^{p^{r-1}}) mod p`.
pub fn check_congruence_p(p: u64, r: u32) -> Result<bool> {
    let lhs = witt_polynomial(p, r)?.reduce_mod(p)?;
    let rhs = phi_twisted(p, r - 1)?.reduce_mod(p)?;
    Ok(lhs == rhs)
}

/// Outcome of the mod `p²` congruence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCheck {
    pub holds: bool,
    /// `(X+Y)^{p^r} - X^{p^r} - Y^{p^r} - pΦ(X^{p^{r-1}}, Y^{p^{r-1}})` over `Z`.
    pub difference: Polynomial,
}

/// `(X+Y)^{p^r} ≡ X^{p^r} + Y^{p^r} + pΦ(X^{p^{r-1}}, Y^{p^{r-1}}) mod p²`.
pub fn check_congruence_p2(p: u64, r: u32) -> Result<CongruenceCheck> {
    check_prime(p)?;
    if r == 0 {
        return Err(AlgebraError::InvalidParameter("r must be at least 1".into()));
    }
    let q = prime_power(p, r)?;
    let difference = &middle_binomial(q) - &phi_twisted(p, r - 1)?.scale(&BigInt::from(p));
    let holds = difference.reduce_mod(p * p)?.is_zero();
    Ok(CongruenceCheck { holds, difference })
}

/// `c_r^{∪m}` as a sum of tensor words (here a single word).
pub fn cup_power_tensor(p: u64, r: u32, m: u32) -> Result<TensorCochain> {
    if 2 * m as usize > MAX_CUP_DEGREE {
        return Err(AlgebraError::CapExceeded(format!(
            "cup degree {} exceeds {MAX_CUP_DEGREE}",
            2 * m
        )));
    }
    TensorCochain::from_cochain(&format!("c{r}"), &witt_cocycle(p, r)?)?.power(m)
}

/// `Φ(X^{p^s}, Y^{p^s})^{∪m}` over `Z/p`.
pub fn phi_cup_power_tensor(p: u64, s: u32, m: u32) -> Result<TensorCochain> {
    let f = as_ga_cochain(&phi_twisted(p, s)?.reduce_mod(p)?)?;
    TensorCochain::from_cochain("phi", &f)?.power(m)
}

/// `c_r^{∪m}` expanded, failing if it would exceed
/// [`DEFAULT_EXPANSION_CAP`] terms.
pub fn cup_power(p: u64, r: u32, m: u32) -> Result<Cochain> {
    cup_power_tensor(p, r, m)?.expand(DEFAULT_EXPANSION_CAP)
}

/// Parameters `(p, r, j, m)` of a universal class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UniversalClassSpec {
    pub p: u64,
    pub r: u32,
    pub j: u32,
    pub m: u32,
}

impl UniversalClassSpec {
    /// Validates the parameters against the rank and degree caps.
    pub fn new(p: u64, r: u32, j: u32, m: u32) -> Result<UniversalClassSpec> {
        check_prime(p)?;
        if r == 0 || m == 0 {
            return Err(AlgebraError::InvalidParameter("r and m must be at least 1".into()));
        }
        let spec = UniversalClassSpec { p, r, j, m };
        let n = spec.weight()?;
        let rank = binomial(n + 3, 3);
        if rank > BigInt::from(MAX_COEFFICIENT_RANK) {
            return Err(AlgebraError::CapExceeded(format!(
                "coefficient rank {rank} exceeds {MAX_COEFFICIENT_RANK}"
            )));
        }
        if spec.degree()? > MAX_CUP_DEGREE {
            return Err(AlgebraError::CapExceeded(format!(
                "cohomological degree {} exceeds {MAX_CUP_DEGREE}",
                spec.degree()?
            )));
        }
        Ok(spec)
    }

    /// `p^{r+j}`.
    pub fn twist_power(&self) -> Result<u64> {
        prime_power(self.p, self.r + self.j)
    }

    /// `N = mp^{r+j}`.
    pub fn weight(&self) -> Result<u64> {
        Ok(self.m as u64 * self.twist_power()?)
    }

    /// Number of cup factors `mp^{r-1}`.
    pub fn cup_factors(&self) -> Result<u32> {
        Ok(self.m * prime_power(self.p, self.r - 1)? as u32)
    }

    /// Cohomological degree `2mp^{r-1}`.
    pub fn degree(&self) -> Result<usize> {
        Ok(2 * self.cup_factors()? as usize)
    }

    /// `C(N+3, 3)`.
    pub fn coefficient_rank(&self) -> Result<usize> {
        let n = self.weight()?;
        Ok(usize::try_from(binomial(n + 3, 3)).unwrap())
    }
}

impl fmt::Display for UniversalClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} r={} j={} m={}", self.p, self.r, self.j, self.m)
    }
}

/// `x_α^* Γ^N(gl2)`.
pub fn universal_coefficients(spec: &UniversalClassSpec) -> Result<Comodule> {
    restrict(&div_power(&gl2_conjugation(), spec.weight()? as u32), &root_hom())
}

/// `c_{j+1}^{∪mp^{r-1}} ⊗ e_α^[mp^{r+j}]` on `Ga`.
pub fn universal_cochain(spec: &UniversalClassSpec) -> Result<Cochain> {
    let coeffs = universal_coefficients(spec)?;
    let word = TensorCochain::from_cochain("c", &witt_cocycle(spec.p, spec.j + 1)?)?
        .power(spec.cup_factors()?)?
        .expand(DEFAULT_EXPANSION_CAP)?;
    let idx = Multisets::new(4, spec.weight()? as u32).pure(E_ALPHA);
    Cochain::single(&coeffs, spec.degree()?, idx, word.component(0).clone())
}

/// Target of the projection: `x_α^* Γ^m((gl2 mod p)^(r+j))`.
pub fn projected_coefficients(spec: &UniversalClassSpec) -> Result<Comodule> {
    let gl2p = reduce_mod(&gl2_conjugation(), spec.p)?;
    let pi = twist_projection(&gl2p, spec.r + spec.j)?;
    restrict(&div_power(pi.target(), spec.m), &root_hom())
}

/// Pushes the universal cochain along `Γ^N -> Γ^m Γ^{p^{r+j}}`, reduces
/// mod `p`, then applies `Γ^m` of the projection onto the twist.
pub fn project_universal_class(spec: &UniversalClassSpec) -> Result<Cochain> {
    project_cochain(&universal_cochain(spec)?, spec)
}

fn project_cochain(f: &Cochain, spec: &UniversalClassSpec) -> Result<Cochain> {
    let root = root_hom();
    let gl2 = gl2_conjugation();
    let q = spec.twist_power()? as u32;
    let compose = gamma_composition_map(&gl2, spec.m, q)?.restrict(&root)?;
    let pi = twist_projection(&reduce_mod(&gl2, spec.p)?, spec.r + spec.j)?;
    let gamma_pi = pi.divided_power(spec.m)?.restrict(&root)?;
    let pushed = if f.ring() == Ring::Integers {
        f.apply_coefficient_map(&compose)?.reduce_mod(spec.p)?
    } else {
        f.apply_coefficient_map(&compose.reduce_mod(spec.p)?)?
    };
    pushed.apply_coefficient_map(&gamma_pi)
}

/// The same projection with reduction mod `p` done first.
pub fn project_reduced_first(spec: &UniversalClassSpec) -> Result<Cochain> {
    project_cochain(&universal_cochain(spec)?.reduce_mod(spec.p)?, spec)
}

/// `Φ(X^{p^j}, Y^{p^j})^{∪mp^{r-1}} ⊗ e_α^{(r+j)[m]}` over `Z/p`.
pub fn expected_projection(spec: &UniversalClassSpec) -> Result<Cochain> {
    let coeffs = projected_coefficients(spec)?;
    let word = phi_cup_power_tensor(spec.p, spec.j, spec.cup_factors()?)?.expand(DEFAULT_EXPANSION_CAP)?;
    let idx = Multisets::new(4, spec.m).pure(E_ALPHA);
    Cochain::single(&coeffs, spec.degree()?, idx, word.component(0).clone())
}

/// Result of comparing two cochains componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    /// First differing component: basis label, left value, right value.
    pub witness: Option<(String, String, String)>,
}

/// Componentwise equality of cochains with the same coefficients.
pub fn compare(left: &Cochain, right: &Cochain) -> Result<Comparison> {
    if left.coeffs() != right.coeffs() || left.degree() != right.degree() {
        return Err(AlgebraError::ComoduleMismatch(format!(
            "cannot compare cochains in {} (degree {}) and {} (degree {})",
            left.coeffs(),
            left.degree(),
            right.coeffs(),
            right.degree()
        )));
    }
    for i in 0..left.components().len() {
        if left.component(i) != right.component(i) {
            return Ok(Comparison {
                holds: false,
                witness: Some((
                    left.coeffs().label(i).to_string(),
                    left.component(i).to_string(),
                    right.component(i).to_string(),
                )),
            });
        }
    }
    Ok(Comparison {
        holds: true,
        witness: None,
    })
}

/// Cocycle, invariance, extension and projection checks for one spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalCheck {
    pub spec: UniversalClassSpec,
    pub cocycle: bool,
    pub t_invariant: bool,
    pub borel_cocycle: bool,
    pub projection: Comparison,
    pub projection_is_cocycle: bool,
    pub reduction_commutes: bool,
}

impl UniversalCheck {
    pub fn all_pass(&self) -> bool {
        self.cocycle
            && self.t_invariant
            && self.borel_cocycle
            && self.projection.holds
            && self.projection_is_cocycle
            && self.reduction_commutes
    }
}

pub fn check_universal_class(spec: &UniversalClassSpec) -> Result<UniversalCheck> {
    let f = universal_cochain(spec)?;
    let cocycle = f.is_cocycle()?.holds;
    let t_invariant = f.is_t_invariant()?;
    let borel_cocycle = match f.extend_to_borel() {
        Ok(_) => true,
        Err(AlgebraError::VerificationFailed { .. }) => false,
        Err(e) => return Err(e),
    };
    let projected = project_cochain(&f, spec)?;
    let projection = compare(&projected, &expected_projection(spec)?)?;
    let projection_is_cocycle = projected.is_cocycle()?.holds;
    let reduction_commutes = project_cochain(&f.reduce_mod(spec.p)?, spec)? == projected;
    Ok(UniversalCheck {
        spec: *spec,
        cocycle,
        t_invariant,
        borel_cocycle,
        projection,
        projection_is_cocycle,
        reduction_commutes,
    })
}

/// All `(p, r, j, m)` with `p` in `primes` and `mp^{r+j} ≤ max_weight`
/// that pass the caps.
pub fn universal_grid(primes: &[u64], max_weight: u64) -> Vec<UniversalClassSpec> {
    let mut out = Vec::new();
    for &p in primes {
        for r in 1..=16u32 {
            for j in 0..=16u32 {
                for m in 1..=max_weight as u32 {
                    let Some(q) = p.checked_pow(r + j) else { continue };
                    if q.saturating_mul(m as u64) > max_weight {
                        continue;
                    }
                    if let Ok(spec) = UniversalClassSpec::new(p, r, j, m) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

/// `c_1 mod p` is a cocycle whose class in the total-degree-`p` piece of
/// `H^2(Ga, F_p)` is nonzero.
pub fn nontriviality_certificate(p: u64) -> Result<ClassStatus> {
    let piece = bounded_cohomology_ga(p, 2, p as u32)?;
    let c1 = witt_cocycle(p, 1)?;
    piece.classify(c1.component(0))
}

/// Number of nonzero coefficients of `f` not divisible by `n`.
pub fn count_not_divisible(f: &Polynomial, n: u64) -> usize {
    let n = BigInt::from(n);
    f.terms().filter(|(_, c)| !(*c % &n).is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_primes() {
        assert_eq!(phi(2).unwrap().to_string(), "X*Y");
        assert_eq!(phi(3).unwrap().to_string(), "X^2*Y + X*Y^2");
        assert_eq!(phi(5).unwrap().to_string(), "X^4*Y + 2*X^3*Y^2 + 2*X^2*Y^3 + X*Y^4");
        assert_eq!(phi(4), Err(AlgebraError::NotPrime(4)));
    }

    #[test]
    fn witt_polynomials() {
        assert_eq!(witt_polynomial(2, 1).unwrap().to_string(), "X*Y");
        assert_eq!(witt_polynomial(2, 2).unwrap().to_string(), "2*X^3*Y + 3*X^2*Y^2 + 2*X*Y^3");
        assert_eq!(witt_polynomial(3, 1).unwrap(), phi(3).unwrap());
    }

    #[test]
    fn congruences() {
        let c = check_congruence_p2(2, 2).unwrap();
        assert!(c.holds);
        // 6X^2Y^2 - 2X^2Y^2 leaves a middle term
        assert_eq!(c.difference.to_string(), "4*X^3*Y + 4*X^2*Y^2 + 4*X*Y^3");
        assert!(check_congruence_p2(2, 1).unwrap().difference.is_zero());
        assert!(check_congruence_p2(3, 2).unwrap().holds);
        assert!(check_congruence_p(3, 2).unwrap());
        assert!(check_coboundary_identity(2, 2).unwrap());
    }

    #[test]
    fn small_cup_powers() {
        assert_eq!(cup_power(2, 1, 2).unwrap().component(0).to_string(), "X1*X2*X3*X4");
        assert_eq!(cup_power(3, 1, 1).unwrap(), witt_cocycle(3, 1).unwrap());
        let reduced = cup_power(2, 2, 2).unwrap().reduce_mod(2).unwrap();
        assert_eq!(reduced.component(0).to_string(), "X1^2*X2^2*X3^2*X4^2");
    }

    #[test]
    fn spec_caps() {
        let s = UniversalClassSpec::new(3, 1, 1, 1).unwrap();
        assert_eq!(s.weight().unwrap(), 9);
        assert_eq!(s.coefficient_rank().unwrap(), 220);
        assert!(matches!(UniversalClassSpec::new(2, 5, 0, 1), Err(AlgebraError::CapExceeded(_))));
    }

    #[test]
    fn first_universal_cochain() {
        let spec = UniversalClassSpec::new(2, 1, 0, 1).unwrap();
        let f = universal_cochain(&spec).unwrap();
        assert_eq!(f.coeffs().rank(), 10);
        assert_eq!(f.to_string(), "(X1*X2) ⊗ e_alpha^[2]");
        let check = check_universal_class(&spec).unwrap();
        assert!(check.all_pass(), "{check:?}");
        assert_eq!(project_universal_class(&spec).unwrap().to_string(), "(X1*X2) ⊗ e_alpha");
    }

    #[test]
    fn degree_four_projection() {
        let spec = UniversalClassSpec::new(2, 2, 0, 1).unwrap();
        let proj = project_universal_class(&spec).unwrap();
        assert_eq!(proj.to_string(), "(X1*X2*X3*X4) ⊗ e_alpha");
        assert_eq!(proj, project_reduced_first(&spec).unwrap());
    }

    #[test]
    fn certificates() {
        assert_eq!(nontriviality_certificate(2).unwrap(), ClassStatus::NonzeroClass);
        assert_eq!(nontriviality_certificate(3).unwrap(), ClassStatus::NonzeroClass);
    }
}
