//! Integral pairing lattices.
//!
//! For a free comodule `X` with a surjection `π : X mod p -> V̄` onto a
//! comodule over `F_p` (typically `X = Γ^{p^r}(gl2)`, `V̄ = (gl2 mod p)^(r)`),
//! `K = π^{-1}(0) ⊆ X` and `Y = {f ∈ X^# : f(K) ⊆ pZ}`. The square
//!
//! ```text
//! Γ^m X ⊗ S^m Y  ------>  k
//!      |                  |
//! Γ^m V̄ ⊗ S^m V̄^# ---->  k mod p
//! ```
//!
//! is checked to commute on spanning sets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::comodules::{
    div_power, dual, dual_coordinates, gl2_conjugation, reduce_mod, sublattice_comodule, sym_power,
    twist_projection, Comodule, ComoduleMap, Multisets,
};
use crate::error::{AlgebraError, Result};
use crate::exactalg::{is_prime, modp, IntegerLattice, IntegerMatrix, Polynomial, Ring};
use crate::hochschild::Pairing;

/// `Γ^{p^r}(gl2) mod p -> (gl2 mod p)^(r)`.
pub fn build_x_map(p: u64, r: u32) -> Result<ComoduleMap> {
    twist_projection(&reduce_mod(&gl2_conjugation(), p)?, r)
}

/// The lattices `K ⊆ X` and `Y ⊆ X^#` for one projection.
#[derive(Clone, Debug)]
pub struct PairingSetup {
    p: u64,
    x: Comodule,
    projection: ComoduleMap,
    a: IntegerMatrix,
    k: IntegerLattice,
    y: IntegerLattice,
    /// Image of each basis vector of `Y` in `V̄^#`: `y ≡ φ ∘ π mod p`.
    y_images: Vec<Vec<u64>>,
}

impl PairingSetup {
    /// `x` over `Z`, `projection` from `x mod p`.
    pub fn new(x: &Comodule, projection: &ComoduleMap) -> Result<PairingSetup> {
        if x.ring() != Ring::Integers {
            return Err(AlgebraError::RequiresIntegers(x.ring()));
        }
        let p = match projection.source().ring() {
            Ring::Mod(p) if is_prime(p) => p,
            r => return Err(AlgebraError::WrongBaseRing(format!("projection must be over F_p, got {r}"))),
        };
        if *projection.source() != reduce_mod(x, p)? {
            return Err(AlgebraError::ComoduleMismatch(format!(
                "projection source {} is not {} mod {p}",
                projection.source(),
                x
            )));
        }
        let a = projection.matrix();
        let k = IntegerLattice::preimage_mod(&a, p)?;
        let y = IntegerLattice::preimage_mod(k.basis(), p)?;
        let rows = a.to_u64_rows(p);
        let mut y_images = Vec::with_capacity(y.rank());
        for i in 0..y.rank() {
            let v: Vec<u64> = y
                .basis()
                .row(i)
                .iter()
                .map(|c| (c % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p))
                .map(|c| c.try_into().unwrap())
                .collect();
            let phi = modp::solve_left(&rows, &v, p).ok_or_else(|| AlgebraError::VerificationFailed {
                reason: "element of Y does not factor through the projection".into(),
                witness: format!("{:?}", y.basis().row(i)),
            })?;
            y_images.push(phi);
        }
        Ok(PairingSetup {
            p,
            x: x.clone(),
            projection: projection.clone(),
            a,
            k,
            y,
            y_images,
        })
    }

    /// `X = Γ^{p^r}(gl2)` with the projection onto `(gl2 mod p)^(r)`.
    pub fn standard(p: u64, r: u32) -> Result<PairingSetup> {
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= 64)
            .ok_or_else(|| AlgebraError::CapExceeded(format!("{p}^{r}")))?;
        let x = div_power(&gl2_conjugation(), q as u32);
        PairingSetup::new(&x, &build_x_map(p, r)?)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn x(&self) -> &Comodule {
        &self.x
    }

    pub fn projection(&self) -> &ComoduleMap {
        &self.projection
    }

    /// The matrix of `π`, rows indexed by `V̄`.
    pub fn projection_matrix(&self) -> &IntegerMatrix {
        &self.a
    }

    pub fn k(&self) -> &IntegerLattice {
        &self.k
    }

    pub fn y(&self) -> &IntegerLattice {
        &self.y
    }

    pub fn y_images(&self) -> &[Vec<u64>] {
        &self.y_images
    }

    /// Rank of `V̄`.
    pub fn target_rank(&self) -> usize {
        self.projection.target().rank()
    }

    /// `Y -> V̄^#` is onto: the images of the basis of `Y` span `F_p^t`.
    pub fn right_surjective(&self) -> bool {
        let t = self.target_rank();
        modp::rank(self.y_images.clone(), t, self.p) == t
    }

    /// `Y` as a subcomodule of `X^#`.
    pub fn y_comodule(&self) -> Result<Comodule> {
        sublattice_comodule(&dual(&self.x)?, &self.y)
    }

    /// `⟨e^[λ], Π y_k^{μ_k}⟩` over `ring`: the coefficient of `x^λ` in
    /// `Π (Σ_i y_ki x_i)^{μ_k}`. Returns one polynomial per `μ`.
    fn top_polys(&self, m: u32, ring: Ring) -> Result<(Multisets, Vec<Polynomial>)> {
        let n = self.x.rank();
        let vars = dual_coordinates(n);
        let forms: Vec<Polynomial> = (0..self.y.rank())
            .map(|k| {
                let terms = self
                    .y
                    .basis()
                    .row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        let mut e = vec![0; n];
                        e[i] = 1;
                        (e, c.clone())
                    });
                Polynomial::from_terms(&vars, ring, terms)
            })
            .collect::<Result<_>>()?;
        let basis = Multisets::new(self.y.rank(), m);
        let polys = basis.iter().map(|mu| monomial_in(&forms, mu, &vars, ring)).collect();
        Ok((basis, polys))
    }

    /// `Γ^m X ⊗ S^m Y -> Z` as a pairing of comodules.
    pub fn top_pairing(&self, m: u32) -> Result<Pairing> {
        let gamma = div_power(&self.x, m);
        let sym = sym_power(&self.y_comodule()?, m);
        let (_, gbasis, _) = gamma.power_structure().unwrap();
        let (sbasis, polys) = self.top_polys(m, Ring::Integers)?;
        let mut entries = Vec::new();
        for (b, f) in polys.iter().enumerate() {
            for (e, c) in f.terms() {
                let lam: Vec<u32> = e.iter().map(|&x| x as u32).collect();
                entries.push(((gbasis.index_of(&lam).unwrap(), b), 0, c.clone()));
            }
        }
        debug_assert_eq!(sbasis.len(), sym.rank());
        let k = Comodule::trivial(self.x.group(), Ring::Integers, 1);
        Pairing::new(&gamma, &sym, &k, entries)
    }

    /// Checks the square for `Γ^m`, with top-right corner `base` (`Z` or
    /// `Z/p^e`), on all divided monomials against all degree-`m` products of
    /// the basis of `Y`.
    pub fn diagram_commutes(&self, m: u32, base: Ring) -> Result<DiagramCheck> {
        let p = self.p;
        match base {
            Ring::Integers => {}
            Ring::Mod(q) if q % p == 0 => {}
            r => return Err(AlgebraError::WrongBaseRing(format!("{r} does not reduce to F_{p}"))),
        }
        let fp = Ring::modulo(p)?;
        let gamma_pi = self.projection.divided_power(m)?;
        let (_, gbasis, _) = gamma_pi.source().power_structure().unwrap();
        let (_, tbasis, _) = gamma_pi.target().power_structure().unwrap();

        let left_surjective = gamma_pi.matrix().rank_mod_p(p) == tbasis.len();

        let (sbasis, top) = self.top_polys(m, base)?;
        let zvars = dual_coordinates(self.target_rank());
        let images: Vec<Polynomial> = self
            .y_images
            .iter()
            .map(|phi| {
                let terms = phi.iter().enumerate().filter(|(_, c)| **c != 0).map(|(a, c)| {
                    let mut e = vec![0; phi.len()];
                    e[a] = 1;
                    (e, BigInt::from(*c))
                });
                Polynomial::from_terms(&zvars, fp, terms)
            })
            .collect::<Result<_>>()?;

        let mut pairs = 0usize;
        for (b, mu) in sbasis.iter().enumerate() {
            let bottom_poly = monomial_in(&images, mu, &zvars, fp);
            for (l, lam) in gbasis.iter().enumerate() {
                pairs += 1;
                let exps: Vec<i32> = lam.iter().map(|&x| x as i32).collect();
                let top_value = fp.reduce(top[b].coeff(&exps));
                let mut bottom = BigInt::zero();
                for (nu, c) in gamma_pi.column(l) {
                    let e: Vec<i32> = tbasis.get(*nu).iter().map(|&x| x as i32).collect();
                    bottom += c * bottom_poly.coeff(&e);
                }
                let bottom = fp.reduce(bottom);
                if top_value != bottom {
                    return Ok(DiagramCheck {
                        holds: false,
                        pairs_checked: pairs,
                        left_surjective,
                        right_surjective: self.right_surjective(),
                        witness: Some(format!(
                            "⟨{}, y^{:?}⟩: top {} vs bottom {}",
                            gamma_pi.source().label(l),
                            mu,
                            top_value,
                            bottom
                        )),
                    });
                }
            }
        }
        Ok(DiagramCheck {
            holds: left_surjective && self.right_surjective(),
            pairs_checked: pairs,
            left_surjective,
            right_surjective: self.right_surjective(),
            witness: None,
        })
    }
}

fn monomial_in(forms: &[Polynomial], mu: &[u32], vars: &std::sync::Arc<crate::exactalg::VarSet>, ring: Ring) -> Polynomial {
    let mut acc = Polynomial::one(vars, ring);
    for (k, &e) in mu.iter().enumerate() {
        if e > 0 {
            acc = &acc * &forms[k].pow(e);
        }
    }
    acc
}

/// Outcome of [`PairingSetup::diagram_commutes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCheck {
    pub holds: bool,
    pub pairs_checked: usize,
    pub left_surjective: bool,
    pub right_surjective: bool,
    /// First pair on which the two paths differ.
    pub witness: Option<String>,
}

impl fmt::Display for DiagramCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} pairs, left onto: {}, right onto: {})",
            if self.holds { "commutes" } else { "fails" },
            self.pairs_checked,
            self.left_surjective,
            self.right_surjective
        )?;
        if let Some(w) = &self.witness {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

/// `K` for the standard setup.
pub fn build_k(p: u64, r: u32) -> Result<IntegerLattice> {
    Ok(PairingSetup::standard(p, r)?.k)
}

/// `Y` for the standard setup.
pub fn build_y(p: u64, r: u32) -> Result<IntegerLattice> {
    Ok(PairingSetup::standard(p, r)?.y)
}

/// The standard square for `(p, r, m)` over `base`.
pub fn diagram_commutes(p: u64, r: u32, m: u32, base: Ring) -> Result<DiagramCheck> {
    PairingSetup::standard(p, r)?.diagram_commutes(m, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comodules::{direct_sum, E_ALPHA};
    use num_traits::One;

    #[test]
    fn kernel_index() {
        let s = PairingSetup::standard(2, 1).unwrap();
        assert_eq!(s.k().index(), Some(BigInt::from(16)));
        let mut v = vec![BigInt::zero(); 10];
        v[Multisets::new(4, 2).pure(E_ALPHA)] = BigInt::from(2);
        assert!(s.k().contains(&v));
    }

    #[test]
    fn y_is_the_scaled_dual() {
        let s = PairingSetup::standard(2, 1).unwrap();
        assert_eq!(*s.y(), s.k().scaled_dual(&BigInt::from(2)).unwrap());
        assert_eq!(s.y().index(), Some(BigInt::from(2u32.pow(6))));
        assert!(s.right_surjective());
    }

    #[test]
    fn square_commutes_small() {
        let s = PairingSetup::standard(2, 1).unwrap();
        let c = s.diagram_commutes(1, Ring::Integers).unwrap();
        assert!(c.holds, "{c}");
        assert_eq!(c.pairs_checked, 100);
        assert!(s.diagram_commutes(2, Ring::Mod(4)).unwrap().holds);
    }

    #[test]
    fn top_pairing_is_equivariant() {
        let s = PairingSetup::standard(2, 1).unwrap();
        s.top_pairing(1).unwrap().verify().unwrap();
    }

    #[test]
    fn doubled_gl2() {
        let gl2 = gl2_conjugation();
        let x = direct_sum(&gl2, &gl2).unwrap();
        let gp = reduce_mod(&gl2, 3).unwrap();
        let columns = (0..8).map(|j| vec![(j % 4, BigInt::one())]).collect();
        let map = ComoduleMap::new(&reduce_mod(&x, 3).unwrap(), &gp, columns).unwrap();
        map.verify_equivariance().unwrap();
        let s = PairingSetup::new(&x, &map).unwrap();
        assert_eq!(s.k().index(), Some(BigInt::from(81)));
        assert!(s.diagram_commutes(2, Ring::Integers).unwrap().holds);
    }
}
