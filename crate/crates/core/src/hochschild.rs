//! Hochschild cochains `C^n(G, M) = M ⊗ k[G]^{⊗n}` with the standard
//! differential
//!
//! ```text
//! (df)(g1, ..., g_{n+1}) = g1·f(g2, ...) + Σ (-1)^i f(..., g_i g_{i+1}, ...)
//!                          + (-1)^{n+1} f(g1, ..., gn)
//! ```
//!
//! cup products induced by pairings, the torus action on cochains of the
//! root subgroup, extension to the Borel subgroup, and graded cohomology
//! of `Ga` over `F_p`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::comodules::{
    compositions, dual, restrict, tensor, tensor_factors, Comodule, ComoduleMap,
};
use crate::error::{AlgebraError, Result};
use crate::exactalg::{is_prime, modp, IntegerMatrix, Polynomial, Ring, Var, VarSet};
use crate::groupschemes::{
    borel_coordinates, borel_xu_hom, make_group, root_hom, root_into_borel, torus_hom,
    torus_weight_of_root, GroupName, GroupScheme,
};

fn sign(k: usize) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// A cochain of degree `n`: one polynomial on `G^n × params` per basis
/// vector of the coefficient comodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    coeffs: Comodule,
    degree: usize,
    params: Arc<VarSet>,
    components: Vec<Polynomial>,
}

impl Cochain {
    /// Components must live on `copies_with(degree, params)` over the ring
    /// of `coeffs`; they are put in normal form.
    pub fn new(
        coeffs: &Comodule,
        degree: usize,
        params: &Arc<VarSet>,
        components: Vec<Polynomial>,
    ) -> Result<Cochain> {
        if components.len() != coeffs.rank() {
            return Err(AlgebraError::Dimension(format!(
                "{} components for a rank-{} module",
                components.len(),
                coeffs.rank()
            )));
        }
        let g = coeffs.group();
        let vars = g.copies_with(degree, params);
        let mut comps = Vec::with_capacity(components.len());
        for f in components {
            coeffs.ring().ensure_same(&f.ring())?;
            if **f.vars() != *vars {
                return Err(AlgebraError::VariableMismatch(f.vars().names(), vars.names()));
            }
            comps.push(g.normalize_copies(&f, degree));
        }
        Ok(Cochain {
            coeffs: coeffs.clone(),
            degree,
            params: params.clone(),
            components: comps,
        })
    }

    /// The zero cochain of the given degree.
    pub fn zero(coeffs: &Comodule, degree: usize, params: &Arc<VarSet>) -> Cochain {
        let vars = coeffs.group().copies_with(degree, params);
        Cochain {
            coeffs: coeffs.clone(),
            degree,
            params: params.clone(),
            components: vec![Polynomial::zero(&vars, coeffs.ring()); coeffs.rank()],
        }
    }

    /// A single component `f ⊗ e_index`.
    pub fn single(coeffs: &Comodule, degree: usize, index: usize, f: Polynomial) -> Result<Cochain> {
        let params = VarSet::empty();
        let mut c = Cochain::zero(coeffs, degree, &params);
        if index >= coeffs.rank() {
            return Err(AlgebraError::Dimension(format!("basis index {index}")));
        }
        let mut comps = std::mem::take(&mut c.components);
        comps[index] = f;
        Cochain::new(coeffs, degree, &params, comps)
    }

    /// A degree-0 cochain, i.e. a vector of `M`.
    pub fn from_vector(coeffs: &Comodule, v: &[BigInt]) -> Result<Cochain> {
        let params = VarSet::empty();
        let vars = coeffs.group().copies(0);
        let comps = v
            .iter()
            .map(|c| Polynomial::constant(&vars, coeffs.ring(), c.clone()))
            .collect();
        Cochain::new(coeffs, 0, &params, comps)
    }

    pub fn group(&self) -> &GroupScheme {
        self.coeffs.group()
    }

    pub fn coeffs(&self) -> &Comodule {
        &self.coeffs
    }

    pub fn ring(&self) -> Ring {
        self.coeffs.ring()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn params(&self) -> &Arc<VarSet> {
        &self.params
    }

    pub fn vars(&self) -> Arc<VarSet> {
        self.group().copies_with(self.degree, &self.params)
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    /// Indices of the nonzero components.
    pub fn support(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| !self.components[i].is_zero())
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.components.iter().map(|f| f.num_terms()).sum()
    }

    fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.coeffs != other.coeffs {
            return Err(AlgebraError::ComoduleMismatch(format!("{} vs {}", self.coeffs, other.coeffs)));
        }
        if self.degree != other.degree || self.params != other.params {
            return Err(AlgebraError::Dimension("cochain degrees or parameters differ".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_shape(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Cochain {
            components,
            ..self.clone()
        })
    }

    pub fn try_sub(&self, other: &Cochain) -> Result<Cochain> {
        self.try_add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Cochain {
        Cochain {
            components: self.components.iter().map(|f| f.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// Coefficients reduced into `Z/modulus`, along with the comodule.
    pub fn reduce_mod(&self, modulus: u64) -> Result<Cochain> {
        let coeffs = crate::comodules::reduce_mod(&self.coeffs, modulus)?;
        let ring = coeffs.ring();
        let components = self
            .components
            .iter()
            .map(|f| f.to_ring(ring))
            .collect::<Result<_>>()?;
        Ok(Cochain {
            coeffs,
            components,
            ..self.clone()
        })
    }

    /// The same components viewed with more parameters appended.
    pub fn with_params(&self, params: &Arc<VarSet>) -> Result<Cochain> {
        if params.len() < self.params.len()
            || params.vars()[..self.params.len()] != *self.params.vars()
        {
            return Err(AlgebraError::InvalidParameter("parameters must extend the current ones".into()));
        }
        let vars = self.group().copies_with(self.degree, params);
        let map: Vec<usize> = (0..self.vars().len()).collect();
        let components = self
            .components
            .iter()
            .map(|f| f.rename(&vars, &map))
            .collect::<Result<_>>()?;
        Ok(Cochain {
            params: params.clone(),
            components,
            ..self.clone()
        })
    }

    /// The Hochschild differential.
    pub fn differential(&self) -> Result<Cochain> {
        let g = self.group().clone();
        let ring = self.ring();
        let n = self.degree;
        let gn = g.num_gens();
        let plen = self.params.len();
        let out_vars = g.copies_with(n + 1, &self.params);
        let zero = Polynomial::zero(&out_vars, ring);
        let mut out = vec![zero.clone(); self.coeffs.rank()];

        // g1 · f(g2, ..., g_{n+1})
        let shift = g.copy_map(n, n + 1, plen, |c| c + 1);
        let first_copy: Vec<usize> = (0..gn).collect();
        for j in self.support() {
            let fj = self.components[j].rename(&out_vars, &shift)?;
            for (i, r) in self.coeffs.column(j)?.iter() {
                let r = r.rename(&out_vars, &first_copy)?;
                out[*i] = out[*i].try_add(&r.try_mul(&fj)?)?;
            }
        }

        // merges g_k g_{k+1}
        let param_vars: Vec<Polynomial> = (0..plen)
            .map(|q| Polynomial::var(&out_vars, ring, (n + 1) * gn + q))
            .collect();
        for k in 0..n {
            let mut assignment = Vec::with_capacity(n * gn + plen);
            for c in 0..n {
                if c < k {
                    assignment.extend(g.copy_gens(&out_vars, ring, c));
                } else if c == k {
                    assignment.extend(g.comul_on(&out_vars, ring, k));
                } else {
                    assignment.extend(g.copy_gens(&out_vars, ring, c + 1));
                }
            }
            assignment.extend(param_vars.iter().cloned());
            let s = sign(k + 1);
            for j in self.support() {
                let h = self.components[j].substitute(&assignment)?;
                out[j].add_scaled(&h, &s)?;
            }
        }

        // (-1)^{n+1} f(g1, ..., gn)
        let keep = g.copy_map(n, n + 1, plen, |c| c);
        let s = sign(n + 1);
        for j in self.support() {
            let h = self.components[j].rename(&out_vars, &keep)?;
            out[j].add_scaled(&h, &s)?;
        }

        Cochain::new(&self.coeffs, n + 1, &self.params, out)
    }

    /// `df = 0`, returning `df` as the certificate either way.
    pub fn is_cocycle(&self) -> Result<CocycleCheck> {
        let differential = self.differential()?;
        Ok(CocycleCheck {
            holds: differential.is_zero(),
            differential,
        })
    }

    /// Pushes the values forward along an equivariant map.
    pub fn apply_coefficient_map(&self, map: &ComoduleMap) -> Result<Cochain> {
        if *map.source() != self.coeffs {
            return Err(AlgebraError::ComoduleMismatch(format!(
                "map source {} vs coefficients {}",
                map.source(),
                self.coeffs
            )));
        }
        let vars = self.vars();
        let mut out = vec![Polynomial::zero(&vars, map.target().ring()); map.target().rank()];
        for j in self.support() {
            for (i, c) in map.column(j) {
                out[*i].add_scaled(&self.components[j], c)?;
            }
        }
        Cochain::new(map.target(), self.degree, &self.params, out)
    }

    /// `t·f` for a cochain of `Ga` with coefficients restricted along the
    /// root homomorphism: the arguments are conjugated by `t = diag(u,u^-1)`
    /// and the value is moved by `t`. The parameter is called `u`.
    pub fn torus_act(&self) -> Result<Cochain> {
        self.torus_act_named("u")
    }

    /// [`Cochain::torus_act`] with a chosen name for the torus parameter.
    pub fn torus_act_named(&self, param: &str) -> Result<Cochain> {
        if self.group().name() != GroupName::Ga {
            return Err(AlgebraError::NotTorusStructured(format!(
                "cochain lives on {}, not Ga",
                self.group()
            )));
        }
        if self.params.index_of(param).is_some() || param == "X" {
            return Err(AlgebraError::InvalidParameter(format!("parameter {param} already in use")));
        }
        let torus_module = torus_module(&self.coeffs)?;
        let n = self.degree;
        let plen = self.params.len();
        let params = self.params.concat(&VarSet::new(vec![Var::laurent(param)]));
        let vars = self.group().copies_with(n, &params);
        let ring = self.ring();
        let u = Polynomial::var(&vars, ring, n + plen);
        let w = -torus_weight_of_root();
        let scale = if w >= 0 {
            u.pow(w as u32)
        } else {
            u.inverse_monomial()?.pow((-w) as u32)
        };
        let mut assignment: Vec<Polynomial> = (0..n)
            .map(|c| &scale * &Polynomial::var(&vars, ring, c))
            .collect();
        assignment.extend((0..plen).map(|q| Polynomial::var(&vars, ring, n + q)));
        let moved: Vec<Polynomial> = self
            .components
            .iter()
            .map(|f| f.substitute(&assignment))
            .collect::<Result<_>>()?;
        let mut out = vec![Polynomial::zero(&vars, ring); self.coeffs.rank()];
        let to_param = [n + plen];
        for j in self.support() {
            for (i, r) in torus_module.column(j)?.iter() {
                let r = r.rename(&vars, &to_param)?;
                out[*i] = out[*i].try_add(&r.try_mul(&moved[j])?)?;
            }
        }
        Cochain::new(&self.coeffs, n, &params, out)
    }

    /// `t·f = f` as an identity of Laurent polynomials in `u`.
    pub fn is_t_invariant(&self) -> Result<bool> {
        let moved = self.torus_act()?;
        Ok(moved == self.with_params(moved.params())?)
    }

    /// The Borel cochain `f_B(b1, ..., bn) = f(x1, c_{t1}(x2), c_{t1 t2}(x3), ...)`
    /// in the `(x, u)` chart, where `c_t` scales the root coordinate by the
    /// root character. It is returned only after checking that it is a
    /// cocycle restricting to `f`.
    pub fn extend_to_borel(&self) -> Result<Cochain> {
        if !self.is_t_invariant()? {
            return Err(AlgebraError::VerificationFailed {
                reason: "cochain is not T-invariant".into(),
                witness: self.torus_act()?.to_string(),
            });
        }
        let check = self.is_cocycle()?;
        if !check.holds {
            return Err(AlgebraError::VerificationFailed {
                reason: "cochain is not a cocycle".into(),
                witness: check.differential.to_string(),
            });
        }
        let b = borel_coordinates();
        let b_module = if self.coeffs.is_trivial() {
            Comodule::trivial(&b, self.ring(), self.coeffs.rank())
        } else {
            let (base, _) = self.coeffs.restriction().expect("checked by torus_act");
            restrict(base, &borel_xu_hom())?
        };
        let n = self.degree;
        let plen = self.params.len();
        let ring = self.ring();
        let vars = b.copies_with(n, &self.params);
        let w = torus_weight_of_root();
        let mut assignment = Vec::with_capacity(n + plen);
        let mut prefix = Polynomial::one(&vars, ring);
        for k in 0..n {
            let x = Polynomial::var(&vars, ring, 2 * k);
            let factor = if w >= 0 {
                prefix.pow(w as u32)
            } else {
                prefix.inverse_monomial()?.pow((-w) as u32)
            };
            assignment.push(&factor * &x);
            prefix = &prefix * &Polynomial::var(&vars, ring, 2 * k + 1);
        }
        assignment.extend((0..plen).map(|q| Polynomial::var(&vars, ring, 2 * n + q)));
        let components = self
            .components
            .iter()
            .map(|f| f.substitute(&assignment))
            .collect::<Result<_>>()?;
        let fb = Cochain::new(&b_module, n, &self.params, components)?;

        let check = fb.is_cocycle()?;
        if !check.holds {
            return Err(AlgebraError::VerificationFailed {
                reason: "extension is not a B-cocycle".into(),
                witness: check.differential.to_string(),
            });
        }
        let back = fb.pull_back(&root_into_borel())?;
        if back.components != self.components {
            return Err(AlgebraError::VerificationFailed {
                reason: "extension does not restrict to the original cochain".into(),
                witness: back.to_string(),
            });
        }
        Ok(fb)
    }

    /// Restriction along `φ : H -> G`; coefficients become `φ^* M`.
    pub fn pull_back(&self, hom: &crate::groupschemes::GroupHom) -> Result<Cochain> {
        let coeffs = restrict(&self.coeffs, hom)?;
        let components = self
            .components
            .iter()
            .map(|f| hom.pull_copies(f, self.degree, &self.params))
            .collect::<Result<_>>()?;
        Cochain::new(&coeffs, self.degree, &self.params, components)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .into_iter()
            .map(|i| format!("({}) ⊗ {}", self.components[i], self.coeffs.label(i)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The torus comodule underlying Ga-coefficients restricted from `SL2`.
fn torus_module(coeffs: &Comodule) -> Result<Comodule> {
    let t = make_group(GroupName::T);
    if coeffs.is_trivial() {
        return Ok(Comodule::trivial(&t, coeffs.ring(), coeffs.rank()));
    }
    match coeffs.restriction() {
        Some((base, hom)) if *hom == root_hom() => restrict(base, &torus_hom()),
        _ => Err(AlgebraError::NotTorusStructured(format!(
            "{} is not restricted from SL2 along the root homomorphism",
            coeffs
        ))),
    }
}

/// Result of a cocycle test.
#[derive(Clone, Debug)]
pub struct CocycleCheck {
    pub holds: bool,
    pub differential: Cochain,
}

/// An equivariant bilinear map `U ⊗ V -> Z`.
#[derive(Clone, Debug)]
pub struct Pairing {
    left: Comodule,
    right: Comodule,
    out: Comodule,
    table: BTreeMap<(usize, usize), Vec<(usize, BigInt)>>,
}

impl Pairing {
    /// `entries` lists `((a, b), k, c)`: `u_a ⊗ v_b ↦ c z_k + ...`.
    pub fn new(
        left: &Comodule,
        right: &Comodule,
        out: &Comodule,
        entries: Vec<((usize, usize), usize, BigInt)>,
    ) -> Result<Pairing> {
        for m in [right, out] {
            if m.group() != left.group() {
                return Err(AlgebraError::GroupMismatch(left.group().label(), m.group().label()));
            }
            left.ring().ensure_same(&m.ring())?;
        }
        let ring = left.ring();
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, BigInt>> = BTreeMap::new();
        for ((a, b), k, c) in entries {
            if a >= left.rank() || b >= right.rank() || k >= out.rank() {
                return Err(AlgebraError::Dimension(format!("pairing entry ({a}, {b}) -> {k}")));
            }
            *table.entry((a, b)).or_default().entry(k).or_default() += c;
        }
        let table = table
            .into_iter()
            .map(|(ab, ks)| {
                let v: Vec<(usize, BigInt)> = ks
                    .into_iter()
                    .map(|(k, c)| (k, ring.reduce(c)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                (ab, v)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Ok(Pairing {
            left: left.clone(),
            right: right.clone(),
            out: out.clone(),
            table,
        })
    }

    /// Multiplication `k ⊗ k -> k` on the trivial rank-one module.
    pub fn trivial(group: &GroupScheme, ring: Ring) -> Pairing {
        let k = Comodule::trivial(group, ring, 1);
        Pairing::new(&k, &k, &k, vec![((0, 0), 0, BigInt::one())]).unwrap()
    }

    /// Scalar action `k ⊗ M -> M`.
    pub fn scalar(m: &Comodule) -> Pairing {
        let k = Comodule::trivial(m.group(), m.ring(), 1);
        let entries = (0..m.rank()).map(|i| ((0, i), i, BigInt::one())).collect();
        Pairing::new(&k, m, m, entries).unwrap()
    }

    /// Evaluation `M ⊗ M^# -> k`.
    pub fn evaluation(m: &Comodule) -> Result<Pairing> {
        let d = dual(m)?;
        let k = Comodule::trivial(m.group(), m.ring(), 1);
        let entries = (0..m.rank()).map(|i| ((i, i), 0, BigInt::one())).collect();
        Pairing::new(m, &d, &k, entries)
    }

    /// `Γ^m V ⊗ S^m V^# -> k`, `⟨e^[λ], x^μ⟩ = δ_λμ`.
    pub fn divided_evaluation(gamma: &Comodule, sym: &Comodule) -> Result<Pairing> {
        let (v, gb, divided) = gamma
            .power_structure()
            .ok_or_else(|| AlgebraError::ComoduleMismatch(format!("{gamma} is not a power")))?;
        let (w, sb, sdiv) = sym
            .power_structure()
            .ok_or_else(|| AlgebraError::ComoduleMismatch(format!("{sym} is not a power")))?;
        if !divided || sdiv || *w != dual(v)? || gb.total() != sb.total() {
            return Err(AlgebraError::ComoduleMismatch(format!(
                "{gamma} and {sym} are not Γ^m V and S^m V^#"
            )));
        }
        let k = Comodule::trivial(gamma.group(), gamma.ring(), 1);
        let entries = (0..gb.len()).map(|i| ((i, i), 0, BigInt::one())).collect();
        Pairing::new(gamma, sym, &k, entries)
    }

    pub fn left(&self) -> &Comodule {
        &self.left
    }

    pub fn right(&self) -> &Comodule {
        &self.right
    }

    pub fn out(&self) -> &Comodule {
        &self.out
    }

    /// `φ(u_a ⊗ v_b)`.
    pub fn value(&self, a: usize, b: usize) -> &[(usize, BigInt)] {
        self.table.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `φ(u ⊗ v)` for coordinate vectors.
    pub fn apply(&self, u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.out.rank()];
        for ((a, b), ks) in &self.table {
            if u[*a].is_zero() || v[*b].is_zero() {
                continue;
            }
            let uv = &u[*a] * &v[*b];
            for (k, c) in ks {
                out[*k] += &uv * c;
            }
        }
        out.into_iter().map(|x| self.out.ring().reduce(x)).collect()
    }

    /// Equivariance `ρ_Z(φ(u_a ⊗ v_b)) = (φ ⊗ id)(ρ(u_a) ρ(v_b))` for the
    /// given basis pairs.
    pub fn verify_on(&self, pairs: &[(usize, usize)]) -> Result<()> {
        let g = self.left.group();
        let ring = self.left.ring();
        let zero = Polynomial::zero(g.coords(), ring);
        for &(a, b) in pairs {
            let mut lhs = vec![zero.clone(); self.out.rank()];
            for (k, c) in self.value(a, b) {
                for (i, r) in self.out.column(*k)?.iter() {
                    lhs[*i].add_scaled(r, c)?;
                }
            }
            let mut rhs = vec![zero.clone(); self.out.rank()];
            let rb = self.right.column(b)?;
            for (a2, ra) in self.left.column(a)?.iter() {
                for (b2, rbv) in rb.iter() {
                    let vals = self.value(*a2, *b2);
                    if vals.is_empty() {
                        continue;
                    }
                    let prod = g.normalize(&(ra * rbv));
                    for (k, c) in vals {
                        rhs[*k].add_scaled(&prod, c)?;
                    }
                }
            }
            if lhs != rhs {
                return Err(AlgebraError::AxiomViolated(format!(
                    "pairing {} ⊗ {} -> {} is not equivariant at ({a}, {b})",
                    self.left, self.right, self.out
                )));
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<()> {
        let pairs: Vec<(usize, usize)> = (0..self.left.rank())
            .flat_map(|a| (0..self.right.rank()).map(move |b| (a, b)))
            .collect();
        self.verify_on(&pairs)
    }
}

/// `(f ∪ g)(g1, ..., g_{i+j}) = φ(f(g1, ..., gi) ⊗ (g1⋯gi)·g(g_{i+1}, ..., g_{i+j}))`.
///
/// `g` takes values in `V` or in `V ⊗ W`; the result takes values in `Z`
/// or `Z ⊗ W` accordingly.
pub fn cup(f: &Cochain, g: &Cochain, pairing: &Pairing) -> Result<Cochain> {
    if f.group() != g.group() {
        return Err(AlgebraError::GroupMismatch(f.group().label(), g.group().label()));
    }
    if f.params != g.params {
        return Err(AlgebraError::InvalidParameter("cochains carry different parameters".into()));
    }
    if *f.coeffs() != pairing.left {
        return Err(AlgebraError::ComoduleMismatch(format!(
            "left factor {} vs pairing source {}",
            f.coeffs(),
            pairing.left
        )));
    }
    let (out_coeffs, w_rank) = if *g.coeffs() == pairing.right {
        (pairing.out.clone(), 1)
    } else {
        match tensor_factors(g.coeffs()) {
            Some((v, w)) if *v == pairing.right => (tensor(&pairing.out, w)?, w.rank()),
            _ => {
                return Err(AlgebraError::ComoduleMismatch(format!(
                    "right factor {} does not match pairing source {}",
                    g.coeffs(),
                    pairing.right
                )))
            }
        }
    };
    let grp = f.group().clone();
    let ring = f.ring();
    let (i, j) = (f.degree, g.degree);
    let plen = f.params.len();
    let vars = grp.copies_with(i + j, &f.params);
    let fmap = grp.copy_map(i, i + j, plen, |c| c);
    let gmap = grp.copy_map(j, i + j, plen, |c| c + i);
    let fr: Vec<Polynomial> = f
        .components
        .iter()
        .map(|p| p.rename(&vars, &fmap))
        .collect::<Result<_>>()?;
    let gr: Vec<Polynomial> = g
        .components
        .iter()
        .map(|p| p.rename(&vars, &gmap))
        .collect::<Result<_>>()?;

    // (g1⋯gi)·g
    let translated = if i == 0 {
        gr
    } else {
        let law = grp.group_law_in(i, ring);
        let lmap: Vec<usize> = (0..i * grp.num_gens()).collect();
        let law: Vec<Polynomial> = law.iter().map(|p| p.rename(&vars, &lmap)).collect::<Result<_>>()?;
        let mut out = vec![Polynomial::zero(&vars, ring); g.coeffs().rank()];
        for jj in g.support() {
            for (row, r) in g.coeffs().column(jj)?.iter() {
                let rh = r.substitute(&law)?;
                out[*row] = out[*row].try_add(&rh.try_mul(&gr[jj])?)?;
            }
        }
        out.into_iter().map(|p| grp.normalize_copies(&p, i + j)).collect()
    };

    let mut out = vec![Polynomial::zero(&vars, ring); out_coeffs.rank()];
    let fsupp = f.support();
    for (idx, gv) in translated.iter().enumerate() {
        if gv.is_zero() {
            continue;
        }
        let (b, w) = (idx / w_rank, idx % w_rank);
        for &a in &fsupp {
            let vals = pairing.value(a, b);
            if vals.is_empty() {
                continue;
            }
            let prod = fr[a].try_mul(gv)?;
            for (k, c) in vals {
                out[k * w_rank + w].add_scaled(&prod, c)?;
            }
        }
    }
    Cochain::new(&out_coeffs, i + j, &f.params, out)
}

/// Membership status of a cochain in graded `Ga` cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassStatus {
    NotCocycle,
    Coboundary,
    NonzeroClass,
}

/// The total-degree-`d` part of `C^{n-1} -> C^n -> C^{n+1}` for `Ga`
/// with trivial coefficients `F_p`.
#[derive(Clone, Debug)]
pub struct GaGradedPiece {
    pub p: u64,
    pub n: usize,
    pub d: u32,
    /// Monomial basis of `C^n_d` as exponent vectors.
    pub monomials: Vec<Vec<u32>>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Representatives of a basis of `H^n_d`.
    pub basis: Vec<Polynomial>,
    image_rows: Vec<Vec<u64>>,
    index: HashMap<Vec<u32>, usize>,
}

impl GaGradedPiece {
    pub fn dim(&self) -> usize {
        self.cocycle_dim - self.coboundary_dim
    }

    fn vector(&self, f: &Polynomial) -> Result<Vec<u64>> {
        let mut v = vec![0u64; self.monomials.len()];
        for (e, c) in f.terms() {
            let key: Vec<u32> = e.iter().map(|&x| x as u32).collect();
            let i = self.index.get(&key).ok_or_else(|| {
                AlgebraError::InvalidParameter(format!("monomial outside the degree-{} piece", self.d))
            })?;
            v[*i] = (c % BigInt::from(self.p)).try_into().unwrap();
        }
        Ok(v)
    }

    /// Whether `f` (a degree-`n` cochain value of total degree `d`) is a
    /// cocycle and, if so, whether its class vanishes.
    pub fn classify(&self, f: &Polynomial) -> Result<ClassStatus> {
        let ga = make_group(GroupName::Ga);
        let ring = Ring::modulo(self.p)?;
        let k = Comodule::trivial(&ga, ring, 1);
        let c = Cochain::new(&k, self.n, &VarSet::empty(), vec![f.to_ring(ring)?])?;
        if !c.is_cocycle()?.holds {
            return Ok(ClassStatus::NotCocycle);
        }
        let v = self.vector(c.component(0))?;
        if v.iter().all(|x| *x == 0) {
            return Ok(ClassStatus::Coboundary);
        }
        if !self.image_rows.is_empty() && modp::solve_left(&self.image_rows, &v, self.p).is_some() {
            Ok(ClassStatus::Coboundary)
        } else {
            Ok(ClassStatus::NonzeroClass)
        }
    }
}

fn ga_differential_rows(p: u64, n: usize, d: u32) -> Result<(Vec<Vec<u32>>, Vec<Vec<u64>>, Vec<Vec<u32>>)> {
    let ga = make_group(GroupName::Ga);
    let ring = Ring::modulo(p)?;
    let k = Comodule::trivial(&ga, ring, 1);
    let src = compositions(n, d);
    let dst = compositions(n + 1, d);
    let index: HashMap<&Vec<u32>, usize> = dst.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let vars = ga.copies(n);
    let empty = VarSet::empty();
    let mut rows = Vec::with_capacity(src.len());
    for e in &src {
        let exps: Vec<i32> = e.iter().map(|&x| x as i32).collect();
        let mono = Polynomial::monomial(&vars, ring, exps, BigInt::one());
        let dc = Cochain::new(&k, n, &empty, vec![mono])?.differential()?;
        let mut row = vec![0u64; dst.len()];
        for (ex, c) in dc.component(0).terms() {
            let key: Vec<u32> = ex.iter().map(|&x| x as u32).collect();
            row[index[&key]] = c.try_into().unwrap();
        }
        rows.push(row);
    }
    Ok((src, rows, dst))
}

/// Graded piece `H^n_d(Ga, F_p)` by finite linear algebra. The `Ga`
/// differential preserves total degree, so this is a direct summand.
pub fn bounded_cohomology_ga(p: u64, n: usize, d: u32) -> Result<GaGradedPiece> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    let (monomials, dn, _) = ga_differential_rows(p, n, d)?;
    let cols_next = compositions(n + 1, d).len();
    // kernel of d^n: vectors x with x · dn = 0
    let cocycles = modp::kernel(transpose(&dn, monomials.len(), cols_next), monomials.len(), p);
    let image_rows: Vec<Vec<u64>> = if n == 0 {
        Vec::new()
    } else {
        let (_, rows, dst) = ga_differential_rows(p, n - 1, d)?;
        debug_assert_eq!(dst, monomials);
        rows
    };
    let (mut reduced, _) = modp::row_reduce(image_rows.clone(), monomials.len(), p);
    let coboundary_dim = reduced.len();
    let ga = make_group(GroupName::Ga);
    let ring = Ring::modulo(p)?;
    let vars = ga.copies(n);
    let mut basis = Vec::new();
    for z in &cocycles {
        let mut trial = reduced.clone();
        trial.push(z.clone());
        let (r, _) = modp::row_reduce(trial, monomials.len(), p);
        if r.len() > reduced.len() {
            reduced = r;
            let terms = monomials
                .iter()
                .zip(z)
                .filter(|(_, c)| **c != 0)
                .map(|(e, c)| (e.iter().map(|&x| x as i32).collect(), BigInt::from(*c)));
            basis.push(Polynomial::from_terms(&vars, ring, terms)?);
        }
    }
    let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    Ok(GaGradedPiece {
        p,
        n,
        d,
        cocycle_dim: cocycles.len(),
        coboundary_dim,
        basis,
        image_rows,
        index,
        monomials,
    })
}

fn transpose(rows: &[Vec<u64>], r: usize, c: usize) -> Vec<Vec<u64>> {
    (0..c).map(|j| (0..r).map(|i| rows[i][j]).collect()).collect()
}

/// A letter of a [`TensorCochain`]: a function of `arity` consecutive
/// arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub arity: usize,
    pub poly: Polynomial,
}

impl Letter {
    fn key(&self) -> String {
        format!("{}:{}", self.arity, self.poly)
    }
}

/// A cochain of `Ga` with trivial rank-one coefficients, kept as a sum of
/// words `ℓ1 ⊗ ℓ2 ⊗ ... ⊗ ℓk` of letters on consecutive blocks of
/// arguments. Cup products of such cochains are concatenations, so cup
/// powers never need to be expanded.
///
/// Letter 0 is always the constant function `1` of one argument.
#[derive(Clone, Debug)]
pub struct TensorCochain {
    ring: Ring,
    letters: Vec<Letter>,
    words: BTreeMap<Vec<usize>, BigInt>,
}

impl TensorCochain {
    fn one_letter(ring: Ring) -> Letter {
        let ga = make_group(GroupName::Ga);
        Letter {
            name: "1".into(),
            arity: 1,
            poly: Polynomial::one(&ga.copies(1), ring),
        }
    }

    /// The single-letter cochain `f`.
    pub fn from_cochain(name: &str, f: &Cochain) -> Result<TensorCochain> {
        if f.group().name() != GroupName::Ga || !f.coeffs().is_trivial() || f.coeffs().rank() != 1 {
            return Err(AlgebraError::ComoduleMismatch(
                "tensor cochains need Ga with trivial rank-one coefficients".into(),
            ));
        }
        if !f.params().is_empty() || f.degree() == 0 {
            return Err(AlgebraError::InvalidParameter("letters need positive degree and no parameters".into()));
        }
        let ring = f.ring();
        let mut words = BTreeMap::new();
        words.insert(vec![1], BigInt::one());
        Ok(TensorCochain {
            ring,
            letters: vec![
                Self::one_letter(ring),
                Letter {
                    name: name.into(),
                    arity: f.degree(),
                    poly: f.component(0).clone(),
                },
            ],
            words,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn words(&self) -> &BTreeMap<Vec<usize>, BigInt> {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.words
            .keys()
            .next()
            .map(|w| w.iter().map(|&l| self.letters[l].arity).sum())
    }

    fn add_word(words: &mut BTreeMap<Vec<usize>, BigInt>, ring: Ring, w: Vec<usize>, c: BigInt) {
        let slot = words.entry(w.clone()).or_default();
        *slot = ring.reduce(&*slot + c);
        if slot.is_zero() {
            words.remove(&w);
        }
    }

    /// Index of `letter` in `self`, appending it if new.
    fn intern(&mut self, letter: &Letter) -> usize {
        if let Some(i) = self.letters.iter().position(|l| l.arity == letter.arity && l.poly == letter.poly) {
            return i;
        }
        self.letters.push(letter.clone());
        self.letters.len() - 1
    }

    /// `self ∪ other`: concatenation of words.
    pub fn cup(&self, other: &TensorCochain) -> Result<TensorCochain> {
        self.ring.ensure_same(&other.ring)?;
        let mut out = TensorCochain {
            ring: self.ring,
            letters: self.letters.clone(),
            words: BTreeMap::new(),
        };
        let map: Vec<usize> = other.letters.iter().map(|l| out.intern(l)).collect();
        for (a, ca) in &self.words {
            for (b, cb) in &other.words {
                let mut w = a.clone();
                w.extend(b.iter().map(|&l| map[l]));
                Self::add_word(&mut out.words, self.ring, w, ca * cb);
            }
        }
        Ok(out)
    }

    /// `self^{∪m}` for `m ≥ 1`.
    pub fn power(&self, m: u32) -> Result<TensorCochain> {
        if m == 0 {
            return Err(AlgebraError::InvalidParameter("cup power needs m ≥ 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.cup(self)?;
        }
        Ok(acc)
    }

    /// Coefficients in `Z/modulus`; letters that coincide after reduction
    /// are merged.
    pub fn reduce_mod(&self, modulus: u64) -> Result<TensorCochain> {
        let ring = Ring::modulo(modulus)?;
        let mut out = TensorCochain {
            ring,
            letters: vec![Self::one_letter(ring)],
            words: BTreeMap::new(),
        };
        let mut map = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            let poly = l.poly.to_ring(ring)?;
            if poly.is_zero() {
                map.push(None);
            } else {
                map.push(Some(out.intern(&Letter {
                    name: l.name.clone(),
                    arity: l.arity,
                    poly,
                })));
            }
        }
        for (w, c) in &self.words {
            if let Some(nw) = w.iter().map(|&l| map[l]).collect::<Option<Vec<usize>>>() {
                Self::add_word(&mut out.words, ring, nw, c.clone());
            }
        }
        Ok(out)
    }

    /// Words keyed by the rendered letters; two tensor cochains with equal
    /// canonical forms are equal.
    pub fn canonical(&self) -> BTreeMap<Vec<String>, BigInt> {
        self.words
            .iter()
            .map(|(w, c)| (w.iter().map(|&l| self.letters[l].key()).collect(), c.clone()))
            .collect()
    }

    /// Number of terms after expansion, without expanding.
    pub fn expanded_size(&self) -> BigInt {
        self.words
            .keys()
            .map(|w| {
                w.iter()
                    .map(|&l| BigInt::from(self.letters[l].poly.num_terms()))
                    .product::<BigInt>()
            })
            .sum()
    }

    fn word_poly(&self, w: &[usize], vars: &Arc<VarSet>) -> Result<Polynomial> {
        let mut acc = Polynomial::one(vars, self.ring);
        let mut offset = 0;
        for &l in w {
            let letter = &self.letters[l];
            let map: Vec<usize> = (offset..offset + letter.arity).collect();
            acc = acc.try_mul(&letter.poly.rename(vars, &map)?)?;
            offset += letter.arity;
        }
        Ok(acc)
    }

    /// The ordinary cochain, refusing if it would exceed `cap` terms.
    pub fn expand(&self, cap: usize) -> Result<Cochain> {
        let size = self.expanded_size();
        if size > BigInt::from(cap) {
            return Err(AlgebraError::CapExceeded(format!(
                "expansion would have up to {size} terms (cap {cap})"
            )));
        }
        let ga = make_group(GroupName::Ga);
        let n = self.degree().unwrap_or(0);
        let vars = ga.copies(n);
        let mut f = Polynomial::zero(&vars, self.ring);
        for (w, c) in &self.words {
            f.add_scaled(&self.word_poly(w, &vars)?, c)?;
        }
        let k = Comodule::trivial(&ga, self.ring, 1);
        Cochain::new(&k, n, &VarSet::empty(), vec![f])
    }

    /// All words of total arity `n` over the current letters.
    fn words_of_arity(&self, n: usize) -> Vec<Vec<usize>> {
        fn rec(letters: &[Letter], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for (i, l) in letters.iter().enumerate() {
                if l.arity <= left {
                    cur.push(i);
                    rec(letters, left - l.arity, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&self.letters, n, &mut Vec::new(), &mut out);
        out
    }

    /// Inner-merge part `Σ_l (-1)^l ℓ(..., y_l y_{l+1}, ...)` of `dℓ`,
    /// written as a combination of words when possible and as a new letter
    /// otherwise.
    fn merge_terms(&mut self, letter: usize) -> Result<Vec<(Vec<usize>, BigInt)>> {
        let ga = make_group(GroupName::Ga);
        let ring = self.ring;
        let a = self.letters[letter].arity;
        let vars = ga.copies(a + 1);
        let mut block = Polynomial::zero(&vars, ring);
        for l in 0..a {
            let assignment: Vec<Polynomial> = (0..a)
                .map(|c| {
                    if c < l {
                        Polynomial::var(&vars, ring, c)
                    } else if c == l {
                        &Polynomial::var(&vars, ring, c) + &Polynomial::var(&vars, ring, c + 1)
                    } else {
                        Polynomial::var(&vars, ring, c + 1)
                    }
                })
                .collect();
            let h = self.letters[letter].poly.substitute(&assignment)?;
            block.add_scaled(&h, &sign(l + 1))?;
        }
        if block.is_zero() {
            return Ok(Vec::new());
        }
        let candidates = self.words_of_arity(a + 1);
        let polys: Vec<Polynomial> = candidates
            .iter()
            .map(|w| self.word_poly(w, &vars))
            .collect::<Result<_>>()?;
        if let Some(x) = decompose(&polys, &block, ring)? {
            return Ok(candidates
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .collect());
        }
        let name = format!("m({})", self.letters[letter].name);
        let idx = self.intern(&Letter {
            name,
            arity: a + 1,
            poly: block,
        });
        Ok(vec![(vec![idx], BigInt::one())])
    }

    /// The Hochschild differential, computed word by word. A zero result
    /// certifies the cocycle property without expanding any word.
    pub fn differential(&self) -> Result<TensorCochain> {
        let mut out = TensorCochain {
            ring: self.ring,
            letters: self.letters.clone(),
            words: BTreeMap::new(),
        };
        let mut merges: HashMap<usize, Vec<(Vec<usize>, BigInt)>> = HashMap::new();
        let ring = self.ring;
        for (w, kappa) in &self.words {
            let n: usize = w.iter().map(|&l| self.letters[l].arity).sum();
            let mut first = vec![0];
            first.extend_from_slice(w);
            Self::add_word(&mut out.words, ring, first, kappa.clone());
            let mut last = w.clone();
            last.push(0);
            Self::add_word(&mut out.words, ring, last, sign(n + 1) * kappa);
            let mut offset = 0;
            for (t, &l) in w.iter().enumerate() {
                if !merges.contains_key(&l) {
                    let m = out.merge_terms(l)?;
                    merges.insert(l, m);
                }
                for (v, beta) in &merges[&l] {
                    let mut nw = w[..t].to_vec();
                    nw.extend_from_slice(v);
                    nw.extend_from_slice(&w[t + 1..]);
                    Self::add_word(&mut out.words, ring, nw, sign(offset) * kappa * beta);
                }
                offset += self.letters[l].arity;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TensorCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|(w, c)| {
                let names: Vec<&str> = w.iter().map(|&l| self.letters[l].name.as_str()).collect();
                format!("{c}*[{}]", names.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficients `x` with `Σ x_i polys_i = target`, over `Z`, `Z/p` or
/// `Z/m`.
fn decompose(polys: &[Polynomial], target: &Polynomial, ring: Ring) -> Result<Option<Vec<BigInt>>> {
    let mut monos: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
    for f in polys.iter().chain(std::iter::once(target)) {
        for (e, _) in f.terms() {
            let n = monos.len();
            monos.entry(e.clone()).or_insert(n);
        }
    }
    let cols = monos.len();
    let vec_of = |f: &Polynomial| {
        let mut v = vec![BigInt::zero(); cols];
        for (e, c) in f.terms() {
            v[monos[e]] = c.clone();
        }
        v
    };
    let b = vec_of(target);
    match ring {
        Ring::Integers => {
            let a = IntegerMatrix::from_big_rows(polys.iter().map(vec_of).collect(), cols);
            Ok(a.solve_left(&b))
        }
        Ring::Mod(p) if is_prime(p) => {
            let big = BigInt::from(p);
            let to_u64 = |v: Vec<BigInt>| -> Vec<u64> {
                v.into_iter().map(|x| (x % &big).try_into().unwrap()).collect()
            };
            let rows: Vec<Vec<u64>> = polys.iter().map(|f| to_u64(vec_of(f))).collect();
            Ok(modp::solve_left(&rows, &to_u64(b), p).map(|x| x.into_iter().map(BigInt::from).collect()))
        }
        Ring::Mod(m) => {
            let mut rows: Vec<Vec<BigInt>> = polys.iter().map(vec_of).collect();
            for c in 0..cols {
                let mut r = vec![BigInt::zero(); cols];
                r[c] = BigInt::from(m);
                rows.push(r);
            }
            let a = IntegerMatrix::from_big_rows(rows, cols);
            Ok(a.solve_left(&b).map(|x| x[..polys.len()].iter().map(|c| ring.reduce_ref(c)).collect()))
        }
    }
}
