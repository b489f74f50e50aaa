//! Hopf-algebra presentations of `Ga`, the diagonal torus `T`, the lower
//! triangular Borel `B` and `SL2`, with group laws and homomorphisms.
//!
//! A polynomial on `G^n` lives in `n` disjoint copies of the generators,
//! named `gen1, gen2, ...`, optionally followed by extra parameter
//! variables that ride along untouched. Coordinate functions on `G` itself
//! use the bare generator names.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{AlgebraError, Result};
use crate::exactalg::{Polynomial, Ring, Var, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupName {
    Ga,
    T,
    B,
    SL2,
}

impl GroupName {
    pub fn parse(s: &str) -> Option<GroupName> {
        match s {
            "Ga" | "ga" => Some(GroupName::Ga),
            "T" | "t" => Some(GroupName::T),
            "B" | "b" => Some(GroupName::B),
            "SL2" | "sl2" => Some(GroupName::SL2),
            _ => None,
        }
    }
}

/// Coordinate system. Only `B` has two: `(a, c)` with `d = a^-1`, and the
/// root-torus chart `(x, u)` with `b = x_α(x) · diag(u, u^-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    Standard,
    RootTorus,
}

struct GroupData {
    name: GroupName,
    chart: Chart,
    gens: Vec<Var>,
    coords: Arc<VarSet>,
    copies: Mutex<HashMap<usize, Arc<VarSet>>>,
    /// Δ(gen) in two copies.
    comul: Vec<Polynomial>,
    counit: Vec<BigInt>,
    /// S(gen) in coordinates.
    antipode: Vec<Polynomial>,
    /// `gens[i] * gens[j] -> rhs` (rhs in coordinates), applied per copy.
    relation: Option<(usize, usize, Polynomial)>,
}

#[derive(Clone)]
pub struct GroupScheme(Arc<GroupData>);

impl PartialEq for GroupScheme {
    fn eq(&self, other: &Self) -> bool {
        self.0.name == other.0.name && self.0.chart == other.0.chart
    }
}

impl Eq for GroupScheme {}

impl fmt::Debug for GroupScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupScheme({})", self.label())
    }
}

impl fmt::Display for GroupScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

const Z: Ring = Ring::Integers;

fn copy_names(gens: &[Var], n: usize) -> Vec<Var> {
    (1..=n)
        .flat_map(|k| {
            gens.iter().map(move |g| Var {
                name: format!("{}{}", g.name, k),
                laurent: g.laurent,
            })
        })
        .collect()
}

/// Structure maps are given as closures over the generator polynomials
/// (two copies for Δ, one for S and the relation).
fn build(
    name: GroupName,
    chart: Chart,
    gens: Vec<Var>,
    comul: impl Fn(&[Polynomial], &[Polynomial]) -> Vec<Polynomial>,
    counit: Vec<i64>,
    antipode: impl Fn(&[Polynomial]) -> Vec<Polynomial>,
    relation: Option<(usize, usize, Box<dyn Fn(&[Polynomial]) -> Polynomial>)>,
) -> GroupScheme {
    let coords = VarSet::new(gens.clone());
    let two = VarSet::new(copy_names(&gens, 2));
    let g = gens.len();
    let left: Vec<Polynomial> = (0..g).map(|i| Polynomial::var(&two, Z, i)).collect();
    let right: Vec<Polynomial> = (0..g).map(|i| Polynomial::var(&two, Z, g + i)).collect();
    let plain: Vec<Polynomial> = (0..g).map(|i| Polynomial::var(&coords, Z, i)).collect();
    let mut cache = HashMap::new();
    cache.insert(2, two.clone());
    let relation = relation.map(|(i, j, rhs)| (i, j, rhs(&plain)));
    let data = GroupData {
        name,
        chart,
        gens,
        coords,
        copies: Mutex::new(cache),
        comul: comul(&left, &right),
        counit: counit.into_iter().map(BigInt::from).collect(),
        antipode: antipode(&plain),
        relation,
    };
    GroupScheme(Arc::new(data))
}

fn laurent_power(p: &Polynomial, k: i32) -> Polynomial {
    if k >= 0 {
        p.pow(k as u32)
    } else {
        p.inverse_monomial().expect("Laurent generator").pow((-k) as u32)
    }
}

/// Constructs one of the four group schemes; the Hopf axioms are verified
/// symbolically before returning.
pub fn make_group(name: GroupName) -> GroupScheme {
    let g = match name {
        GroupName::Ga => build(
            name,
            Chart::Standard,
            vec![Var::poly("X")],
            |l, r| vec![&l[0] + &r[0]],
            vec![0],
            |x| vec![-&x[0]],
            None,
        ),
        GroupName::T => build(
            name,
            Chart::Standard,
            vec![Var::laurent("u")],
            |l, r| vec![&l[0] * &r[0]],
            vec![1],
            |x| vec![laurent_power(&x[0], -1)],
            None,
        ),
        GroupName::B => build(
            name,
            Chart::Standard,
            vec![Var::laurent("a"), Var::poly("c")],
            // [[a1,0],[c1,a1^-1]] [[a2,0],[c2,a2^-1]]
            |l, r| {
                vec![
                    &l[0] * &r[0],
                    &(&l[1] * &r[0]) + &(&laurent_power(&l[0], -1) * &r[1]),
                ]
            },
            vec![1, 0],
            |x| vec![laurent_power(&x[0], -1), -&x[1]],
            None,
        ),
        GroupName::SL2 => build(
            name,
            Chart::Standard,
            vec![Var::poly("a"), Var::poly("b"), Var::poly("c"), Var::poly("d")],
            |l, r| {
                let (a1, b1, c1, d1) = (&l[0], &l[1], &l[2], &l[3]);
                let (a2, b2, c2, d2) = (&r[0], &r[1], &r[2], &r[3]);
                vec![
                    &(a1 * a2) + &(b1 * c2),
                    &(a1 * b2) + &(b1 * d2),
                    &(c1 * a2) + &(d1 * c2),
                    &(c1 * b2) + &(d1 * d2),
                ]
            },
            vec![1, 0, 0, 1],
            |x| vec![x[3].clone(), -&x[1], -&x[2], x[0].clone()],
            Some((
                0,
                3,
                Box::new(|x: &[Polynomial]| &Polynomial::one(x[0].vars(), Z) + &(&x[1] * &x[2])),
            )),
        ),
    };
    g.verify_hopf_axioms().expect("Hopf axioms");
    g
}

/// `B` in the root-torus chart `b = x_α(x) · diag(u, u^-1)`; the group law
/// is `(x1, u1)(x2, u2) = (x1 + u1^-2 x2, u1 u2)`.
pub fn borel_coordinates() -> GroupScheme {
    let g = build(
        GroupName::B,
        Chart::RootTorus,
        vec![Var::poly("x"), Var::laurent("u")],
        |l, r| {
            vec![
                &l[0] + &(&laurent_power(&l[1], -2) * &r[0]),
                &l[1] * &r[1],
            ]
        },
        vec![0, 1],
        |v| vec![-&(&v[0] * &v[1].pow(2)), laurent_power(&v[1], -1)],
        None,
    );
    g.verify_hopf_axioms().expect("Hopf axioms");
    g
}

impl GroupScheme {
    pub fn name(&self) -> GroupName {
        self.0.name
    }

    pub fn chart(&self) -> Chart {
        self.0.chart
    }

    pub fn label(&self) -> String {
        match (self.0.name, self.0.chart) {
            (GroupName::Ga, _) => "Ga".into(),
            (GroupName::T, _) => "T".into(),
            (GroupName::B, Chart::Standard) => "B".into(),
            (GroupName::B, Chart::RootTorus) => "B(x,u)".into(),
            (GroupName::SL2, _) => "SL2".into(),
        }
    }

    pub fn num_gens(&self) -> usize {
        self.0.gens.len()
    }

    pub fn gens(&self) -> &[Var] {
        &self.0.gens
    }

    /// Variables of `k[G]`.
    pub fn coords(&self) -> &Arc<VarSet> {
        &self.0.coords
    }

    /// Variables of `k[G^n]`.
    pub fn copies(&self, n: usize) -> Arc<VarSet> {
        let mut cache = self.0.copies.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| VarSet::new(copy_names(&self.0.gens, n)))
            .clone()
    }

    /// Variables of `k[G^n] ⊗ k[params]`.
    pub fn copies_with(&self, n: usize, params: &VarSet) -> Arc<VarSet> {
        if params.is_empty() {
            self.copies(n)
        } else {
            self.copies(n).concat(params)
        }
    }

    pub fn comultiplication(&self) -> &[Polynomial] {
        &self.0.comul
    }

    pub fn counit(&self) -> &[BigInt] {
        &self.0.counit
    }

    pub fn antipode(&self) -> &[Polynomial] {
        &self.0.antipode
    }

    pub fn has_relation(&self) -> bool {
        self.0.relation.is_some()
    }

    /// Normal form on `k[G^copies] ⊗ k[params]`: the defining relation is
    /// rewritten in each copy.
    pub fn normalize_copies(&self, f: &Polynomial, copies: usize) -> Polynomial {
        let Some((i, j, rhs)) = &self.0.relation else {
            return f.clone();
        };
        let g = self.num_gens();
        let mut out = f.clone();
        for k in 0..copies {
            let (ik, jk) = (k * g + i, k * g + j);
            if !out.terms().any(|(e, _)| e[ik] > 0 && e[jk] > 0) {
                continue;
            }
            let map: Vec<usize> = (0..g).map(|t| k * g + t).collect();
            let rhs_k = rhs
                .to_ring(f.ring())
                .expect("relation over Z")
                .rename(f.vars(), &map)
                .expect("relation embedding");
            out = out.rewrite_product(ik, jk, &rhs_k);
        }
        out
    }

    pub fn normalize(&self, f: &Polynomial) -> Polynomial {
        self.normalize_copies(f, 1)
    }

    /// Index map sending copy `c` of a `src`-copy variable set to copy
    /// `target(c)` of a `dst`-copy set; parameters go to parameters.
    pub(crate) fn copy_map(
        &self,
        src: usize,
        dst: usize,
        params: usize,
        target: impl Fn(usize) -> usize,
    ) -> Vec<usize> {
        let g = self.num_gens();
        let mut map = Vec::with_capacity(src * g + params);
        for c in 0..src {
            let t = target(c);
            debug_assert!(t < dst);
            for i in 0..g {
                map.push(t * g + i);
            }
        }
        for q in 0..params {
            map.push(dst * g + q);
        }
        map
    }

    /// Generators of copy `k` (0-based) inside `vars`.
    pub(crate) fn copy_gens(&self, vars: &Arc<VarSet>, ring: Ring, k: usize) -> Vec<Polynomial> {
        let g = self.num_gens();
        (0..g).map(|i| Polynomial::var(vars, ring, k * g + i)).collect()
    }

    /// `Δ(gen)` evaluated on copies `k`, `k+1` (0-based) of `vars`.
    pub(crate) fn comul_on(&self, vars: &Arc<VarSet>, ring: Ring, k: usize) -> Vec<Polynomial> {
        let g = self.num_gens();
        let map: Vec<usize> = (0..2 * g).map(|t| k * g + t).collect();
        self.0
            .comul
            .iter()
            .map(|p| {
                let q = p.to_ring(ring).expect("structure maps over Z");
                Polynomial::rename(&q, vars, &map).expect("comultiplication embedding")
            })
            .collect()
    }

    /// Coordinates of `g1 ⋯ gn` in `k[G^n]`, in normal form.
    pub fn group_law(&self, n: usize) -> Vec<Polynomial> {
        self.group_law_in(n, Z)
    }

    pub fn group_law_in(&self, n: usize, ring: Ring) -> Vec<Polynomial> {
        let vars = self.copies(n.max(1));
        let g = self.num_gens();
        if n == 0 {
            return self
                .0
                .counit
                .iter()
                .map(|c| Polynomial::constant(&VarSet::empty(), ring, c.clone()))
                .collect();
        }
        let mut acc = self.copy_gens(&vars, ring, 0);
        for k in 1..n {
            // product of (g1⋯gk) with g_{k+1}
            let mut assignment = acc.clone();
            assignment.extend(self.copy_gens(&vars, ring, k));
            acc = (0..g)
                .map(|i| {
                    let d = self.0.comul[i].to_ring(ring).unwrap();
                    self.normalize_copies(&d.substitute(&assignment).unwrap(), n)
                })
                .collect();
        }
        acc
    }

    /// `f ∘ Δ` for `f ∈ k[G]`, in two copies.
    pub fn apply_comul(&self, f: &Polynomial) -> Result<Polynomial> {
        let ring = f.ring();
        let assignment: Vec<Polynomial> = self
            .0
            .comul
            .iter()
            .map(|p| p.to_ring(ring))
            .collect::<Result<_>>()?;
        Ok(self.normalize_copies(&f.substitute(&assignment)?, 2))
    }

    /// `ε(f)`.
    pub fn apply_counit(&self, f: &Polynomial) -> Result<BigInt> {
        f.evaluate(&self.0.counit)
    }

    /// `S(f)`.
    pub fn apply_antipode(&self, f: &Polynomial) -> Result<Polynomial> {
        let assignment: Vec<Polynomial> = self
            .0
            .antipode
            .iter()
            .map(|p| p.to_ring(f.ring()))
            .collect::<Result<_>>()?;
        Ok(self.normalize(&f.substitute(&assignment)?))
    }

    /// Coassociativity, counit and antipode identities on the generators.
    pub fn verify_hopf_axioms(&self) -> Result<()> {
        let g = self.num_gens();
        let one = self.coords().clone();
        let three = self.copies(3);
        let gens1: Vec<Polynomial> = self.copy_gens(&one, Z, 0);
        for i in 0..g {
            let delta = &self.0.comul[i];
            // (Δ⊗id)Δ
            let mut left = self.comul_on(&three, Z, 0);
            left.extend(self.copy_gens(&three, Z, 2));
            let lhs = self.normalize_copies(&delta.substitute(&left)?, 3);
            // (id⊗Δ)Δ
            let mut right = self.copy_gens(&three, Z, 0);
            right.extend(self.comul_on(&three, Z, 1));
            let rhs = self.normalize_copies(&delta.substitute(&right)?, 3);
            if lhs != rhs {
                return Err(AlgebraError::AxiomViolated(format!(
                    "{}: coassociativity fails on {}",
                    self.label(),
                    self.0.gens[i].name
                )));
            }
            // counit on either side
            let eps: Vec<Polynomial> = self
                .0
                .counit
                .iter()
                .map(|c| Polynomial::constant(&one, Z, c.clone()))
                .collect();
            let mut a = eps.clone();
            a.extend(gens1.iter().cloned());
            let mut b = gens1.clone();
            b.extend(eps.iter().cloned());
            for assignment in [a, b] {
                if self.normalize(&delta.substitute(&assignment)?) != gens1[i] {
                    return Err(AlgebraError::AxiomViolated(format!(
                        "{}: counit fails on {}",
                        self.label(),
                        self.0.gens[i].name
                    )));
                }
            }
            // antipode on either side
            let unit = Polynomial::constant(&one, Z, self.0.counit[i].clone());
            let mut a = self.0.antipode.clone();
            a.extend(gens1.iter().cloned());
            let mut b = gens1.clone();
            b.extend(self.0.antipode.iter().cloned());
            for assignment in [a, b] {
                if self.normalize(&delta.substitute(&assignment)?) != unit {
                    return Err(AlgebraError::AxiomViolated(format!(
                        "{}: antipode fails on {}",
                        self.label(),
                        self.0.gens[i].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Symbolic 2×2 matrix of a generic point, for the groups that sit in
    /// `SL2` (entries in `k[G]`).
    pub fn generic_matrix(&self) -> Mat2 {
        let c = self.coords();
        let v = |i| Polynomial::var(c, Z, i);
        let zero = Polynomial::zero(c, Z);
        let one = Polynomial::one(c, Z);
        match (self.0.name, self.0.chart) {
            (GroupName::Ga, _) => Mat2([[one.clone(), zero], [v(0), one]]),
            (GroupName::T, _) => Mat2([[v(0), zero.clone()], [zero, laurent_power(&v(0), -1)]]),
            (GroupName::B, Chart::Standard) => {
                Mat2([[v(0), zero], [v(1), laurent_power(&v(0), -1)]])
            }
            (GroupName::B, Chart::RootTorus) => Mat2([
                [v(1), zero],
                [&v(0) * &v(1), laurent_power(&v(1), -1)],
            ]),
            (GroupName::SL2, _) => Mat2([[v(0), v(1)], [v(2), v(3)]]),
        }
    }
}

/// Symbolic 2×2 matrix over a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Polynomial; 2]; 2]);

impl Mat2 {
    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &other.0[0][j]) + &(&self.0[i][1] * &other.0[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Mat2 {
        Mat2([
            [f(&self.0[0][0]), f(&self.0[0][1])],
            [f(&self.0[1][0]), f(&self.0[1][1])],
        ])
    }

    /// Inverse of a determinant-one matrix: `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.0;
        Mat2([[d.clone(), -b], [-c, a.clone()]])
    }

    /// Matrix unit `E_ij` over the given variables.
    pub fn unit(vars: &Arc<VarSet>, ring: Ring, i: usize, j: usize) -> Mat2 {
        let z = Polynomial::zero(vars, ring);
        let mut m = [[z.clone(), z.clone()], [z.clone(), z]];
        m[i][j] = Polynomial::one(vars, ring);
        Mat2(m)
    }
}

/// A homomorphism `G -> H`, stored as the algebra map `k[H] -> k[G]`.
#[derive(Clone, Debug)]
pub struct GroupHom {
    name: String,
    source: GroupScheme,
    target: GroupScheme,
    pullback: Vec<Polynomial>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.pullback == other.pullback
    }
}

impl GroupHom {
    /// Checks compatibility with comultiplication and counit before
    /// returning.
    pub fn new(
        name: impl Into<String>,
        source: GroupScheme,
        target: GroupScheme,
        pullback: Vec<Polynomial>,
    ) -> Result<GroupHom> {
        if pullback.len() != target.num_gens() {
            return Err(AlgebraError::Dimension("pullback length".into()));
        }
        let pullback = pullback.iter().map(|p| source.normalize(p)).collect();
        let hom = GroupHom {
            name: name.into(),
            source,
            target,
            pullback,
        };
        hom.verify()?;
        Ok(hom)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &GroupScheme {
        &self.source
    }

    pub fn target(&self) -> &GroupScheme {
        &self.target
    }

    pub fn pullback(&self) -> &[Polynomial] {
        &self.pullback
    }

    /// Pulls back `f ∈ k[H]` to `k[G]`.
    pub fn pull(&self, f: &Polynomial) -> Result<Polynomial> {
        let assignment: Vec<Polynomial> = self
            .pullback
            .iter()
            .map(|p| p.to_ring(f.ring()))
            .collect::<Result<_>>()?;
        Ok(self.source.normalize(&f.substitute(&assignment)?))
    }

    /// Pulls back a function on `H^n × params` to `G^n × params`.
    pub fn pull_copies(&self, f: &Polynomial, n: usize, params: &VarSet) -> Result<Polynomial> {
        let dst = self.source.copies_with(n, params);
        let gs = self.source.num_gens();
        let mut assignment = Vec::with_capacity(f.vars().len());
        for k in 0..n {
            let map: Vec<usize> = self.source.copy_map(1, n, 0, |_| k);
            for p in &self.pullback {
                let q = p.to_ring(f.ring())?;
                assignment.push(q.rename(&dst, &map)?);
            }
        }
        for q in 0..params.len() {
            assignment.push(Polynomial::var(&dst, f.ring(), n * gs + q));
        }
        Ok(self.source.normalize_copies(&f.substitute(&assignment)?, n))
    }

    /// `self` followed by `next`: `G -> H -> K`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(AlgebraError::GroupMismatch(
                self.target.label(),
                next.source.label(),
            ));
        }
        let pullback = next
            .pullback
            .iter()
            .map(|p| self.pull(p))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(
            format!("{}∘{}", next.name, self.name),
            self.source.clone(),
            next.target.clone(),
            pullback,
        )
    }

    /// `Δ_G ∘ φ* = (φ*⊗φ*) ∘ Δ_H` and `ε_G ∘ φ* = ε_H` on generators.
    pub fn verify(&self) -> Result<()> {
        for (h, delta_h) in self.target.comultiplication().iter().enumerate() {
            let lhs = self.source.apply_comul(&self.pullback[h])?;
            let rhs = self.pull_copies(delta_h, 2, &VarSet::default())?;
            if lhs != rhs {
                return Err(AlgebraError::AxiomViolated(format!(
                    "{}: comultiplication incompatible on {}",
                    self.name,
                    self.target.gens()[h].name
                )));
            }
            let eps = self.source.apply_counit(&self.pullback[h])?;
            if eps != self.target.counit()[h] {
                return Err(AlgebraError::AxiomViolated(format!(
                    "{}: counit incompatible on {}",
                    self.name,
                    self.target.gens()[h].name
                )));
            }
        }
        Ok(())
    }
}

fn hom(name: &str, source: GroupScheme, target: GroupScheme, f: impl Fn(&[Polynomial]) -> Vec<Polynomial>) -> GroupHom {
    let c = source.coords().clone();
    let gens: Vec<Polynomial> = (0..source.num_gens()).map(|i| Polynomial::var(&c, Z, i)).collect();
    let pullback = f(&gens);
    GroupHom::new(name, source, target, pullback).expect("structural homomorphism")
}

fn consts(src: &GroupScheme, vals: &[i64]) -> Vec<Polynomial> {
    vals.iter()
        .map(|&v| Polynomial::constant(src.coords(), Z, v))
        .collect()
}

/// The root homomorphism `x_α : Ga -> SL2`, `X ↦ [[1,0],[X,1]]` (α is the
/// negative root, so `U_α` is lower unipotent).
pub fn root_hom() -> GroupHom {
    let ga = make_group(GroupName::Ga);
    hom("x_alpha", ga.clone(), make_group(GroupName::SL2), |g| {
        let k = consts(&ga, &[1, 0, 1]);
        vec![k[0].clone(), k[1].clone(), g[0].clone(), k[2].clone()]
    })
}

/// `x_{-α} : Ga -> SL2`, `X ↦ [[1,X],[0,1]]`.
pub fn neg_root_hom() -> GroupHom {
    let ga = make_group(GroupName::Ga);
    hom("x_minus_alpha", ga.clone(), make_group(GroupName::SL2), |g| {
        let k = consts(&ga, &[1, 0, 1]);
        vec![k[0].clone(), g[0].clone(), k[1].clone(), k[2].clone()]
    })
}

/// `T -> SL2`, `u ↦ diag(u, u^-1)`.
pub fn torus_hom() -> GroupHom {
    let t = make_group(GroupName::T);
    hom("torus", t.clone(), make_group(GroupName::SL2), |g| {
        let z = Polynomial::zero(t.coords(), Z);
        vec![g[0].clone(), z.clone(), z, laurent_power(&g[0], -1)]
    })
}

/// `B -> SL2` in the `(a, c)` chart.
pub fn borel_hom() -> GroupHom {
    let b = make_group(GroupName::B);
    hom("borel", b.clone(), make_group(GroupName::SL2), |g| {
        let z = Polynomial::zero(b.coords(), Z);
        vec![g[0].clone(), z, g[1].clone(), laurent_power(&g[0], -1)]
    })
}

/// `B(x,u) -> SL2`, `(x, u) ↦ [[u, 0], [x u, u^-1]]`.
pub fn borel_xu_hom() -> GroupHom {
    let b = borel_coordinates();
    hom("borel_xu", b.clone(), make_group(GroupName::SL2), |g| {
        let z = Polynomial::zero(b.coords(), Z);
        vec![g[1].clone(), z, &g[0] * &g[1], laurent_power(&g[1], -1)]
    })
}

/// Chart change `B(x,u) -> B(a,c)`: `a = u`, `c = x u`.
pub fn borel_xu_to_ac() -> GroupHom {
    hom("chart_xu_to_ac", borel_coordinates(), make_group(GroupName::B), |g| {
        vec![g[1].clone(), &g[0] * &g[1]]
    })
}

/// Chart change `B(a,c) -> B(x,u)`: `x = c a^-1`, `u = a`.
pub fn borel_ac_to_xu() -> GroupHom {
    hom("chart_ac_to_xu", make_group(GroupName::B), borel_coordinates(), |g| {
        vec![&g[1] * &laurent_power(&g[0], -1), g[0].clone()]
    })
}

/// `Ga -> B(x,u)`, the root subgroup: `x ↦ X`, `u ↦ 1`.
pub fn root_into_borel() -> GroupHom {
    let ga = make_group(GroupName::Ga);
    hom("root_into_borel", ga.clone(), borel_coordinates(), |g| {
        vec![g[0].clone(), Polynomial::one(ga.coords(), Z)]
    })
}

/// `T -> B(x,u)`: `x ↦ 0`, `u ↦ u`.
pub fn torus_into_borel() -> GroupHom {
    let t = make_group(GroupName::T);
    hom("torus_into_borel", t.clone(), borel_coordinates(), |g| {
        vec![Polynomial::zero(t.coords(), Z), g[0].clone()]
    })
}

/// Character of `T` by which `diag(u, u^-1)` scales `e_α = [[0,0],[1,0]]`
/// under conjugation, as a power of `u`.
pub fn torus_weight_of_root() -> i32 {
    -2
}

/// Conjugates a matrix unit by `diag(u, u^-1)` and reads off the power of
/// `u` it is scaled by, or `None` if the result is not a multiple.
pub fn conjugation_weight(i: usize, j: usize) -> Option<i32> {
    let t = make_group(GroupName::T);
    let tm = t.generic_matrix();
    let e = Mat2::unit(t.coords(), Z, i, j);
    let conj = tm.mul(&e).mul(&tm.adjugate());
    let entry = &conj.0[i][j];
    for (a, row) in conj.0.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if (a, b) != (i, j) && !x.is_zero() {
                return None;
            }
        }
    }
    if entry.num_terms() != 1 {
        return None;
    }
    let (exps, c) = entry.terms().next().unwrap();
    if !c.is_one() {
        return None;
    }
    Some(exps[0])
}

impl GroupScheme {
    /// `Ga`, `T`, `B`, `SL2` in their standard charts plus `B(x,u)`.
    pub fn all() -> Vec<GroupScheme> {
        vec![
            make_group(GroupName::Ga),
            make_group(GroupName::T),
            make_group(GroupName::B),
            borel_coordinates(),
            make_group(GroupName::SL2),
        ]
    }

    /// Unit polynomial on `G^n × params`.
    pub fn unit_on(&self, n: usize, params: &VarSet, ring: Ring) -> Polynomial {
        Polynomial::one(&self.copies_with(n, params), ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_and_multiplicative_laws() {
        let ga = make_group(GroupName::Ga);
        assert_eq!(ga.comultiplication()[0].to_string(), "X1 + X2");
        let t = make_group(GroupName::T);
        assert_eq!(t.comultiplication()[0].to_string(), "u1*u2");
    }

    #[test]
    fn sl2_antipode_of_a() {
        let sl2 = make_group(GroupName::SL2);
        let names: Vec<String> = sl2.antipode().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["d", "-b", "-c", "a"]);
        // m(S⊗id)Δ(a) = S(a) a + S(b) c = da - bc ≡ 1
        let c = sl2.coords();
        let v = |i| Polynomial::var(c, Z, i);
        let raw = &(&v(3) * &v(0)) - &(&v(1) * &v(2));
        assert_eq!(sl2.normalize(&raw), Polynomial::one(c, Z));
    }

    #[test]
    fn sl2_normal_form() {
        let sl2 = make_group(GroupName::SL2);
        let c = sl2.coords();
        let v = |i| Polynomial::var(c, Z, i);
        let ad = &v(0) * &v(3);
        assert_eq!(sl2.normalize(&ad).to_string(), "b*c + 1");
        for k in 1..5 {
            let nf = sl2.normalize(&ad.pow(k));
            assert!(nf.terms().all(|(e, _)| e[0] == 0 || e[3] == 0));
            assert_eq!(sl2.normalize(&nf), nf);
        }
    }

    #[test]
    fn group_laws() {
        let ga = make_group(GroupName::Ga);
        assert_eq!(ga.group_law(2)[0].to_string(), "X1 + X2");
        let sl2 = make_group(GroupName::SL2);
        assert_eq!(sl2.group_law(2)[0].to_string(), "a1*a2 + b1*c2");
        let b = borel_coordinates();
        let law = b.group_law(2);
        assert_eq!(law[0].to_string(), "x1 + u1^-2*x2");
        assert_eq!(law[1].to_string(), "u1*u2");
    }

    #[test]
    fn borel_law_matches_matrix_product() {
        // compose x_α and the torus section inside SL2 and read off (x, u)
        let b = borel_coordinates();
        let two = b.copies(2);
        let m1 = b.generic_matrix().map(|p| p.rename(&two, &[0, 1]).unwrap());
        let m2 = b.generic_matrix().map(|p| p.rename(&two, &[2, 3]).unwrap());
        let prod = m1.mul(&m2);
        let law = b.group_law(2);
        let u = &law[1];
        assert_eq!(prod.0[0][0], *u);
        assert_eq!(prod.0[1][0], &law[0] * u);
    }

    #[test]
    fn root_hom_pullback() {
        let x = root_hom();
        assert_eq!(x.pullback()[2].to_string(), "X");
        assert!(x.pullback()[1].is_zero());
    }

    #[test]
    fn torus_conjugates_root_vector() {
        // diag(u,u^-1) x_α(s) diag(u^-1,u) = x_α(u^-2 s)
        let vars = VarSet::new(vec![Var::poly("s"), Var::laurent("u")]);
        let s = Polynomial::var(&vars, Z, 0);
        let u = Polynomial::var(&vars, Z, 1);
        let one = Polynomial::one(&vars, Z);
        let zero = Polynomial::zero(&vars, Z);
        let uinv = u.inverse_monomial().unwrap();
        let t = Mat2([[u.clone(), zero.clone()], [zero.clone(), uinv.clone()]]);
        let x = Mat2([[one.clone(), zero.clone()], [s.clone(), one.clone()]]);
        let conj = t.mul(&x).mul(&t.adjugate());
        assert_eq!(conj.0[1][0], &uinv.pow(2) * &s);
        assert_eq!(conj.0[0][0], one);
    }

    #[test]
    fn root_weights() {
        assert_eq!(conjugation_weight(1, 0), Some(torus_weight_of_root()));
        assert_eq!(conjugation_weight(0, 1), Some(2));
        assert_eq!(conjugation_weight(0, 0), Some(0));
    }
}
