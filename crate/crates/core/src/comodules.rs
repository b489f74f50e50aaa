//! Finite free comodules over `k[G]`, stored by their coaction matrices in
//! the column convention `ρ(e_j) = Σ_i e_i ⊗ R_ij`, together with the
//! functors Γ^m, S^m, dual, restriction, reduction and Frobenius twist.
//!
//! Columns are computed on demand and cached, so a large module such as
//! `Γ^3 Γ^3(gl2)` costs nothing until one of its columns is needed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::exactalg::{binomial, is_prime, IntegerLattice, IntegerMatrix, Polynomial, Ring, VarSet};
use crate::groupschemes::{make_group, GroupHom, GroupName, GroupScheme, Mat2};

/// Sparse column of a coaction matrix: `(row, entry)` pairs, entries in
/// the coordinates of the group.
pub type Column = Vec<(usize, Polynomial)>;

/// Exponent vectors of length `n` with entries summing to `m`, listed in
/// descending lexicographic order (so `(m, 0, ..., 0)` comes first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multisets {
    n: usize,
    m: u32,
    elems: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Multisets {
    pub fn new(n: usize, m: u32) -> Multisets {
        let elems = compositions(n, m);
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Multisets { n, m, elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn parts(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u32 {
        self.m
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.elems[i]
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Index of `m · e_i`.
    pub fn pure(&self, i: usize) -> usize {
        let mut e = vec![0; self.n];
        e[i] = self.m;
        self.index[&e]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.elems.iter()
    }
}

pub(crate) fn compositions(n: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, m, &mut vec![0; n], &mut out);
    out
}

pub(crate) fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &k in parts {
        total += k as u64;
        acc *= binomial(total, k as u64);
    }
    acc
}

#[derive(Clone)]
enum Kind {
    Explicit(Vec<Column>),
    Power {
        base: Comodule,
        basis: Arc<Multisets>,
        divided: bool,
    },
    Restrict {
        base: Comodule,
        hom: GroupHom,
    },
    Twist {
        base: Comodule,
        q: u64,
    },
    Tensor {
        left: Comodule,
        right: Comodule,
    },
    Sum {
        left: Comodule,
        right: Comodule,
    },
}

struct Inner {
    group: GroupScheme,
    ring: Ring,
    key: String,
    labels: Vec<String>,
    trivial: bool,
    kind: Kind,
    cache: Mutex<HashMap<usize, Arc<Column>>>,
}

/// A finite free comodule. Two comodules are equal when they were built by
/// the same construction over the same group and ring.
#[derive(Clone)]
pub struct Comodule(Arc<Inner>);

impl PartialEq for Comodule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.group == other.0.group
                && self.0.ring == other.0.ring
                && self.0.key == other.0.key)
    }
}

impl Eq for Comodule {}

impl fmt::Debug for Comodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Comodule({} over {} / {}, rank {})", self.0.key, self.0.group, self.0.ring, self.rank())
    }
}

impl fmt::Display for Comodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.key)
    }
}

fn wrap(key: &str) -> String {
    if key.contains(' ') || key.contains('*') || key.contains('⊗') {
        format!("({key})")
    } else {
        key.to_string()
    }
}

fn power_labels(base: &[String], basis: &Multisets, divided: bool) -> Vec<String> {
    basis
        .iter()
        .map(|e| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let l = wrap(&base[i]);
                    match (k, divided) {
                        (1, _) => l,
                        (k, true) => format!("{l}^[{k}]"),
                        (k, false) => format!("{l}^{k}"),
                    }
                })
                .collect();
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join("*")
            }
        })
        .collect()
}

impl Comodule {
    fn make(group: GroupScheme, ring: Ring, key: String, labels: Vec<String>, kind: Kind) -> Comodule {
        Comodule(Arc::new(Inner {
            group,
            ring,
            key,
            labels,
            trivial: false,
            kind,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// Explicit coaction matrix given by rows (`matrix[i][j] = R_ij`);
    /// coassociativity and counit are verified.
    pub fn from_matrix(
        group: &GroupScheme,
        ring: Ring,
        key: impl Into<String>,
        labels: Vec<String>,
        matrix: Vec<Vec<Polynomial>>,
    ) -> Result<Comodule> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::Dimension(format!("coaction matrix must be {n}×{n}")));
        }
        let mut columns = vec![Vec::new(); n];
        for (i, row) in matrix.into_iter().enumerate() {
            for (j, entry) in row.into_iter().enumerate() {
                let entry = group.normalize(&entry.to_ring(ring)?);
                if **entry.vars() != **group.coords() {
                    return Err(AlgebraError::VariableMismatch(
                        entry.vars().names(),
                        group.coords().names(),
                    ));
                }
                if !entry.is_zero() {
                    columns[j].push((i, entry));
                }
            }
        }
        let m = Comodule::make(group.clone(), ring, key.into(), labels, Kind::Explicit(columns));
        m.verify()?;
        Ok(m)
    }

    fn from_columns(group: &GroupScheme, ring: Ring, key: String, labels: Vec<String>, columns: Vec<Column>) -> Comodule {
        Comodule::make(group.clone(), ring, key, labels, Kind::Explicit(columns))
    }

    /// `k^rank` with trivial coaction.
    pub fn trivial(group: &GroupScheme, ring: Ring, rank: usize) -> Comodule {
        let one = Polynomial::one(group.coords(), ring);
        let columns = (0..rank).map(|j| vec![(j, one.clone())]).collect();
        let labels = (1..=rank).map(|i| format!("t{i}")).collect();
        Comodule(Arc::new(Inner {
            group: group.clone(),
            ring,
            key: format!("triv{rank}"),
            labels,
            trivial: true,
            kind: Kind::Explicit(columns),
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn group(&self) -> &GroupScheme {
        &self.0.group
    }

    pub fn ring(&self) -> Ring {
        self.0.ring
    }

    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn rank(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.0.trivial
    }

    /// For `Γ^m V` and `S^m V`: the underlying module, the multiset basis,
    /// and whether the powers are divided.
    pub fn power_structure(&self) -> Option<(&Comodule, &Multisets, bool)> {
        match &self.0.kind {
            Kind::Power { base, basis, divided } => Some((base, basis, *divided)),
            _ => None,
        }
    }

    /// For a restriction `φ^* M`: the module `M` and the homomorphism `φ`.
    pub fn restriction(&self) -> Option<(&Comodule, &GroupHom)> {
        match &self.0.kind {
            Kind::Restrict { base, hom } => Some((base, hom)),
            _ => None,
        }
    }

    /// Column `j` of the coaction matrix.
    pub fn column(&self, j: usize) -> Result<Arc<Column>> {
        if j >= self.rank() {
            return Err(AlgebraError::Dimension(format!("column {j} of a rank-{} comodule", self.rank())));
        }
        if let Kind::Explicit(cols) = &self.0.kind {
            return Ok(Arc::new(cols[j].clone()));
        }
        if let Some(c) = self.0.cache.lock().unwrap().get(&j) {
            return Ok(c.clone());
        }
        let col = Arc::new(self.compute_column(j)?);
        self.0.cache.lock().unwrap().insert(j, col.clone());
        Ok(col)
    }

    fn compute_column(&self, j: usize) -> Result<Column> {
        let ring = self.0.ring;
        match &self.0.kind {
            Kind::Explicit(cols) => Ok(cols[j].clone()),
            Kind::Power { base, basis, divided } => {
                power_column(base, basis, basis.get(j), *divided, ring)
            }
            Kind::Restrict { base, hom } => {
                let mut out = Vec::new();
                for (i, f) in base.column(j)?.iter() {
                    let g = hom.pull(f)?;
                    if !g.is_zero() {
                        out.push((*i, g));
                    }
                }
                Ok(out)
            }
            Kind::Twist { base, q } => Ok(base
                .column(j)?
                .iter()
                .map(|(i, f)| (*i, f.scale_exponents(*q as i32)))
                .collect()),
            Kind::Tensor { left, right } => {
                let n = right.rank();
                let (a, b) = (j / n, j % n);
                let (lc, rc) = (left.column(a)?, right.column(b)?);
                let mut out = Vec::new();
                for (i, f) in lc.iter() {
                    for (k, g) in rc.iter() {
                        let h = self.0.group.normalize(&(f * g));
                        if !h.is_zero() {
                            out.push((i * n + k, h));
                        }
                    }
                }
                out.sort_by_key(|(i, _)| *i);
                Ok(out)
            }
            Kind::Sum { left, right } => {
                let n = left.rank();
                if j < n {
                    Ok(left.column(j)?.to_vec())
                } else {
                    Ok(right.column(j - n)?.iter().map(|(i, f)| (i + n, f.clone())).collect())
                }
            }
        }
    }

    /// `R_ij`.
    pub fn entry(&self, i: usize, j: usize) -> Result<Polynomial> {
        let col = self.column(j)?;
        Ok(col
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, f)| f.clone())
            .unwrap_or_else(|| Polynomial::zero(self.0.group.coords(), self.0.ring)))
    }

    /// The full coaction matrix, by rows.
    pub fn coaction_matrix(&self) -> Result<Vec<Vec<Polynomial>>> {
        let n = self.rank();
        let zero = Polynomial::zero(self.0.group.coords(), self.0.ring);
        let mut rows = vec![vec![zero; n]; n];
        for j in 0..n {
            for (i, f) in self.column(j)?.iter() {
                rows[*i][j] = f.clone();
            }
        }
        Ok(rows)
    }

    /// `ρ(v)` as the vector of its components in `k[G]`.
    pub fn coact(&self, v: &[BigInt]) -> Result<Vec<Polynomial>> {
        if v.len() != self.rank() {
            return Err(AlgebraError::Dimension("vector length".into()));
        }
        let mut out = vec![Polynomial::zero(self.0.group.coords(), self.0.ring); self.rank()];
        for (j, c) in v.iter().enumerate() {
            if self.0.ring.is_zero(c) {
                continue;
            }
            for (i, f) in self.column(j)?.iter() {
                out[*i].add_scaled(f, c)?;
            }
        }
        Ok(out)
    }

    /// Counit axiom `ε(R_ij) = δ_ij` on the given columns.
    pub fn verify_counit_on(&self, cols: &[usize]) -> Result<()> {
        for &j in cols {
            let col = self.column(j)?;
            let mut seen_diag = false;
            for (i, f) in col.iter() {
                let e = self.0.ring.reduce(self.0.group.apply_counit(f)?);
                let expect = if *i == j { BigInt::one() } else { BigInt::zero() };
                if *i == j {
                    seen_diag = true;
                }
                if self.0.ring.reduce(expect) != e {
                    return Err(AlgebraError::AxiomViolated(format!(
                        "{}: counit fails at ({i}, {j})",
                        self.0.key
                    )));
                }
            }
            if !seen_diag && !self.0.ring.is_zero(&BigInt::one()) {
                return Err(AlgebraError::AxiomViolated(format!(
                    "{}: counit fails at ({j}, {j})",
                    self.0.key
                )));
            }
        }
        Ok(())
    }

    /// Coassociativity `Δ(R_ij) = Σ_k R_ik ⊗ R_kj` on the given columns.
    pub fn verify_coassociativity_on(&self, cols: &[usize]) -> Result<()> {
        let g = &self.0.group;
        let two = g.copies(2);
        let first = g.copy_map(1, 2, 0, |_| 0);
        let second = g.copy_map(1, 2, 0, |_| 1);
        for &j in cols {
            let col = self.column(j)?;
            let mut rhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (k, rkj) in col.iter() {
                let right = rkj.rename(&two, &second)?;
                for (i, rik) in self.column(*k)?.iter() {
                    let term = &rik.rename(&two, &first)? * &right;
                    let slot = rhs
                        .entry(*i)
                        .or_insert_with(|| Polynomial::zero(&two, self.0.ring));
                    *slot = &*slot + &term;
                }
            }
            let mut lhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (i, f) in col.iter() {
                lhs.insert(*i, g.apply_comul(f)?);
            }
            for (i, r) in rhs.iter_mut() {
                *r = g.normalize_copies(r, 2);
                let l = lhs.remove(i).unwrap_or_else(|| Polynomial::zero(&two, self.0.ring));
                if l != *r {
                    return Err(AlgebraError::AxiomViolated(format!(
                        "{}: coassociativity fails at ({i}, {j})",
                        self.0.key
                    )));
                }
            }
            if let Some((i, _)) = lhs.iter().find(|(_, l)| !l.is_zero()) {
                return Err(AlgebraError::AxiomViolated(format!(
                    "{}: coassociativity fails at ({i}, {j})",
                    self.0.key
                )));
            }
        }
        Ok(())
    }

    /// Both comodule axioms on every column.
    pub fn verify(&self) -> Result<()> {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.verify_counit_on(&all)?;
        self.verify_coassociativity_on(&all)
    }
}

/// Coaction column of `e^[μ]` (divided) or `e^μ` (symmetric) in a power
/// of `base`: the product over `j` of `ρ(e_j)^[μ_j]` (resp. `ρ(e_j)^μ_j`).
fn power_column(base: &Comodule, basis: &Multisets, mu: &[u32], divided: bool, ring: Ring) -> Result<Column> {
    let g = base.group();
    let coords = g.coords();
    let n = basis.parts();
    let mut acc: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
    acc.insert(vec![0; n], Polynomial::one(coords, ring));
    for (j, &k) in mu.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let col = base.column(j)?;
        let rows: Vec<usize> = col.iter().map(|(i, _)| *i).collect();
        let powers: Vec<Vec<Polynomial>> = col
            .iter()
            .map(|(_, f)| {
                let mut v = vec![Polynomial::one(coords, ring)];
                for t in 1..=k as usize {
                    let next = g.normalize(&(&v[t - 1] * f));
                    v.push(next);
                }
                v
            })
            .collect();
        let mut factor: Vec<(Vec<u32>, Polynomial)> = Vec::new();
        for lam in compositions(rows.len(), k) {
            let mut poly = Polynomial::one(coords, ring);
            let mut e = vec![0u32; n];
            for (t, &l) in lam.iter().enumerate() {
                if l > 0 {
                    poly = &poly * &powers[t][l as usize];
                    e[rows[t]] = l;
                }
            }
            if !divided {
                poly = poly.scale(&multinomial(&lam));
            }
            let poly = g.normalize(&poly);
            if !poly.is_zero() {
                factor.push((e, poly));
            }
        }
        let mut next: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
        for (a, pa) in &acc {
            for (b, pb) in &factor {
                let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let mut prod = pa * pb;
                if divided {
                    let coeff: BigInt = a
                        .iter()
                        .zip(b)
                        .filter(|(x, y)| **x > 0 && **y > 0)
                        .map(|(x, y)| binomial((x + y) as u64, *x as u64))
                        .product();
                    if !coeff.is_one() {
                        prod = prod.scale(&coeff);
                    }
                }
                match next.get_mut(&c) {
                    Some(slot) => *slot = &*slot + &prod,
                    None => {
                        next.insert(c, prod);
                    }
                }
            }
        }
        acc = next;
    }
    let mut out: Vec<(usize, Polynomial)> = acc
        .into_iter()
        .filter_map(|(e, f)| {
            let f = g.normalize(&f);
            (!f.is_zero()).then(|| (basis.index_of(&e).expect("multiset in basis"), f))
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    Ok(out)
}

/// `gl2` with `g · M = g M g^-1` over `SL2`, basis `e11, e_alpha, e_-alpha,
/// e22` where `e_alpha = [[0,0],[1,0]]`.
pub fn gl2_conjugation() -> Comodule {
    let sl2 = make_group(GroupName::SL2);
    let z = Ring::Integers;
    let g = sl2.generic_matrix();
    let ginv = g.adjugate();
    let positions = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let labels = ["e11", "e_alpha", "e_-alpha", "e22"].map(String::from).to_vec();
    let mut matrix = vec![vec![Polynomial::zero(sl2.coords(), z); 4]; 4];
    for (j, &(a, b)) in positions.iter().enumerate() {
        let conj: Mat2 = g.mul(&Mat2::unit(sl2.coords(), z, a, b)).mul(&ginv);
        for (i, &(c, d)) in positions.iter().enumerate() {
            matrix[i][j] = sl2.normalize(&conj.0[c][d]);
        }
    }
    Comodule::from_matrix(&sl2, z, "gl2", labels, matrix).expect("gl2 is a comodule")
}

/// Index of `e_alpha` in the basis of [`gl2_conjugation`].
pub const E_ALPHA: usize = 1;

/// `Γ^m M`, basis `e^[λ]` with `|λ| = m`.
pub fn div_power(m_mod: &Comodule, m: u32) -> Comodule {
    power(m_mod, m, true)
}

/// `S^m M`, basis `x^λ` with `|λ| = m`.
pub fn sym_power(m_mod: &Comodule, m: u32) -> Comodule {
    power(m_mod, m, false)
}

fn power(base: &Comodule, m: u32, divided: bool) -> Comodule {
    let basis = Arc::new(Multisets::new(base.rank(), m));
    let labels = power_labels(base.labels(), &basis, divided);
    let key = format!("{}^{m}({})", if divided { "Gamma" } else { "S" }, base.key());
    Comodule::make(
        base.group().clone(),
        base.ring(),
        key,
        labels,
        Kind::Power {
            base: base.clone(),
            basis,
            divided,
        },
    )
}

/// `M^#`: coaction `S(R^T)`, dual basis.
pub fn dual(m: &Comodule) -> Result<Comodule> {
    let g = m.group();
    let n = m.rank();
    let mut columns: Vec<Column> = vec![Vec::new(); n];
    for j in 0..n {
        for (i, f) in m.column(j)?.iter() {
            // R#_{ji} = S(R_ij)
            let s = g.apply_antipode(f)?;
            if !s.is_zero() {
                columns[*i].push((j, s));
            }
        }
    }
    for c in columns.iter_mut() {
        c.sort_by_key(|(i, _)| *i);
    }
    let labels = m.labels().iter().map(|l| format!("{l}#")).collect();
    let key = match m.0.key.strip_prefix("dual(").and_then(|k| k.strip_suffix(")#")) {
        Some(k) => k.to_string(),
        None => format!("dual({})#", m.0.key),
    };
    Ok(Comodule::from_columns(g, m.ring(), key, labels, columns))
}

/// `φ^* M` for `φ : H -> G` where `M` is a `G`-comodule.
pub fn restrict(m: &Comodule, hom: &GroupHom) -> Result<Comodule> {
    if hom.target() != m.group() {
        return Err(AlgebraError::GroupMismatch(hom.target().label(), m.group().label()));
    }
    if m.is_trivial() {
        return Ok(Comodule::trivial(hom.source(), m.ring(), m.rank()));
    }
    Ok(Comodule::make(
        hom.source().clone(),
        m.ring(),
        format!("res[{}]({})", hom.name(), m.key()),
        m.labels().to_vec(),
        Kind::Restrict {
            base: m.clone(),
            hom: hom.clone(),
        },
    ))
}

/// Base change to `Z/modulus`, pushed down to the explicit leaves so that
/// reduction commutes with the other constructions on the nose.
pub fn reduce_mod(m: &Comodule, modulus: u64) -> Result<Comodule> {
    let target = Ring::modulo(modulus)?;
    match m.ring() {
        r if r == target => return Ok(m.clone()),
        Ring::Integers => {}
        Ring::Mod(a) if a % modulus == 0 => {}
        r => return Err(AlgebraError::RingMismatch(r, target)),
    }
    if m.is_trivial() {
        return Ok(Comodule::trivial(m.group(), target, m.rank()));
    }
    Ok(match &m.0.kind {
        Kind::Explicit(cols) => {
            let columns = cols
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(i, f)| Ok((*i, f.to_ring(target)?)))
                        .filter(|x: &Result<(usize, Polynomial)>| x.as_ref().map_or(true, |(_, f)| !f.is_zero()))
                        .collect::<Result<Column>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let key = format!("{} mod {modulus}", m.key());
            Comodule::from_columns(m.group(), target, key, m.labels().to_vec(), columns)
        }
        Kind::Power { base, basis, divided } => power(&reduce_mod(base, modulus)?, basis.total(), *divided),
        Kind::Restrict { base, hom } => restrict(&reduce_mod(base, modulus)?, hom)?,
        Kind::Twist { base, q } => {
            let p = m.ring().modulus().unwrap();
            let s = (*q as f64).log(p as f64).round() as u32;
            frobenius_twist(&reduce_mod(base, modulus)?, s)?
        }
        Kind::Tensor { left, right } => tensor(&reduce_mod(left, modulus)?, &reduce_mod(right, modulus)?)?,
        Kind::Sum { left, right } => direct_sum(&reduce_mod(left, modulus)?, &reduce_mod(right, modulus)?)?,
    })
}

/// `M^(s)` over `Z/p`: every entry `f` of the coaction matrix becomes
/// `f` with all exponents multiplied by `p^s`.
pub fn frobenius_twist(m: &Comodule, s: u32) -> Result<Comodule> {
    let p = match m.ring() {
        Ring::Mod(p) if is_prime(p) => p,
        r => return Err(AlgebraError::WrongBaseRing(format!("Frobenius twist needs Z/p, got {r}"))),
    };
    if s == 0 || m.is_trivial() {
        return Ok(m.clone());
    }
    let q = p.checked_pow(s).filter(|&q| q <= i32::MAX as u64).ok_or_else(|| {
        AlgebraError::CapExceeded(format!("twist exponent {p}^{s}"))
    })?;
    Ok(Comodule::make(
        m.group().clone(),
        m.ring(),
        format!("{}^({s})", wrap(m.key())),
        m.labels().to_vec(),
        Kind::Twist { base: m.clone(), q },
    ))
}

/// `M ⊗ N`, basis `e_a ⊗ f_b` at index `a · rank(N) + b`.
pub fn tensor(m: &Comodule, n: &Comodule) -> Result<Comodule> {
    check_compatible(m, n)?;
    let labels = m
        .labels()
        .iter()
        .flat_map(|a| n.labels().iter().map(move |b| format!("{a}⊗{b}")))
        .collect();
    Ok(Comodule::make(
        m.group().clone(),
        m.ring(),
        format!("{}⊗{}", wrap(m.key()), wrap(n.key())),
        labels,
        Kind::Tensor {
            left: m.clone(),
            right: n.clone(),
        },
    ))
}

/// For `M ⊗ N` built by [`tensor`], the two factors.
pub fn tensor_factors(m: &Comodule) -> Option<(&Comodule, &Comodule)> {
    match &m.0.kind {
        Kind::Tensor { left, right } => Some((left, right)),
        _ => None,
    }
}

/// `M ⊕ N`.
pub fn direct_sum(m: &Comodule, n: &Comodule) -> Result<Comodule> {
    check_compatible(m, n)?;
    let mut labels = m.labels().to_vec();
    labels.extend(n.labels().iter().map(|l| format!("{l}'")));
    Ok(Comodule::make(
        m.group().clone(),
        m.ring(),
        format!("{}⊕{}", wrap(m.key()), wrap(n.key())),
        labels,
        Kind::Sum {
            left: m.clone(),
            right: n.clone(),
        },
    ))
}

fn check_compatible(m: &Comodule, n: &Comodule) -> Result<()> {
    if m.group() != n.group() {
        return Err(AlgebraError::GroupMismatch(m.group().label(), n.group().label()));
    }
    m.ring().ensure_same(&n.ring())
}

/// An equivariant linear map, stored by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleMap {
    source: Comodule,
    target: Comodule,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl ComoduleMap {
    /// `columns[j]` is the image of the `j`-th source basis vector. Entries
    /// are reduced into the common ring; equivariance is not checked here
    /// (see [`ComoduleMap::verify_equivariance`]).
    pub fn new(source: &Comodule, target: &Comodule, columns: Vec<Vec<(usize, BigInt)>>) -> Result<ComoduleMap> {
        check_compatible(source, target)?;
        if columns.len() != source.rank() {
            return Err(AlgebraError::Dimension(format!(
                "{} columns for a rank-{} source",
                columns.len(),
                source.rank()
            )));
        }
        let ring = source.ring();
        let mut clean = Vec::with_capacity(columns.len());
        for col in columns {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (i, c) in col {
                if i >= target.rank() {
                    return Err(AlgebraError::Dimension(format!("row {i} outside the target")));
                }
                *acc.entry(i).or_default() += c;
            }
            clean.push(
                acc.into_iter()
                    .map(|(i, c)| (i, ring.reduce(c)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            );
        }
        Ok(ComoduleMap {
            source: source.clone(),
            target: target.clone(),
            columns: clean,
        })
    }

    /// From a `rank(target) × rank(source)` matrix.
    pub fn from_matrix(source: &Comodule, target: &Comodule, a: &IntegerMatrix) -> Result<ComoduleMap> {
        if a.rows() != target.rank() || a.cols() != source.rank() {
            return Err(AlgebraError::Dimension("map matrix shape".into()));
        }
        let columns = (0..a.cols())
            .map(|j| (0..a.rows()).map(|i| (i, a.get(i, j).clone())).collect())
            .collect();
        ComoduleMap::new(source, target, columns)
    }

    pub fn identity(m: &Comodule) -> ComoduleMap {
        let columns = (0..m.rank()).map(|j| vec![(j, BigInt::one())]).collect();
        ComoduleMap::new(m, m, columns).unwrap()
    }

    pub fn zero(source: &Comodule, target: &Comodule) -> Result<ComoduleMap> {
        ComoduleMap::new(source, target, vec![Vec::new(); source.rank()])
    }

    pub fn source(&self) -> &Comodule {
        &self.source
    }

    pub fn target(&self) -> &Comodule {
        &self.target
    }

    /// Image of the `j`-th source basis vector.
    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    /// The `rank(target) × rank(source)` matrix.
    pub fn matrix(&self) -> IntegerMatrix {
        let mut a = IntegerMatrix::zeros(self.target.rank(), self.source.rank());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                a.set(*i, j, c.clone());
            }
        }
        a
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let ring = self.source.ring();
        let mut out = vec![BigInt::zero(); self.target.rank()];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, c) in &self.columns[j] {
                out[*i] += c * x;
            }
        }
        out.into_iter().map(|x| ring.reduce(x)).collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ComoduleMap) -> Result<ComoduleMap> {
        if self.target != next.source {
            return Err(AlgebraError::ComoduleMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, next.source, next.target
            )));
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (k, c) in col {
                    for (i, d) in &next.columns[*k] {
                        *acc.entry(*i).or_default() += c * d;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        ComoduleMap::new(&self.source, &next.target, columns)
    }

    /// The same matrix between the restricted comodules.
    pub fn restrict(&self, hom: &GroupHom) -> Result<ComoduleMap> {
        ComoduleMap::new(&restrict(&self.source, hom)?, &restrict(&self.target, hom)?, self.columns.clone())
    }

    pub fn reduce_mod(&self, modulus: u64) -> Result<ComoduleMap> {
        ComoduleMap::new(
            &reduce_mod(&self.source, modulus)?,
            &reduce_mod(&self.target, modulus)?,
            self.columns.clone(),
        )
    }

    /// `Γ^m` of this map: `e^[μ] ↦ Π_j φ(e_j)^[μ_j]`.
    pub fn divided_power(&self, m: u32) -> Result<ComoduleMap> {
        let source = div_power(&self.source, m);
        let target = div_power(&self.target, m);
        let (_, sbasis, _) = source.power_structure().unwrap();
        let (_, tbasis, _) = target.power_structure().unwrap();
        let ring = self.source.ring();
        let columns = sbasis
            .iter()
            .map(|mu| {
                let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
                acc.insert(vec![0; tbasis.parts()], BigInt::one());
                for (j, &k) in mu.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let col = &self.columns[j];
                    let mut factor: Vec<(Vec<u32>, BigInt)> = Vec::new();
                    for lam in compositions(col.len(), k) {
                        let mut e = vec![0u32; tbasis.parts()];
                        let mut c = BigInt::one();
                        for (t, &l) in lam.iter().enumerate() {
                            if l > 0 {
                                e[col[t].0] = l;
                                c *= num_traits::pow(col[t].1.clone(), l as usize);
                            }
                        }
                        factor.push((e, c));
                    }
                    let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
                    for (a, ca) in &acc {
                        for (b, cb) in &factor {
                            let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                            let coeff: BigInt = a
                                .iter()
                                .zip(b)
                                .filter(|(x, y)| **x > 0 && **y > 0)
                                .map(|(x, y)| binomial((x + y) as u64, *x as u64))
                                .product();
                            *next.entry(e).or_default() += ring.reduce(ca * cb * coeff);
                        }
                    }
                    acc = next;
                }
                acc.into_iter()
                    .map(|(e, c)| (tbasis.index_of(&e).unwrap(), c))
                    .collect()
            })
            .collect();
        ComoduleMap::new(&source, &target, columns)
    }

    /// `ρ_target ∘ φ = (φ ⊗ id) ∘ ρ_source` on the given source columns.
    pub fn verify_equivariance_on(&self, cols: &[usize]) -> Result<()> {
        let g = self.source.group();
        let ring = self.source.ring();
        for &j in cols {
            let mut lhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (k, c) in &self.columns[j] {
                for (i, t) in self.target.column(*k)?.iter() {
                    let slot = lhs.entry(*i).or_insert_with(|| Polynomial::zero(g.coords(), ring));
                    slot.add_scaled(t, c)?;
                }
            }
            let mut rhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (l, s) in self.source.column(j)?.iter() {
                for (i, c) in &self.columns[*l] {
                    let slot = rhs.entry(*i).or_insert_with(|| Polynomial::zero(g.coords(), ring));
                    slot.add_scaled(s, c)?;
                }
            }
            lhs.retain(|_, f| !f.is_zero());
            rhs.retain(|_, f| !f.is_zero());
            if lhs != rhs {
                let i = lhs
                    .keys()
                    .chain(rhs.keys())
                    .find(|i| lhs.get(i) != rhs.get(i))
                    .copied()
                    .unwrap();
                return Err(AlgebraError::AxiomViolated(format!(
                    "map {} -> {} is not equivariant at source {j}, target component {i}",
                    self.source, self.target
                )));
            }
        }
        Ok(())
    }

    pub fn verify_equivariance(&self) -> Result<()> {
        let all: Vec<usize> = (0..self.source.rank()).collect();
        self.verify_equivariance_on(&all)
    }
}

/// `Γ^{mN} V -> Γ^m(Γ^N V)`, dual to multiplication
/// `S^m(S^N V^#) -> S^{mN} V^#`: `e^[λ]` goes to the sum of all
/// `Π_b (e^[ν_b])^[k_b]` with `Σ k_b ν_b = λ`.
pub fn gamma_composition_map(v: &Comodule, m: u32, n: u32) -> Result<ComoduleMap> {
    if m == 0 || n == 0 {
        return Err(AlgebraError::InvalidParameter("m and N must be positive".into()));
    }
    let source = div_power(v, m * n);
    let inner = div_power(v, n);
    let target = div_power(&inner, m);
    let (_, sbasis, _) = source.power_structure().unwrap();
    let (_, ibasis, _) = inner.power_structure().unwrap();
    let (_, tbasis, _) = target.power_structure().unwrap();
    let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); sbasis.len()];
    for (t, nu) in tbasis.iter().enumerate() {
        let mut lambda = vec![0u32; v.rank()];
        for (b, &k) in nu.iter().enumerate() {
            if k > 0 {
                for (x, y) in lambda.iter_mut().zip(ibasis.get(b)) {
                    *x += k * y;
                }
            }
        }
        let s = sbasis.index_of(&lambda).expect("total degree mN");
        columns[s].push((t, BigInt::one()));
    }
    ComoduleMap::new(&source, &target, columns)
}

/// `Γ^{p^s}(V̄) -> V̄^(s)` over `Z/p`: `e_i^[p^s] ↦ e_i`, mixed divided
/// monomials to zero. Dual to `v ↦ v^{p^s}` on `V̄^#`.
pub fn twist_projection(v: &Comodule, s: u32) -> Result<ComoduleMap> {
    let p = match v.ring() {
        Ring::Mod(p) if is_prime(p) => p,
        r => return Err(AlgebraError::WrongBaseRing(format!("twist projection needs Z/p, got {r}"))),
    };
    let q = p
        .checked_pow(s)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or_else(|| AlgebraError::CapExceeded(format!("{p}^{s}")))? as u32;
    let source = div_power(v, q);
    let target = frobenius_twist(v, s)?;
    let (_, basis, _) = source.power_structure().unwrap();
    let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); basis.len()];
    for i in 0..v.rank() {
        columns[basis.pure(i)].push((i, BigInt::one()));
    }
    ComoduleMap::new(&source, &target, columns)
}

/// A saturated subcomodule: the lattice in the ambient coordinates and
/// the induced comodule in its Hermite basis.
#[derive(Clone, Debug)]
pub struct Subcomodule {
    pub lattice: IntegerLattice,
    pub comodule: Comodule,
    /// Inclusion into the ambient comodule.
    pub inclusion: ComoduleMap,
}

/// Comodule structure on a sublattice `L ⊆ M`, in the Hermite basis of
/// `L`; fails with `NotStable` unless `ρ(L) ⊆ L ⊗ k[G]`.
pub fn sublattice_comodule(m: &Comodule, lattice: &IntegerLattice) -> Result<Comodule> {
    if m.ring() != Ring::Integers {
        return Err(AlgebraError::RequiresIntegers(m.ring()));
    }
    if lattice.ambient_dim() != m.rank() {
        return Err(AlgebraError::Dimension("lattice and comodule ranks differ".into()));
    }
    let g = m.group();
    let basis = lattice.basis();
    let k = lattice.rank();
    let mut columns: Vec<Column> = Vec::with_capacity(k);
    for w in 0..k {
        let image = m.coact(basis.row(w))?;
        // ρ(w) = Σ_mono (vector) ⊗ mono
        let mut by_mono: BTreeMap<Vec<i32>, Vec<BigInt>> = BTreeMap::new();
        for (i, f) in image.iter().enumerate() {
            for (e, c) in f.terms() {
                by_mono
                    .entry(e.clone())
                    .or_insert_with(|| vec![BigInt::zero(); m.rank()])[i] = c.clone();
            }
        }
        let mut col: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (e, vec) in by_mono {
            let coords = lattice.coordinates(&vec).ok_or_else(|| {
                AlgebraError::NotStable(format!(
                    "coaction of basis vector {w} leaves the lattice at monomial {}",
                    crate::exactalg::render_monomial(g.coords(), &e)
                ))
            })?;
            for (l, c) in coords.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mono = Polynomial::monomial(g.coords(), Ring::Integers, e.clone(), c);
                let slot = col
                    .entry(l)
                    .or_insert_with(|| Polynomial::zero(g.coords(), Ring::Integers));
                *slot = &*slot + &mono;
            }
        }
        columns.push(col.into_iter().filter(|(_, f)| !f.is_zero()).collect());
    }
    let rows: Vec<String> = (0..k)
        .map(|w| {
            basis
                .row(w)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let key = format!("{}[{}]", m.key(), rows.join("; "));
    let labels = (1..=k).map(|i| format!("w{i}")).collect();
    let sub = Comodule::from_columns(g, Ring::Integers, key, labels, columns);
    sub.verify()?;
    Ok(sub)
}

/// Smallest saturated subcomodule containing `v`: the saturated span of
/// the vectors `m_i` in `ρ(v) = Σ m_i ⊗ f_i`, the `f_i` being distinct
/// normal-form monomials.
pub fn generated_subcomodule(m: &Comodule, v: &[BigInt]) -> Result<Subcomodule> {
    if m.ring() != Ring::Integers {
        return Err(AlgebraError::RequiresIntegers(m.ring()));
    }
    let image = m.coact(v)?;
    let mut by_mono: BTreeMap<Vec<i32>, Vec<BigInt>> = BTreeMap::new();
    for (i, f) in image.iter().enumerate() {
        for (e, c) in f.terms() {
            by_mono
                .entry(e.clone())
                .or_insert_with(|| vec![BigInt::zero(); m.rank()])[i] = c.clone();
        }
    }
    let gens: Vec<Vec<BigInt>> = by_mono.into_values().collect();
    let lattice = if gens.is_empty() {
        IntegerLattice::from_generators(&IntegerMatrix::zeros(0, m.rank()))
    } else {
        IntegerLattice::from_generators(&IntegerMatrix::from_big_rows(gens, m.rank())).saturation()
    };
    debug_assert!(lattice.contains(v) || v.iter().all(|x| x.is_zero()));
    let comodule = sublattice_comodule(m, &lattice)?;
    let basis = lattice.basis();
    let columns = (0..lattice.rank())
        .map(|w| {
            basis
                .row(w)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect()
        })
        .collect();
    let inclusion = ComoduleMap::new(&comodule, m, columns)?;
    Ok(Subcomodule {
        lattice,
        comodule,
        inclusion,
    })
}

/// Coordinates `e_j`, used for picking basis vectors.
pub fn basis_vector(m: &Comodule, j: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); m.rank()];
    v[j] = BigInt::one();
    v
}

/// Variables `x1, ..., xn` for working in `S(M^#)` or similar.
pub(crate) fn dual_coordinates(n: usize) -> Arc<VarSet> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    VarSet::polynomial(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupschemes::{root_hom, torus_hom};

    const Z: Ring = Ring::Integers;

    #[test]
    fn multisets_are_ordered() {
        let b = Multisets::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.get(0), &[2, 0, 0]);
        assert_eq!(b.get(5), &[0, 0, 2]);
        assert_eq!(b.pure(1), b.index_of(&[0, 2, 0]).unwrap());
        assert_eq!(Multisets::new(0, 0).len(), 1);
        assert_eq!(Multisets::new(0, 1).len(), 0);
    }

    #[test]
    fn gl2_conjugation_of_e_alpha() {
        let gl2 = gl2_conjugation();
        let col = gl2.column(E_ALPHA).unwrap();
        let shown: Vec<String> = col.iter().map(|(i, f)| format!("{i}:{f}")).collect();
        // g e_alpha g^-1 = [[b d, -b^2], [d^2, -b d]]
        assert_eq!(shown, vec!["0:b*d", "1:d^2", "2:-b^2", "3:-b*d"]);
    }

    #[test]
    fn identity_matrix_is_invariant() {
        let gl2 = gl2_conjugation();
        let id = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        let image = gl2.coact(&id).unwrap();
        assert_eq!(image[0].to_string(), "1");
        assert!(image[1].is_zero() && image[2].is_zero());
        assert_eq!(image[3].to_string(), "1");
    }

    #[test]
    fn divided_square_of_gl2() {
        let g2 = div_power(&gl2_conjugation(), 2);
        assert_eq!(g2.rank(), 10);
        g2.verify().unwrap();
        let s2 = sym_power(&gl2_conjugation(), 2);
        s2.verify().unwrap();
    }

    #[test]
    fn rank_one_powers() {
        let t = make_group(GroupName::T);
        let u = Polynomial::var(t.coords(), Z, 0);
        let m = Comodule::from_matrix(&t, Z, "chi", vec!["v".into()], vec![vec![u.clone()]]).unwrap();
        let g3 = div_power(&m, 3);
        assert_eq!(g3.entry(0, 0).unwrap(), u.pow(3));
    }

    #[test]
    fn dual_is_an_involution() {
        let gl2 = gl2_conjugation();
        let d = dual(&gl2).unwrap();
        d.verify().unwrap();
        let dd = dual(&d).unwrap();
        assert_eq!(dd.coaction_matrix().unwrap(), gl2.coaction_matrix().unwrap());
        assert_eq!(dd.key(), gl2.key());
    }

    #[test]
    fn restrictions_of_gl2() {
        let gl2 = gl2_conjugation();
        let ga = restrict(&gl2, &root_hom()).unwrap();
        ga.verify().unwrap();
        let col = ga.column(E_ALPHA).unwrap();
        assert_eq!(col.len(), 1);
        assert_eq!(col[0].0, E_ALPHA);
        assert_eq!(col[0].1.to_string(), "1");
        let t = restrict(&gl2, &torus_hom()).unwrap();
        let diag: Vec<String> = (0..4).map(|i| t.entry(i, i).unwrap().to_string()).collect();
        assert_eq!(diag, vec!["1", "u^-2", "u^2", "1"]);
    }

    #[test]
    fn twist_of_torus_weights() {
        let gl2 = reduce_mod(&gl2_conjugation(), 2).unwrap();
        let tw = frobenius_twist(&gl2, 1).unwrap();
        tw.verify().unwrap();
        let t = restrict(&tw, &torus_hom()).unwrap();
        assert_eq!(t.entry(1, 1).unwrap().to_string(), "u^-4");
        assert_eq!(t.entry(2, 2).unwrap().to_string(), "u^4");
    }

    #[test]
    fn twist_needs_a_prime_field() {
        assert!(matches!(
            frobenius_twist(&gl2_conjugation(), 1),
            Err(AlgebraError::WrongBaseRing(_))
        ));
    }

    #[test]
    fn composition_on_pure_powers() {
        let gl2 = gl2_conjugation();
        let f = gamma_composition_map(&gl2, 2, 2).unwrap();
        let (_, sb, _) = f.source().power_structure().unwrap();
        let (inner, tb, _) = f.target().power_structure().unwrap();
        let (_, ib, _) = inner.power_structure().unwrap();
        let col = f.column(sb.pure(E_ALPHA));
        assert_eq!(col, &[(tb.pure(ib.pure(E_ALPHA)), BigInt::one())]);
        f.verify_equivariance().unwrap();
    }

    #[test]
    fn projection_to_the_twist() {
        let gl2 = reduce_mod(&gl2_conjugation(), 2).unwrap();
        let pi = twist_projection(&gl2, 1).unwrap();
        assert_eq!(pi.matrix().rank(), 4);
        pi.verify_equivariance().unwrap();
        let id = twist_projection(&gl2, 0).unwrap();
        assert_eq!(id.matrix(), IntegerMatrix::identity(4));
    }

    #[test]
    fn generated_by_e_alpha() {
        let gl2 = gl2_conjugation();
        let sub = generated_subcomodule(&gl2, &basis_vector(&gl2, E_ALPHA)).unwrap();
        assert_eq!(sub.lattice.rank(), 3);
        sub.inclusion.verify_equivariance().unwrap();
        let id = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        let sub = generated_subcomodule(&gl2, &id).unwrap();
        assert_eq!(sub.lattice.rank(), 1);
    }

    #[test]
    fn unstable_lattice_is_rejected() {
        let gl2 = gl2_conjugation();
        let line = IntegerLattice::from_generators(&IntegerMatrix::from_rows(&[vec![0, 1, 0, 0]]));
        assert!(matches!(sublattice_comodule(&gl2, &line), Err(AlgebraError::NotStable(_))));
    }
}
