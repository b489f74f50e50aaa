use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Ring;
use crate::error::{AlgebraError, Result};

/// A named indeterminate. Laurent variables may carry negative exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub laurent: bool,
}

impl Var {
    pub fn poly(name: impl Into<String>) -> Var {
        Var {
            name: name.into(),
            laurent: false,
        }
    }

    pub fn laurent(name: impl Into<String>) -> Var {
        Var {
            name: name.into(),
            laurent: true,
        }
    }
}

/// Ordered list of indeterminates shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VarSet {
    vars: Vec<Var>,
}

impl VarSet {
    pub fn new(vars: Vec<Var>) -> Arc<VarSet> {
        Arc::new(VarSet { vars })
    }

    pub fn empty() -> Arc<VarSet> {
        Arc::new(VarSet::default())
    }

    /// Plain polynomial variables with the given names.
    pub fn polynomial(names: &[&str]) -> Arc<VarSet> {
        VarSet::new(names.iter().map(|n| Var::poly(*n)).collect())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, i: usize) -> &Var {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn concat(&self, other: &VarSet) -> Arc<VarSet> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        VarSet::new(vars)
    }

    pub fn names(&self) -> String {
        self.vars
            .iter()
            .map(|v| v.name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub type Exponents = Vec<i32>;

/// Sparse multivariate Laurent polynomial over `Z` or `Z/m`.
///
/// Terms are keyed by exponent vectors; zero coefficients are never stored
/// and residues are kept canonical.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Arc<VarSet>,
    ring: Ring,
    terms: BTreeMap<Exponents, BigInt>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(vars: &Arc<VarSet>, ring: Ring) -> Polynomial {
        Polynomial {
            vars: vars.clone(),
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, ring: Ring, c: impl Into<BigInt>) -> Polynomial {
        let mut p = Polynomial::zero(vars, ring);
        p.add_term(vec![0; vars.len()], c.into());
        p
    }

    pub fn one(vars: &Arc<VarSet>, ring: Ring) -> Polynomial {
        Polynomial::constant(vars, ring, 1)
    }

    pub fn var(vars: &Arc<VarSet>, ring: Ring, i: usize) -> Polynomial {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Polynomial::monomial(vars, ring, e, BigInt::one())
    }

    pub fn var_named(vars: &Arc<VarSet>, ring: Ring, name: &str) -> Result<Polynomial> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::MissingVariable(name.into()))?;
        Ok(Polynomial::var(vars, ring, i))
    }

    /// Single term; the caller guarantees the exponent vector is admissible.
    pub fn monomial(vars: &Arc<VarSet>, ring: Ring, exps: Exponents, c: BigInt) -> Polynomial {
        debug_assert_eq!(exps.len(), vars.len());
        let mut p = Polynomial::zero(vars, ring);
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from terms, checking exponent shapes.
    pub fn from_terms(
        vars: &Arc<VarSet>,
        ring: Ring,
        terms: impl IntoIterator<Item = (Exponents, BigInt)>,
    ) -> Result<Polynomial> {
        let mut p = Polynomial::zero(vars, ring);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(AlgebraError::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            check_exponents(vars, &e)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Highest total degree among the terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
    }

    pub fn is_homogeneous(&self, degree: i64) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&x| x as i64).sum::<i64>() == degree)
    }

    /// Adds `c * x^e` in place.
    pub(crate) fn add_term(&mut self, e: Exponents, c: BigInt) {
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.reduce(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        self.ring.ensure_same(&other.ring)?;
        if !Arc::ptr_eq(&self.vars, &other.vars) && self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch(
                self.vars.names(),
                other.vars.names(),
            ));
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &BigInt) -> Result<()> {
        self.compatible(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (e, x) in &other.terms {
            self.add_term(e.clone(), x * c);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one())?;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one())?;
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = Polynomial::zero(&self.vars, self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars, self.ring);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars, self.ring);
        if k == 0 {
            return result;
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            let e: Exponents = e.iter().map(|x| x * k as i32).collect();
            return Polynomial::monomial(&self.vars, self.ring, e, num_traits::pow(c.clone(), k as usize));
        }
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a monomial with unit coefficient.
    pub fn inverse_monomial(&self) -> Result<Polynomial> {
        if self.terms.len() != 1 {
            return Err(AlgebraError::NotInvertible(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let inv = self
            .ring
            .inverse(c)
            .ok_or_else(|| AlgebraError::NotInvertible(self.to_string()))?;
        let e: Exponents = e.iter().map(|x| -x).collect();
        check_exponents(&self.vars, &e)?;
        Ok(Polynomial::monomial(&self.vars, self.ring, e, inv))
    }

    /// Simultaneous substitution of every variable; all assignments must
    /// share one target variable set and this polynomial's ring.
    pub fn substitute(&self, assignment: &[Polynomial]) -> Result<Polynomial> {
        if assignment.len() != self.vars.len() {
            let missing = self
                .vars
                .vars()
                .get(assignment.len())
                .map(|v| v.name.clone())
                .unwrap_or_default();
            return Err(AlgebraError::MissingVariable(missing));
        }
        let target = match assignment.first() {
            Some(a) => a.vars.clone(),
            None => self.vars.clone(),
        };
        for a in assignment {
            if a.ring != self.ring {
                return Err(AlgebraError::RingMismatch(self.ring, a.ring));
            }
            if !Arc::ptr_eq(&a.vars, &target) && *a.vars != *target {
                return Err(AlgebraError::VariableMismatch(
                    target.names(),
                    a.vars.names(),
                ));
            }
        }
        let mut powers: Vec<PowerCache> = assignment.iter().map(PowerCache::new).collect();
        let mut out = Polynomial::zero(&target, self.ring);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(&target, self.ring, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = powers[i].get(k).map_err(|err| match err {
                    AlgebraError::NotInvertible(_) => AlgebraError::NegativeExponent(format!(
                        "{} (assignment {} is not invertible)",
                        self.vars.get(i).name,
                        assignment[i]
                    )),
                    other => other,
                })?;
                term = &term * p;
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        for e in out.terms.keys() {
            check_exponents(&target, e)?;
        }
        Ok(out)
    }

    /// Substitution with assignments looked up by variable name.
    pub fn substitute_named(&self, assignment: &HashMap<String, Polynomial>) -> Result<Polynomial> {
        let mut list = Vec::with_capacity(self.vars.len());
        for v in self.vars.vars() {
            let a = assignment
                .get(&v.name)
                .ok_or_else(|| AlgebraError::MissingVariable(v.name.clone()))?;
            list.push(a.clone());
        }
        self.substitute(&list)
    }

    /// Moves variable `i` to position `map[i]` of `target`. Variables mapped
    /// to the same slot have their exponents added.
    pub fn rename(&self, target: &Arc<VarSet>, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.vars.len() {
            return Err(AlgebraError::Dimension(format!(
                "rename map of length {} for {} variables",
                map.len(),
                self.vars.len()
            )));
        }
        let mut out = Polynomial::zero(target, self.ring);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            check_exponents(target, &ne)?;
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Divides every coefficient by `n`; fails unless each division is exact
    /// over the integers.
    pub fn exact_div_scalar(&self, n: &BigInt) -> Result<Polynomial> {
        if self.ring != Ring::Integers {
            return Err(AlgebraError::RequiresIntegers(self.ring));
        }
        if n.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut out = Polynomial::zero(&self.vars, self.ring);
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(AlgebraError::NotDivisible {
                    divisor: n.to_string(),
                    monomial: render_monomial(&self.vars, e),
                });
            }
            out.terms.insert(e.clone(), q);
        }
        Ok(out)
    }

    /// Coefficientwise reduction `Z -> Z/m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Polynomial> {
        if self.ring != Ring::Integers {
            return Err(AlgebraError::RequiresIntegers(self.ring));
        }
        let ring = Ring::modulo(m)?;
        let mut out = Polynomial::zero(&self.vars, ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Image in `ring`: identity if equal, otherwise the reduction
    /// `Z -> Z/m` or `Z/a -> Z/m` for `m | a`.
    pub fn to_ring(&self, ring: Ring) -> Result<Polynomial> {
        if ring == self.ring {
            return Ok(self.clone());
        }
        match (self.ring, ring) {
            (Ring::Integers, Ring::Mod(m)) => self.reduce_mod(m),
            (Ring::Mod(a), Ring::Mod(m)) if a % m == 0 => {
                let mut out = Polynomial::zero(&self.vars, ring);
                for (e, c) in &self.terms {
                    out.add_term(e.clone(), c.clone());
                }
                Ok(out)
            }
            _ => Err(AlgebraError::RingMismatch(self.ring, ring)),
        }
    }

    /// Multiplies every exponent by `k`.
    pub fn scale_exponents(&self, k: i32) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars, self.ring);
        for (e, c) in &self.terms {
            out.terms
                .insert(e.iter().map(|x| x * k).collect(), c.clone());
        }
        out
    }

    /// Rewrites `x_i * x_j -> rhs` until no monomial contains both. `rhs`
    /// must not involve `x_i` or `x_j`, which makes one pass sufficient.
    pub fn rewrite_product(&self, i: usize, j: usize, rhs: &Polynomial) -> Polynomial {
        debug_assert!(rhs
            .terms
            .keys()
            .all(|e| e[i] == 0 && e[j] == 0));
        if !self.terms.keys().any(|e| e[i] > 0 && e[j] > 0) {
            return self.clone();
        }
        let mut cache: Vec<Polynomial> = vec![Polynomial::one(&self.vars, self.ring)];
        let mut out = Polynomial::zero(&self.vars, self.ring);
        for (e, c) in &self.terms {
            let t = e[i].min(e[j]);
            if t <= 0 {
                out.add_term(e.clone(), c.clone());
                continue;
            }
            while cache.len() <= t as usize {
                let next = cache.last().unwrap() * rhs;
                cache.push(next);
            }
            let mut rest = e.clone();
            rest[i] -= t;
            rest[j] -= t;
            for (re, rc) in &cache[t as usize].terms {
                let ne: Exponents = rest.iter().zip(re).map(|(a, b)| a + b).collect();
                out.add_term(ne, c * rc);
            }
        }
        out
    }

    /// Value at an integer point; negative powers need unit values.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.vars.len() {
            return Err(AlgebraError::Dimension("evaluation point".into()));
        }
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k >= 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                } else {
                    let inv = self
                        .ring
                        .inverse(&point[i])
                        .ok_or_else(|| AlgebraError::NotInvertible(point[i].to_string()))?;
                    t *= num_traits::pow(inv, (-k) as usize);
                }
            }
            acc += t;
        }
        Ok(self.ring.reduce(acc))
    }

    /// Terms sorted graded-lexicographically, highest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().map(|&x| x as i64).sum();
            let db: i64 = b.iter().map(|&x| x as i64).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

fn check_exponents(vars: &VarSet, e: &[i32]) -> Result<()> {
    for (i, &k) in e.iter().enumerate() {
        if k < 0 && !vars.get(i).laurent {
            return Err(AlgebraError::NegativeExponent(vars.get(i).name.clone()));
        }
    }
    Ok(())
}

struct PowerCache<'a> {
    base: &'a Polynomial,
    positive: Vec<Polynomial>,
    negative: Vec<Polynomial>,
    inverse: Option<Polynomial>,
    /// powers of single-term bases, computed directly
    direct: HashMap<i32, Polynomial>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a Polynomial) -> Self {
        PowerCache {
            base,
            positive: vec![Polynomial::one(&base.vars, base.ring)],
            negative: vec![Polynomial::one(&base.vars, base.ring)],
            inverse: None,
            direct: HashMap::new(),
        }
    }

    fn get(&mut self, k: i32) -> Result<&Polynomial> {
        if self.base.terms.len() <= 1 {
            if !self.direct.contains_key(&k) {
                let p = if k >= 0 {
                    self.base.pow(k as u32)
                } else {
                    self.base.inverse_monomial()?.pow((-k) as u32)
                };
                self.direct.insert(k, p);
            }
            return Ok(&self.direct[&k]);
        }
        if k >= 0 {
            let k = k as usize;
            while self.positive.len() <= k {
                let next = self.positive.last().unwrap() * self.base;
                self.positive.push(next);
            }
            Ok(&self.positive[k])
        } else {
            if self.inverse.is_none() {
                self.inverse = Some(self.base.inverse_monomial()?);
            }
            let inv = self.inverse.as_ref().unwrap();
            let k = (-k) as usize;
            while self.negative.len() <= k {
                let next = self.negative.last().unwrap() * inv;
                self.negative.push(next);
            }
            Ok(&self.negative[k])
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigInt::one())
    }
}

pub(crate) fn render_monomial(vars: &VarSet, e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            let name = &vars.get(i).name;
            if k == 1 {
                name.clone()
            } else {
                format!("{name}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = render_monomial(&self.vars, e);
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}
