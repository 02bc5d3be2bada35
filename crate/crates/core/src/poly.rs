//! Sparse multivariate polynomials over [`FieldElement`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::SparseVec;

/// Exponent vector of a monomial X1^e1 ⋯ Xm^em.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// All monomials of total degree `d` in `num_vars` variables, in
/// descending lexicographic order (X1^d first).
pub fn monomials_of_degree(num_vars: usize, d: u32) -> Vec<Monomial> {
    fn rec(rest: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rest == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(rest - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    if num_vars == 0 {
        return if d == 0 {
            vec![Monomial(Vec::new())]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    rec(num_vars, d, &mut Vec::with_capacity(num_vars), &mut out);
    out
}

/// Number of monomials of degree d in m variables: C(d + m - 1, m - 1).
pub fn count_monomials(num_vars: usize, d: i64) -> u128 {
    if d < 0 {
        return 0;
    }
    if num_vars == 0 {
        return u128::from(d == 0);
    }
    binomial(d as u128 + num_vars as u128 - 1, num_vars as u128 - 1)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The monomials of one degree with their positions, used as the
/// coordinate system for a graded slice R_d.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(num_vars: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(num_vars, degree);
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        MonomialBasis {
            num_vars,
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coordinates(&self, p: &MultiPoly) -> Result<SparseVec> {
        let mut v = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let i = self.position(m).ok_or_else(|| {
                Error::Dimension(format!(
                    "term of degree {} in slice of degree {}",
                    m.degree(),
                    self.degree
                ))
            })?;
            v.push((i, c.clone()));
        }
        v.sort_by_key(|e| e.0);
        Ok(v)
    }

    pub fn polynomial(&self, v: &[(usize, FieldElement)]) -> MultiPoly {
        MultiPoly::from_terms(
            self.num_vars,
            v.iter()
                .map(|(i, c)| (self.monomials[*i].clone(), c.clone())),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Lex,
    #[serde(alias = "grevlex")]
    GrevLex,
}

/// A monomial order with an explicit variable priority (largest first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, num_vars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..num_vars).collect(),
        }
    }

    pub fn grevlex(num_vars: usize) -> Self {
        Self::new(OrderKind::GrevLex, num_vars)
    }

    pub fn lex(num_vars: usize) -> Self {
        Self::new(OrderKind::Lex, num_vars)
    }

    /// `priority[0]` is the largest variable.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut sorted = priority.clone();
        sorted.sort_unstable();
        if sorted != (0..priority.len()).collect::<Vec<_>>() {
            return Err(Error::Invalid(
                "variable priority must be a permutation".into(),
            ));
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn num_vars(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.priority {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &v in self.priority.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Sparse polynomial in `num_vars` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, FieldElement::one())
    }

    pub fn constant(num_vars: usize, c: FieldElement) -> Self {
        Self::monomial(Monomial::one(num_vars), c)
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(num_vars, i), FieldElement::one())
    }

    pub fn monomial(m: Monomial, c: FieldElement) -> Self {
        let num_vars = m.num_vars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { num_vars, terms }
    }

    /// Builds a polynomial from terms, merging repeats and dropping zeros.
    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "exponent vector length");
            p.add_term(m, &c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree when every term has the same degree. The zero
    /// polynomial is homogeneous of every degree and yields `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Monomial::one(self.num_vars))
    }

    /// Cyclotomic index of the coefficient field (1 for ℚ); errors if the
    /// coefficients mix incompatible extensions.
    pub fn field_index(&self) -> Result<u32> {
        let mut n = 1;
        for c in self.terms.values() {
            n = match (n, c.index()) {
                (1, b) => b,
                (a, 1) => a,
                (a, b) if a == b => a,
                (a, b) => return Err(Error::MixedCyclotomic(a, b)),
            };
        }
        Ok(n)
    }

    /// Terms sorted descending in `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VariableCount {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            match out.terms.get_mut(m) {
                Some(a) => {
                    *a = a.try_add(c)?;
                    if a.is_zero() {
                        out.terms.remove(m);
                    }
                }
                None => {
                    out.terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        self.field_index()?;
        other.field_index()?;
        let mut out: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.try_mul(cb)?;
                let m = ma.mul(mb);
                let slot = out.entry(m).or_default();
                *slot = slot.try_add(&c)?;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(MultiPoly {
            num_vars: self.num_vars,
            terms: out,
        })
    }

    pub fn try_scale(&self, s: &FieldElement) -> Result<Self> {
        if s.is_zero() {
            return Ok(Self::zero(self.num_vars));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.try_mul(s)?);
        }
        Ok(MultiPoly {
            num_vars: self.num_vars,
            terms,
        })
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        self.try_scale(s).expect("polynomial arithmetic")
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `images[j]` for the variable X_{j+1}.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.num_vars {
            return Err(Error::VariableCount {
                left: self.num_vars,
                right: images.len(),
            });
        }
        let target_vars = images.first().map_or(0, MultiPoly::num_vars);
        let mut powers: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(target_vars)]; images.len()];
        let mut out = MultiPoly::zero(target_vars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target_vars, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().try_mul(&images[j])?;
                    powers[j].push(next);
                }
                if e > 0 {
                    term = term.try_mul(&powers[j][e as usize])?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Homogeneous component of degree d.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Makes the leading coefficient (in `order`) equal to one.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }
}

/// The three ring operations exposed for scripting and tests.
#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Mul,
    /// Multiply the left operand by a constant; the right operand is ignored.
    Scalar(FieldElement),
}

pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    match op {
        PolyOp::Add => p.try_add(q),
        PolyOp::Mul => p.try_mul(q),
        PolyOp::Scalar(s) => p.try_scale(&s),
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial arithmetic")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(&-rhs).expect("polynomial arithmetic")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial arithmetic")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expect = &x().pow(2) - &y().pow(2);
        assert_eq!(p, expect);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn annihilation_and_cancellation() {
        let p = &x() + &y();
        assert!((&p * &MultiPoly::zero(2)).is_zero());
        let q = &(&x().pow(2) + &(&x() * &y())) + &-&(&x() * &y());
        assert_eq!(q, x().pow(2));
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn variable_mismatch() {
        let err = poly_arith(&x(), &MultiPoly::var(3, 0), PolyOp::Add).unwrap_err();
        assert_eq!(err, Error::VariableCount { left: 2, right: 3 });
    }

    #[test]
    fn homogeneity() {
        assert!(MultiPoly::zero(2).is_homogeneous());
        assert_eq!((&x().pow(2) + &(&x() * &y())).homogeneous_degree(), Some(2));
        assert!(!(&x() + &MultiPoly::one(2)).is_homogeneous());
    }

    #[test]
    fn orders() {
        let grevlex = MonomialOrder::grevlex(3);
        let lex = MonomialOrder::lex(3);
        // x*z^2 vs y^3: lex puts x first, grevlex compares the last variable
        let a = Monomial(vec![1, 0, 2]);
        let b = Monomial(vec![0, 3, 0]);
        assert_eq!(lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(grevlex.cmp(&a, &b), Ordering::Less);
        let rev = MonomialOrder::with_priority(OrderKind::Lex, vec![2, 1, 0]).unwrap();
        assert_eq!(rev.cmp(&a, &b), Ordering::Greater);
        assert!(MonomialOrder::with_priority(OrderKind::Lex, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(
            monomials_of_degree(3, 4).len() as u128,
            count_monomials(3, 4)
        );
        assert_eq!(monomials_of_degree(2, 2)[0], Monomial(vec![2, 0]));
        assert_eq!(count_monomials(2, -1), 0);
    }

    #[test]
    fn substitution() {
        // swap x and y in x^2 y
        let p = &x().pow(2) * &y();
        let q = p.substitute(&[y(), x()]).unwrap();
        assert_eq!(q, &y().pow(2) * &x());
    }
}
