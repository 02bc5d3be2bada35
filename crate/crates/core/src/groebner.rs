//! Buchberger's algorithm, normal forms and quotient slice dimensions.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, MultiPoly};

/// Work limits for Buchberger's algorithm. Exceeding either is a hard
/// [`Error::ResourceLimit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBudget {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum total degree of an S-pair's lcm.
    pub max_degree: u32,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget {
            max_pairs: 50_000,
            max_degree: 128,
        }
    }
}

type Terms = Vec<(Monomial, FieldElement)>;

fn to_terms(p: &MultiPoly, order: &MonomialOrder) -> Terms {
    p.sorted_terms(order)
        .into_iter()
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

fn from_terms(num_vars: usize, t: Terms) -> MultiPoly {
    MultiPoly::from_terms(num_vars, t)
}

/// `a - s * mono * b`, all term lists sorted descending.
fn sub_mul(
    a: &[(Monomial, FieldElement)],
    s: &FieldElement,
    mono: &Monomial,
    b: &Terms,
    order: &MonomialOrder,
) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, c)| (m.mul(mono), c)).peekable();
    while i < a.len() || bi.peek().is_some() {
        let ord = match (a.get(i), bi.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (m, c) = bi.next().unwrap();
                out.push((m, -(s * c)));
            }
            Ordering::Equal => {
                let (m, c) = bi.next().unwrap();
                let mut v = a[i].1.clone();
                v -= &(s * c);
                if !v.is_zero() {
                    out.push((m, v));
                }
                i += 1;
            }
        }
    }
    out
}

fn make_monic(t: &mut Terms) {
    if let Some(inv) = t.first().map(|(_, c)| c.inv().expect("nonzero")) {
        if !inv.is_one() {
            for (_, c) in t.iter_mut() {
                *c = &*c * &inv;
            }
        }
    }
}

/// Full reduction of `p` by monic `basis` (leading term first).
fn reduce(mut p: Terms, basis: &[Terms], order: &MonomialOrder) -> Terms {
    let mut rem = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = p[start].clone();
        match basis.iter().find(|g| g[0].0.divides(&lm)) {
            Some(g) => {
                let q = g[0].0.quotient(&lm);
                p = sub_mul(&p[start..], &lc, &q, g, order);
                start = 0;
            }
            None => {
                rem.push((lm, lc));
                start += 1;
            }
        }
    }
    rem
}

/// A reduced Gröbner basis with its monomial order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    num_vars: usize,
    order: MonomialOrder,
    basis: Vec<Terms>,
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(
    gens: &[MultiPoly],
    order: &MonomialOrder,
    budget: &GroebnerBudget,
) -> Result<GroebnerBasis> {
    let num_vars = order.num_vars();
    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(Error::Invalid(format!("generator {k} is zero")));
        }
        if g.num_vars() != num_vars {
            return Err(Error::VariableCount {
                left: num_vars,
                right: g.num_vars(),
            });
        }
        g.field_index()?;
    }
    let mut basis: Vec<Terms> = Vec::new();
    for g in gens {
        let mut t = reduce(to_terms(g, order), &basis, order);
        if t.is_empty() {
            continue;
        }
        make_monic(&mut t);
        basis.push(t);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal selection: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let la = basis[a.1 .0][0].0.lcm(&basis[a.1 .1][0].0);
                let lb = basis[b.1 .0][0].0.lcm(&basis[b.1 .1][0].0);
                order.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        let (lmi, lmj) = (&basis[i][0].0, &basis[j][0].0);
        if lmi.is_coprime(lmj) {
            continue;
        }
        let lcm = lmi.lcm(lmj);
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&lcm)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if lcm.degree() > budget.max_degree {
            return Err(Error::ResourceLimit(format!(
                "S-pair of degree {} exceeds the Groebner degree budget {}",
                lcm.degree(),
                budget.max_degree
            )));
        }
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "more than {} S-pairs reduced (Groebner pair budget)",
                budget.max_pairs
            )));
        }
        let qi = lmi.quotient(&lcm);
        let qj = lmj.quotient(&lcm);
        let si: Terms = basis[i]
            .iter()
            .map(|(m, c)| (m.mul(&qi), c.clone()))
            .collect();
        let s = sub_mul(&si, &FieldElement::one(), &qj, &basis[j], order);
        let mut r = reduce(s, &basis, order);
        if r.is_empty() {
            continue;
        }
        make_monic(&mut r);
        if r[0].0.degree() == 0 {
            basis = vec![r];
            pairs.clear();
            break;
        }
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pairs.push((k, n));
        }
    }
    Ok(GroebnerBasis::reduced(num_vars, order.clone(), basis))
}

impl GroebnerBasis {
    fn reduced(num_vars: usize, order: MonomialOrder, mut basis: Vec<Terms>) -> Self {
        // minimal: drop elements whose leading monomial is divisible by another's
        basis.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
        let mut minimal: Vec<Terms> = Vec::new();
        for g in basis {
            if !minimal.iter().any(|h| h[0].0.divides(&g[0].0)) {
                minimal.push(g);
            }
        }
        // inter-reduce tails
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<Terms> = minimal
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, g)| g.clone())
                .collect();
            let head = minimal[k][0].clone();
            let tail = reduce(minimal[k][1..].to_vec(), &others, &order);
            let mut g = vec![head];
            g.extend(tail);
            out.push(g);
        }
        GroebnerBasis {
            num_vars,
            order,
            basis: out,
        }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> Vec<MultiPoly> {
        self.basis
            .iter()
            .map(|t| from_terms(self.num_vars, t.clone()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|t| &t[0].0).collect()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|t| t[0].0.degree() == 0)
    }

    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let r = reduce(to_terms(p, &self.order), &self.basis, &self.order);
        from_terms(self.num_vars, r)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.basis.iter().any(|g| g[0].0.divides(m))
    }

    /// Monomials of degree `d` outside the initial ideal.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        monomials_of_degree(self.num_vars, d)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// The quotient is finite dimensional iff every variable has a pure
    /// power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.num_vars).all(|i| {
            self.basis.iter().any(|g| {
                let e = &g[0].0 .0;
                e[i] > 0 && e.iter().enumerate().all(|(k, &v)| k == i || v == 0)
            })
        })
    }

    /// S-polynomial check: every pair reduces to zero.
    pub fn is_groebner(&self) -> bool {
        for j in 0..self.basis.len() {
            for i in 0..j {
                let (a, b) = (&self.basis[i], &self.basis[j]);
                let lcm = a[0].0.lcm(&b[0].0);
                let qi = a[0].0.quotient(&lcm);
                let qj = b[0].0.quotient(&lcm);
                let si: Terms = a.iter().map(|(m, c)| (m.mul(&qi), c.clone())).collect();
                let s = sub_mul(&si, &FieldElement::one(), &qj, b, &self.order);
                if !reduce(s, &self.basis, &self.order).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// dim_K (R/(gens))_j for homogeneous generators.
pub fn quotient_slice_dim(
    gens: &[MultiPoly],
    num_vars: usize,
    j: u32,
    budget: &GroebnerBudget,
) -> Result<usize> {
    for g in gens {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous(g.to_string()));
        }
    }
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let gb = groebner_basis(&nonzero, &MonomialOrder::grevlex(num_vars), budget)?;
    Ok(gb.standard_monomials(j).len())
}
