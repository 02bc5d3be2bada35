//! Generators of the invariant ring S = R^G and fundamental invariants.
//!
//! Noether generators come from Reynolds images of monomials of degree at
//! most |G|, pruned degree by degree against the span of products of
//! lower-degree generators. Fundamental invariants are m seeded random
//! combinations of powers of those generators, all of degree c = |G|!,
//! accepted only after an exact zero-dimensionality check.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::groebner::{groebner_basis, GroebnerBudget};
use crate::group::InvariantSlices;
use crate::group::MatrixGroup;
use crate::koszul::{koszul_homology_slice, Operator, PolynomialModule};
use crate::linalg::Echelon;
use crate::poly::{MonomialBasis, MonomialOrder, MultiPoly, OrderKind};

/// Generators u₁,…,u_l of R^G with a slice-dimension certificate.
#[derive(Clone, Debug)]
pub struct InvariantAlgebra {
    pub group: Arc<MatrixGroup>,
    pub generators: Vec<MultiPoly>,
    /// (n, dim of the subalgebra slice, dim of (R_n)^G) for n = 0..=2|G|.
    pub certificate: Vec<(u32, usize, usize)>,
}

impl InvariantAlgebra {
    /// True when the generated subalgebra fills every certified slice.
    pub fn is_certified(&self) -> bool {
        self.certificate.iter().all(|&(_, a, b)| a == b)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators
            .iter()
            .map(|u| u.homogeneous_degree().unwrap_or(0))
            .collect()
    }
}

/// Spans of the subalgebra generated by `gens`, degree by degree up to `top`.
/// Entry d holds an echelon basis (in monomial coordinates of R_d) and the
/// corresponding polynomials.
fn subalgebra_slices(gens: &[MultiPoly], num_vars: usize, top: u32) -> Result<Vec<Vec<MultiPoly>>> {
    let mut slices: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(num_vars)]];
    for d in 1..=top {
        let basis = MonomialBasis::new(num_vars, d);
        let mut e = Echelon::new();
        let mut polys = Vec::new();
        for u in gens {
            let du = u.homogeneous_degree().unwrap_or(0);
            if du == 0 || du > d {
                continue;
            }
            for a in &slices[(d - du) as usize] {
                let p = u.try_mul(a)?;
                if e.insert(basis.coordinates(&p)?) {
                    polys.push(p);
                }
            }
        }
        slices.push(polys);
    }
    Ok(slices)
}

/// Minimal homogeneous generators of R^G in degrees ≤ |G|, made monic for grevlex.
pub fn noether_generators(group: Arc<MatrixGroup>) -> Result<InvariantAlgebra> {
    let m = group.dim();
    let order = MonomialOrder::grevlex(m);
    let bound = group.order() as u32;
    let mut gens: Vec<MultiPoly> = Vec::new();
    for d in 1..=bound {
        let basis = MonomialBasis::new(m, d);
        let lower = subalgebra_slices(&gens, m, d)?;
        let mut e = Echelon::new();
        for p in &lower[d as usize] {
            e.insert(basis.coordinates(p)?);
        }
        for mono in basis.monomials() {
            let r = group.reynolds(&MultiPoly::monomial(mono.clone(), FieldElement::one()))?;
            if r.is_zero() {
                continue;
            }
            if e.insert(basis.coordinates(&r)?) {
                gens.push(r.monic(&order));
            }
        }
    }
    let top = 2 * bound;
    let spans = subalgebra_slices(&gens, m, top)?;
    let certificate = (0..=top)
        .map(|n| Ok((n, spans[n as usize].len(), group.invariant_slice_dim(n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantAlgebra {
        group,
        generators: gens,
        certificate,
    })
}

/// Limits on the h.s.o.p. search, and the monomial order of its Gröbner bases.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct HsopBudget {
    /// Largest admissible c = |G|!; beyond it the search is refused up front.
    pub max_degree: u64,
    pub max_attempts: u32,
    pub groebner: GroebnerBudget,
    pub order: OrderKind,
}

impl Default for HsopBudget {
    fn default() -> Self {
        HsopBudget {
            max_degree: 16,
            max_attempts: 5,
            groebner: GroebnerBudget::default(),
            order: OrderKind::GrevLex,
        }
    }
}

/// One side of the fundamental invariants: m forms of degree c.
#[derive(Clone, Debug)]
pub struct HsopTuple {
    pub forms: Vec<MultiPoly>,
    /// Attempts used, counting the accepted one.
    pub attempts: u32,
    /// The integer coefficient matrix of the accepted draw (row k builds form k).
    pub coefficients: Vec<Vec<i64>>,
}

/// Fundamental invariants f (for G) and dual fundamental invariants g (for
/// the contragredient group, stored with positive exponents in the
/// ∂-variables; internal degree −c).
#[derive(Clone, Debug)]
pub struct FundamentalInvariants {
    pub c: u64,
    pub f: HsopTuple,
    pub g: HsopTuple,
    pub seed: u64,
    pub algebra: InvariantAlgebra,
    pub dual_algebra: InvariantAlgebra,
}

impl FundamentalInvariants {
    pub fn num_vars(&self) -> usize {
        self.algebra.group.dim()
    }

    pub fn f(&self) -> &[MultiPoly] {
        &self.f.forms
    }

    pub fn g(&self) -> &[MultiPoly] {
        &self.g.forms
    }
}

/// |G|! with the budget pre-flight applied.
pub fn hsop_degree(group: &MatrixGroup, budget: &HsopBudget) -> Result<u64> {
    let c = group
        .factorial_order()
        .filter(|&c| c <= budget.max_degree)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "h.s.o.p. degree |G|! for |G| = {} exceeds the degree budget {}",
                group.order(),
                budget.max_degree
            ))
        })?;
    Ok(c)
}

fn draw_hsop(
    algebra: &InvariantAlgebra,
    c: u64,
    seed: u64,
    budget: &HsopBudget,
) -> Result<HsopTuple> {
    let m = algebra.group.dim();
    let powers: Vec<MultiPoly> = algebra
        .generators
        .iter()
        .map(|u| u.pow((c / u.homogeneous_degree().unwrap_or(1) as u64) as u32))
        .collect();
    let order = MonomialOrder::new(budget.order, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=budget.max_attempts {
        let coefficients: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..powers.len()).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let forms: Vec<MultiPoly> = coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&powers)
                    .try_fold(MultiPoly::zero(m), |acc, (&a, p)| {
                        acc.try_add(&p.try_scale(&FieldElement::from_int(a))?)
                    })
            })
            .collect::<Result<_>>()?;
        if forms.iter().any(MultiPoly::is_zero) {
            continue;
        }
        let gb = groebner_basis(&forms, &order, &budget.groebner)?;
        if gb.is_zero_dimensional() {
            return Ok(HsopTuple {
                forms,
                attempts: attempt,
                coefficients,
            });
        }
    }
    Err(Error::RetryCapExhausted {
        attempts: budget.max_attempts as usize,
        seed,
    })
}

/// Seeded construction of fundamental and dual fundamental invariants.
pub fn fundamental_invariants(
    group: Arc<MatrixGroup>,
    seed: u64,
    budget: &HsopBudget,
) -> Result<FundamentalInvariants> {
    let c = hsop_degree(&group, budget)?;
    let algebra = noether_generators(group.clone())?;
    let dual_algebra = noether_generators(Arc::new(group.contragredient()))?;
    let f = draw_hsop(&algebra, c, seed, budget)?;
    let g = draw_hsop(&dual_algebra, c, seed, budget)?;
    Ok(FundamentalInvariants {
        c,
        f,
        g,
        seed,
        algebra,
        dual_algebra,
    })
}

/// Regular-sequence certificate: Koszul H₁(f; R)_j = 0 for 0 ≤ j ≤ degree_bound
/// and K[X]/(f) zero-dimensional.
pub fn verify_regular_sequence(
    f: &[MultiPoly],
    degree_bound: i64,
    order: OrderKind,
    budget: &GroebnerBudget,
) -> Result<bool> {
    let Some(m) = f.first().map(MultiPoly::num_vars) else {
        return Ok(false);
    };
    for p in f {
        if !p.is_homogeneous() {
            return Err(Error::NotHomogeneous(p.to_string()));
        }
    }
    if f.iter().any(MultiPoly::is_zero) {
        return Ok(false);
    }
    let gb = groebner_basis(f, &MonomialOrder::new(order, m), budget)?;
    if !gb.is_zero_dimensional() {
        return Ok(false);
    }
    let ring = PolynomialModule::new(Arc::new(InvariantSlices::new(Arc::new(
        MatrixGroup::trivial(m),
    ))));
    let ops: Vec<Operator> = f.iter().cloned().map(Operator::X).collect();
    for j in 0..=degree_bound {
        if koszul_homology_slice(&ops, &ring, 1, j)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degree profile of R/(f) and the comparison of its top degree with the
/// two candidate vanishing bounds m(c−1) and (c−1)^m.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuotientProfile {
    pub c: u64,
    pub m: usize,
    /// dims[j] = dim (R/(f))_j up to the top degree.
    pub dims: Vec<u128>,
    pub total: u128,
    pub top_degree: u64,
    pub hilbert_bound: u64,
    pub power_bound: u128,
    /// Whether the two bounds differ.
    pub bounds_differ: bool,
    /// Whether the top degree exceeds the bound (c−1)^m.
    pub exceeds_power_bound: bool,
    /// Whether dims match ((1−z^c)/(1−z))^m coefficient by coefficient.
    pub matches_complete_intersection: bool,
}

/// Coefficients of (1 + z + ⋯ + z^{c−1})^m.
pub fn complete_intersection_series(c: u64, m: usize) -> Vec<u128> {
    let mut acc = vec![1u128];
    for _ in 0..m {
        let mut next = vec![0u128; acc.len() + c as usize - 1];
        for (i, a) in acc.iter().enumerate() {
            for k in 0..c as usize {
                next[i + k] += a;
            }
        }
        acc = next;
    }
    acc
}

pub fn quotient_profile(
    f: &[MultiPoly],
    c: u64,
    order: OrderKind,
    budget: &GroebnerBudget,
) -> Result<QuotientProfile> {
    let m = f
        .first()
        .map(MultiPoly::num_vars)
        .ok_or_else(|| Error::Invalid("empty tuple".into()))?;
    let gb = groebner_basis(f, &MonomialOrder::new(order, m), budget)?;
    if !gb.is_zero_dimensional() {
        return Err(Error::Invalid("quotient is not zero-dimensional".into()));
    }
    let mut dims = Vec::new();
    loop {
        let d = gb.standard_monomials(dims.len() as u32).len() as u128;
        if d == 0 {
            break;
        }
        dims.push(d);
    }
    let top_degree = dims.len().saturating_sub(1) as u64;
    let hilbert_bound = m as u64 * (c - 1);
    let power_bound = ((c - 1) as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    Ok(QuotientProfile {
        c,
        m,
        total: dims.iter().sum(),
        matches_complete_intersection: dims == complete_intersection_series(c, m),
        dims,
        top_degree,
        hilbert_bound,
        power_bound,
        bounds_differ: hilbert_bound as u128 != power_bound,
        exceeds_power_bound: top_degree as u128 > power_bound,
    })
}

/// Radius W = max(m(c−1), (c−1)^m) of the vanishing window.
pub fn window_radius(c: u64, m: usize) -> Result<i64> {
    let a = m as u128 * (c as u128 - 1);
    let b = ((c - 1) as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    i64::try_from(a.max(b)).map_err(|_| Error::ResourceLimit("window radius overflows".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_group;
    use crate::linalg::ExactMatrix;
    use crate::text::parse_poly;

    fn group(rows: &[&[i64]]) -> Arc<MatrixGroup> {
        Arc::new(close_group(&[ExactMatrix::from_i64(rows)], 100).unwrap())
    }

    #[test]
    fn noether_examples() {
        let t = noether_generators(Arc::new(MatrixGroup::trivial(2))).unwrap();
        assert_eq!(
            t.generators,
            vec![
                parse_poly("X1", 2, 1).unwrap(),
                parse_poly("X2", 2, 1).unwrap()
            ]
        );
        let v = noether_generators(group(&[&[-1, 0], &[0, -1]])).unwrap();
        let strs: Vec<String> = v.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, ["X1^2", "X1*X2", "X2^2"]);
        assert!(v.is_certified());
        let s = noether_generators(group(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(s.degrees(), vec![1, 2]);
        assert!(s.is_certified());
    }

    #[test]
    fn fundamental_examples() {
        let b = HsopBudget::default();
        let fi = fundamental_invariants(group(&[&[-1, 0], &[0, -1]]), 7, &b).unwrap();
        assert_eq!(fi.c, 2);
        let prof = quotient_profile(fi.f(), fi.c, b.order, &b.groebner).unwrap();
        assert_eq!(prof.dims, vec![1, 2, 1]);
        assert!(prof.bounds_differ && prof.exceeds_power_bound);
        let one = fundamental_invariants(group(&[&[-1]]), 1, &b).unwrap();
        let prof = quotient_profile(one.f(), one.c, b.order, &b.groebner).unwrap();
        assert_eq!((prof.dims.clone(), prof.bounds_differ), (vec![1, 1], false));
        let again = fundamental_invariants(group(&[&[-1, 0], &[0, -1]]), 7, &b).unwrap();
        assert_eq!(again.f(), fi.f());
    }

    #[test]
    fn regular_sequence_examples() {
        let b = GroebnerBudget::default();
        let p = |s: &str, m| parse_poly(s, m, 1).unwrap();
        assert!(verify_regular_sequence(&[p("X1", 2), p("X2", 2)], 6, OrderKind::Lex, &b).unwrap());
        assert!(
            !verify_regular_sequence(&[p("X1^2", 1), p("X1^2", 1)], 6, OrderKind::Lex, &b).unwrap()
        );
        assert!(
            !verify_regular_sequence(&[p("X1*X2", 2), p("X1^2", 2)], 6, OrderKind::Lex, &b)
                .unwrap()
        );
    }

    #[test]
    fn rotation_is_over_budget() {
        let g = group(&[&[0, -1], &[1, 0]]);
        assert!(matches!(
            fundamental_invariants(g, 0, &HsopBudget::default()),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn radius() {
        assert_eq!(window_radius(2, 2).unwrap(), 2);
        assert_eq!(window_radius(6, 2).unwrap(), 25);
        assert_eq!(window_radius(1, 3).unwrap(), 0);
    }
}
