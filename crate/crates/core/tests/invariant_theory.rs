//! Fundamental invariants and H^m at S_+ across the group corpus.

mod common;

use std::sync::Arc;

use lclab_core::cech::{CechEngine, CechPolicy, Finiteness};
use lclab_core::group::InvariantSlices;
use lclab_core::invariants::{
    fundamental_invariants, noether_generators, quotient_profile, verify_regular_sequence,
    HsopBudget,
};
use lclab_core::oracle::hsop_limit_component;
use lclab_core::Error;

/// Coefficients of ((1 − z^c)/(1 − z))^m by direct counting of exponent vectors.
fn box_counts(c: u64, m: usize) -> Vec<u128> {
    let mut counts = vec![0u128; m * (c as usize - 1) + 1];
    let total = (c as usize).pow(m as u32);
    for code in 0..total {
        let mut rest = code;
        let mut deg = 0;
        for _ in 0..m {
            deg += rest % c as usize;
            rest /= c as usize;
        }
        counts[deg] += 1;
    }
    counts
}

#[test]
fn fundamental_invariants_for_feasible_groups() {
    let budget = HsopBudget::default();
    for (name, group) in common::corpus() {
        if name == "rotation" {
            continue;
        }
        let m = group.dim();
        let fi = fundamental_invariants(group.clone(), 2024, &budget).unwrap();
        assert!(fi.f.attempts <= 5 && fi.g.attempts <= 5, "{name}");
        assert!(
            fi.algebra.is_certified() && fi.dual_algebra.is_certified(),
            "{name}"
        );
        for f in fi.f() {
            assert!(group.is_invariant(f).unwrap());
            assert_eq!(f.homogeneous_degree(), Some(fi.c as u32));
        }
        let dual = group.contragredient();
        for g in fi.g() {
            assert!(dual.is_invariant(g).unwrap());
        }
        let bound = (m as i64) * fi.c as i64 + 1;
        assert!(
            verify_regular_sequence(fi.f(), bound, budget.order, &budget.groebner).unwrap(),
            "{name}"
        );
        assert!(
            verify_regular_sequence(fi.g(), bound, budget.order, &budget.groebner).unwrap(),
            "{name}"
        );
        let profile = quotient_profile(fi.f(), fi.c, budget.order, &budget.groebner).unwrap();
        assert_eq!(profile.dims, box_counts(fi.c, m), "{name}");
        assert_eq!(profile.total, (fi.c as u128).pow(m as u32));
        assert_eq!(profile.top_degree, m as u64 * (fi.c - 1));
    }
}

#[test]
fn rotation_group_is_refused_by_budget() {
    let err = fundamental_invariants(common::rotation(), 0, &HsopBudget::default()).unwrap_err();
    assert!(matches!(err, Error::ResourceLimit(_)));
    // the generators themselves are still available
    let alg = noether_generators(common::rotation()).unwrap();
    assert!(alg.is_certified());
    assert_eq!(alg.degrees(), vec![2, 4, 4]);
}

#[test]
fn top_cohomology_agrees_with_hsop_limit() {
    let budget = HsopBudget::default();
    for (name, group) in common::corpus() {
        if name == "rotation" {
            continue;
        }
        let m = group.dim();
        let fi = fundamental_invariants(group.clone(), 11, &budget).unwrap();
        let engine = CechEngine::new(
            Arc::new(InvariantSlices::new(group.clone())),
            &fi.algebra.generators,
            CechPolicy::default(),
        )
        .unwrap();
        for n in -8..=1 {
            let a = engine.component(m, n).unwrap().value;
            let b = hsop_limit_component(&group, fi.f(), fi.c, n, CechPolicy::default())
                .unwrap()
                .value;
            assert_eq!(a, b, "{name} at n = {n}");
            assert!(matches!(a, Finiteness::Finite { .. }));
        }
    }
}
