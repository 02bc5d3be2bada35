//! Randomized and exhaustive algebraic property suites.

mod common;

use std::sync::Arc;

use lclab_core::cech::{CechEngine, CechPolicy};
use lclab_core::group::InvariantSlices;
use lclab_core::koszul::{koszul_strand, Operator, PolynomialModule};
use lclab_core::linalg::kernel_of;
use lclab_core::poly::MonomialBasis;
use lclab_core::{
    format_poly, parse_poly, Echelon, ExactMatrix, FieldElement, MatrixGroup, Monomial,
    MonomialOrder, MultiPoly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=5).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn field_element(index: u32) -> impl Strategy<Value = FieldElement> {
    let phi = match index {
        1 => 1,
        3 | 4 | 6 => 2,
        _ => 4,
    };
    prop::collection::vec(small_rational(), phi)
        .prop_map(move |c| FieldElement::from_power_basis(index, c))
}

fn poly(m: usize, index: u32, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, m), field_element(index)),
        0..6,
    )
    .prop_map(move |terms| {
        MultiPoly::from_terms(m, terms.into_iter().map(|(e, c)| (Monomial(e), c)))
    })
}

/// Reynolds projector on R_d in monomial coordinates.
fn reynolds_matrix(group: &MatrixGroup, d: i64) -> ExactMatrix {
    if d < 0 {
        return ExactMatrix::zeros(0, 0);
    }
    let basis = MonomialBasis::new(group.dim(), d as u32);
    let cols: Vec<_> = basis
        .monomials()
        .iter()
        .map(|mono| {
            let r = group
                .reynolds(&MultiPoly::monomial(mono.clone(), FieldElement::one()))
                .unwrap();
            basis.coordinates(&r).unwrap()
        })
        .collect();
    ExactMatrix::from_columns(basis.len(), &cols)
}

fn block_diagonal(group: &MatrixGroup, blocks: &[(i64, usize)]) -> ExactMatrix {
    let dim: usize = blocks.iter().map(|b| b.1).sum();
    let mut out = ExactMatrix::zeros(dim, dim);
    let mut off = 0;
    for &(d, len) in blocks {
        if len > 0 {
            let r = reynolds_matrix(group, d);
            assert_eq!(r.rows(), len);
            for i in 0..len {
                for j in 0..len {
                    out.set(off + i, off + j, r.get(i, j).clone());
                }
            }
        }
        off += len;
    }
    out
}

fn mul(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    a.try_mul(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((a, b, c) in prop::sample::select(vec![1u32, 3, 4, 5])
        .prop_flat_map(|k| (field_element(k), field_element(k), field_element(k)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn ring_axioms(p in poly(2, 3, 3), q in poly(2, 3, 3), r in poly(2, 3, 2)) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p + &-&p).is_zero());
    }

    #[test]
    fn parse_print_round_trip(p in poly(3, 1, 4), q in poly(2, 5, 3)) {
        let order = MonomialOrder::grevlex(3);
        prop_assert_eq!(parse_poly(&format_poly(&p, &order), 3, 1).unwrap(), p);
        prop_assert_eq!(parse_poly(&q.to_string(), 2, 5).unwrap(), q);
    }

    #[test]
    fn rank_is_permutation_invariant(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6),
        perm_seed in any::<u64>(),
    ) {
        let m = ExactMatrix::from_i64(&rows.iter().map(Vec::as_slice).collect::<Vec<_>>());
        let mut r_idx: Vec<usize> = (0..m.rows()).collect();
        let mut c_idx: Vec<usize> = (0..m.cols()).collect();
        let mut s = perm_seed;
        for v in [&mut r_idx, &mut c_idx] {
            for i in (1..v.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let permuted: Vec<Vec<FieldElement>> =
            r_idx.iter().map(|&i| c_idx.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
        let p = ExactMatrix::from_rows(permuted).unwrap();
        prop_assert_eq!(p.rank(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), m.cols());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// ρ∘ρ = ρ, ρ∘σ = ρ and σ∘ρ = ρ on random polynomials over every corpus group.
    #[test]
    fn reynolds_idempotent_and_equivariant(which in 0usize..7, p in poly(2, 3, 4), q in poly(1, 3, 5), g_pick in any::<usize>()) {
        let (_, group) = &common::corpus()[which];
        let p = if group.dim() == 1 { q } else { p };
        let r = group.reynolds(&p).unwrap();
        prop_assert_eq!(group.reynolds(&r).unwrap(), r.clone());
        prop_assert!(group.is_invariant(&r).unwrap());
        let g = g_pick % group.order();
        prop_assert_eq!(group.reynolds(&group.act(g, &p).unwrap()).unwrap(), r.clone());
        prop_assert_eq!(group.act(g, &r).unwrap(), r);
    }
}

#[test]
fn action_axiom_on_all_pairs() {
    let samples = ["X1^3 + 2*X1*X2 - 7", "X2^2 - 1/3*X1", "X1^2*X2^2 + X2"];
    for (name, group) in common::corpus() {
        let m = group.dim();
        for s in samples {
            let p = parse_poly(s, 2, 1).unwrap();
            let p = if m == 1 {
                p.substitute(&[MultiPoly::var(1, 0), MultiPoly::var(1, 0)])
                    .unwrap()
            } else {
                p
            };
            for a in 0..group.order() {
                for b in 0..group.order() {
                    let lhs = group.act(group.product(a, b), &p).unwrap();
                    let rhs = group.act(a, &group.act(b, &p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{name}: elements {a}, {b}");
                }
                assert_eq!(group.act(group.identity_index(), &p).unwrap(), p);
                let back = group
                    .act(group.inverse(a), &group.act(a, &p).unwrap())
                    .unwrap();
                assert_eq!(back, p, "{name}: inverse of {a}");
            }
        }
    }
}

#[test]
fn molien_equals_projector_rank() {
    for (name, group) in common::corpus() {
        let molien = group.molien_series(12).unwrap();
        for (d, coeff) in molien.iter().enumerate() {
            assert_eq!(
                *coeff as usize,
                reynolds_matrix(&group, d as i64).rank(),
                "{name}, degree {d}"
            );
        }
    }
}

#[test]
fn koszul_strands_are_complexes() {
    let cases: Vec<(usize, Vec<&str>)> = vec![
        (2, vec!["X1", "X2"]),
        (2, vec!["X1^2 + X2^2", "X1*X2", "X1^2 - 3*X2^2"]),
        (1, vec!["X1^2", "X1^2"]),
        (3, vec!["X1*X2", "X2*X3", "X1^2 + X3^2", "X1"]),
    ];
    for (m, gens) in cases {
        let ring = PolynomialModule::new(Arc::new(InvariantSlices::new(common::trivial(m))));
        let f: Vec<Operator> = gens
            .iter()
            .map(|s| Operator::X(parse_poly(s, m, 1).unwrap()))
            .collect();
        for j in -1..8 {
            let strand = koszul_strand(&f, &ring, j, 0, f.len()).unwrap();
            assert!(strand.is_complex(), "{gens:?} at {j}");
        }
    }
}

/// dim H_i(f; R^G)_j equals the rank of the Reynolds projector on H_i(f; R)_j.
#[test]
fn koszul_homology_commutes_with_invariants() {
    let cases: Vec<(Arc<MatrixGroup>, Vec<&str>)> = vec![
        (common::minus_identity(), vec!["X1^2", "X2^2"]),
        (common::minus_identity(), vec!["X1^2", "X1*X2"]),
        (common::minus_identity(), vec!["X1*X2", "X1*X2"]),
        (common::swap(), vec!["X1 + X2", "X1*X2"]),
        (common::swap(), vec!["X1^2 + X2^2", "X1^2 + X2^2"]),
        (common::c3_diagonal(), vec!["X1*X2", "X1^3"]),
    ];
    for (group, gens) in cases {
        let m = group.dim();
        let idx = group.field_index().unwrap();
        let polys: Vec<MultiPoly> = gens
            .iter()
            .map(|s| parse_poly(s, m, idx).unwrap())
            .collect();
        let degs: Vec<i64> = polys
            .iter()
            .map(|p| p.homogeneous_degree().unwrap() as i64)
            .collect();
        let f: Vec<Operator> = polys.into_iter().map(Operator::X).collect();
        let full = PolynomialModule::new(Arc::new(InvariantSlices::new(common::trivial(m))));
        let inv = PolynomialModule::new(Arc::new(InvariantSlices::new(group.clone())));
        for j in 0..7 {
            let strand = koszul_strand(&f, &full, j, 0, f.len()).unwrap();
            let inv_strand = koszul_strand(&f, &inv, j, 0, f.len()).unwrap();
            assert!(strand.is_complex() && inv_strand.is_complex());
            for i in 0..=f.len() {
                // blocks of K_i in the strand's subset order
                let blocks: Vec<(i64, usize)> = subsets(f.len(), i)
                    .iter()
                    .map(|t| {
                        let d = j - t.iter().map(|&k| degs[k]).sum::<i64>();
                        (
                            d,
                            if d < 0 {
                                0
                            } else {
                                MonomialBasis::new(m, d as u32).len()
                            },
                        )
                    })
                    .collect();
                let p = block_diagonal(&group, &blocks);
                if i >= 1 {
                    let d = &strand.boundaries[i - 1];
                    let q = block_diagonal(&group, &strand_blocks(&degs, m, j, i - 1));
                    assert_eq!(mul(&q, d), mul(d, &p), "ρ commutes with the boundary");
                }
                let cycles = if i == 0 {
                    (0..strand.dims[0])
                        .map(|k| vec![(k, FieldElement::one())])
                        .collect()
                } else {
                    kernel_of(&strand.boundaries[i - 1].columns())
                };
                let mut e = Echelon::new();
                if i < f.len() {
                    for b in strand.boundaries[i].columns() {
                        e.insert(b);
                    }
                }
                let base = e.rank();
                for z in &cycles {
                    e.insert(p.apply(z));
                }
                assert_eq!(
                    e.rank() - base,
                    inv_strand.homology_dim(i),
                    "{gens:?}: H_{i} at {j}"
                );
            }
        }
    }
}

fn strand_blocks(degs: &[i64], m: usize, j: i64, p: usize) -> Vec<(i64, usize)> {
    subsets(degs.len(), p)
        .iter()
        .map(|t| {
            let d = j - t.iter().map(|&k| degs[k]).sum::<i64>();
            (
                d,
                if d < 0 {
                    0
                } else {
                    MonomialBasis::new(m, d as u32).len()
                },
            )
        })
        .collect()
}

/// p-subsets of 0..r in lexicographic order.
fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    let all: std::collections::BTreeSet<Vec<usize>> = (0u32..1 << r)
        .filter(|mask| mask.count_ones() as usize == p)
        .map(|mask| (0..r).filter(|k| mask & (1 << k) != 0).collect())
        .collect();
    all.into_iter().collect()
}

/// Čech stages: d∘d = 0, transitions are chain maps, and the Reynolds
/// projector commutes with boundaries and transitions.
#[test]
fn cech_stages_are_equivariant_complexes() {
    let cases: Vec<(Arc<MatrixGroup>, Vec<&str>)> = vec![
        (common::minus_identity(), vec!["X1^2", "X1*X2", "X2^2"]),
        (common::minus_identity(), vec!["X1^2"]),
        (common::swap(), vec!["X1 + X2", "X1*X2"]),
        (common::sign(), vec!["X1^2"]),
        (common::trivial(3), vec!["X1*X2", "X1*X3", "X2*X3"]),
    ];
    for (group, gens) in cases {
        let m = group.dim();
        let polys: Vec<MultiPoly> = gens.iter().map(|s| parse_poly(s, m, 1).unwrap()).collect();
        let engine = CechEngine::new(
            Arc::new(InvariantSlices::new(common::trivial(m))),
            &polys,
            CechPolicy::default(),
        )
        .unwrap();
        for i in 0..=polys.len() {
            for n in [-4i64, -1, 0, 2] {
                for t in 1..4u32 {
                    let s = t + 2;
                    let here = engine.stage_matrices(i, n, t, s).unwrap();
                    let next = engine.stage_matrices(i + 1, n, t, s).unwrap();
                    let later = engine.stage_matrices(i, n, s, s).unwrap();
                    assert!(
                        mul(&here.outgoing, &here.incoming).is_zero(),
                        "{gens:?}: d∘d at i={i} n={n} t={t}"
                    );
                    assert_eq!(
                        mul(&next.transition, &here.outgoing),
                        mul(&later.outgoing, &here.transition)
                    );
                    let p_here = block_diagonal(&group, &here.blocks_here);
                    let p_next = block_diagonal(&group, &here.blocks_next);
                    let p_later = block_diagonal(&group, &here.blocks_later);
                    assert_eq!(
                        mul(&p_next, &here.outgoing),
                        mul(&here.outgoing, &p_here),
                        "ρ∘d at i={i} n={n} t={t}"
                    );
                    assert_eq!(
                        mul(&p_later, &here.transition),
                        mul(&here.transition, &p_here)
                    );
                }
            }
        }
    }
}
