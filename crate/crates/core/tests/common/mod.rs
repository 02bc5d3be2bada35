#![allow(dead_code)]

use std::sync::Arc;

use lclab_core::{close_group, ExactMatrix, FieldElement, MatrixGroup};

pub fn trivial(m: usize) -> Arc<MatrixGroup> {
    Arc::new(MatrixGroup::trivial(m))
}

pub fn sign() -> Arc<MatrixGroup> {
    Arc::new(close_group(&[ExactMatrix::from_i64(&[&[-1]])], 10).unwrap())
}

pub fn minus_identity() -> Arc<MatrixGroup> {
    Arc::new(close_group(&[ExactMatrix::from_i64(&[&[-1, 0], &[0, -1]])], 10).unwrap())
}

pub fn swap() -> Arc<MatrixGroup> {
    Arc::new(close_group(&[ExactMatrix::from_i64(&[&[0, 1], &[1, 0]])], 10).unwrap())
}

/// diag(ζ, ζ²) over ℚ(ζ₃).
pub fn c3_diagonal() -> Arc<MatrixGroup> {
    let z = FieldElement::zeta(3);
    let m = ExactMatrix::from_rows(vec![
        vec![z.clone(), FieldElement::zero()],
        vec![FieldElement::zero(), &z * &z],
    ])
    .unwrap();
    Arc::new(close_group(&[m], 10).unwrap())
}

pub fn rotation() -> Arc<MatrixGroup> {
    Arc::new(close_group(&[ExactMatrix::from_i64(&[&[0, -1], &[1, 0]])], 10).unwrap())
}

/// The five groups with a feasible h.s.o.p. search, plus the rotation group.
pub fn corpus() -> Vec<(&'static str, Arc<MatrixGroup>)> {
    vec![
        ("trivial-1", trivial(1)),
        ("trivial-2", trivial(2)),
        ("sign", sign()),
        ("minus-identity", minus_identity()),
        ("swap", swap()),
        ("c3-diagonal", c3_diagonal()),
        ("rotation", rotation()),
    ]
}
