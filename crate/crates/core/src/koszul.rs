//! Graded Koszul complexes on degreewise-finite graded modules.
//!
//! A module is presented slice by slice through [`GradedSliceModule`]:
//! the dimension of each component M_n and the matrices of multiplication
//! by homogeneous operators. Strands of K(f; M) are assembled lazily at a
//! single internal degree.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::InvariantSlices;
use crate::linalg::{rank_of, Echelon, ExactMatrix, SparseVec};
use crate::poly::{MonomialBasis, MultiPoly};

/// A homogeneous operator: a polynomial in the variables X (degree +d) or
/// in the dual variables ∂ (degree −d). Dual polynomials are stored with
/// positive exponents in the ∂-variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    X(MultiPoly),
    D(MultiPoly),
}

impl Operator {
    pub fn poly(&self) -> &MultiPoly {
        match self {
            Operator::X(p) | Operator::D(p) => p,
        }
    }

    /// Internal degree; ∂-operators count negatively.
    pub fn degree(&self) -> Result<i64> {
        let p = self.poly();
        let d = match p.homogeneous_degree() {
            Some(d) => d as i64,
            None if p.is_zero() => 0,
            None => return Err(Error::NotHomogeneous(p.to_string())),
        };
        Ok(match self {
            Operator::X(_) => d,
            Operator::D(_) => -d,
        })
    }
}

/// A graded module known through its finite slices.
pub trait GradedSliceModule: Sync {
    fn num_vars(&self) -> usize;

    /// dim_K M_n, or [`Error::Divergent`] for an infinite-dimensional slice.
    fn slice_dim(&self, n: i64) -> Result<usize>;

    /// Matrix of `op` from M_n to M_{n + deg op}, of shape
    /// dim M_{n+deg op} × dim M_n in the module's fixed slice bases.
    fn action(&self, op: &Operator, n: i64) -> Result<ExactMatrix>;
}

/// One strand of a chain complex at a fixed internal degree.
#[derive(Clone, Debug)]
pub struct GradedComplexSlice {
    pub degree: i64,
    /// dims[p] = dim of the p-th term.
    pub dims: Vec<usize>,
    /// boundaries[p - 1] is the map from term p to term p − 1.
    pub boundaries: Vec<ExactMatrix>,
}

impl GradedComplexSlice {
    pub fn boundary_rank(&self, p: usize) -> usize {
        if p == 0 || p > self.boundaries.len() {
            0
        } else {
            self.boundaries[p - 1].rank()
        }
    }

    pub fn homology_dim(&self, p: usize) -> usize {
        self.dims[p] - self.boundary_rank(p) - self.boundary_rank(p + 1)
    }

    /// Exact check that consecutive boundaries compose to zero.
    pub fn is_complex(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].try_mul(&w[1]).map(|m| m.is_zero()).unwrap_or(false))
    }
}

fn subsets_of_size(r: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for k in start..r {
            cur.push(k);
            rec(k + 1, r, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, p, &mut Vec::new(), &mut out);
    out
}

/// Assembles the Koszul strand K(f; M) at internal degree `j` for the homological
/// degrees in `range` (inclusive), with all boundaries between them.
pub fn koszul_strand(
    f: &[Operator],
    module: &dyn GradedSliceModule,
    j: i64,
    lo: usize,
    hi: usize,
) -> Result<GradedComplexSlice> {
    let r = f.len();
    let degs: Vec<i64> = f.iter().map(Operator::degree).collect::<Result<_>>()?;
    let hi = hi.min(r);
    let mut dims = vec![0; r + 1];
    let mut blocks: Vec<Vec<(Vec<usize>, i64, usize)>> = vec![Vec::new(); r + 1];
    for p in lo..=hi {
        let mut offset = 0;
        for t in subsets_of_size(r, p) {
            let d = j - t.iter().map(|&k| degs[k]).sum::<i64>();
            let dim = module.slice_dim(d)?;
            blocks[p].push((t, d, offset));
            offset += dim;
        }
        dims[p] = offset;
    }
    let mut boundaries = Vec::new();
    for p in 1..=r {
        if p <= lo || p > hi {
            boundaries.push(ExactMatrix::zeros(dims[p - 1], dims[p]));
            continue;
        }
        let mut m = ExactMatrix::zeros(dims[p - 1], dims[p]);
        for (t, d, off) in &blocks[p] {
            for (pos, &k) in t.iter().enumerate() {
                let sub: Vec<usize> = t.iter().copied().filter(|&x| x != k).collect();
                let (_, _, toff) = blocks[p - 1]
                    .iter()
                    .find(|b| b.0 == sub)
                    .expect("face block");
                let a = module.action(&f[k], *d)?;
                let sign = if pos % 2 == 0 {
                    FieldElement::one()
                } else {
                    -FieldElement::one()
                };
                for col in 0..a.cols() {
                    for row in 0..a.rows() {
                        let v = a.get(row, col);
                        if !v.is_zero() {
                            m.set(toff + row, off + col, v * &sign);
                        }
                    }
                }
            }
        }
        boundaries.push(m);
    }
    Ok(GradedComplexSlice {
        degree: j,
        dims,
        boundaries,
    })
}

/// dim_K H_i(f; M)_j.
pub fn koszul_homology_slice(
    f: &[Operator],
    module: &dyn GradedSliceModule,
    i: usize,
    j: i64,
) -> Result<usize> {
    if i > f.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: f.len(),
        });
    }
    let lo = i.saturating_sub(1);
    let strand = koszul_strand(f, module, j, lo, i + 1)?;
    Ok(strand.dims[i] - strand.boundary_rank(i) - strand.boundary_rank(i + 1))
}

/// Whether ⊕_k M_{j − deg f_k} → M_j is onto, i.e. H_0(f; M)_j = 0.
pub fn strand_surjectivity(f: &[Operator], module: &dyn GradedSliceModule, j: i64) -> Result<bool> {
    Ok(koszul_homology_slice(f, module, 0, j)? == 0)
}

/// The polynomial ring R, or its invariant subring R^G, as a graded module
/// over itself. Slice bases are the (echelon) invariant bases of R_n.
pub struct PolynomialModule {
    slices: Arc<InvariantSlices>,
}

impl PolynomialModule {
    pub fn new(slices: Arc<InvariantSlices>) -> Self {
        PolynomialModule { slices }
    }

    /// Coordinates of a vector of R_d (monomial coordinates) in the invariant basis.
    fn invariant_coordinates(&self, d: u32, v: SparseVec) -> Result<SparseVec> {
        let slice = self.slices.slice(d)?;
        if self.slices.group().is_trivial() {
            return Ok(v);
        }
        let mut e = Echelon::new();
        for (k, b) in slice.1.iter().enumerate() {
            e.insert_tagged(b.clone(), vec![(k, FieldElement::one())]);
        }
        e.solve(v)
            .ok_or_else(|| Error::Invalid("image is not invariant".into()))
    }
}

impl GradedSliceModule for PolynomialModule {
    fn num_vars(&self) -> usize {
        self.slices.group().dim()
    }

    fn slice_dim(&self, n: i64) -> Result<usize> {
        if n < 0 {
            return Ok(0);
        }
        Ok(self.slices.slice(n as u32)?.1.len())
    }

    fn action(&self, op: &Operator, n: i64) -> Result<ExactMatrix> {
        let Operator::X(h) = op else {
            return Err(Error::Unsupported(
                "differential operators on the polynomial ring".into(),
            ));
        };
        let e = op.degree()?;
        let target = n + e;
        let src_dim = self.slice_dim(n)?;
        let dst_dim = self.slice_dim(target)?;
        if src_dim == 0 || dst_dim == 0 || h.is_zero() {
            return Ok(ExactMatrix::zeros(dst_dim, src_dim));
        }
        let group = self.slices.group();
        if !group.is_trivial() && !group.is_invariant(h)? {
            return Err(Error::Invalid(format!("{h} is not invariant")));
        }
        let src = self.slices.slice(n as u32)?;
        let dst = self.slices.slice(target as u32)?;
        let mut cols = Vec::with_capacity(src_dim);
        for b in &src.1 {
            let prod = &src.0.polynomial(b) * h;
            let v = dst.0.coordinates(&prod)?;
            cols.push(self.invariant_coordinates(target as u32, v)?);
        }
        Ok(ExactMatrix::from_columns(dst_dim, &cols))
    }
}

/// The top local cohomology H^m_𝔪(R) (the inverse system K[X1⁻¹,…,Xm⁻¹]·(X1⋯Xm)⁻¹)
/// or its G-invariants for a monomial group. Component n ≤ −m has basis
/// X^{−a} with a ≥ (1,…,1) and |a| = −n. X-operators lower the
/// pole order (terms with a pole order reaching 0 vanish); ∂-operators
/// differentiate.
pub struct InverseSystemModule {
    slices: Arc<InvariantSlices>,
}

impl InverseSystemModule {
    pub fn new(slices: Arc<InvariantSlices>) -> Result<Self> {
        if !slices.group().is_monomial() {
            return Err(Error::Unsupported(
                "inverse system invariants need a monomial group".into(),
            ));
        }
        Ok(InverseSystemModule { slices })
    }

    fn m(&self) -> usize {
        self.slices.group().dim()
    }

    /// Basis of component n: pole vectors a (all ≥ 1) and the invariant basis
    /// vectors in their coordinates.
    fn component(&self, n: i64) -> Result<Option<(MonomialBasis, Vec<SparseVec>)>> {
        let m = self.m() as i64;
        if n > -m {
            return Ok(None);
        }
        // shifted exponents b = a − 1 range over ℕ^m with |b| = −n − m
        let basis = MonomialBasis::new(self.m(), (-n - m) as u32);
        let group = self.slices.group();
        if group.is_trivial() {
            let inv = (0..basis.len())
                .map(|i| vec![(i, FieldElement::one())])
                .collect();
            return Ok(Some((basis, inv)));
        }
        let mut e = Echelon::new();
        for mono in basis.monomials() {
            let a: Vec<i64> = mono.0.iter().map(|&b| -(b as i64) - 1).collect();
            let mut acc: Vec<(usize, FieldElement)> = Vec::new();
            for g in 0..group.order() {
                let (img, s) = group.act_laurent(g, &a)?;
                let b = crate::poly::Monomial(img.iter().map(|&x| (-x - 1) as u32).collect());
                acc.push((basis.position(&b).expect("pole orders preserved"), s));
            }
            e.insert(crate::linalg::normalize_vec(acc));
        }
        Ok(Some((basis, e.into_basis())))
    }
}

impl GradedSliceModule for InverseSystemModule {
    fn num_vars(&self) -> usize {
        self.m()
    }

    fn slice_dim(&self, n: i64) -> Result<usize> {
        Ok(self.component(n)?.map_or(0, |c| c.1.len()))
    }

    fn action(&self, op: &Operator, n: i64) -> Result<ExactMatrix> {
        let e = op.degree()?;
        let src = self.component(n)?;
        let dst = self.component(n + e)?;
        let (Some(src), Some(dst)) = (src, dst) else {
            return Ok(ExactMatrix::zeros(
                self.slice_dim(n + e)?,
                self.slice_dim(n)?,
            ));
        };
        let check_group = match op {
            Operator::X(_) => self.slices.group().clone(),
            Operator::D(_) => self.slices.group().contragredient(),
        };
        if !check_group.is_trivial() && !check_group.is_invariant(op.poly())? {
            return Err(Error::Invalid(format!(
                "operator {} is not invariant",
                op.poly()
            )));
        }
        let mut solver = Echelon::new();
        for (k, b) in dst.1.iter().enumerate() {
            solver.insert_tagged(b.clone(), vec![(k, FieldElement::one())]);
        }
        let mut cols = Vec::with_capacity(src.1.len());
        for v in &src.1 {
            let mut out: Vec<(usize, FieldElement)> = Vec::new();
            for (i, c) in v {
                let a: Vec<i64> = src.0.monomials()[*i]
                    .0
                    .iter()
                    .map(|&b| b as i64 + 1)
                    .collect();
                for (mono, coef) in op.poly().terms() {
                    let (poles, scalar) = match op {
                        Operator::X(_) => {
                            let poles: Vec<i64> = a
                                .iter()
                                .zip(&mono.0)
                                .map(|(&ak, &ek)| ak - ek as i64)
                                .collect();
                            if poles.iter().any(|&p| p < 1) {
                                continue;
                            }
                            (poles, FieldElement::one())
                        }
                        Operator::D(_) => {
                            let mut s = FieldElement::one();
                            for (&ak, &ek) in a.iter().zip(&mono.0) {
                                // ∂^e X^{-a} = (−a)(−a−1)⋯(−a−e+1) X^{−a−e}
                                for r in 0..ek as i64 {
                                    s = &s * &FieldElement::from_int(-ak - r);
                                }
                            }
                            (
                                a.iter()
                                    .zip(&mono.0)
                                    .map(|(&ak, &ek)| ak + ek as i64)
                                    .collect(),
                                s,
                            )
                        }
                    };
                    let b = crate::poly::Monomial(poles.iter().map(|&p| (p - 1) as u32).collect());
                    let pos = dst.0.position(&b).expect("degree bookkeeping");
                    out.push((pos, &(c * coef) * &scalar));
                }
            }
            let out = crate::linalg::normalize_vec(out);
            cols.push(
                solver
                    .solve(out)
                    .ok_or_else(|| Error::Invalid("image left the invariant subspace".into()))?,
            );
        }
        Ok(ExactMatrix::from_columns(dst.1.len(), &cols))
    }
}

/// Rank of a family of columns; re-exported for callers assembling strands by hand.
pub fn column_rank(cols: &[SparseVec]) -> usize {
    rank_of(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{close_group, MatrixGroup};
    use crate::text::parse_poly;

    fn ring(m: usize) -> PolynomialModule {
        PolynomialModule::new(Arc::new(InvariantSlices::new(Arc::new(
            MatrixGroup::trivial(m),
        ))))
    }

    fn x(s: &str, m: usize) -> Operator {
        Operator::X(parse_poly(s, m, 1).unwrap())
    }

    #[test]
    fn variables_are_regular() {
        let r = ring(2);
        let f = [x("X1", 2), x("X2", 2)];
        for j in -2..6 {
            assert_eq!(
                koszul_homology_slice(&f, &r, 0, j).unwrap(),
                usize::from(j == 0)
            );
            assert_eq!(koszul_homology_slice(&f, &r, 1, j).unwrap(), 0);
            assert_eq!(koszul_homology_slice(&f, &r, 2, j).unwrap(), 0);
        }
    }

    #[test]
    fn repeated_square_has_h1() {
        // 0 → R(−4) → R(−2)² → R → 0 on K[x]: H_1 at degree 2 is spanned by (1, −1)
        let r = ring(1);
        let f = [x("X1^2", 1), x("X1^2", 1)];
        assert_eq!(koszul_homology_slice(&f, &r, 1, 2).unwrap(), 1);
        assert_eq!(koszul_homology_slice(&f, &r, 1, 3).unwrap(), 1);
        assert_eq!(koszul_homology_slice(&f, &r, 2, 4).unwrap(), 0);
        assert!(koszul_homology_slice(&f, &r, 3, 4).is_err());
    }

    #[test]
    fn strands_are_complexes() {
        let r = ring(2);
        let f = [x("X1^2 + X2^2", 2), x("X1*X2", 2), x("X1 ^2", 2)];
        for j in 0..7 {
            let s = koszul_strand(&f, &r, j, 0, 3).unwrap();
            assert!(s.is_complex());
        }
    }

    #[test]
    fn surjectivity() {
        let r = ring(2);
        let f = [x("X1", 2), x("X2", 2)];
        assert!(strand_surjectivity(&f, &r, 3).unwrap());
        assert!(!strand_surjectivity(&f, &r, 0).unwrap());
    }

    #[test]
    fn inverse_system_veronese() {
        let g = close_group(&[ExactMatrix::from_i64(&[&[-1, 0], &[0, -1]])], 10).unwrap();
        let slices = Arc::new(InvariantSlices::new(Arc::new(g)));
        let m = InverseSystemModule::new(slices).unwrap();
        let dims: Vec<usize> = (-8..=0).map(|n| m.slice_dim(n).unwrap()).collect();
        assert_eq!(dims, vec![7, 0, 5, 0, 3, 0, 1, 0, 0]);
        // x² : M_{−4} → M_{−2} kills X^{-1}Y^{-3}, X^{-2}Y^{-2}
        let a = m.action(&x("X1^2", 2), -4).unwrap();
        assert_eq!((a.rows(), a.cols(), a.rank()), (1, 3, 1));
        // the dual strand (M_{−4})² → M_{−6} through two invariant ∂-quadrics
        let g1 = Operator::D(parse_poly("X1^2 + 3*X1*X2 - X2^2", 2, 1).unwrap());
        let g2 = Operator::D(parse_poly("2*X1^2 - X1*X2 + 5*X2^2", 2, 1).unwrap());
        assert!(strand_surjectivity(&[g1, g2], &m, -6).unwrap());
    }
}
