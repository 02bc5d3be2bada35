//! Finite matrix groups and their linear action on polynomials.
//!
//! Convention: an element σ with matrix Φ(σ) acts by
//! σ·X_j = Σ_i Φ(σ)_{ij} X_i (column j is the image of X_j), extended to
//! polynomials as a ring automorphism. With this convention
//! (στ)·p = σ·(τ·p).

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_rational::BigRational;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{Echelon, ExactMatrix, SparseVec};
use crate::poly::{Monomial, MonomialBasis, MultiPoly};

/// Default cap on the order of a generated group.
pub const DEFAULT_GROUP_CAP: usize = 720;

/// A monomial matrix acts as X_j ↦ scale_j · X_{target_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
struct MonomialAction {
    target: Vec<usize>,
    scale: Vec<FieldElement>,
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    elements: Vec<ExactMatrix>,
    identity_index: usize,
    cayley: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    monomial: Option<Vec<MonomialAction>>,
}

/// Generates the group spanned by `generators`, failing if its order exceeds `cap`.
pub fn close_group(generators: &[ExactMatrix], cap: usize) -> Result<MatrixGroup> {
    let dim = generators.first().map_or(0, ExactMatrix::rows);
    for (k, g) in generators.iter().enumerate() {
        if !g.is_square() || g.rows() != dim {
            return Err(Error::Dimension(format!(
                "generator {k} is {}x{}, expected {dim}x{dim}",
                g.rows(),
                g.cols()
            )));
        }
        if g.determinant().is_none_or(|d| d.is_zero()) {
            return Err(Error::NonInvertibleGenerator { index: k });
        }
        let mut field = FieldElement::one();
        for e in g.entries() {
            field
                .common_index(e)
                .map_err(|err| Error::Invalid(format!("generator {k}: {err}")))?;
            if e.index() > 1 {
                field = e.clone();
            }
        }
    }
    let id = ExactMatrix::identity(dim);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<ExactMatrix, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for g in generators {
            let prod = elements[a].try_mul(g)?;
            if !index.contains_key(&prod) {
                if elements.len() >= cap {
                    return Err(Error::GroupCapExceeded { cap });
                }
                index.insert(prod.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(prod);
            }
        }
    }
    MatrixGroup::from_elements(dim, elements, Some(&index))
}

impl MatrixGroup {
    pub fn trivial(dim: usize) -> Self {
        MatrixGroup::from_elements(dim, vec![ExactMatrix::identity(dim)], None)
            .expect("trivial group")
    }

    fn from_elements(
        dim: usize,
        elements: Vec<ExactMatrix>,
        index: Option<&HashMap<ExactMatrix, usize>>,
    ) -> Result<Self> {
        let owned;
        let index = match index {
            Some(i) => i,
            None => {
                owned = elements
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, m)| (m, i))
                    .collect();
                &owned
            }
        };
        let n = elements.len();
        let mut cayley = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = elements[a].try_mul(&elements[b])?;
                cayley[a][b] = *index.get(&p).ok_or_else(|| {
                    Error::Invalid("element set is not closed under products".into())
                })?;
            }
        }
        let id = ExactMatrix::identity(dim);
        let identity_index = *index
            .get(&id)
            .ok_or_else(|| Error::Invalid("identity missing".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| cayley[a][b] == identity_index)
                    .expect("finite group has inverses")
            })
            .collect();
        let monomial = elements.iter().all(ExactMatrix::is_monomial).then(|| {
            elements
                .iter()
                .map(|m| {
                    let mut target = vec![0; dim];
                    let mut scale = vec![FieldElement::zero(); dim];
                    for j in 0..dim {
                        let i = (0..dim).find(|&i| !m.get(i, j).is_zero()).unwrap();
                        target[j] = i;
                        scale[j] = m.get(i, j).clone();
                    }
                    MonomialAction { target, scale }
                })
                .collect()
        });
        Ok(MatrixGroup {
            dim,
            elements,
            identity_index,
            cayley,
            inverses,
            monomial,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ExactMatrix] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &ExactMatrix {
        &self.elements[g]
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Index of the product `a * b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// True when every element permutes the variables up to scalars.
    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    /// Cyclotomic index of the entries (1 for rational groups).
    pub fn field_index(&self) -> Result<u32> {
        let mut acc = FieldElement::one();
        for m in &self.elements {
            for e in m.entries() {
                acc.common_index(e)?;
                if e.index() > 1 {
                    acc = e.clone();
                }
            }
        }
        Ok(acc.index())
    }

    /// |G|!, or `None` on overflow.
    pub fn factorial_order(&self) -> Option<u64> {
        (1..=self.order() as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
    }

    /// σ·p under the column convention.
    pub fn act(&self, g: usize, p: &MultiPoly) -> Result<MultiPoly> {
        if p.num_vars() != self.dim {
            return Err(Error::VariableCount {
                left: self.dim,
                right: p.num_vars(),
            });
        }
        if g == self.identity_index {
            return Ok(p.clone());
        }
        if let Some(actions) = &self.monomial {
            let act = &actions[g];
            let mut out = MultiPoly::zero(self.dim);
            for (m, c) in p.terms() {
                let (mm, s) = act.apply(m);
                out.add_term(mm, &(c * &s));
            }
            return Ok(out);
        }
        let m = &self.elements[g];
        let images: Vec<MultiPoly> = (0..self.dim)
            .map(|j| {
                MultiPoly::from_terms(
                    self.dim,
                    (0..self.dim).map(|i| (Monomial::var(self.dim, i), m.get(i, j).clone())),
                )
            })
            .collect();
        p.substitute(&images)
    }

    /// Action on a Laurent monomial X^e (negative exponents allowed); only
    /// defined for monomial groups. Returns the image monomial and its scalar.
    pub fn act_laurent(&self, g: usize, e: &[i64]) -> Result<(Vec<i64>, FieldElement)> {
        let actions = self
            .monomial
            .as_ref()
            .ok_or_else(|| Error::Unsupported("Laurent action requires a monomial group".into()))?;
        let act = &actions[g];
        let mut out = vec![0i64; self.dim];
        let mut s = FieldElement::one();
        for (j, &ej) in e.iter().enumerate() {
            out[act.target[j]] += ej;
            let f = if ej >= 0 {
                act.scale[j].pow(ej as u32)
            } else {
                act.scale[j].inv().unwrap().pow((-ej) as u32)
            };
            s = &s * &f;
        }
        Ok((out, s))
    }

    /// Reynolds operator (1/|G|) Σ_σ σ(p).
    pub fn reynolds(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if self.is_trivial() {
            return Ok(p.clone());
        }
        let mut acc = MultiPoly::zero(self.dim);
        for g in 0..self.order() {
            acc = acc.try_add(&self.act(g, p)?)?;
        }
        acc.try_scale(&self.inverse_order())
    }

    pub fn inverse_order(&self) -> FieldElement {
        FieldElement::from_ratio(1, self.order() as i64)
    }

    /// Returns the first (element, monomial) witnessing that `p` is not invariant.
    pub fn invariance_witness(&self, p: &MultiPoly) -> Result<Option<(usize, Monomial)>> {
        for g in 0..self.order() {
            let q = self.act(g, p)?;
            if &q != p {
                let diff = q.try_add(&-p)?;
                let (m, _) = diff.terms().next().expect("nonzero difference");
                return Ok(Some((g, m.clone())));
            }
        }
        Ok(None)
    }

    pub fn is_invariant(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.invariance_witness(p)?.is_none())
    }

    /// Basis of (R_n)^G in monomial coordinates (echelon form).
    pub fn invariant_basis(&self, basis: &MonomialBasis) -> Result<Vec<SparseVec>> {
        if self.is_trivial() {
            return Ok((0..basis.len())
                .map(|i| vec![(i, FieldElement::one())])
                .collect());
        }
        let mut e = Echelon::new();
        for m in basis.monomials() {
            let r = self.reynolds(&MultiPoly::monomial(m.clone(), FieldElement::one()))?;
            e.insert(basis.coordinates(&r)?);
        }
        Ok(e.into_basis())
    }

    /// dim_K (R_n)^G as the rank of the Reynolds projector on R_n.
    pub fn invariant_slice_dim(&self, n: u32) -> Result<usize> {
        Ok(self
            .invariant_basis(&MonomialBasis::new(self.dim, n))?
            .len())
    }

    /// Coefficients 0..=D of the Molien series (1/|G|) Σ_σ 1/det(I − zσ).
    pub fn molien_series(&self, degree_bound: usize) -> Result<Vec<u64>> {
        let mut total = vec![FieldElement::zero(); degree_bound + 1];
        for m in &self.elements {
            let cp = characteristic_polynomial(m);
            // det(I - zA) = Σ_k c_k z^(m-k): reversed characteristic polynomial
            let d: Vec<FieldElement> = cp.iter().rev().cloned().collect();
            let mut inv = vec![FieldElement::zero(); degree_bound + 1];
            inv[0] = FieldElement::one();
            for j in 1..=degree_bound {
                let mut acc = FieldElement::zero();
                for i in 1..=j.min(d.len() - 1) {
                    acc += &(&d[i] * &inv[j - i]);
                }
                inv[j] = -acc;
            }
            for (t, v) in total.iter_mut().zip(&inv) {
                *t += v;
            }
        }
        let s = self.inverse_order();
        total
            .into_iter()
            .map(|v| {
                let r = (&v * &s)
                    .as_rational()
                    .ok_or_else(|| Error::Invalid("non-rational Molien coefficient".into()))?;
                if !r.is_integer() || r < BigRational::from_integer(0.into()) {
                    return Err(Error::Invalid(format!(
                        "Molien coefficient {r} is not a natural number"
                    )));
                }
                u64::try_from(r.to_integer())
                    .map_err(|_| Error::Invalid("Molien coefficient overflow".into()))
            })
            .collect()
    }

    /// The contragredient group {(Φ(σ)^{-1})^T}, indexed like `self`.
    pub fn contragredient(&self) -> MatrixGroup {
        let elements: Vec<ExactMatrix> = self
            .elements
            .iter()
            .map(|m| m.inverse().expect("group element").transpose())
            .collect();
        MatrixGroup::from_elements(self.dim, elements, None)
            .expect("contragredient of a group is a group")
    }
}

impl MonomialAction {
    fn apply(&self, m: &Monomial) -> (Monomial, FieldElement) {
        let mut out = vec![0u32; m.0.len()];
        let mut s = FieldElement::one();
        for (j, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            out[self.target[j]] += e;
            if !self.scale[j].is_one() {
                s = &s * &self.scale[j].pow(e);
            }
        }
        (Monomial(out), s)
    }
}

/// Coefficients c_0..c_m of det(λI − A) by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &ExactMatrix) -> Vec<FieldElement> {
    let n = a.rows();
    let mut c = vec![FieldElement::zero(); n + 1];
    c[n] = FieldElement::one();
    let mut mk = ExactMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.try_mul(&mk).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let amk = a.try_mul(&mk).expect("square");
        let mut tr = FieldElement::zero();
        for i in 0..n {
            tr += amk.get(i, i);
        }
        c[n - k] = -(&tr * &FieldElement::from_ratio(1, k as i64));
    }
    c
}

/// Per-degree cache of invariant bases; safe for concurrent readers.
#[derive(Debug)]
pub struct InvariantSlices {
    group: Arc<MatrixGroup>,
    bases: Mutex<HashMap<u32, Arc<InvariantSlice>>>,
}

/// Monomial basis of R_d with coordinates of a basis of R^G_d.
pub type InvariantSlice = (MonomialBasis, Vec<SparseVec>);

impl InvariantSlices {
    pub fn new(group: Arc<MatrixGroup>) -> Self {
        InvariantSlices {
            group,
            bases: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<MatrixGroup> {
        self.group.clone()
    }

    /// Monomial basis of R_d and the invariant basis vectors of (R_d)^G.
    pub fn slice(&self, d: u32) -> Result<Arc<InvariantSlice>> {
        if let Some(s) = self.bases.lock().get(&d) {
            return Ok(s.clone());
        }
        let basis = MonomialBasis::new(self.group.dim(), d);
        let inv = self.group.invariant_basis(&basis)?;
        let entry = Arc::new((basis, inv));
        self.bases.lock().insert(d, entry.clone());
        Ok(entry)
    }
}
