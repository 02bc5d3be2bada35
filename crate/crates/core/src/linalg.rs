//! Exact linear algebra: dense matrices for small group elements and an
//! incremental sparse echelon form for everything large.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Sparse vector: (index, value) pairs sorted by index with no zero values.
pub type SparseVec = Vec<(usize, FieldElement)>;

/// Returns `a - s * b`.
pub fn sub_scaled(
    a: &[(usize, FieldElement)],
    s: &FieldElement,
    b: &[(usize, FieldElement)],
) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(s * &b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v -= &(s * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &[(usize, FieldElement)], s: &FieldElement) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c * s)).collect()
}

/// Sorts, merges repeated indices and drops zeros.
pub fn normalize_vec(mut v: Vec<(usize, FieldElement)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += &c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Row echelon form built one vector at a time. Each stored row carries a
/// tag recording it as a combination of the inserted vectors' tags.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(SparseVec, SparseVec)>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The stored echelon rows: a basis of the span.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|(r, _)| r)
    }

    pub fn into_basis(self) -> Vec<SparseVec> {
        self.rows.into_iter().map(|(r, _)| r).collect()
    }

    /// Eliminates leading entries of `v` against stored pivots. The result is
    /// zero iff `v` lies in the span; the returned tag then satisfies
    /// `v_original_tag_combination = 0`.
    pub fn reduce(&self, mut v: SparseVec, mut tag: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((lead, c)) = v.first().cloned() {
            let Some(&r) = self.pivots.get(&lead) else {
                break;
            };
            let (row, rtag) = &self.rows[r];
            v = sub_scaled(&v, &c, row);
            if !rtag.is_empty() {
                tag = sub_scaled(&tag, &c, rtag);
            }
        }
        (v, tag)
    }

    /// Inserts `v`; returns `None` when it was independent, otherwise the
    /// reduced tag (a relation among inserted vectors).
    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Option<SparseVec> {
        let (v, tag) = self.reduce(v, tag);
        match v.first() {
            None => Some(tag),
            Some((lead, c)) => {
                let inv = c.inv().expect("nonzero pivot");
                let lead = *lead;
                let row = scale_vec(&v, &inv);
                let rtag = scale_vec(&tag, &inv);
                self.pivots.insert(lead, self.rows.len());
                self.rows.push((row, rtag));
                None
            }
        }
    }

    /// Inserts without tracking; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let before = self.rank();
        self.insert_tagged(v, Vec::new());
        self.rank() > before
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v, Vec::new()).0.is_empty()
    }

    /// Expresses `v` in terms of the tags of the inserted vectors: returns
    /// `Some(coords)` with v = Σ coords[k]·(vector tagged k), if v is in the span.
    pub fn solve(&self, v: SparseVec) -> Option<SparseVec> {
        let (rest, tag) = self.reduce(v, Vec::new());
        if rest.is_empty() {
            Some(tag.into_iter().map(|(i, c)| (i, -c)).collect())
        } else {
            None
        }
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of<'a>(vectors: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Kernel basis of the linear map sending basis vector j to `columns[j]`.
pub fn kernel_of(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Some(rel) = e.insert_tagged(col.clone(), vec![(j, FieldElement::one())]) {
            out.push(rel);
        }
    }
    out
}

/// Dense exact matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![FieldElement::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| FieldElement::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    /// Builds a `rows × columns.len()` matrix from sparse columns.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> SparseVec {
        (0..self.rows)
            .filter_map(|i| {
                let v = self.get(i, j);
                (!v.is_zero()).then(|| (i, v.clone()))
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> SparseVec {
        (0..self.cols)
            .filter_map(|j| {
                let v = self.get(i, j);
                (!v.is_zero()).then(|| (j, v.clone()))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = &out.data[i * out.cols + j] + &(a * b);
                        out.data[i * out.cols + j] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[(usize, FieldElement)]) -> SparseVec {
        let mut out = Vec::new();
        for i in 0..self.rows {
            let mut acc = FieldElement::zero();
            for (j, c) in v {
                let a = self.get(i, *j);
                if !a.is_zero() {
                    acc += &(a * c);
                }
            }
            if !acc.is_zero() {
                out.push((i, acc));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.columns())
    }

    /// Rank and a basis of the right kernel, by exact elimination.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<FieldElement>>) {
        let cols = self.columns();
        let kernel = kernel_of(&cols);
        let rank = self.cols - kernel.len();
        let dense = kernel
            .into_iter()
            .map(|v| {
                let mut d = vec![FieldElement::zero(); self.cols];
                for (i, c) in v {
                    d[i] = c;
                }
                d
            })
            .collect();
        (rank, dense)
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = a.get(col, col).inv().unwrap();
            for j in 0..n {
                let v = a.get(col, j) * &s;
                a.set(col, j, v);
                let w = inv.get(col, j) * &s;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &(&f * a.get(col, j));
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &(&f * inv.get(col, j));
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Option<FieldElement> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = FieldElement::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Some(FieldElement::zero());
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let pinv = p.inv().unwrap();
            for r in col + 1..n {
                let f = a.get(r, col) * &pinv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &(&f * a.get(col, j));
                    a.set(r, j, v);
                }
            }
        }
        Some(det)
    }

    /// True when every column has exactly one nonzero entry (a permutation
    /// matrix times an invertible diagonal).
    pub fn is_monomial(&self) -> bool {
        self.is_square()
            && (0..self.cols).all(|j| {
                (0..self.rows)
                    .filter(|&i| !self.get(i, j).is_zero())
                    .count()
                    == 1
            })
            && (0..self.rows).all(|i| {
                (0..self.cols)
                    .filter(|&j| !self.get(i, j).is_zero())
                    .count()
                    == 1
            })
    }

    pub fn entries(&self) -> impl Iterator<Item = &FieldElement> {
        self.data.iter()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    #[test]
    fn proportional_rows() {
        let m = ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![fe(-2), fe(1)]]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (rank, ker) = ExactMatrix::identity(3).rank_kernel();
        assert_eq!(rank, 3);
        assert!(ker.is_empty());
    }

    #[test]
    fn single_row_kernel() {
        // x + y + z = 0: free variables y, z give (-1, 1, 0) and (-1, 0, 1).
        let m = ExactMatrix::from_i64(&[&[1, 1, 1]]);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(
            ker,
            vec![vec![fe(-1), fe(1), fe(0)], vec![fe(-1), fe(0), fe(1)]]
        );
        for k in &ker {
            let v: SparseVec = k
                .iter()
                .cloned()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            assert!(m.apply(&v).is_empty());
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ExactMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), ExactMatrix::identity(2));
        assert_eq!(m.determinant().unwrap(), fe(1));
        assert!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]])
            .inverse()
            .is_none());
        assert!(m.is_monomial());
    }

    #[test]
    fn echelon_solve() {
        let mut e = Echelon::new();
        e.insert_tagged(vec![(0, fe(1)), (1, fe(1))], vec![(0, fe(1))]);
        e.insert_tagged(vec![(1, fe(1))], vec![(1, fe(1))]);
        // (2, 5) = 2*(1,1) + 3*(0,1)
        let coords = e.solve(vec![(0, fe(2)), (1, fe(5))]).unwrap();
        assert_eq!(coords, vec![(0, fe(2)), (1, fe(3))]);
        assert!(e.solve(vec![(2, fe(1))]).is_none());
    }
}
