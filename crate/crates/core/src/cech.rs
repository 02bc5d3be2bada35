//! Graded components of local cohomology through truncated Čech complexes.
//!
//! For invariant generators h₁,…,h_r of an ideal of S = R^G, the Čech
//! complex of R on the h_k is G-equivariant and the invariant subcomplex
//! computes H^i_I(S). Stage t of the degree-n strand represents fractions
//! num / h_T^t with num ∈ (R_{n + t·deg h_T})^G. Stages form a directed
//! system under multiplication by h_T, and the component is the colimit.
//!
//! The colimit dimension is estimated from the observations
//! obs(t) = rank(H_t → H_{λt+w}), with w the confirmation window and λ the
//! stretch. Classes born at stage t can need a stage proportional to t to
//! die (for (xy, xz, yz) a pole of order 2t at stage t survives until stage
//! 2t), so the comparison stage grows with t. A run of w equal observations
//! gives finite(d), a run of w strictly increasing ones gives divergent,
//! and anything else up to t_max is reported as undetermined.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{InvariantSlices, MatrixGroup};
use crate::linalg::{kernel_of, normalize_vec, rank_of, Echelon, ExactMatrix, SparseVec};
use crate::poly::{count_monomials, MultiPoly};

/// Truncation policy for the colimit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CechPolicy {
    pub t_start: u32,
    /// Largest stage ever built (absolute, not relative to the start).
    pub t_max: u32,
    pub confirmation_window: u32,
    /// Stage t is compared with stage stretch·t + confirmation_window.
    pub stretch: u32,
    /// Largest total number of numerator monomials in one stage.
    pub monomial_budget: u128,
}

impl Default for CechPolicy {
    fn default() -> Self {
        CechPolicy {
            t_start: 1,
            t_max: 128,
            confirmation_window: 3,
            stretch: 2,
            monomial_budget: 250_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Finiteness {
    Finite { dim: u64 },
    Divergent,
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite { .. })
    }

    /// Nonzero or infinite.
    pub fn is_nonzero(&self) -> bool {
        !matches!(self, Finiteness::Finite { dim: 0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub t: u32,
    pub stage_dim: usize,
    pub transition_rank: usize,
}

/// A component verdict with its audit trail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDim {
    pub value: Finiteness,
    pub observations: Vec<Observation>,
    pub policy: CechPolicy,
}

impl ComponentDim {
    /// The stage at which the verdict was confirmed.
    pub fn confirmed_at(&self) -> u32 {
        self.observations.last().map_or(0, |o| o.t)
    }
}

/// Validates ideal generators: homogeneous and fixed by every group element.
/// Zero generators are dropped.
pub fn invariant_generators(gens: &[MultiPoly], group: &MatrixGroup) -> Result<Vec<MultiPoly>> {
    let mut out = Vec::new();
    for h in gens {
        if h.num_vars() != group.dim() {
            return Err(Error::VariableCount {
                left: group.dim(),
                right: h.num_vars(),
            });
        }
        if h.is_zero() {
            continue;
        }
        if !h.is_homogeneous() {
            return Err(Error::NotHomogeneous(h.to_string()));
        }
        if let Some((g, mono)) = group.invariance_witness(h)? {
            let witness = MultiPoly::monomial(mono, FieldElement::one()).to_string();
            return Err(Error::NotInvariant {
                generator: h.to_string(),
                element: g,
                witness,
            });
        }
        out.push(h.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Block {
    set: Vec<usize>,
    degree: i64,
    offset: usize,
    len: usize,
}

#[derive(Clone, Debug)]
struct Layout {
    blocks: Vec<Block>,
    index: HashMap<Vec<usize>, usize>,
    dim: usize,
}

#[derive(Clone, Debug)]
struct Stage {
    cocycles: Vec<SparseVec>,
    boundaries: Arc<Echelon>,
}

impl Stage {
    fn cohomology_dim(&self) -> usize {
        self.cocycles.len() - self.boundaries.rank()
    }
}

type SliceBasis = Arc<Vec<MultiPoly>>;

/// Čech computations for one group and one generator set.
pub struct CechEngine {
    slices: Arc<InvariantSlices>,
    gens: Vec<MultiPoly>,
    degs: Vec<u32>,
    policy: CechPolicy,
    bases: Mutex<HashMap<u32, SliceBasis>>,
    solvers: Mutex<HashMap<u32, Arc<Echelon>>>,
    powers: Mutex<HashMap<PowerKey, Arc<MultiPoly>>>,
}

/// (generator subset, exponent) of a cached product of powers.
type PowerKey = (Vec<usize>, u32);

impl CechEngine {
    pub fn new(
        slices: Arc<InvariantSlices>,
        gens: &[MultiPoly],
        policy: CechPolicy,
    ) -> Result<Self> {
        if policy.confirmation_window == 0 {
            return Err(Error::Invalid(
                "confirmation window must be positive".into(),
            ));
        }
        let gens = invariant_generators(gens, slices.group())?;
        let degs = gens
            .iter()
            .map(|h| h.homogeneous_degree().unwrap_or(0))
            .collect();
        Ok(CechEngine {
            slices,
            gens,
            degs,
            policy,
            bases: Mutex::new(HashMap::new()),
            solvers: Mutex::new(HashMap::new()),
            powers: Mutex::new(HashMap::new()),
        })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn policy(&self) -> &CechPolicy {
        &self.policy
    }

    pub fn group(&self) -> &MatrixGroup {
        self.slices.group()
    }

    pub fn num_vars(&self) -> usize {
        self.slices.group().dim()
    }

    /// Invariant basis polynomials of (R_d)^G.
    fn basis(&self, d: u32) -> Result<SliceBasis> {
        if let Some(b) = self.bases.lock().get(&d) {
            return Ok(b.clone());
        }
        let slice = self.slices.slice(d)?;
        let polys: Vec<MultiPoly> = slice.1.iter().map(|v| slice.0.polynomial(v)).collect();
        let b = Arc::new(polys);
        self.bases.lock().insert(d, b.clone());
        Ok(b)
    }

    /// Coordinates of an invariant polynomial of degree d in the invariant basis.
    fn coordinates(&self, d: u32, p: &MultiPoly) -> Result<SparseVec> {
        let slice = self.slices.slice(d)?;
        let v = slice.0.coordinates(p)?;
        if self.slices.group().is_trivial() {
            return Ok(v);
        }
        let solver = {
            let cached = self.solvers.lock().get(&d).cloned();
            match cached {
                Some(s) => s,
                None => {
                    let mut e = Echelon::new();
                    for (k, b) in slice.1.iter().enumerate() {
                        e.insert_tagged(b.clone(), vec![(k, FieldElement::one())]);
                    }
                    let e = Arc::new(e);
                    self.solvers.lock().insert(d, e.clone());
                    e
                }
            }
        };
        solver
            .solve(v)
            .ok_or_else(|| Error::Invalid(format!("{p} is not invariant")))
    }

    /// (∏_{k∈T} h_k)^e.
    fn power(&self, set: &[usize], e: u32) -> Arc<MultiPoly> {
        let key = (set.to_vec(), e);
        if let Some(p) = self.powers.lock().get(&key) {
            return p.clone();
        }
        let base = set.iter().fold(MultiPoly::one(self.num_vars()), |acc, &k| {
            &acc * &self.gens[k]
        });
        let p = Arc::new(base.pow(e));
        self.powers.lock().insert(key, p.clone());
        p
    }

    fn set_degree(&self, set: &[usize]) -> i64 {
        set.iter().map(|&k| self.degs[k] as i64).sum()
    }

    fn layout(&self, p: usize, n: i64, t: u32) -> Result<Layout> {
        let r = self.gens.len();
        let mut blocks = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        if p <= r {
            for set in subsets(r, p) {
                let degree = n + t as i64 * self.set_degree(&set);
                let len = if degree < 0 {
                    0
                } else {
                    self.basis(degree as u32)?.len()
                };
                index.insert(set.clone(), blocks.len());
                blocks.push(Block {
                    set,
                    degree,
                    offset,
                    len,
                });
                offset += len;
            }
        }
        Ok(Layout {
            blocks,
            index,
            dim: offset,
        })
    }

    fn check_budget(&self, i: usize, n: i64, t: u32) -> Result<()> {
        let r = self.gens.len();
        let mut total: u128 = 0;
        for p in i.saturating_sub(1)..=(i + 1).min(r) {
            for set in subsets(r, p) {
                total += count_monomials(self.num_vars(), n + t as i64 * self.set_degree(&set));
            }
        }
        if total > self.policy.monomial_budget {
            return Err(Error::ResourceLimit(format!(
                "stage t = {t} at degree {n} needs {total} numerator monomials (budget {})",
                self.policy.monomial_budget
            )));
        }
        Ok(())
    }

    /// Multiplies the block-`src` part of a cochain by `q`, placing the result
    /// in block `dst` of `target`, scaled by `sign`.
    fn push_product(
        &self,
        out: &mut Vec<(usize, FieldElement)>,
        coeffs: &[(usize, FieldElement)],
        src: &Block,
        q: &MultiPoly,
        dst: &Block,
        sign: &FieldElement,
    ) -> Result<()> {
        if coeffs.is_empty() || dst.len == 0 {
            return Ok(());
        }
        let basis = self.basis(src.degree as u32)?;
        let mut num = MultiPoly::zero(self.num_vars());
        for (j, c) in coeffs {
            num = num.try_add(&basis[*j].scale(c))?;
        }
        let prod = num.try_mul(q)?;
        for (k, c) in self.coordinates(dst.degree as u32, &prod)? {
            out.push((dst.offset + k, &c * sign));
        }
        Ok(())
    }

    /// Columns of the Čech differential C^p_t → C^{p+1}_t.
    fn differential(&self, t: u32, src: &Layout, dst: &Layout) -> Result<Vec<SparseVec>> {
        let r = self.gens.len();
        let mut cols = vec![Vec::new(); src.dim];
        for b in &src.blocks {
            for j in 0..b.len {
                let mut out = Vec::new();
                for k in (0..r).filter(|k| !b.set.contains(k)) {
                    let mut target: Vec<usize> = b.set.clone();
                    target.push(k);
                    target.sort_unstable();
                    let tb = &dst.blocks[dst.index[&target]];
                    let before = b.set.iter().filter(|&&l| l < k).count();
                    let sign = if before % 2 == 0 {
                        FieldElement::one()
                    } else {
                        -FieldElement::one()
                    };
                    let q = self.power(&[k], t);
                    self.push_product(&mut out, &[(j, FieldElement::one())], b, &q, tb, &sign)?;
                }
                cols[b.offset + j] = normalize_vec(out);
            }
        }
        Ok(cols)
    }

    fn stage(&self, i: usize, n: i64, t: u32) -> Result<Stage> {
        self.check_budget(i, n, t)?;
        let here = self.layout(i, n, t)?;
        let next = self.layout(i + 1, n, t)?;
        let cocycles = kernel_of(&self.differential(t, &here, &next)?);
        let mut boundaries = Echelon::new();
        if i > 0 {
            let prev = self.layout(i - 1, n, t)?;
            for col in self.differential(t, &prev, &here)? {
                boundaries.insert(col);
            }
        }
        Ok(Stage {
            cocycles,
            boundaries: Arc::new(boundaries),
        })
    }

    /// Maps a cochain of C^i at stage t to stage s ≥ t.
    fn transition(&self, i: usize, n: i64, v: &SparseVec, t: u32, s: u32) -> Result<SparseVec> {
        let src = self.layout(i, n, t)?;
        let dst = self.layout(i, n, s)?;
        self.transition_in(v, t, s, &src, &dst)
    }

    fn transition_in(
        &self,
        v: &SparseVec,
        t: u32,
        s: u32,
        src: &Layout,
        dst: &Layout,
    ) -> Result<SparseVec> {
        let mut out = Vec::new();
        for (bi, b) in src.blocks.iter().enumerate() {
            let part: Vec<(usize, FieldElement)> = v
                .iter()
                .filter(|(k, _)| *k >= b.offset && *k < b.offset + b.len)
                .map(|(k, c)| (k - b.offset, c.clone()))
                .collect();
            let q = self.power(&b.set, s - t);
            self.push_product(
                &mut out,
                &part,
                b,
                &q,
                &dst.blocks[bi],
                &FieldElement::one(),
            )?;
        }
        Ok(normalize_vec(out))
    }

    /// Multiplies a cochain of C^i (degree n, stage t) by an invariant form h.
    fn multiply(
        &self,
        i: usize,
        n: i64,
        v: &SparseVec,
        t: u32,
        h: &MultiPoly,
    ) -> Result<SparseVec> {
        let e = h.homogeneous_degree().unwrap_or(0) as i64;
        let src = self.layout(i, n, t)?;
        let dst = self.layout(i, n + e, t)?;
        let mut out = Vec::new();
        for (bi, b) in src.blocks.iter().enumerate() {
            let part: Vec<(usize, FieldElement)> = v
                .iter()
                .filter(|(k, _)| *k >= b.offset && *k < b.offset + b.len)
                .map(|(k, c)| (k - b.offset, c.clone()))
                .collect();
            self.push_product(&mut out, &part, b, h, &dst.blocks[bi], &FieldElement::one())?;
        }
        Ok(normalize_vec(out))
    }

    /// First observed stage: poles of total order −n must be representable,
    /// so for n < 0 every generator carries at least the power −n.
    pub fn first_stage(&self, n: i64) -> u32 {
        let graded = self.degs.iter().any(|&d| d > 0);
        let needed = if graded && n < 0 { -n } else { 0 };
        self.policy.t_start.max(needed as u32)
    }

    /// Comparison stage for observations made at stage t.
    pub fn target_stage(&self, t: u32) -> u32 {
        self.policy.stretch.max(1) * t + self.policy.confirmation_window
    }

    /// rank(H_t → H_s) for cocycles of stage t against boundaries at stage s.
    fn transition_rank(
        &self,
        i: usize,
        n: i64,
        from: &Stage,
        t: u32,
        to: &Stage,
        s: u32,
    ) -> Result<usize> {
        let src = self.layout(i, n, t)?;
        let dst = self.layout(i, n, s)?;
        let mut e = (*to.boundaries).clone();
        let base = e.rank();
        for z in &from.cocycles {
            e.insert(self.transition_in(z, t, s, &src, &dst)?);
        }
        Ok(e.rank() - base)
    }

    /// dim H^i_I(S)_n with its stabilization trail.
    pub fn component(&self, i: usize, n: i64) -> Result<ComponentDim> {
        let w = self.policy.confirmation_window;
        let mut stages: HashMap<u32, Stage> = HashMap::new();
        let mut observations: Vec<Observation> = Vec::new();
        let mut t = self.first_stage(n);
        while self.target_stage(t) <= self.policy.t_max {
            let s = self.target_stage(t);
            for u in [t, s] {
                if let std::collections::hash_map::Entry::Vacant(v) = stages.entry(u) {
                    v.insert(self.stage(i, n, u)?);
                }
            }
            let rank = self.transition_rank(i, n, &stages[&t], t, &stages[&s], s)?;
            observations.push(Observation {
                t,
                stage_dim: stages[&t].cohomology_dim(),
                transition_rank: rank,
            });
            stages.remove(&t);
            stages.remove(&s);
            if observations.len() >= w as usize {
                let tail = &observations[observations.len() - w as usize..];
                let value = if tail
                    .iter()
                    .all(|o| o.transition_rank == tail[0].transition_rank)
                {
                    Some(Finiteness::Finite {
                        dim: tail[0].transition_rank as u64,
                    })
                } else if w > 1
                    && tail
                        .windows(2)
                        .all(|p| p[0].transition_rank < p[1].transition_rank)
                {
                    Some(Finiteness::Divergent)
                } else {
                    None
                };
                if let Some(value) = value {
                    return Ok(ComponentDim {
                        value,
                        observations,
                        policy: self.policy,
                    });
                }
            }
            t += 1;
        }
        Err(Error::Undetermined {
            degree: n,
            t_max: self.policy.t_max,
            trail: observations
                .iter()
                .map(|o| (o.t, o.stage_dim, o.transition_rank))
                .collect(),
        })
    }

    /// Stage representatives of a basis of a finite component, valid at stage `s`.
    fn representatives(
        &self,
        i: usize,
        n: i64,
        t: u32,
        s: u32,
    ) -> Result<(Vec<SparseVec>, Arc<Echelon>)> {
        let from = self.stage(i, n, t)?;
        let to = self.stage(i, n, s)?;
        let mut e = (*to.boundaries).clone();
        let mut reps = Vec::new();
        for z in &from.cocycles {
            let img = self.transition(i, n, z, t, s)?;
            if e.insert(img.clone()) {
                reps.push(img);
            }
        }
        Ok((reps, to.boundaries.clone()))
    }

    /// Matrix of multiplication by an invariant form h from M_n to M_{n+deg h},
    /// in bases of stabilized stage representatives.
    pub fn multiplication_action(
        &self,
        h: &MultiPoly,
        i: usize,
        n: i64,
    ) -> Result<MultiplicationAction> {
        invariant_generators(std::slice::from_ref(h), self.group())?;
        let e = h.homogeneous_degree().unwrap_or(0) as i64;
        let src = self.component(i, n)?;
        let dst = self.component(i, n + e)?;
        let (Finiteness::Finite { dim: d_src }, Finiteness::Finite { dim: d_dst }) =
            (src.value, dst.value)
        else {
            let degree = if src.value.is_finite() { n + e } else { n };
            return Err(Error::Divergent { degree });
        };
        let t_src = src.confirmed_at();
        let s = self.target_stage(t_src.max(dst.confirmed_at()));
        let (src_reps, _) = self.representatives(i, n, t_src, s)?;
        let (dst_reps, dst_bound) = self.representatives(i, n + e, dst.confirmed_at(), s)?;
        if src_reps.len() as u64 != d_src || dst_reps.len() as u64 != d_dst {
            return Err(Error::Invalid(
                "stage representatives did not stabilize".into(),
            ));
        }
        let mut solver = (*dst_bound).clone();
        for (k, v) in dst_reps.iter().enumerate() {
            solver.insert_tagged(v.clone(), vec![(k, FieldElement::one())]);
        }
        let mut cols = Vec::with_capacity(src_reps.len());
        for v in &src_reps {
            let img = self.multiply(i, n, v, s, h)?;
            cols.push(
                solver
                    .solve(img)
                    .ok_or_else(|| Error::Invalid("image outside the stabilized span".into()))?,
            );
        }
        let matrix = ExactMatrix::from_columns(d_dst as usize, &cols);
        let rank = matrix.rank();
        Ok(MultiplicationAction {
            source_dim: d_src as usize,
            target_dim: d_dst as usize,
            rank,
            matrix,
        })
    }

    /// dim H⁰_J(M)_n for M = H^i_I(S) and J generated by invariant forms: the
    /// part of the finite component M_n killed by a power of J. Observation N
    /// records the kernel of v ↦ (g^N v)_g; the kernel only grows with N and is
    /// confirmed once it fills M_n or repeats over the confirmation window.
    pub fn torsion_component(&self, j: &[MultiPoly], i: usize, n: i64) -> Result<ComponentDim> {
        let j = invariant_generators(j, self.group())?;
        let src = self.component(i, n)?;
        let Finiteness::Finite { dim } = src.value else {
            return Err(Error::Divergent { degree: n });
        };
        let d = dim as usize;
        let w = self.policy.confirmation_window.max(1) as usize;
        let mut observations: Vec<Observation> = Vec::new();
        for power in 1..=self.policy.t_max {
            let kernel = if d == 0 || j.is_empty() {
                d
            } else {
                let mut cols: Vec<SparseVec> = vec![Vec::new(); d];
                let mut offset = 0;
                for g in &j {
                    let a = self.multiplication_action(&g.pow(power), i, n)?;
                    for (k, col) in a.matrix.columns().into_iter().enumerate() {
                        cols[k].extend(col.into_iter().map(|(r, c)| (r + offset, c)));
                    }
                    offset += a.target_dim;
                }
                d - rank_of(&cols)
            };
            observations.push(Observation {
                t: power,
                stage_dim: d,
                transition_rank: kernel,
            });
            let tail = &observations[observations.len().saturating_sub(w)..];
            if kernel == d || (tail.len() == w && tail.iter().all(|o| o.transition_rank == kernel))
            {
                return Ok(ComponentDim {
                    value: Finiteness::Finite { dim: kernel as u64 },
                    observations,
                    policy: self.policy,
                });
            }
        }
        Err(Error::Undetermined {
            degree: n,
            t_max: self.policy.t_max,
            trail: observations
                .iter()
                .map(|o| (o.t, o.stage_dim, o.transition_rank))
                .collect(),
        })
    }

    /// Stage-level injectivity of h on the image of H_t → H_s, s the comparison
    /// stage of t: returns the
    /// rank of that image and the rank of its image under h. Usable on
    /// divergent components.
    pub fn stage_multiplication_ranks(
        &self,
        h: &MultiPoly,
        i: usize,
        n: i64,
        t: u32,
    ) -> Result<(usize, usize)> {
        invariant_generators(std::slice::from_ref(h), self.group())?;
        let e = h.homogeneous_degree().unwrap_or(0) as i64;
        let s = self.target_stage(t);
        let from = self.stage(i, n, t)?;
        let to = self.stage(i, n, s)?;
        let to_h = self.stage(i, n + e, s)?;
        let mut plain = (*to.boundaries).clone();
        let mut moved = (*to_h.boundaries).clone();
        let (b0, b1) = (plain.rank(), moved.rank());
        for z in &from.cocycles {
            let img = self.transition(i, n, z, t, s)?;
            moved.insert(self.multiply(i, n, &img, s, h)?);
            plain.insert(img);
        }
        Ok((plain.rank() - b0, moved.rank() - b1))
    }

    /// Boundary and transition matrices of one stage in monomial coordinates,
    /// for equivariance audits. Only meaningful for the trivial-group engine.
    pub fn stage_matrices(&self, i: usize, n: i64, t: u32, s: u32) -> Result<StageMatrices> {
        let prev = self.layout(i.saturating_sub(1), n, t)?;
        let here = self.layout(i, n, t)?;
        let next = self.layout(i + 1, n, t)?;
        let later = self.layout(i, n, s)?;
        let into = if i == 0 {
            Vec::new()
        } else {
            self.differential(t, &prev, &here)?
        };
        let out = self.differential(t, &here, &next)?;
        let trans: Vec<SparseVec> = (0..here.dim)
            .map(|j| self.transition_in(&vec![(j, FieldElement::one())], t, s, &here, &later))
            .collect::<Result<_>>()?;
        let blocks = |l: &Layout| {
            l.blocks
                .iter()
                .map(|b| (b.degree, b.len))
                .collect::<Vec<_>>()
        };
        Ok(StageMatrices {
            incoming: ExactMatrix::from_columns(here.dim, &into),
            outgoing: ExactMatrix::from_columns(next.dim, &out),
            transition: ExactMatrix::from_columns(later.dim, &trans),
            blocks_prev: if i == 0 { Vec::new() } else { blocks(&prev) },
            blocks_here: blocks(&here),
            blocks_next: blocks(&next),
            blocks_later: blocks(&later),
        })
    }
}

/// Matrices of one Čech stage; block lists give (numerator degree, length).
#[derive(Clone, Debug)]
pub struct StageMatrices {
    pub incoming: ExactMatrix,
    pub outgoing: ExactMatrix,
    pub transition: ExactMatrix,
    pub blocks_prev: Vec<(i64, usize)>,
    pub blocks_here: Vec<(i64, usize)>,
    pub blocks_next: Vec<(i64, usize)>,
    pub blocks_later: Vec<(i64, usize)>,
}

#[derive(Clone, Debug)]
pub struct MultiplicationAction {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub matrix: ExactMatrix,
}

impl MultiplicationAction {
    pub fn is_injective(&self) -> bool {
        self.rank == self.source_dim
    }
}

fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, r, p, &mut cur, &mut out);
    out
}

/// dim H^i_{(h)}(R)_n for the polynomial ring itself.
pub fn cech_component(
    h: &[MultiPoly],
    i: usize,
    n: i64,
    policy: CechPolicy,
) -> Result<ComponentDim> {
    let m = h
        .first()
        .map(MultiPoly::num_vars)
        .ok_or_else(|| Error::Invalid("no generators given".into()))?;
    let slices = Arc::new(InvariantSlices::new(Arc::new(MatrixGroup::trivial(m))));
    CechEngine::new(slices, h, policy)?.component(i, n)
}

/// dim H^i_I(S)_n for S = R^G and I generated by invariant forms.
pub fn invariant_cech_component(
    group: Arc<MatrixGroup>,
    gens: &[MultiPoly],
    i: usize,
    n: i64,
    policy: CechPolicy,
) -> Result<ComponentDim> {
    CechEngine::new(Arc::new(InvariantSlices::new(group)), gens, policy)?.component(i, n)
}

/// Outcome of one component inside a larger report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Finite { dim: u64 },
    Divergent,
    Undetermined { reason: String },
}

impl Outcome {
    pub fn from_result(r: &Result<ComponentDim>) -> Outcome {
        match r {
            Ok(c) => match c.value {
                Finiteness::Finite { dim } => Outcome::Finite { dim },
                Finiteness::Divergent => Outcome::Divergent,
            },
            Err(e) => Outcome::Undetermined {
                reason: e.to_string(),
            },
        }
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, Outcome::Undetermined { .. })
    }

    /// Some(true) for nonzero or divergent, Some(false) for zero.
    pub fn is_nonzero(&self) -> Option<bool> {
        match self {
            Outcome::Finite { dim } => Some(*dim != 0),
            Outcome::Divergent => Some(true),
            Outcome::Undetermined { .. } => None,
        }
    }

    pub fn dim(&self) -> Option<u64> {
        match self {
            Outcome::Finite { dim } => Some(*dim),
            _ => None,
        }
    }
}

/// Three-valued check result; undetermined never counts as a pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
}

impl Status {
    /// Pass only if every part passes; any failure dominates undetermined.
    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Pass;
        for s in items {
            match s {
                Status::Fail => return Status::Fail,
                Status::Undetermined => out = Status::Undetermined,
                Status::Pass => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub t: i64,
    pub n: i64,
    pub outcome: Outcome,
    pub observations: Vec<Observation>,
}

/// An exact polynomial in t fitted to a run of values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailFit {
    /// Coefficients of 1, t, t², … as reduced fractions.
    pub coefficients: Vec<String>,
    /// None for the zero polynomial.
    pub degree: Option<usize>,
    pub t_from: i64,
    pub t_to: i64,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetProfile {
    pub l: i64,
    pub c: i64,
    pub m: usize,
    pub entries: Vec<CosetEntry>,
    /// All determined entries share one finiteness flag, and none is undetermined.
    pub dichotomy: Status,
    /// Longest t-interval on which Δ^m of the dims vanishes (finite profiles).
    pub vanishing_window: Option<(i64, i64)>,
    pub alpha: Option<TailFit>,
    pub beta: Option<TailFit>,
    /// Fit degrees ≤ m − 1 on both tails.
    pub growth: Status,
}

/// Exact interpolant through (t0, v0), (t0+1, v1), … via Newton forward differences.
pub fn fit_polynomial(t0: i64, values: &[i64]) -> TailFit {
    let len = values.len();
    let mut diffs: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let mut leading = Vec::with_capacity(len);
    for k in 0..len {
        leading.push(diffs[0].clone());
        diffs = (0..len - k - 1)
            .map(|j| &diffs[j + 1] - &diffs[j])
            .collect();
        if diffs.is_empty() {
            break;
        }
    }
    // Σ_k Δ^k(t0)·C(t − t0, k), expanded in powers of t
    let mut coeffs = vec![BigRational::zero(); len.max(1)];
    let mut basis = vec![BigRational::one()];
    let mut fact = BigInt::one();
    for (k, lead) in leading.iter().enumerate() {
        if k > 0 {
            let shift = BigRational::from_integer(BigInt::from(t0 + k as i64 - 1));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (j, b) in basis.iter().enumerate() {
                next[j + 1] += b;
                next[j] -= b * &shift;
            }
            basis = next;
            fact *= BigInt::from(k);
        }
        let scale = BigRational::new(lead.clone(), fact.clone());
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] += b * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let degree = if coeffs.iter().all(Zero::is_zero) {
        None
    } else {
        Some(coeffs.len() - 1)
    };
    let formula = format_in_t(&coeffs);
    TailFit {
        coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        degree,
        t_from: t0,
        t_to: t0 + len as i64 - 1,
        formula,
    }
}

fn format_in_t(coeffs: &[BigRational]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigRational::zero();
        let a = if neg { -c } else { c.clone() };
        let var = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        let body = if k == 0 {
            a.to_string()
        } else if a.is_one() {
            var
        } else {
            format!("{a}*{var}")
        };
        let sign = match (parts.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        parts.push(format!("{sign}{body}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.concat()
    }
}

/// Δ^m of a sequence.
pub fn finite_difference(values: &[i64], m: usize) -> Vec<i64> {
    let mut v = values.to_vec();
    for _ in 0..m {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

/// Computes every component of one coset n = l + c·t, t ∈ [t_lo, t_hi], in parallel.
pub fn coset_profile(
    engine: &CechEngine,
    i: usize,
    l: i64,
    c: i64,
    t_lo: i64,
    t_hi: i64,
) -> Result<CosetProfile> {
    if l < 0 || l >= c {
        return Err(Error::Invalid(format!(
            "residue {l} outside [0, {}]",
            c - 1
        )));
    }
    let ts: Vec<i64> = (t_lo..=t_hi).collect();
    let entries: Vec<CosetEntry> = ts
        .par_iter()
        .map(|&t| {
            let n = l + c * t;
            let r = engine.component(i, n);
            let observations = r
                .as_ref()
                .map(|c| c.observations.clone())
                .unwrap_or_default();
            CosetEntry {
                t,
                n,
                outcome: Outcome::from_result(&r),
                observations,
            }
        })
        .collect();
    Ok(analyze_coset(l, c, engine.num_vars(), entries))
}

/// Dichotomy and growth analysis of computed coset entries (sorted by t).
pub fn analyze_coset(l: i64, c: i64, m: usize, entries: Vec<CosetEntry>) -> CosetProfile {
    let undetermined = entries.iter().any(|e| e.outcome.is_undetermined());
    let finite: Vec<bool> = entries
        .iter()
        .filter(|e| !e.outcome.is_undetermined())
        .map(|e| e.outcome.dim().is_some())
        .collect();
    let uniform = finite.windows(2).all(|w| w[0] == w[1]);
    let dichotomy = if !uniform {
        Status::Fail
    } else if undetermined {
        Status::Undetermined
    } else {
        Status::Pass
    };
    let mut profile = CosetProfile {
        l,
        c,
        m,
        entries,
        dichotomy,
        vanishing_window: None,
        alpha: None,
        beta: None,
        growth: if dichotomy == Status::Pass {
            Status::Pass
        } else {
            Status::Undetermined
        },
    };
    let dims: Option<Vec<i64>> = profile
        .entries
        .iter()
        .map(|e| e.outcome.dim().map(|d| d as i64))
        .collect();
    let (Some(dims), Status::Pass) = (dims, dichotomy) else {
        return profile;
    };
    if dims.len() < m + 1 {
        profile.growth = Status::Undetermined;
        return profile;
    }
    let t0 = profile.entries[0].t;
    let delta = finite_difference(&dims, m);
    // runs of zeros in Δ^m; index j covers dims[j..=j+m]
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (j, d) in delta.iter().enumerate() {
        match (d == &0, start) {
            (true, None) => start = Some(j),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| j - s > b - a + 1) {
                    best = Some((s, j - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        let j = delta.len();
        if best.is_none_or(|(a, b)| j - s > b - a + 1) {
            best = Some((s, j - 1));
        }
    }
    profile.vanishing_window = best.map(|(a, b)| (t0 + a as i64, t0 + (b + m) as i64));
    // α: the run of zero differences reaching the right end; β: the left end
    let right = delta.iter().rev().take_while(|d| **d == 0).count();
    let left = delta.iter().take_while(|d| **d == 0).count();
    let alpha_from = if right > 0 {
        dims.len() - right - m
    } else {
        dims.len() - m - 1
    };
    let beta_to = if left > 0 { left + m - 1 } else { m };
    let alpha = fit_polynomial(t0 + alpha_from as i64, &dims[alpha_from..]);
    let beta = fit_polynomial(t0, &dims[..=beta_to]);
    let ok = |f: &TailFit| f.degree.is_none_or(|d| d < m);
    profile.growth = if ok(&alpha) && ok(&beta) {
        Status::Pass
    } else {
        Status::Fail
    };
    profile.alpha = Some(alpha);
    profile.beta = Some(beta);
    profile
}
