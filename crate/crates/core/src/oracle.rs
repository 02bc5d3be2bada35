//! Independent oracles for local cohomology components.
//!
//! [`monomial_component`] handles squarefree monomial ideals with a
//! Hochster-type formula. For generators h₁,…,h_r with supports A_k and a
//! multidegree a with negative part F = {j : a_j < 0}, the Čech complex in
//! degree a is the relative cochain complex of the full simplex on [r]
//! modulo
//!
//! Γ_F = { T ⊆ [r] : F ⊄ ∪_{k∈T} A_k },
//!
//! so dim H^i_J(R)_a = dim H̃^{i−2}(Γ_F). It depends on a only through F,
//! which makes infinitude a finite case analysis over sign patterns.
//!
//! Reduced cohomology conventions: the void complex (no faces at all) has
//! H̃^k = 0 for every k; the complex {∅} has H̃^{−1} = K and nothing else.
//!
//! [`hsop_limit_component`] computes H^m at a homogeneous system of
//! parameters as the direct limit of (S/(f₁^t,…,f_m^t))_{n+tmc} under
//! multiplication by f₁⋯f_m, by plain linear algebra on ideal slices.

use serde::{Deserialize, Serialize};

use crate::cech::{CechPolicy, ComponentDim, Finiteness, Observation};
use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::linalg::{Echelon, ExactMatrix, SparseVec};
use crate::poly::{binomial, MonomialBasis, MultiPoly};

/// A simplicial complex on vertices 0..n, stored as its full face list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertices: usize,
    faces: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds from an explicit face list, checking closure under subsets.
    pub fn from_faces(vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        faces.sort();
        faces.dedup();
        let set: std::collections::HashSet<&Vec<usize>> = faces.iter().collect();
        for f in &faces {
            if f.iter().any(|&v| v >= vertices) {
                return Err(Error::Invalid(format!(
                    "face {f:?} uses a vertex outside 0..{vertices}"
                )));
            }
            for skip in 0..f.len() {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                if !set.contains(&sub) {
                    return Err(Error::Invalid(format!(
                        "face {f:?} is missing its facet {sub:?}"
                    )));
                }
            }
        }
        Ok(SimplicialComplex { vertices, faces })
    }

    /// The full simplex on `vertices` vertices (including the empty face).
    pub fn simplex(vertices: usize) -> Self {
        let faces = (0u32..1 << vertices)
            .map(|mask| (0..vertices).filter(|&v| mask & (1 << v) != 0).collect())
            .collect();
        Self::from_faces(vertices, faces).expect("closed")
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    fn faces_of_dim(&self, k: i64) -> Vec<&Vec<usize>> {
        self.faces
            .iter()
            .filter(|f| f.len() as i64 == k + 1)
            .collect()
    }

    /// dim H̃^k(Γ; K) for k ≥ −1.
    pub fn reduced_cohomology(&self, k: i64) -> usize {
        if k < -1 {
            return 0;
        }
        let here = self.faces_of_dim(k);
        let coboundary_rank = |k: i64| -> usize {
            let src = self.faces_of_dim(k);
            let dst = self.faces_of_dim(k + 1);
            if src.is_empty() || dst.is_empty() {
                return 0;
            }
            let index: std::collections::HashMap<&Vec<usize>, usize> =
                src.iter().enumerate().map(|(i, f)| (*f, i)).collect();
            let mut m = ExactMatrix::zeros(dst.len(), src.len());
            for (row, f) in dst.iter().enumerate() {
                for skip in 0..f.len() {
                    let sub: Vec<usize> = f
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    m.set(row, index[&sub], crate::field::FieldElement::from_int(sign));
                }
            }
            m.rank()
        };
        here.len() - coboundary_rank(k) - coboundary_rank(k - 1)
    }
}

/// Supports of squarefree monomial generators; zero generators are dropped.
fn squarefree_supports(gens: &[MultiPoly]) -> Result<(usize, Vec<u32>)> {
    let m = gens
        .first()
        .map(MultiPoly::num_vars)
        .ok_or_else(|| Error::Invalid("no generators given".into()))?;
    if m > 31 {
        return Err(Error::Unsupported("more than 31 variables".into()));
    }
    let mut supports = Vec::new();
    for g in gens {
        if g.num_vars() != m {
            return Err(Error::VariableCount {
                left: m,
                right: g.num_vars(),
            });
        }
        if g.is_zero() {
            continue;
        }
        if g.len() != 1 {
            return Err(Error::Invalid(format!("{g} is not a monomial")));
        }
        let (mono, _) = g.terms().next().expect("one term");
        if mono.0.iter().any(|&e| e > 1) {
            return Err(Error::Invalid(format!("{g} is not squarefree")));
        }
        supports.push(
            mono.0
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e == 1)
                .fold(0u32, |acc, (j, _)| acc | (1 << j)),
        );
    }
    Ok((m, supports))
}

/// Γ_F on the generator index set.
pub fn hochster_complex(supports: &[u32], f: u32) -> SimplicialComplex {
    let r = supports.len();
    let faces = (0u64..1 << r)
        .filter(|&mask| {
            let union = (0..r)
                .filter(|&k| mask & (1 << k) != 0)
                .fold(0u32, |acc, k| acc | supports[k]);
            f & !union != 0
        })
        .map(|mask| (0..r).filter(|&k| mask & (1 << k) != 0).collect())
        .collect();
    SimplicialComplex::from_faces(r, faces).expect("Γ_F is closed under subsets")
}

/// dim H^i_J(R)_n for a squarefree monomial ideal J ⊆ K[X₁,…,X_m].
pub fn monomial_component(gens: &[MultiPoly], i: usize, n: i64) -> Result<Finiteness> {
    let (m, supports) = squarefree_supports(gens)?;
    let count_nonneg = |n: i64| {
        if n < 0 {
            0
        } else {
            binomial((n + m as i64 - 1) as u128, (m - 1) as u128)
        }
    };
    if supports.is_empty() {
        // J = 0: H^0 = R and nothing else
        let dim = if i == 0 { count_nonneg(n) } else { 0 };
        return Ok(Finiteness::Finite { dim: dim as u64 });
    }
    let full = (1u32 << m) - 1;
    let mut total: u128 = 0;
    for f in 0..=full {
        let h = hochster_complex(&supports, f).reduced_cohomology(i as i64 - 2) as u128;
        if h == 0 {
            continue;
        }
        if f == 0 {
            total += h * count_nonneg(n);
        } else if f == full {
            let k = -n - 1;
            if k >= m as i64 - 1 {
                total += h * binomial(k as u128, (m - 1) as u128);
            }
        } else {
            // both signs present: infinitely many multidegrees of total degree n
            return Ok(Finiteness::Divergent);
        }
    }
    Ok(Finiteness::Finite { dim: total as u64 })
}

fn invariant_slice(group: &MatrixGroup, d: i64) -> Result<(MonomialBasis, Vec<SparseVec>)> {
    let basis = MonomialBasis::new(group.dim(), d.max(0) as u32);
    if d < 0 {
        return Ok((basis, Vec::new()));
    }
    let inv = group.invariant_basis(&basis)?;
    Ok((basis, inv))
}

/// Span of (f₁^t,…,f_m^t)R ∩ R^G in degree `d`, in monomial coordinates.
fn ideal_slice(
    group: &MatrixGroup,
    powers: &[MultiPoly],
    tc: i64,
    d: i64,
) -> Result<(MonomialBasis, Echelon)> {
    let (basis, _) = invariant_slice(group, d)?;
    let (lower, inv) = invariant_slice(group, d - tc)?;
    let mut e = Echelon::new();
    for p in powers {
        for v in &inv {
            e.insert(basis.coordinates(&p.try_mul(&lower.polynomial(v))?)?);
        }
    }
    Ok((basis, e))
}

/// dim H^m_{(f)}(S)_n as the stabilized rank of the transition maps
/// (S/(f^t))_{n+tmc} → (S/(f^{t+w}))_{n+(t+w)mc}. Divergence is impossible
/// for an h.s.o.p., so anything but a stable run is undetermined.
pub fn hsop_limit_component(
    group: &MatrixGroup,
    f: &[MultiPoly],
    c: u64,
    n: i64,
    policy: CechPolicy,
) -> Result<ComponentDim> {
    let m = f.len() as i64;
    let step = m * c as i64;
    let w = policy.confirmation_window;
    let product = f
        .iter()
        .fold(MultiPoly::one(group.dim()), |acc, g| &acc * g);
    let shift = product.pow(w);
    let mut t = policy.t_start.max(if n < 0 {
        ((-n + step - 1) / step) as u32
    } else {
        0
    });
    let mut observations = Vec::new();
    while t + w <= policy.t_max {
        let d = n + t as i64 * step;
        let d_next = d + w as i64 * step;
        let powers: Vec<MultiPoly> = f.iter().map(|g| g.pow(t)).collect();
        let powers_next: Vec<MultiPoly> = f.iter().map(|g| g.pow(t + w)).collect();
        let (basis, here) = ideal_slice(group, &powers, t as i64 * c as i64, d)?;
        let (basis_next, mut there) =
            ideal_slice(group, &powers_next, (t + w) as i64 * c as i64, d_next)?;
        let (_, inv) = invariant_slice(group, d)?;
        let stage_dim = inv.len() - here.rank();
        let base = there.rank();
        for v in &inv {
            there.insert(basis_next.coordinates(&basis.polynomial(v).try_mul(&shift)?)?);
        }
        observations.push(Observation {
            t,
            stage_dim,
            transition_rank: there.rank() - base,
        });
        if observations.len() >= w as usize {
            let tail = &observations[observations.len() - w as usize..];
            if tail
                .iter()
                .all(|o| o.transition_rank == tail[0].transition_rank)
            {
                let dim = tail[0].transition_rank as u64;
                return Ok(ComponentDim {
                    value: Finiteness::Finite { dim },
                    observations,
                    policy,
                });
            }
        }
        t += 1;
    }
    Err(Error::Undetermined {
        degree: n,
        t_max: policy.t_max,
        trail: observations
            .iter()
            .map(|o| (o.t, o.stage_dim, o.transition_rank))
            .collect(),
    })
}
