//! Linear isomorphisms that put a cone into the normal forms used by the
//! witness recursion. Every constructor re-checks its postconditions exactly.

use num_traits::{One, Signed, Zero};

use super::{analyze, facets_of, HRep, VRep};
use crate::error::{Error, Result};
use crate::exact::lp::{LinearProgram, LpOutcome, Relation, VarBound};
use crate::exact::rat::{dot, rat, rat_vec, Rat, RatVector};
use crate::exact::{solve_rational, RatMatrix, Solution};

/// Corners of the standard square cross-section, in cyclic order.
pub const BASE_SQUARE: [[i64; 3]; 4] = [[1, -1, 1], [-1, -1, 1], [-1, 1, 1], [1, 1, 1]];

/// `x ↦ T·x` together with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearIso {
    t: RatMatrix,
    t_inv: RatMatrix,
}

impl LinearIso {
    pub fn new(t: RatMatrix) -> Result<Self> {
        let t_inv = t
            .inverse()
            .ok_or_else(|| Error::PreconditionViolated("linear map is singular".into()))?;
        Ok(Self { t, t_inv })
    }

    /// Checks `T·T_inv = I` exactly.
    pub fn from_parts(t: RatMatrix, t_inv: RatMatrix) -> Result<Self> {
        if t.rows() != t.cols() || t_inv.rows() != t.rows() || t_inv.cols() != t.cols() || !t.mul(&t_inv).is_identity() {
            return Err(Error::Verification("T·T_inv is not the identity".into()));
        }
        Ok(Self { t, t_inv })
    }

    pub fn identity(d: usize) -> Self {
        Self { t: RatMatrix::identity(d), t_inv: RatMatrix::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.t
    }

    pub fn inverse_matrix(&self) -> &RatMatrix {
        &self.t_inv
    }

    pub fn apply(&self, x: &[Rat]) -> RatVector {
        self.t.mul_vec(x)
    }

    pub fn apply_inverse(&self, x: &[Rat]) -> RatVector {
        self.t_inv.mul_vec(x)
    }

    pub fn inverse(&self) -> LinearIso {
        LinearIso { t: self.t_inv.clone(), t_inv: self.t.clone() }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearIso) -> LinearIso {
        LinearIso { t: next.t.mul(&self.t), t_inv: self.t_inv.mul(&next.t_inv) }
    }

    /// `ℓ ↦ ℓ ∘ T⁻¹`, so that `ℓ'(T·x) = ℓ(x)`.
    pub fn map_functional(&self, l: &[Rat]) -> RatVector {
        let d = self.dim();
        (0..d).map(|j| (0..d).map(|k| self.t_inv.get(k, j) * &l[k]).sum()).collect()
    }

    pub fn map_hrep(&self, h: &HRep) -> Result<HRep> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: h.dim() });
        }
        HRep::new(h.dim(), h.functionals().iter().map(|l| self.map_functional(l)).collect())
    }

    pub fn map_vrep(&self, v: &VRep) -> Result<VRep> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        VRep::new(v.dim(), v.generators().iter().map(|g| self.apply(g)).collect())
    }
}

/// Iso whose first output coordinate is `φ(x)`; the rest are the coordinates
/// of `x` other than the first one where `φ` is nonzero.
fn iso_with_first_row(phi: &[Rat]) -> Result<LinearIso> {
    let d = phi.len();
    let p = phi
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::PreconditionViolated("zero functional".into()))?;
    let mut rows = vec![phi.to_vec()];
    for j in (0..d).filter(|&j| j != p) {
        rows.push((0..d).map(|i| rat((i == j) as i64)).collect());
    }
    LinearIso::new(RatMatrix::from_rows(&rows, d))
}

fn tail(x: &[Rat]) -> RatVector {
    x[1..].to_vec()
}

/// Moves facet `facet_index` (canonical facet order) into `{x₁ = 0}` with the
/// cone in `{x₁ ≤ 0}`. Returns the iso and the images of the generators of `v`
/// in their original order.
pub fn position_facet(v: &VRep, facet_index: usize) -> Result<(LinearIso, VRep)> {
    let d = v.dim();
    if d < 2 {
        return Err(Error::DegenerateCone);
    }
    let h = facets_of(v)?;
    let l = h
        .functionals()
        .get(facet_index)
        .ok_or(Error::IndexOutOfRange { index: facet_index, len: h.len() })?;
    let neg: RatVector = l.iter().map(|x| -x).collect();
    let iso = iso_with_first_row(&neg)?;
    let image = iso.map_vrep(v)?;

    if image.generators().iter().any(|g| g[0].is_positive()) {
        return Err(Error::Verification("positioned cone leaves {x1 <= 0}".into()));
    }
    let on_facet: Vec<RatVector> = image.generators().iter().filter(|g| g[0].is_zero()).map(|g| tail(g)).collect();
    if on_facet.is_empty() || RatMatrix::from_rows(&on_facet, d - 1).rank() != d - 1 {
        return Err(Error::DegenerateCone);
    }
    if image.generators().iter().all(|g| g[0].is_zero()) {
        return Err(Error::DegenerateCone);
    }
    Ok((iso, image))
}

/// Output of [`position_vertex_figure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFigure {
    pub iso: LinearIso,
    /// Images of the generators, rescaled so the apex has first coordinate −1
    /// and every other generator +1. Same order as the input.
    pub positioned: VRep,
    pub apex: usize,
    /// `½·apex + ½·v_i` for `i ≠ apex`, first coordinate dropped.
    pub figure: VRep,
}

/// Finds `φ` with `φ(v_apex) = −1` and `φ(v_i) > 0` otherwise, by the exact
/// LP `max t` s.t. `φ(v_i) ≥ t`, `t ≤ 1`.
fn separating_functional(v: &VRep, apex: usize) -> Result<RatVector> {
    let d = v.dim();
    let mut lp = LinearProgram::new(vec![VarBound::Free; d + 1]);
    let mut obj = vec![Rat::zero(); d + 1];
    obj[d] = Rat::one();
    lp.objective = obj;
    let gens = v.generators();
    let mut apex_row = gens[apex].clone();
    apex_row.push(Rat::zero());
    lp.constrain(apex_row, Relation::Eq, rat(-1));
    for (i, g) in gens.iter().enumerate() {
        if i == apex {
            continue;
        }
        let mut row = g.clone();
        row.push(rat(-1));
        lp.constrain(row, Relation::Ge, Rat::zero());
    }
    let mut cap = vec![Rat::zero(); d + 1];
    cap[d] = Rat::one();
    lp.constrain(cap, Relation::Le, Rat::one());
    match lp.solve() {
        LpOutcome::Optimal { mut x, value } if value.is_positive() => {
            x.truncate(d);
            Ok(x)
        }
        _ => Err(Error::NoSeparatingFunctional(apex)),
    }
}

pub fn position_vertex_figure(v: &VRep, ray_index: usize) -> Result<VertexFigure> {
    let d = v.dim();
    if ray_index >= v.len() {
        return Err(Error::IndexOutOfRange { index: ray_index, len: v.len() });
    }
    if d < 2 || v.len() < 2 {
        return Err(Error::NoSeparatingFunctional(ray_index));
    }
    let phi = separating_functional(v, ray_index)?;
    let iso = iso_with_first_row(&phi)?;
    let mut positioned = Vec::with_capacity(v.len());
    for (i, g) in v.generators().iter().enumerate() {
        let img = iso.apply(g);
        let first = img[0].clone();
        let want = if i == ray_index { rat(-1) } else { rat(1) };
        if i == ray_index {
            if first != want {
                return Err(Error::Verification("apex not at first coordinate -1".into()));
            }
            positioned.push(img);
        } else {
            if !first.is_positive() {
                return Err(Error::Verification("generator not strictly positive on functional".into()));
            }
            positioned.push(img.iter().map(|x| x / &first).collect());
        }
    }
    let half = Rat::new(1.into(), 2.into());
    let apex = positioned[ray_index].clone();
    let figure: Vec<RatVector> = positioned
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ray_index)
        .map(|(_, g)| {
            let w: RatVector = apex.iter().zip(g).map(|(a, b)| (a + b) * &half).collect();
            debug_assert!(w[0].is_zero());
            tail(&w)
        })
        .collect();
    Ok(VertexFigure {
        iso,
        positioned: VRep::new(d, positioned)?,
        apex: ray_index,
        figure: VRep::new(d - 1, figure)?,
    })
}

/// Cyclic order of the extreme rays of a proper 3-dimensional cone, read off
/// the facet–ray incidences (each facet holds exactly two rays).
fn cyclic_order(rays: &[RatVector], facets: &[RatVector]) -> Result<Vec<usize>> {
    let k = rays.len();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); k];
    for l in facets {
        let on: Vec<usize> = (0..k).filter(|&i| dot(l, &rays[i]).is_zero()).collect();
        if on.len() != 2 {
            return Err(Error::Verification("3-dimensional facet without exactly two rays".into()));
        }
        nbrs[on[0]].push(on[1]);
        nbrs[on[1]].push(on[0]);
    }
    if nbrs.iter().any(|n| n.len() != 2) {
        return Err(Error::Verification("ray is not on exactly two facets".into()));
    }
    let mut order = vec![0];
    let mut prev = 0;
    let mut cur = nbrs[0][0].min(nbrs[0][1]);
    while cur != 0 {
        order.push(cur);
        let next = if nbrs[cur][0] == prev { nbrs[cur][1] } else { nbrs[cur][0] };
        prev = cur;
        cur = next;
        if order.len() > k {
            return Err(Error::Verification("facet incidences do not form a cycle".into()));
        }
    }
    if order.len() != k {
        return Err(Error::Verification("facet incidences do not form a single cycle".into()));
    }
    Ok(order)
}

/// Projective frame map sending the window `u` to the square corners, or
/// `None` if the window is not a convex quadrilateral in cyclic order.
fn frame_map(u: &[&RatVector; 4]) -> Option<LinearIso> {
    let cols: Vec<RatVector> = u[..3].iter().map(|x| (*x).clone()).collect();
    let basis = RatMatrix::from_cols(&cols, 3);
    let gamma = match solve_rational(&basis, u[3]).ok()? {
        Solution::Unique(g) => g,
        Solution::Underdetermined { .. } => return None,
    };
    if !(gamma[0].is_positive() && gamma[1].is_negative() && gamma[2].is_positive()) {
        return None;
    }
    // s4 = s1 − s2 + s3.
    let beta = rat_vec(&[1, -1, 1]);
    let square: Vec<RatVector> = BASE_SQUARE[..3].iter().map(|s| rat_vec(s)).collect();
    let s = RatMatrix::from_cols(&square, 3);
    let mut scale = RatMatrix::zeros(3, 3);
    for k in 0..3 {
        scale.set(k, k, &beta[k] / &gamma[k]);
    }
    let t = s.mul(&scale).mul(&basis.inverse()?);
    LinearIso::new(t).ok()
}

/// Maps a proper, non-simplex cone in ℝ³ so that its first four generators
/// are the standard square corners and all others, scaled to third coordinate
/// one, lie in `(1, ∞) × (−1, 1) × {1}`.
pub fn normalize_base3(v: &VRep) -> Result<(LinearIso, VRep)> {
    if v.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: v.dim() });
    }
    let a = analyze(v)?;
    if !a.proper {
        return Err(Error::DegenerateCone);
    }
    if a.simplex {
        return Err(Error::SimplexCone);
    }
    let rays = a.extreme_rays.generators();
    let order = cyclic_order(rays, a.facets.functionals())?;
    let k = order.len();
    let square: Vec<RatVector> = BASE_SQUARE.iter().map(|s| rat_vec(s)).collect();

    let mut found: Option<(LinearIso, VRep)> = None;
    for start in 0..k {
        for reversed in [false, true] {
            let idx: Vec<usize> = (0..k)
                .map(|i| if reversed { order[(start + k - i) % k] } else { order[(start + i) % k] })
                .collect();
            let window = [&rays[idx[0]], &rays[idx[1]], &rays[idx[2]], &rays[idx[3]]];
            let Some(iso) = frame_map(&window) else { continue };
            let Some(out) = check_normalized(&iso, &idx, rays, &square) else { continue };
            let is_identity = iso.matrix().is_identity();
            if is_identity {
                return Ok((iso, out));
            }
            if found.is_none() {
                found = Some((iso, out));
            }
        }
    }
    found.ok_or(Error::NormalizationFailed)
}

fn check_normalized(iso: &LinearIso, idx: &[usize], rays: &[RatVector], square: &[RatVector]) -> Option<VRep> {
    if !iso.matrix().mul(iso.inverse_matrix()).is_identity() {
        return None;
    }
    let mut out: Vec<RatVector> = Vec::with_capacity(idx.len());
    for (slot, &i) in idx.iter().enumerate() {
        let img = iso.apply(&rays[i]);
        if !img[2].is_positive() {
            return None;
        }
        let scaled: RatVector = img.iter().map(|x| x / &img[2]).collect();
        if slot < 4 {
            if scaled != square[slot] {
                return None;
            }
        } else if !(scaled[0] > Rat::one() && scaled[1].abs() < Rat::one()) {
            return None;
        }
        out.push(scaled);
    }
    VRep::new(3, out).ok()
}
