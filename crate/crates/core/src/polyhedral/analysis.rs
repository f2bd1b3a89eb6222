use num_traits::{One, Zero};

use super::{canonical_set, facets_of, HRep, VRep};
use crate::error::{Error, Result};
use crate::exact::lp::{LinearProgram, Relation};
use crate::exact::rat::{dot, Rat, RatVector};
use crate::exact::RatMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeAnalysis {
    pub extreme_rays: VRep,
    pub facets: HRep,
    pub proper: bool,
    pub simplex: bool,
}

/// Exact test for `x ∈ cc(generators)`.
pub fn in_cone(x: &[Rat], generators: &[RatVector]) -> bool {
    let Some(first) = generators.first() else {
        return x.iter().all(Zero::is_zero);
    };
    let d = first.len();
    let mut lp = LinearProgram::feasibility(generators.len());
    for j in 0..d {
        let row: RatVector = generators.iter().map(|g| g[j].clone()).collect();
        lp.constrain(row, Relation::Eq, x[j].clone());
    }
    lp.is_feasible()
}

/// True iff the only nonnegative combination of the generators equal to zero is trivial.
pub fn is_pointed(v: &VRep) -> bool {
    let n = v.len();
    let mut lp = LinearProgram::feasibility(n);
    for j in 0..v.dim() {
        let row: RatVector = v.generators().iter().map(|g| g[j].clone()).collect();
        lp.constrain(row, Relation::Eq, Rat::zero());
    }
    lp.constrain(vec![Rat::one(); n], Relation::Eq, Rat::one());
    !lp.is_feasible()
}

/// Minimal generating subset, canonically scaled and sorted.
///
/// For a pointed cone these are exactly the extreme rays.
pub fn extreme_rays(v: &VRep) -> VRep {
    let mut keep = canonical_set(v.generators());
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<RatVector> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        if !others.is_empty() && in_cone(&keep[i], &others) {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    VRep::new(v.dim(), keep).expect("subset of a valid generator list")
}

pub fn analyze(v: &VRep) -> Result<ConeAnalysis> {
    let extreme = extreme_rays(v);
    let facets = facets_of(v)?;
    let proper = extreme.rank() == v.dim() && is_pointed(&extreme);
    let simplex = proper && extreme.len() == v.dim();
    Ok(ConeAnalysis { extreme_rays: extreme, facets, proper, simplex })
}

/// Generators of `v` on which the chosen facet functional vanishes.
pub fn facet_generators(v: &VRep, h: &HRep, facet_index: usize) -> Result<VRep> {
    let l = h
        .functionals()
        .get(facet_index)
        .ok_or(Error::IndexOutOfRange { index: facet_index, len: h.len() })?;
    if l.len() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: l.len() });
    }
    let on: Vec<RatVector> = v.generators().iter().filter(|g| dot(l, g).is_zero()).cloned().collect();
    if on.is_empty() {
        return Err(Error::EmptyFacet(facet_index));
    }
    VRep::new(v.dim(), on)
}

/// Indices of extreme rays adjacent to `rays[i]`, for a proper cone given by
/// its extreme rays and facets: two rays span an edge iff the facets through
/// both have rank `d − 2`.
pub fn adjacent_rays(rays: &VRep, facets: &HRep, i: usize) -> Vec<usize> {
    let d = rays.dim();
    let gens = rays.generators();
    let through = |k: usize| -> Vec<bool> { facets.functionals().iter().map(|l| dot(l, &gens[k]).is_zero()).collect() };
    let zi = through(i);
    (0..gens.len())
        .filter(|&j| j != i)
        .filter(|&j| {
            let zj = through(j);
            let common: Vec<RatVector> = facets
                .functionals()
                .iter()
                .enumerate()
                .filter(|&(k, _)| zi[k] && zj[k])
                .map(|(_, l)| l.clone())
                .collect();
            let r = if common.is_empty() { 0 } else { RatMatrix::from_rows(&common, d).rank() };
            d >= 2 && r == d - 2
        })
        .collect()
}
