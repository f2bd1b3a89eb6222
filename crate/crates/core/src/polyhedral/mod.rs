//! Exact polyhedral cones: V- and H-representations, Minkowski–Weyl conversion,
//! structural analysis and the linear isomorphisms used to position a cone.

mod analysis;
mod dd;
pub mod families;
mod position;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rat::{is_zero_vec, primitive_integer, Rat, RatVector};
use crate::exact::RatMatrix;

pub use analysis::{
    adjacent_rays, analyze, extreme_rays, facet_generators, in_cone, is_pointed, ConeAnalysis,
};
pub use dd::{dual_convert, facets_of, rays_of, ConeRep, ConvertMode};
pub use position::{
    normalize_base3, position_facet, position_vertex_figure, LinearIso, VertexFigure, BASE_SQUARE,
};

/// Generator list of `cc{v_1, …, v_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VRep {
    dim: usize,
    generators: Vec<RatVector>,
}

/// Functionals of `{x : ℓ_1(x) ≥ 0, …, ℓ_m(x) ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HRep {
    dim: usize,
    functionals: Vec<RatVector>,
}

fn check_vectors(dim: usize, vs: &[RatVector], what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidRepresentation("dimension must be at least 1".into()));
    }
    for (i, v) in vs.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        if is_zero_vec(v) {
            return Err(Error::InvalidRepresentation(format!("{what} {i} is zero")));
        }
    }
    Ok(())
}

impl VRep {
    pub fn new(dim: usize, generators: Vec<RatVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidRepresentation("generator list is empty".into()));
        }
        check_vectors(dim, &generators, "generator")?;
        Ok(Self { dim, generators })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        Self::new(dim, rows.iter().map(|r| crate::exact::rat::rat_vec(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Primitive-integer scaled, deduplicated, lexicographically sorted copy.
    pub fn canonical(&self) -> VRep {
        VRep { dim: self.dim, generators: canonical_set(&self.generators) }
    }

    /// Generators as the columns of a `dim × n` matrix.
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_cols(&self.generators, self.dim)
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }
}

impl HRep {
    pub fn new(dim: usize, functionals: Vec<RatVector>) -> Result<Self> {
        check_vectors(dim, &functionals, "functional")?;
        Ok(Self { dim, functionals })
    }

    pub fn from_ints(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| crate::exact::rat::rat_vec(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functionals(&self) -> &[RatVector] {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn canonical(&self) -> HRep {
        HRep { dim: self.dim, functionals: canonical_set(&self.functionals) }
    }

    /// Exact scalar membership test.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.functionals.iter().all(|l| crate::exact::rat::dot(l, x) >= Rat::zero())
    }
}

/// Positive rescaling to a primitive integer vector; the direction is kept.
pub fn canonical_vector(v: &[Rat]) -> RatVector {
    primitive_integer(v).into_iter().map(Rat::from_integer).collect()
}

pub(crate) fn canonical_set(vs: &[RatVector]) -> Vec<RatVector> {
    let mut out: Vec<RatVector> = vs.iter().map(|v| canonical_vector(v)).collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn int_to_rat(v: &[BigInt]) -> RatVector {
    v.iter().cloned().map(Rat::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, rat};

    #[test]
    fn rejects_zero_and_ragged() {
        assert!(VRep::from_ints(&[&[0, 0]]).is_err());
        assert!(VRep::new(2, vec![vec![rat(1)]]).is_err());
        assert!(VRep::new(2, vec![]).is_err());
    }

    #[test]
    fn canonical_scaling_keeps_sign() {
        let v = canonical_vector(&[frac(-1, 2), frac(3, 2), rat(0)]);
        assert_eq!(v, vec![rat(-1), rat(3), rat(0)]);
        let c = VRep::new(2, vec![vec![rat(2), rat(2)], vec![rat(1), rat(1)], vec![rat(-1), rat(0)]]).unwrap().canonical();
        assert_eq!(c.generators(), &[vec![rat(-1), rat(0)], vec![rat(1), rat(1)]]);
    }
}
