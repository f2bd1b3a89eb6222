//! Double description method over the integers.
//!
//! Computes a lineality basis and the extreme rays of `{x : a_i·x ≥ 0}`.
//! Constraints are inserted in lexicographic order; adjacency is decided
//! combinatorially from the zero sets of the current extreme rays.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{canonical_set, int_to_rat, HRep, VRep};
use crate::error::{Error, Result};
use crate::exact::rat::{primitive_integer, RatVector};
use crate::exact::RatMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeRep {
    V(VRep),
    H(HRep),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConvertMode {
    /// Reject cones that are not full-dimensional and pointed.
    Strict,
    /// Encode lineality and implicit equalities as `±` pairs.
    #[default]
    Lenient,
}

/// Minkowski–Weyl conversion to the other representation, irredundant and canonical.
pub fn dual_convert(rep: &ConeRep, mode: ConvertMode) -> Result<ConeRep> {
    match rep {
        ConeRep::V(v) => {
            let out = dd_cone(v.dim(), v.generators());
            if mode == ConvertMode::Strict && (!out.lineality.is_empty() || rank(&out.rays, v.dim()) < v.dim()) {
                return Err(Error::DegenerateCone);
            }
            let fs = out.into_vectors();
            HRep::new(v.dim(), canonical_set(&fs)).map(ConeRep::H)
        }
        ConeRep::H(h) => {
            let out = dd_cone(h.dim(), h.functionals());
            if mode == ConvertMode::Strict && (!out.lineality.is_empty() || rank(&out.rays, h.dim()) < h.dim()) {
                return Err(Error::DegenerateCone);
            }
            let gs = out.into_vectors();
            if gs.is_empty() {
                return Err(Error::DegenerateCone);
            }
            VRep::new(h.dim(), canonical_set(&gs)).map(ConeRep::V)
        }
    }
}

/// Facet functionals of `cc(v)` (lenient mode).
pub fn facets_of(v: &VRep) -> Result<HRep> {
    match dual_convert(&ConeRep::V(v.clone()), ConvertMode::Lenient)? {
        ConeRep::H(h) => Ok(h),
        ConeRep::V(_) => unreachable!(),
    }
}

/// Extreme rays (plus `±` lineality) of the cone cut out by `h`.
pub fn rays_of(h: &HRep) -> Result<VRep> {
    match dual_convert(&ConeRep::H(h.clone()), ConvertMode::Lenient)? {
        ConeRep::V(v) => Ok(v),
        ConeRep::H(_) => unreachable!(),
    }
}

fn rank(rays: &[Vec<BigInt>], dim: usize) -> usize {
    if rays.is_empty() {
        return 0;
    }
    let rows: Vec<RatVector> = rays.iter().map(|r| int_to_rat(r)).collect();
    RatMatrix::from_rows(&rows, dim).rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(n: usize) -> Self {
        ZeroSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn intersect(&self, o: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn is_subset(&self, o: &ZeroSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: ZeroSet,
}

pub(crate) struct DdOutput {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl DdOutput {
    /// Rays followed by `±` each lineality vector, as rationals.
    fn into_vectors(self) -> Vec<RatVector> {
        let mut out: Vec<RatVector> = self.rays.iter().map(|r| int_to_rat(r)).collect();
        for l in &self.lineality {
            out.push(int_to_rat(l));
            out.push(int_to_rat(&l.iter().map(|x| -x).collect::<Vec<_>>()));
        }
        out
    }
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// `s·x − t·y`, made primitive.
fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    primitive(x.iter().zip(y).map(|(a, b)| s * a - t * b).collect())
}

pub(crate) fn dd_cone(dim: usize, constraints: &[RatVector]) -> DdOutput {
    let mut rows: Vec<Vec<BigInt>> = constraints.iter().map(|c| primitive_integer(c)).collect();
    rows.sort();
    rows.dedup();
    let m = rows.len();

    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in rows.iter().enumerate() {
        if let Some(k) = lineality.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l0 = lineality.remove(k);
            let mut s0 = idot(a, &l0);
            if s0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let al = idot(a, l);
                if !al.is_zero() {
                    *l = combine(&s0, l, &al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = idot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&s0, &r.v, &ar, &l0);
                }
                r.zeros.insert(idx);
            }
            let mut zeros = ZeroSet::new(m);
            (0..idx).for_each(|i| zeros.insert(i));
            rays.push(Ray { v: primitive(l0), zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[n]; both coefficients are positive.
                let v = combine(&vals[p], &rays[n].v, &vals[n], &rays[p].v);
                let mut zeros = common;
                zeros.insert(idx);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(idx);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    DdOutput {
        lineality: lineality.into_iter().map(primitive).collect(),
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}
