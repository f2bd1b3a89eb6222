//! Constructive witnesses for the strict inclusion `C₂^pt ⊊ C₂^ph`.
//!
//! Every proper non-simplex cone reduces to the square cone in ℝ³ through a
//! chain of facets and vertex figures. The base tuple is separated there by a
//! solver-derived exact certificate, and each reduction step lifts both the
//! tuple and the certificate back up one dimension.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rat::{rat, RatVector};
use crate::exact::{psd_shift_bound, Rat, Sym2};
use crate::nc_sets::{check_sep, combine, member_ph, sep_value, transform_certificate, transform_tuple, MatTuple, SepCertificate};
use crate::polyhedral::{
    adjacent_rays, analyze, facets_of, normalize_base3, position_facet, position_vertex_figure, ConeAnalysis, HRep,
    LinearIso, VRep,
};
use crate::solver::{Decision, PtOracle, SolverConfig};

/// One step of the reduction, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrailStep {
    Base3,
    FacetLift(usize, LinearIso),
    VertexFigureLift(usize, LinearIso),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessResult {
    pub tuple: MatTuple,
    pub certificate: SepCertificate,
    pub trail: Vec<TrailStep>,
}

/// Where the reduction goes next for a given cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feature {
    Simplex,
    Base3,
    /// Index into the canonical facet list.
    Facet(usize),
    /// Index into the canonical extreme-ray list.
    VertexFigure(usize),
}

/// `(diag(1, −1), [[0, 1], [1, 0]], I)`.
pub fn base_witness() -> MatTuple {
    MatTuple::new(vec![Sym2::diag(rat(1), rat(-1)), Sym2::offdiag(rat(1)), Sym2::identity()])
}

fn proper_analysis(v: &VRep) -> Result<ConeAnalysis> {
    let a = analyze(v)?;
    if !a.proper {
        return Err(Error::DegenerateCone);
    }
    Ok(a)
}

fn feature_of(a: &ConeAnalysis) -> Result<Feature> {
    let d = a.extreme_rays.dim();
    if a.simplex {
        return Ok(Feature::Simplex);
    }
    if d == 3 {
        return Ok(Feature::Base3);
    }
    let rays = a.extreme_rays.generators();
    for (k, l) in a.facets.functionals().iter().enumerate() {
        let on = rays.iter().filter(|r| crate::exact::rat::dot(l, r).is_zero()).count();
        if on > d - 1 {
            return Ok(Feature::Facet(k));
        }
    }
    for i in 0..rays.len() {
        if adjacent_rays(&a.extreme_rays, &a.facets, i).len() > d - 1 {
            return Ok(Feature::VertexFigure(i));
        }
    }
    Err(Error::FeatureSearchFailed)
}

/// A facet with more than `d − 1` extreme rays, else an extreme ray with more
/// than `d − 1` neighbours. Indices refer to the canonical lists of
/// [`analyze`].
pub fn find_nonsimplex_feature(v: &VRep) -> Result<Feature> {
    feature_of(&proper_analysis(v)?)
}

fn first_coordinate_zero(entries: &[Sym2]) -> Vec<Sym2> {
    std::iter::once(Sym2::zero()).chain(entries.iter().cloned()).collect()
}

fn tail(g: &[Rat]) -> RatVector {
    g[1..].to_vec()
}

fn check_sub(sub: &WitnessResult, d: usize) -> Result<()> {
    if sub.tuple.dim() + 1 != d || sub.certificate.dim() + 1 != d {
        return Err(Error::PreconditionViolated("sub-witness must have dimension d - 1".into()));
    }
    if !sep_value(&sub.certificate, &sub.tuple)?.is_negative() {
        return Err(Error::PreconditionViolated("sub-certificate does not separate its tuple".into()));
    }
    Ok(())
}

/// Lifts a witness of the facet `{x₁ = 0}` of `positioned` to the whole cone.
pub fn lift_facet(positioned: &VRep, sub: &WitnessResult) -> Result<WitnessResult> {
    let d = positioned.dim();
    check_sub(sub, d)?;
    let mut mu = Rat::zero();
    for g in positioned.generators() {
        if g[0].is_positive() {
            return Err(Error::PreconditionViolated("generator with positive first coordinate".into()));
        }
        if g[0].is_zero() {
            continue;
        }
        let s = combine(&tail(g), &sub.certificate.blocks)?;
        let need = psd_shift_bound(&s) / -&g[0];
        if need > mu {
            mu = need;
        }
    }
    let mut blocks = vec![Sym2::scalar(-mu)];
    blocks.extend(sub.certificate.blocks.iter().cloned());
    Ok(WitnessResult {
        tuple: MatTuple::new(first_coordinate_zero(&sub.tuple.entries)),
        certificate: SepCertificate::new(blocks),
        trail: sub.trail.clone(),
    })
}

/// Lifts a witness of the vertex figure at the unique generator of
/// `positioned` with first coordinate −1.
pub fn lift_vertex_figure(positioned: &VRep, sub: &WitnessResult) -> Result<WitnessResult> {
    let d = positioned.dim();
    check_sub(sub, d)?;
    let gens = positioned.generators();
    let apexes: Vec<&RatVector> = gens.iter().filter(|g| g[0] == rat(-1)).collect();
    if apexes.len() != 1 || gens.iter().any(|g| g[0] != rat(-1) && g[0] != rat(1)) {
        return Err(Error::PreconditionViolated("expected one generator at x1 = -1 and the rest at x1 = 1".into()));
    }
    let s1 = combine(&tail(apexes[0]), &sub.certificate.blocks)?;
    let mut blocks = vec![s1];
    blocks.extend(sub.certificate.blocks.iter().cloned());
    Ok(WitnessResult {
        tuple: MatTuple::new(first_coordinate_zero(&sub.tuple.entries)),
        certificate: SepCertificate::new(blocks),
        trail: sub.trail.clone(),
    })
}

fn pull_back(iso: &LinearIso, r: WitnessResult) -> Result<WitnessResult> {
    let back = iso.inverse();
    Ok(WitnessResult {
        tuple: transform_tuple(&back, &r.tuple)?,
        certificate: transform_certificate(&back, &r.certificate)?,
        trail: r.trail,
    })
}

fn verify(v: &VRep, h: &HRep, r: &WitnessResult) -> Result<()> {
    if !member_ph(h, &r.tuple)? {
        return Err(Error::Verification("witness tuple is not in the polyhedral extension".into()));
    }
    if let Some(bad) = check_sep(v, &r.tuple, &r.certificate)? {
        return Err(Error::Verification(format!("separation certificate fails: {bad}")));
    }
    Ok(())
}

fn base_case(v: &VRep, cfg: &SolverConfig) -> Result<WitnessResult> {
    let (iso, normalized) = normalize_base3(v)?;
    let a = base_witness();
    let certificate = match PtOracle::new(&normalized)?.decide(&a, cfg)? {
        Decision::NonMember(c) => c,
        Decision::Member(_) => return Err(Error::Verification("base tuple decomposed in the normalized frame".into())),
        Decision::Undecided(_) => return Err(Error::CertificationFailed(crate::error::CertSide::Dual)),
    };
    pull_back(&iso, WitnessResult { tuple: a, certificate, trail: vec![TrailStep::Base3] })
}

fn construct(v: &VRep, cfg: &SolverConfig) -> Result<WitnessResult> {
    let a = proper_analysis(v)?;
    let rays = &a.extreme_rays;
    let mut out = match feature_of(&a)? {
        Feature::Simplex => return Err(Error::SimplexCone),
        Feature::Base3 => base_case(rays, cfg)?,
        Feature::Facet(k) => {
            let (iso, positioned) = position_facet(rays, k)?;
            let on: Vec<RatVector> = positioned.generators().iter().filter(|g| g[0].is_zero()).map(|g| tail(g)).collect();
            let mut sub = construct(&VRep::new(v.dim() - 1, on)?, cfg)?;
            sub.trail.insert(0, TrailStep::FacetLift(k, iso.clone()));
            pull_back(&iso, lift_facet(&positioned, &sub)?)?
        }
        Feature::VertexFigure(i) => {
            let vf = position_vertex_figure(rays, i)?;
            let mut sub = construct(&vf.figure, cfg)?;
            sub.trail.insert(0, TrailStep::VertexFigureLift(i, vf.iso.clone()));
            pull_back(&vf.iso, lift_vertex_figure(&vf.positioned, &sub)?)?
        }
    };
    if out.trail.is_empty() {
        out.trail.push(TrailStep::Base3);
    }
    verify(v, &a.facets, &out)?;
    Ok(out)
}

/// Witness tuple in `C₂^ph \ C₂^pt` for a proper non-simplex cone, with an
/// exactly verified separation certificate against the generators of `v`.
pub fn construct_witness(v: &VRep, cfg: &SolverConfig) -> Result<WitnessResult> {
    let out = construct(v, cfg)?;
    verify(v, &facets_of(v)?, &out)?;
    Ok(out)
}
