//! Numerical feasibility engine for `C₂^pt` membership and the rounding of its
//! output to exact certificates.

mod barrier;
mod certify;
mod dykstra;
mod face;
mod project;

use crate::error::{Error, Result};
use crate::exact::rat::to_f64;
use crate::exact::Sym2;
use crate::nc_sets::{ph_violation_certificate, MatTuple, PtDecomposition, SepCertificate};
use crate::polyhedral::{facets_of, HRep, VRep};

pub use barrier::decide_pt_interior;
pub use certify::{certify, CertContext, Certificate};
pub use dykstra::{decide_pt, WINDOW};
pub use face::{Face, Shape};
pub use project::{project_affine, project_psd2, AffineMap, AffineProjection, BlockShape};

use nalgebra::DVector;
use project::encode;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_ITER_MAX: usize = 200_000;
pub const DEFAULT_MAX_DEN_SCHEDULE: [u64; 3] = [1_000, 1_000_000, 1_000_000_000];

/// Does `target = Σ P_i ⊗ v_i` have a solution with every `P_i ⪰ 0`?
#[derive(Clone, Debug, PartialEq)]
pub struct FeasProblem {
    pub generators: Vec<Vec<f64>>,
    pub target: Vec<Sym2<f64>>,
    pub tolerance: f64,
    pub iter_max: usize,
}

impl FeasProblem {
    pub fn new(generators: Vec<Vec<f64>>, target: Vec<Sym2<f64>>) -> Self {
        Self { generators, target, tolerance: DEFAULT_TOLERANCE, iter_max: DEFAULT_ITER_MAX }
    }

    pub fn from_exact(v: &VRep, a: &MatTuple) -> Self {
        let generators = v.generators().iter().map(|g| g.iter().map(to_f64).collect()).collect();
        Self::new(generators, a.to_f64())
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_iter_max(mut self, iter_max: usize) -> Self {
        self.iter_max = iter_max;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Feasible,
    Infeasible,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Approximate blocks `P_i`, present when feasible.
    pub primal: Option<Vec<Sym2<f64>>>,
    /// Approximate certificate blocks `B_j`, present when infeasible.
    pub dual: Option<Vec<Sym2<f64>>>,
    pub residual: f64,
    /// Least block eigenvalue of the primal, or of `Σ_j (v_i)_j B_j` over
    /// generators for the dual.
    pub margin: f64,
    pub iterations: usize,
}

impl SolveOutcome {
    pub(crate) fn feasible(primal: Vec<Sym2<f64>>, residual: f64, margin: f64, iterations: usize) -> Self {
        Self { status: Status::Feasible, primal: Some(primal), dual: None, residual, margin, iterations }
    }

    pub(crate) fn undecided(residual: f64, iterations: usize) -> Self {
        Self { status: Status::Undecided, primal: None, dual: None, residual, margin: f64::NAN, iterations }
    }
}

/// `B = sign · (Vᵀ)⁺ w`, scaled to unit norm, with its generator margin.
pub(crate) fn dual_from_adjoint(map: &AffineMap, w: &DVector<f64>, sign: f64) -> (Vec<Sym2<f64>>, f64) {
    let mut lam = map.adjoint_solve(w);
    let n = lam.norm();
    lam *= if n > 0.0 { sign / n } else { sign };
    let on_gens = map.matrix().tr_mul(&lam);
    (project::decode(&lam), map.min_eigenvalue(&on_gens))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub iter_max: usize,
    pub max_den_schedule: Vec<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            iter_max: DEFAULT_ITER_MAX,
            max_den_schedule: DEFAULT_MAX_DEN_SCHEDULE.to_vec(),
        }
    }
}

impl SolverConfig {
    /// Schedule capped at `max_den`, ending with `max_den` itself.
    pub fn with_max_den(mut self, max_den: u64) -> Self {
        let mut s: Vec<u64> = DEFAULT_MAX_DEN_SCHEDULE.iter().copied().filter(|&m| m < max_den).collect();
        s.push(max_den.max(1));
        self.max_den_schedule = s;
        self
    }
}

/// Exact answer of the membership driver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Member(PtDecomposition),
    NonMember(SepCertificate),
    Undecided(String),
}

impl From<Certificate> for Decision {
    fn from(c: Certificate) -> Self {
        match c {
            Certificate::Member(d) => Decision::Member(d),
            Certificate::NonMember(s) => Decision::NonMember(s),
        }
    }
}

/// Per-cone state for repeated membership queries.
#[derive(Clone, Debug)]
pub struct PtOracle {
    v: VRep,
    h: HRep,
    generators: Vec<Vec<f64>>,
    map: AffineMap,
    ctx: CertContext,
}

impl PtOracle {
    pub fn new(v: &VRep) -> Result<Self> {
        let h = facets_of(v)?;
        Ok(Self::with_facets(v, h))
    }

    pub fn with_facets(v: &VRep, h: HRep) -> Self {
        let generators: Vec<Vec<f64>> = v.generators().iter().map(|g| g.iter().map(to_f64).collect()).collect();
        let ctx = CertContext::new(v, &h);
        let map = AffineMap::new(&generators);
        Self { v: v.clone(), h, generators, map, ctx }
    }

    pub fn cone(&self) -> &VRep {
        &self.v
    }

    pub fn facets(&self) -> &HRep {
        &self.h
    }

    /// Facet violations are certified directly. Otherwise the interior-point
    /// method runs on the full problem; if that stalls on the boundary it is
    /// rerun on the face cut out by singular facets; alternating projections
    /// are the last resort. Each outcome is rounded over the denominator
    /// schedule and only exactly verified results are returned.
    pub fn decide(&self, a: &MatTuple, cfg: &SolverConfig) -> Result<Decision> {
        if a.dim() != self.v.dim() {
            return Err(Error::DimensionMismatch { expected: self.v.dim(), found: a.dim() });
        }
        if let Some(cert) = ph_violation_certificate(&self.v, &self.h, a)? {
            return Ok(Decision::NonMember(cert));
        }
        let target = encode(&a.to_f64());
        let full = Face::full(self.v.len());
        let interior = barrier::run(&self.map, &target, cfg.tolerance);
        if let Some(c) = self.round(a, &interior, cfg, &full) {
            return Ok(c.into());
        }
        let face = Face::of(&self.v, &self.h, a)?;
        let mut reduced = None;
        if !face.is_full() {
            let map = AffineMap::with_shapes(&self.generators, face.float_shapes());
            let outcome = barrier::run(&map, &target, cfg.tolerance);
            if let Some(c) = self.round(a, &outcome, cfg, &face) {
                return Ok(c.into());
            }
            reduced = Some(outcome.status);
        }
        let projections = dykstra::run(&self.map, &target, cfg.tolerance, cfg.iter_max);
        if let Some(c) = self.round(a, &projections, cfg, &full) {
            return Ok(c.into());
        }
        let mut why = format!("interior point {:?}", interior.status);
        if let Some(st) = reduced {
            why += &format!(", on face {st:?}");
        }
        why += &format!(", projections {:?} after {} iterations; nothing verified", projections.status, projections.iterations);
        Ok(Decision::Undecided(why))
    }

    fn round(&self, a: &MatTuple, outcome: &SolveOutcome, cfg: &SolverConfig, face: &Face) -> Option<Certificate> {
        if outcome.status == Status::Undecided {
            return None;
        }
        cfg.max_den_schedule.iter().find_map(|&m| self.ctx.certify_on(a, outcome, m, face).ok())
    }
}

pub fn decide_and_certify(v: &VRep, a: &MatTuple, cfg: &SolverConfig) -> Result<Decision> {
    PtOracle::new(v)?.decide(a, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, rat};
    use crate::exact::Rat;
    use crate::nc_sets::{verify_pt, verify_sep};
    use crate::polyhedral::families;

    fn tuple(x: Rat, y: Rat) -> MatTuple {
        MatTuple::new(vec![Sym2::new(x, rat(0), rat(-1)), Sym2::offdiag(y), Sym2::identity()])
    }

    #[test]
    fn base_witness_gets_verified_certificate() {
        let v = families::square_cone();
        let a = tuple(rat(1), rat(1));
        let outcome = decide_pt(&FeasProblem::from_exact(&v, &a));
        assert_eq!(outcome.status, Status::Infeasible);
        let cert = DEFAULT_MAX_DEN_SCHEDULE.iter().find_map(|&m| certify(&v, &a, &outcome, m).ok()).unwrap();
        let Certificate::NonMember(cert) = cert else { panic!("expected a separation certificate") };
        assert!(verify_sep(&v, &a, &cert).unwrap());
    }

    #[test]
    fn symmetric_target_recovers_quarter_identity() {
        let v = families::square_cone();
        let a = MatTuple::new(vec![Sym2::zero(), Sym2::zero(), Sym2::identity()]);
        let outcome = decide_pt(&FeasProblem::from_exact(&v, &a));
        let Certificate::Member(dec) = certify(&v, &a, &outcome, 1000).unwrap() else { panic!() };
        assert_eq!(dec.blocks, vec![Sym2::scalar(frac(1, 4)); 4]);
    }

    #[test]
    fn section_boundary_corner_decomposes() {
        let v = families::square_cone();
        let a = tuple(rat(1), rat(0));
        match decide_and_certify(&v, &a, &SolverConfig::default()).unwrap() {
            Decision::Member(dec) => assert!(verify_pt(&v, &a, &dec).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn section_points_classify() {
        let v = families::square_cone();
        let oracle = PtOracle::new(&v).unwrap();
        let cfg = SolverConfig::default();
        let cases = [(frac(9, 10), frac(3, 10), false), (rat(0), rat(0), true), (frac(-1, 2), frac(7, 10), true), (frac(1, 2), frac(51, 100), false)];
        for (x, y, member) in cases {
            let a = tuple(x.clone(), y.clone());
            match oracle.decide(&a, &cfg).unwrap() {
                Decision::Member(dec) => {
                    assert!(member, "{x} {y}");
                    assert!(verify_pt(&v, &a, &dec).unwrap());
                }
                Decision::NonMember(cert) => {
                    assert!(!member, "{x} {y}");
                    assert!(verify_sep(&v, &a, &cert).unwrap());
                }
                Decision::Undecided(why) => panic!("{x} {y}: {why}"),
            }
        }
    }

    #[test]
    fn undecided_outcome_cannot_be_certified() {
        let v = families::square_cone();
        let a = tuple(rat(0), rat(0));
        let out = SolveOutcome::undecided(0.0, 0);
        assert!(matches!(certify(&v, &a, &out, 10), Err(Error::PreconditionViolated(_))));
    }
}
