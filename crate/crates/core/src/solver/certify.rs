//! Rounding of approximate solver output to exact, verified proofs.

use num_traits::Zero;

use super::face::{Face, Shape};
use super::{SolveOutcome, Status};
use crate::error::{CertSide, Error, Result};
use crate::exact::rat::{rationalize, to_f64, Rat, RatVector};
use crate::exact::{solve_rational, RatMatrix, Sym2};
use crate::nc_sets::{check_pt, check_sep, MatTuple, PtDecomposition, SepCertificate};
use crate::polyhedral::{facets_of, HRep, VRep};

/// An exact proof about `A` relative to `C₂^pt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Member(PtDecomposition),
    NonMember(SepCertificate),
}

const BLENDS: [f64; 4] = [0.0, 1e-8, 1e-4, 1e-2];
const DUAL_SHARES: [f64; 3] = [0.5, 0.1, 0.9];

/// Exact data reused across many certifications against one cone.
#[derive(Clone, Debug)]
pub struct CertContext {
    v: VRep,
    /// `B0_j = c_j·I` with `c` the sum of the facet functionals, so that
    /// `Σ_j (v_i)_j B0_j = c(v_i)·I` is PSD on every generator.
    b0: SepCertificate,
}

/// Exact equality system of the decomposition problem on a face, in plain
/// coordinates `(a11, a12, a22)` per tuple entry.
struct ExactSystem {
    m: RatMatrix,
    gram: RatMatrix,
}

impl ExactSystem {
    fn new(v: &VRep, face: &Face) -> Self {
        let d = v.dim();
        let width = |s: &Shape| match s {
            Shape::Full => 3,
            Shape::Ray(..) => 1,
            Shape::Zero => 0,
        };
        let nvars = face.shapes.iter().map(width).sum();
        let mut m = RatMatrix::zeros(3 * d, nvars);
        let mut o = 0;
        for (g, s) in v.generators().iter().zip(&face.shapes) {
            for (j, vj) in g.iter().enumerate() {
                match s {
                    Shape::Full => {
                        for c in 0..3 {
                            m.set(3 * j + c, o + c, vj.clone());
                        }
                    }
                    Shape::Ray(w1, w2) => {
                        m.set(3 * j, o, vj * w1 * w1);
                        m.set(3 * j + 1, o, vj * w1 * w2);
                        m.set(3 * j + 2, o, vj * w2 * w2);
                    }
                    Shape::Zero => {}
                }
            }
            o += width(s);
        }
        let gram = m.mul(&m.transpose());
        Self { m, gram }
    }

    /// `x ← x + Mᵀy` with `MMᵀy = a − Mx`: the least-norm exact correction.
    fn repair(&self, x: &mut RatVector, a: &[Rat]) -> bool {
        let mx = self.m.mul_vec(x);
        let r: RatVector = a.iter().zip(mx).map(|(t, y)| t - y).collect();
        if r.iter().all(Zero::is_zero) {
            return true;
        }
        let Ok(sol) = solve_rational(&self.gram, &r) else { return false };
        let delta = self.m.transpose().mul_vec(sol.point());
        for (xi, di) in x.iter_mut().zip(delta) {
            *xi += di;
        }
        true
    }
}

fn plain(a: &MatTuple) -> RatVector {
    a.entries.iter().flat_map(|s| [s.a11.clone(), s.a12.clone(), s.a22.clone()]).collect()
}

impl CertContext {
    pub fn new(v: &VRep, h: &HRep) -> Self {
        let mut c: RatVector = vec![Rat::zero(); v.dim()];
        for l in h.functionals() {
            for (x, y) in c.iter_mut().zip(l) {
                *x += y;
            }
        }
        let b0 = SepCertificate::new(c.into_iter().map(Sym2::scalar).collect());
        Self { v: v.clone(), b0 }
    }

    pub fn cone(&self) -> &VRep {
        &self.v
    }

    pub fn certify(&self, a: &MatTuple, outcome: &SolveOutcome, max_den: u64) -> Result<Certificate> {
        self.certify_on(a, outcome, max_den, &Face::full(self.v.len()))
    }

    /// As [`certify`](Self::certify), with primal blocks restricted to `face`.
    pub fn certify_on(&self, a: &MatTuple, outcome: &SolveOutcome, max_den: u64, face: &Face) -> Result<Certificate> {
        match outcome.status {
            Status::Feasible => {
                let blocks = outcome.primal.as_deref().ok_or(Error::CertificationFailed(CertSide::Primal))?;
                self.certify_primal(a, blocks, max_den, face).map(Certificate::Member)
            }
            Status::Infeasible => {
                let blocks = outcome.dual.as_deref().ok_or(Error::CertificationFailed(CertSide::Dual))?;
                self.certify_dual(a, blocks, max_den).map(Certificate::NonMember)
            }
            Status::Undecided => Err(Error::PreconditionViolated("solver outcome is undecided".into())),
        }
    }

    /// Rationalize, then apply the least-norm exact correction onto the
    /// equality set; accept only if every block stays PSD.
    pub fn certify_primal(&self, a: &MatTuple, blocks: &[Sym2<f64>], max_den: u64, face: &Face) -> Result<PtDecomposition> {
        let fail = Error::CertificationFailed(CertSide::Primal);
        if blocks.len() != self.v.len() || a.dim() != self.v.dim() || face.shapes.len() != self.v.len() {
            return Err(fail);
        }
        let system = ExactSystem::new(&self.v, face);
        let target = plain(a);
        for w in BLENDS {
            let Some(mut x) = round_variables(blocks, face, w, max_den) else { continue };
            if !system.repair(&mut x, &target) {
                return Err(fail);
            }
            let dec = PtDecomposition::new(assemble(&x, face));
            if check_pt(&self.v, a, &dec)?.is_none() {
                return Ok(dec);
            }
        }
        Err(fail)
    }

    /// Add a multiple of `B0` for strict slack on every generator, then
    /// rationalize; accept only if the exact check passes.
    pub fn certify_dual(&self, a: &MatTuple, blocks: &[Sym2<f64>], max_den: u64) -> Result<SepCertificate> {
        let fail = Error::CertificationFailed(CertSide::Dual);
        if blocks.len() != self.v.dim() || a.dim() != self.v.dim() {
            return Err(fail);
        }
        let af = a.to_f64();
        let peak = blocks.iter().flat_map(|b| [b.a11.abs(), b.a12.abs(), b.a22.abs()]).fold(0.0, f64::max);
        if !(peak.is_finite() && peak > 0.0) {
            return Err(fail);
        }
        let b: Vec<Sym2<f64>> = blocks.iter().map(|x| x.scale(&(1.0 / peak))).collect();
        let value: f64 = b.iter().zip(&af).map(|(x, y)| x.inner(y)).sum();
        if value.is_nan() || value >= 0.0 {
            return Err(fail);
        }
        let b0a = to_f64(&self.b0.blocks.iter().zip(&a.entries).map(|(x, y)| x.inner(y)).sum::<Rat>());
        let taus: Vec<f64> = if b0a > 0.0 {
            DUAL_SHARES.iter().map(|s| s * value.abs() / b0a).collect()
        } else {
            vec![1.0]
        };
        for tau in taus {
            let Some(blocks) = b
                .iter()
                .zip(&self.b0.blocks)
                .map(|(x, z)| rational_sym2(&x.add_scaled(&tau, &z.to_f64()), max_den))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let cert = SepCertificate::new(blocks);
            if check_sep(&self.v, a, &cert)?.is_none() {
                return Ok(cert);
            }
        }
        Err(fail)
    }
}

/// Exact face variables from approximate blocks, after blending full blocks
/// toward `(tr/2)·I` with weight `w`.
fn round_variables(blocks: &[Sym2<f64>], face: &Face, w: f64, max_den: u64) -> Option<RatVector> {
    let mut x = Vec::new();
    for (b, s) in blocks.iter().zip(&face.shapes) {
        match s {
            Shape::Full => {
                let c = 0.5 * b.trace() * w;
                let blended = Sym2::new((1.0 - w) * b.a11 + c, (1.0 - w) * b.a12, (1.0 - w) * b.a22 + c);
                let r = rational_sym2(&blended, max_den)?;
                x.extend([r.a11, r.a12, r.a22]);
            }
            Shape::Ray(w1, w2) => {
                let (u1, u2) = (to_f64(w1), to_f64(w2));
                let n2 = u1 * u1 + u2 * u2;
                let quad = b.a11 * u1 * u1 + 2.0 * b.a12 * u1 * u2 + b.a22 * u2 * u2;
                x.push(rationalize(quad / (n2 * n2), max_den)?);
            }
            Shape::Zero => {}
        }
    }
    Some(x)
}

fn assemble(x: &[Rat], face: &Face) -> Vec<Sym2> {
    let mut it = x.iter();
    face.shapes
        .iter()
        .map(|s| match s {
            Shape::Full => {
                let (a, b, c) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
                Sym2::new(a.clone(), b.clone(), c.clone())
            }
            Shape::Ray(w1, w2) => {
                let al = it.next().unwrap();
                Sym2::new(al * w1 * w1, al * w1 * w2, al * w2 * w2)
            }
            Shape::Zero => Sym2::zero(),
        })
        .collect()
}

fn rational_sym2(s: &Sym2<f64>, max_den: u64) -> Option<Sym2> {
    Some(Sym2::new(rationalize(s.a11, max_den)?, rationalize(s.a12, max_den)?, rationalize(s.a22, max_den)?))
}

/// One-shot form of [`CertContext::certify`].
pub fn certify(v: &VRep, a: &MatTuple, outcome: &SolveOutcome, max_den: u64) -> Result<Certificate> {
    let h = facets_of(v)?;
    CertContext::new(v, &h).certify(a, outcome, max_den)
}
