//! Level-2 non-commutative extensions of a cone.
//!
//! A tuple `A = (A_1, …, A_d)` of symmetric 2×2 matrices lies in `C₂^ph` when
//! every facet functional evaluates to a PSD matrix, and in `C₂^pt` when it is
//! a sum `Σ P_i ⊗ v_i` with PSD coefficients. Both verifiers here are exact.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rat::{Rat, RatVector};
use crate::exact::{psd2_check, RatMatrix, Sym2};
use crate::polyhedral::{analyze, HRep, LinearIso, VRep};

/// Matrix size of every tuple entry.
pub const LEVEL: usize = 2;

/// `(A_1, …, A_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatTuple {
    pub entries: Vec<Sym2>,
}

/// Blocks `P_i`, aligned with the generators of a cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PtDecomposition {
    pub blocks: Vec<Sym2>,
}

/// Blocks `B_j` of the functional `X ↦ Σ_j ⟨B_j, X_j⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SepCertificate {
    pub blocks: Vec<Sym2>,
}

impl MatTuple {
    pub fn new(entries: Vec<Sym2>) -> Self {
        Self { entries }
    }

    pub fn zero(d: usize) -> Self {
        Self { entries: vec![Sym2::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn to_f64(&self) -> Vec<Sym2<f64>> {
        self.entries.iter().map(Sym2::to_f64).collect()
    }
}

impl SepCertificate {
    pub fn new(blocks: Vec<Sym2>) -> Self {
        Self { blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.len()
    }
}

impl PtDecomposition {
    pub fn new(blocks: Vec<Sym2>) -> Self {
        Self { blocks }
    }
}

/// First condition that failed in an exact check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `ℓ_k(A)` is not PSD.
    Facet(usize),
    /// Block `P_i` is not PSD.
    Block(usize),
    /// Entry `j` of `Σ P_i ⊗ v_i` differs from `A_j`.
    Entry(usize),
    /// `Σ_j (v_i)_j B_j` is not PSD.
    Generator(usize),
    /// `Σ_j ⟨B_j, A_j⟩` is not negative.
    Objective(Rat),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Facet(k) => write!(f, "facet functional {k} is not PSD on the tuple"),
            Violation::Block(i) => write!(f, "decomposition block {i} is not PSD"),
            Violation::Entry(j) => write!(f, "decomposition does not reproduce tuple entry {j}"),
            Violation::Generator(i) => write!(f, "certificate is not PSD on generator {i}"),
            Violation::Objective(v) => write!(f, "certificate value {v} is not negative"),
        }
    }
}

fn expect_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `Σ_j c_j · X_j`.
pub fn combine(coeffs: &[Rat], xs: &[Sym2]) -> Result<Sym2> {
    expect_dim(coeffs.len(), xs.len())?;
    let mut acc = Sym2::zero();
    for (c, x) in coeffs.iter().zip(xs) {
        if !c.is_zero() {
            acc = acc.add_scaled(c, x);
        }
    }
    Ok(acc)
}

/// `ℓ(A) = Σ_j ℓ_j · A_j`.
pub fn eval_functional(ell: &[Rat], a: &MatTuple) -> Result<Sym2> {
    combine(ell, &a.entries)
}

/// Index of the first facet functional that is not PSD on `a`.
pub fn ph_violation(h: &HRep, a: &MatTuple) -> Result<Option<usize>> {
    expect_dim(h.dim(), a.dim())?;
    for (k, l) in h.functionals().iter().enumerate() {
        if !psd2_check(&eval_functional(l, a)?) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn member_ph(h: &HRep, a: &MatTuple) -> Result<bool> {
    Ok(ph_violation(h, a)?.is_none())
}

/// `Σ_i P_i ⊗ v_i`, whose `j`-th entry is `Σ_i (v_i)_j P_i`.
pub fn pt_image(v: &VRep, blocks: &[Sym2]) -> Result<MatTuple> {
    expect_dim(v.len(), blocks.len())?;
    let d = v.dim();
    let mut entries = vec![Sym2::zero(); d];
    for (g, p) in v.generators().iter().zip(blocks) {
        if p.is_zero() {
            continue;
        }
        for (e, c) in entries.iter_mut().zip(g) {
            if !c.is_zero() {
                *e = e.add_scaled(c, p);
            }
        }
    }
    Ok(MatTuple::new(entries))
}

pub fn check_pt(v: &VRep, a: &MatTuple, dec: &PtDecomposition) -> Result<Option<Violation>> {
    expect_dim(v.dim(), a.dim())?;
    expect_dim(v.len(), dec.blocks.len())?;
    if let Some(i) = dec.blocks.iter().position(|p| !psd2_check(p)) {
        return Ok(Some(Violation::Block(i)));
    }
    let image = pt_image(v, &dec.blocks)?;
    Ok(image.entries.iter().zip(&a.entries).position(|(x, y)| x != y).map(Violation::Entry))
}

pub fn verify_pt(v: &VRep, a: &MatTuple, dec: &PtDecomposition) -> Result<bool> {
    Ok(check_pt(v, a, dec)?.is_none())
}

/// `Σ_j ⟨B_j, A_j⟩`.
pub fn sep_value(cert: &SepCertificate, a: &MatTuple) -> Result<Rat> {
    expect_dim(a.dim(), cert.dim())?;
    Ok(cert.blocks.iter().zip(&a.entries).map(|(b, x)| b.inner(x)).sum())
}

pub fn check_sep(v: &VRep, a: &MatTuple, cert: &SepCertificate) -> Result<Option<Violation>> {
    expect_dim(v.dim(), a.dim())?;
    expect_dim(v.dim(), cert.dim())?;
    for (i, g) in v.generators().iter().enumerate() {
        if !psd2_check(&combine(g, &cert.blocks)?) {
            return Ok(Some(Violation::Generator(i)));
        }
    }
    let value = sep_value(cert, a)?;
    Ok((!value.is_negative()).then_some(Violation::Objective(value)))
}

/// True iff `cert` exactly proves `a ∉ C₂^pt(v)`.
pub fn verify_sep(v: &VRep, a: &MatTuple, cert: &SepCertificate) -> Result<bool> {
    Ok(check_sep(v, a, cert)?.is_none())
}

/// `A'_j = Σ_k T_jk · A_k`.
pub fn transform_tuple(iso: &LinearIso, a: &MatTuple) -> Result<MatTuple> {
    let d = iso.dim();
    expect_dim(d, a.dim())?;
    let t = iso.matrix();
    (0..d)
        .map(|j| combine(t.row(j), &a.entries))
        .collect::<Result<_>>()
        .map(MatTuple::new)
}

/// `B'_j = Σ_k (T⁻¹)_kj · B_k`.
pub fn transform_certificate(iso: &LinearIso, cert: &SepCertificate) -> Result<SepCertificate> {
    let d = iso.dim();
    expect_dim(d, cert.dim())?;
    let t_inv = iso.inverse_matrix();
    (0..d)
        .map(|j| combine(&t_inv.column(j), &cert.blocks))
        .collect::<Result<_>>()
        .map(SepCertificate::new)
}

/// The unique decomposition over a simplex cone: `P_i = ℓ_i(A)` for the dual basis.
///
/// When `v` lists a ray more than once, the first occurrence carries the block.
pub fn simplex_decompose(v: &VRep, a: &MatTuple) -> Result<PtDecomposition> {
    expect_dim(v.dim(), a.dim())?;
    let an = analyze(v)?;
    if !an.simplex {
        return Err(Error::NotSimplex);
    }
    let d = v.dim();
    let mut reps = Vec::with_capacity(d);
    for ray in an.extreme_rays.generators() {
        let (idx, scale) = v
            .generators()
            .iter()
            .enumerate()
            .find_map(|(i, g)| positive_multiple(g, ray).map(|s| (i, s)))
            .ok_or_else(|| Error::Verification("extreme ray not among the generators".into()))?;
        reps.push((idx, scale));
    }
    let cols: Vec<RatVector> = reps.iter().map(|&(i, _)| v.generators()[i].clone()).collect();
    let dual = RatMatrix::from_cols(&cols, d)
        .inverse()
        .ok_or_else(|| Error::Verification("simplex generators are dependent".into()))?;
    let mut blocks = vec![Sym2::zero(); v.len()];
    for (k, &(idx, _)) in reps.iter().enumerate() {
        let p = eval_functional(dual.row(k), a)?;
        if !psd2_check(&p) {
            return Err(Error::NotMember);
        }
        blocks[idx] = p;
    }
    let dec = PtDecomposition::new(blocks);
    match check_pt(v, a, &dec)? {
        None => Ok(dec),
        Some(why) => Err(Error::Verification(why.to_string())),
    }
}

/// `s > 0` with `g = s · r`, if any.
fn positive_multiple(g: &[Rat], r: &[Rat]) -> Option<Rat> {
    let k = r.iter().position(|x| !x.is_zero())?;
    let s = &g[k] / &r[k];
    (s.is_positive() && g.iter().zip(r).all(|(x, y)| *x == &s * y)).then_some(s)
}

/// Rational `u` with `uᵀ S u < 0`, for `S` not PSD.
pub fn negative_direction(s: &Sym2) -> Option<(Rat, Rat)> {
    if s.a11.is_negative() {
        return Some((Rat::one(), Rat::zero()));
    }
    if s.a22.is_negative() {
        return Some((Rat::zero(), Rat::one()));
    }
    if !s.det().is_negative() {
        return None;
    }
    if s.a22.is_positive() {
        Some((s.a22.clone(), -&s.a12))
    } else {
        let two = Rat::from_integer(2.into());
        Some((Rat::one(), -(&s.a11 + Rat::one()) / (two * &s.a12)))
    }
}

/// For `a ∉ C₂^ph`, the certificate `B_j = ℓ_j · uuᵀ` built from a violated
/// facet `ℓ` and a direction `u` with `uᵀ ℓ(A) u < 0`. It proves `a ∉ C₂^pt`.
pub fn ph_violation_certificate(v: &VRep, h: &HRep, a: &MatTuple) -> Result<Option<SepCertificate>> {
    let Some(k) = ph_violation(h, a)? else { return Ok(None) };
    let l = &h.functionals()[k];
    let (u1, u2) = negative_direction(&eval_functional(l, a)?).expect("violated facet has a negative direction");
    let uu = Sym2::new(&u1 * &u1, &u1 * &u2, &u2 * &u2);
    let cert = SepCertificate::new(l.iter().map(|c| uu.scale(c)).collect());
    Ok(verify_sep(v, a, &cert)?.then_some(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, rat, rat_vec};
    use crate::polyhedral::{facets_of, families};

    fn s(a: i64, b: i64, c: i64) -> Sym2 {
        Sym2::new(rat(a), rat(b), rat(c))
    }

    fn base() -> MatTuple {
        MatTuple::new(vec![s(1, 0, -1), s(0, 1, 0), s(1, 0, 1)])
    }

    #[test]
    fn functional_evaluation() {
        let a = base();
        assert_eq!(eval_functional(&rat_vec(&[-1, 0, 1]), &a).unwrap(), s(0, 0, 2));
        assert_eq!(eval_functional(&rat_vec(&[0, 1, 1]), &a).unwrap(), s(1, 1, 1));
        assert_eq!(eval_functional(&rat_vec(&[0, 0, 0]), &a).unwrap(), Sym2::zero());
        assert_eq!(eval_functional(&rat_vec(&[0, 1, 0]), &a).unwrap(), s(0, 1, 0));
        assert!(matches!(eval_functional(&rat_vec(&[1, 0]), &a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ph_membership_on_square() {
        let h = facets_of(&families::square_cone()).unwrap();
        assert!(member_ph(&h, &base()).unwrap());
        let neg = MatTuple::new(vec![Sym2::zero(), Sym2::zero(), s(-1, 0, -1)]);
        assert!(!member_ph(&h, &neg).unwrap());
    }

    #[test]
    fn pt_examples_on_square() {
        let v = families::square_cone();
        let mut blocks = vec![Sym2::zero(); 4];
        blocks[3] = Sym2::identity();
        let a = MatTuple::new(vec![Sym2::identity(); 3]);
        assert!(verify_pt(&v, &a, &PtDecomposition::new(blocks)).unwrap());

        let quarter = Sym2::scalar(frac(1, 4));
        let a = MatTuple::new(vec![Sym2::zero(), Sym2::zero(), Sym2::identity()]);
        assert!(verify_pt(&v, &a, &PtDecomposition::new(vec![quarter; 4])).unwrap());

        let h1 = Sym2::diag(frac(1, 2), rat(0));
        let h2 = Sym2::diag(rat(0), frac(1, 2));
        let a = MatTuple::new(vec![s(1, 0, -1), Sym2::zero(), Sym2::identity()]);
        let dec = PtDecomposition::new(vec![h1.clone(), h2.clone(), h2, h1]);
        assert!(verify_pt(&v, &a, &dec).unwrap());
    }

    #[test]
    fn pt_violations_are_named() {
        let v = families::square_cone();
        let a = MatTuple::new(vec![Sym2::zero(), Sym2::zero(), Sym2::identity()]);
        let mut blocks = vec![Sym2::scalar(frac(1, 4)); 4];
        blocks[2] = s(1, 0, -1);
        assert_eq!(check_pt(&v, &a, &PtDecomposition::new(blocks)).unwrap(), Some(Violation::Block(2)));
        let blocks = vec![Sym2::scalar(frac(1, 2)); 4];
        assert_eq!(check_pt(&v, &a, &PtDecomposition::new(blocks)).unwrap(), Some(Violation::Entry(2)));
    }

    #[test]
    fn zero_certificate_is_rejected() {
        let v = families::square_cone();
        let cert = SepCertificate::new(vec![Sym2::zero(); 3]);
        assert_eq!(check_sep(&v, &base(), &cert).unwrap(), Some(Violation::Objective(rat(0))));
    }

    #[test]
    fn transforms_under_identity_and_scaling() {
        let a = base();
        let id = LinearIso::identity(3);
        assert_eq!(transform_tuple(&id, &a).unwrap(), a);
        let cert = SepCertificate::new(vec![s(1, 2, 3), s(0, 1, 0), s(4, 0, 4)]);
        assert_eq!(transform_certificate(&id, &cert).unwrap(), cert);

        let mut two = RatMatrix::identity(3);
        for i in 0..3 {
            two.set(i, i, rat(2));
        }
        let iso = LinearIso::new(two).unwrap();
        let halved = transform_certificate(&iso, &cert).unwrap();
        assert_eq!(halved.blocks[0], s(1, 2, 3).scale(&frac(1, 2)));
    }

    #[test]
    fn permutation_permutes_entries() {
        let p = RatMatrix::from_rows(&[rat_vec(&[0, 1, 0]), rat_vec(&[0, 0, 1]), rat_vec(&[1, 0, 0])], 3);
        let iso = LinearIso::new(p).unwrap();
        let a = base();
        let b = transform_tuple(&iso, &a).unwrap();
        assert_eq!(b.entries, vec![a.entries[1].clone(), a.entries[2].clone(), a.entries[0].clone()]);
    }

    #[test]
    fn orthant_decomposition_is_the_tuple() {
        let v = families::orthant(2);
        let a = MatTuple::new(vec![Sym2::identity(), Sym2::identity()]);
        assert_eq!(simplex_decompose(&v, &a).unwrap().blocks, a.entries);
        let v = families::orthant(3);
        let a = MatTuple::new(vec![s(2, 1, 1), s(0, 0, 0), s(1, 0, 3)]);
        assert_eq!(simplex_decompose(&v, &a).unwrap().blocks, a.entries);
        let bad = MatTuple::new(vec![s(1, 0, -1), s(1, 0, 1), s(1, 0, 1)]);
        assert_eq!(simplex_decompose(&v, &bad), Err(Error::NotMember));
        assert_eq!(simplex_decompose(&families::square_cone(), &base()), Err(Error::NotSimplex));
    }

    #[test]
    fn negative_directions() {
        for m in [s(-1, 0, 5), s(5, 0, -1), s(1, 2, 1), s(0, 1, 0), s(3, -7, 0), s(0, 2, 9)] {
            let (u1, u2) = negative_direction(&m).unwrap();
            let q = &m.a11 * &u1 * &u1 + rat(2) * &m.a12 * &u1 * &u2 + &m.a22 * &u2 * &u2;
            assert!(q.is_negative(), "{m:?}");
        }
        assert!(negative_direction(&s(1, 1, 1)).is_none());
    }

    #[test]
    fn ph_violation_yields_certificate() {
        let v = families::square_cone();
        let h = facets_of(&v).unwrap();
        let outside = MatTuple::new(vec![s(2, 0, -1), Sym2::zero(), Sym2::identity()]);
        let cert = ph_violation_certificate(&v, &h, &outside).unwrap().unwrap();
        assert!(verify_sep(&v, &outside, &cert).unwrap());
        assert!(ph_violation_certificate(&v, &h, &base()).unwrap().is_none());
    }
}
