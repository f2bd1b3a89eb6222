//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ncpoly::exact::rat::{frac, rat};
use ncpoly::nc_sets::member_ph;
use ncpoly::polyhedral::analyze;
use ncpoly::{HRep, MatTuple, Rat, RatMatrix, RatVector, Sym2, VRep};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(rng: &mut impl Rng, lim: i64, den: i64) -> Rat {
    frac(rng.gen_range(-lim * den..=lim * den), den)
}

/// Rays with last coordinate in `1..=4`, so the cone is pointed.
pub fn random_rays(rng: &mut impl Rng, d: usize, n: usize) -> VRep {
    let gens = (0..n)
        .map(|_| {
            let mut g: RatVector = (0..d - 1).map(|_| rat(rng.gen_range(-4..=4))).collect();
            g.push(rat(rng.gen_range(1..=4)));
            g
        })
        .collect();
    VRep::new(d, gens).unwrap()
}

/// Random proper cone that is not a simplex cone, with at most `n_max` generators.
pub fn random_nonsimplex(rng: &mut impl Rng, d: usize, n_max: usize) -> VRep {
    loop {
        let n = rng.gen_range(d + 1..=n_max);
        let v = random_rays(rng, d, n);
        let a = analyze(&v).unwrap();
        if a.proper && !a.simplex {
            return v;
        }
    }
}

pub fn random_invertible(rng: &mut impl Rng, d: usize) -> RatMatrix {
    loop {
        let data = (0..d * d).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let m = RatMatrix::new(d, d, data);
        if m.rank() == d {
            return m;
        }
    }
}

/// Image of the orthant under a random invertible integer matrix.
pub fn random_simplex_cone(rng: &mut impl Rng, d: usize) -> VRep {
    let t = random_invertible(rng, d);
    VRep::new(d, (0..d).map(|j| t.column(j)).collect()).unwrap()
}

/// PSD with rational entries: a rank-one `α·uuᵀ` a quarter of the time,
/// otherwise diagonally dominant.
pub fn random_psd(rng: &mut impl Rng) -> Sym2 {
    if rng.gen_range(0..4) == 0 {
        let (u1, u2) = (small_rat(rng, 3, 2), small_rat(rng, 3, 2));
        let a = frac(rng.gen_range(0..=8), 4);
        return Sym2::new(&a * &u1 * &u1, &a * &u1 * &u2, &a * &u2 * &u2);
    }
    let b = small_rat(rng, 2, 4);
    let a11 = b.abs() + frac(rng.gen_range(0..=12), 4);
    let a22 = b.abs() + frac(rng.gen_range(0..=12), 4);
    Sym2::new(a11, b, a22)
}

/// `P` with smallest eigenvalue at least `floor`, in floating point.
pub fn random_psd_f64(rng: &mut impl Rng, floor: f64) -> Sym2<f64> {
    let b: f64 = rng.gen_range(-1.0..1.0);
    let a11 = b.abs() + floor + rng.gen_range(0.0..2.0);
    let a22 = b.abs() + floor + rng.gen_range(0.0..2.0);
    Sym2::new(a11, b, a22)
}

/// `Σ P_i ⊗ v_i`.
pub fn synthesize(v: &VRep, blocks: &[Sym2]) -> MatTuple {
    let mut a = MatTuple::zero(v.dim());
    for (g, p) in v.generators().iter().zip(blocks) {
        for (e, c) in a.entries.iter_mut().zip(g) {
            *e = &*e + &p.scale(c);
        }
    }
    a
}

pub fn random_sym2(rng: &mut impl Rng, lim: i64) -> Sym2 {
    Sym2::new(small_rat(rng, lim, 2), small_rat(rng, lim, 2), small_rat(rng, lim, 2))
}

/// Rejection sampling: `T·X` for a random tuple `X` with block entries
/// biased towards PSD, accepted when it lies in `C₂^ph`.
pub fn random_ph_member(rng: &mut impl Rng, v: &VRep, h: &HRep) -> (MatTuple, usize) {
    let d = v.dim();
    let t = RatMatrix::from_cols(v.generators(), d);
    let mut tries = 0;
    loop {
        tries += 1;
        let x: Vec<Sym2> = (0..v.len())
            .map(|_| {
                let s = random_psd(rng);
                let noise = Sym2::new(small_rat(rng, 1, 4), small_rat(rng, 1, 4), small_rat(rng, 1, 4));
                &s + &noise
            })
            .collect();
        let entries = (0..d)
            .map(|j| {
                let mut e = Sym2::zero();
                for (k, xk) in x.iter().enumerate() {
                    e = &e + &xk.scale(t.get(j, k));
                }
                e
            })
            .collect();
        let a = MatTuple::new(entries);
        if member_ph(h, &a).unwrap() {
            return (a, tries);
        }
    }
}

/// Primitive integer direction of `v`, as rationals, sign kept.
pub fn primitive(v: &[Rat]) -> RatVector {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank(rows: &[RatVector], d: usize) -> usize {
    if rows.is_empty() {
        0
    } else {
        RatMatrix::from_rows(rows, d).rank()
    }
}

/// Row of a Fourier–Motzkin system: `coeffs · (x, λ) ≥ 0`, with the set of
/// original inequalities it came from.
#[derive(Clone)]
struct FmRow {
    coeffs: RatVector,
    history: BTreeSet<usize>,
}

/// Facet normals of `cc(gens)` by Fourier–Motzkin elimination of `λ` from
/// `x = Gλ, λ ≥ 0`, with Chernikov pruning, followed by a rank filter.
/// Normals are primitive and nonnegative on the cone, as a sorted set.
pub fn fm_facets(d: usize, gens: &[RatVector]) -> BTreeSet<RatVector> {
    let n = gens.len();
    let w = d + n;
    // Equalities x_j − Σ_i g_ij λ_i = 0, used for substitution.
    let mut eqs: Vec<RatVector> = (0..d)
        .map(|j| {
            let mut r = vec![Rat::zero(); w];
            r[j] = Rat::one();
            for (i, g) in gens.iter().enumerate() {
                r[d + i] = -g[j].clone();
            }
            r
        })
        .collect();
    let mut ineqs: Vec<FmRow> = (0..n)
        .map(|i| {
            let mut r = vec![Rat::zero(); w];
            r[d + i] = Rat::one();
            FmRow { coeffs: r, history: BTreeSet::from([i]) }
        })
        .collect();
    let mut free = Vec::new();
    for var in d..w {
        let Some(k) = eqs.iter().position(|e| !e[var].is_zero()) else {
            free.push(var);
            continue;
        };
        let e = eqs.remove(k);
        let sub = |r: &mut RatVector| {
            if r[var].is_zero() {
                return;
            }
            let f = &r[var] / &e[var];
            for (x, y) in r.iter_mut().zip(&e) {
                *x -= &f * y;
            }
        };
        for r in eqs.iter_mut() {
            sub(r);
        }
        for r in ineqs.iter_mut() {
            sub(&mut r.coeffs);
        }
    }
    // Pivoted variables are gone; the free ones are projected out.
    for (eliminated, &var) in free.iter().enumerate() {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for r in ineqs {
            if r.coeffs[var].is_positive() {
                pos.push(r);
            } else if r.coeffs[var].is_negative() {
                neg.push(r);
            } else {
                zero.push(r);
            }
        }
        let mut next = zero;
        for p in &pos {
            for q in &neg {
                let history: BTreeSet<usize> = p.history.union(&q.history).copied().collect();
                if history.len() > eliminated + 2 {
                    continue;
                }
                let (a, b) = (-&q.coeffs[var], p.coeffs[var].clone());
                let coeffs: RatVector = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| &a * x + &b * y).collect();
                next.push(FmRow { coeffs, history });
            }
        }
        ineqs = next;
    }
    // Remaining equalities in x alone would mean a lower-dimensional cone.
    assert!(eqs.iter().all(|e| e[..d].iter().all(Zero::is_zero)), "cone is not full-dimensional");
    let mut out = BTreeSet::new();
    for r in ineqs {
        let l: RatVector = r.coeffs[..d].to_vec();
        if l.iter().all(Zero::is_zero) {
            continue;
        }
        let on: Vec<RatVector> = gens.iter().filter(|g| dot(&l, g).is_zero()).cloned().collect();
        if rank(&on, d) == d - 1 {
            out.insert(primitive(&l));
        }
    }
    out
}

/// Extreme rays of `{x : ℓ·x ≥ 0}` as the facets of the dual cone.
pub fn fm_rays(d: usize, functionals: &[RatVector]) -> BTreeSet<RatVector> {
    fm_facets(d, functionals)
}

pub fn as_set(vs: &[RatVector]) -> BTreeSet<RatVector> {
    vs.iter().map(|v| primitive(v)).collect()
}
