//! Log-barrier path following on the phase-I problem
//! `min s` s.t. `P_i + s·I ⪰ 0`, `Σ P_i ⊗ v_i = A`.
//!
//! The optimum `s*` is negative exactly when a strictly feasible
//! decomposition exists; `−s*` is then the largest uniform PSD margin. When
//! `s* > 0` the central-path dual `Z_i = (τ·(P_i + s·I))⁻¹` yields a
//! separating certificate.

use nalgebra::{DMatrix, DVector};

use super::project::{encode, from_svec, AffineMap, BlockShape, SQRT2};
use super::{dual_from_adjoint, FeasProblem, SolveOutcome, Status};
use crate::exact::Sym2;

const GROWTH: f64 = 8.0;
const MAX_OUTER: usize = 60;
const MAX_NEWTON: usize = 80;

pub fn decide_pt_interior(problem: &FeasProblem) -> SolveOutcome {
    let map = AffineMap::new(&problem.generators);
    run(&map, &encode(&problem.target), problem.tolerance)
}

fn inverse(s: &Sym2<f64>) -> Sym2<f64> {
    let det = s.det();
    Sym2::new(s.a22 / det, -s.a12 / det, s.a11 / det)
}

/// `tr(W·X·W·Y)` for 2×2 symmetric matrices.
fn quad(w: &Sym2<f64>, x: &Sym2<f64>, y: &Sym2<f64>) -> f64 {
    let m = |a: &Sym2<f64>, b: &Sym2<f64>| {
        [
            [a.a11 * b.a11 + a.a12 * b.a12, a.a11 * b.a12 + a.a12 * b.a22],
            [a.a12 * b.a11 + a.a22 * b.a12, a.a12 * b.a12 + a.a22 * b.a22],
        ]
    };
    let wx = m(w, x);
    let wy = m(w, y);
    (0..2).map(|i| (0..2).map(|k| wx[i][k] * wy[k][i]).sum::<f64>()).sum()
}

const SVEC_BASIS: [Sym2<f64>; 3] =
    [Sym2::new(1.0, 0.0, 0.0), Sym2::new(0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0), Sym2::new(0.0, 0.0, 1.0)];

/// Shifted blocks at `u = (t, s)`: full blocks as matrices, rays as scalars.
enum Shifted {
    Full(Sym2<f64>),
    Ray(f64),
}

struct Phase1<'a> {
    map: &'a AffineMap,
    base: DVector<f64>,
    m: usize,
}

impl Phase1<'_> {
    fn point(&self, u: &DVector<f64>) -> DVector<f64> {
        let mut x = self.base.clone();
        if self.m > 0 {
            x.gemv(1.0, self.map.kernel(), &u.rows(0, self.m), 1.0);
        }
        x
    }

    /// One entry per generator; zero blocks map to `None`.
    fn shifted(&self, u: &DVector<f64>) -> Vec<Option<Shifted>> {
        let x = self.point(u);
        let s = u[self.m];
        self.map
            .shapes()
            .iter()
            .enumerate()
            .map(|(i, shape)| {
                let o = self.map.offset(i);
                match shape {
                    BlockShape::Full => {
                        let b = from_svec([x[o], x[o + 1], x[o + 2]]);
                        Some(Shifted::Full(Sym2::new(b.a11 + s, b.a12, b.a22 + s)))
                    }
                    BlockShape::Ray(_) => Some(Shifted::Ray(x[o] + s)),
                    BlockShape::Zero => None,
                }
            })
            .collect()
    }

    fn objective(&self, u: &DVector<f64>, tau: f64) -> Option<f64> {
        let mut f = tau * u[self.m];
        for b in self.shifted(u).into_iter().flatten() {
            let det = match b {
                Shifted::Full(b) if b.a11 > 0.0 => b.det(),
                Shifted::Full(_) => return None,
                Shifted::Ray(a) => a,
            };
            if det.is_nan() || det <= 0.0 {
                return None;
            }
            f -= det.ln();
        }
        Some(f)
    }

    /// Gradient and Hessian of `τ·s − Σ log det`.
    fn derivatives(&self, u: &DVector<f64>, tau: f64) -> (DVector<f64>, DMatrix<f64>) {
        let m = self.m;
        let nv = m + 1;
        let kernel = self.map.kernel();
        let mut grad = DVector::zeros(nv);
        let mut hess = DMatrix::zeros(nv, nv);
        grad[m] = tau;
        for (i, b) in self.shifted(u).into_iter().enumerate() {
            let o = self.map.offset(i);
            match b {
                Some(Shifted::Full(b)) => {
                    let w = inverse(&b);
                    let wv = DVector::from_row_slice(&[w.a11, SQRT2 * w.a12, w.a22]);
                    let mut jac = DMatrix::zeros(3, nv);
                    for c in 0..3 {
                        for col in 0..m {
                            jac[(c, col)] = kernel[(o + c, col)];
                        }
                    }
                    jac[(0, m)] = 1.0;
                    jac[(2, m)] = 1.0;
                    let h = DMatrix::from_fn(3, 3, |a, c| quad(&w, &SVEC_BASIS[a], &SVEC_BASIS[c]));
                    grad -= jac.tr_mul(&wv);
                    hess += jac.tr_mul(&(h * &jac));
                }
                Some(Shifted::Ray(a)) => {
                    let mut row = DVector::zeros(nv);
                    for col in 0..m {
                        row[col] = kernel[(o, col)];
                    }
                    row[m] = 1.0;
                    grad -= &row / a;
                    hess += &row * row.transpose() / (a * a);
                }
                None => {}
            }
        }
        (grad, hess)
    }

    /// `Z = (τ·(P + s·I))⁻¹` in variable coordinates.
    fn dual(&self, u: &DVector<f64>, tau: f64) -> DVector<f64> {
        let mut z = DVector::zeros(self.map.vars());
        for (i, b) in self.shifted(u).into_iter().enumerate() {
            let o = self.map.offset(i);
            if let Some(Shifted::Full(b)) = b {
                let w = inverse(&b);
                z[o] = w.a11 / tau;
                z[o + 1] = SQRT2 * w.a12 / tau;
                z[o + 2] = w.a22 / tau;
            }
        }
        z
    }
}

fn newton_step(grad: &DVector<f64>, hess: DMatrix<f64>) -> Option<DVector<f64>> {
    let rhs = -grad;
    if let Some(ch) = hess.clone().cholesky() {
        return Some(ch.solve(&rhs));
    }
    let n = hess.nrows();
    let reg = 1e-12 * hess.trace().abs().max(1.0);
    (hess + DMatrix::identity(n, n) * reg).lu().solve(&rhs)
}

pub(crate) fn run(map: &AffineMap, target: &DVector<f64>, tol: f64) -> SolveOutcome {
    let scale = target.norm().max(1.0);
    let base = map.pinv() * target;
    let residual0 = map.residual(&base, target);
    if residual0 > tol * scale {
        return SolveOutcome::undecided(residual0, 0);
    }
    let m = map.kernel().ncols();
    let phase = Phase1 { map, base, m };
    let nu: f64 = map
        .shapes()
        .iter()
        .map(|s| match s {
            BlockShape::Full => 2.0,
            BlockShape::Ray(_) => 1.0,
            BlockShape::Zero => 0.0,
        })
        .sum();
    if nu == 0.0 {
        return SolveOutcome::feasible(map.blocks(&phase.base), residual0, 0.0, 0);
    }

    let mut u = DVector::zeros(m + 1);
    u[m] = (-map.min_eigenvalue(&phase.base)).max(0.0) + scale;
    let mut tau = 1.0 / scale;
    let mut newton_total = 0;

    for _ in 0..MAX_OUTER {
        for _ in 0..MAX_NEWTON {
            newton_total += 1;
            let (grad, hess) = phase.derivatives(&u, tau);
            let Some(step) = newton_step(&grad, hess) else { break };
            let decrement = -grad.dot(&step);
            if !decrement.is_finite() || decrement <= 1e-12 {
                break;
            }
            let f0 = phase.objective(&u, tau).expect("iterate stays interior");
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let cand = &u + &step * alpha;
                if let Some(f) = phase.objective(&cand, tau) {
                    if f <= f0 - 0.25 * alpha * decrement {
                        u = cand;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved || decrement < 1e-10 {
                break;
            }
        }

        let s = u[m];
        let gap = nu / tau;
        if s < 0.0 && gap < -s {
            let x = phase.point(&u);
            return SolveOutcome::feasible(map.blocks(&x), map.residual(&x, target), map.min_eigenvalue(&x), newton_total);
        }
        if s - gap > 0.0 {
            if !map.is_full() {
                break;
            }
            let (dual, margin) = dual_from_adjoint(map, &phase.dual(&u, tau), 1.0);
            return SolveOutcome {
                status: Status::Infeasible,
                primal: None,
                dual: Some(dual),
                residual: s,
                margin,
                iterations: newton_total,
            };
        }
        if gap < tol * scale {
            break;
        }
        tau *= GROWTH;
    }
    SolveOutcome::undecided(u[m], newton_total)
}
