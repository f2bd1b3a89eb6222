//! Dykstra-corrected alternating projections between the affine equality set
//! and the product of PSD cones.

use nalgebra::DVector;

use super::project::{encode, AffineMap};
use super::{dual_from_adjoint, FeasProblem, SolveOutcome, Status};

/// Cycles between displacement comparisons.
pub const WINDOW: usize = 50;

pub fn decide_pt(problem: &FeasProblem) -> SolveOutcome {
    let map = AffineMap::new(&problem.generators);
    run(&map, &encode(&problem.target), problem.tolerance, problem.iter_max)
}

/// Budget of each margin-seeking pass.
const RECENTER_ITERS: usize = 5_000;
/// Shifts tried after a boundary hit, relative to the target scale.
const RECENTER_SHIFTS: [f64; 2] = [1e-3, 1e-6];

/// Alternating projections; a feasible point found on the PSD boundary is
/// pushed inward by rerunning against `{P ⪰ δ·I}`, which keeps rounding
/// from falling out of the cone. The boundary point is kept if no shift works.
pub(crate) fn run(map: &AffineMap, target: &DVector<f64>, tol: f64, iter_max: usize) -> SolveOutcome {
    let scale = target.norm().max(1.0);
    let x0 = DVector::zeros(map.vars());
    let (first, point) = iterate(map, target, tol, iter_max, 0.0, x0);
    let Some(y) = point.filter(|_| first.status == Status::Feasible && first.margin < RECENTER_SHIFTS[0] * scale) else {
        return first;
    };
    for rel in RECENTER_SHIFTS {
        let delta = rel * scale;
        let (out, _) = iterate(map, target, tol, RECENTER_ITERS.min(iter_max), delta, y.clone());
        if out.status == Status::Feasible && out.margin >= 0.5 * delta {
            return SolveOutcome { iterations: first.iterations + out.iterations, ..out };
        }
    }
    first
}

/// One Dykstra run against the cone shifted by `delta`. Infeasibility is only
/// reported for the unshifted cone.
fn iterate(
    map: &AffineMap,
    target: &DVector<f64>,
    tol: f64,
    iter_max: usize,
    delta: f64,
    start: DVector<f64>,
) -> (SolveOutcome, Option<DVector<f64>>) {
    let nv = map.vars();
    let scale = target.norm().max(1.0);
    let mut x = start;
    let mut q = DVector::zeros(nv);
    let mut y = DVector::zeros(nv);
    let mut z = DVector::zeros(nv);
    let mut scratch = DVector::zeros(target.len());
    let mut previous: Option<DVector<f64>> = None;
    let floor = if delta > 0.0 { 0.5 * delta } else { -tol * scale };

    for it in 1..=iter_max {
        y.copy_from(&x);
        map.project(&mut y, target, &mut scratch);
        let lam = map.min_eigenvalue(&y);
        if lam >= floor {
            return (SolveOutcome::feasible(map.blocks(&y), map.residual(&y, target), lam, it), Some(y));
        }

        z.copy_from(&y);
        z += &q;
        x.copy_from(&z);
        map.project_shifted_cone(&mut x, delta);
        q.copy_from(&z);
        q -= &x;
        let residual = map.residual(&x, target);
        if residual <= tol * scale {
            let lam = map.min_eigenvalue(&x);
            return (SolveOutcome::feasible(map.blocks(&x), residual, lam, it), Some(x));
        }

        if delta == 0.0 && it % WINDOW == 0 {
            let g = &y - &x;
            let gn = g.norm();
            if let Some(prev) = previous.as_ref() {
                if (&g - prev).norm() <= tol * gn && gn >= 10.0 * tol * scale && map.is_full() {
                    let (dual, margin) = dual_from_adjoint(map, &g, -1.0);
                    let out = SolveOutcome {
                        status: Status::Infeasible,
                        primal: None,
                        dual: Some(dual),
                        residual: gn,
                        margin,
                        iterations: it,
                    };
                    return (out, None);
                }
            }
            previous = Some(g);
        }
    }
    (SolveOutcome::undecided(map.residual(&x, target), iter_max), None)
}
