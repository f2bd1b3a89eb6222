//! Named cone families used by tests, benchmarks and the CLI.

use std::f64::consts::PI;

use super::VRep;
use crate::exact::rat::{rat, rationalize, RatVector};

/// `cc{e_1, …, e_d}`.
pub fn orthant(d: usize) -> VRep {
    let gens = (0..d).map(|i| (0..d).map(|j| rat((i == j) as i64)).collect()).collect();
    VRep::new(d, gens).expect("orthant")
}

/// Cone over the square `[-1,1]²` in standard order `v_1 … v_4`.
pub fn square_cone() -> VRep {
    VRep::from_ints(&[&[1, -1, 1], &[-1, -1, 1], &[-1, 1, 1], &[1, 1, 1]]).expect("square")
}

/// Cone over a regular `k`-gon at height one, vertices rounded to denominators ≤ 1000.
pub fn polygon_cone(k: usize) -> VRep {
    assert!(k >= 3);
    let gens = (0..k)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / k as f64;
            vec![rationalize(a.cos(), 1000).unwrap(), rationalize(a.sin(), 1000).unwrap(), rat(1)]
        })
        .collect();
    VRep::new(3, gens).expect("polygon")
}

/// Cone over the `(d−1)`-cube: generators `(±1, …, ±1, 1)`.
pub fn cube_cone(d: usize) -> VRep {
    assert!(d >= 2);
    let gens = (0..1usize << (d - 1))
        .map(|mask| {
            let mut g: RatVector = (0..d - 1).map(|i| rat(if mask >> i & 1 == 1 { 1 } else { -1 })).collect();
            g.push(rat(1));
            g
        })
        .collect();
    VRep::new(d, gens).expect("cube")
}

/// Cone over the `(d−1)`-dimensional cross-polytope: generators `±e_i + e_d`.
pub fn cross_polytope_cone(d: usize) -> VRep {
    assert!(d >= 2);
    let mut gens = Vec::new();
    for i in 0..d - 1 {
        for s in [1, -1] {
            let mut g: RatVector = vec![rat(0); d];
            g[i] = rat(s);
            g[d - 1] = rat(1);
            gens.push(g);
        }
    }
    VRep::new(d, gens).expect("cross-polytope")
}

/// Cone over a square pyramid: the apex `(0,0,1,1)` has a square vertex figure.
pub fn square_pyramid_cone() -> VRep {
    VRep::from_ints(&[&[1, -1, 0, 1], &[-1, -1, 0, 1], &[-1, 1, 0, 1], &[1, 1, 0, 1], &[0, 0, 1, 1]]).expect("pyramid")
}
