//! Fixed inputs for the benchmarks.

use ncpoly::exact::rat::rat;
use ncpoly::polyhedral::families;
use ncpoly::section::SectionSpec;
use ncpoly::{MatTuple, VRep};

/// Cones of increasing size, from the square to the cone over the 4-cube.
pub fn cones() -> Vec<(&'static str, VRep)> {
    vec![
        ("square", families::square_cone()),
        ("octagon", families::polygon_cone(8)),
        ("cube", families::cube_cone(4)),
        ("cross-polytope-5", families::cross_polytope_cone(5)),
        ("cube-prism", families::cube_cone(5)),
    ]
}

/// Three points of the default square section: deep inside, near the
/// boundary `x + 2y² = 1`, and inside the polyhedral extension only.
pub fn section_points() -> Vec<(&'static str, MatTuple)> {
    let spec = SectionSpec::default();
    vec![
        ("interior", spec.point(&rat(0), &rat(0))),
        ("near-boundary", spec.point(&ncpoly::exact::rat::frac(49, 100), &ncpoly::exact::rat::frac(1, 2))),
        ("ph-only", spec.point(&rat(1), &rat(1))),
    ]
}
