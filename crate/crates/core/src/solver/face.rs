//! Exact facial reduction of the decomposition problem from facet data.
//!
//! If `ℓ(A)` is PSD but singular with kernel vector `u`, then
//! `0 = uᵀℓ(A)u = Σ_i ℓ(v_i)·uᵀP_iu` forces `P_i·u = 0` for every generator
//! off the facet. Restricting those blocks loses no decomposition and often
//! restores strict feasibility.

use num_traits::{One, Signed, Zero};

use super::project::BlockShape;
use crate::error::Result;
use crate::exact::rat::{dot, primitive_integer, to_f64, Rat};
use crate::exact::{psd2_check, Sym2};
use crate::nc_sets::{eval_functional, MatTuple};
use crate::polyhedral::{HRep, VRep};

/// Exact admissible form of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Full,
    /// `α·wwᵀ`, `α ≥ 0`.
    Ray(Rat, Rat),
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub shapes: Vec<Shape>,
}

/// Nonzero `u` with `S·u = 0`, for singular nonzero PSD `S`.
fn kernel_vector(s: &Sym2) -> (Rat, Rat) {
    let u = if !s.a11.is_zero() { [-&s.a12, s.a11.clone()] } else { [Rat::one(), Rat::zero()] };
    let p = primitive_integer(&u);
    (Rat::from_integer(p[0].clone()), Rat::from_integer(p[1].clone()))
}

impl Face {
    pub fn full(n: usize) -> Self {
        Self { shapes: vec![Shape::Full; n] }
    }

    /// Reduction from every facet functional that is singular on `a`.
    /// Intended for `a ∈ C₂^ph`; other facets are ignored.
    pub fn of(v: &VRep, h: &HRep, a: &MatTuple) -> Result<Self> {
        let mut kernels: Vec<Vec<(Rat, Rat)>> = vec![Vec::new(); v.len()];
        let mut zero = vec![false; v.len()];
        for l in h.functionals() {
            let s = eval_functional(l, a)?;
            if !psd2_check(&s) || s.det().is_positive() {
                continue;
            }
            let whole = s.is_zero();
            let u = (!whole).then(|| kernel_vector(&s));
            for (i, g) in v.generators().iter().enumerate() {
                if !dot(l, g).is_positive() {
                    continue;
                }
                match &u {
                    None => zero[i] = true,
                    Some(u) => kernels[i].push(u.clone()),
                }
            }
        }
        let shapes = kernels
            .into_iter()
            .zip(zero)
            .map(|(ks, z)| {
                if z {
                    return Shape::Zero;
                }
                let Some((u1, u2)) = ks.first() else { return Shape::Full };
                if ks.iter().any(|(k1, k2)| !(u1 * k2 - u2 * k1).is_zero()) {
                    Shape::Zero
                } else {
                    Shape::Ray(-u2, u1.clone())
                }
            })
            .collect();
        Ok(Self { shapes })
    }

    pub fn is_full(&self) -> bool {
        self.shapes.iter().all(|s| *s == Shape::Full)
    }

    pub(crate) fn float_shapes(&self) -> Vec<BlockShape> {
        self.shapes
            .iter()
            .map(|s| match s {
                Shape::Full => BlockShape::Full,
                Shape::Ray(w1, w2) => {
                    let (a, b) = (to_f64(w1), to_f64(w2));
                    let n = a.hypot(b);
                    BlockShape::Ray([a / n, b / n])
                }
                Shape::Zero => BlockShape::Zero,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, rat};
    use crate::polyhedral::{facets_of, families};

    #[test]
    fn section_plane_pins_two_blocks() {
        let v = families::square_cone();
        let h = facets_of(&v).unwrap();
        let a = MatTuple::new(vec![Sym2::new(frac(1, 2), rat(0), rat(-1)), Sym2::offdiag(frac(1, 5)), Sym2::identity()]);
        let f = Face::of(&v, &h, &a).unwrap();
        // x3 + x1 evaluates to diag(3/2, 0): generators with x1 = 1 lose e2.
        assert_eq!(f.shapes, vec![Shape::Ray(rat(-1), rat(0)), Shape::Full, Shape::Full, Shape::Ray(rat(-1), rat(0))]);
    }

    #[test]
    fn interior_tuple_is_unreduced() {
        let v = families::square_cone();
        let h = facets_of(&v).unwrap();
        let a = MatTuple::new(vec![Sym2::zero(), Sym2::zero(), Sym2::identity()]);
        assert!(Face::of(&v, &h, &a).unwrap().is_full());
    }

    #[test]
    fn vanishing_facet_zeroes_blocks() {
        let v = families::orthant(2);
        let h = facets_of(&v).unwrap();
        let a = MatTuple::new(vec![Sym2::identity(), Sym2::zero()]);
        assert_eq!(Face::of(&v, &h, &a).unwrap().shapes, vec![Shape::Full, Shape::Zero]);
    }
}
