//! Real symmetric 2×2 matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;

/// Symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`; symmetry is structural.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sym2<T = Rat> {
    pub a11: T,
    pub a12: T,
    pub a22: T,
}

impl<T> Sym2<T> {
    pub const fn new(a11: T, a12: T, a22: T) -> Self {
        Self { a11, a12, a22 }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Sym2<U> {
        Sym2::new(f(&self.a11), f(&self.a12), f(&self.a22))
    }
}

impl<T: Clone + Num> Sym2<T> {
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::scalar(T::one())
    }

    pub fn scalar(s: T) -> Self {
        Self::new(s.clone(), T::zero(), s)
    }

    pub fn diag(a11: T, a22: T) -> Self {
        Self::new(a11, T::zero(), a22)
    }

    /// `[[0, s], [s, 0]]`.
    pub fn offdiag(s: T) -> Self {
        Self::new(T::zero(), s, T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a11.is_zero() && self.a12.is_zero() && self.a22.is_zero()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.a11.clone() * s.clone(), self.a12.clone() * s.clone(), self.a22.clone() * s.clone())
    }

    pub fn trace(&self) -> T {
        self.a11.clone() + self.a22.clone()
    }

    pub fn det(&self) -> T {
        self.a11.clone() * self.a22.clone() - self.a12.clone() * self.a12.clone()
    }

    /// Trace inner product `tr(XY)`; the off-diagonal entry counts twice.
    pub fn inner(&self, other: &Self) -> T {
        let two = T::one() + T::one();
        self.a11.clone() * other.a11.clone()
            + two * self.a12.clone() * other.a12.clone()
            + self.a22.clone() * other.a22.clone()
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: &T, other: &Self) -> Self {
        Self::new(
            self.a11.clone() + s.clone() * other.a11.clone(),
            self.a12.clone() + s.clone() * other.a12.clone(),
            self.a22.clone() + s.clone() * other.a22.clone(),
        )
    }
}

impl<T: Clone + Num + PartialOrd> Sym2<T> {
    /// Positive semidefiniteness via the 2×2 principal-minor criterion.
    pub fn is_psd(&self) -> bool {
        let zero = T::zero();
        self.a11 >= zero && self.a22 >= zero && self.det() >= zero
    }
}

/// Exact PSD test: `a11 ≥ 0`, `a22 ≥ 0` and `a11·a22 − a12² ≥ 0`.
pub fn psd2_check(s: &Sym2) -> bool {
    s.is_psd()
}

/// Rational `μ ≥ 0` with `μ·I + S` PSD: `max(0, −a11, −a22) + |a12|`.
///
/// Not tight; avoids square roots.
pub fn psd_shift_bound(s: &Sym2) -> Rat {
    let mut m = Rat::zero();
    if -&s.a11 > m {
        m = -&s.a11;
    }
    if -&s.a22 > m {
        m = -&s.a22;
    }
    m + s.a12.abs()
}

impl Sym2<f64> {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a11 + self.a22);
        let half_diff = 0.5 * (self.a11 - self.a22);
        let r = half_diff.hypot(self.a12);
        (mean - r, mean + r)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().0
    }

    pub fn frobenius(&self) -> f64 {
        self.inner(self).sqrt()
    }
}

impl Sym2 {
    pub fn to_f64(&self) -> Sym2<f64> {
        self.map(super::rat::to_f64)
    }
}

impl<T: Clone + Num> Add for &Sym2<T> {
    type Output = Sym2<T>;
    fn add(self, o: &Sym2<T>) -> Sym2<T> {
        Sym2::new(
            self.a11.clone() + o.a11.clone(),
            self.a12.clone() + o.a12.clone(),
            self.a22.clone() + o.a22.clone(),
        )
    }
}

impl<T: Clone + Num> Sub for &Sym2<T> {
    type Output = Sym2<T>;
    fn sub(self, o: &Sym2<T>) -> Sym2<T> {
        Sym2::new(
            self.a11.clone() - o.a11.clone(),
            self.a12.clone() - o.a12.clone(),
            self.a22.clone() - o.a22.clone(),
        )
    }
}

impl<T: Clone + Num> Mul<&T> for &Sym2<T> {
    type Output = Sym2<T>;
    fn mul(self, s: &T) -> Sym2<T> {
        self.scale(s)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for &Sym2<T> {
    type Output = Sym2<T>;
    fn neg(self) -> Sym2<T> {
        Sym2::new(-self.a11.clone(), -self.a12.clone(), -self.a22.clone())
    }
}

impl<T: Clone + Num> Zero for Sym2<T> {
    fn zero() -> Self {
        Sym2::zero()
    }
    fn is_zero(&self) -> bool {
        Sym2::is_zero(self)
    }
}

impl<T: Clone + Num> Add for Sym2<T> {
    type Output = Sym2<T>;
    fn add(self, o: Sym2<T>) -> Sym2<T> {
        &self + &o
    }
}
