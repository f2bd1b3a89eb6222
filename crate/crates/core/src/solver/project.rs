//! Closed-form projections onto the PSD blocks and the affine equality set.
//!
//! Variables are stacked per generator. A full block uses svec coordinates
//! `(p11, √2·p12, p22)`, so the Euclidean inner product equals the trace
//! inner product; a ray block `α·wwᵀ` (unit `w`) uses the single coordinate `α`.
//! Targets use the same svec layout, entry `j` at rows `3j..3j+3`.

use nalgebra::{DMatrix, DVector};

use crate::exact::Sym2;

pub(crate) const SQRT2: f64 = std::f64::consts::SQRT_2;

pub(crate) fn to_svec(s: &Sym2<f64>) -> [f64; 3] {
    [s.a11, SQRT2 * s.a12, s.a22]
}

pub(crate) fn from_svec(x: [f64; 3]) -> Sym2<f64> {
    Sym2::new(x[0], x[1] / SQRT2, x[2])
}

pub(crate) fn encode(blocks: &[Sym2<f64>]) -> DVector<f64> {
    DVector::from_iterator(3 * blocks.len(), blocks.iter().flat_map(to_svec))
}

pub(crate) fn decode(x: &DVector<f64>) -> Vec<Sym2<f64>> {
    (0..x.len() / 3).map(|j| from_svec([x[3 * j], x[3 * j + 1], x[3 * j + 2]])).collect()
}

/// Nearest PSD matrix in the Frobenius norm.
pub fn project_psd2(s: &Sym2<f64>) -> Sym2<f64> {
    let (lo, hi) = s.eigenvalues();
    if lo >= 0.0 {
        return *s;
    }
    if hi <= 0.0 {
        return Sym2::new(0.0, 0.0, 0.0);
    }
    // Keep hi·uuᵀ, where uuᵀ = (S − lo·I)/(hi − lo).
    let k = hi / (hi - lo);
    Sym2::new((s.a11 - lo) * k, s.a12 * k, (s.a22 - lo) * k)
}

/// Admissible form of one coefficient block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockShape {
    Full,
    /// `α·wwᵀ` with `α ≥ 0` and unit `w`.
    Ray([f64; 2]),
    Zero,
}

impl BlockShape {
    fn width(&self) -> usize {
        match self {
            BlockShape::Full => 3,
            BlockShape::Ray(_) => 1,
            BlockShape::Zero => 0,
        }
    }
}

fn ray_svec(w: [f64; 2]) -> [f64; 3] {
    [w[0] * w[0], SQRT2 * w[0] * w[1], w[1] * w[1]]
}

/// The linear map `P ↦ Σ_i P_i ⊗ v_i` restricted to the given block shapes,
/// with its pseudo-inverse and kernel factored once.
#[derive(Clone, Debug)]
pub struct AffineMap {
    dim: usize,
    shapes: Vec<BlockShape>,
    offsets: Vec<usize>,
    /// `3d × N`.
    m: DMatrix<f64>,
    pinv: DMatrix<f64>,
    /// Orthonormal basis of `ker M`, `N × (N − rank)`.
    kernel: DMatrix<f64>,
    rank: usize,
}

impl AffineMap {
    pub fn new(generators: &[Vec<f64>]) -> Self {
        Self::with_shapes(generators, vec![BlockShape::Full; generators.len()])
    }

    pub fn with_shapes(generators: &[Vec<f64>], shapes: Vec<BlockShape>) -> Self {
        assert_eq!(generators.len(), shapes.len());
        let d = generators.first().map_or(0, Vec::len);
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut nvars = 0;
        for s in &shapes {
            offsets.push(nvars);
            nvars += s.width();
        }
        let mut m = DMatrix::zeros(3 * d, nvars);
        for ((g, s), &o) in generators.iter().zip(&shapes).zip(&offsets) {
            for (j, &vj) in g.iter().enumerate() {
                match s {
                    BlockShape::Full => {
                        for c in 0..3 {
                            m[(3 * j + c, o + c)] = vj;
                        }
                    }
                    BlockShape::Ray(w) => {
                        let r = ray_svec(*w);
                        for c in 0..3 {
                            m[(3 * j + c, o)] = vj * r[c];
                        }
                    }
                    BlockShape::Zero => {}
                }
            }
        }
        let (pinv, kernel, rank) = factor(&m);
        Self { dim: d, shapes, offsets, m, pinv, kernel, rank }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn vars(&self) -> usize {
        self.m.ncols()
    }

    pub fn shapes(&self) -> &[BlockShape] {
        &self.shapes
    }

    pub fn is_full(&self) -> bool {
        self.shapes.iter().all(|s| *s == BlockShape::Full)
    }

    /// The image of the map is a proper subspace of the tuple space.
    pub fn rank_deficient(&self) -> bool {
        self.rank < 3 * self.dim
    }

    pub(crate) fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub(crate) fn pinv(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    pub(crate) fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    pub(crate) fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn block(&self, x: &DVector<f64>, i: usize) -> Sym2<f64> {
        let o = self.offsets[i];
        match self.shapes[i] {
            BlockShape::Full => from_svec([x[o], x[o + 1], x[o + 2]]),
            BlockShape::Ray(w) => from_svec(ray_svec(w).map(|r| r * x[o])),
            BlockShape::Zero => Sym2::new(0.0, 0.0, 0.0),
        }
    }

    pub fn blocks(&self, x: &DVector<f64>) -> Vec<Sym2<f64>> {
        (0..self.len()).map(|i| self.block(x, i)).collect()
    }

    /// Variables of full blocks; ray and zero blocks take the projection of
    /// the given matrix onto their span.
    pub fn variables(&self, blocks: &[Sym2<f64>]) -> DVector<f64> {
        let mut x = DVector::zeros(self.vars());
        for (i, b) in blocks.iter().enumerate() {
            let o = self.offsets[i];
            match self.shapes[i] {
                BlockShape::Full => {
                    let v = to_svec(b);
                    x.rows_mut(o, 3).copy_from_slice(&v);
                }
                BlockShape::Ray(w) => {
                    let r = ray_svec(w);
                    x[o] = (0..3).map(|c| r[c] * to_svec(b)[c]).sum();
                }
                BlockShape::Zero => {}
            }
        }
        x
    }

    /// Least eigenvalue over all blocks; a ray block contributes `α`.
    pub(crate) fn min_eigenvalue(&self, x: &DVector<f64>) -> f64 {
        let mut lo = f64::INFINITY;
        for (i, s) in self.shapes.iter().enumerate() {
            let o = self.offsets[i];
            let v = match s {
                BlockShape::Full => from_svec([x[o], x[o + 1], x[o + 2]]).min_eigenvalue(),
                BlockShape::Ray(_) => x[o],
                BlockShape::Zero => continue,
            };
            lo = lo.min(v);
        }
        lo
    }

    /// Projection onto `{P_i ⪰ δ·I}`, with `α ≥ δ` for ray blocks.
    pub(crate) fn project_shifted_cone(&self, x: &mut DVector<f64>, delta: f64) {
        for (i, s) in self.shapes.iter().enumerate() {
            let o = self.offsets[i];
            match s {
                BlockShape::Full => {
                    let b = from_svec([x[o] - delta, x[o + 1], x[o + 2] - delta]);
                    let mut p = to_svec(&project_psd2(&b));
                    p[0] += delta;
                    p[2] += delta;
                    x.rows_mut(o, 3).copy_from_slice(&p);
                }
                BlockShape::Ray(_) => x[o] = x[o].max(delta),
                BlockShape::Zero => {}
            }
        }
    }

    /// `x ← x − M⁺(Mx − a)`.
    pub(crate) fn project(&self, x: &mut DVector<f64>, target: &DVector<f64>, scratch: &mut DVector<f64>) {
        scratch.copy_from(target);
        scratch.gemv(1.0, &self.m, x, -1.0);
        x.gemv(-1.0, &self.pinv, scratch, 1.0);
    }

    pub(crate) fn residual(&self, x: &DVector<f64>, target: &DVector<f64>) -> f64 {
        (&self.m * x - target).norm()
    }

    /// Least-squares `λ` with `Mᵀλ ≈ g`.
    pub(crate) fn adjoint_solve(&self, g: &DVector<f64>) -> DVector<f64> {
        self.pinv.tr_mul(g)
    }
}

fn factor(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, usize) {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return (DMatrix::zeros(n, m.nrows()), DMatrix::identity(n, n), 0);
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = 1e-12 * smax.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let pinv = svd.pseudo_inverse(eps).expect("svd computed with both factors");
    let proj = DMatrix::identity(n, n) - &pinv * m;
    let eig = proj.symmetric_eigen();
    let cols: Vec<DVector<f64>> =
        (0..n).filter(|&k| eig.eigenvalues[k] > 0.5).map(|k| eig.eigenvectors.column(k).into_owned()).collect();
    let kernel = if cols.is_empty() { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) };
    (pinv, kernel, rank)
}

/// Result of [`project_affine`].
#[derive(Clone, Debug, PartialEq)]
pub struct AffineProjection {
    pub blocks: Vec<Sym2<f64>>,
    /// The map is not onto; the projection targets the least-squares affine hull.
    pub rank_deficient: bool,
}

/// Euclidean projection onto `{P : Σ P_i ⊗ v_i = target}`.
pub fn project_affine(blocks: &[Sym2<f64>], generators: &[Vec<f64>], target: &[Sym2<f64>]) -> AffineProjection {
    let map = AffineMap::new(generators);
    let mut x = map.variables(blocks);
    let mut scratch = DVector::zeros(3 * map.dim());
    map.project(&mut x, &encode(target), &mut scratch);
    AffineProjection { blocks: map.blocks(&x), rank_deficient: map.rank_deficient() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Sym2<f64>, b: &Sym2<f64>) -> bool {
        (a - b).frobenius() < 1e-12
    }

    #[test]
    fn psd_projection_examples() {
        assert!(close(&project_psd2(&Sym2::new(1.0, 0.0, -1.0)), &Sym2::new(1.0, 0.0, 0.0)));
        assert!(close(&project_psd2(&Sym2::new(0.0, 1.0, 0.0)), &Sym2::new(0.5, 0.5, 0.5)));
        let p = Sym2::new(2.0, 1.0, 3.0);
        assert_eq!(project_psd2(&p), p);
        assert!(close(&project_psd2(&Sym2::new(-1.0, 0.5, -2.0)), &Sym2::new(0.0, 0.0, 0.0)));
    }

    fn square() -> Vec<Vec<f64>> {
        vec![vec![1.0, -1.0, 1.0], vec![-1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]]
    }

    #[test]
    fn affine_projection_fixes_feasible_points() {
        let blocks = vec![Sym2::scalar(0.25); 4];
        let target = vec![Sym2::new(0.0, 0.0, 0.0), Sym2::new(0.0, 0.0, 0.0), Sym2::identity()];
        let out = project_affine(&blocks, &square(), &target);
        assert!(!out.rank_deficient);
        for (a, b) in out.blocks.iter().zip(&blocks) {
            assert!(close(a, b));
        }
    }

    #[test]
    fn projection_reaches_the_equality_set() {
        let gens = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let target = vec![Sym2::identity(), Sym2::new(2.0, 0.0, 0.0)];
        let out = project_affine(&[Sym2::new(0.0, 0.0, 0.0); 3], &gens, &target);
        let map = AffineMap::new(&gens);
        assert!(map.residual(&map.variables(&out.blocks), &encode(&target)) < 1e-12);
        assert_eq!(map.kernel().ncols(), 3);
    }

    #[test]
    fn single_generator_leaves_free_coordinates() {
        let gens = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let start = vec![Sym2::new(5.0, 1.0, 2.0), Sym2::new(3.0, 0.0, 1.0)];
        let target = vec![Sym2::new(5.0, 1.0, 2.0), Sym2::identity()];
        let out = project_affine(&start, &gens, &target);
        assert!(close(&out.blocks[0], &start[0]));
        assert!(close(&out.blocks[1], &Sym2::identity()));
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let gens = vec![vec![1.0, 0.0], vec![2.0, 0.0]];
        let out = project_affine(&[Sym2::identity(); 2], &gens, &[Sym2::identity(), Sym2::identity()]);
        assert!(out.rank_deficient);
    }

    #[test]
    fn ray_blocks_round_trip() {
        let w = [0.6, 0.8];
        let map = AffineMap::with_shapes(&square(), vec![BlockShape::Ray(w), BlockShape::Full, BlockShape::Zero, BlockShape::Full]);
        assert_eq!(map.vars(), 7);
        let mut x = DVector::zeros(7);
        x[0] = 2.0;
        let b = map.block(&x, 0);
        assert!(close(&b, &Sym2::new(0.72, 0.96, 1.28)));
        assert!((map.variables(&[b, Sym2::identity(), Sym2::identity(), Sym2::identity()])[0] - 2.0).abs() < 1e-12);
    }
}
