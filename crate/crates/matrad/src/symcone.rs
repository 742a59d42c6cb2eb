//! Core matrix types and cone geometry.
//!
//! Everything downstream works over four domains: the space `S_m` of real
//! symmetric matrices, the open cone `P_m` of positive definite matrices,
//! the space `M_{n,m}` of rectangular matrices, and the Stiefel manifold
//! `V_{n,m}` of orthonormal m-frames. A matrix k-plane pairs a frame
//! `xi` in `V_{n,n-k}` with an offset `t` in `M_{n-k,m}` and denotes the
//! affine set `{x : xi' x = t}`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Pivot tolerance certifying positive definiteness in the Cholesky factorization.
pub const CHOL_PIVOT_TOL: f64 = 1e-12;
/// Smallest singular value admitted by [`polar_decompose`].
pub const RANK_TOL: f64 = 1e-10;
/// Orthonormality tolerance for Stiefel frames, `max |v'v - I|`.
pub const FRAME_TOL: f64 = 1e-12;

/// A real symmetric `m x m` matrix stored as its packed upper triangle,
/// so symmetry is exact by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    m: usize,
    /// Row-major packed upper triangle: entry (i,j), i <= j, at offset
    /// `i*m - i*(i+1)/2 + j`.
    upper: Vec<f64>,
}

impl SymmetricMatrix {
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.m - i * (i + 1) / 2 + j
    }

    pub fn zeros(m: usize) -> Self {
        assert!(m > 0, "side length must be positive");
        SymmetricMatrix { m, upper: vec![0.0; m * (m + 1) / 2] }
    }

    pub fn identity(m: usize) -> Self {
        Self::scaled_identity(m, 1.0)
    }

    pub fn scaled_identity(m: usize, c: f64) -> Self {
        let mut s = Self::zeros(m);
        for i in 0..m {
            s.set(i, i, c);
        }
        s
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(m);
        for i in 0..m {
            for j in i..m {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Builds from a dense matrix, averaging the two triangles.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(Self::from_fn(a.nrows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)])))
    }

    /// Gram matrix `a' a` of a rectangular matrix.
    pub fn gram(a: &DMatrix<f64>) -> Self {
        Self::from_fn(a.ncols(), |i, j| a.column(i).dot(&a.column(j)))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.offset(i, j);
        self.upper[k] = v;
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> f64 {
        (0..self.m).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> f64 {
        self.to_dense().determinant()
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|v| v.is_finite())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut s = self.clone();
        for (a, b) in s.upper.iter_mut().zip(&other.upper) {
            *a += b;
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut s = self.clone();
        for (a, b) in s.upper.iter_mut().zip(&other.upper) {
            *a -= b;
        }
        s
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut s = self.clone();
        for a in s.upper.iter_mut() {
            *a *= c;
        }
        s
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> =
            self.to_dense().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Is `self` positive definite, certified by Cholesky pivots?
    pub fn is_positive_definite(&self) -> bool {
        packed_cholesky(self, CHOL_PIVOT_TOL).is_ok()
    }

    /// The unique PSD square root (spectral root); see [`sqrt_psd`].
    pub fn sqrt_psd(&self) -> Result<SymmetricMatrix> {
        sqrt_psd(self)
    }
}

/// Lower-triangular Cholesky factor with an explicit pivot gate.
fn packed_cholesky(s: &SymmetricMatrix, pivot_tol: f64) -> Result<DMatrix<f64>> {
    let m = s.dim();
    let mut l = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        let mut d = s.get(j, j);
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        // negated form also rejects NaN pivots
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > pivot_tol) {
            return Err(Error::NotPsd(d));
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..m {
            let mut v = s.get(i, j);
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / dj;
        }
    }
    Ok(l)
}

/// An element of the open cone `P_m`, carrying its Cholesky certificate.
#[derive(Clone, Debug)]
pub struct PositiveDefiniteMatrix {
    base: SymmetricMatrix,
    chol: DMatrix<f64>,
}

impl PositiveDefiniteMatrix {
    /// Certifies positive definiteness by Cholesky with pivot tolerance
    /// [`CHOL_PIVOT_TOL`].
    pub fn new(base: SymmetricMatrix) -> Result<Self> {
        Self::with_pivot_tol(base, CHOL_PIVOT_TOL)
    }

    fn with_pivot_tol(base: SymmetricMatrix, tol: f64) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::Domain("non-finite entries".into()));
        }
        let chol = packed_cholesky(&base, tol)?;
        Ok(PositiveDefiniteMatrix { base, chol })
    }

    pub fn identity(m: usize) -> Self {
        Self::new(SymmetricMatrix::identity(m)).unwrap()
    }

    pub fn scaled_identity(m: usize, c: f64) -> Result<Self> {
        Self::new(SymmetricMatrix::scaled_identity(m, c))
    }

    /// `a' a` for a full-rank rectangular `a`.
    pub fn from_gram(a: &DMatrix<f64>) -> Result<Self> {
        Self::new(SymmetricMatrix::gram(a))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &SymmetricMatrix {
        &self.base
    }

    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.base.to_dense()
    }

    pub fn det(&self) -> f64 {
        let mut d = 1.0;
        for i in 0..self.dim() {
            d *= self.chol[(i, i)] * self.chol[(i, i)];
        }
        d
    }

    pub fn trace(&self) -> f64 {
        self.base.trace()
    }

    /// Spectral square root, guaranteed symmetric positive definite.
    pub fn sqrt(&self) -> PositiveDefiniteMatrix {
        self.spectral_power(0.5)
    }

    pub fn inverse(&self) -> PositiveDefiniteMatrix {
        self.spectral_power(-1.0)
    }

    pub fn inv_sqrt(&self) -> PositiveDefiniteMatrix {
        self.spectral_power(-0.5)
    }

    /// `self^p` through the eigendecomposition, with eigenvalues floored at
    /// a tiny positive value so derived matrices stay representable even
    /// when the input sits next to the cone boundary.
    fn spectral_power(&self, p: f64) -> PositiveDefiniteMatrix {
        let m = self.dim();
        let eig = self.base.to_dense().symmetric_eigen();
        let mut half = eig.eigenvalues.clone();
        for v in half.iter_mut() {
            *v = v.max(1e-280).powf(p / 2.0);
        }
        // X^p = w'w with w = diag(lambda^{p/2}) V'; its Cholesky factor is
        // R' from the QR of w, which stays valid arbitrarily close to the
        // cone boundary where re-running the pivoted factorization would
        // fail by rounding
        let w = DMatrix::from_diagonal(&half) * eig.eigenvectors.transpose();
        let qr = w.qr();
        let mut r = qr.r();
        for j in 0..m {
            if r[(j, j)] < 0.0 {
                for c in j..m {
                    r[(j, c)] = -r[(j, c)];
                }
            }
        }
        let base = SymmetricMatrix::gram(&r);
        PositiveDefiniteMatrix { base, chol: r.transpose() }
    }
}

/// The unique PSD square root of a positive semi-definite symmetric matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are clamped to zero; anything below that is
/// rejected as genuinely not PSD.
pub fn sqrt_psd(s: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = s.to_dense().symmetric_eigen();
    let mut vals = eig.eigenvalues.clone();
    for v in vals.iter_mut() {
        if *v < -1e-8 {
            return Err(Error::NotPsd(*v));
        }
        *v = v.max(0.0).sqrt();
    }
    let dense = &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose();
    SymmetricMatrix::from_dense(&dense)
}

/// An element of `M_{n,m}`, the space of real `n x m` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct RectMatrix {
    data: DMatrix<f64>,
}

impl RectMatrix {
    pub fn new(data: DMatrix<f64>) -> Self {
        RectMatrix { data }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        RectMatrix { data: DMatrix::zeros(n, m) }
    }

    pub fn from_fn(n: usize, m: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        RectMatrix { data: DMatrix::from_fn(n, m, f) }
    }

    /// The frame `[I_m; 0]` padded to `n` rows.
    pub fn identity_padded(n: usize, m: usize) -> Self {
        assert!(n >= m);
        Self::from_fn(n, m, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn dense(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// `x' x` as a symmetric matrix.
    pub fn gram(&self) -> SymmetricMatrix {
        SymmetricMatrix::gram(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Numerical rank: singular values above `RANK_TOL` times the largest.
    pub fn rank(&self) -> usize {
        let sv = self.data.clone().svd(false, false).singular_values;
        let top = sv.iter().cloned().fold(0.0_f64, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_TOL * top).count()
    }
}

/// An orthonormal m-frame in `R^n`; `v'v = I_m` to within [`FRAME_TOL`].
#[derive(Clone, Debug)]
pub struct StiefelFrame {
    mat: DMatrix<f64>,
}

impl StiefelFrame {
    /// Re-orthonormalizes the columns by QR (R-diagonal signs fixed) and
    /// verifies the frame invariant.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let (n, m) = (mat.nrows(), mat.ncols());
        if n < m {
            return Err(Error::DimensionMismatch(format!("V_{{{n},{m}}} requires n >= m")));
        }
        let q = qr_orthonormal(&mat)?;
        let frame = StiefelFrame { mat: q };
        debug_assert!(frame.orthonormality_defect() <= FRAME_TOL);
        Ok(frame)
    }

    /// The frame `[I_m; 0]`: first m coordinate axes.
    pub fn coordinate(n: usize, m: usize) -> Self {
        StiefelFrame { mat: RectMatrix::identity_padded(n, m).data }
    }

    /// The frame `[0; I_m]`: last m coordinate axes.
    pub fn coordinate_tail(n: usize, m: usize) -> Self {
        assert!(n >= m);
        StiefelFrame {
            mat: DMatrix::from_fn(n, m, |i, j| if i == n - m + j { 1.0 } else { 0.0 }),
        }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn m(&self) -> usize {
        self.mat.ncols()
    }

    pub fn dense(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.mat.transpose() * &self.mat;
        let mut worst = 0.0_f64;
        for i in 0..self.m() {
            for j in 0..self.m() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Completes `self` (n x p) to an orthogonal basis of `R^n`, returning
    /// the complementary frame in `V_{n,n-p}`. A Gaussian block is projected
    /// onto the orthocomplement and orthonormalized, so `self` is kept
    /// bit-exactly and `[out | self]` is orthogonal.
    pub fn complete(&self, rng: &mut impl rand::Rng) -> StiefelFrame {
        use rand_distr::{Distribution, StandardNormal};
        let (n, p) = (self.n(), self.m());
        assert!(p < n, "frame already spans R^n");
        loop {
            let g = DMatrix::from_fn(n, n - p, |_, _| StandardNormal.sample(rng));
            let proj = &g - &self.mat * (self.mat.transpose() * &g);
            if let Ok(q) = qr_orthonormal(&proj) {
                return StiefelFrame { mat: q };
            }
            // rank-deficient Gaussian draw; redraw (measure zero)
        }
    }
}

/// Thin QR orthonormal factor with positive R diagonal.
fn qr_orthonormal(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = a.ncols();
    let qr = a.clone().qr();
    let mut q = qr.q().columns(0, m).into_owned();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)].abs() < 1e-13 {
            return Err(Error::RankDeficient(format!(
                "QR pivot {j} vanished; columns not independent"
            )));
        }
        if r[(j, j)] < 0.0 {
            for i in 0..q.nrows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Ok(q)
}

/// A matrix k-plane `tau(xi, t) = {x : xi' x = t}` with `xi` in `V_{n,n-k}`
/// and `t` in `M_{n-k,m}`. The pairs `(xi, t)` and `(xi theta', theta t)`
/// describe the same plane for any `theta` in `O(n-k)`.
#[derive(Clone, Debug)]
pub struct MatrixPlane {
    pub xi: StiefelFrame,
    pub t: RectMatrix,
    pub k: usize,
}

impl MatrixPlane {
    pub fn new(xi: StiefelFrame, t: RectMatrix, k: usize) -> Result<Self> {
        let n = xi.n();
        if k == 0 || k >= n {
            return Err(Error::Domain(format!("k = {k} must satisfy 1 <= k <= n-1")));
        }
        if xi.m() != n - k {
            return Err(Error::DimensionMismatch(format!(
                "xi must lie in V_{{{n},{}}}, got V_{{{n},{}}}",
                n - k,
                xi.m()
            )));
        }
        if t.nrows() != n - k {
            return Err(Error::DimensionMismatch(format!(
                "t must have {} rows, got {}",
                n - k,
                t.nrows()
            )));
        }
        Ok(MatrixPlane { xi, t, k })
    }

    pub fn n(&self) -> usize {
        self.xi.n()
    }

    pub fn m(&self) -> usize {
        self.t.ncols()
    }
}

/// Polar decomposition `x = v r^{1/2}` with `v` in `V_{n,m}` and `r = x'x`
/// positive definite. Fails on (numerically) rank-deficient input.
pub fn polar_decompose(x: &RectMatrix) -> Result<(StiefelFrame, PositiveDefiniteMatrix)> {
    let (n, m) = (x.nrows(), x.ncols());
    if n < m {
        return Err(Error::DimensionMismatch(format!(
            "polar decomposition requires n >= m, got {n} < {m}"
        )));
    }
    let svd = x.dense().clone().svd(false, false);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    // negated form also rejects NaN singular values
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(smin > RANK_TOL) {
        return Err(Error::RankDeficient(format!(
            "smallest singular value {smin:.3e} <= {RANK_TOL:.0e}"
        )));
    }
    let r = PositiveDefiniteMatrix::from_gram(x.dense())?;
    let v = x.dense() * r.inv_sqrt().to_dense();
    Ok((StiefelFrame::new(v)?, r))
}

/// The matrix distance `d(x, tau) = [(xi'x - t)'(xi'x - t)]^{1/2}` between a
/// point and a matrix plane: a positive semi-definite `m x m` matrix.
pub fn matrix_distance(x: &RectMatrix, plane: &MatrixPlane) -> Result<SymmetricMatrix> {
    if x.nrows() != plane.n() || x.ncols() != plane.m() {
        return Err(Error::DimensionMismatch(format!(
            "x is {}x{}, plane expects {}x{}",
            x.nrows(),
            x.ncols(),
            plane.n(),
            plane.m()
        )));
    }
    let diff = plane.xi.dense().transpose() * x.dense() - plane.t.dense();
    sqrt_psd(&SymmetricMatrix::gram(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(rng: &mut impl Rng, n: usize, m: usize) -> RectMatrix {
        RectMatrix::from_fn(n, m, |_, _| StandardNormal.sample(rng))
    }

    #[test]
    fn polar_identity_frame() {
        let x = RectMatrix::identity_padded(4, 2);
        let (v, r) = polar_decompose(&x).unwrap();
        assert_relative_eq!(*v.dense(), *x.dense(), epsilon = 1e-12);
        assert_relative_eq!(r.to_dense(), DMatrix::identity(2, 2), epsilon = 1e-12);
    }

    #[test]
    fn polar_scalar_scaling() {
        let x = RectMatrix::new(RectMatrix::identity_padded(4, 2).dense() * 2.0);
        let (v, r) = polar_decompose(&x).unwrap();
        assert_relative_eq!(
            *v.dense(),
            *RectMatrix::identity_padded(4, 2).dense(),
            epsilon = 1e-12
        );
        assert_relative_eq!(r.to_dense(), DMatrix::identity(2, 2) * 4.0, epsilon = 1e-12);
    }

    #[test]
    fn polar_round_trip_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let x = gaussian(&mut rng, 4, 2);
            let (v, r) = polar_decompose(&x).unwrap();
            let back = v.dense() * r.sqrt().to_dense();
            assert_relative_eq!(back, *x.dense(), epsilon = 1e-10);
            assert!(v.orthonormality_defect() <= 1e-12);
            assert_relative_eq!(r.to_dense(), x.gram().to_dense(), epsilon = 1e-10);
        }
    }

    #[test]
    fn polar_rejects_rank_deficient() {
        let x = RectMatrix::from_fn(4, 2, |i, _| i as f64); // equal columns
        assert!(matches!(polar_decompose(&x), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn sqrt_psd_cases() {
        let i2 = SymmetricMatrix::identity(2);
        assert_relative_eq!(sqrt_psd(&i2).unwrap().to_dense(), i2.to_dense(), epsilon = 1e-14);

        let d = SymmetricMatrix::from_fn(
            2,
            |i, j| if i == j { if i == 0 { 4.0 } else { 9.0 } } else { 0.0 },
        );
        let root = sqrt_psd(&d).unwrap();
        assert_relative_eq!(root.get(0, 0), 2.0, epsilon = 1e-12);
        assert_relative_eq!(root.get(1, 1), 3.0, epsilon = 1e-12);

        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = gaussian(&mut rng, 3, 3);
            let r = a.gram();
            let root = sqrt_psd(&r).unwrap().to_dense();
            assert_relative_eq!(&root * &root, r.to_dense(), epsilon = 1e-10);
        }

        let neg = SymmetricMatrix::scaled_identity(2, -1.0);
        assert!(matches!(sqrt_psd(&neg), Err(Error::NotPsd(_))));
    }

    #[test]
    fn distance_point_on_plane_is_zero() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let (n, m, k) = (5, 2, 2);
        let xi = StiefelFrame::new(gaussian(&mut rng, n, n - k).dense().clone()).unwrap();
        let t = gaussian(&mut rng, n - k, m);
        let plane = MatrixPlane::new(xi.clone(), t.clone(), k).unwrap();
        // x = xi t lies on the plane: xi' (xi t) = t
        let x = RectMatrix::new(xi.dense() * t.dense());
        let d = matrix_distance(&x, &plane).unwrap();
        assert!(d.to_dense().norm() < 1e-10);
    }

    #[test]
    fn distance_rank_one_reduces_to_euclidean() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let (n, k) = (4, 2);
        let xi = StiefelFrame::new(gaussian(&mut rng, n, n - k).dense().clone()).unwrap();
        let t = gaussian(&mut rng, n - k, 1);
        let plane = MatrixPlane::new(xi.clone(), t.clone(), k).unwrap();
        let x = gaussian(&mut rng, n, 1);
        let d = matrix_distance(&x, &plane).unwrap();
        // for m = 1 the distance is the euclidean distance of xi'x from t
        let expect = (xi.dense().transpose() * x.dense() - t.dense()).norm();
        assert_relative_eq!(d.get(0, 0), expect, epsilon = 1e-12);
    }

    #[test]
    fn distance_to_shifted_plane() {
        // shifting the plane offset by z with z'z = r moves the distance to r^{1/2}
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let (n, m, k) = (5, 2, 2);
        let xi = StiefelFrame::new(gaussian(&mut rng, n, n - k).dense().clone()).unwrap();
        let t = gaussian(&mut rng, n - k, m);
        let x = RectMatrix::new(xi.dense() * t.dense());
        let z = gaussian(&mut rng, n - k, m);
        let shifted =
            MatrixPlane::new(xi.clone(), RectMatrix::new(t.dense() + z.dense()), k).unwrap();
        let d = matrix_distance(&x, &shifted).unwrap();
        let expect = sqrt_psd(&z.gram()).unwrap();
        assert_relative_eq!(d.to_dense(), expect.to_dense(), epsilon = 1e-10);
    }

    #[test]
    fn sylvester_determinant_identity() {
        // |I_n + xy| = |I_m + yx|
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = gaussian(&mut rng, 4, 2);
            let y = gaussian(&mut rng, 2, 4);
            let lhs = (DMatrix::identity(4, 4) + x.dense() * y.dense()).determinant();
            let rhs = (DMatrix::identity(2, 2) + y.dense() * x.dense()).determinant();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn rank_of_gram_matches_rank() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for r in 1..=2_usize {
            let a = gaussian(&mut rng, 4, r);
            let b = gaussian(&mut rng, r, 3);
            let x = RectMatrix::new(a.dense() * b.dense());
            assert_eq!(x.rank(), r);
            let g = RectMatrix::new(x.gram().to_dense());
            assert_eq!(g.rank(), r);
        }
    }

    #[test]
    fn inversion_jacobian_matches_det_power() {
        // r -> r^{-1} on P_2 has Jacobian determinant |r|^{-(m+1)} = |r|^{-3},
        // checked by a finite-difference Jacobian in packed coordinates.
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..10 {
            let a = gaussian(&mut rng, 3, 2);
            let r = a.gram().add(&SymmetricMatrix::scaled_identity(2, 0.5));
            let coords = [(0, 0), (0, 1), (1, 1)];
            let h = 1e-6;
            let mut jac = DMatrix::<f64>::zeros(3, 3);
            for (col, &(i, j)) in coords.iter().enumerate() {
                let mut plus = r.clone();
                plus.set(i, j, r.get(i, j) + h);
                let mut minus = r.clone();
                minus.set(i, j, r.get(i, j) - h);
                let fp = plus.to_dense().try_inverse().unwrap();
                let fm = minus.to_dense().try_inverse().unwrap();
                for (row, &(a, b)) in coords.iter().enumerate() {
                    jac[(row, col)] = (fp[(a, b)] - fm[(a, b)]) / (2.0 * h);
                }
            }
            let det_j = jac.determinant().abs();
            let expect = r.det().powi(-3);
            assert_relative_eq!(det_j, expect, max_relative = 1e-4);
        }
    }

    #[test]
    fn frame_projection_determinant_identity() {
        // |I_m - v q v'| = |I_k - q| for v in V_{m,k}, q in P_k
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for &(m, k) in &[(2usize, 1usize), (3, 2)] {
            for _ in 0..20 {
                let v = StiefelFrame::new(gaussian(&mut rng, m, k).dense().clone()).unwrap();
                let q = gaussian(&mut rng, k + 1, k).gram().scale(0.3);
                let lhs = (DMatrix::identity(m, m)
                    - v.dense() * q.to_dense() * v.dense().transpose())
                .determinant();
                let rhs = (DMatrix::identity(k, k) - q.to_dense()).determinant();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn complete_frame_is_orthogonal_complement() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let xi = StiefelFrame::new(gaussian(&mut rng, 5, 3).dense().clone()).unwrap();
        let u = xi.complete(&mut rng);
        assert_eq!(u.m(), 2);
        assert!(u.orthonormality_defect() <= 1e-12);
        let cross = u.dense().transpose() * xi.dense();
        assert!(cross.norm() < 1e-12);
    }
}
