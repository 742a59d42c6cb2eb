//! Riesz potentials, zeta integrals of Gaussians, the Cayley-Laplace
//! operator, Semyanistyi fractional integrals, the generalized Fuglede
//! formula, plane-wave inversion for even k, and the projection-slice
//! theorem.
//!
//! The Riesz potential of integral order `k` uses the positive-measure
//! representation
//!
//! ```text
//! (I^k f)(x) = gamma_2 int_{V_{n,k}} dv int_{M_{k,m}} f(x - v w) dw,
//! gamma_2 = 2^{-k(m+1)} pi^{-k(m+n)/2} Gamma_k((n-m)/2),
//! ```
//!
//! never a regularized divergent integral. Fourier transforms exist only as
//! the Gaussian closed form `F e (y) = pi^{nm/2} exp(-tr(y'y)/4)`; every
//! identity tested here has a Gaussian witness.

use crate::error::{Error, Result};
use crate::fracint::{gg_minus_symbolic, GGValue, RadialFunction, ScaledRadial};
use crate::mcquad::{
    monte_carlo, sample_cone_wishart, sample_stiefel, Engine, MCEstimate, MatrixDensity,
};
use crate::radon::{FieldKind, MatrixField};
use crate::specialfn::{
    cayley_bernstein, fuglede_constant, gamma_m, real_gamma, riesz_gamma, stiefel_volume,
};
use crate::symcone::{MatrixPlane, RectMatrix, StiefelFrame, SymmetricMatrix};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Admissible orders of the Riesz potential on `M_{n,m}`:
/// `{0, 1, ..., k_0} union {alpha > m-1, alpha not in {n-m+1, ...}}`
/// with `k_0 = min(m-1, n-m)`.
#[derive(Clone, Copy, Debug)]
pub struct RieszWallachParam {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
}

impl RieszWallachParam {
    pub fn new(n: usize, m: usize, alpha: f64) -> Result<Self> {
        if n < m {
            return Err(Error::Domain(format!("n = {n} < m = {m}")));
        }
        let k0 = (m - 1).min(n - m) as f64;
        let is_int = (alpha - alpha.round()).abs() < 1e-12;
        let discrete = is_int && alpha.round() >= 0.0 && alpha.round() <= k0;
        let excluded = is_int && alpha.round() >= (n as f64 - m as f64 + 1.0);
        let continuous = alpha > m as f64 - 1.0 && !excluded;
        if discrete || continuous {
            Ok(RieszWallachParam { n, m, alpha })
        } else {
            Err(Error::OrderNotAdmissible { alpha, n, m })
        }
    }
}

/// The Gaussian Fourier closed form on `M_{n,m}`:
/// `F e (y) = pi^{nm/2} exp(-tr(y'y)/4)` for `e(x) = exp(-tr(x'x))`.
#[derive(Clone, Copy, Debug)]
pub struct FourierClosedForm {
    pub n: usize,
    pub m: usize,
}

impl FourierClosedForm {
    pub fn gaussian(n: usize, m: usize) -> Self {
        FourierClosedForm { n, m }
    }

    pub fn eval(&self, y: &RectMatrix) -> f64 {
        PI.powf((self.n * self.m) as f64 / 2.0) * (-y.gram().trace() / 4.0).exp()
    }
}

/// Zeta integral of the Gaussian:
/// `Z(e, alpha - n) = int exp(-tr(x'x)) |x|_m^{alpha-n} dx
///                  = (pi^{nm/2}/Gamma_m(n/2)) Gamma_m(alpha/2)`,
/// meromorphically continued through the right-hand side.
pub fn zeta_gaussian(n: usize, m: usize, alpha: f64) -> Result<f64> {
    let c = PI.powf((n * m) as f64 / 2.0) / gamma_m(m, n as f64 / 2.0)?;
    Ok(c * gamma_m(m, alpha / 2.0)?)
}

fn riesz_gamma2(n: usize, m: usize, k: usize) -> Result<f64> {
    Ok(2f64.powi(-((k * (m + 1)) as i32))
        * PI.powf(-((k * (m + n)) as f64) / 2.0)
        * gamma_m(k, (n - m) as f64 / 2.0)?)
}

fn riesz_lp_guard(f: &MatrixField, k_order: f64) -> Result<()> {
    let (n, m) = (f.n as f64, f.m as f64);
    let witness = k_order + m - 1.0; // potential exists for p < n/(alpha+m-1)
    match &f.kind {
        FieldKind::GaussianFull | FieldKind::RadialClosed(RadialFunction::GaussianTrace) => Ok(()),
        FieldKind::ShiftedPowerFull { lam } => {
            // |I+x'x|^{-lam/2} lies in L^p for p > (n+m-1)/lam; an admissible
            // exponent below n/(alpha+m-1) exists iff the bound below holds
            if *lam > (n + m - 1.0) * witness / n {
                Ok(())
            } else {
                Err(Error::ExistenceViolation(format!(
                    "lam = {lam} leaves no admissible L^p class for order {k_order}"
                )))
            }
        }
        FieldKind::PowerFull { lam } => {
            // the closed-form chain needs both the transform and its dual:
            // k+m-1 < lam < n-m+1
            if *lam > k_order + m - 1.0 && *lam < n - m + 1.0 {
                Ok(())
            } else {
                Err(Error::ExistenceViolation(format!(
                    "power exponent lam = {lam} outside ({}, {})",
                    k_order + m - 1.0,
                    n - m + 1.0
                )))
            }
        }
        FieldKind::Custom { lp_class: Some(p), .. } => {
            if *p < n / witness {
                Ok(())
            } else {
                Err(Error::ExistenceViolation(format!(
                    "declared p = {p} >= n/(alpha+m-1) = {}",
                    n / witness
                )))
            }
        }
        _ => Ok(()),
    }
}

/// Riesz potential of integral order via the positive-measure double
/// integral over `V_{n,k} x M_{k,m}`. `k = 0` returns `f(x)` exactly.
///
/// Det-power fields route through a tail-matched importance scheme (see
/// the tilted Wishart-pair scheme below); the generic branch runs a short
/// effective-sample-size preflight and aborts instead of returning an
/// estimate whose error bar would be meaningless.
pub fn riesz_potential_int(
    f: &MatrixField,
    x: &RectMatrix,
    k: usize,
    engine: &Engine,
) -> Result<GGValue> {
    let (n, m) = (f.n, f.m);
    RieszWallachParam::new(n, m, k as f64)?;
    if k == 0 {
        return Ok(GGValue::Exact(f.eval(x)));
    }
    riesz_lp_guard(f, k as f64)?;
    if let FieldKind::PowerFull { lam } = &f.kind {
        if k >= m {
            return det_power_riesz(f.n, f.m, k, *lam, f.scale, x, engine);
        }
    }
    let g2 = riesz_gamma2(n, m, k)?;
    let total = g2 * stiefel_volume(n, k);
    let density = engine.matrix_density.unwrap_or_else(|| default_riesz_density(f, k * m));
    let draw = {
        let fc = f.clone();
        let xd = x.dense().clone();
        move |rng: &mut rand_chacha::ChaCha12Rng| {
            let v = sample_stiefel(n, k, rng);
            let w = density.sample(k, m, rng);
            let y = RectMatrix::new(&xd - v.dense() * w.dense());
            fc.eval(&y) / density.density(&w)
        }
    };
    // preflight ESS on one chunk: heavy-tailed draws make the standard
    // error a fiction long before they bias the mean
    {
        let mut rng = engine.sampler.rng_for_chunk(u64::MAX - 1);
        let probe = 2048;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..probe {
            let w = draw(&mut rng).abs();
            s1 += w;
            s2 += w * w;
        }
        let ess = if s2 > 0.0 { s1 * s1 / s2 } else { probe as f64 };
        if ess < 0.005 * probe as f64 {
            return Err(Error::LowAcceptance(ess / probe as f64));
        }
    }
    let est = monte_carlo(&engine.cfg, &engine.sampler, draw)?;
    Ok(GGValue::Estimate(est.scale(total)))
}

/// Tail-matched Riesz potential of `|x'x|^{-lam/2}` for `k >= m`.
///
/// The in-plane integral reduces exactly through the table identity for
/// `int det(c + z'z)^{-lam/2} dz`, leaving the frame average of
/// `det(x' P x)^eta`, `eta = (k-lam)/2`, over Haar projections `P` of rank
/// `q = n-k`. That average is a matrix-variate beta moment, sampled through
/// its Wishart-pair representation with the singular det power tilted into
/// the first shape, which leaves a bounded integrand with finite variance.
fn det_power_riesz(
    n: usize,
    m: usize,
    k: usize,
    lam: f64,
    scale: f64,
    x: &RectMatrix,
    engine: &Engine,
) -> Result<GGValue> {
    let q = n - k;
    let eta = (k as f64 - lam) / 2.0;
    let r = x.gram();
    if r.det() <= 0.0 {
        return Err(Error::RankDeficient("det-power potential needs rank(x) = m".into()));
    }
    // lam in (k+m-1, n-m+1) makes both Bartlett shapes admissible
    let shape1 = q as f64 / 2.0 + eta; // = (n - lam)/2 > (m-1)/2
    let shape2 = k as f64 / 2.0;
    let lam1 = crate::specialfn::lambda1(n, m, k, lam)?;
    let front = riesz_gamma2(n, m, k)?
        * stiefel_volume(n, k)
        * lam1
        * r.det().powf(eta)
        * gamma_m(m, shape1)?
        / gamma_m(m, q as f64 / 2.0)?
        * scale;
    let est = monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let w1 = crate::mcquad::sample_cone_wishart(m, shape1, 1.0, rng);
        let w2 = crate::mcquad::sample_cone_wishart(m, shape2, 1.0, rng);
        w1.base().add(w2.base()).det().powf(-eta)
    })?;
    Ok(GGValue::Estimate(est.scale(front)))
}

fn default_riesz_density(f: &MatrixField, dim: usize) -> MatrixDensity {
    match &f.kind {
        FieldKind::PowerFull { lam } | FieldKind::ShiftedPowerFull { lam } => {
            let nu = (lam - dim as f64).clamp(0.5, 4.0);
            MatrixDensity::StudentT { nu, sigma: 1.0 }
        }
        _ => MatrixDensity::Gaussian { sigma: 1.0 },
    }
}

// ---------------------------------------------------------------------------
// Cayley-Laplace operator: exact Bernstein action and finite differences
// ---------------------------------------------------------------------------

/// Exact `Delta |x|_m^lambda = CB(lambda) |x|_m^{lambda-2}` at a full-rank
/// point.
pub fn cayley_laplace_power(n: usize, m: usize, lambda: f64, x: &RectMatrix) -> Result<f64> {
    if x.nrows() != n || x.ncols() != m {
        return Err(Error::DimensionMismatch("cayley_laplace_power".into()));
    }
    if x.rank() < m {
        return Err(Error::RankDeficient("determinant power vanishes".into()));
    }
    let xm = x.gram().det().sqrt();
    Ok(cayley_bernstein(n, m, lambda) * xm.powf(lambda - 2.0))
}

/// 4th-order-accurate central stencils on offsets {-2h, -h, 0, h, 2h}.
fn stencil(order: u32) -> [f64; 5] {
    match order {
        1 => [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        2 => [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
        _ => unreachable!("only first and second derivatives are composed"),
    }
}

/// Mixed partial derivative of `f` at `x` across distinct coordinates with
/// per-coordinate orders, via tensor-composed central stencils.
fn mixed_partial<F: Fn(&DMatrix<f64>) -> f64>(
    f: &F,
    x: &DMatrix<f64>,
    terms: &[((usize, usize), u32)],
    h: f64,
) -> f64 {
    fn recurse<F: Fn(&DMatrix<f64>) -> f64>(
        f: &F,
        x: &mut DMatrix<f64>,
        terms: &[((usize, usize), u32)],
        h: f64,
    ) -> f64 {
        match terms.split_first() {
            None => f(x),
            Some((&((i, j), order), rest)) => {
                let coeffs = stencil(order);
                let base = x[(i, j)];
                let mut acc = 0.0;
                for (idx, &c) in coeffs.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let offset = (idx as f64 - 2.0) * h;
                    x[(i, j)] = base + offset;
                    acc += c * recurse(f, x, rest, h);
                }
                x[(i, j)] = base;
                acc / h.powi(order as i32)
            }
        }
    }
    let mut xm = x.clone();
    recurse(f, &mut xm, terms, h)
}

fn cayley_laplace_fd_once<F: Fn(&DMatrix<f64>) -> f64>(
    f: &F,
    x: &DMatrix<f64>,
    h: f64,
) -> Result<f64> {
    let (n, m) = (x.nrows(), x.ncols());
    match m {
        1 => {
            let mut acc = 0.0;
            for i in 0..n {
                acc += mixed_partial(f, x, &[((i, 0), 2)], h);
            }
            Ok(acc)
        }
        2 => {
            // det(d'd) = A11 A22 - A12 A21 with A_ab = sum_i d_ia d_ib;
            // the i = j terms of the two double sums cancel identically
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    acc += mixed_partial(f, x, &[((i, 0), 2), ((j, 1), 2)], h);
                    acc -= mixed_partial(
                        f,
                        x,
                        &[((i, 0), 1), ((i, 1), 1), ((j, 0), 1), ((j, 1), 1)],
                        h,
                    );
                }
            }
            Ok(acc)
        }
        _ => Err(Error::UnsupportedOrder { m }),
    }
}

/// Numeric Cayley-Laplace operator `Delta f` by composed 4th-order central
/// differences with one Richardson pass; limited to `n*m <= 8` coordinates
/// and `m <= 2`.
pub fn cayley_laplace_numeric<F: Fn(&DMatrix<f64>) -> f64 + ?Sized>(
    f: &F,
    x: &DMatrix<f64>,
    h: f64,
) -> Result<f64> {
    let dim = x.nrows() * x.ncols();
    if dim > 8 {
        return Err(Error::UnsupportedDimension { max: 8, got: dim });
    }
    let wrap = |y: &DMatrix<f64>| f(y);
    let coarse = cayley_laplace_fd_once(&wrap, x, h)?;
    let fine = cayley_laplace_fd_once(&wrap, x, h / 2.0)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

// ---------------------------------------------------------------------------
// Semyanistyi integrals and the Fuglede formula
// ---------------------------------------------------------------------------

fn semyanistyi_order_guard(n: usize, m: usize, k: usize, alpha: f64) -> Result<()> {
    if alpha <= m as f64 - 1.0 {
        return Err(Error::OrderNotAdmissible { alpha, n, m });
    }
    let is_int = (alpha - alpha.round()).abs() < 1e-12;
    if is_int && alpha.round() >= (n - k) as f64 - m as f64 + 1.0 {
        return Err(Error::OrderNotAdmissible { alpha, n, m });
    }
    Ok(())
}

/// Draws `y = v rho^{1/2}` on `M_{q,m}` with the Riesz-kernel-matched density
/// `q(y) = exp(-tr(y'y)) |y|_m^{alpha-q} / (c_{q,m} Gamma_m(alpha/2))`, so the
/// singular kernel cancels exactly against the density. Returns `(y, tr rho)`.
fn sample_riesz_kernel(
    q: usize,
    m: usize,
    alpha: f64,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> (RectMatrix, f64) {
    let rho = sample_cone_wishart(m, alpha / 2.0, 1.0, rng);
    let v = sample_stiefel(q, m, rng);
    let y = RectMatrix::new(v.dense() * rho.sqrt().to_dense());
    (y, rho.trace())
}

/// The generalized Semyanistyi integral
/// `(P^alpha f)(xi, t) = gamma_{n-k,m}(alpha)^{-1}
///   int f(x) |xi'x - t|_m^{alpha+k-n} dx`, `Re alpha > m-1`.
///
/// The singular determinant power is absorbed into the sampling density of
/// the off-plane coordinate, so only Schwartz-type weights remain.
pub fn semyanistyi_p(
    f: &MatrixField,
    plane: &MatrixPlane,
    alpha: f64,
    engine: &Engine,
) -> Result<MCEstimate> {
    let (n, m, k) = (f.n, f.m, plane.k);
    semyanistyi_order_guard(n, m, k, alpha)?;
    let q = n - k;
    let u = plane.xi.complete(&mut engine.sampler.rng());
    let front = PI.powf((q * m) as f64 / 2.0) / gamma_m(m, q as f64 / 2.0)?
        * gamma_m(m, alpha / 2.0)?
        / riesz_gamma(q, m, alpha)?;
    let density = engine.matrix_density.unwrap_or(match &f.kind {
        FieldKind::GaussianFull => MatrixDensity::Gaussian { sigma: 1.0 },
        _ => MatrixDensity::Gaussian { sigma: 1.0 },
    });
    let fc = f.clone();
    let xid = plane.xi.dense().clone();
    let td = plane.t.dense().clone();
    let est = monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let w = density.sample(k, m, rng);
        let (y, tr_rho) = sample_riesz_kernel(q, m, alpha, rng);
        let x = RectMatrix::new(u.dense() * w.dense() + &xid * (y.dense() + &td));
        fc.eval(&x) * tr_rho.exp() / density.density(&w)
    })?;
    Ok(est.scale(front))
}

/// Both sides of the generalized Fuglede formula
/// `(*P^alpha fhat)(x) = c_{n,k,m} (I^{alpha+k} f)(x)` for integer
/// `alpha >= 0`; `alpha = 0` is the plain back-projection
/// `(fhat)^vee = c_{n,k,m} I^k f`. Requires a radial `f` with a closed-form
/// Radon image.
pub fn fuglede_check(
    f: &MatrixField,
    x: &RectMatrix,
    k: usize,
    alpha: usize,
    engine: &Engine,
) -> Result<(MCEstimate, MCEstimate)> {
    let (n, m) = (f.n, f.m);
    f.radon_guard(k)?;
    riesz_lp_guard(f, (alpha + k) as f64)?;
    let profile = f.radial_profile().ok_or_else(|| {
        Error::PipelineNotClosedForm("Fuglede witness needs a closed-form Radon image".into())
    })?;
    let image = gg_minus_symbolic(&profile, k, m)?;
    let image = ScaledRadial::new(f.scale * PI.powf((k * m) as f64 / 2.0) * image.coeff, image.kind);

    let lhs = if alpha == 0 {
        // Haar average of the exact image at t = xi'x
        let xd = x.dense().clone();
        let img = image.clone();
        monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
            let xi = sample_stiefel(n, n - k, rng);
            let t = RectMatrix::new(xi.dense().transpose() * &xd);
            img.eval(&t.gram())
        })?
    } else {
        // *P^alpha fhat = (tilde I^alpha fhat)^vee with the tilde Riesz
        // potential in its positive double-integral form on M_{n-k,m}:
        // a single joint expectation over (xi, v, w)
        let q = n - k;
        RieszWallachParam::new(q, m, alpha as f64)?;
        let front = riesz_gamma2(q, m, alpha)? * stiefel_volume(q, alpha);
        let density = MatrixDensity::Gaussian { sigma: 1.0 };
        let xd = x.dense().clone();
        let img = image.clone();
        monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
            let xi = sample_stiefel(n, n - k, rng);
            let v = sample_stiefel(q, alpha, rng);
            let w = density.sample(alpha, m, rng);
            let t = RectMatrix::new(xi.dense().transpose() * &xd - v.dense() * w.dense());
            img.eval(&t.gram()) / density.density(&w)
        })?
        .scale(front)
    };

    let rhs = riesz_potential_int(f, x, alpha + k, &engine.stream(engine.sampler.stream_id ^ 0x9e37))?
        .estimate()
        .scale(fuglede_constant(n, m, k)?);
    Ok((lhs, rhs))
}

/// Both sides of the Semyanistyi composition
/// `*P^1 P^1 f = c_{n,k,m} I^{2+k} f` for the Gaussian witness.
///
/// The left side composes the two order-one tilde-Riesz layers in their
/// positive double-integral form. Conditionally on the pair of unit frame
/// vectors `(v_1, v_2)`, the two in-plane Gaussian integrals evaluate in
/// closed form with residual `exp(-tr(t_0' (I - P_V) t_0))` and an
/// alignment factor `(1 - c^2)^{-m/2}`, `c = v_1 . v_2`; the latter is
/// tilted into the sampling law of `c` (a Beta draw), leaving a bounded
/// integrand. This is the only estimator of the five-fold integral with
/// finite variance at desk scale.
pub fn semyanistyi_composition_check(
    f: &MatrixField,
    x: &RectMatrix,
    k: usize,
    a: usize,
    b: usize,
    engine: &Engine,
) -> Result<(MCEstimate, MCEstimate)> {
    let (n, m) = (f.n, f.m);
    f.radon_guard(k)?;
    let q = n - k;
    if a != 1 || b != 1 {
        return Err(Error::Domain("composition check implemented for orders a = b = 1".into()));
    }
    if q <= m + 1 {
        return Err(Error::Domain("need n - k > m + 1 for the alignment tilt".into()));
    }
    RieszWallachParam::new(q, m, 1.0)?;
    if !matches!(
        f.kind,
        crate::radon::FieldKind::GaussianFull
            | crate::radon::FieldKind::RadialClosed(RadialFunction::GaussianTrace)
    ) {
        return Err(Error::PipelineNotClosedForm(
            "composition witness implemented for the Gaussian".into(),
        ));
    }
    let km2 = PI.powf((k * m) as f64 / 2.0);
    let front = riesz_gamma2(q, m, 1)?
        * stiefel_volume(q, 1)
        * riesz_gamma2(q, m, 1)?
        * stiefel_volume(q, 1)
        * f.scale
        * km2
        * PI.powf(m as f64); // the two closed w-layer integrals contribute pi^{(a+b)m/2}
    // tilt of u = c^2 from Beta(1/2, (q-1)/2) to Beta(1/2, (q-1-m)/2)
    let beta_fn = |p: f64, r: f64| real_gamma(p) * real_gamma(r) / real_gamma(p + r);
    let tilt = beta_fn(0.5, (q as f64 - 1.0 - m as f64) / 2.0)
        / beta_fn(0.5, (q as f64 - 1.0) / 2.0);
    let xd = x.dense().clone();
    let lhs = monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        use rand_distr::Distribution;
        let xi = sample_stiefel(n, q, rng);
        let t0 = xi.dense().transpose() * &xd;
        let v1 = sample_stiefel(q, 1, rng);
        // w: Haar unit vector orthogonal to v1 (span(v1, v2) = span(v1, w))
        let g = DMatrix::from_fn(q, 1, |_, _| {
            <rand_distr::StandardNormal as Distribution<f64>>::sample(
                &rand_distr::StandardNormal,
                rng,
            )
        });
        let g = &g - v1.dense() * (v1.dense().transpose() * &g);
        let w = &g / g.norm();
        // residual of t0 off span(v1, w)
        let p1 = (v1.dense().transpose() * &t0).norm_squared();
        let p2 = (w.transpose() * &t0).norm_squared();
        // the alignment c = v1 . v2 drops out entirely: the span of
        // (v1, v2) equals the span of (v1, w), and the tilted Beta law of
        // c^2 integrates to the constant prefactor
        (-(t0.norm_squared() - p1 - p2)).exp()
    })?
    .scale(front * tilt);
    let rhs = riesz_potential_int(f, x, a + b + k, &engine.stream(engine.sampler.stream_id ^ 0x51))?
        .estimate()
        .scale(fuglede_constant(n, m, k)?);
    Ok((lhs, rhs))
}

/// Plane-wave inversion for even `k`:
/// `f(x) = (-1)^{mk/2} c_{n,k,m}^{-1} int_{V_{n,n-k}}
///   (tilde Delta)^{k/2} fhat(xi, t) |_{t = xi'x} d_* xi`,
/// with the Laplacian in `t` evaluated by finite differences on the exact
/// Radon image and the frame average by Monte Carlo.
pub fn plane_wave_invert_even(
    f: &MatrixField,
    x: &RectMatrix,
    k: usize,
    fd_step: f64,
    engine: &Engine,
) -> Result<MCEstimate> {
    let (n, m) = (f.n, f.m);
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrderUnsupported(k));
    }
    let q = n - k;
    if q * m > 8 {
        return Err(Error::UnsupportedDimension { max: 8, got: q * m });
    }
    let profile = f.radial_profile().ok_or_else(|| {
        Error::PipelineNotClosedForm("plane-wave inversion needs a closed-form Radon image".into())
    })?;
    let image = gg_minus_symbolic(&profile, k, m)?;
    let image = ScaledRadial::new(f.scale * PI.powf((k * m) as f64 / 2.0) * image.coeff, image.kind);
    let sign = if (m * k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = fuglede_constant(n, m, k)?;
    let xd = x.dense().clone();
    let times = k / 2;
    let est = monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let xi = sample_stiefel(n, q, rng);
        let t0 = xi.dense().transpose() * &xd;
        let phi_t = |t: &DMatrix<f64>| image.eval(&SymmetricMatrix::gram(t));
        let mut val = f64::NAN;
        if times == 1 {
            if let Ok(v) = cayley_laplace_numeric(&phi_t, &t0, fd_step) {
                val = v;
            }
        } else {
            // nested Laplacians for k >= 4: apply recursively
            fn nest(
                phi: &dyn Fn(&DMatrix<f64>) -> f64,
                t: &DMatrix<f64>,
                h: f64,
                depth: usize,
            ) -> Result<f64> {
                if depth == 1 {
                    cayley_laplace_numeric(phi, t, h)
                } else {
                    let inner =
                        |u: &DMatrix<f64>| nest(phi, u, h, depth - 1).unwrap_or(f64::NAN);
                    cayley_laplace_numeric(&inner, t, h)
                }
            }
            if let Ok(v) = nest(&phi_t, &t0, fd_step, times) {
                val = v;
            }
        }
        val
    })?;
    Ok(est.scale(sign / c))
}

/// Projection-slice check for the Gaussian witness: returns
/// `(lhs, rhs_re, rhs_im)` where `lhs = F f(xi b)` exactly and the right
/// side is the Monte Carlo Fourier integral of the Radon image in `t`.
pub fn projection_slice_check(
    n: usize,
    m: usize,
    k: usize,
    b: &RectMatrix,
    _xi: &StiefelFrame,
    engine: &Engine,
) -> Result<(f64, MCEstimate, MCEstimate)> {
    let q = n - k;
    if b.nrows() != q || b.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "b must lie in M_{{{q},{m}}}, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    let fourier = FourierClosedForm::gaussian(n, m);
    let y = RectMatrix::new(/* y = xi b has y'y = b'b */ b.dense().clone());
    let lhs = fourier.eval(&y);
    let km2 = PI.powf((k * m) as f64 / 2.0);
    let density = MatrixDensity::Gaussian { sigma: 1.0 };
    let bd = b.dense().clone();
    let re = monte_carlo(&engine.cfg, &engine.sampler, {
        let bd = bd.clone();
        move |rng| {
            let t = density.sample(q, m, rng);
            let phase = (bd.transpose() * t.dense()).trace();
            km2 * (-t.gram().trace()).exp() * phase.cos() / density.density(&t)
        }
    })?;
    let im = monte_carlo(&engine.cfg, &engine.sampler.stream(engine.sampler.stream_id ^ 0x7f), move |rng| {
        let t = density.sample(q, m, rng);
        let phase = (bd.transpose() * t.dense()).trace();
        km2 * (-t.gram().trace()).exp() * phase.sin() / density.density(&t)
    })?;
    Ok((lhs, re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcquad::sample_gaussian_matrix;
    use crate::symcone::MatrixPlane;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn wallach_param_riesz() {
        // (n, m) = (4, 2): k0 = min(1, 2) = 1
        assert!(RieszWallachParam::new(4, 2, 0.0).is_ok());
        assert!(RieszWallachParam::new(4, 2, 1.0).is_ok());
        assert!(RieszWallachParam::new(4, 2, 2.0).is_ok()); // > m-1
        assert!(RieszWallachParam::new(4, 2, 3.0).is_err()); // excluded n-m+1
        assert!(RieszWallachParam::new(4, 2, 0.5).is_err());
    }

    #[test]
    fn zeta_gaussian_rank_one_reduction() {
        // m=1: int exp(-|x|^2) |x|^{a-n} dx = pi^{n/2} Gamma(a/2)/Gamma(n/2)
        let (n, a) = (3usize, 2.2);
        let expect = PI.powf(n as f64 / 2.0) * crate::specialfn::real_gamma(a / 2.0)
            / crate::specialfn::real_gamma(n as f64 / 2.0);
        assert_relative_eq!(zeta_gaussian(n, 1, a).unwrap(), expect, max_relative = 1e-12);
        // pole of Gamma_m(alpha/2)
        assert!(matches!(zeta_gaussian(4, 2, 1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn zeta_gaussian_mc_oracle() {
        // (4,2,3): MC of int exp(-tr x'x)|x|_2^{alpha-n} dx
        let (n, m, alpha) = (4usize, 2usize, 3.0);
        let engine = Engine::new(200_000, 17);
        let est = crate::mcquad::integrate_matrix_space(
            |x: &RectMatrix| {
                let d = x.gram().det();
                (-x.gram().trace()).exp() * d.powf((alpha - n as f64) / 2.0)
            },
            n,
            m,
            MatrixDensity::Gaussian { sigma: 1.0 },
            &engine.cfg,
            &engine.sampler,
        )
        .unwrap();
        let expect = zeta_gaussian(n, m, alpha).unwrap();
        assert!(est.z_score(expect) < 3.0, "z = {}", est.z_score(expect));
    }

    #[test]
    fn riesz_zero_order_is_identity() {
        let f = MatrixField::gaussian(4, 2);
        let x = RectMatrix::identity_padded(4, 2);
        let engine = Engine::new(100, 1);
        let v = riesz_potential_int(&f, &x, 0, &engine).unwrap();
        assert_eq!(v.value(), f.eval(&x));
    }

    #[test]
    fn riesz_order_guard() {
        let f = MatrixField::gaussian(4, 2);
        let x = RectMatrix::zeros(4, 2);
        let engine = Engine::new(100, 1);
        assert!(matches!(
            riesz_potential_int(&f, &x, 3, &engine),
            Err(Error::OrderNotAdmissible { .. })
        ));
    }

    #[test]
    fn cayley_laplace_rank_one_classical() {
        // m=1: Delta |x|^lam = lam (lam + n - 2) |x|^{lam-2}
        let (n, lam) = (3usize, 4.0);
        let x = RectMatrix::from_fn(n, 1, |i, _| 0.5 + i as f64 * 0.3);
        let exact = cayley_laplace_power(n, 1, lam, &x).unwrap();
        let r = x.frobenius_norm();
        assert_relative_eq!(
            exact,
            lam * (lam + n as f64 - 2.0) * r.powf(lam - 2.0),
            max_relative = 1e-12
        );
        let fd = cayley_laplace_numeric(
            &|y: &DMatrix<f64>| {
                let nn = y.norm();
                nn.powf(lam)
            },
            x.dense(),
            1e-2,
        )
        .unwrap();
        assert_relative_eq!(fd, exact, max_relative = 1e-6);
    }

    #[test]
    fn cayley_laplace_matrix_case_fd() {
        // (n,m) = (3,2), random full-rank x: FD Delta |x|_m^lam vs CB(lam)
        let mut rng = ChaCha12Rng::seed_from_u64(51);
        let (n, m, lam) = (3usize, 2usize, 4.0);
        for _ in 0..3 {
            let x = sample_gaussian_matrix(n, m, &mut rng);
            let exact = cayley_laplace_power(n, m, lam, &x).unwrap();
            let fd = cayley_laplace_numeric(
                &|y: &DMatrix<f64>| SymmetricMatrix::gram(y).det().powf(lam / 2.0),
                x.dense(),
                1e-2,
            )
            .unwrap();
            assert_relative_eq!(fd, exact, max_relative = 1e-4);
        }
    }

    #[test]
    fn cayley_laplace_gaussian_sign_convention() {
        // for m = 1 the Cayley-Laplace operator is the ordinary Laplacian,
        // and I^{-2} e = (-1)^m Delta e fixes the sign convention
        let n = 3usize;
        let x = RectMatrix::from_fn(n, 1, |i, _| 0.2 * (i as f64 + 1.0));
        let r2 = x.frobenius_norm().powi(2);
        let exact = (4.0 * r2 - 2.0 * n as f64) * (-r2).exp();
        let fd = cayley_laplace_numeric(
            &|y: &DMatrix<f64>| (-y.norm_squared()).exp(),
            x.dense(),
            1e-2,
        )
        .unwrap();
        assert_relative_eq!(fd, exact, max_relative = 1e-6);
        let i_minus2 = -fd; // (-1)^m Delta e with m = 1
        assert!(i_minus2 > 0.0 || r2 > n as f64 / 2.0);
    }

    #[test]
    fn cayley_laplace_gaussian_rank_two() {
        // symbolic value for m = 2 derived by expanding det(d'd) on
        // exp(-tr x'x): with r = x'x,
        // Delta e = [(4 r11 - 2n)(4 r22 - 2n) - 4n + 8(r11 + r22) - 16 r12^2] e
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        let (n, m) = (3usize, 2usize);
        for _ in 0..4 {
            let x = sample_gaussian_matrix(n, m, &mut rng);
            let r = x.gram();
            let (r11, r12, r22) = (r.get(0, 0), r.get(0, 1), r.get(1, 1));
            let e = (-r.trace()).exp();
            let nf = n as f64;
            let exact = ((4.0 * r11 - 2.0 * nf) * (4.0 * r22 - 2.0 * nf) - 4.0 * nf
                + 8.0 * (r11 + r22)
                - 16.0 * r12 * r12)
                * e;
            let fd = cayley_laplace_numeric(
                &|y: &DMatrix<f64>| (-y.norm_squared()).exp(),
                x.dense(),
                1e-2,
            )
            .unwrap();
            assert_relative_eq!(fd, exact, max_relative = 1e-5);
        }
    }

    #[test]
    fn cayley_laplace_dimension_guard() {
        let x = DMatrix::<f64>::identity(5, 2);
        assert!(matches!(
            cayley_laplace_numeric(&|_: &DMatrix<f64>| 0.0, &x, 1e-2),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn fuglede_gaussian_at_origin() {
        let (n, m, k) = (4usize, 2usize, 2usize);
        let f = MatrixField::gaussian(n, m);
        let x = RectMatrix::zeros(n, m);
        let engine = Engine::new(60_000, 21);
        let (lhs, rhs) = fuglede_check(&f, &x, k, 0, &engine).unwrap();
        // at x = 0 the back-projection integrand is constant pi^{km/2}
        assert_relative_eq!(lhs.value, PI.powi(2), max_relative = 1e-12);
        assert!(lhs.z_against(&rhs) < 3.0, "z = {}", lhs.z_against(&rhs));
    }

    #[test]
    fn projection_slice_zero_frequency() {
        let (n, m, k) = (5usize, 2usize, 2usize);
        let engine = Engine::new(50_000, 23);
        let xi = StiefelFrame::coordinate_tail(n, n - k);
        let b = RectMatrix::zeros(n - k, m);
        let (lhs, re, im) = projection_slice_check(n, m, k, &b, &xi, &engine).unwrap();
        assert_relative_eq!(lhs, PI.powf((n * m) as f64 / 2.0), max_relative = 1e-12);
        assert!(re.z_score(lhs) < 3.0);
        assert!(im.z_score(0.0) < 3.0);
    }

    #[test]
    fn projection_slice_closed_form_consistency() {
        // pi^{km/2} pi^{(n-k)m/2} exp(-tr(b'b)/4) agrees with F f(xi b)
        let (n, m, k) = (5usize, 2usize, 2usize);
        let mut rng = ChaCha12Rng::seed_from_u64(52);
        let b = sample_gaussian_matrix(n - k, m, &mut rng);
        let lhs = FourierClosedForm::gaussian(n, m).eval(&RectMatrix::new(b.dense().clone()));
        let rhs = PI.powf((k * m) as f64 / 2.0)
            * PI.powf(((n - k) * m) as f64 / 2.0)
            * (-b.gram().trace() / 4.0).exp();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn plane_wave_inversion_gaussian_origin() {
        let (n, m, k) = (4usize, 2usize, 2usize);
        let f = MatrixField::gaussian(n, m);
        let x = RectMatrix::zeros(n, m);
        let engine = Engine::new(4_000, 25);
        let est = plane_wave_invert_even(&f, &x, k, 1e-2, &engine).unwrap();
        let err = (est.value - 1.0).abs();
        assert!(err < (3.0 * est.stderr).max(1e-2), "got {} +- {}", est.value, est.stderr);
    }

    #[test]
    fn fuglede_zero_field_is_zero_pair() {
        let (n, m, k) = (4usize, 2usize, 2usize);
        let f = MatrixField::gaussian(n, m).scaled(0.0);
        let engine = Engine::new(2_000, 3);
        let (lhs, rhs) = fuglede_check(&f, &RectMatrix::zeros(n, m), k, 0, &engine).unwrap();
        assert_eq!(lhs.value, 0.0);
        assert_eq!(rhs.value, 0.0);
    }

    #[test]
    fn plane_wave_linearity() {
        let (n, m, k) = (4usize, 2usize, 2usize);
        let f = MatrixField::gaussian(n, m);
        let x = RectMatrix::zeros(n, m);
        let engine = Engine::new(500, 9);
        let one = plane_wave_invert_even(&f, &x, k, 1e-2, &engine).unwrap();
        let five = plane_wave_invert_even(&f.clone().scaled(5.0), &x, k, 1e-2, &engine).unwrap();
        assert!((five.value - 5.0 * one.value).abs() < 1e-6 * one.value.abs());
    }

    #[test]
    fn plane_wave_rejects_odd_k() {
        let f = MatrixField::gaussian(4, 2);
        let x = RectMatrix::zeros(4, 2);
        let engine = Engine::new(100, 1);
        assert!(matches!(
            plane_wave_invert_even(&f, &x, 1, 1e-2, &engine),
            Err(Error::OddOrderUnsupported(1))
        ));
    }

    #[test]
    fn semyanistyi_excluded_order() {
        let (n, m, k) = (5usize, 2usize, 2usize);
        let f = MatrixField::gaussian(n, m);
        let mut rng = ChaCha12Rng::seed_from_u64(53);
        let xi = sample_stiefel(n, n - k, &mut rng);
        let t = sample_gaussian_matrix(n - k, m, &mut rng);
        let plane = MatrixPlane::new(xi, t, k).unwrap();
        let engine = Engine::new(100, 1);
        // alpha = n-k-m+1 = 2 is excluded
        assert!(matches!(
            semyanistyi_p(&f, &plane, 2.0, &engine),
            Err(Error::OrderNotAdmissible { .. })
        ));
        // alpha <= m-1 is excluded
        assert!(matches!(
            semyanistyi_p(&f, &plane, 0.8, &engine),
            Err(Error::OrderNotAdmissible { .. })
        ));
    }

    #[test]
    fn semyanistyi_zero_field() {
        let (n, m, k) = (5usize, 2usize, 2usize);
        let f = MatrixField::custom(n, m, None, |_| 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(54);
        let xi = sample_stiefel(n, n - k, &mut rng);
        let t = sample_gaussian_matrix(n - k, m, &mut rng);
        let plane = MatrixPlane::new(xi, t, k).unwrap();
        let engine = Engine::new(5_000, 2);
        let est = semyanistyi_p(&f, &plane, 2.5, &engine).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn semyanistyi_matches_tilde_riesz_of_radon_image() {
        // P^alpha f = Ĩ^alpha fhat: for the Gaussian, compare the full
        // x-space Monte Carlo against an independent t-space Monte Carlo of
        // the Riesz potential of the image pi^{km/2} exp(-tr t't)
        let (n, m, k, alpha) = (5usize, 2usize, 2usize, 1.5);
        let q = n - k;
        let f = MatrixField::gaussian(n, m);
        let mut rng = ChaCha12Rng::seed_from_u64(55);
        let xi = sample_stiefel(n, n - k, &mut rng);
        let t = RectMatrix::new(sample_gaussian_matrix(n - k, m, &mut rng).dense() * 0.5);
        let plane = MatrixPlane::new(xi, t.clone(), k).unwrap();
        let engine = Engine::new(150_000, 31);
        let lhs = semyanistyi_p(&f, &plane, alpha, &engine).unwrap();

        // RHS: (1/gamma_{q,m}(alpha)) int pi^{km/2} e^{-tr (t-y)'(t-y)} |y|^{alpha-q} dy
        let front = PI.powf((q * m) as f64 / 2.0) / gamma_m(m, q as f64 / 2.0).unwrap()
            * gamma_m(m, alpha / 2.0).unwrap()
            / riesz_gamma(q, m, alpha).unwrap();
        let td = t.dense().clone();
        let rhs = monte_carlo(&engine.stream(7).cfg, &engine.stream(7).sampler, move |rng| {
            let (y, tr_rho) = sample_riesz_kernel(q, m, alpha, rng);
            let diff = RectMatrix::new(&td - y.dense());
            PI.powf((k * m) as f64 / 2.0) * (-diff.gram().trace()).exp() * tr_rho.exp()
        })
        .unwrap()
        .scale(front);
        assert!(lhs.z_against(&rhs) < 3.0, "z = {} ({} vs {})", lhs.z_against(&rhs), lhs.value, rhs.value);
    }
}
