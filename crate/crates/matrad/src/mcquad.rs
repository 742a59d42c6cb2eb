//! Seeded samplers for the manifolds of the calculus (Stiefel frames, the
//! cone `P_m`, matrix space) and a deterministic Monte Carlo integration
//! engine.
//!
//! Determinism contract: a fixed `(seed, stream_id)` produces bit-identical
//! estimates regardless of thread count. Sampling is chunked with a fixed
//! chunk size, every chunk owns an independent counter-seeded generator, and
//! chunk partials are combined by pairwise summation in chunk order.

use crate::error::{Error, Result};
use crate::specialfn::{beta_m, gamma_m, real_gamma, stiefel_volume};
use crate::symcone::{PositiveDefiniteMatrix, RectMatrix, StiefelFrame, SymmetricMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Share of non-finite draws above which an integral is declared
/// non-integrable.
pub const NONFINITE_ABORT_SHARE: f64 = 1e-3;
/// Rejection samplers abort below this acceptance rate.
pub const ACCEPTANCE_ABORT: f64 = 0.01;

/// A Monte Carlo value with its standard error and sample count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

impl MCEstimate {
    pub fn exact(value: f64) -> Self {
        MCEstimate { value, stderr: 0.0, n_samples: 1 }
    }

    /// `|value - target| / stderr`, with the denominator floored at machine
    /// noise so exact-vs-exact comparisons do not divide by zero.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.value - target).abs();
        let floor = 1e-12 * (self.value.abs() + target.abs()).max(1e-300);
        diff / self.stderr.max(floor)
    }

    /// z-score of the difference of two independent estimates under their
    /// combined standard error.
    pub fn z_against(&self, other: &MCEstimate) -> f64 {
        let se = (self.stderr * self.stderr + other.stderr * other.stderr).sqrt();
        let diff = (self.value - other.value).abs();
        let floor = 1e-12 * (self.value.abs() + other.value.abs()).max(1e-300);
        diff / se.max(floor)
    }

    pub fn scale(&self, c: f64) -> MCEstimate {
        MCEstimate { value: c * self.value, stderr: c.abs() * self.stderr, n_samples: self.n_samples }
    }
}

/// Deterministic seed fan-out: `(seed, stream_id)` identifies a stream, and
/// each fixed-size chunk of draws inside a stream owns a counter-constructed
/// ChaCha generator.
#[derive(Clone, Copy, Debug)]
pub struct SeededSampler {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler { seed, stream_id: 0 }
    }

    pub fn stream(&self, stream_id: u64) -> Self {
        SeededSampler { seed: self.seed, stream_id }
    }

    pub fn rng_for_chunk(&self, chunk: u64) -> ChaCha12Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        key[16..24].copy_from_slice(&chunk.to_le_bytes());
        key[24..32].copy_from_slice(b"mradchnk");
        ChaCha12Rng::from_seed(key)
    }

    /// A generator for one-off draws outside the chunked engine.
    pub fn rng(&self) -> ChaCha12Rng {
        self.rng_for_chunk(u64::MAX)
    }
}

/// Engine configuration. `chunk_size` is part of the determinism contract
/// and should not be varied when reproducibility across runs matters.
#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub n_samples: u64,
    pub chunk_size: u64,
    pub parallel: bool,
}

impl McConfig {
    pub fn new(n_samples: u64) -> Self {
        McConfig { n_samples, chunk_size: 4096, parallel: true }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig::new(200_000)
    }
}

/// Bundle of engine configuration, seed stream, and optional importance
/// density overrides, passed to every stochastic operation.
#[derive(Clone, Debug)]
pub struct Engine {
    pub cfg: McConfig,
    pub sampler: SeededSampler,
    /// overrides the per-integrand default density on matrix space
    pub matrix_density: Option<MatrixDensity>,
    /// overrides the per-integrand default density on the cone
    pub cone_density: Option<ConeDensity>,
}

impl Engine {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Engine {
            cfg: McConfig::new(n_samples),
            sampler: SeededSampler::new(seed),
            matrix_density: None,
            cone_density: None,
        }
    }

    /// Same engine on an independent substream.
    pub fn stream(&self, id: u64) -> Self {
        let mut e = self.clone();
        e.sampler = self.sampler.stream(id);
        e
    }

    pub fn with_samples(mut self, n: u64) -> Self {
        self.cfg.n_samples = n;
        self
    }

    pub fn with_matrix_density(mut self, d: MatrixDensity) -> Self {
        self.matrix_density = Some(d);
        self
    }

    pub fn with_cone_density(mut self, d: ConeDensity) -> Self {
        self.cone_density = Some(d);
        self
    }
}

#[derive(Clone, Copy, Default)]
struct ChunkStat {
    sum: f64,
    sumsq: f64,
    n: u64,
    bad: u64,
}

fn pairwise<T: Copy, F: Fn(T, T) -> T + Copy>(xs: &[T], combine: F) -> Option<T> {
    match xs.len() {
        0 => None,
        1 => Some(xs[0]),
        len => {
            let (a, b) = xs.split_at(len / 2);
            Some(combine(pairwise(a, combine)?, pairwise(b, combine)?))
        }
    }
}

/// Core chunked Monte Carlo mean of `draw` over `cfg.n_samples` draws:
/// returns the estimate of `E[draw]` with standard error.
pub fn monte_carlo<F>(cfg: &McConfig, sampler: &SeededSampler, draw: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha12Rng) -> f64 + Sync,
{
    let n = cfg.n_samples.max(2);
    let chunk = cfg.chunk_size.max(1);
    let n_chunks = n.div_ceil(chunk);
    let run_chunk = |c: u64| -> ChunkStat {
        let mut rng = sampler.rng_for_chunk(c);
        let lo = c * chunk;
        let hi = (lo + chunk).min(n);
        let mut st = ChunkStat::default();
        for _ in lo..hi {
            let v = draw(&mut rng);
            if v.is_finite() {
                st.sum += v;
                st.sumsq += v * v;
            } else {
                st.bad += 1;
            }
            st.n += 1;
        }
        st
    };
    let stats: Vec<ChunkStat> = if cfg.parallel {
        (0..n_chunks).into_par_iter().map(run_chunk).collect()
    } else {
        (0..n_chunks).map(run_chunk).collect()
    };
    let combine = |a: ChunkStat, b: ChunkStat| ChunkStat {
        sum: a.sum + b.sum,
        sumsq: a.sumsq + b.sumsq,
        n: a.n + b.n,
        bad: a.bad + b.bad,
    };
    let total = pairwise(&stats, combine).expect("at least one chunk");
    let share = total.bad as f64 / total.n as f64;
    if share > NONFINITE_ABORT_SHARE {
        return Err(Error::NonFinite { share: 100.0 * share });
    }
    // non-finite draws (a sub-0.1% measure-zero fringe) contribute zero
    let nf = total.n as f64;
    let mean = total.sum / nf;
    let var = ((total.sumsq - total.sum * total.sum / nf) / (nf - 1.0)).max(0.0);
    Ok(MCEstimate { value: mean, stderr: (var / nf).sqrt(), n_samples: total.n })
}

// ---------------------------------------------------------------------------
// elementary samplers
// ---------------------------------------------------------------------------

/// An `n x m` matrix with i.i.d. standard normal entries.
pub fn sample_gaussian_matrix(n: usize, m: usize, rng: &mut impl Rng) -> RectMatrix {
    RectMatrix::from_fn(n, m, |_, _| StandardNormal.sample(rng))
}

/// A Haar-distributed frame on `V_{n,m}`: QR of a Gaussian matrix with the
/// R-diagonal signs fixed. Degenerate draws (measure zero) are redrawn.
pub fn sample_stiefel(n: usize, m: usize, rng: &mut impl Rng) -> StiefelFrame {
    loop {
        let g = sample_gaussian_matrix(n, m, rng);
        if let Ok(frame) = StiefelFrame::new(g.dense().clone()) {
            return frame;
        }
    }
}

/// Bartlett sampler for the cone density
/// `p(r) = exp(-tr(r)/theta) |r|^{gamma-d} / (theta^{gamma m} Gamma_m(gamma))`
/// via the triangular parameterization `r = t't`. Requires
/// `gamma > (m-1)/2`.
pub fn sample_cone_wishart(
    m: usize,
    gamma: f64,
    theta: f64,
    rng: &mut impl Rng,
) -> PositiveDefiniteMatrix {
    assert!(gamma > (m as f64 - 1.0) / 2.0, "Bartlett shape must stay positive");
    loop {
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            let shape = gamma - i as f64 / 2.0;
            let g = Gamma::new(shape, 1.0).expect("valid shape").sample(rng);
            t[(i, i)] = (theta * g).sqrt();
            for j in (i + 1)..m {
                let z: f64 = StandardNormal.sample(rng);
                t[(i, j)] = (theta / 2.0).sqrt() * z;
            }
        }
        let r = SymmetricMatrix::gram(&t);
        if let Ok(pd) = PositiveDefiniteMatrix::new(r) {
            return pd;
        }
        // an underflowed pivot (tiny Gamma draw); redraw
    }
}

/// Sampler for the heavy-tailed matrix-F (beta-prime) cone density
/// `p(r) = |r|^{a-d} |I+r|^{-(a+b)} / B_m(a, b)`, realized as
/// `r = B^{-1/2} A B^{-1/2}` with independent Bartlett draws `A, B`.
pub fn sample_cone_beta_prime(
    m: usize,
    a: f64,
    b: f64,
    rng: &mut impl Rng,
) -> PositiveDefiniteMatrix {
    loop {
        let num = sample_cone_wishart(m, a, 1.0, rng);
        let den = sample_cone_wishart(m, b, 1.0, rng);
        let half = den.inv_sqrt();
        let r = half.to_dense() * num.to_dense() * half.to_dense();
        if let Ok(pd) = PositiveDefiniteMatrix::new(SymmetricMatrix::from_dense(&r).unwrap()) {
            return pd;
        }
    }
}

/// Uniform sample from the matrix interval `(0, I_m)` in `P_m` by rejection
/// from the bounding box. Returns the draw and the number of proposals used.
pub fn sample_unit_interval(m: usize, rng: &mut impl Rng) -> (PositiveDefiniteMatrix, u64) {
    let mut proposals = 0;
    loop {
        proposals += 1;
        let u = SymmetricMatrix::from_fn(m, |i, j| {
            if i == j {
                rng.gen_range(0.0..1.0)
            } else {
                rng.gen_range(-1.0..1.0)
            }
        });
        if let Ok(pd) = PositiveDefiniteMatrix::new(u.clone()) {
            let complement = SymmetricMatrix::identity(m).sub(&u);
            if PositiveDefiniteMatrix::new(complement).is_ok() {
                return (pd, proposals);
            }
        }
        if proposals > 200_000 {
            panic!("interval rejection sampler stalled; m too large");
        }
    }
}

/// Exact Lebesgue volume of `{u in P_m : 0 < u < I_m}`, i.e. `B_m(d, d)`.
pub fn unit_interval_volume(m: usize) -> f64 {
    let d = (m as f64 + 1.0) / 2.0;
    beta_m(m, d, d).expect("d is never a pole")
}

/// Uniform sample from the Gram ball `{h in M_{k,m} : h'h < I_m}` by
/// rejection from the entrywise box.
pub fn sample_gram_ball(k: usize, m: usize, rng: &mut impl Rng) -> (RectMatrix, u64) {
    let mut proposals = 0;
    loop {
        proposals += 1;
        let h = RectMatrix::from_fn(k, m, |_, _| rng.gen_range(-1.0..1.0));
        let s = SymmetricMatrix::identity(m).sub(&h.gram());
        if PositiveDefiniteMatrix::new(s).is_ok() {
            return (h, proposals);
        }
        if proposals > 200_000 {
            panic!("gram-ball rejection sampler stalled; k*m too large");
        }
    }
}

/// Exact volume of the Gram ball `{h in M_{k,m} : h'h < I_m}`:
/// `pi^{km/2} Gamma_m(d) / Gamma_m(k/2 + d)`.
pub fn gram_ball_volume(k: usize, m: usize) -> f64 {
    let d = (m as f64 + 1.0) / 2.0;
    PI.powf((k * m) as f64 / 2.0) * gamma_m(m, d).unwrap() / gamma_m(m, k as f64 / 2.0 + d).unwrap()
}

// ---------------------------------------------------------------------------
// importance densities
// ---------------------------------------------------------------------------

/// Importance densities on the matrix space `M_{rows,cols}`. Integrands
/// range from Schwartz-class to barely integrable power laws, so the density
/// is selectable per integral.
#[derive(Clone, Copy, Debug)]
pub enum MatrixDensity {
    /// entries i.i.d. `N(0, sigma^2/2)`: `p(w) = (pi sigma^2)^{-D/2} exp(-tr(w'w)/sigma^2)`
    Gaussian { sigma: f64 },
    /// `sigma` times a standard multivariate Student-t with `nu` degrees of
    /// freedom on the `D = rows*cols` entries; polynomial tails of order
    /// `nu + D`.
    StudentT { nu: f64, sigma: f64 },
    /// uniform on the Frobenius ball of given radius
    UniformBall { radius: f64 },
    /// uniform on the Frobenius shell `r0 <= |w| <= r1`
    UniformShell { r0: f64, r1: f64 },
}

fn ball_volume(dim: usize, radius: f64) -> f64 {
    PI.powf(dim as f64 / 2.0) / real_gamma(dim as f64 / 2.0 + 1.0) * radius.powi(dim as i32)
}

impl MatrixDensity {
    pub fn sample(&self, rows: usize, cols: usize, rng: &mut impl Rng) -> RectMatrix {
        let dim = rows * cols;
        match *self {
            MatrixDensity::Gaussian { sigma } => {
                let c = sigma / 2f64.sqrt();
                RectMatrix::from_fn(rows, cols, |_, _| {
                    c * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                })
            }
            MatrixDensity::StudentT { nu, sigma } => {
                let chi2 = Gamma::new(nu / 2.0, 2.0).unwrap().sample(rng);
                let scale = sigma * (nu / chi2).sqrt();
                RectMatrix::from_fn(rows, cols, |_, _| {
                    scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                })
            }
            MatrixDensity::UniformBall { radius } => {
                let g = RectMatrix::from_fn(rows, cols, |_, _| {
                    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                });
                let norm = g.frobenius_norm();
                let u: f64 = rng.gen_range(0.0..1.0);
                let r = radius * u.powf(1.0 / dim as f64);
                RectMatrix::new(g.dense() * (r / norm))
            }
            MatrixDensity::UniformShell { r0, r1 } => {
                let g = RectMatrix::from_fn(rows, cols, |_, _| {
                    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                });
                let norm = g.frobenius_norm();
                let u: f64 = rng.gen_range(0.0..1.0);
                let d = dim as f64;
                let r = (r0.powf(d) + u * (r1.powf(d) - r0.powf(d))).powf(1.0 / d);
                RectMatrix::new(g.dense() * (r / norm))
            }
        }
    }

    pub fn density(&self, w: &RectMatrix) -> f64 {
        let dim = (w.nrows() * w.ncols()) as f64;
        match *self {
            MatrixDensity::Gaussian { sigma } => {
                let q = w.frobenius_norm().powi(2) / (sigma * sigma);
                (PI * sigma * sigma).powf(-dim / 2.0) * (-q).exp()
            }
            MatrixDensity::StudentT { nu, sigma } => {
                let t2 = (w.frobenius_norm() / sigma).powi(2);
                let c = real_gamma((nu + dim) / 2.0)
                    / (real_gamma(nu / 2.0) * (nu * PI).powf(dim / 2.0) * sigma.powf(dim));
                c * (1.0 + t2 / nu).powf(-(nu + dim) / 2.0)
            }
            MatrixDensity::UniformBall { radius } => {
                if w.frobenius_norm() <= radius {
                    1.0 / ball_volume(w.nrows() * w.ncols(), radius)
                } else {
                    0.0
                }
            }
            MatrixDensity::UniformShell { r0, r1 } => {
                let nrm = w.frobenius_norm();
                if nrm >= r0 && nrm <= r1 {
                    let d = w.nrows() * w.ncols();
                    1.0 / (ball_volume(d, r1) - ball_volume(d, r0))
                } else {
                    0.0
                }
            }
        }
    }
}

/// Importance densities on the cone `P_m`.
#[derive(Clone, Copy, Debug)]
pub enum ConeDensity {
    /// `exp(-tr(r)/theta) |r|^{gamma-d} / (theta^{gamma m} Gamma_m(gamma))`
    Wishart { gamma: f64, theta: f64 },
    /// `|r|^{a-d} |I+r|^{-(a+b)} / B_m(a,b)`: polynomial tail `|r|^{-b-d}`
    BetaPrime { a: f64, b: f64 },
}

impl ConeDensity {
    pub fn sample(&self, m: usize, rng: &mut impl Rng) -> PositiveDefiniteMatrix {
        match *self {
            ConeDensity::Wishart { gamma, theta } => sample_cone_wishart(m, gamma, theta, rng),
            ConeDensity::BetaPrime { a, b } => sample_cone_beta_prime(m, a, b, rng),
        }
    }

    pub fn density(&self, r: &PositiveDefiniteMatrix) -> f64 {
        let m = r.dim();
        let d = (m as f64 + 1.0) / 2.0;
        match *self {
            ConeDensity::Wishart { gamma, theta } => {
                (-r.trace() / theta).exp() * r.det().powf(gamma - d)
                    / (theta.powf(gamma * m as f64) * gamma_m(m, gamma).unwrap())
            }
            ConeDensity::BetaPrime { a, b } => {
                let ipr = (DMatrix::identity(m, m) + r.to_dense()).determinant();
                r.det().powf(a - d) * ipr.powf(-(a + b)) / beta_m(m, a, b).unwrap()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// integration over the supported domains
// ---------------------------------------------------------------------------

/// Domain selector for [`integrate_cone`].
#[derive(Clone, Debug)]
pub enum ConeDomain {
    /// the whole cone `P_m`
    Full,
    /// the matrix interval `(a, b) = {r : r - a > 0, b - r > 0}`
    Interval { a: SymmetricMatrix, b: SymmetricMatrix },
    /// the shifted cone `s + P_m`
    Shifted { s: SymmetricMatrix },
}

/// Unbiased estimate of `int f(w) dw` over `M_{rows,cols}` under the chosen
/// importance density.
pub fn integrate_matrix_space<F>(
    f: F,
    rows: usize,
    cols: usize,
    density: MatrixDensity,
    cfg: &McConfig,
    sampler: &SeededSampler,
) -> Result<MCEstimate>
where
    F: Fn(&RectMatrix) -> f64 + Sync,
{
    monte_carlo(cfg, sampler, |rng| {
        let w = density.sample(rows, cols, rng);
        f(&w) / density.density(&w)
    })
}

/// Unbiased estimate of `int f(r) dr` over the requested cone domain.
///
/// The full cone and shifted cone use the supplied importance density (the
/// shifted case integrates `f(s + q)` with `q` drawn on `P_m`). The interval
/// draws `r = a + c^{1/2} u c^{1/2}`, `c = b - a`, with `u` uniform on
/// `(0, I_m)`, whose exact volume is `B_m(d, d)`.
pub fn integrate_cone<F>(
    f: F,
    m: usize,
    domain: &ConeDomain,
    density: ConeDensity,
    cfg: &McConfig,
    sampler: &SeededSampler,
) -> Result<MCEstimate>
where
    F: Fn(&SymmetricMatrix) -> f64 + Sync,
{
    match domain {
        ConeDomain::Full => monte_carlo(cfg, sampler, |rng| {
            let r = density.sample(m, rng);
            f(r.base()) / density.density(&r)
        }),
        ConeDomain::Shifted { s } => monte_carlo(cfg, sampler, |rng| {
            let q = density.sample(m, rng);
            f(&s.add(q.base())) / density.density(&q)
        }),
        ConeDomain::Interval { a, b } => {
            // the interval sampler rejects from the entrywise box; its
            // acceptance rate is an exact volume ratio, so gate up front
            let acceptance = unit_interval_volume(m) / 2f64.powi((m * (m - 1) / 2) as i32);
            if acceptance < ACCEPTANCE_ABORT {
                return Err(Error::LowAcceptance(acceptance));
            }
            let c = b.sub(a);
            let c = PositiveDefiniteMatrix::new(c)
                .map_err(|_| Error::EmptyDomain("b - a is not positive definite".into()))?;
            let croot = c.sqrt().to_dense();
            let jac = c.det().powf((m as f64 + 1.0) / 2.0);
            let vol = unit_interval_volume(m);
            let est = monte_carlo(cfg, sampler, |rng| {
                let (u, _) = sample_unit_interval(m, rng);
                let r = SymmetricMatrix::from_dense(&(&croot * u.to_dense() * &croot))
                    .unwrap()
                    .add(a);
                f(&r)
            })?;
            Ok(est.scale(jac * vol))
        }
    }
}

/// Haar average over `V_{n,m}`: estimates `(1/sigma_{n,m}) int f(v) dv`.
pub fn average_stiefel<F>(
    f: F,
    n: usize,
    m: usize,
    cfg: &McConfig,
    sampler: &SeededSampler,
) -> Result<MCEstimate>
where
    F: Fn(&StiefelFrame) -> f64 + Sync,
{
    monte_carlo(cfg, sampler, |rng| {
        let v = sample_stiefel(n, m, rng);
        f(&v)
    })
}

/// Total Haar integral over `V_{n,m}` (average times `sigma_{n,m}`).
pub fn integrate_stiefel<F>(
    f: F,
    n: usize,
    m: usize,
    cfg: &McConfig,
    sampler: &SeededSampler,
) -> Result<MCEstimate>
where
    F: Fn(&StiefelFrame) -> f64 + Sync,
{
    Ok(average_stiefel(f, n, m, cfg, sampler)?.scale(stiefel_volume(n, m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stiefel_sign_distribution_in_rank_one() {
        // V_{1,1} = {+1, -1} with equal probability
        let sampler = SeededSampler::new(1);
        let mut rng = sampler.rng();
        let mut plus = 0;
        for _ in 0..2000 {
            let v = sample_stiefel(1, 1, &mut rng);
            let x = v.dense()[(0, 0)];
            assert!((x.abs() - 1.0).abs() < 1e-14);
            if x > 0.0 {
                plus += 1;
            }
        }
        let share = plus as f64 / 2000.0;
        assert!((share - 0.5).abs() < 0.05, "share = {share}");
    }

    #[test]
    fn stiefel_frames_are_orthonormal() {
        let sampler = SeededSampler::new(2);
        let mut rng = sampler.rng();
        for _ in 0..200 {
            let v = sample_stiefel(5, 3, &mut rng);
            assert!(v.orthonormality_defect() <= 1e-12);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let sampler = SeededSampler::new(77).stream(3);
        let cfg_par = McConfig::new(50_000);
        let cfg_seq = cfg_par.sequential();
        let f = |rng: &mut ChaCha12Rng| -> f64 {
            let w = sample_gaussian_matrix(2, 2, rng);
            (-w.gram().trace()).exp()
        };
        let a = monte_carlo(&cfg_par, &sampler, f).unwrap();
        let b = monte_carlo(&cfg_seq, &sampler, f).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert_eq!(a.n_samples, b.n_samples);
    }

    #[test]
    fn gaussian_matrix_moments() {
        let sampler = SeededSampler::new(5);
        let cfg = McConfig::new(100_000);
        let mean = monte_carlo(&cfg, &sampler, |rng| {
            sample_gaussian_matrix(3, 2, rng).dense()[(1, 0)]
        })
        .unwrap();
        assert!(mean.z_score(0.0) < 4.0);
        let var = monte_carlo(&cfg, &sampler.stream(1), |rng| {
            sample_gaussian_matrix(3, 2, rng).dense()[(2, 1)].powi(2)
        })
        .unwrap();
        assert!(var.z_score(1.0) < 4.0);
    }

    #[test]
    fn gaussian_integral_on_matrix_space() {
        // int exp(-tr(w'w)) dw over M_{k,m} = pi^{km/2}
        let (k, m) = (2usize, 2usize);
        let sampler = SeededSampler::new(6);
        let cfg = McConfig::new(200_000);
        let est = integrate_matrix_space(
            |w| (-w.gram().trace()).exp(),
            k,
            m,
            MatrixDensity::Gaussian { sigma: 1.2 },
            &cfg,
            &sampler,
        )
        .unwrap();
        assert!(est.z_score(PI.powf((k * m) as f64 / 2.0)) < 3.0, "z = {}", est.z_score(PI.powi(2)));
    }

    #[test]
    fn shifted_power_integral_matches_table() {
        // int |I + w'w|^{-lambda/2} dw = pi^{km/2} Gamma_m((lambda-k)/2)/Gamma_m(lambda/2)
        let (k, m, lam) = (2usize, 2usize, 8.0);
        let sampler = SeededSampler::new(7);
        let cfg = McConfig::new(200_000);
        let est = integrate_matrix_space(
            |w| {
                let s = w.gram().add(&SymmetricMatrix::identity(m));
                s.det().powf(-lam / 2.0)
            },
            k,
            m,
            MatrixDensity::StudentT { nu: 4.0, sigma: 1.0 },
            &cfg,
            &sampler,
        )
        .unwrap();
        let expect = PI.powf((k * m) as f64 / 2.0)
            * gamma_m(m, (lam - k as f64) / 2.0).unwrap()
            / gamma_m(m, lam / 2.0).unwrap();
        assert!(est.z_score(expect) < 3.0, "z = {}", est.z_score(expect));
    }

    #[test]
    fn cone_gamma_integral() {
        // int_{P_2} exp(-tr r) |r|^{alpha-d} dr = Gamma_2(alpha), alpha = 3
        let m = 2usize;
        let alpha = 3.0;
        let d = 1.5;
        let sampler = SeededSampler::new(8);
        let cfg = McConfig::new(400_000);
        let est = integrate_cone(
            |r| (-r.trace()).exp() * r.det().powf(alpha - d),
            m,
            &ConeDomain::Full,
            ConeDensity::Wishart { gamma: 2.0, theta: 1.0 },
            &cfg,
            &sampler,
        )
        .unwrap();
        let expect = gamma_m(m, alpha).unwrap();
        assert!(est.z_score(expect) < 3.0, "z = {}", est.z_score(expect));
    }

    #[test]
    fn cone_beta_integral() {
        // int_0^{I_2} |r|^{alpha-d}|I-r|^{beta-d} dr = B_2(alpha, beta), alpha=beta=3
        let m = 2usize;
        let (alpha, beta) = (3.0, 3.0);
        let d = 1.5;
        let sampler = SeededSampler::new(9);
        let cfg = McConfig::new(200_000);
        let eye = SymmetricMatrix::identity(m);
        let est = integrate_cone(
            |r| {
                let c = eye.sub(r);
                r.det().powf(alpha - d) * c.det().powf(beta - d)
            },
            m,
            &ConeDomain::Interval { a: SymmetricMatrix::zeros(m), b: eye.clone() },
            ConeDensity::Wishart { gamma: 2.0, theta: 1.0 },
            &cfg,
            &sampler,
        )
        .unwrap();
        let expect = beta_m(m, alpha, beta).unwrap();
        assert!(est.z_score(expect) < 3.0, "z = {}", est.z_score(expect));
    }

    #[test]
    fn empty_interval_rejected() {
        let m = 2;
        let a = SymmetricMatrix::identity(m);
        let res = integrate_cone(
            |_| 1.0,
            m,
            &ConeDomain::Interval { a: a.clone(), b: a.clone() },
            ConeDensity::Wishart { gamma: 2.0, theta: 1.0 },
            &McConfig::new(100),
            &SeededSampler::new(1),
        );
        assert!(matches!(res, Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn zero_integrand_is_exactly_zero() {
        let est = integrate_matrix_space(
            |_| 0.0,
            2,
            2,
            MatrixDensity::Gaussian { sigma: 1.0 },
            &McConfig::new(10_000),
            &SeededSampler::new(4),
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn nonfinite_integrand_aborts() {
        let res = integrate_matrix_space(
            |w| 1.0 / (w.dense()[(0, 0)].abs() - w.dense()[(0, 0)].abs()), // always inf/nan
            2,
            2,
            MatrixDensity::Gaussian { sigma: 1.0 },
            &McConfig::new(10_000),
            &SeededSampler::new(4),
        );
        assert!(matches!(res, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn wishart_density_normalizes() {
        // E[1/p(r)] under p equals the total mass of the sampling region only
        // when integrable; instead check E[f/p] for f the density itself = 1.
        let sampler = SeededSampler::new(10);
        let cfg = McConfig::new(100_000);
        let density = ConeDensity::Wishart { gamma: 2.5, theta: 0.8 };
        let est = integrate_cone(
            |r| {
                let pd = PositiveDefiniteMatrix::new(r.clone()).unwrap();
                density.density(&pd)
            },
            2,
            &ConeDomain::Full,
            density,
            &cfg,
            &sampler,
        )
        .unwrap();
        assert_relative_eq!(est.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn beta_prime_density_normalizes_statistically() {
        // sample under Wishart, integrate the beta-prime density: must be 1
        let sampler = SeededSampler::new(11);
        let cfg = McConfig::new(200_000);
        let bp = ConeDensity::BetaPrime { a: 2.0, b: 1.5 };
        let est = integrate_cone(
            |r| {
                let pd = PositiveDefiniteMatrix::new(r.clone()).unwrap();
                bp.density(&pd)
            },
            2,
            &ConeDomain::Full,
            ConeDensity::BetaPrime { a: 1.5, b: 1.0 },
            &cfg,
            &sampler,
        )
        .unwrap();
        assert!(est.z_score(1.0) < 3.5, "z = {}", est.z_score(1.0));
    }

    #[test]
    fn volumes_are_consistent() {
        // rejection acceptance rate must match the exact volume over the box
        let m = 2;
        let sampler = SeededSampler::new(12);
        let mut rng = sampler.rng();
        let mut props = 0u64;
        let n = 4000;
        for _ in 0..n {
            let (_, p) = sample_unit_interval(m, &mut rng);
            props += p;
        }
        let box_vol = 2.0; // u11, u22 in (0,1), u12 in (-1,1)
        let acc = n as f64 / props as f64;
        assert_relative_eq!(acc * box_vol, unit_interval_volume(m), max_relative = 0.1);

        let mut props = 0u64;
        for _ in 0..n {
            let (_, p) = sample_gram_ball(1, 2, &mut rng);
            props += p;
        }
        let acc = n as f64 / props as f64;
        assert_relative_eq!(acc * 4.0, gram_ball_volume(1, 2), max_relative = 0.1);
    }
}
