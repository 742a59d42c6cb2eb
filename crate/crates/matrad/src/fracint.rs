//! Fractional integrals on the cone of positive definite matrices.
//!
//! The left-sided integral averages over the matrix interval `(0, s)`,
//!
//! ```text
//! (I_+^a f)(s) = Gamma_m(a)^{-1} int_0^s f(r) |s - r|^{a-d} dr,
//! ```
//!
//! the right-sided one over the shifted cone `s + P_m`. At half-integral
//! orders `a = k/2` below the classical range they are convolutions with
//! positive measures carried by boundary orbits and are realized as matrix
//! space integrals:
//!
//! ```text
//! (I_+^{k/2} f)(s) = pi^{-km/2} int_{w'w < s}   f(s - w'w) dw,
//! (I_-^{k/2} f)(s) = pi^{-km/2} int_{M_{k,m}}  f(s + w'w) dw.
//! ```
//!
//! Closed forms on the determinant-power families are dispatched exactly;
//! everything else is integrated by Monte Carlo through [`crate::mcquad`].

use crate::error::{Error, Result};
use crate::mcquad::{
    gram_ball_volume, monte_carlo, ConeDensity, Engine, MCEstimate, MatrixDensity,
};
use crate::specialfn::{bernstein_chain, gamma_m, WallachParam};
use crate::symcone::{PositiveDefiniteMatrix, RectMatrix, SymmetricMatrix};
use std::sync::Arc;

/// A radial profile `f_0(r)` on the cone. Closed-form kinds carry their
/// convergence exponents; `Custom` is Monte Carlo only.
#[derive(Clone)]
pub enum RadialFunction {
    /// `|r|^{-lam/2}`
    DetPower { lam: f64 },
    /// `|I_m + r|^{-lam/2}`
    ShiftedDetPower { lam: f64 },
    /// `|r|^{nu} |I_m + r|^{-lam/2}`: the profile family of the dual
    /// transform examples
    DetShiftedPower { nu: f64, lam: f64 },
    /// `exp(-tr r)`
    GaussianTrace,
    /// `(a - r)_+^{mu}`: `|a - r|^mu` on `r < a`, zero elsewhere
    IndicatorPower { a: PositiveDefiniteMatrix, mu: f64 },
    /// isotropic profile tabulated against `tr r`, linearly interpolated
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
    Custom(Arc<dyn Fn(&SymmetricMatrix) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadialFunction::DetPower { lam } => write!(f, "DetPower({lam})"),
            RadialFunction::ShiftedDetPower { lam } => write!(f, "ShiftedDetPower({lam})"),
            RadialFunction::DetShiftedPower { nu, lam } => {
                write!(f, "DetShiftedPower(nu={nu}, lam={lam})")
            }
            RadialFunction::GaussianTrace => write!(f, "GaussianTrace"),
            RadialFunction::IndicatorPower { mu, .. } => write!(f, "IndicatorPower(mu={mu})"),
            RadialFunction::Tabulated { knots, .. } => write!(f, "Tabulated({} knots)", knots.len()),
            RadialFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl RadialFunction {
    pub fn custom(f: impl Fn(&SymmetricMatrix) -> f64 + Send + Sync + 'static) -> Self {
        RadialFunction::Custom(Arc::new(f))
    }

    pub fn eval(&self, r: &SymmetricMatrix) -> f64 {
        match self {
            RadialFunction::DetPower { lam } => r.det().powf(-lam / 2.0),
            RadialFunction::ShiftedDetPower { lam } => {
                r.add(&SymmetricMatrix::identity(r.dim())).det().powf(-lam / 2.0)
            }
            RadialFunction::DetShiftedPower { nu, lam } => {
                let shifted = r.add(&SymmetricMatrix::identity(r.dim()));
                r.det().powf(*nu) * shifted.det().powf(-lam / 2.0)
            }
            RadialFunction::GaussianTrace => (-r.trace()).exp(),
            RadialFunction::IndicatorPower { a, mu } => {
                let diff = a.base().sub(r);
                match PositiveDefiniteMatrix::new(diff) {
                    Ok(pd) => pd.det().powf(*mu),
                    Err(_) => 0.0,
                }
            }
            RadialFunction::Tabulated { knots, values } => {
                let u = r.trace();
                interp_linear(knots, values, u)
            }
            RadialFunction::Custom(f) => f(r),
        }
    }
}

fn interp_linear(knots: &[f64], values: &[f64], u: f64) -> f64 {
    debug_assert!(knots.len() == values.len() && knots.len() >= 2);
    if u <= knots[0] {
        return values[0];
    }
    if u >= *knots.last().unwrap() {
        return *values.last().unwrap();
    }
    let i = knots.partition_point(|&k| k < u).max(1);
    let (k0, k1) = (knots[i - 1], knots[i]);
    let t = (u - k0) / (k1 - k0);
    values[i - 1] * (1.0 - t) + values[i] * t
}

/// A fractional order restricted to the Wallach set. Orders `k/2` with
/// integer `k` route through the matrix-space (positive measure) branch;
/// other admissible orders use the classical interval/shifted-cone integral.
#[derive(Clone, Copy, Debug)]
pub struct FracOrder {
    pub alpha: f64,
    pub m: usize,
    half: Option<usize>,
}

impl FracOrder {
    pub fn new(alpha: f64, m: usize) -> Result<Self> {
        let w = WallachParam::new(m, alpha)?;
        // any exact half-integer routes through the matrix-space branch,
        // which is valid for all k in N (not only k < m)
        let two = 2.0 * alpha;
        let half = if (two - two.round()).abs() < 1e-12 && two.round() >= 0.0 {
            Some(two.round() as usize)
        } else {
            // continuous branch requires alpha > d-1 = (m-1)/2, which is
            // exactly the Wallach continuous part already validated
            None
        };
        Ok(FracOrder { alpha: w.alpha, m, half })
    }

    pub fn zero(m: usize) -> Self {
        FracOrder { alpha: 0.0, m, half: Some(0) }
    }

    pub fn half(k: usize, m: usize) -> Self {
        FracOrder { alpha: k as f64 / 2.0, m, half: Some(k) }
    }

    /// `Some(k)` when the order is `k/2` for an integer `k >= 0`.
    pub fn half_integral(&self) -> Option<usize> {
        self.half
    }

    pub fn is_zero(&self) -> bool {
        self.half == Some(0)
    }
}

/// Result of a fractional-integral evaluation: exact closed form when the
/// dispatch table has one, Monte Carlo estimate otherwise.
#[derive(Clone, Copy, Debug)]
pub enum GGValue {
    Exact(f64),
    Estimate(MCEstimate),
}

impl GGValue {
    pub fn value(&self) -> f64 {
        match self {
            GGValue::Exact(v) => *v,
            GGValue::Estimate(e) => e.value,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            GGValue::Exact(_) => 0.0,
            GGValue::Estimate(e) => e.stderr,
        }
    }

    pub fn estimate(&self) -> MCEstimate {
        match self {
            GGValue::Exact(v) => MCEstimate::exact(*v),
            GGValue::Estimate(e) => *e,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GGValue::Exact(_))
    }
}

/// Closed form of `I_+^a` applied to a closed-form kind, if the table has one.
fn gg_plus_closed(f: &RadialFunction, alpha: f64, s: &PositiveDefiniteMatrix) -> Option<Result<f64>> {
    let m = s.dim();
    let d = (m as f64 + 1.0) / 2.0;
    match f {
        RadialFunction::DetPower { lam } => {
            // |r|^{-lam/2} = |r|^{beta-d}, beta = d - lam/2; needs beta > d-1
            let beta = d - lam / 2.0;
            if beta <= d - 1.0 {
                return Some(Err(Error::DivergentIntegral(format!(
                    "det power lam = {lam} >= 2 is not integrable at the cone boundary"
                ))));
            }
            Some(gamma_quotient(m, beta, alpha + beta).map(|q| q * s.det().powf(alpha + beta - d)))
        }
        RadialFunction::DetShiftedPower { nu, lam } => {
            // closed only in the matched case lam/2 = alpha + beta, beta = nu + d
            let beta = nu + d;
            if (alpha + beta - lam / 2.0).abs() > 1e-9 || beta <= d - 1.0 {
                return None;
            }
            let eye = SymmetricMatrix::identity(m);
            Some(gamma_quotient(m, beta, alpha + beta).map(|q| {
                q * s.det().powf(alpha + beta - d)
                    * s.base().add(&eye).det().powf(-beta)
            }))
        }
        _ => None,
    }
}

/// `Gamma_m(beta) / Gamma_m(alpha + beta)`, the pole-free normalization
/// `B_m(beta, alpha)/Gamma_m(alpha)` of the interval convolution.
fn gamma_quotient(m: usize, beta: f64, total: f64) -> Result<f64> {
    Ok(gamma_m(m, beta)? / gamma_m(m, total)?)
}

/// Closed form of `I_-^a` applied to a closed-form kind, if the table has one.
fn gg_minus_closed(f: &RadialFunction, alpha: f64, s: &SymmetricMatrix) -> Option<Result<f64>> {
    let m = s.dim();
    let d = (m as f64 + 1.0) / 2.0;
    match f {
        RadialFunction::GaussianTrace => {
            // the Gaussian is an eigenfunction: I_-^a exp(-tr .) = exp(-tr .)
            Some(Ok((-s.trace()).exp()))
        }
        RadialFunction::ShiftedDetPower { lam } => {
            Some(minus_power_value(m, alpha, *lam).map(|q| {
                let shifted = s.add(&SymmetricMatrix::identity(m));
                q * shifted.det().powf(alpha - lam / 2.0)
            }))
        }
        RadialFunction::DetPower { lam } => {
            let det = s.det();
            if det <= 0.0 {
                return Some(Err(Error::RankDeficient(
                    "det-power image is infinite at rank-deficient s".into(),
                )));
            }
            Some(minus_power_value(m, alpha, *lam).map(|q| q * det.powf(alpha - lam / 2.0)))
        }
        RadialFunction::IndicatorPower { a, mu } => {
            let diff = a.base().sub(s);
            match PositiveDefiniteMatrix::new(diff) {
                Ok(pd) => Some(
                    gamma_quotient(m, mu + d, alpha + mu + d).map(|q| q * pd.det().powf(alpha + mu)),
                ),
                Err(_) => Some(Ok(0.0)),
            }
        }
        _ => None,
    }
}

/// `Gamma_m(lam/2 - a) / Gamma_m(lam/2)` guarded by the sharp decay
/// condition `lam > 2a + m - 1` of the right-sided integral.
fn minus_power_value(m: usize, alpha: f64, lam: f64) -> Result<f64> {
    if lam <= 2.0 * alpha + m as f64 - 1.0 {
        return Err(Error::DivergentIntegral(format!(
            "lam = {lam} <= 2 alpha + m - 1 = {}",
            2.0 * alpha + m as f64 - 1.0
        )));
    }
    Ok(gamma_m(m, lam / 2.0 - alpha)? / gamma_m(m, lam / 2.0)?)
}

fn default_matrix_density(f: &RadialFunction, dim: usize) -> MatrixDensity {
    match f {
        // polynomial tails: Student-t with nu below the variance threshold
        RadialFunction::ShiftedDetPower { lam }
        | RadialFunction::DetPower { lam }
        | RadialFunction::DetShiftedPower { lam, .. } => {
            let nu = (2.0 * lam / 2.0_f64.max(1.0) - 2.0 * dim as f64).clamp(0.5, 6.0);
            MatrixDensity::StudentT { nu, sigma: 1.0 }
        }
        _ => MatrixDensity::Gaussian { sigma: 1.0 },
    }
}

fn default_cone_density(f: &RadialFunction, alpha: f64) -> ConeDensity {
    match f {
        RadialFunction::ShiftedDetPower { lam } | RadialFunction::DetPower { lam } => {
            // match |q|^{alpha-d} exactly and put the remaining decay in the
            // beta-prime tail; b = lam/2 - alpha is admissible exactly when
            // the integral converges
            let b = (lam / 2.0 - alpha).max(0.51);
            ConeDensity::BetaPrime { a: alpha, b }
        }
        _ => ConeDensity::Wishart { gamma: alpha, theta: 1.0 },
    }
}

/// The left-sided Garding-Gindikin fractional integral `(I_+^a f)(s)`.
///
/// Closed-form kinds dispatch to the exact table; otherwise the classical
/// branch integrates over the matrix interval `(0, s)` and the
/// half-integral branch over the Gram ball `{w : w'w < s}` reparameterized
/// as `w = h s^{1/2}`.
pub fn gg_plus(
    f: &RadialFunction,
    order: &FracOrder,
    s: &PositiveDefiniteMatrix,
    engine: &Engine,
) -> Result<GGValue> {
    let m = s.dim();
    if order.m != m {
        return Err(Error::DimensionMismatch(format!(
            "order built for m = {}, argument has m = {m}",
            order.m
        )));
    }
    if order.is_zero() {
        return Ok(GGValue::Exact(f.eval(s.base())));
    }
    if let Some(closed) = gg_plus_closed(f, order.alpha, s) {
        return Ok(GGValue::Exact(closed?));
    }
    let est = match order.half_integral() {
        Some(k) => {
            // pi^{-km/2} |s|^{k/2} int_{h'h < I} f(s - s^{1/2} h'h s^{1/2}) dh,
            // rejection from the entrywise box with an exact acceptance gate
            let acceptance = gram_ball_volume(k, m) / 2f64.powi((k * m) as i32);
            if acceptance < crate::mcquad::ACCEPTANCE_ABORT {
                return Err(Error::LowAcceptance(acceptance));
            }
            let root = s.sqrt().to_dense();
            let scale = std::f64::consts::PI.powf(-((k * m) as f64) / 2.0)
                * s.det().powf(k as f64 / 2.0)
                * gram_ball_volume(k, m);
            let sbase = s.base().clone();
            monte_carlo(&engine.cfg, &engine.sampler, |rng| {
                let (h, _) = crate::mcquad::sample_gram_ball(k, m, rng);
                let inner = &root * h.gram().to_dense() * &root;
                let arg = sbase.sub(&SymmetricMatrix::from_dense(&inner).unwrap());
                f.eval(&arg)
            })?
            .scale(scale)
        }
        None => {
            // Gamma_m(a)^{-1} int_0^s f(r) |s - r|^{a-d} dr via the uniform
            // interval sampler
            let alpha = order.alpha;
            let d = (m as f64 + 1.0) / 2.0;
            let norm = gamma_m(m, alpha)?;
            let sbase = s.base().clone();
            let est = crate::mcquad::integrate_cone(
                |r| {
                    let w = sbase.sub(r).det();
                    if w <= 0.0 {
                        return 0.0;
                    }
                    f.eval(r) * w.powf(alpha - d)
                },
                m,
                &crate::mcquad::ConeDomain::Interval {
                    a: SymmetricMatrix::zeros(m),
                    b: sbase.clone(),
                },
                ConeDensity::Wishart { gamma: alpha.max(1.0), theta: 1.0 },
                &engine.cfg,
                &engine.sampler,
            )?;
            est.scale(1.0 / norm)
        }
    };
    Ok(GGValue::Estimate(est))
}

/// The right-sided Garding-Gindikin fractional integral `(I_-^a f)(s)`;
/// `s` may be any positive semi-definite matrix.
pub fn gg_minus(
    f: &RadialFunction,
    order: &FracOrder,
    s: &SymmetricMatrix,
    engine: &Engine,
) -> Result<GGValue> {
    let m = s.dim();
    if order.m != m {
        return Err(Error::DimensionMismatch(format!(
            "order built for m = {}, argument has m = {m}",
            order.m
        )));
    }
    if order.is_zero() {
        return Ok(GGValue::Exact(f.eval(s)));
    }
    if let Some(closed) = gg_minus_closed(f, order.alpha, s) {
        return Ok(GGValue::Exact(closed?));
    }
    let est = match order.half_integral() {
        Some(k) => {
            // pi^{-km/2} int_{M_{k,m}} f(s + w'w) dw
            let density = engine.matrix_density.unwrap_or(default_matrix_density(f, k * m));
            let scale = std::f64::consts::PI.powf(-((k * m) as f64) / 2.0);
            crate::mcquad::integrate_matrix_space(
                |w: &RectMatrix| f.eval(&s.add(&w.gram())),
                k,
                m,
                density,
                &engine.cfg,
                &engine.sampler,
            )?
            .scale(scale)
        }
        None => {
            // Gamma_m(a)^{-1} int_{P_m} f(s + q) |q|^{a-d} dq
            let alpha = order.alpha;
            let d = (m as f64 + 1.0) / 2.0;
            let norm = gamma_m(m, alpha)?;
            let density = engine.cone_density.unwrap_or(default_cone_density(f, alpha));
            crate::mcquad::integrate_cone(
                |q| f.eval(&s.add(q)) * q.det().powf(alpha - d),
                m,
                &crate::mcquad::ConeDomain::Full,
                density,
                &engine.cfg,
                &engine.sampler,
            )?
            .scale(1.0 / norm)
        }
    };
    Ok(GGValue::Estimate(est))
}

// ---------------------------------------------------------------------------
// the cone differential operators D_+ and D_-
// ---------------------------------------------------------------------------

/// Finite-difference step: fourth-root balance for second-order stencils.
fn fd_step(scale: f64) -> f64 {
    f64::EPSILON.powf(0.25) * scale.max(1.0)
}

fn coord_scale(s: &SymmetricMatrix) -> f64 {
    let mut top = 0.0_f64;
    for i in 0..s.dim() {
        for j in i..s.dim() {
            top = top.max(s.get(i, j).abs());
        }
    }
    top
}

fn d_plus_once<F: Fn(&SymmetricMatrix) -> f64>(f: &F, s: &SymmetricMatrix, h: f64) -> Result<f64> {
    let m = s.dim();
    let shift = |di: f64, dj: f64, dk: f64| {
        let mut t = s.clone();
        t.set(0, 0, s.get(0, 0) + di);
        if m > 1 {
            t.set(0, 1, s.get(0, 1) + dj);
            t.set(1, 1, s.get(1, 1) + dk);
        }
        t
    };
    match m {
        1 => Ok((f(&shift(h, 0.0, 0.0)) - f(&shift(-h, 0.0, 0.0))) / (2.0 * h)),
        2 => {
            // D_+ = d2/dr11 dr22 - (1/4) d2/dr12^2
            let cross = (f(&shift(h, 0.0, h)) - f(&shift(h, 0.0, -h)) - f(&shift(-h, 0.0, h))
                + f(&shift(-h, 0.0, -h)))
                / (4.0 * h * h);
            let second = (f(&shift(0.0, h, 0.0)) - 2.0 * f(s) + f(&shift(0.0, -h, 0.0))) / (h * h);
            Ok(cross - 0.25 * second)
        }
        _ => Err(Error::UnsupportedOrder { m }),
    }
}

/// Numeric `(D_+^j f)(s)` by central differences with one Richardson pass.
/// Supported for `m <= 2`; higher ranks are symbolic-only.
pub fn d_plus<F: Fn(&SymmetricMatrix) -> f64>(f: &F, s: &SymmetricMatrix, order: usize) -> Result<f64> {
    if order == 0 {
        return Ok(f(s));
    }
    let h = fd_step(coord_scale(s));
    if order == 1 {
        let fine = d_plus_once(f, s, h)?;
        let coarse = d_plus_once(f, s, 2.0 * h)?;
        return Ok((4.0 * fine - coarse) / 3.0);
    }
    // nested application: one level of recursion per order
    let inner = |t: &SymmetricMatrix| d_plus(f, t, order - 1).unwrap_or(f64::NAN);
    let fine = d_plus_once(&inner, s, h)?;
    let coarse = d_plus_once(&inner, s, 2.0 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `(D_-^j f)(s) = (-1)^{jm} (D_+^j f)(s)`.
pub fn d_minus<F: Fn(&SymmetricMatrix) -> f64>(f: &F, s: &SymmetricMatrix, order: usize) -> Result<f64> {
    let m = s.dim();
    let sign = if (order * m).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * d_plus(f, s, order)?)
}

/// A constant multiple of a closed-form radial profile; the currency of the
/// symbolic calculus.
#[derive(Clone, Debug)]
pub struct ScaledRadial {
    pub coeff: f64,
    pub kind: RadialFunction,
}

impl ScaledRadial {
    pub fn new(coeff: f64, kind: RadialFunction) -> Self {
        ScaledRadial { coeff, kind }
    }

    pub fn eval(&self, r: &SymmetricMatrix) -> f64 {
        self.coeff * self.kind.eval(r)
    }
}

/// Symbolic `D_+^j` on the determinant-power families via the Bernstein
/// chain `D_+ |s|^a = b(a) |s|^{a-1}` (shift-invariant, so `|c + s|^a`
/// transforms identically), and `D_+ exp(-tr s) = (-1)^m exp(-tr s)`.
pub fn d_plus_symbolic(f: &ScaledRadial, m: usize, times: usize) -> Result<ScaledRadial> {
    if times == 0 {
        return Ok(f.clone());
    }
    let t = times as f64;
    match &f.kind {
        RadialFunction::DetPower { lam } => {
            let a = -lam / 2.0;
            let chain = bernstein_chain(m, a, times);
            Ok(ScaledRadial::new(f.coeff * chain, RadialFunction::DetPower { lam: lam + 2.0 * t }))
        }
        RadialFunction::ShiftedDetPower { lam } => {
            let a = -lam / 2.0;
            let chain = bernstein_chain(m, a, times);
            Ok(ScaledRadial::new(
                f.coeff * chain,
                RadialFunction::ShiftedDetPower { lam: lam + 2.0 * t },
            ))
        }
        RadialFunction::GaussianTrace => {
            let sign = if (m * times).is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(ScaledRadial::new(f.coeff * sign, RadialFunction::GaussianTrace))
        }
        RadialFunction::IndicatorPower { a, mu } => {
            // D_{+,s} (a - s)^mu picks up (-1)^m per step from the chain rule
            let sign = if (m * times).is_multiple_of(2) { 1.0 } else { -1.0 };
            let chain = bernstein_chain(m, *mu, times);
            Ok(ScaledRadial::new(
                f.coeff * sign * chain,
                RadialFunction::IndicatorPower { a: a.clone(), mu: mu - t },
            ))
        }
        other => Err(Error::PipelineNotClosedForm(format!(
            "no symbolic D_+ for {other:?}"
        ))),
    }
}

/// Symbolic `D_-^j = (-1)^{jm} D_+^j` on the closed-form families.
pub fn d_minus_symbolic(f: &ScaledRadial, m: usize, times: usize) -> Result<ScaledRadial> {
    let sign = if (m * times).is_multiple_of(2) { 1.0 } else { -1.0 };
    let out = d_plus_symbolic(f, m, times)?;
    Ok(ScaledRadial::new(sign * out.coeff, out.kind))
}

/// Inverts `phi = I_-^{k/2} f` on the closed-form image families for even
/// `k` by applying `D_-` symbolically `k/2` times. For rank `m <= 2` the
/// symbolic preimage is cross-checked against the numeric operator on a
/// small grid (1e-8 relative) before being returned.
pub fn invert_gg_minus_closed(phi: &ScaledRadial, k: usize, m: usize) -> Result<ScaledRadial> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrderUnsupported(k));
    }
    let preimage = d_minus_symbolic(phi, m, k / 2)?;
    if m <= 2 && k == 2 {
        // operator-vs-symbolic consistency on a coarse grid
        for &eps in &[0.4, 1.0, 2.5] {
            let s = SymmetricMatrix::scaled_identity(m, eps);
            let numeric = d_minus(&|r: &SymmetricMatrix| phi.eval(r), &s, 1)?;
            let symbolic = preimage.eval(&s);
            let scale = symbolic.abs().max(1.0);
            if (numeric - symbolic).abs() > 1e-8 * scale {
                return Err(Error::PipelineNotClosedForm(format!(
                    "numeric D_- disagrees with symbolic preimage at eps = {eps}: {numeric} vs {symbolic}"
                )));
            }
        }
    }
    Ok(preimage)
}

/// Exact image of a closed-form profile under `I_-^{k/2}` as a scaled
/// profile, for pipeline use (errors where the table has no closed form).
pub fn gg_minus_symbolic(f: &RadialFunction, k: usize, m: usize) -> Result<ScaledRadial> {
    if k == 0 {
        return Ok(ScaledRadial::new(1.0, f.clone()));
    }
    let alpha = k as f64 / 2.0;
    match f {
        RadialFunction::GaussianTrace => Ok(ScaledRadial::new(1.0, RadialFunction::GaussianTrace)),
        RadialFunction::ShiftedDetPower { lam } => {
            let c = minus_power_value(m, alpha, *lam)?;
            Ok(ScaledRadial::new(c, RadialFunction::ShiftedDetPower { lam: lam - k as f64 }))
        }
        RadialFunction::DetPower { lam } => {
            let c = minus_power_value(m, alpha, *lam)?;
            Ok(ScaledRadial::new(c, RadialFunction::DetPower { lam: lam - k as f64 }))
        }
        RadialFunction::IndicatorPower { a, mu } => {
            let d = (m as f64 + 1.0) / 2.0;
            let c = gamma_quotient(m, mu + d, alpha + mu + d)?;
            Ok(ScaledRadial::new(c, RadialFunction::IndicatorPower { a: a.clone(), mu: mu + alpha }))
        }
        other => Err(Error::PipelineNotClosedForm(format!("no exact I_- image for {other:?}"))),
    }
}

/// The telescoping constant identity behind inversion on the shifted
/// det-power family, valid for any `k` (odd included): returns the product
/// of the forward image constants along a split `k = k1 + k2` divided by the
/// direct constant, which must be exactly 1.
pub fn det_power_semigroup_ratio(m: usize, k1: usize, k2: usize, lam: f64) -> Result<f64> {
    let c1 = minus_power_value(m, k1 as f64 / 2.0, lam)?;
    let c2 = minus_power_value(m, k2 as f64 / 2.0, lam - k1 as f64)?;
    let direct = minus_power_value(m, (k1 + k2) as f64 / 2.0, lam)?;
    Ok(c1 * c2 / direct)
}

/// For even `k`: the Bernstein chain times the forward image constant,
/// which telescopes to exactly 1 — the constant form of the inversion
/// `f = D_-^{k/2} I_-^{k/2} f` on the shifted det-power family.
pub fn det_power_inversion_ratio(m: usize, k: usize, lam: f64) -> Result<f64> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrderUnsupported(k));
    }
    let c = minus_power_value(m, k as f64 / 2.0, lam)?;
    let mu = (k as f64 - lam) / 2.0;
    // d_minus contributes (-1)^{m k/2}, the chain b(mu) ... b(mu - k/2 + 1)
    let sign = if (m * (k / 2)).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * bernstein_chain(m, mu, k / 2) * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{beta_m, bernstein_b};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_pd(rng: &mut impl Rng, m: usize, ridge: f64) -> PositiveDefiniteMatrix {
        let a = crate::mcquad::sample_gaussian_matrix(m + 1, m, rng);
        PositiveDefiniteMatrix::new(a.gram().add(&SymmetricMatrix::scaled_identity(m, ridge)))
            .unwrap()
    }

    #[test]
    fn order_validation() {
        assert!(FracOrder::new(0.5, 3).is_ok());
        assert!(FracOrder::new(0.8, 3).is_err());
        assert!(FracOrder::new(1.7, 3).is_ok());
        assert_eq!(FracOrder::new(1.0, 3).unwrap().half_integral(), Some(2));
        assert_eq!(FracOrder::new(1.7, 3).unwrap().half_integral(), None);
    }

    #[test]
    fn gg_plus_order_zero_is_identity() {
        let engine = Engine::new(1000, 1);
        let s = PositiveDefiniteMatrix::scaled_identity(2, 1.3).unwrap();
        let f = RadialFunction::GaussianTrace;
        let v = gg_plus(&f, &FracOrder::zero(2), &s, &engine).unwrap();
        assert_eq!(v.value(), f.eval(s.base()));
    }

    #[test]
    fn gg_plus_det_power_matches_beta_table() {
        // I_+^a |r|^{beta-d} = [Gamma_m(beta)/Gamma_m(a+beta)] |s|^{a+beta-d}
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let engine = Engine::new(1000, 1);
        let m = 2;
        let d = 1.5;
        for _ in 0..10 {
            let alpha: f64 = rng.gen_range(1.0..4.0);
            let beta: f64 = rng.gen_range(1.0..4.0);
            let lam = 2.0 * (d - beta); // DetPower exponent for |r|^{beta-d}
            let s = random_pd(&mut rng, m, 0.4);
            let order = FracOrder::new(alpha, m).unwrap();
            let v = gg_plus(&RadialFunction::DetPower { lam }, &order, &s, &engine).unwrap();
            assert!(v.is_exact());
            let expect = beta_m(m, beta, alpha).unwrap() / gamma_m(m, alpha).unwrap()
                * s.det().powf(alpha + beta - d);
            assert_relative_eq!(v.value(), expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn gg_minus_shifted_power_closed_form() {
        // (3.37): I_-^a |I+r|^{-lam/2} = |I+s|^{a-lam/2} B_m(a, lam/2-a)/Gamma_m(a)
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let engine = Engine::new(1000, 1);
        let m = 2;
        for _ in 0..10 {
            let alpha: f64 = rng.gen_range(1.0..2.5);
            let lam: f64 = rng.gen_range(2.0 * alpha + 1.2..12.0);
            let s = random_pd(&mut rng, m, 0.2);
            let order = FracOrder::new(alpha, m).unwrap();
            let v = gg_minus(
                &RadialFunction::ShiftedDetPower { lam },
                &order,
                s.base(),
                &engine,
            )
            .unwrap();
            let expect = beta_m(m, alpha, lam / 2.0 - alpha).unwrap() / gamma_m(m, alpha).unwrap()
                * s.base()
                    .add(&SymmetricMatrix::identity(m))
                    .det()
                    .powf(alpha - lam / 2.0);
            assert_relative_eq!(v.value(), expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn gg_minus_divergence_guard() {
        let engine = Engine::new(1000, 1);
        let m = 2;
        let alpha = 1.0;
        let lam = 2.0 * alpha + m as f64 - 1.0; // boundary: diverges
        let order = FracOrder::new(alpha, m).unwrap();
        let s = SymmetricMatrix::identity(m);
        let res = gg_minus(&RadialFunction::ShiftedDetPower { lam }, &order, &s, &engine);
        assert!(matches!(res, Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn gg_minus_gaussian_is_eigenfunction() {
        let engine = Engine::new(1000, 1);
        let m = 2;
        let s = SymmetricMatrix::scaled_identity(m, 0.7);
        for order in [FracOrder::half(1, m), FracOrder::half(2, m), FracOrder::new(1.8, m).unwrap()]
        {
            let v = gg_minus(&RadialFunction::GaussianTrace, &order, &s, &engine).unwrap();
            assert_relative_eq!(v.value(), (-s.trace()).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn gg_plus_half_integral_matches_closed_det_power() {
        // MC of the half-integral branch against the exact det-power image
        let engine = Engine::new(60_000, 5);
        let m = 2;
        let k = 1usize;
        let d = 1.5;
        let beta = 2.0;
        let lam = 2.0 * (d - beta);
        let s = PositiveDefiniteMatrix::scaled_identity(m, 1.4).unwrap();
        // force MC by wrapping in Custom
        let f = RadialFunction::custom(move |r: &SymmetricMatrix| r.det().powf(beta - 1.5));
        let v = gg_plus(&f, &FracOrder::half(k, m), &s, &engine).unwrap();
        let alpha = k as f64 / 2.0;
        let expect = gamma_m(m, beta).unwrap() / gamma_m(m, alpha + beta).unwrap()
            * s.det().powf(alpha + beta - d);
        let z = v.estimate().z_score(expect);
        assert!(z < 3.0, "z = {z}: got {} want {expect}", v.value());
        let _ = lam;
    }

    #[test]
    fn gg_minus_half_integral_matches_closed_shifted_power() {
        let engine = Engine::new(60_000, 6);
        let m = 2;
        let k = 1usize;
        let lam = 9.0;
        let s = SymmetricMatrix::scaled_identity(m, 0.6);
        let f = RadialFunction::custom(move |r: &SymmetricMatrix| {
            r.add(&SymmetricMatrix::identity(2)).det().powf(-lam / 2.0)
        });
        let engine = engine.with_matrix_density(MatrixDensity::StudentT { nu: 4.0, sigma: 1.0 });
        let v = gg_minus(&f, &FracOrder::half(k, m), &s, &engine).unwrap();
        let expect = minus_power_value(m, 0.5, lam).unwrap()
            * s.add(&SymmetricMatrix::identity(m)).det().powf(0.5 - lam / 2.0);
        let z = v.estimate().z_score(expect);
        assert!(z < 3.0, "z = {z}");
    }

    #[test]
    fn d_plus_det_at_identity() {
        // m=2, f=|s|: D_+ |s| at I_2 equals b(1) = 1.5
        let f = |s: &SymmetricMatrix| s.det();
        let v = d_plus(&f, &SymmetricMatrix::identity(2), 1).unwrap();
        assert_relative_eq!(v, 1.5, max_relative = 1e-9);
    }

    #[test]
    fn d_plus_det_power_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..10 {
            let alpha: f64 = rng.gen_range(0.7..4.0);
            let s = random_pd(&mut rng, 2, 0.3);
            let f = move |r: &SymmetricMatrix| r.det().powf(alpha);
            let v = d_plus(&f, s.base(), 1).unwrap();
            let expect = bernstein_b(2, alpha) * s.det().powf(alpha - 1.0);
            assert_relative_eq!(v, expect, max_relative = 1e-6);
        }
    }

    #[test]
    fn d_plus_exponential_eigen_relation() {
        // D_{+,s} exp(-tr(sz)) = (-1)^m det(z) exp(-tr(sz))
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        for _ in 0..10 {
            let s = random_pd(&mut rng, 2, 0.3);
            let z = random_pd(&mut rng, 2, 0.3);
            let zd = z.to_dense();
            let f = move |r: &SymmetricMatrix| (-(r.to_dense() * &zd).trace()).exp();
            let v = d_plus(&f, s.base(), 1).unwrap();
            let expect = z.det() * (-(s.to_dense() * z.to_dense()).trace()).exp();
            assert_relative_eq!(v, expect, max_relative = 1e-6);
        }
    }

    #[test]
    fn d_plus_numeric_vs_symbolic_on_shifted_power() {
        let sr = ScaledRadial::new(1.0, RadialFunction::ShiftedDetPower { lam: 6.0 });
        let sym = d_plus_symbolic(&sr, 2, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(35);
        for _ in 0..5 {
            let s = random_pd(&mut rng, 2, 0.3);
            let num = d_plus(&|r: &SymmetricMatrix| sr.eval(r), s.base(), 1).unwrap();
            assert_relative_eq!(num, sym.eval(s.base()), max_relative = 1e-6);
        }
    }

    #[test]
    fn d_plus_rejects_large_rank() {
        let f = |s: &SymmetricMatrix| s.det();
        let res = d_plus(&f, &SymmetricMatrix::identity(3), 1);
        assert!(matches!(res, Err(Error::UnsupportedOrder { m: 3 })));
    }

    #[test]
    fn bernstein_chain_matches_gamma_normalized_derivative() {
        // (3.40): D_+ (|s|^{a-d}/Gamma_m(a)) = |s|^{a-1-d}/Gamma_m(a-1),
        // i.e. the chain of b-factors telescopes through the gamma quotient
        let m = 2;
        let d = 1.5;
        for &a in &[3.3, 4.7, 6.1] {
            for steps in 1..=3usize {
                let chain = bernstein_chain(m, a - d, steps);
                let quotient = gamma_m(m, a).unwrap() / gamma_m(m, a - steps as f64).unwrap();
                assert_relative_eq!(chain, quotient, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn inversion_recovers_shifted_power() {
        // image of |I+r|^{-lam/2} under I_-^{k/2}, k even, inverted by D_-^{k/2}
        let (m, k, lam) = (2usize, 2usize, 8.0);
        let f = RadialFunction::ShiftedDetPower { lam };
        let image = gg_minus_symbolic(&f, k, m).unwrap();
        let preimage = invert_gg_minus_closed(&image, k, m).unwrap();
        assert_relative_eq!(preimage.coeff, 1.0, max_relative = 1e-10);
        let mut rng = ChaCha12Rng::seed_from_u64(36);
        for _ in 0..5 {
            let s = random_pd(&mut rng, m, 0.2);
            assert_relative_eq!(preimage.eval(s.base()), f.eval(s.base()), max_relative = 1e-10);
        }
    }

    #[test]
    fn inversion_gaussian_identity() {
        let (m, k) = (2usize, 2usize);
        let image = gg_minus_symbolic(&RadialFunction::GaussianTrace, k, m).unwrap();
        let pre = invert_gg_minus_closed(&image, k, m).unwrap();
        assert_relative_eq!(pre.coeff, 1.0, max_relative = 1e-12);
        assert!(matches!(pre.kind, RadialFunction::GaussianTrace));
    }

    #[test]
    fn inversion_at_order_zero_is_identity() {
        let image = ScaledRadial::new(0.7, RadialFunction::ShiftedDetPower { lam: 5.0 });
        let pre = invert_gg_minus_closed(&image, 0, 2).unwrap();
        assert_eq!(pre.coeff, image.coeff);
        assert!(matches!(pre.kind, RadialFunction::ShiftedDetPower { lam } if lam == 5.0));
    }

    #[test]
    fn inversion_rejects_odd_order() {
        let image = gg_minus_symbolic(&RadialFunction::GaussianTrace, 1, 2).unwrap();
        assert!(matches!(
            invert_gg_minus_closed(&image, 1, 2),
            Err(Error::OddOrderUnsupported(1))
        ));
    }

    #[test]
    fn constant_identities_any_parity() {
        for m in 1..=3usize {
            for (k1, k2) in [(1usize, 1usize), (1, 2), (2, 2), (3, 1)] {
                let lam = 2.0 * ((k1 + k2) as f64 / 2.0) + m as f64 + 2.3;
                let r = det_power_semigroup_ratio(m, k1, k2, lam).unwrap();
                assert_relative_eq!(r, 1.0, max_relative = 1e-10);
            }
            for k in [2usize, 4] {
                let lam = k as f64 + m as f64 + 3.0;
                let r = det_power_inversion_ratio(m, k, lam).unwrap();
                assert_relative_eq!(r, 1.0, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn interrelation_exact_on_shifted_power() {
        // (3.7a): (I_-^a f)(s) = |s|^{a-d} (I_+^a g)(s^{-1}),
        // g(r) = |r|^{-a-d} f(r^{-1}); for f = |I+r|^{-lam/2} the transformed
        // profile is |r|^{lam/2-a-d} |I+r|^{-lam/2}, closed under I_+^a.
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        let engine = Engine::new(100, 1);
        let m = 2;
        let d = 1.5;
        for _ in 0..10 {
            let alpha: f64 = rng.gen_range(1.0..2.2);
            let lam: f64 = rng.gen_range(2.0 * alpha + 1.5..11.0);
            let s = random_pd(&mut rng, m, 0.4);
            let order = FracOrder::new(alpha, m).unwrap();

            let lhs = gg_minus(&RadialFunction::ShiftedDetPower { lam }, &order, s.base(), &engine)
                .unwrap();
            assert!(lhs.is_exact());

            let g = RadialFunction::DetShiftedPower { nu: lam / 2.0 - alpha - d, lam };
            let sinv = s.inverse();
            let rhs = gg_plus(&g, &order, &sinv, &engine).unwrap();
            assert!(rhs.is_exact());
            let rhs_total = s.det().powf(alpha - d) * rhs.value();
            assert_relative_eq!(lhs.value(), rhs_total, max_relative = 1e-10);
        }
    }

    #[test]
    fn tabulated_profile_interpolates() {
        let f = RadialFunction::Tabulated {
            knots: vec![0.0, 1.0, 2.0],
            values: vec![1.0, 3.0, 5.0],
        };
        let s = SymmetricMatrix::scaled_identity(2, 0.75); // trace 1.5
        assert_relative_eq!(f.eval(&s), 4.0, max_relative = 1e-12);
    }
}
