//! The matrix k-plane Radon transform and its companions.
//!
//! The transform integrates a function over a matrix plane
//! `tau(xi, t) = {x : xi'x = t}`,
//!
//! ```text
//! fhat(xi, t) = int_{M_{k,m}} f(u w + xi t) dw,
//! ```
//!
//! with `u` any orthonormal completion of `xi`. For radial `f(x) = f_0(x'x)`
//! it collapses to a right-sided cone fractional integral,
//! `fhat(xi, t) = pi^{km/2} (I_-^{k/2} f_0)(t't)`, which is the closed-form
//! fast path. The dual transform averages over all planes through a point;
//! for radial inputs it is a weighted left-sided integral. Shifted duals,
//! matrix spherical means, and the mean-value inversion pipeline build on
//! these two reductions.

use crate::error::{Error, Result};
use crate::fracint::{
    gg_minus, gg_minus_symbolic, gg_plus, invert_gg_minus_closed, FracOrder, GGValue,
    RadialFunction, ScaledRadial,
};
use crate::mcquad::{
    monte_carlo, sample_stiefel, ConeDensity, Engine, MCEstimate, MatrixDensity,
};
use crate::specialfn::{gamma_m, stiefel_volume, ConeConstants};
use crate::symcone::{MatrixPlane, PositiveDefiniteMatrix, RectMatrix, StiefelFrame, SymmetricMatrix};
use std::f64::consts::PI;
use std::sync::Arc;

/// A function on the matrix space `M_{n,m}`, usually one of the closed-form
/// witness families. `scale` is an overall constant factor (the transforms
/// are linear).
#[derive(Clone)]
pub struct MatrixField {
    pub n: usize,
    pub m: usize,
    pub scale: f64,
    pub kind: FieldKind,
}

#[derive(Clone)]
pub enum FieldKind {
    /// `f(x) = f_0(x'x)` for a closed-form radial profile
    RadialClosed(RadialFunction),
    /// `exp(-tr(x'x))`
    GaussianFull,
    /// `|x'x|^{-lam/2}`
    PowerFull { lam: f64 },
    /// `|I_m + x'x|^{-lam/2}`
    ShiftedPowerFull { lam: f64 },
    /// the L^p counterexample
    /// `F(x) = |2I_m + x'x|^{-(n+m-1)/2p} (log|2I_m + x'x|)^{-1}`
    CounterexampleF { p: f64 },
    /// arbitrary field with an optionally declared L^p class
    Custom {
        f: Arc<dyn Fn(&RectMatrix) -> f64 + Send + Sync>,
        lp_class: Option<f64>,
    },
}

impl MatrixField {
    pub fn gaussian(n: usize, m: usize) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::GaussianFull }
    }

    pub fn power(n: usize, m: usize, lam: f64) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::PowerFull { lam } }
    }

    pub fn shifted_power(n: usize, m: usize, lam: f64) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::ShiftedPowerFull { lam } }
    }

    pub fn counterexample(n: usize, m: usize, p: f64) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::CounterexampleF { p } }
    }

    pub fn radial(n: usize, m: usize, f0: RadialFunction) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::RadialClosed(f0) }
    }

    pub fn custom(
        n: usize,
        m: usize,
        lp_class: Option<f64>,
        f: impl Fn(&RectMatrix) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MatrixField { n, m, scale: 1.0, kind: FieldKind::Custom { f: Arc::new(f), lp_class } }
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn eval(&self, x: &RectMatrix) -> f64 {
        self.scale * self.eval_unscaled(x)
    }

    fn eval_unscaled(&self, x: &RectMatrix) -> f64 {
        match &self.kind {
            FieldKind::RadialClosed(f0) => f0.eval(&x.gram()),
            FieldKind::GaussianFull => (-x.gram().trace()).exp(),
            FieldKind::PowerFull { lam } => x.gram().det().powf(-lam / 2.0),
            FieldKind::ShiftedPowerFull { lam } => {
                x.gram().add(&SymmetricMatrix::identity(self.m)).det().powf(-lam / 2.0)
            }
            FieldKind::CounterexampleF { p } => {
                counterexample_profile(self.n, self.m, *p, &x.gram())
            }
            FieldKind::Custom { f, .. } => f(x),
        }
    }

    /// The radial profile `f_0` with `f(x) = scale * f_0(x'x)`, when the
    /// field is radial.
    pub fn radial_profile(&self) -> Option<RadialFunction> {
        match &self.kind {
            FieldKind::RadialClosed(f0) => Some(f0.clone()),
            FieldKind::GaussianFull => Some(RadialFunction::GaussianTrace),
            FieldKind::PowerFull { lam } => Some(RadialFunction::DetPower { lam: *lam }),
            FieldKind::ShiftedPowerFull { lam } => {
                Some(RadialFunction::ShiftedDetPower { lam: *lam })
            }
            FieldKind::CounterexampleF { p } => {
                let (n, m, p) = (self.n, self.m, *p);
                Some(RadialFunction::custom(move |r| counterexample_profile(n, m, p, r)))
            }
            FieldKind::Custom { .. } => None,
        }
    }

    /// Existence guard for the Radon transform of this field over k-planes:
    /// the sharp threshold `lam > k+m-1` for the power families and the
    /// sharp exponent `p < p_0 = (n+m-1)/(k+m-1)` for L^p classes.
    pub fn radon_guard(&self, k: usize) -> Result<()> {
        let threshold = (k + self.m - 1) as f64;
        match &self.kind {
            FieldKind::PowerFull { lam } | FieldKind::ShiftedPowerFull { lam } => {
                if *lam <= threshold {
                    return Err(Error::ExistenceViolation(format!(
                        "lam = {lam} <= k+m-1 = {threshold}: transform is identically infinite"
                    )));
                }
            }
            FieldKind::CounterexampleF { p } => {
                let p0 = ConeConstants::new(self.n, self.m, k)?.p0_f64();
                if *p >= p0 {
                    return Err(Error::ExistenceViolation(format!(
                        "p = {p} >= p_0 = {p0}: transform is identically infinite"
                    )));
                }
            }
            FieldKind::Custom { lp_class: Some(p), .. } => {
                let p0 = ConeConstants::new(self.n, self.m, k)?.p0_f64();
                if *p >= p0 {
                    return Err(Error::ExistenceViolation(format!(
                        "declared L^p class p = {p} >= p_0 = {p0}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn default_omega_density(&self, dim: usize) -> MatrixDensity {
        match &self.kind {
            FieldKind::PowerFull { lam } | FieldKind::ShiftedPowerFull { lam } => {
                let nu = (lam - dim as f64).clamp(0.5, 6.0);
                MatrixDensity::StudentT { nu, sigma: 1.0 }
            }
            FieldKind::CounterexampleF { .. } => MatrixDensity::StudentT { nu: 1.0, sigma: 1.5 },
            _ => MatrixDensity::Gaussian { sigma: 1.0 },
        }
    }
}

fn counterexample_profile(n: usize, m: usize, p: f64, r: &SymmetricMatrix) -> f64 {
    let shifted = r.add(&SymmetricMatrix::scaled_identity(m, 2.0));
    let det = shifted.det();
    det.powf(-(n as f64 + m as f64 - 1.0) / (2.0 * p)) / det.ln()
}

/// A function of matrix planes. Radial kinds satisfy the matrix-evenness
/// `phi(xi theta', theta t) = phi(xi, t)` by construction; custom kinds
/// must declare it.
#[derive(Clone)]
pub struct PlaneFunction {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub kind: PlaneKind,
}

/// Callable plane-function kind: `(xi, t) -> value`.
pub type PlaneFn = Arc<dyn Fn(&StiefelFrame, &RectMatrix) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PlaneKind {
    /// `phi(xi, t) = phi_0(t't)`
    RadialClosed(RadialFunction),
    Custom(PlaneFn),
}

impl PlaneFunction {
    pub fn radial(n: usize, m: usize, k: usize, phi0: RadialFunction) -> Self {
        PlaneFunction { n, m, k, kind: PlaneKind::RadialClosed(phi0) }
    }

    pub fn custom(
        n: usize,
        m: usize,
        k: usize,
        f: impl Fn(&StiefelFrame, &RectMatrix) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PlaneFunction { n, m, k, kind: PlaneKind::Custom(Arc::new(f)) }
    }

    pub fn eval(&self, xi: &StiefelFrame, t: &RectMatrix) -> f64 {
        match &self.kind {
            PlaneKind::RadialClosed(phi0) => phi0.eval(&t.gram()),
            PlaneKind::Custom(f) => f(xi, t),
        }
    }
}

/// Radon transform of a radial profile:
/// `fhat(xi, t) = pi^{km/2} (I_-^{k/2} f_0)(s)`, `s = t't`.
pub fn radon_radial(
    f0: &RadialFunction,
    m: usize,
    k: usize,
    s: &SymmetricMatrix,
    engine: &Engine,
) -> Result<GGValue> {
    let order = FracOrder::half(k, m);
    let v = gg_minus(f0, &order, s, engine)?;
    let c = PI.powf((k * m) as f64 / 2.0);
    Ok(match v {
        GGValue::Exact(x) => GGValue::Exact(c * x),
        GGValue::Estimate(e) => GGValue::Estimate(e.scale(c)),
    })
}

/// The Radon transform of `f` over the plane. Radial fields dispatch to
/// [`radon_radial`]; everything else is integrated by Monte Carlo over the
/// in-plane coordinate `w`.
pub fn radon(f: &MatrixField, plane: &MatrixPlane, engine: &Engine) -> Result<GGValue> {
    check_field_plane(f, plane)?;
    f.radon_guard(plane.k)?;
    if let Some(profile) = f.radial_profile() {
        let s = plane.t.gram();
        let v = radon_radial(&profile, f.m, plane.k, &s, engine)?;
        return Ok(match v {
            GGValue::Exact(x) => GGValue::Exact(f.scale * x),
            GGValue::Estimate(e) => GGValue::Estimate(e.scale(f.scale)),
        });
    }
    Ok(GGValue::Estimate(radon_mc(f, plane, engine)?))
}

/// Monte Carlo Radon transform through the plane parameterization
/// `x = u w + xi t`, regardless of available closed forms.
pub fn radon_mc(f: &MatrixField, plane: &MatrixPlane, engine: &Engine) -> Result<MCEstimate> {
    check_field_plane(f, plane)?;
    f.radon_guard(plane.k)?;
    let (k, m) = (plane.k, f.m);
    // complete xi to an orthogonal matrix; any completion works and the
    // choice is seed-deterministic
    let u = plane.xi.complete(&mut engine.sampler.rng());
    let offset = plane.xi.dense() * plane.t.dense();
    let density = engine.matrix_density.unwrap_or_else(|| f.default_omega_density(k * m));
    crate::mcquad::integrate_matrix_space(
        |w: &RectMatrix| {
            let x = RectMatrix::new(u.dense() * w.dense() + &offset);
            f.eval(&x)
        },
        k,
        m,
        density,
        &engine.cfg,
        &engine.sampler,
    )
}

fn check_field_plane(f: &MatrixField, plane: &MatrixPlane) -> Result<()> {
    if plane.n() != f.n || plane.m() != f.m {
        return Err(Error::DimensionMismatch(format!(
            "field on M_{{{},{}}}, plane over M_{{{},{}}}",
            f.n,
            f.m,
            plane.n(),
            plane.m()
        )));
    }
    Ok(())
}

/// The dual Radon transform `phicheck(x)`: the Haar average of
/// `phi(xi, xi'x)` over frames. Radial inputs at full-rank `x` dispatch to
/// the exact reduction
/// `phicheck(x) = c |r|^{d - n/2} (I_+^{k/2} Phi_0)(r)`, `r = x'x`,
/// `Phi_0(s) = |s|^delta phi_0(s)`, `c = Gamma_m(n/2)/Gamma_m((n-k)/2)`.
pub fn dual_radon(phi: &PlaneFunction, x: &RectMatrix, engine: &Engine) -> Result<GGValue> {
    let (n, m, k) = (phi.n, phi.m, phi.k);
    if x.nrows() != n || x.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "x is {}x{}, plane function over M_{{{n},{m}}}",
            x.nrows(),
            x.ncols()
        )));
    }
    if let PlaneKind::RadialClosed(phi0) = &phi.kind {
        if x.rank() < m {
            return Err(Error::RankDeficient(
                "exact radial dual transform needs rank(x) = m".into(),
            ));
        }
        let consts = ConeConstants::new(n, m, k)?;
        let delta = consts.delta_f64();
        let d = consts.d_f64();
        // profile of |s|^delta phi_0(s) stays in the closed-form family for
        // the det-power kinds
        let big_phi = match phi0 {
            RadialFunction::DetPower { lam } => {
                Some(RadialFunction::DetPower { lam: lam - 2.0 * delta })
            }
            RadialFunction::ShiftedDetPower { lam } => {
                Some(RadialFunction::DetShiftedPower { nu: delta, lam: *lam })
            }
            RadialFunction::DetShiftedPower { nu, lam } => {
                Some(RadialFunction::DetShiftedPower { nu: nu + delta, lam: *lam })
            }
            _ => None,
        };
        if let Some(big_phi) = big_phi {
            let r = PositiveDefiniteMatrix::from_gram(x.dense())?;
            let order = FracOrder::half(k, m);
            if let GGValue::Exact(inner) = gg_plus(&big_phi, &order, &r, engine)? {
                let c = gamma_m(m, n as f64 / 2.0)? / gamma_m(m, (n - k) as f64 / 2.0)?;
                return Ok(GGValue::Exact(c * r.det().powf(d - n as f64 / 2.0) * inner));
            }
        }
    }
    Ok(GGValue::Estimate(dual_radon_mc(phi, x, engine)?))
}

/// Stiefel Monte Carlo dual transform: the Haar mean of `phi(xi, xi'x)`.
pub fn dual_radon_mc(phi: &PlaneFunction, x: &RectMatrix, engine: &Engine) -> Result<MCEstimate> {
    let (n, k) = (phi.n, phi.k);
    let phi = phi.clone();
    let xd = x.dense().clone();
    monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let xi = sample_stiefel(n, n - k, rng);
        let t = RectMatrix::new(xi.dense().transpose() * &xd);
        phi.eval(&xi, &t)
    })
}

/// The shifted dual Radon transform: the mean of `phi` over all planes at
/// matrix distance `s^{1/2}` from `x`, realized with the fixed shift
/// `z = u_0 s^{1/2}` (the value does not depend on the choice of `z` with
/// `z'z = s`).
pub fn shifted_dual_radon(
    phi: &PlaneFunction,
    x: &RectMatrix,
    s: &SymmetricMatrix,
    engine: &Engine,
) -> Result<MCEstimate> {
    let (n, m, k) = (phi.n, phi.m, phi.k);
    let root = crate::symcone::sqrt_psd(s)?;
    let u0 = StiefelFrame::coordinate_tail(n - k, m);
    let z = u0.dense() * root.to_dense();
    let phi = phi.clone();
    let xd = x.dense().clone();
    monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let xi = sample_stiefel(n, n - k, rng);
        let t = RectMatrix::new(xi.dense().transpose() * &xd + &z);
        phi.eval(&xi, &t)
    })
}

/// The matrix spherical mean
/// `(M_r f)(x) = sigma_{n,m}^{-1} int_{V_{n,m}} f(x + v r^{1/2}) dv`.
/// At `x = 0` any radial field evaluates exactly: `(M_r f)(0) = f_0(r)`.
pub fn spherical_mean(
    f: &MatrixField,
    x: &RectMatrix,
    r: &PositiveDefiniteMatrix,
    engine: &Engine,
) -> Result<GGValue> {
    let (n, m) = (f.n, f.m);
    if x.nrows() != n || x.ncols() != m || r.dim() != m {
        return Err(Error::DimensionMismatch("spherical mean arguments".into()));
    }
    if x.frobenius_norm() == 0.0 {
        if let Some(profile) = f.radial_profile() {
            return Ok(GGValue::Exact(f.scale * profile.eval(r.base())));
        }
    }
    let root = r.sqrt().to_dense();
    let f = f.clone();
    let xd = x.dense().clone();
    let est = monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
        let v = sample_stiefel(n, m, rng);
        f.eval(&RectMatrix::new(&xd + v.dense() * &root))
    })?;
    Ok(GGValue::Estimate(est))
}

/// Mean-value inversion (even `k`): runs the closed-form pipeline
///
/// ```text
/// Phi_x(s) = (fhat)_s^vee (x) = pi^{km/2} (I_-^{k/2} F_x)(s),
/// f(x) = pi^{-km/2} lim_{s -> 0} (D_-^{k/2} Phi_x)(s)
/// ```
///
/// with the limit taken along `s = eps I` and one three-point Richardson
/// extrapolation over `{4 eps, 2 eps, eps}`. The pipeline requires the
/// shifted dual of the Radon image to stay inside the closed-form family,
/// which holds for the radial witnesses at `x = 0`.
pub fn mean_value_invert(f: &MatrixField, x: &RectMatrix, k: usize, eps: f64) -> Result<f64> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrderUnsupported(k));
    }
    let m = f.m;
    if x.frobenius_norm() > 0.0 {
        return Err(Error::PipelineNotClosedForm(
            "spherical-mean profile is closed-form only at x = 0".into(),
        ));
    }
    let profile = f.radial_profile().ok_or_else(|| {
        Error::PipelineNotClosedForm("custom fields have no closed Radon image".into())
    })?;
    // Phi_0(s) as a scaled profile: scale * pi^{km/2} * (I_-^{k/2} profile)(s)
    let image = gg_minus_symbolic(&profile, k, m)?;
    let km2 = PI.powf((k * m) as f64 / 2.0);
    let phi0 = ScaledRadial::new(f.scale * km2 * image.coeff, image.kind);
    // invert symbolically and take the isotropic limit
    let preimage = invert_gg_minus_closed(&phi0, k, m)?;
    let v = |e: f64| preimage.eval(&SymmetricMatrix::scaled_identity(m, e)) / km2;
    let (v1, v2, v4) = (v(eps), v(2.0 * eps), v(4.0 * eps));
    Ok((8.0 * v1 - 6.0 * v2 + v4) / 3.0)
}

/// Both sides of the duality relation
/// `int f(x) phicheck(x) dx = sigma_{n,n-k}^{-1} int int phi(xi,t) fhat(xi,t) dxi dt`,
/// each estimated by a single joint Monte Carlo loop.
pub fn duality_check(
    f: &MatrixField,
    phi: &PlaneFunction,
    engine: &Engine,
) -> Result<(MCEstimate, MCEstimate)> {
    let (n, m, k) = (phi.n, phi.m, phi.k);
    f.radon_guard(k)?;
    let x_density = engine
        .matrix_density
        .unwrap_or_else(|| f.default_omega_density(n * m));
    // LHS: E_{x, xi} [ f(x) phi(xi, xi'x) / p(x) ]
    let lhs = {
        let f = f.clone();
        let phi = phi.clone();
        monte_carlo(&engine.cfg, &engine.sampler, move |rng| {
            let x = x_density.sample(n, m, rng);
            let xi = sample_stiefel(n, n - k, rng);
            let t = RectMatrix::new(xi.dense().transpose() * x.dense());
            f.eval(&x) * phi.eval(&xi, &t) / x_density.density(&x)
        })?
    };
    // RHS: E_{xi, t, w} [ phi(xi,t) f(u w + xi t) / (p(t) p(w)) ]
    let t_density = MatrixDensity::Gaussian { sigma: 1.5 };
    let w_density = f.default_omega_density(k * m);
    let rhs = {
        let f = f.clone();
        let phi = phi.clone();
        monte_carlo(&engine.cfg, &engine.sampler.stream(engine.sampler.stream_id ^ 0x5851), move |rng| {
            let xi = sample_stiefel(n, n - k, rng);
            let u = xi.complete(rng);
            let t = t_density.sample(n - k, m, rng);
            let w = w_density.sample(k, m, rng);
            let x = RectMatrix::new(u.dense() * w.dense() + xi.dense() * t.dense());
            phi.eval(&xi, &t) * f.eval(&x) / (t_density.density(&t) * w_density.density(&w))
        })?
    };
    Ok((lhs, rhs))
}

/// One partial integral (and its radii schedule) of the Appendix-B probe.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub p: f64,
    pub radii: Vec<f64>,
    /// cumulative integrals of `Fhat` over `w`-balls of the given radii
    pub partials: Vec<MCEstimate>,
    /// successive ratios `partials[j+1] / partials[j]`
    pub doubling_ratios: Vec<f64>,
    /// shell integrals of `|F|^p` between successive radii
    pub norm_shells: Vec<MCEstimate>,
    /// successive shell ratios
    pub shell_ratios: Vec<f64>,
}

/// Growth probe for the sharp-exponent counterexample: partial Monte Carlo
/// integrals of `Fhat` over `w`-balls of doubling radius (divergence
/// signature at `p >= p_0`), plus shell integrals of `|F|^p` over `x`-space
/// (membership signature). Radii are in Frobenius norm. Requires `k >= m`
/// (the probe reduces both integrals to cone-polar form).
pub fn counterexample_b_probe(
    p: f64,
    n: usize,
    m: usize,
    k: usize,
    partial_radii: &[f64],
    shell_radii: &[f64],
    engine: &Engine,
) -> Result<ProbeReport> {
    if k < m {
        return Err(Error::Domain("probe implemented for k >= m".into()));
    }
    if partial_radii.len() < 2 || shell_radii.len() < 2 {
        return Err(Error::Domain("need at least two radii per schedule".into()));
    }
    // fixed representative plane offset: s = t't with a small deterministic t
    let t = RectMatrix::from_fn(n - k, m, |i, j| if i == j { 0.3 } else { 0.1 });
    let s = t.gram();
    let d = (m as f64 + 1.0) / 2.0;

    // (i) cumulative integrals of Fhat(xi, t) = int_{|w| <= R} F_0(w'w + s) dw
    //     in cone-polar form with a tail-matched beta-prime density
    let a_imp = (k as f64 - m as f64 - 1.0) / 2.0 + d;
    let density = ConeDensity::BetaPrime { a: a_imp, b: 0.6 };
    let front = 2f64.powi(-(m as i32)) * stiefel_volume(k, m);
    let mut partials = Vec::new();
    for (j, &radius) in partial_radii.iter().enumerate() {
        let s = s.clone();
        let est = monte_carlo(&engine.cfg, &engine.sampler.stream(1000 + j as u64), move |rng| {
            let rho = density.sample(m, rng);
            if rho.trace() > radius * radius {
                return 0.0;
            }
            let w = rho.det().powf((k as f64 - m as f64 - 1.0) / 2.0)
                * counterexample_profile(n, m, p, &rho.base().add(&s));
            w / density.density(&rho)
        })?;
        partials.push(est.scale(front));
    }

    // (ii) shell integrals of |F|^p over {R0 <= |x| <= R1}
    let a_imp = (n as f64 - m as f64 - 1.0) / 2.0 + d;
    let density = ConeDensity::BetaPrime { a: a_imp, b: 0.6 };
    let front = 2f64.powi(-(m as i32)) * stiefel_volume(n, m);
    let mut norm_shells = Vec::new();
    for (j, win) in shell_radii.windows(2).enumerate() {
        let (r0, r1) = (win[0], win[1]);
        let est = monte_carlo(&engine.cfg, &engine.sampler.stream(2000 + j as u64), move |rng| {
            let rho = density.sample(m, rng);
            let tr = rho.trace();
            if tr <= r0 * r0 || tr > r1 * r1 {
                return 0.0;
            }
            let w = rho.det().powf((n as f64 - m as f64 - 1.0) / 2.0)
                * counterexample_profile(n, m, p, rho.base()).powf(p);
            w / density.density(&rho)
        })?;
        norm_shells.push(est.scale(front));
    }

    let doubling_ratios = partials
        .windows(2)
        .map(|w| w[1].value / w[0].value)
        .collect();
    let shell_ratios = norm_shells
        .windows(2)
        .map(|w| w[1].value / w[0].value)
        .collect();
    Ok(ProbeReport {
        p,
        radii: partial_radii.to_vec(),
        partials,
        doubling_ratios,
        norm_shells,
        shell_ratios,
    })
}
