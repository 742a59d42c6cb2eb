//! Special functions of the cone of positive definite matrices.
//!
//! The generalized gamma function of the cone `P_m` is the Siegel integral
//! `Gamma_m(a) = int_{P_m} exp(-tr r) |r|^{a-d} dr`, `d = (m+1)/2`, equal to
//! the finite product `pi^{m(m-1)/4} prod_{j<m} Gamma(a - j/2)`. Everything
//! here is evaluated through that product (and its relatives), never through
//! the cone integral itself; the integral is exercised separately as a Monte
//! Carlo oracle.

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Ordinary gamma function for real arguments (Lanczos, g = 7, with
/// reflection for x < 1/2). Poles return a non-finite value.
pub fn real_gamma(x: f64) -> f64 {
    #[allow(clippy::inconsistent_digit_grouping)]
    const P: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * real_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut t = P[0];
    for (i, p) in P.iter().enumerate().skip(1) {
        t += p / (x + i as f64);
    }
    let w = x + 7.5;
    (2.0 * std::f64::consts::PI).sqrt() * w.powf(x + 0.5) * (-w).exp() * t
}

/// Is `x` a pole of the ordinary gamma function (a non-positive integer)?
fn is_gamma_pole(x: f64) -> bool {
    x < 0.5 && (x - x.round()).abs() < 1e-12
}

/// The generalized gamma function `Gamma_m(alpha)` evaluated via the finite
/// product. Accuracy is limited only by the scalar gamma (about 1e-13
/// relative).
pub fn gamma_m(m: usize, alpha: f64) -> Result<f64> {
    assert!(m >= 1);
    let mut prod = std::f64::consts::PI.powf(m as f64 * (m as f64 - 1.0) / 4.0);
    for j in 0..m {
        let arg = alpha - j as f64 / 2.0;
        if is_gamma_pole(arg) {
            return Err(Error::Pole { m, j, value: arg });
        }
        prod *= real_gamma(arg);
    }
    Ok(prod)
}

/// The beta function of the cone, `B_m(a, b) = Gamma_m(a) Gamma_m(b) / Gamma_m(a+b)`.
pub fn beta_m(m: usize, alpha: f64, beta: f64) -> Result<f64> {
    Ok(gamma_m(m, alpha)? * gamma_m(m, beta)? / gamma_m(m, alpha + beta)?)
}

/// The Bernstein polynomial of the determinant,
/// `b(alpha) = alpha (alpha + 1/2) ... (alpha + (m-1)/2)`,
/// the eigenfactor in `D_+ |s|^alpha = b(alpha) |s|^{alpha-1}`.
pub fn bernstein_b(m: usize, alpha: f64) -> f64 {
    (0..m).map(|j| alpha + j as f64 / 2.0).product()
}

/// Telescoping product `b(mu) b(mu-1) ... b(mu-(steps-1))`, i.e. the constant
/// produced by applying `D_+` `steps` times to `|s|^{mu}`. Equals the gamma
/// quotient `Gamma_m(mu+d)/Gamma_m(mu+d-steps)` wherever the latter is finite.
pub fn bernstein_chain(m: usize, mu: f64, steps: usize) -> f64 {
    (0..steps).map(|i| bernstein_b(m, mu - i as f64)).product()
}

/// The polynomial `B_k(alpha)` governing iterated Cayley-Laplace action on
/// determinant powers: `Delta^k |x|_m^{alpha+2k-n} = B_k(alpha) |x|_m^{alpha-n}`.
/// Satisfies `B_k(alpha) = B_k(n - alpha - 2k)`.
pub fn big_b_k(n: usize, m: usize, k: usize, alpha: f64) -> f64 {
    let n = n as f64;
    let mut prod = 1.0;
    for i in 0..m {
        for j in 0..k {
            let (i, j) = (i as f64, j as f64);
            prod *= (alpha - i + 2.0 * j) * (alpha - n + 2.0 + 2.0 * j + i);
        }
    }
    prod
}

/// The Bernstein-type polynomial of the Cayley-Laplace operator itself:
/// `Delta |x|_m^lambda = CB(lambda) |x|_m^{lambda-2}` with
/// `CB(lambda) = (-1)^m prod_{i<m} (lambda + i)(2 - n - lambda + i)`.
pub fn cayley_bernstein(n: usize, m: usize, lambda: f64) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let n = n as f64;
    sign * (0..m)
        .map(|i| {
            let i = i as f64;
            (lambda + i) * (2.0 - n - lambda + i)
        })
        .product::<f64>()
}

/// `lambda_1 = pi^{km/2} Gamma_m((lambda-k)/2) / Gamma_m(lambda/2)`:
/// the constant in the Radon transforms of elementary radial functions.
/// Requires `lambda > k + m - 1` (the integrals diverge at and below it).
pub fn lambda1(n: usize, m: usize, k: usize, lambda: f64) -> Result<f64> {
    check_plane_dims(n, m, k)?;
    if lambda <= (k + m - 1) as f64 {
        return Err(Error::Domain(format!(
            "lambda = {lambda} <= k+m-1 = {}; transform diverges",
            k + m - 1
        )));
    }
    let km2 = (k * m) as f64 / 2.0;
    Ok(std::f64::consts::PI.powf(km2) * gamma_m(m, (lambda - k as f64) / 2.0)?
        / gamma_m(m, lambda / 2.0)?)
}

/// `lambda_2 = Gamma_m(n/2) Gamma_m((lambda-k)/2) / (Gamma_m(lambda/2) Gamma_m((n-k)/2))`:
/// the constant in the dual Radon transforms of elementary radial functions.
pub fn lambda2(n: usize, m: usize, k: usize, lambda: f64) -> Result<f64> {
    check_plane_dims(n, m, k)?;
    if lambda <= (k + m - 1) as f64 {
        return Err(Error::Domain(format!(
            "lambda = {lambda} <= k+m-1 = {}; transform diverges",
            k + m - 1
        )));
    }
    Ok(gamma_m(m, n as f64 / 2.0)? * gamma_m(m, (lambda - k as f64) / 2.0)?
        / (gamma_m(m, lambda / 2.0)? * gamma_m(m, (n - k) as f64 / 2.0)?))
}

fn check_plane_dims(n: usize, m: usize, k: usize) -> Result<()> {
    if m == 0 || k == 0 || k >= n {
        return Err(Error::Domain(format!(
            "(n,m,k) = ({n},{m},{k}) must satisfy m >= 1, 1 <= k <= n-1"
        )));
    }
    Ok(())
}

/// The Fuglede constant `c_{n,k,m} = 2^{km} pi^{km/2} Gamma_m(n/2) / Gamma_m((n-k)/2)`
/// linking the back-projected Radon transform to the Riesz potential.
pub fn fuglede_constant(n: usize, m: usize, k: usize) -> Result<f64> {
    if k == 0 || m > n || k > n - m {
        return Err(Error::Domain(format!(
            "(n,m,k) = ({n},{m},{k}) must satisfy 1 <= k <= n-m"
        )));
    }
    let km = (k * m) as f64;
    Ok(2f64.powf(km)
        * std::f64::consts::PI.powf(km / 2.0)
        * gamma_m(m, n as f64 / 2.0)?
        / gamma_m(m, (n - k) as f64 / 2.0)?)
}

/// The Riesz normalizing constant
/// `gamma_{n,m}(alpha) = 2^{alpha m} pi^{nm/2} Gamma_m(alpha/2) / Gamma_m((n-alpha)/2)`,
/// undefined for `alpha` in `{n-m+1, n-m+2, ...}` (poles of the denominator).
pub fn riesz_gamma(n: usize, m: usize, alpha: f64) -> Result<f64> {
    let num = gamma_m(m, alpha / 2.0)?;
    let den = gamma_m(m, (n as f64 - alpha) / 2.0)?;
    Ok(2f64.powf(alpha * m as f64) * std::f64::consts::PI.powf((n * m) as f64 / 2.0) * num / den)
}

/// Total Haar mass of the Stiefel manifold,
/// `sigma_{n,m} = 2^m pi^{nm/2} / Gamma_m(n/2)`.
pub fn stiefel_volume(n: usize, m: usize) -> f64 {
    assert!(n >= m && m >= 1);
    2f64.powi(m as i32) * std::f64::consts::PI.powf((n * m) as f64 / 2.0)
        / gamma_m(m, n as f64 / 2.0).expect("n/2 is never a pole for n >= m")
}

/// An order in the Wallach set
/// `W_m = {0, 1/2, 1, ..., (m-1)/2} union {alpha : alpha > (m-1)/2}`,
/// the admissible orders for which the cone fractional integrals are
/// positive-measure convolutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WallachParam {
    pub m: usize,
    pub alpha: f64,
}

impl WallachParam {
    pub fn new(m: usize, alpha: f64) -> Result<Self> {
        let half_steps = 2.0 * alpha;
        let discrete = (half_steps - half_steps.round()).abs() < 1e-12
            && half_steps.round() >= 0.0
            && half_steps.round() <= (m - 1) as f64;
        if discrete || alpha > (m as f64 - 1.0) / 2.0 {
            Ok(WallachParam { m, alpha })
        } else {
            Err(Error::OrderNotInWallachSet { alpha, m })
        }
    }

    /// The half-integer `k` when `alpha = k/2` lies in the discrete part.
    pub fn half_integral(&self) -> Option<usize> {
        let k = 2.0 * self.alpha;
        if (k - k.round()).abs() < 1e-12 && k.round() >= 0.0 {
            Some(k.round() as usize)
        } else {
            None
        }
    }
}

/// The named constants of a `(n, m, k)` configuration. `d`, `delta` and the
/// critical exponent `p_0 = (n+m-1)/(k+m-1)` are carried exactly as rationals
/// so half-integer threshold comparisons never suffer float error.
#[derive(Clone, Debug)]
pub struct ConeConstants {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `d = (m+1)/2`
    pub d: Ratio<i64>,
    /// `delta = (n-k)/2 - d`
    pub delta: Ratio<i64>,
    /// Haar mass of `V_{n,m}`
    pub sigma_nm: f64,
    /// Haar mass of `V_{n,n-k}`
    pub sigma_nk: f64,
    /// sharp L^p threshold `p_0 = (n+m-1)/(k+m-1)`
    pub p0: Ratio<i64>,
}

impl ConeConstants {
    pub fn new(n: usize, m: usize, k: usize) -> Result<Self> {
        check_plane_dims(n, m, k)?;
        if n < m {
            return Err(Error::Domain(format!("n = {n} < m = {m}")));
        }
        let (ni, mi, ki) = (n as i64, m as i64, k as i64);
        Ok(ConeConstants {
            n,
            m,
            k,
            d: Ratio::new(mi + 1, 2),
            delta: Ratio::new(ni - ki, 2) - Ratio::new(mi + 1, 2),
            sigma_nm: stiefel_volume(n, m),
            sigma_nk: stiefel_volume(n, n - k),
            p0: Ratio::new(ni + mi - 1, ki + mi - 1),
        })
    }

    pub fn d_f64(&self) -> f64 {
        *self.d.numer() as f64 / *self.d.denom() as f64
    }

    pub fn delta_f64(&self) -> f64 {
        *self.delta.numer() as f64 / *self.delta.denom() as f64
    }

    pub fn p0_f64(&self) -> f64 {
        *self.p0.numer() as f64 / *self.p0.denom() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::PI;

    #[test]
    fn scalar_gamma_reference_values() {
        assert_relative_eq!(real_gamma(0.5), PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(real_gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(real_gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(real_gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(real_gamma(7.5), 1871.254305797788, max_relative = 1e-12);
    }

    #[test]
    fn gamma_m_reduces_to_scalar_for_m1() {
        for &a in &[0.3, 1.0, 2.5, 7.0] {
            assert_relative_eq!(gamma_m(1, a).unwrap(), real_gamma(a), max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_2_at_2_is_half_pi() {
        assert_relative_eq!(gamma_m(2, 2.0).unwrap(), PI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn gamma_m_pole_guard() {
        // for m >= 2 the poles of Gamma_m sit exactly at (m-1)/2, (m-2)/2, ...
        // in half-integer steps; for m = 1 only the non-positive integers remain
        for m in 2..=4usize {
            for step in 0..10 {
                let alpha = (m as f64 - 1.0) / 2.0 - step as f64 / 2.0;
                assert!(matches!(gamma_m(m, alpha), Err(Error::Pole { .. })), "m={m} a={alpha}");
            }
        }
        for step in 0..10 {
            assert!(matches!(gamma_m(1, -(step as f64)), Err(Error::Pole { .. })));
        }
        assert!(gamma_m(1, -0.5).is_ok());
        assert!(gamma_m(3, 1.2).is_ok());
    }

    #[test]
    fn beta_symmetry_and_classical_reduction() {
        assert_eq!(beta_m(2, 3.0, 4.0).unwrap(), beta_m(2, 4.0, 3.0).unwrap());
        // m = 1: classical beta function
        let b = beta_m(1, 2.0, 3.0).unwrap();
        assert_relative_eq!(b, 1.0 / 12.0, max_relative = 1e-12);
    }

    #[test]
    fn bernstein_values_and_identities() {
        assert_relative_eq!(bernstein_b(1, 0.7), 0.7, max_relative = 1e-14);
        assert_relative_eq!(bernstein_b(2, 1.0), 1.5, max_relative = 1e-14);

        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(0.2..4.0);
            for m in 1..=4usize {
                // (B2): b(alpha) = 2^{-m} Gamma(2 alpha + m) / Gamma(2 alpha)
                let rhs = 2f64.powi(-(m as i32)) * real_gamma(2.0 * a + m as f64)
                    / real_gamma(2.0 * a);
                assert_relative_eq!(bernstein_b(m, a), rhs, max_relative = 1e-12);
            }
        }
        // (B3): b(alpha) = Gamma_m(alpha + d) / Gamma_m(alpha + d - 1)
        for _ in 0..50 {
            let a: f64 = rng.gen_range(1.0..5.0);
            for m in 1..=4usize {
                let d = (m as f64 + 1.0) / 2.0;
                let rhs = gamma_m(m, a + d).unwrap() / gamma_m(m, a + d - 1.0).unwrap();
                assert_relative_eq!(bernstein_b(m, a), rhs, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn pochhammer_gamma_quotient() {
        // (-1)^m Gamma_m(1 - a/2) / Gamma_m(-a/2) = 2^{-m} (a, m)
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        let mut tested = 0;
        while tested < 100 {
            let a: f64 = rng.gen_range(0.05..3.95);
            let m = rng.gen_range(1..=4usize);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let (num, den) = (gamma_m(m, 1.0 - a / 2.0), gamma_m(m, -a / 2.0));
            let (num, den) = match (num, den) {
                (Ok(x), Ok(y)) => (x, y),
                _ => continue, // a landed on a pole; redraw
            };
            let poch: f64 = (0..m).map(|i| a + i as f64).product();
            assert_relative_eq!(
                sign * num / den,
                2f64.powi(-(m as i32)) * poch,
                max_relative = 1e-10
            );
            tested += 1;
        }
    }

    #[test]
    fn gamma_m_splitting_identity() {
        // Gamma_m(a) = pi^{k(m-k)/2} Gamma_k(a) Gamma_{m-k}(a - k/2)
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for m in 2..=4usize {
            for k in 1..m {
                for _ in 0..20 {
                    let a: f64 = rng.gen_range(2.5..6.0);
                    let lhs = gamma_m(m, a).unwrap();
                    let rhs = PI.powf((k * (m - k)) as f64 / 2.0)
                        * gamma_m(k, a).unwrap()
                        * gamma_m(m - k, a - k as f64 / 2.0).unwrap();
                    assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn stiefel_volume_sphere_area() {
        // sigma_{3,1} is the area of the unit 2-sphere
        assert_relative_eq!(stiefel_volume(3, 1), 4.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(stiefel_volume(2, 1), 2.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn big_b_k_cases() {
        assert_eq!(big_b_k(5, 2, 0, 1.3), 1.0); // empty product

        let mut rng = ChaCha12Rng::seed_from_u64(24);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(-3.0..6.0);
            for &(n, m, k) in &[(5usize, 2usize, 2usize), (4, 2, 1), (6, 3, 2)] {
                let sym = big_b_k(n, m, k, n as f64 - a - 2.0 * k as f64);
                assert_relative_eq!(big_b_k(n, m, k, a), sym, max_relative = 1e-12);
            }
            // m = 1, k = 1: classical Riesz recursion factor alpha (alpha - n + 2)
            let n = 4;
            assert_relative_eq!(
                big_b_k(n, 1, 1, a),
                a * (a - n as f64 + 2.0),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn cayley_bernstein_one_step_consistency() {
        // (vaz) with k = 1: Delta |x|^{a+2-n} has factor B_1(a) = CB(a+2-n)
        let mut rng = ChaCha12Rng::seed_from_u64(25);
        for _ in 0..30 {
            let a: f64 = rng.gen_range(-2.0..5.0);
            for &(n, m) in &[(5usize, 2usize), (3, 2), (4, 1)] {
                assert_relative_eq!(
                    big_b_k(n, m, 1, a),
                    cayley_bernstein(n, m, a + 2.0 - n as f64),
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn lambda_constants() {
        // m=1, k=1, lambda=2, n=2: lambda_1 = pi
        assert_relative_eq!(lambda1(2, 1, 1, 2.0).unwrap(), PI, max_relative = 1e-12);
        // lambda_2 at lambda = n collapses to 1
        assert_relative_eq!(lambda2(5, 2, 2, 5.0).unwrap(), 1.0, max_relative = 1e-12);
        // boundary is a hard error
        assert!(matches!(lambda1(5, 2, 2, 3.0), Err(Error::Domain(_))));
        assert!(matches!(lambda2(5, 2, 2, 2.9), Err(Error::Domain(_))));
    }

    #[test]
    fn fuglede_constant_cases() {
        // m=1: equals (2 pi)^k sigma_{n-k-1} / sigma_{n-1} (sphere areas)
        for n in 3..=6usize {
            for k in 1..n - 1 {
                let lhs = fuglede_constant(n, 1, k).unwrap();
                let rhs = (2.0 * PI).powi(k as i32) * stiefel_volume(n - k, 1)
                    / stiefel_volume(n, 1);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
        let c = fuglede_constant(5, 2, 2).unwrap();
        assert!(c.is_finite() && c > 0.0);
        assert!(fuglede_constant(5, 2, 4).is_err()); // k > n-m
    }

    #[test]
    fn riesz_gamma_cases() {
        // m = 1 classical constant
        let n = 4;
        let a = 1.5;
        let classical = 2f64.powf(a) * PI.powf(n as f64 / 2.0) * real_gamma(a / 2.0)
            / real_gamma((n as f64 - a) / 2.0);
        assert_relative_eq!(riesz_gamma(n, 1, a).unwrap(), classical, max_relative = 1e-12);

        // (5,2,alpha=2) against the raw product expansion
        let v = riesz_gamma(5, 2, 2.0).unwrap();
        let expect = 2f64.powi(4)
            * PI.powi(5)
            * (PI.sqrt() * real_gamma(1.0) * real_gamma(0.5))
            / (PI.sqrt() * real_gamma(1.5) * real_gamma(1.0));
        assert_relative_eq!(v, expect, max_relative = 1e-12);

        // excluded value n - m + 1
        assert!(matches!(riesz_gamma(5, 2, 4.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn wallach_membership() {
        assert!(WallachParam::new(3, 0.5).is_ok());
        assert!(WallachParam::new(3, 1.0).is_ok());
        assert!(WallachParam::new(3, 0.75).is_err()); // below (m-1)/2, not half-integral
        assert!(WallachParam::new(3, 1.25).is_ok()); // continuous part
        assert_eq!(WallachParam::new(3, 0.5).unwrap().half_integral(), Some(1));
        assert_eq!(WallachParam::new(3, 1.25).unwrap().half_integral(), None);
    }

    #[test]
    fn cone_constants_rationals() {
        let c = ConeConstants::new(5, 2, 2).unwrap();
        assert_eq!(c.d, Ratio::new(3, 2));
        assert_eq!(c.delta, Ratio::new(0, 1));
        assert_eq!(c.p0, Ratio::new(2, 1));
        assert_relative_eq!(c.p0_f64(), 2.0);
        assert!(c.sigma_nm > 0.0 && c.sigma_nk > 0.0);
    }
}
