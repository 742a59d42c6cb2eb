//! Seeded samplers: Haar frames, Bartlett cone draws, and the deterministic
//! chunked Monte Carlo engine (bit-identical results at any thread count).

use matrad::mcquad::{
    integrate_cone, integrate_matrix_space, monte_carlo, sample_cone_wishart, sample_stiefel,
    ConeDensity, ConeDomain, MatrixDensity, McConfig, SeededSampler,
};
use matrad::specialfn::{beta_m, gamma_m};
use matrad::symcone::SymmetricMatrix;

fn main() {
    let sampler = SeededSampler::new(42);
    let mut rng = sampler.rng();

    let v = sample_stiefel(5, 2, &mut rng);
    println!("Haar frame on V_5,2, orthonormality defect = {:.2e}", v.orthonormality_defect());

    let r = sample_cone_wishart(2, 2.5, 1.0, &mut rng);
    println!("Bartlett cone draw: det = {:.4}, trace = {:.4}", r.det(), r.trace());

    // determinism across thread counts
    let cfg = McConfig::new(100_000);
    let draw = |rng: &mut rand_chacha::ChaCha12Rng| {
        let v = sample_stiefel(4, 2, rng);
        (v.dense().transpose() * v.dense()).trace()
    };
    let par = monte_carlo(&cfg, &sampler, draw).unwrap();
    let seq = monte_carlo(&cfg.sequential(), &sampler, draw).unwrap();
    println!(
        "determinism: parallel {:.15e}, sequential {:.15e}, bit-equal = {}",
        par.value,
        seq.value,
        par.value.to_bits() == seq.value.to_bits()
    );

    // the two cone oracles: Gamma_2(3) over the full cone, B_2(3,3) over (0, I)
    let alpha = 3.0;
    let est = integrate_cone(
        |r| (-r.trace()).exp() * r.det().powf(alpha - 1.5),
        2,
        &ConeDomain::Full,
        ConeDensity::Wishart { gamma: 2.0, theta: 1.0 },
        &McConfig::new(400_000),
        &sampler.stream(1),
    )
    .unwrap();
    println!(
        "cone integral of exp(-tr r)|r|^1.5: {:.6} +- {:.6} (Gamma_2(3) = {:.6})",
        est.value,
        est.stderr,
        gamma_m(2, alpha).unwrap()
    );

    let eye = SymmetricMatrix::identity(2);
    let eye2 = eye.clone();
    let est = integrate_cone(
        move |r| r.det().powf(1.5) * eye2.sub(r).det().powf(1.5),
        2,
        &ConeDomain::Interval { a: SymmetricMatrix::zeros(2), b: eye },
        ConeDensity::Wishart { gamma: 2.0, theta: 1.0 },
        &McConfig::new(200_000),
        &sampler.stream(2),
    )
    .unwrap();
    println!(
        "interval integral |r|^1.5 |I-r|^1.5: {:.6} +- {:.6} (B_2(3,3) = {:.6})",
        est.value,
        est.stderr,
        beta_m(2, 3.0, 3.0).unwrap()
    );

    // Gaussian mass on matrix space
    let est = integrate_matrix_space(
        |w| (-w.gram().trace()).exp(),
        2,
        2,
        MatrixDensity::Gaussian { sigma: 1.2 },
        &McConfig::new(200_000),
        &sampler.stream(3),
    )
    .unwrap();
    println!(
        "Gaussian mass on M_2,2: {:.6} +- {:.6} (pi^2 = {:.6})",
        est.value,
        est.stderr,
        std::f64::consts::PI.powi(2)
    );
}
