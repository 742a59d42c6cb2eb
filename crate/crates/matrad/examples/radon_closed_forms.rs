//! The matrix k-plane Radon transform: exact radial fast paths against the
//! full Monte Carlo plane integral, plus the sharp existence guards.

use matrad::mcquad::{sample_gaussian_matrix, sample_stiefel, Engine, MatrixDensity};
use matrad::radon::{radon, radon_mc, MatrixField};
use matrad::specialfn::lambda1;
use matrad::symcone::{MatrixPlane, RectMatrix, SymmetricMatrix};
use rand::SeedableRng;

fn main() {
    let (n, m, k) = (5usize, 2usize, 2usize);
    let engine = Engine::new(200_000, 11)
        .with_matrix_density(MatrixDensity::Gaussian { sigma: 1.25 });
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);

    let xi = sample_stiefel(n, n - k, &mut rng);
    let t = RectMatrix::new(sample_gaussian_matrix(n - k, m, &mut rng).dense() * 0.6);
    let plane = MatrixPlane::new(xi, t, k).unwrap();

    // Gaussian: image pi^{km/2} exp(-tr t't)
    let f = MatrixField::gaussian(n, m);
    let exact = radon(&f, &plane, &engine).unwrap();
    let mc = radon_mc(&f, &plane, &engine).unwrap();
    println!("Gaussian transform:");
    println!("  exact {:.8}", exact.value());
    println!("  MC    {:.8} +- {:.8}  (z = {:.2})", mc.value, mc.stderr, mc.z_score(exact.value()));

    // shifted power lam = 8: image lambda_1 |I + t't|^{(k-lam)/2}
    let lam = 8.0;
    let f = MatrixField::shifted_power(n, m, lam);
    let exact = radon(&f, &plane, &engine).unwrap();
    let mc = radon_mc(&f, &plane, &engine.stream(1)).unwrap();
    let by_hand = lambda1(n, m, k, lam).unwrap()
        * plane
            .t
            .gram()
            .add(&SymmetricMatrix::identity(m))
            .det()
            .powf((k as f64 - lam) / 2.0);
    println!("shifted power transform (lam = {lam}):");
    println!("  exact     {:.8}", exact.value());
    println!("  by hand   {by_hand:.8}");
    println!("  MC        {:.8} +- {:.8}", mc.value, mc.stderr);

    // sharpness: the threshold exponent is rejected, not silently diverged
    let f = MatrixField::shifted_power(n, m, (k + m - 1) as f64);
    println!("at lam = k+m-1: {:?}", radon(&f, &plane, &engine).err());
    let f = MatrixField::counterexample(n, m, 2.0);
    println!("at p = p_0 = 2: {:?}", radon(&f, &plane, &engine).err());
}
