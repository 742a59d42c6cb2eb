//! Plane-wave inversion for even k: the iterated Cayley-Laplace operator in
//! the offset variable applied to the Radon image, averaged over frames.

use matrad::mcquad::{sample_gaussian_matrix, Engine};
use matrad::radon::MatrixField;
use matrad::riesz::plane_wave_invert_even;
use matrad::symcone::RectMatrix;
use rand::SeedableRng;

fn main() {
    let engine = Engine::new(5_000, 13);

    // recover the Gaussian at the origin at (4,2,2)
    let (n, m, k) = (4usize, 2usize, 2usize);
    let f = MatrixField::gaussian(n, m);
    let est = plane_wave_invert_even(&f, &RectMatrix::zeros(n, m), k, 1e-2, &engine).unwrap();
    println!("(4,2,2) Gaussian at origin: {:.6} +- {:.6} (truth 1)", est.value, est.stderr);

    // linearity
    let est =
        plane_wave_invert_even(&f.clone().scaled(3.0), &RectMatrix::zeros(n, m), k, 1e-2, &engine)
            .unwrap();
    println!("scaled by 3:                {:.6} +- {:.6} (truth 3)", est.value, est.stderr);

    // off the origin at (5,2,2)
    let (n, m, k) = (5usize, 2usize, 2usize);
    let f = MatrixField::gaussian(n, m);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4);
    let mut x = sample_gaussian_matrix(n, m, &mut rng);
    let nrm = x.frobenius_norm();
    if nrm > 1.0 {
        x = RectMatrix::new(x.dense() * (0.8 / nrm));
    }
    let est = plane_wave_invert_even(&f, &x, k, 1e-2, &engine.stream(1)).unwrap();
    println!(
        "(5,2,2) Gaussian off origin: {:.6} +- {:.6} (truth {:.6})",
        est.value,
        est.stderr,
        f.eval(&x)
    );
}
