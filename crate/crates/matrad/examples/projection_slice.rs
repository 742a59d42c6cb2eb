//! Projection-slice: the Fourier transform of the Gaussian along a frame
//! equals the Fourier transform of its Radon image in the offset variable.

use matrad::mcquad::{sample_gaussian_matrix, sample_stiefel, Engine};
use matrad::riesz::{projection_slice_check, FourierClosedForm};
use matrad::symcone::RectMatrix;
use rand::SeedableRng;

fn main() {
    let (n, m, k) = (5usize, 2usize, 2usize);
    let engine = Engine::new(200_000, 17);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);

    let xi = sample_stiefel(n, n - k, &mut rng);
    println!("Gaussian Fourier closed form on M_{{{n},{m}}}:");
    let fourier = FourierClosedForm::gaussian(n, m);
    println!("  F e (0) = {:.8} (pi^(nm/2))", fourier.eval(&RectMatrix::zeros(n, m)));

    for (label, b) in [
        ("b = 0", RectMatrix::zeros(n - k, m)),
        (
            "random b",
            RectMatrix::new(sample_gaussian_matrix(n - k, m, &mut rng).dense() * 0.7),
        ),
    ] {
        let (lhs, re, im) = projection_slice_check(n, m, k, &b, &xi, &engine).unwrap();
        println!("{label}:");
        println!("  F f (xi b)                 = {lhs:.8}");
        println!("  Fourier of the image, real = {:.8} +- {:.8}", re.value, re.stderr);
        println!("  Fourier of the image, imag = {:.8} +- {:.8}", im.value, im.stderr);
    }
}
