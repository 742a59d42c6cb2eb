//! Mean-value inversion: recover a function at the origin from its Radon
//! transform through the shifted dual and the cone derivative.
//!
//! The pipeline is `Phi_x(s) = (fhat)_s^vee(x)`, which reduces to
//! `pi^{km/2} (I_-^{k/2} F_x)(s)` with `F_x` the spherical-mean profile;
//! applying `D_-^{k/2}` symbolically and letting `s -> 0` along `eps I`
//! returns `f(x)`.

use matrad::radon::{mean_value_invert, spherical_mean, MatrixField};
use matrad::mcquad::Engine;
use matrad::symcone::{PositiveDefiniteMatrix, RectMatrix};

fn main() {
    let (n, m, k) = (4usize, 2usize, 2usize);
    let zero = RectMatrix::zeros(n, m);

    for (name, f, truth) in [
        ("Gaussian", MatrixField::gaussian(n, m), 1.0),
        ("scaled Gaussian", MatrixField::gaussian(n, m).scaled(2.75), 2.75),
        ("shifted power lam=8", MatrixField::shifted_power(n, m, 8.0), 1.0),
    ] {
        let rec = mean_value_invert(&f, &zero, k, 1e-3).unwrap();
        println!(
            "{name}: recovered {rec:.6}, truth {truth}, relative error {:.2e}",
            (rec - truth).abs() / truth
        );
    }

    // the spherical mean itself converges to the point value
    let f = MatrixField::gaussian(n, m);
    let x = RectMatrix::from_fn(n, m, |i, j| 0.15 * (i as f64 - j as f64));
    let engine = Engine::new(100_000, 3);
    println!("\nspherical means at shrinking radius around f(x) = {:.6}:", f.eval(&x));
    for (i, eps) in [1e-1, 1e-2, 1e-3].into_iter().enumerate() {
        let r = PositiveDefiniteMatrix::scaled_identity(m, eps).unwrap();
        let v = spherical_mean(&f, &x, &r, &engine.stream(i as u64)).unwrap();
        println!("  eps = {eps:.0e}: mean = {:.6}", v.value());
    }
}
