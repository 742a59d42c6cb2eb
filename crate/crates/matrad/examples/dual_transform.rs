//! The dual Radon transform: exact reduction through the left-sided cone
//! integral at full-rank points against the Haar frame average.

use matrad::fracint::RadialFunction;
use matrad::mcquad::{sample_gaussian_matrix, Engine};
use matrad::radon::{dual_radon, dual_radon_mc, shifted_dual_radon, PlaneFunction};
use matrad::specialfn::lambda2;
use matrad::symcone::SymmetricMatrix;
use rand::SeedableRng;

fn main() {
    let (n, m, k, lam) = (5usize, 2usize, 2usize, 8.0);
    let engine = Engine::new(150_000, 5);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
    let x = sample_gaussian_matrix(n, m, &mut rng);
    let r = x.gram();
    let l2 = lambda2(n, m, k, lam).unwrap();

    // det-power profile: dual is lambda_2 |x'x|^{(lam-n)/2}
    let phi = PlaneFunction::radial(n, m, k, RadialFunction::DetPower { lam: n as f64 - lam });
    let exact = dual_radon(&phi, &x, &engine).unwrap();
    let mc = dual_radon_mc(&phi, &x, &engine).unwrap();
    println!("dual of |t't|^{{(lam-n)/2}}:");
    println!("  exact   {:.8}", exact.value());
    println!("  by hand {:.8}", l2 * r.det().powf((lam - n as f64) / 2.0));
    println!("  Haar MC {:.8} +- {:.8}", mc.value, mc.stderr);

    // bounded profile from the same family
    let phi = PlaneFunction::radial(
        n,
        m,
        k,
        RadialFunction::DetShiftedPower { nu: (lam - n as f64) / 2.0, lam },
    );
    let exact = dual_radon(&phi, &x, &engine).unwrap();
    let mc = dual_radon_mc(&phi, &x, &engine.stream(1)).unwrap();
    let by_hand = l2
        * r.det().powf((lam - n as f64) / 2.0)
        * r.add(&SymmetricMatrix::identity(m)).det().powf((k as f64 - lam) / 2.0);
    println!("dual of |t't|^{{(lam-n)/2}} |I+t't|^{{-lam/2}}:");
    println!("  exact   {:.8}", exact.value());
    println!("  by hand {by_hand:.8}");
    println!("  Haar MC {:.8} +- {:.8}", mc.value, mc.stderr);

    // the shifted dual at matrix distance s^{1/2}
    let phi = PlaneFunction::radial(n, m, k, RadialFunction::GaussianTrace);
    let s = SymmetricMatrix::scaled_identity(m, 0.5);
    let shifted = shifted_dual_radon(&phi, &x, &s, &engine.stream(2)).unwrap();
    println!("shifted dual of the Gaussian profile at s = 0.5 I:");
    println!("  MC {:.8} +- {:.8}", shifted.value, shifted.stderr);
}
