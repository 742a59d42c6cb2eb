//! Riesz potentials of integral order and the Fuglede formula tying the
//! back-projected Radon transform to them.

use matrad::mcquad::Engine;
use matrad::radon::MatrixField;
use matrad::riesz::{fuglede_check, riesz_potential_int, zeta_gaussian};
use matrad::specialfn::{fuglede_constant, lambda1, lambda2};
use matrad::symcone::RectMatrix;

fn main() {
    let engine = Engine::new(150_000, 19);

    println!("zeta integral of the Gaussian, (n,m) = (4,2):");
    for alpha in [2.0, 3.0, 3.5] {
        println!("  Z(e, {alpha}-n) = {:.8}", zeta_gaussian(4, 2, alpha).unwrap());
    }

    // Fuglede at the origin, Gaussian witness
    let (n, m, k) = (4usize, 2usize, 2usize);
    let f = MatrixField::gaussian(n, m);
    let (lhs, rhs) = fuglede_check(&f, &RectMatrix::zeros(n, m), k, 0, &engine).unwrap();
    println!("\nFuglede at (4,2,2), Gaussian, x = 0:");
    println!("  back-projection        {:.8} +- {:.8}", lhs.value, lhs.stderr);
    println!("  c_nkm * Riesz potential {:.8} +- {:.8}", rhs.value, rhs.stderr);

    // the power chain: both sides proportional to |x'x|^{(k-lam)/2}
    let (n, m, k, lam) = (5usize, 2usize, 2usize, 3.5);
    let f = MatrixField::power(n, m, lam);
    let x = RectMatrix::identity_padded(n, m);
    let pot = riesz_potential_int(&f, &x, k, &engine.stream(1)).unwrap().estimate();
    let chain = lambda1(n, m, k, lam).unwrap()
        * lambda2(n, m, k, (n + k) as f64 - lam).unwrap()
        / fuglede_constant(n, m, k).unwrap();
    println!("\nRiesz potential of |x'x|^{{-{lam}/2}} at (5,2,2):");
    println!("  Monte Carlo   {:.8} +- {:.8}", pot.value, pot.stderr);
    println!("  chain constant {chain:.8} (|x'x| = 1 here)");

    // order zero is the identity
    let v = riesz_potential_int(&f, &x, 0, &engine).unwrap();
    println!("\norder zero returns the point value: {:.8} = {:.8}", v.value(), f.eval(&x));
}
