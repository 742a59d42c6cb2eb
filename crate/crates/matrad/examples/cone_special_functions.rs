//! Special functions of the cone: the generalized gamma and beta functions,
//! Bernstein polynomials, Stiefel volumes, and the named constants of a
//! plane configuration.

use matrad::specialfn::{
    bernstein_b, beta_m, fuglede_constant, gamma_m, lambda1, lambda2, riesz_gamma,
    stiefel_volume, ConeConstants,
};

fn main() {
    println!("generalized gamma function of the cone P_m");
    for (m, a) in [(1usize, 2.5f64), (2, 2.0), (2, 3.0), (3, 2.5)] {
        println!("  Gamma_{m}({a}) = {:.12}", gamma_m(m, a).unwrap());
    }
    println!("  Gamma_2(2) should be pi/2 = {:.12}", std::f64::consts::PI / 2.0);

    println!("\npole guard: Gamma_2 at the half-integer lattice");
    for a in [0.5f64, 0.0, -0.5] {
        match gamma_m(2, a) {
            Ok(v) => println!("  Gamma_2({a}) = {v}"),
            Err(e) => println!("  Gamma_2({a}) -> {e}"),
        }
    }

    println!("\nbeta function and Bernstein polynomial");
    println!("  B_2(3, 3)   = {:.12}", beta_m(2, 3.0, 3.0).unwrap());
    println!("  b(1) at m=2 = {:.12} (exactly 3/2)", bernstein_b(2, 1.0));

    println!("\nStiefel manifold volumes");
    println!("  sigma_3,1 = {:.12} (the 2-sphere area 4 pi)", stiefel_volume(3, 1));
    println!("  sigma_5,2 = {:.12}", stiefel_volume(5, 2));

    println!("\nconstants of the (n,m,k) = (5,2,2) configuration");
    let c = ConeConstants::new(5, 2, 2).unwrap();
    println!("  d = {}, delta = {}, p_0 = {}", c.d, c.delta, c.p0);
    println!("  lambda_1(lam=8) = {:.10}", lambda1(5, 2, 2, 8.0).unwrap());
    println!("  lambda_2(lam=8) = {:.10}", lambda2(5, 2, 2, 8.0).unwrap());
    println!("  c_nkm           = {:.10}", fuglede_constant(5, 2, 2).unwrap());
    println!("  gamma_5,2(2)    = {:.10}", riesz_gamma(5, 2, 2.0).unwrap());
}
