//! The sharp-exponent counterexample: a function in L^p whose Radon
//! transform is identically infinite exactly when p reaches the critical
//! exponent p_0 = (n+m-1)/(k+m-1).
//!
//! The probe reports partial integrals of the transform over balls of
//! doubling radius (they keep growing at p = p_0, stabilize below it) and
//! shell integrals of |F|^p (they decay geometrically, witnessing
//! membership in L^p).

use matrad::mcquad::Engine;
use matrad::radon::counterexample_b_probe;

fn main() {
    let (n, m, k) = (5usize, 2usize, 2usize);
    let engine = Engine::new(200_000, 23);
    let radii = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
    let shells = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0];

    for p in [2.0, 1.2] {
        let report = counterexample_b_probe(p, n, m, k, &radii, &shells, &engine).unwrap();
        println!("p = {p} (p_0 = 2):");
        for (r, est) in report.radii.iter().zip(&report.partials) {
            println!("  partial up to R = {r:>5.1}: {:>10.5} +- {:.5}", est.value, est.stderr);
        }
        let ratios: Vec<String> =
            report.doubling_ratios.iter().map(|r| format!("{r:.3}")).collect();
        println!("  doubling ratios: [{}]", ratios.join(", "));
        if p == 2.0 {
            let ratios: Vec<String> =
                report.shell_ratios.iter().map(|r| format!("{r:.3}")).collect();
            println!("  |F|^p shell ratios: [{}] (all < 0.9: F stays in L^p)", ratios.join(", "));
        }
        println!();
    }
}
