//! Garding-Gindikin fractional integrals on the cone: closed forms, the
//! half-integral matrix-space branch, the cone derivative, and symbolic
//! inversion of right-sided images.

use matrad::fracint::{
    d_plus, gg_minus, gg_minus_symbolic, gg_plus, invert_gg_minus_closed, FracOrder,
    RadialFunction,
};
use matrad::mcquad::Engine;
use matrad::specialfn::bernstein_b;
use matrad::symcone::{PositiveDefiniteMatrix, SymmetricMatrix};

fn main() {
    let engine = Engine::new(100_000, 7);
    let m = 2usize;
    let s = PositiveDefiniteMatrix::scaled_identity(m, 0.8).unwrap();

    // the Gaussian is an eigenfunction of every right-sided order
    for alpha in [0.5, 1.0, 1.7] {
        let order = FracOrder::new(alpha, m).unwrap();
        let v = gg_minus(&RadialFunction::GaussianTrace, &order, s.base(), &engine).unwrap();
        println!(
            "I_-^{alpha} exp(-tr .) at s = 0.8 I: {:.10} (exp(-tr s) = {:.10})",
            v.value(),
            (-s.trace()).exp()
        );
    }

    // shifted det-power: exact image with the sharp divergence guard
    let lam = 8.0;
    let order = FracOrder::new(1.5, m).unwrap();
    let v = gg_minus(&RadialFunction::ShiftedDetPower { lam }, &order, s.base(), &engine).unwrap();
    println!("I_-^1.5 |I+r|^-4 exact image value: {:.10}", v.value());
    let boundary = gg_minus(
        &RadialFunction::ShiftedDetPower { lam: 2.0 * 1.5 + 1.0 },
        &order,
        s.base(),
        &engine,
    );
    println!("at the sharp threshold the integral is rejected: {:?}", boundary.err());

    // left-sided closed form on det powers
    let order = FracOrder::half(1, m);
    let v = gg_plus(&RadialFunction::DetPower { lam: -3.0 }, &order, &s, &engine).unwrap();
    println!("I_+^{{1/2}} |r|^1.5 exact: {:.10}", v.value());

    // the cone derivative and its Bernstein eigenvalue
    let alpha = 2.3;
    let f = move |r: &SymmetricMatrix| r.det().powf(alpha);
    let d = d_plus(&f, s.base(), 1).unwrap();
    let exact = bernstein_b(m, alpha) * s.det().powf(alpha - 1.0);
    println!("D_+ |s|^{alpha}: numeric {d:.10} vs b(a)|s|^(a-1) = {exact:.10}");

    // symbolic inversion of a right-sided image, even order
    let k = 2usize;
    let f = RadialFunction::ShiftedDetPower { lam };
    let image = gg_minus_symbolic(&f, k, m).unwrap();
    println!("image of |I+r|^-4 under I_-^1: coeff {:.10}, kind {:?}", image.coeff, image.kind);
    let pre = invert_gg_minus_closed(&image, k, m).unwrap();
    println!("inverted back: coeff {:.10}, kind {:?}", pre.coeff, pre.kind);
}
