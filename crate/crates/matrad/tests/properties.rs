//! Property tests for the algebraic invariants that hold pointwise, with
//! inputs drawn by proptest rather than a fixed seed.

use matrad::fracint::{det_power_semigroup_ratio, FracOrder};
use matrad::specialfn::{
    bernstein_b, big_b_k, gamma_m, real_gamma, stiefel_volume, WallachParam,
};
use matrad::symcone::{polar_decompose, sqrt_psd, RectMatrix, SymmetricMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn finite_entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

proptest! {
    #[test]
    fn packed_symmetric_round_trip(vals in finite_entries(6)) {
        let mut idx = 0;
        let s = SymmetricMatrix::from_fn(3, |_, _| {
            let v = vals[idx];
            idx += 1;
            v
        });
        let back = SymmetricMatrix::from_dense(&s.to_dense()).unwrap();
        prop_assert_eq!(s, back);
    }

    #[test]
    fn sqrt_psd_squares_back(vals in finite_entries(9)) {
        let a = DMatrix::from_fn(3, 3, |i, j| vals[3 * i + j]);
        let gram = SymmetricMatrix::gram(&a);
        let root = sqrt_psd(&gram).unwrap();
        let back = &root.to_dense() * &root.to_dense();
        let err = (back - gram.to_dense()).norm();
        prop_assert!(err <= 1e-10 * (1.0 + gram.to_dense().norm()));
    }

    #[test]
    fn polar_reconstructs_when_well_conditioned(vals in finite_entries(8)) {
        let x = RectMatrix::new(
            DMatrix::from_fn(4, 2, |i, j| vals[2 * i + j]) + DMatrix::identity(4, 2) * 2.0,
        );
        if let Ok((v, r)) = polar_decompose(&x) {
            prop_assert!(v.orthonormality_defect() <= 1e-12);
            let back = v.dense() * r.sqrt().to_dense();
            prop_assert!((back - x.dense()).norm() <= 1e-9 * (1.0 + x.frobenius_norm()));
        }
    }

    #[test]
    fn sylvester_identity(vals in finite_entries(16)) {
        let x = DMatrix::from_fn(4, 2, |i, j| vals[2 * i + j]);
        let y = DMatrix::from_fn(2, 4, |i, j| vals[8 + 4 * i + j]);
        let lhs = (DMatrix::identity(4, 4) + &x * &y).determinant();
        let rhs = (DMatrix::identity(2, 2) + &y * &x).determinant();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn bernstein_doubling(m in 1usize..5, a in 0.2f64..4.0) {
        let rhs = 2f64.powi(-(m as i32)) * real_gamma(2.0 * a + m as f64) / real_gamma(2.0 * a);
        let lhs = bernstein_b(m, a);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn big_bk_symmetry(a in -4.0f64..6.0, k in 1usize..4) {
        let (n, m) = (6usize, 2usize);
        let lhs = big_b_k(n, m, k, a);
        let rhs = big_b_k(n, m, k, n as f64 - a - 2.0 * k as f64);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn gamma_shift_recursion(m in 1usize..5, a in 1.6f64..6.0) {
        // Gamma_m(a + 1) = b(a - d + 1) Gamma_m(a) through the Bernstein form
        let d = (m as f64 + 1.0) / 2.0;
        let lhs = gamma_m(m, a + 1.0).unwrap();
        let rhs = bernstein_b(m, a - d + 1.0) * gamma_m(m, a).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs());
    }

    #[test]
    fn wallach_classification(m in 1usize..6, twik in 0usize..12) {
        // every half-integer k/2 below (m-1)/2 is discrete-admissible,
        // everything above is continuous-admissible
        let alpha = twik as f64 / 2.0;
        let w = WallachParam::new(m, alpha);
        prop_assert!(w.is_ok());
        let order = FracOrder::new(alpha, m).unwrap();
        prop_assert_eq!(order.half_integral(), Some(twik));
    }

    #[test]
    fn wallach_rejects_gap(m in 3usize..6, t in 0.05f64..0.45) {
        // strictly between lattice points and below (m-1)/2 is inadmissible
        let alpha = t; // in (0, 1/2), never a half-integer
        prop_assert!(WallachParam::new(m, alpha).is_err());
    }

    #[test]
    fn image_constants_telescope(m in 1usize..4, k1 in 1usize..4, k2 in 1usize..4, pad in 0.3f64..4.0) {
        let lam = (k1 + k2) as f64 + m as f64 - 1.0 + pad;
        let r = det_power_semigroup_ratio(m, k1, k2, lam).unwrap();
        prop_assert!((r - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn stiefel_volume_recursion(n in 2usize..8) {
        // sigma_{n,1} is the sphere area; check the two-row reduction
        // sigma_{n,2} = sigma_{n,1} sigma_{n-1,1} / (2 pi^{?}) indirectly via
        // the defining gamma quotient
        let m = 2usize;
        if n > m {
            let lhs = stiefel_volume(n, m);
            let rhs = 2f64.powi(m as i32)
                * std::f64::consts::PI.powf((n * m) as f64 / 2.0)
                / gamma_m(m, n as f64 / 2.0).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }
}
