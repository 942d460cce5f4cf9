use proptest::prelude::*;
use proptest::sample::select;

use qvalues::dhvalue::{complete_unitary, dh_value, UnitaryCompletion};
use qvalues::hilbert::{
    lift_local, operator_schmidt_rank, partial_trace, sample_random_hermitian,
    sample_random_state, sample_random_unitary, tensor, Matrix, StateVector, C64,
};
use qvalues::ncvalue::{
    expectation_fn, nc_value, nc_value_of_product, star_scalar, uncertainty, NCValue,
};
use qvalues::twoqubit;

fn herm(d: usize, seed: u64) -> Matrix {
    sample_random_hermitian(d, seed).into_matrix()
}

fn int_matrix(d: usize, entries: &[(i8, i8)]) -> Matrix {
    let data = entries
        .iter()
        .map(|&(re, im)| C64::new(re as f64, im as f64))
        .collect();
    Matrix::from_vec(d, d, data).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn tensor_is_associative(
        a in prop::collection::vec((-9i8..9, -9i8..9), 4),
        b in prop::collection::vec((-9i8..9, -9i8..9), 9),
        c in prop::collection::vec((-9i8..9, -9i8..9), 4),
    ) {
        // small integers keep every product exact, so only the indexing is tested
        let (x, y, z) = (int_matrix(2, &a), int_matrix(3, &b), int_matrix(2, &c));
        let left = tensor(&tensor(&x, &y), &z);
        let right = tensor(&x, &tensor(&y, &z));
        prop_assert_eq!(left.max_abs_diff(&right), 0.0);
    }

    #[test]
    fn disjoint_lifts_commute(a in any::<u64>(), b in any::<u64>()) {
        let dims = [2, 3];
        let x = lift_local(&herm(2, a), 0, &dims).unwrap();
        let y = lift_local(&herm(3, b), 1, &dims).unwrap();
        prop_assert_eq!((&x * &y).max_abs_diff(&(&y * &x)), 0.0);
    }

    #[test]
    fn partial_trace_of_product(a in any::<u64>(), b in any::<u64>()) {
        let (ra, rb) = (herm(2, a), herm(3, b));
        let kept = partial_trace(&ra.kron(&rb), 0, &[2, 3]).unwrap();
        prop_assert!(kept.max_abs_diff(&ra.scale(rb.trace())) < 1e-12);
    }

    #[test]
    fn product_operators_have_rank_one(a in any::<u64>(), b in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let u = herm(da, a).kron(&herm(db, b));
        prop_assert_eq!(operator_schmidt_rank(&u, &[da, db], 1e-10).unwrap(), 1);
    }

    #[test]
    fn star_scalar_is_expectation_of_product(d in select(vec![2usize, 4, 8, 16]), s in any::<u64>()) {
        let phi = sample_random_state(d, s);
        let (b, c) = (herm(d, s ^ 1), herm(d, s ^ 2));
        let star = star_scalar(&nc_value(&b, &phi).unwrap(), &nc_value(&c, &phi).unwrap()).unwrap();
        let direct = expectation_fn(&b.matmul(&c).unwrap(), &phi).unwrap();
        prop_assert!((star - direct).norm() < 1e-10);
    }

    #[test]
    fn product_value_matches_matrix_product(d in select(vec![2usize, 4, 8, 16]), s in any::<u64>()) {
        let phi = sample_random_state(d, s);
        let (b, c) = (herm(d, s ^ 1), herm(d, s ^ 2));
        let via = nc_value_of_product(&b, &c, &phi).unwrap();
        let direct = nc_value(&b.matmul(&c).unwrap(), &phi).unwrap();
        prop_assert!(via.max_abs_diff(&direct) < 1e-10);
    }

    #[test]
    fn value_is_linear(s in any::<u64>(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let phi = sample_random_state(6, s);
        let (b, c) = (herm(6, s ^ 1), herm(6, s ^ 2));
        let combo = &b.scale(C64::new(alpha, 0.0)) + &c.scale(C64::new(beta, 0.0));
        let lhs = nc_value(&combo, &phi).unwrap();
        let rhs = NCValue::linear_combination(&[
            (alpha, &nc_value(&b, &phi).unwrap()),
            (beta, &nc_value(&c, &phi).unwrap()),
        ]);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn eigenstate_value_is_commutative(s in any::<u64>(), k in 0usize..4) {
        // B = U diag(0, 1, 2, 3) U^dag, φ = U e_k
        let u = sample_random_unitary(4, s).into_matrix();
        let lam: Vec<C64> = (0..4).map(|i| C64::new(i as f64, 0.0)).collect();
        let b = &(&u * &Matrix::diagonal(&lam)) * &u.adjoint();
        let phi = StateVector::normalized(u.column(k)).unwrap();
        let vb = nc_value(&b, &phi).unwrap();
        prop_assert!(vb.is_commutative(1e-10));
        let c = herm(4, s ^ 7);
        let prod = nc_value_of_product(&b, &c, &phi).unwrap();
        let scaled = nc_value(&c, &phi).unwrap().scale(k as f64);
        prop_assert!(prod.max_abs_diff(&scaled) < 1e-10);
    }

    #[test]
    fn phase_moves_only_v(s in any::<u64>(), alpha in 0.0f64..std::f64::consts::TAU) {
        let phi = sample_random_state(4, s);
        let b = herm(4, s ^ 3);
        let a = nc_value(&b, &phi).unwrap();
        let rotated = nc_value(&b, &phi.with_phase(alpha)).unwrap();
        prop_assert!((a.f - rotated.f).norm() < 1e-12);
        let expect: Vec<C64> = a.v.iter().map(|v| v * C64::from_polar(1.0, -alpha)).collect();
        prop_assert!(qvalues::hilbert::max_abs_diff(&rotated.v, &expect) < 1e-12);
        prop_assert!((uncertainty(&a) - uncertainty(&rotated)).abs() < 1e-12);
    }

    #[test]
    fn dh_value_preserves_structure(d in select(vec![2usize, 3, 4, 8]), s in any::<u64>(), seeded in any::<bool>()) {
        let phi = sample_random_state(d, s);
        let comp = complete_unitary(&phi, seeded.then_some(s ^ 9));
        let (b, c) = (herm(d, s ^ 1), herm(d, s ^ 2));
        let v = |m: &Matrix| dh_value(m, &comp).unwrap().matrix;
        let sum = &b + &c;
        prop_assert!(v(&sum).max_abs_diff(&(&v(&b) + &v(&c))) < 1e-10);
        let scaled = b.scale(C64::new(-1.7, 0.0));
        prop_assert!(v(&scaled).max_abs_diff(&v(&b).scale(C64::new(-1.7, 0.0))) < 1e-10);
        let prod = b.matmul(&c).unwrap();
        prop_assert!(v(&prod).max_abs_diff(&(&v(&b) * &v(&c))) < 1e-10);
        let g = &b + &c.scale(C64::new(0.0, 1.0));
        prop_assert!(v(&g.adjoint()).max_abs_diff(&v(&g).adjoint()) < 1e-10);

        let eb = qvalues::Observable::with_tolerance(v(&b), 1e-10).unwrap().eigenvalues();
        let e = qvalues::Observable::new(b.clone()).unwrap().eigenvalues();
        for (x, y) in eb.iter().zip(&e) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        let f = expectation_fn(&b, &phi).unwrap();
        prop_assert!((dh_value(&b, &comp).unwrap().reference_entry(0) - f).norm() < 1e-10);
    }

    #[test]
    fn local_dh_values_do_not_factor(r in 0.01f64..0.99, zeta in 0.0f64..std::f64::consts::TAU) {
        let comp = UnitaryCompletion::from_unitary(twoqubit::u_q(r, zeta).unwrap(), 0, "u_q").unwrap();
        let b = lift_local(&qvalues::hilbert::pauli::sigma3(), 0, &[2, 2]).unwrap();
        let m = dh_value(&b, &comp).unwrap().matrix;
        prop_assert!(operator_schmidt_rank(&m, &[2, 2], 1e-10).unwrap() > 1);
    }

    #[test]
    fn reduced_density_ignores_zeta(r in 0.0f64..=1.0, zeta in 0.0f64..std::f64::consts::TAU) {
        let psi = twoqubit::canonical_state(r, zeta).unwrap();
        let base = twoqubit::canonical_state(r, 0.0).unwrap();
        for slot in 0..2 {
            let a = twoqubit::reduced_density(&psi, slot).unwrap();
            let b = twoqubit::reduced_density(&base, slot).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
            prop_assert!((qvalues::hilbert::purity(&a) - (1.0 + r * r) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_limit_values_are_numbers(zeta in 0.0f64..std::f64::consts::TAU, s in any::<u64>()) {
        let psi = twoqubit::canonical_state(1.0, zeta).unwrap();
        let obs = twoqubit::local_observables();
        let c = herm(4, s);
        let vc = nc_value(&c, &psi).unwrap();
        for name in ["sigma3A", "sigma3B"] {
            let a = nc_value(&obs[name], &psi).unwrap();
            prop_assert!(a.is_commutative(1e-12));
            let star = star_scalar(&a, &vc).unwrap();
            prop_assert!((star - vc.f).norm() < 1e-12);
        }
    }
}
