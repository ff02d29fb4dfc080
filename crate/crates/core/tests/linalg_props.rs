mod common;

use common::{eigen_norm, max_entry_diff, naive_product, setup, tol};
use opcat::sampling;
use opcat::{relative_residual, Field, Mat};
use proptest::prelude::*;

proptest! {
    #[test]
    fn product_matches_triple_loop((mut rng, field, n) in setup(), m in 1usize..=8) {
        let a = sampling::gaussian_matrix(&mut rng, field, n, m);
        let b = sampling::gaussian_matrix(&mut rng, field, m, n);
        prop_assert!(max_entry_diff(&(&a * &b), &naive_product(&a, &b)) < 1e-12);
    }

    #[test]
    fn norm_agrees_with_eigen_oracle((mut rng, field, n) in setup()) {
        let a = sampling::operator(&mut rng, field, n);
        prop_assert!(common::close(a.operator_norm(), eigen_norm(&a), 1e-8));
    }

    #[test]
    fn submultiplicative((mut rng, field, n) in setup()) {
        let a = sampling::operator(&mut rng, field, n);
        let b = sampling::operator(&mut rng, field, n);
        let bound = a.operator_norm() * b.operator_norm();
        prop_assert!((&a * &b).operator_norm() <= bound + tol().eps_eq * bound.max(1.0));
    }

    #[test]
    fn adjoint_reverses_products((mut rng, field, n) in setup()) {
        let a = sampling::gaussian_matrix(&mut rng, field, n, n);
        let b = sampling::gaussian_matrix(&mut rng, field, n, n);
        let lhs = (&a * &b).adjoint();
        prop_assert!(relative_residual(&lhs, &(&b.adjoint() * &a.adjoint())) <= tol().eps_eq);
        prop_assert!(common::close(a.adjoint().operator_norm(), a.operator_norm(), 1e-8));
    }

    #[test]
    fn penrose_identities((mut rng, field, n) in setup()) {
        let t = tol();
        let a = sampling::operator(&mut rng, field, n);
        let p = a.pseudoinverse(&t).unwrap();
        prop_assert!(relative_residual(&(&(&a * &p) * &a), &a) <= t.eps_eq);
        prop_assert!(relative_residual(&(&(&p * &a) * &p), &p) <= t.eps_eq);
        let ap = &a * &p;
        let pa = &p * &a;
        prop_assert!(relative_residual(&ap.adjoint(), &ap) <= t.eps_eq);
        prop_assert!(relative_residual(&pa.adjoint(), &pa) <= t.eps_eq);
    }

    #[test]
    fn rank_of_designed_matrices((mut rng, field, n) in setup(), r in 0usize..=8) {
        let r = r.min(n);
        let a = sampling::matrix_of_rank(&mut rng, field, n, r);
        prop_assert_eq!(a.rank(&tol()).unwrap(), r);
        prop_assert_eq!(a.adjoint().rank(&tol()).unwrap(), r);
    }

    #[test]
    fn singular_values_sorted_and_nonnegative((mut rng, field, n) in setup()) {
        let a = sampling::operator(&mut rng, field, n);
        let s = a.singular_values().unwrap();
        prop_assert_eq!(s.len(), n);
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn worked_products() {
    let a = Mat::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let b = Mat::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
    let expected = Mat::from_real_rows(&[&[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    assert_eq!(max_entry_diff(&(&a * &b), &expected), 0.0);
    assert_eq!(max_entry_diff(&(&Mat::identity(Field::Real, 3) * &b), &b), 0.0);

    // A member of the first-column ideal times [[0,1,1],0,0].
    let (x, y, z) = (2.0, -1.0, 5.0);
    let member = Mat::from_real_rows(&[&[x, 0.0, 0.0], &[y, 0.0, 0.0], &[z, 0.0, 0.0]]);
    let t = Mat::from_real_rows(&[&[0.0, 1.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let expected = Mat::from_real_rows(&[&[0.0, x, x], &[0.0, y, y], &[0.0, z, z]]);
    assert_eq!(max_entry_diff(&(&member * &t), &expected), 0.0);
}

#[test]
fn worked_adjoints() {
    let a = Mat::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
    assert_eq!(max_entry_diff(&a.adjoint(), &Mat::from_real_rows(&[&[0.0, 0.0], &[2.0, 0.0]])), 0.0);
    let i = num_complex::Complex64::new(0.0, 1.0);
    let z = num_complex::Complex64::new(0.0, 0.0);
    let c = Mat::from_fn(Field::Complex, 2, 2, |r, s| if (r, s) == (0, 0) { i } else { z });
    assert_eq!(c.adjoint().entry(0, 0), -i);
}

#[test]
fn worked_singular_values_and_norms() {
    let shift = Mat::from_real_rows(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    assert_eq!(Mat::diag(&[3.0, 1.0]).singular_values().unwrap(), vec![3.0, 1.0]);
    let s = shift.singular_values().unwrap();
    assert!((s[0] - 2.0).abs() < 1e-14 && s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
    assert!(Mat::zeros(Field::Real, 3, 3).singular_values().unwrap().iter().all(|&x| x == 0.0));
    assert!((shift.operator_norm() - 2.0).abs() < 1e-14);
    let row = Mat::from_real_rows(&[&[1.0, 2.0, 3.0], &[0.0; 3], &[0.0; 3]]);
    assert!((row.operator_norm() - 14f64.sqrt()).abs() < 1e-12);
}

#[test]
fn worked_pseudoinverses() {
    let t = tol();
    let p = Mat::diag(&[2.0, 0.0]).pseudoinverse(&t).unwrap();
    assert!(max_entry_diff(&p, &Mat::diag(&[0.5, 0.0])) < 1e-15);
    let shift = Mat::from_real_rows(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let expected = Mat::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.5, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    assert!(max_entry_diff(&shift.pseudoinverse(&t).unwrap(), &expected) < 1e-15);
    let inv = Mat::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
    let expected = Mat::from_real_rows(&[&[1.0, -1.0], &[-1.0, 2.0]]);
    assert!(relative_residual(&inv.pseudoinverse(&t).unwrap(), &expected) <= t.eps_eq);
}
