#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use opcat::sampling::{sample_rng, SampleRng};
use opcat::{Field, Mat, Tolerances};
use proptest::prelude::*;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn field_of(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

/// `(rng, field, n)` drawn from a seed, a field flag and n in 1..=8.
pub fn setup() -> impl Strategy<Value = (SampleRng, Field, usize)> {
    (any::<u64>(), any::<bool>(), 1usize..=8)
        .prop_map(|(seed, complex, n)| (sample_rng(seed, 0, 0), field_of(complex), n))
}

/// Spectral norm from the largest eigenvalue of `A*A`.
pub fn eigen_norm(a: &Mat) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let d = a.data();
    let gram: DMatrix<Complex64> = d.adjoint() * d;
    SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &v| m.max(v))
        .sqrt()
}

/// Triple-loop product.
pub fn naive_product(a: &Mat, b: &Mat) -> Mat {
    Mat::from_fn(a.field().join(b.field()), a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a.entry(i, k) * b.entry(k, j)).sum()
    })
}

pub fn max_entry_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (a.entry(i, j) - b.entry(i, j)).norm())
        .fold(0.0, f64::max)
}

pub fn close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * 1f64.max(a.abs()).max(b.abs())
}
