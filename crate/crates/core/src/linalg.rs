//! Dense matrices over K, with operators acting on row vectors (`x ↦ x·A`).
//!
//! Under this convention the semigroup product "apply `a`, then `b`" is the
//! plain matrix product `a·b`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Accepted factor error, in units of machine epsilon times the dimension.
const SVD_CHECK_FACTOR: f64 = 1e4;

/// Numerical thresholds. Both are relative to the largest singular value
/// involved, floored at 1 so that exactly-zero operators stay zero.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub eps_rank: f64,
    pub eps_eq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_rank: 1e-10,
            eps_eq: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(eps_rank: f64, eps_eq: f64) -> Result<Self> {
        let tol = Tolerances { eps_rank, eps_eq };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_rank > 0.0 && self.eps_rank <= self.eps_eq && self.eps_eq < 1.0) {
            return Err(Error::Invalid(format!(
                "tolerances must satisfy 0 < eps_rank <= eps_eq < 1 (got eps_rank={}, eps_eq={})",
                self.eps_rank, self.eps_eq
            )));
        }
        Ok(())
    }

    /// Singular values at or below this are treated as zero.
    pub fn rank_cutoff(&self, largest_singular_value: f64) -> f64 {
        self.eps_rank * largest_singular_value.max(1.0)
    }
}

/// Relative distance `‖a − b‖ / max(1, ‖a‖, ‖b‖)` in the operator norm.
///
/// Shape mismatch counts as maximal disagreement (`+∞`).
pub fn relative_residual(a: &Mat, b: &Mat) -> f64 {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return f64::INFINITY;
    }
    let diff = (a - b).operator_norm();
    diff / a.operator_norm().max(b.operator_norm()).max(1.0)
}

/// A dense matrix with a field tag. Real matrices hold exactly-zero
/// imaginary parts.
#[derive(Clone, PartialEq)]
pub struct Mat {
    field: Field,
    data: DMatrix<Complex64>,
}

/// Thin SVD `(U, σ, Vᵀ)` from faer, in real or complex arithmetic.
fn raw_svd(
    data: &DMatrix<Complex64>,
    real: bool,
) -> Option<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let (r, c) = data.shape();
    if real {
        let m = faer::Mat::<f64>::from_fn(r, c, |i, j| data[(i, j)].re);
        let svd = m.thin_svd().ok()?;
        let (u, v) = (svd.U(), svd.V());
        let k = u.ncols();
        Some((
            DMatrix::from_fn(r, k, |i, j| Complex64::new(u[(i, j)], 0.0)),
            (0..k).map(|i| svd.S()[i]).collect(),
            DMatrix::from_fn(k, c, |i, j| Complex64::new(v[(j, i)], 0.0)),
        ))
    } else {
        let m = faer::Mat::<Complex64>::from_fn(r, c, |i, j| data[(i, j)]);
        let svd = m.thin_svd().ok()?;
        let (u, v) = (svd.U(), svd.V());
        let k = u.ncols();
        Some((
            DMatrix::from_fn(r, k, |i, j| u[(i, j)]),
            (0..k).map(|i| svd.S()[i].re).collect(),
            DMatrix::from_fn(k, c, |i, j| v[(j, i)].conj()),
        ))
    }
}

/// Thin singular value decomposition `a = u·diag(s)·v*`, `s` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Mat,
    pub singular_values: Vec<f64>,
    pub v: Mat,
}

impl Svd {
    /// Number of singular values above the rank cutoff.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        let largest = self.singular_values.first().copied().unwrap_or(0.0);
        let cutoff = tol.rank_cutoff(largest);
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

impl Mat {
    /// Wrap `data`, clearing imaginary parts if `field` is real.
    pub fn from_data(field: Field, mut data: DMatrix<Complex64>) -> Self {
        if field == Field::Real {
            data.iter_mut().for_each(|z| z.im = 0.0);
        }
        Mat { field, data }
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Mat {
            field,
            data: DMatrix::identity(n, n),
        }
    }

    /// Real matrix from row slices.
    ///
    /// Panics on ragged input; intended for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            field: Field::Real,
            data: DMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)),
        }
    }

    /// Matrix from row-major complex entries.
    pub fn from_row_major(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[Complex64],
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if field == Field::Real {
            if let Some(z) = entries.iter().find(|z| z.im != 0.0) {
                return Err(Error::Invalid(format!(
                    "real matrix has entry with nonzero imaginary part {z}"
                )));
            }
        }
        Ok(Mat {
            field,
            data: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        Mat::from_data(field, DMatrix::from_fn(rows, cols, f))
    }

    /// `diag(values)` over the reals.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Mat::from_fn(Field::Real, n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        Scalar::new(self.field, self.data[(i, j)])
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    /// Row-major entries.
    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    /// Re-tag as complex (entries unchanged).
    pub fn to_complex(&self) -> Mat {
        Mat {
            field: Field::Complex,
            data: self.data.clone(),
        }
    }

    /// Re-tag with the join of the current field and `field`.
    pub fn promote(&self, field: Field) -> Mat {
        Mat {
            field: self.field.join(field),
            data: self.data.clone(),
        }
    }

    pub fn row(&self, i: usize) -> Mat {
        Mat {
            field: self.field,
            data: self.data.rows(i, 1).into_owned(),
        }
    }

    pub fn column(&self, j: usize) -> Mat {
        Mat {
            field: self.field,
            data: self.data.columns(j, 1).into_owned(),
        }
    }

    /// The leading `k` columns.
    pub fn leading_columns(&self, k: usize) -> Mat {
        Mat {
            field: self.field,
            data: self.data.columns(0, k).into_owned(),
        }
    }

    /// Columns `start..` (possibly none).
    pub fn trailing_columns(&self, start: usize) -> Mat {
        Mat {
            field: self.field,
            data: self.data.columns(start, self.cols() - start).into_owned(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows() != other.rows() {
            return Err(Error::Shape(format!(
                "cannot stack {}x{} beside {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let mut data = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        data.columns_mut(0, self.cols()).copy_from(&self.data);
        data.columns_mut(self.cols(), other.cols())
            .copy_from(&other.data);
        Ok(Mat {
            field: self.field.join(other.field),
            data,
        })
    }

    /// Checked product: the semigroup multiplication (apply `self`, then `other`).
    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::Field {
                expected: self.field,
                found: other.field,
            });
        }
        if self.cols() != other.rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(self * other)
    }

    pub fn checked_add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        Ok(self + other)
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat {
            field: self.field,
            data: self.data.adjoint(),
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat {
            field: self.field,
            data: self.data.transpose(),
        }
    }

    pub fn conj(&self) -> Mat {
        Mat {
            field: self.field,
            data: self.data.map(|z| z.conj()),
        }
    }

    pub fn scale(&self, k: Scalar) -> Mat {
        let field = self.field.join(k.field());
        Mat::from_data(field, self.data.map(|z| z * k.value()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Thin SVD. Real matrices are decomposed in real arithmetic so their
    /// factors stay real.
    pub fn svd(&self) -> Result<Svd> {
        let (r, c) = (self.rows(), self.cols());
        if r == 0 || c == 0 {
            return Ok(Svd {
                u: Mat::zeros(self.field, r, 0),
                singular_values: Vec::new(),
                v: Mat::zeros(self.field, c, 0),
            });
        }
        let (u, s, v_t) = self.verified_factors()?;

        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
        let k = s.len();
        let u = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
        let v = DMatrix::from_fn(c, k, |i, j| v_t[(order[j], i)].conj());
        Ok(Svd {
            u: Mat::from_data(self.field, u),
            singular_values: order.iter().map(|&j| s[j].max(0.0)).collect(),
            v: Mat::from_data(self.field, v),
        })
    }

    /// Raw factors `(U, σ, Vᵀ)` checked for recomposition and
    /// orthonormality, retried in complex arithmetic if the real
    /// decomposition fails the check.
    fn verified_factors(&self) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        let limit = SVD_CHECK_FACTOR * f64::EPSILON * (self.rows().max(self.cols()) as f64);
        let attempts: &[bool] = match self.field {
            Field::Real => &[true, false],
            Field::Complex => &[false],
        };
        for &real in attempts {
            let Some((u, s, v_t)) = raw_svd(&self.data, real) else {
                continue;
            };
            let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                s.len(),
                s.iter().map(|&x| Complex64::new(x, 0.0)),
            ));
            let k = s.len();
            let eye = DMatrix::<Complex64>::identity(k, k);
            let recomposed = (&u * sigma * &v_t - &self.data).norm() / scale;
            let u_orth = (u.adjoint() * &u - &eye).norm();
            let v_orth = (&v_t * v_t.adjoint() - &eye).norm();
            if recomposed <= limit && u_orth <= limit && v_orth <= limit {
                return Ok((u, s, v_t));
            }
        }
        Err(self.convergence_error())
    }

    fn convergence_error(&self) -> Error {
        Error::Numeric(format!(
            "SVD failed its accuracy check for {}x{} {} matrix (max |entry| = {:.3e}, finite = {})",
            self.rows(),
            self.cols(),
            self.field,
            self.max_abs(),
            self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        ))
    }

    /// Largest singular value.
    ///
    /// Falls back to the Frobenius norm (an upper bound) in the pathological
    /// case where the SVD fails to converge.
    pub fn operator_norm(&self) -> f64 {
        match self.svd() {
            Ok(svd) => svd.singular_values.first().copied().unwrap_or(0.0),
            Err(_) => self.frobenius_norm(),
        }
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(self.svd()?.singular_values)
    }

    pub fn rank(&self, tol: &Tolerances) -> Result<usize> {
        Ok(self.svd()?.rank(tol))
    }

    /// Moore–Penrose pseudoinverse, truncating singular values at the rank
    /// cutoff.
    pub fn pseudoinverse(&self, tol: &Tolerances) -> Result<Mat> {
        let svd = self.svd()?;
        let r = svd.rank(tol);
        let mut out = DMatrix::zeros(self.cols(), self.rows());
        for k in 0..r {
            let inv = 1.0 / svd.singular_values[k];
            let vk = svd.v.data.column(k);
            let uk = svd.u.data.column(k);
            out += (vk * uk.adjoint()) * Complex64::new(inv, 0.0);
        }
        Ok(Mat::from_data(self.field, out))
    }

    /// Solve `x·self = rhs` for square invertible `self`.
    pub fn solve_left(&self, rhs: &Mat) -> Result<Mat> {
        if !self.is_square() || rhs.cols() != self.rows() {
            return Err(Error::Shape(format!(
                "cannot solve x·A = B with A {}x{} and B {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        // x·A = B  ⟺  Aᵀ·xᵀ = Bᵀ
        let lu = self.data.transpose().lu();
        let xt = lu
            .solve(&rhs.data.transpose())
            .ok_or_else(|| Error::Numeric("singular matrix in solve".into()))?;
        Ok(Mat::from_data(
            self.field.join(rhs.field),
            xt.transpose(),
        ))
    }

    /// Whether `self` and `other` agree within `eps_eq` (relative).
    pub fn approx_eq(&self, other: &Mat, tol: &Tolerances) -> bool {
        relative_residual(self, other) <= tol.eps_eq
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat<{}>{}x{} [", self.field, self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                let z = self.data[(i, j)];
                match self.field {
                    Field::Real => write!(f, "{:.6}", z.re)?,
                    Field::Complex => write!(f, "{:.6}{:+.6}i", z.re, z.im)?,
                }
            }
        }
        f.write_str("]")
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;

    /// Unchecked product; panics on shape mismatch. Fields are joined.
    fn mul(self, rhs: &'a Mat) -> Mat {
        Mat {
            field: self.field.join(rhs.field),
            data: &self.data * &rhs.data,
        }
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn add(self, rhs: &'a Mat) -> Mat {
        Mat {
            field: self.field.join(rhs.field),
            data: &self.data + &rhs.data,
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn sub(self, rhs: &'a Mat) -> Mat {
        Mat {
            field: self.field.join(rhs.field),
            data: &self.data - &rhs.data,
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        Mat {
            field: self.field,
            data: -&self.data,
        }
    }
}
