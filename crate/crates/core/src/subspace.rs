//! Finite-dimensional subspaces of K^n and their orthogonal projections.
//!
//! A subspace is identified by its projection matrix; the basis is a
//! canonical orthonormal representative kept for convenience. Projections
//! act on row vectors like every other operator here: for an orthonormal
//! basis `b₁..b_k` (columns of `basis`), `x·P = Σ ⟨x, b_j⟩ b_j`, i.e.
//! `P = conj(basis·basis*)`. Over ℝ this is the familiar `basis·basisᵀ`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{relative_residual, Mat, Tolerances};
use crate::scalar::Field;

#[derive(Clone)]
pub struct Subspace {
    basis: Mat,
    proj: Mat,
}

impl Subspace {
    /// Column span of `vectors` (each column is one vector of K^n).
    pub fn span(vectors: &Mat, tol: &Tolerances) -> Result<Subspace> {
        let n = vectors.rows();
        if vectors.cols() == 0 {
            return Ok(Subspace::zero(vectors.field(), n));
        }
        let svd = vectors.svd()?;
        let r = svd.rank(tol);
        Ok(Subspace::from_orthonormal(&svd.u.leading_columns(r)))
    }

    /// Canonicalize a subspace given by orthonormal columns.
    fn from_orthonormal(q: &Mat) -> Subspace {
        let n = q.rows();
        let k = q.cols();
        let field = q.field();
        if k == 0 {
            return Subspace::zero(field, n);
        }
        // The column-action projection depends only on the subspace, so a
        // pivoted QR of it yields a basis that does too (up to rounding).
        let p_col = q * &q.adjoint();
        let mut basis = pivoted_householder_basis(p_col.data(), k);
        fix_signs(&mut basis);
        let basis = Mat::from_data(field, basis);
        let proj = (&basis * &basis.adjoint()).conj();
        Subspace { basis, proj }
    }

    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace {
            basis: Mat::zeros(field, n, 0),
            proj: Mat::zeros(field, n, n),
        }
    }

    pub fn full(field: Field, n: usize) -> Subspace {
        Subspace {
            basis: Mat::identity(field, n),
            proj: Mat::identity(field, n),
        }
    }

    /// Span of the standard basis vectors `e_i` for `i` in `axes` (0-based).
    pub fn coordinate(field: Field, n: usize, axes: &[usize]) -> Subspace {
        let mut axes: Vec<usize> = axes.to_vec();
        axes.sort_unstable();
        axes.dedup();
        assert!(axes.iter().all(|&a| a < n), "axis out of range");
        let basis = Mat::from_fn(field, n, axes.len(), |i, j| {
            Complex64::new(if axes[j] == i { 1.0 } else { 0.0 }, 0.0)
        });
        let proj = Mat::from_fn(field, n, n, |i, j| {
            Complex64::new(if i == j && axes.contains(&i) { 1.0 } else { 0.0 }, 0.0)
        });
        Subspace { basis, proj }
    }

    /// `R(t)`: the image `{x·t}`, i.e. the span of the rows of `t`.
    pub fn range_space(t: &Mat, tol: &Tolerances) -> Result<Subspace> {
        require_square(t)?;
        let svd = t.svd()?;
        let r = svd.rank(tol);
        // Rows of t = U·S·V* lie in the span of the rows of V*, which are the
        // conjugates of V's columns.
        Ok(Subspace::from_orthonormal(&svd.v.leading_columns(r).conj()))
    }

    /// `Z(t) = {x : x·t = 0}`.
    pub fn kernel_space(t: &Mat, tol: &Tolerances) -> Result<Subspace> {
        require_square(t)?;
        let svd = t.svd()?;
        let r = svd.rank(tol);
        // conj(u_j)ᵀ·t = s_j·v_j*, which vanishes exactly for j ≥ rank.
        Ok(Subspace::from_orthonormal(&svd.u.trailing_columns(r).conj()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthonormal basis vectors as columns (`n × dim`).
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// The orthogonal projection `P_M` (row action).
    pub fn projection(&self) -> &Mat {
        &self.proj
    }

    /// Basis vector `j` as a row vector, ready to act on.
    pub fn basis_row(&self, j: usize) -> Mat {
        self.basis.column(j).transpose()
    }

    /// Re-tag as complex.
    pub fn to_complex(&self) -> Subspace {
        Subspace {
            basis: self.basis.to_complex(),
            proj: self.proj.to_complex(),
        }
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::Shape(format!(
                "subspaces live in K^{} and K^{}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// `self ⊆ other`, tested as `‖P_self·P_other − P_self‖ ≤ eps_eq`.
    pub fn leq(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        let lhs = &self.proj * &other.proj;
        Ok((&lhs - &self.proj).operator_norm() <= tol.eps_eq)
    }

    /// Subspace equality: projection equality within `eps_eq`.
    pub fn equals(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(false);
        }
        Ok((&self.proj - &other.proj).operator_norm() <= tol.eps_eq)
    }

    /// Operator-norm distance between the two projections (the sine of the
    /// largest principal angle when dimensions agree).
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        Ok(relative_residual(&self.proj, &other.proj))
    }

    pub fn orth_complement(&self, tol: &Tolerances) -> Result<Subspace> {
        let n = self.ambient_dim();
        let complement = &Mat::identity(self.field(), n) - &self.proj;
        Subspace::range_space(&complement, tol)
    }

    pub fn sum(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::span(&self.basis.hstack(&other.basis)?, tol)
    }

    pub fn intersect(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_ambient(other)?;
        let perp = self
            .orth_complement(tol)?
            .sum(&other.orth_complement(tol)?, tol)?;
        perp.orth_complement(tol)
    }

    /// Whether the row vector `x` lies in the subspace.
    pub fn contains_row(&self, x: &Mat, tol: &Tolerances) -> bool {
        let projected = x * &self.proj;
        (&projected - x).operator_norm() <= tol.eps_eq * x.operator_norm().max(1.0)
    }
}

fn require_square(t: &Mat) -> Result<()> {
    if !t.is_square() {
        return Err(Error::Shape(format!(
            "operator must be square, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    Ok(())
}

/// Leading `k` columns of `Q` in a Householder QR of `a` with column
/// pivoting. Pivot ties (relative 1e-10) go to the lowest column index so the
/// result does not depend on rounding noise.
fn pivoted_householder_basis(a: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    let m = a.nrows();
    let p = a.ncols();
    let mut work = a.clone();
    let mut reflectors: Vec<DVector<Complex64>> = Vec::with_capacity(k);
    for j in 0..k.min(p) {
        let norms: Vec<f64> = (j..p)
            .map(|c| work.view((j, c), (m - j, 1)).norm())
            .collect();
        let largest = norms.iter().copied().fold(0.0, f64::max);
        let pivot = j + norms
            .iter()
            .position(|&x| x >= largest * (1.0 - 1e-10))
            .unwrap_or(0);
        work.swap_columns(j, pivot);

        let mut v: DVector<Complex64> = work.view((j, j), (m - j, 1)).column(0).into_owned();
        let alpha = v.norm();
        if alpha == 0.0 {
            break;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        v[0] += phase * alpha;
        let vnorm = v.norm();
        v /= Complex64::new(vnorm, 0.0);

        let mut tail = work.view_mut((j, j), (m - j, p - j));
        let w = v.adjoint() * &tail;
        tail -= &v * w * Complex64::new(2.0, 0.0);
        reflectors.push(v);
    }

    let mut q = DMatrix::<Complex64>::identity(m, k);
    for (j, v) in reflectors.iter().enumerate().rev() {
        let mut tail = q.view_mut((j, 0), (m - j, k));
        let w = v.adjoint() * &tail;
        tail -= v * w * Complex64::new(2.0, 0.0);
    }
    q
}

/// Rotate each column so its first non-negligible entry is positive real.
fn fix_signs(basis: &mut DMatrix<Complex64>) {
    for mut col in basis.column_iter_mut() {
        let scale = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(&lead) = col.iter().find(|z| z.norm() > 1e-8 * scale) {
            let phase = lead.conj() / lead.norm();
            col.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in K^{}; basis {:?})", self.dim(), self.ambient_dim(), self.basis)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "{{0}} ⊂ K^{}", self.ambient_dim());
        }
        f.write_str("span{")?;
        for j in 0..self.dim() {
            if j > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for i in 0..self.ambient_dim() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                let z = self.basis.entry(i, j);
                if self.field() == Field::Real || z.im == 0.0 {
                    write!(f, "{:.4}", z.re)?;
                } else {
                    write!(f, "{:.4}{:+.4}i", z.re, z.im)?;
                }
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}
