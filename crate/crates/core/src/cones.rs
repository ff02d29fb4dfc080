//! Normal cones represented by their generating operators.
//!
//! The cone generated by `T` has vertex `R(T)` and component at `M`:
//!
//! * in 𝓕(H): `T|_M : M → R(T)`, carried by `P_M·T`;
//! * in 𝓛(𝒮): `ρ(P_M, P_M·T, P_{R(T)})`;
//! * in 𝓡(𝒮): `λ(P_M, (P_M·T)*, P_{R(T)})`, the image of the left cone
//!   under `ρ ↦ λ(·, T*, ·)`.
//!
//! Components are computed on demand; the generator determines the cone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{FhMorphism, LeftMorphism, RightMorphism};
use crate::linalg::{relative_residual, Mat, Tolerances};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Fh,
    Left,
    Right,
}

/// A component of a cone: a morphism in the cone's category.
#[derive(Clone, Debug)]
pub enum Component {
    Fh(FhMorphism),
    Left(LeftMorphism),
    Right(RightMorphism),
}

impl Component {
    pub fn flavor(&self) -> Flavor {
        match self {
            Component::Fh(_) => Flavor::Fh,
            Component::Left(_) => Flavor::Left,
            Component::Right(_) => Flavor::Right,
        }
    }

    pub fn src(&self) -> &Subspace {
        match self {
            Component::Fh(f) => f.src(),
            Component::Left(f) => f.src(),
            Component::Right(f) => f.src(),
        }
    }

    pub fn dst(&self) -> &Subspace {
        match self {
            Component::Fh(f) => f.dst(),
            Component::Left(f) => f.dst(),
            Component::Right(f) => f.dst(),
        }
    }

    pub fn matrix(&self) -> &Mat {
        match self {
            Component::Fh(f) => f.matrix(),
            Component::Left(f) => f.matrix(),
            Component::Right(f) => f.matrix(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.matrix().operator_norm()
    }

    /// "`self`, then `g`" in the shared category.
    pub fn compose(&self, g: &Component, tol: &Tolerances) -> Result<Component> {
        Ok(match (self, g) {
            (Component::Fh(f), Component::Fh(g)) => Component::Fh(f.compose(g, tol)?),
            (Component::Left(f), Component::Left(g)) => Component::Left(f.compose(g, tol)?),
            (Component::Right(f), Component::Right(g)) => Component::Right(f.compose(g, tol)?),
            _ => return Err(flavor_mismatch(self.flavor(), g.flavor())),
        })
    }

    pub fn epimorphic_component(&self, tol: &Tolerances) -> Result<Component> {
        Ok(match self {
            Component::Fh(f) => Component::Fh(f.epimorphic_component(tol)?),
            Component::Left(f) => Component::Left(f.epimorphic_component(tol)?),
            Component::Right(f) => Component::Right(f.epimorphic_component(tol)?),
        })
    }

    pub fn is_isomorphism(&self, tol: &Tolerances) -> Result<bool> {
        match self {
            Component::Fh(f) => f.is_isomorphism(tol),
            Component::Left(f) => f.is_isomorphism(tol),
            Component::Right(f) => f.is_isomorphism(tol),
        }
    }

    /// Relative residual against another component, 1 on object mismatch.
    pub fn residual(&self, other: &Component, tol: &Tolerances) -> f64 {
        match (self, other) {
            (Component::Fh(f), Component::Fh(g)) => f.residual(g, tol),
            (Component::Left(f), Component::Left(g)) => f.residual(g, tol),
            (Component::Right(f), Component::Right(g)) => f.residual(g, tol),
            _ => 1.0,
        }
    }

    pub fn approx_eq(&self, other: &Component, tol: &Tolerances) -> bool {
        self.residual(other, tol) <= tol.eps_eq
    }
}

fn flavor_mismatch(a: Flavor, b: Flavor) -> Error {
    Error::Invalid(format!("cone flavors differ: {a:?} vs {b:?}"))
}

/// A normal cone, stored as its generator.
#[derive(Clone, Debug)]
pub struct Cone {
    flavor: Flavor,
    gen: Mat,
    vertex: Subspace,
}

impl Cone {
    pub fn new(flavor: Flavor, gen: Mat, tol: &Tolerances) -> Result<Cone> {
        let vertex = Subspace::range_space(&gen, tol)?;
        Ok(Cone {
            flavor,
            gen,
            vertex,
        })
    }

    /// The cone with vertex `N` whose component at `N` is `1_N`, generated
    /// by `P_N`.
    pub fn identity_at(flavor: Flavor, n: &Subspace) -> Cone {
        Cone {
            flavor,
            gen: n.projection().clone(),
            vertex: n.clone(),
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn generator(&self) -> &Mat {
        &self.gen
    }

    pub fn vertex(&self) -> &Subspace {
        &self.vertex
    }

    pub fn ambient_dim(&self) -> usize {
        self.gen.rows()
    }

    pub fn field(&self) -> Field {
        self.gen.field()
    }

    /// The component at `m`.
    pub fn component(&self, m: &Subspace, tol: &Tolerances) -> Result<Component> {
        if m.ambient_dim() != self.ambient_dim() {
            return Err(Error::Shape(format!(
                "cone lives on K^{}, subspace on K^{}",
                self.ambient_dim(),
                m.ambient_dim()
            )));
        }
        let restricted = m.projection() * &self.gen;
        let (src, dst) = (m.clone(), self.vertex.clone());
        Ok(match self.flavor {
            Flavor::Fh => Component::Fh(FhMorphism::new(src, restricted, dst, tol)?),
            Flavor::Left => Component::Left(LeftMorphism::new(src, restricted, dst, tol)?),
            Flavor::Right => {
                Component::Right(RightMorphism::new(src, restricted.adjoint(), dst, tol)?)
            }
        })
    }

    /// The cone law `j·γ(n) = γ(m)` for the inclusion `j : m ↪ n`.
    ///
    /// Fails with an order error unless `m ⊆ n`.
    pub fn compatibility_residual(
        &self,
        m: &Subspace,
        n: &Subspace,
        tol: &Tolerances,
    ) -> Result<f64> {
        let at_n = self.component(n, tol)?;
        let at_m = self.component(m, tol)?;
        let composed = match self.flavor {
            Flavor::Fh => Component::Fh(FhMorphism::inclusion(m, n, tol)?),
            Flavor::Left => Component::Left(LeftMorphism::inclusion(m, n, tol)?),
            Flavor::Right => Component::Right(RightMorphism::inclusion(m, n, tol)?),
        }
        .compose(&at_n, tol)?;
        Ok(composed.residual(&at_m, tol))
    }

    pub fn check_compatibility(&self, m: &Subspace, n: &Subspace, tol: &Tolerances) -> Result<bool> {
        Ok(self.compatibility_residual(m, n, tol)? <= tol.eps_eq)
    }

    /// A subspace at which the component is an isomorphism onto the vertex:
    /// `Z(T)⊥`.
    pub fn normal_witness(&self, tol: &Tolerances) -> Result<Subspace> {
        Subspace::kernel_space(&self.gen, tol)?.orth_complement(tol)
    }

    fn check_compatible(&self, other: &Cone) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(flavor_mismatch(self.flavor, other.flavor));
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::Shape(format!(
                "cones on K^{} and K^{}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// The product cone, generated by `T₁·T₂`.
    pub fn product(&self, other: &Cone, tol: &Tolerances) -> Result<Cone> {
        self.check_compatible(other)?;
        Cone::new(self.flavor, &self.gen * &other.gen, tol)
    }

    /// The product evaluated pointwise at `m`: `γ(m)` followed by the
    /// epimorphic component of `σ(c_γ)`.
    pub fn pointwise_product_component(
        &self,
        other: &Cone,
        m: &Subspace,
        tol: &Tolerances,
    ) -> Result<Component> {
        self.check_compatible(other)?;
        let first = self.component(m, tol)?;
        let second = other.component(&self.vertex, tol)?.epimorphic_component(tol)?;
        first.compose(&second, tol)
    }

    /// Reconstruct a cone from its components on the coordinate lines of a
    /// basis (columns of `basis`), via `T(b) = γ(⟨b⟩)(b)`, then check every
    /// sample against the reconstructed cone.
    pub fn from_assignment(
        flavor: Flavor,
        basis: &Mat,
        samples: &[Component],
        tol: &Tolerances,
    ) -> Result<Cone> {
        let n = basis.rows();
        if !basis.is_square() {
            return Err(Error::Shape(format!(
                "reconstruction basis must be {n}x{n}, got {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        if let Some(bad) = samples.iter().find(|s| s.flavor() != flavor) {
            return Err(flavor_mismatch(flavor, bad.flavor()));
        }

        let field = samples
            .iter()
            .fold(basis.field(), |acc, s| acc.join(s.matrix().field()));
        let rows = basis.transpose().promote(field);
        let mut image_rows = Vec::with_capacity(n);
        for i in 0..n {
            let b = rows.row(i);
            let line = Subspace::span(&b.transpose(), tol)?;
            if line.dim() != 1 {
                return Err(Error::Reconstruction(format!("basis vector {i} is zero")));
            }
            let sample = samples
                .iter()
                .find(|s| s.src().equals(&line, tol).unwrap_or(false))
                .ok_or_else(|| {
                    Error::Reconstruction(format!("no component supplied at the line {line}"))
                })?;
            let restricted = match flavor {
                Flavor::Fh | Flavor::Left => sample.matrix().clone(),
                Flavor::Right => sample.matrix().adjoint(),
            };
            image_rows.push(&b * &restricted);
        }
        let image_data = nalgebra::DMatrix::from_fn(n, n, |i, j| image_rows[i].entry(0, j));
        let images = Mat::from_data(field, image_data);
        let gen = rows.solve_left_of(&images)?;
        let cone = Cone::new(flavor, gen, tol)?;

        for (idx, sample) in samples.iter().enumerate() {
            let expected = cone.component(sample.src(), tol)?;
            let residual = expected.residual(sample, tol);
            if residual > tol.eps_eq {
                return Err(Error::Reconstruction(format!(
                    "sample {idx} at {} is inconsistent with the reconstructed cone (residual {residual:.3e})",
                    sample.src()
                )));
            }
        }
        Ok(cone)
    }
}

impl Mat {
    /// `X` with `self·X = rhs` for square invertible `self`.
    fn solve_left_of(&self, rhs: &Mat) -> Result<Mat> {
        // self·X = rhs  ⟺  Xᵀ·selfᵀ = rhsᵀ
        Ok(self.transpose().solve_left(&rhs.transpose())?.transpose())
    }
}

/// An element of the normed algebra of bounded cones, with its bound
/// `α = ‖T‖`.
#[derive(Clone, Debug)]
pub struct BoundedCone {
    cone: Cone,
    alpha: f64,
}

impl BoundedCone {
    pub fn new(cone: Cone) -> Self {
        let alpha = cone.generator().operator_norm();
        BoundedCone { cone, alpha }
    }

    /// `T ↦ ρ^T` (left flavor) or `T ↦ λ^{T*}` (right flavor); the latter is
    /// conjugate-linear.
    pub fn embed(flavor: Flavor, t: &Mat, tol: &Tolerances) -> Result<Self> {
        Ok(BoundedCone::new(Cone::new(flavor, t.clone(), tol)?))
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn bound(&self) -> f64 {
        self.alpha
    }

    pub fn norm(&self) -> f64 {
        self.alpha
    }

    /// Whether `‖γ(m)‖ ≤ α` at `m`.
    pub fn check_bound_at(&self, m: &Subspace, tol: &Tolerances) -> Result<bool> {
        let norm = self.cone.component(m, tol)?.norm();
        Ok(norm <= self.alpha + tol.eps_eq * self.alpha.max(1.0))
    }

    pub fn add(&self, other: &BoundedCone, tol: &Tolerances) -> Result<Self> {
        self.cone.check_compatible(&other.cone)?;
        let gen = self.cone.generator() + other.cone.generator();
        Ok(BoundedCone::new(Cone::new(self.cone.flavor, gen, tol)?))
    }

    /// Pointwise scaling of every component by `k`. For right cones the
    /// generator picks up `k̄`, since `k·(P_M T)* = (P_M k̄T)*`.
    pub fn scale(&self, k: Scalar, tol: &Tolerances) -> Result<Self> {
        let factor = match self.cone.flavor {
            Flavor::Fh | Flavor::Left => k,
            Flavor::Right => k.conj(),
        };
        let gen = self.cone.generator().scale(factor);
        Ok(BoundedCone::new(Cone::new(self.cone.flavor, gen, tol)?))
    }

    pub fn multiply(&self, other: &BoundedCone, tol: &Tolerances) -> Result<Self> {
        Ok(BoundedCone::new(self.cone.product(&other.cone, tol)?))
    }
}

/// The truncation of `e_k ↦ k·e₁` to K^n: first column `(1, 2, …, n)`.
pub fn l2_truncation(field: Field, n: usize) -> Mat {
    Mat::from_fn(field, n, n, |i, j| {
        num_complex::Complex64::new(if j == 0 { (i + 1) as f64 } else { 0.0 }, 0.0)
    })
}

/// `‖T_n‖` for each `n` in `dims`.
pub fn boundedness_profile(field: Field, dims: &[usize]) -> Vec<f64> {
    dims.iter()
        .map(|&n| l2_truncation(field, n).operator_norm())
        .collect()
}

/// Whether a norm profile strictly increases.
pub fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0])
}

/// Relative residual between the components of two cones at `m`, compared
/// as operators only (vertices may legitimately differ for sums).
pub fn component_matrix_residual(a: &Component, b: &Component) -> f64 {
    relative_residual(a.matrix(), b.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn axes(idx: &[usize]) -> Subspace {
        Subspace::coordinate(Field::Real, 3, idx)
    }

    fn nilpotent(row: usize, col: usize, value: f64) -> Mat {
        let mut rows = [[0.0; 3]; 3];
        rows[row][col] = value;
        Mat::from_real_rows(&[&rows[0], &rows[1], &rows[2]])
    }

    #[test]
    fn identity_cone_has_identity_component_at_vertex() {
        let n = axes(&[0, 2]);
        for flavor in [Flavor::Fh, Flavor::Left, Flavor::Right] {
            let cone = Cone::identity_at(flavor, &n);
            let comp = cone.component(&n, &tol()).unwrap();
            assert!(relative_residual(comp.matrix(), n.projection()) < 1e-14);
            assert!(comp.is_isomorphism(&tol()).unwrap());
        }
    }

    #[test]
    fn component_maps_e1_to_3e3() {
        let cone = Cone::new(Flavor::Fh, nilpotent(0, 2, 3.0), &tol()).unwrap();
        let comp = cone.component(&axes(&[0]), &tol()).unwrap();
        let Component::Fh(f) = comp else { unreachable!() };
        let e1 = Mat::from_real_rows(&[&[1., 0., 0.]]);
        assert_eq!(f.apply(&e1), Mat::from_real_rows(&[&[0., 0., 3.]]));
        assert!(f.dst().equals(&axes(&[2]), &tol()).unwrap());
    }

    #[test]
    fn truncated_l2_component_at_last_line() {
        for n in [1usize, 3, 6] {
            let t = l2_truncation(Field::Real, n);
            let cone = Cone::new(Flavor::Fh, t, &tol()).unwrap();
            let line = Subspace::coordinate(Field::Real, n, &[n - 1]);
            let Component::Fh(f) = cone.component(&line, &tol()).unwrap() else {
                unreachable!()
            };
            let en = Mat::from_fn(Field::Real, 1, n, |_, j| {
                num_complex::Complex64::new(if j == n - 1 { 1.0 } else { 0.0 }, 0.0)
            });
            let image = f.apply(&en);
            assert!((image.entry(0, 0).re - n as f64).abs() < 1e-14);
            assert!((1..n).all(|j| image.entry(0, j).norm() == 0.0));
        }
    }

    #[test]
    fn compatibility_on_nested_pair() {
        let t = Mat::from_real_rows(&[&[1., 2., 0.], &[0., 1., 1.], &[3., 0., 1.]]);
        for flavor in [Flavor::Fh, Flavor::Left, Flavor::Right] {
            let cone = Cone::new(flavor, t.clone(), &tol()).unwrap();
            assert!(cone.check_compatibility(&axes(&[0]), &axes(&[0, 1]), &tol()).unwrap());
            assert!(cone.check_compatibility(&axes(&[1]), &axes(&[1]), &tol()).unwrap());
            assert!(matches!(
                cone.check_compatibility(&axes(&[0]), &axes(&[1, 2]), &tol()),
                Err(Error::Order { .. })
            ));
        }
    }

    #[test]
    fn product_of_nilpotents() {
        let c1 = Cone::new(Flavor::Left, nilpotent(0, 1, 1.0), &tol()).unwrap();
        let c2 = Cone::new(Flavor::Left, nilpotent(1, 2, 3.0), &tol()).unwrap();
        let prod = c1.product(&c2, &tol()).unwrap();
        assert_eq!(prod.generator(), &nilpotent(0, 2, 3.0));
        let m = axes(&[0]);
        let pointwise = c1.pointwise_product_component(&c2, &m, &tol()).unwrap();
        assert!(pointwise.approx_eq(&prod.component(&m, &tol()).unwrap(), &tol()));
    }

    #[test]
    fn projection_acts_as_right_identity() {
        let t1 = nilpotent(0, 1, 2.0);
        let p = axes(&[1, 2]);
        let c1 = Cone::new(Flavor::Left, t1.clone(), &tol()).unwrap();
        let cp = Cone::identity_at(Flavor::Left, &p);
        let prod = c1.product(&cp, &tol()).unwrap();
        assert!(relative_residual(prod.generator(), &t1) < 1e-14);
    }

    #[test]
    fn reconstruction_round_trip_and_rejection() {
        let t = Mat::from_real_rows(&[&[1., 2., 0.], &[0., 0., 1.], &[3., 0., 1.]]);
        let basis = Mat::from_real_rows(&[&[1., 1., 0.], &[0., 1., 1.], &[1., 0., 2.]]);
        for flavor in [Flavor::Fh, Flavor::Left, Flavor::Right] {
            let cone = Cone::new(flavor, t.clone(), &tol()).unwrap();
            let samples: Vec<Component> = (0..3)
                .map(|j| {
                    let line = Subspace::span(&basis.column(j), &tol()).unwrap();
                    cone.component(&line, &tol()).unwrap()
                })
                .collect();
            let rebuilt = Cone::from_assignment(flavor, &basis, &samples, &tol()).unwrap();
            assert!(relative_residual(rebuilt.generator(), &t) < 1e-12, "{flavor:?}");

            let mut noisy = samples.clone();
            let bumped = &noisy[1].matrix().clone() + &noisy[1].matrix().scale(Scalar::real(1e-3));
            noisy[1] = match flavor {
                Flavor::Fh => Component::Fh(
                    FhMorphism::new(noisy[1].src().clone(), bumped, noisy[1].dst().clone(), &tol()).unwrap(),
                ),
                Flavor::Left => Component::Left(
                    LeftMorphism::new(noisy[1].src().clone(), bumped, noisy[1].dst().clone(), &tol()).unwrap(),
                ),
                Flavor::Right => Component::Right(
                    RightMorphism::new(noisy[1].src().clone(), bumped, noisy[1].dst().clone(), &tol()).unwrap(),
                ),
            };
            // A single perturbed line is absorbed; add a dependent sample to expose it.
            let line = Subspace::span(&(&basis.column(1) + &basis.column(2)), &tol()).unwrap();
            noisy.push(cone.component(&line, &tol()).unwrap());
            assert!(matches!(
                Cone::from_assignment(flavor, &basis, &noisy, &tol()),
                Err(Error::Reconstruction(_))
            ));
        }
    }

    #[test]
    fn missing_line_is_reported() {
        let cone = Cone::new(Flavor::Left, Mat::identity(Field::Real, 2), &tol()).unwrap();
        let basis = Mat::identity(Field::Real, 2);
        let only = vec![cone.component(&Subspace::coordinate(Field::Real, 2, &[0]), &tol()).unwrap()];
        assert!(matches!(
            Cone::from_assignment(Flavor::Left, &basis, &only, &tol()),
            Err(Error::Reconstruction(_))
        ));
    }

    #[test]
    fn bounded_cone_norm_and_bound() {
        let t = nilpotent(0, 1, 2.0);
        let b = BoundedCone::embed(Flavor::Left, &t, &tol()).unwrap();
        assert!((b.norm() - 2.0).abs() < 1e-14);
        assert!(b.check_bound_at(&axes(&[0, 2]), &tol()).unwrap());
        let witness = b.cone().normal_witness(&tol()).unwrap();
        assert!((b.cone().component(&witness, &tol()).unwrap().norm() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn right_scaling_conjugates_generator() {
        let t = Mat::identity(Field::Complex, 2);
        let b = BoundedCone::embed(Flavor::Right, &t, &tol()).unwrap();
        let k = Scalar::complex(0.0, 1.0);
        let scaled = b.scale(k, &tol()).unwrap();
        assert!((scaled.cone().generator().entry(0, 0) - num_complex::Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn profile_values() {
        let p = boundedness_profile(Field::Real, &[1, 3, 10]);
        assert!((p[0] - 1.0).abs() < 1e-14);
        assert!((p[1] - 14f64.sqrt()).abs() < 1e-13);
        assert!((p[2] - 385f64.sqrt()).abs() < 1e-12);
        assert!(strictly_increasing(&p));
    }
}
