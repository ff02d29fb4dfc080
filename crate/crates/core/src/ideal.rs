//! The categories 𝓛(𝒮), 𝓡(𝒮), 𝓕(H) and 𝓕(H′) as executable structures.
//!
//! Every morphism is a validated triple `(src, t, dst)` of two subspaces and
//! an operator. Objects are subspaces: `M` stands for the principal left
//! ideal `𝒮P_M`, the principal right ideal `P_M𝒮`, the subspace `M` itself,
//! or its Riesz image `M′`, depending on the category.
//!
//! The four categories come in two shapes:
//!
//! * *row side* (𝓛(𝒮), 𝓕(H)): `src⊥ ⊆ Z(t)` and `R(t) ⊆ dst`; `t` is stored
//!   as `P_src·t`; composition "f then g" carries `f.t·g.t`.
//! * *column side* (𝓡(𝒮), 𝓕(H′)): `dst⊥ ⊆ Z(t)` and `R(t) ⊆ src`; `t` is
//!   stored as `t·P_src`; composition "f then g" carries `g.t·f.t`.
//!
//! Composition is always written left to right: `f.compose(&g)` applies `f`
//! first.

use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{relative_residual, Mat, Tolerances};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Row,
    Column,
}

/// Which of the four categories a morphism belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    Left,
    Right,
    Fh,
    Dual,
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MorphismKind::Left => "left",
            MorphismKind::Right => "right",
            MorphismKind::Fh => "fh",
            MorphismKind::Dual => "dual",
        })
    }
}

/// Type-level tag for a category.
pub trait Category: Clone + Copy + fmt::Debug + Send + Sync + 'static {
    const SIDE: Side;
    const KIND: MorphismKind;
}

/// 𝓛(𝒮): principal left ideals `𝒮P_M`, morphisms `ρ(P_M, T, P_N)`.
#[derive(Clone, Copy, Debug)]
pub struct LeftIdeals;

/// 𝓡(𝒮): principal right ideals `P_M𝒮`, morphisms `λ(P_M, T, P_N)`.
#[derive(Clone, Copy, Debug)]
pub struct RightIdeals;

/// 𝓕(H): subspaces with linear maps `T|_M : M → N`.
#[derive(Clone, Copy, Debug)]
pub struct Subspaces;

/// 𝓕(H′): Riesz images `M′`, morphisms carried by the operator whose
/// transpose restricts to the map `M′ → N′`.
#[derive(Clone, Copy, Debug)]
pub struct DualSubspaces;

impl Category for LeftIdeals {
    const SIDE: Side = Side::Row;
    const KIND: MorphismKind = MorphismKind::Left;
}

impl Category for RightIdeals {
    const SIDE: Side = Side::Column;
    const KIND: MorphismKind = MorphismKind::Right;
}

impl Category for Subspaces {
    const SIDE: Side = Side::Row;
    const KIND: MorphismKind = MorphismKind::Fh;
}

impl Category for DualSubspaces {
    const SIDE: Side = Side::Column;
    const KIND: MorphismKind = MorphismKind::Dual;
}

/// An object of category `C`, keyed by its subspace.
#[derive(Clone, Debug)]
pub struct Object<C: Category> {
    space: Subspace,
    _category: PhantomData<C>,
}

pub type LeftObject = Object<LeftIdeals>;
pub type RightObject = Object<RightIdeals>;
pub type FhObject = Object<Subspaces>;
pub type DualObject = Object<DualSubspaces>;

impl<C: Category> Object<C> {
    pub fn new(space: Subspace) -> Self {
        Object {
            space,
            _category: PhantomData,
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn equals(&self, other: &Object<C>, tol: &Tolerances) -> Result<bool> {
        self.space.equals(&other.space, tol)
    }

    pub fn identity(&self) -> Morphism<C> {
        Morphism::identity(&self.space)
    }
}

/// A morphism of category `C`.
#[derive(Clone)]
pub struct Morphism<C: Category> {
    src: Subspace,
    t: Mat,
    dst: Subspace,
    _category: PhantomData<C>,
}

pub type LeftMorphism = Morphism<LeftIdeals>;
pub type RightMorphism = Morphism<RightIdeals>;
pub type FhMorphism = Morphism<Subspaces>;
pub type DualMorphism = Morphism<DualSubspaces>;

/// `f = q·u·j` with `q` a retraction, `u` an isomorphism and `j` an inclusion.
#[derive(Clone, Debug)]
pub struct NormalFactorization<C: Category> {
    pub q: Morphism<C>,
    pub u: Morphism<C>,
    pub j: Morphism<C>,
}

impl<C: Category> NormalFactorization<C> {
    /// `q` then `u` then `j`.
    pub fn reconstruct(&self, tol: &Tolerances) -> Result<Morphism<C>> {
        self.q.compose(&self.u, tol)?.compose(&self.j, tol)
    }

    /// The epimorphic component `q·u`.
    pub fn epimorphic(&self, tol: &Tolerances) -> Result<Morphism<C>> {
        self.q.compose(&self.u, tol)
    }
}

impl<C: Category> Morphism<C> {
    /// Validate and canonicalize a triple.
    ///
    /// Rejects the triple if either defining inclusion fails; the error names
    /// the inclusion.
    pub fn new(src: Subspace, t: Mat, dst: Subspace, tol: &Tolerances) -> Result<Self> {
        let n = src.ambient_dim();
        if dst.ambient_dim() != n || t.rows() != n || t.cols() != n {
            return Err(Error::Shape(format!(
                "morphism needs an {n}x{n} operator between subspaces of K^{n}; got {}x{} into K^{}",
                t.rows(),
                t.cols(),
                dst.ambient_dim()
            )));
        }
        let p_src = src.projection();
        let p_dst = dst.projection();
        let (kernel_side, range_side, kernel_label, range_label) = match C::SIDE {
            Side::Row => (&(p_src * &t), &(&t * p_dst), "src⊥ ⊆ Z(T)", "R(T) ⊆ dst"),
            Side::Column => (&(p_dst * &t), &(&t * p_src), "dst⊥ ⊆ Z(T)", "R(T) ⊆ src"),
        };
        let residual = relative_residual(kernel_side, &t);
        if residual > tol.eps_eq {
            return Err(Error::Constraint {
                inclusion: kernel_label,
                residual,
            });
        }
        let residual = relative_residual(range_side, &t);
        if residual > tol.eps_eq {
            return Err(Error::Constraint {
                inclusion: range_label,
                residual,
            });
        }
        Ok(Morphism::canonical(src, t, dst))
    }

    /// Build without validation, applying the canonical form only. The
    /// caller guarantees the inclusions hold exactly in exact arithmetic.
    fn canonical(src: Subspace, t: Mat, dst: Subspace) -> Self {
        let t = match C::SIDE {
            Side::Row => src.projection() * &t,
            Side::Column => &t * src.projection(),
        };
        let field = t.field().join(src.field()).join(dst.field());
        Morphism {
            src,
            t: t.promote(field),
            dst,
            _category: PhantomData,
        }
    }

    /// `1_M`, carried by `P_M`.
    pub fn identity(m: &Subspace) -> Self {
        Morphism {
            src: m.clone(),
            t: m.projection().clone(),
            dst: m.clone(),
            _category: PhantomData,
        }
    }

    /// The inclusion `M ↪ N`, carried by `P_M`.
    pub fn inclusion(m: &Subspace, n: &Subspace, tol: &Tolerances) -> Result<Self> {
        require_leq(m, n, tol)?;
        Ok(Morphism {
            src: m.clone(),
            t: m.projection().clone(),
            dst: n.clone(),
            _category: PhantomData,
        })
    }

    /// The unique norm-one retraction `N ↠ M` of the inclusion `M ↪ N`,
    /// carried by `P_M`.
    ///
    /// Other retractions exist (oblique idempotents onto `M`); they have norm
    /// greater than one and can be built with [`Morphism::new`].
    pub fn retraction(m: &Subspace, n: &Subspace, tol: &Tolerances) -> Result<Self> {
        require_leq(m, n, tol)?;
        Ok(Morphism::canonical(n.clone(), m.projection().clone(), m.clone()))
    }

    /// The zero morphism `M → N`.
    pub fn zero(m: &Subspace, n: &Subspace) -> Self {
        let k = m.ambient_dim();
        Morphism {
            src: m.clone(),
            t: Mat::zeros(m.field().join(n.field()), k, k),
            dst: n.clone(),
            _category: PhantomData,
        }
    }

    pub fn kind(&self) -> MorphismKind {
        C::KIND
    }

    pub fn src(&self) -> &Subspace {
        &self.src
    }

    pub fn dst(&self) -> &Subspace {
        &self.dst
    }

    /// The canonical operator.
    pub fn matrix(&self) -> &Mat {
        &self.t
    }

    pub fn into_parts(self) -> (Subspace, Mat, Subspace) {
        (self.src, self.t, self.dst)
    }

    /// "`self`, then `g`".
    pub fn compose(&self, g: &Morphism<C>, tol: &Tolerances) -> Result<Self> {
        if !self.dst.equals(&g.src, tol)? {
            return Err(Error::Composition {
                codomain: self.dst.to_string(),
                domain: g.src.to_string(),
            });
        }
        let t = match C::SIDE {
            Side::Row => &self.t * &g.t,
            Side::Column => &g.t * &self.t,
        };
        Ok(Morphism::canonical(self.src.clone(), t, g.dst.clone()))
    }

    /// Same source, same target and matching canonical operators.
    pub fn approx_eq(&self, other: &Morphism<C>, tol: &Tolerances) -> bool {
        self.residual(other, tol) <= tol.eps_eq
    }

    /// Relative operator residual, or 1 if the objects disagree.
    pub fn residual(&self, other: &Morphism<C>, tol: &Tolerances) -> f64 {
        let same_objects = self.src.equals(&other.src, tol).unwrap_or(false)
            && self.dst.equals(&other.dst, tol).unwrap_or(false);
        if !same_objects {
            return 1.0;
        }
        relative_residual(&self.t, &other.t)
    }

    /// `Z(t)⊥` on the row side, `R(t)` on the column side: where the map
    /// is an isomorphism onto its image, taken inside the source.
    fn coimage(&self, tol: &Tolerances) -> Result<Subspace> {
        match C::SIDE {
            Side::Row => Subspace::kernel_space(&self.t, tol)?.orth_complement(tol),
            Side::Column => Subspace::range_space(&self.t, tol),
        }
    }

    /// The image inside the target: `R(t)` on the row side, `Z(t)⊥` on the
    /// column side.
    fn image(&self, tol: &Tolerances) -> Result<Subspace> {
        match C::SIDE {
            Side::Row => Subspace::range_space(&self.t, tol),
            Side::Column => Subspace::kernel_space(&self.t, tol)?.orth_complement(tol),
        }
    }

    /// Row side: `Z(t) = src⊥` and `R(t) = dst`. Column side: `Z(t) = dst⊥`
    /// and `R(t) = src`. Both say the restriction is bijective.
    pub fn is_isomorphism(&self, tol: &Tolerances) -> Result<bool> {
        let (kernel_perp_target, range_target) = match C::SIDE {
            Side::Row => (&self.src, &self.dst),
            Side::Column => (&self.dst, &self.src),
        };
        let kernel = Subspace::kernel_space(&self.t, tol)?;
        let range = Subspace::range_space(&self.t, tol)?;
        Ok(kernel.equals(&kernel_perp_target.orth_complement(tol)?, tol)?
            && range.equals(range_target, tol)?)
    }

    /// Whether this is the inclusion `src ↪ dst`.
    pub fn is_inclusion(&self, tol: &Tolerances) -> Result<bool> {
        if !self.src.leq(&self.dst, tol)? {
            return Ok(false);
        }
        Ok(relative_residual(&self.t, self.src.projection()) <= tol.eps_eq)
    }

    /// Whether this is a right inverse of the inclusion `dst ↪ src`
    /// (not necessarily the norm-one one).
    pub fn is_retraction(&self, tol: &Tolerances) -> Result<bool> {
        if !self.dst.leq(&self.src, tol)? {
            return Ok(false);
        }
        let j = Morphism::<C>::inclusion(&self.dst, &self.src, tol)?;
        Ok(j.compose(self, tol)?.approx_eq(&Morphism::identity(&self.dst), tol))
    }

    /// `q = (src, P_U, U)`, `u = (U, t, V)`, `j = (V, P_V, dst)` where `U`
    /// is the coimage and `V` the image of `t` (row side); the column side
    /// is the mirror image.
    pub fn normal_factorize(&self, tol: &Tolerances) -> Result<NormalFactorization<C>> {
        let middle_src = self.coimage(tol)?;
        let middle_dst = self.image(tol)?;
        let q = Morphism::canonical(
            self.src.clone(),
            middle_src.projection().clone(),
            middle_src.clone(),
        );
        let u = Morphism::canonical(middle_src, self.t.clone(), middle_dst.clone());
        let j = Morphism::canonical(
            middle_dst.clone(),
            middle_dst.projection().clone(),
            self.dst.clone(),
        );
        Ok(NormalFactorization { q, u, j })
    }

    /// `f° = q·u`, ending at the image of `f`.
    pub fn epimorphic_component(&self, tol: &Tolerances) -> Result<Self> {
        self.normal_factorize(tol)?.epimorphic(tol)
    }

    fn check_same_homset(&self, g: &Morphism<C>, tol: &Tolerances) -> Result<()> {
        if !self.src.equals(&g.src, tol)? || !self.dst.equals(&g.dst, tol)? {
            return Err(Error::HomSet(format!(
                "({} → {}) vs ({} → {})",
                self.src, self.dst, g.src, g.dst
            )));
        }
        Ok(())
    }

    pub fn add(&self, g: &Morphism<C>, tol: &Tolerances) -> Result<Self> {
        self.check_same_homset(g, tol)?;
        Ok(Morphism::canonical(
            self.src.clone(),
            &self.t + &g.t,
            self.dst.clone(),
        ))
    }

    pub fn scale(&self, k: Scalar) -> Self {
        Morphism {
            src: self.src.clone(),
            t: self.t.scale(k),
            dst: self.dst.clone(),
            _category: PhantomData,
        }
    }

    /// The hom-set norm, `‖t‖`.
    pub fn norm(&self) -> f64 {
        self.t.operator_norm()
    }
}

impl FhMorphism {
    /// The linear map `T|_M : M → N` applied to a row vector of `M`.
    pub fn apply(&self, x: &Mat) -> Mat {
        x * &self.t
    }
}

fn require_leq(m: &Subspace, n: &Subspace, tol: &Tolerances) -> Result<()> {
    if !m.leq(n, tol)? {
        return Err(Error::Order {
            sub: m.to_string(),
            sup: n.to_string(),
        });
    }
    Ok(())
}

impl<C: Category> fmt::Debug for Morphism<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct(match C::KIND {
            MorphismKind::Left => "LeftMorphism",
            MorphismKind::Right => "RightMorphism",
            MorphismKind::Fh => "FhMorphism",
            MorphismKind::Dual => "DualMorphism",
        })
        .field("src", &format_args!("{}", self.src))
        .field("t", &self.t)
        .field("dst", &format_args!("{}", self.dst))
        .finish()
    }
}

/// `T ∈ 𝒮P_M ⟺ R(T) ⊆ M`.
pub fn in_left_ideal(t: &Mat, m: &Subspace, tol: &Tolerances) -> Result<bool> {
    Subspace::range_space(t, tol)?.leq(m, tol)
}

/// `T ∈ P_M𝒮 ⟺ M⊥ ⊆ Z(T)`.
pub fn in_right_ideal(t: &Mat, m: &Subspace, tol: &Tolerances) -> Result<bool> {
    m.orth_complement(tol)?.leq(&Subspace::kernel_space(t, tol)?, tol)
}

/// `𝒮a ⊆ 𝒮b ⟺ R(a) ⊆ R(b)`.
pub fn principal_left_leq(a: &Mat, b: &Mat, tol: &Tolerances) -> Result<bool> {
    Subspace::range_space(a, tol)?.leq(&Subspace::range_space(b, tol)?, tol)
}

/// `a𝒮 ⊆ b𝒮 ⟺ Z(b) ⊆ Z(a)`.
pub fn principal_right_leq(a: &Mat, b: &Mat, tol: &Tolerances) -> Result<bool> {
    Subspace::kernel_space(b, tol)?.leq(&Subspace::kernel_space(a, tol)?, tol)
}
