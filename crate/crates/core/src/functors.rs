//! The isomorphisms between 𝓛(𝒮), 𝓕(H), 𝓕(H′) and 𝓡(𝒮).
//!
//! Every functor sends the object keyed by `M` to the object keyed by `M`
//! (𝒮P_M ↦ M ↦ M′ ↦ P_M𝒮); only the morphism carriers change.
//!
//! A dual morphism `M′ → N′` is stored through its Riesz carrier: the
//! operator `A` whose transpose `A′ : f ↦ f∘A` restricts to the map. Since
//! `f_m∘A = f_{m·A*}`, the induced map on Riesz vectors is `m ↦ m·A*`.

use crate::error::Result;
use crate::ideal::{
    Category, DualMorphism, DualSubspaces, FhMorphism, LeftIdeals, LeftMorphism, Morphism, Object,
    RightIdeals, RightMorphism, Subspaces,
};
use crate::linalg::{Mat, Tolerances};
use crate::subspace::Subspace;

use num_complex::Complex64;

/// How a functor acts on scalars within a hom-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linearity {
    /// `F(k·f) = k·F(f)`
    Linear,
    /// `F(k·f) = k̄·F(f)`
    ConjugateLinear,
}

pub trait Functor: Sync {
    type Source: Category;
    type Target: Category;

    const NAME: &'static str;
    const LINEARITY: Linearity;

    fn object(&self, m: &Object<Self::Source>) -> Object<Self::Target> {
        Object::new(m.space().clone())
    }

    fn morphism(
        &self,
        f: &Morphism<Self::Source>,
        tol: &Tolerances,
    ) -> Result<Morphism<Self::Target>>;
}

/// 𝓛(𝒮) → 𝓕(H): `ρ(P_M, T, P_N) ↦ T|_M`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeftToFh;

/// 𝓕(H) → 𝓛(𝒮): `T ↦ ρ(P_M, P_M·T·P_N, P_N)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FhToLeft;

/// 𝓕(H) → 𝓕(H′): `T ↦ (P_N·T*·P_M)′|_{M′}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FhToDual;

/// Inverse of [`FhToDual`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DualToFh;

/// 𝓡(𝒮) → 𝓕(H′): `λ(P_M, T, P_N) ↦ T′|_{M′}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RightToDual;

/// Inverse of [`RightToDual`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DualToRight;

/// 𝓛(𝒮) → 𝓡(𝒮): `ρ(P_M, T, P_N) ↦ λ(P_M, T*, P_N)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeftToRight;

/// Inverse of [`LeftToRight`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RightToLeft;

fn sandwich(m: &Subspace, t: &Mat, n: &Subspace) -> Mat {
    &(m.projection() * t) * n.projection()
}

impl Functor for LeftToFh {
    type Source = LeftIdeals;
    type Target = Subspaces;
    const NAME: &'static str = "l-to-fh";
    const LINEARITY: Linearity = Linearity::Linear;

    fn morphism(&self, f: &LeftMorphism, tol: &Tolerances) -> Result<FhMorphism> {
        FhMorphism::new(f.src().clone(), f.matrix().clone(), f.dst().clone(), tol)
    }
}

impl Functor for FhToLeft {
    type Source = Subspaces;
    type Target = LeftIdeals;
    const NAME: &'static str = "fh-to-l";
    const LINEARITY: Linearity = Linearity::Linear;

    fn morphism(&self, f: &FhMorphism, tol: &Tolerances) -> Result<LeftMorphism> {
        let t = sandwich(f.src(), f.matrix(), f.dst());
        LeftMorphism::new(f.src().clone(), t, f.dst().clone(), tol)
    }
}

impl Functor for FhToDual {
    type Source = Subspaces;
    type Target = DualSubspaces;
    const NAME: &'static str = "fh-to-dual";
    const LINEARITY: Linearity = Linearity::ConjugateLinear;

    fn morphism(&self, f: &FhMorphism, tol: &Tolerances) -> Result<DualMorphism> {
        let carrier = sandwich(f.dst(), &f.matrix().adjoint(), f.src());
        DualMorphism::new(f.src().clone(), carrier, f.dst().clone(), tol)
    }
}

impl Functor for DualToFh {
    type Source = DualSubspaces;
    type Target = Subspaces;
    const NAME: &'static str = "dual-to-fh";
    const LINEARITY: Linearity = Linearity::ConjugateLinear;

    fn morphism(&self, f: &DualMorphism, tol: &Tolerances) -> Result<FhMorphism> {
        let t = sandwich(f.src(), &f.matrix().adjoint(), f.dst());
        FhMorphism::new(f.src().clone(), t, f.dst().clone(), tol)
    }
}

impl Functor for RightToDual {
    type Source = RightIdeals;
    type Target = DualSubspaces;
    const NAME: &'static str = "r-to-dual";
    const LINEARITY: Linearity = Linearity::Linear;

    fn morphism(&self, f: &RightMorphism, tol: &Tolerances) -> Result<DualMorphism> {
        DualMorphism::new(f.src().clone(), f.matrix().clone(), f.dst().clone(), tol)
    }
}

impl Functor for DualToRight {
    type Source = DualSubspaces;
    type Target = RightIdeals;
    const NAME: &'static str = "dual-to-r";
    const LINEARITY: Linearity = Linearity::Linear;

    fn morphism(&self, f: &DualMorphism, tol: &Tolerances) -> Result<RightMorphism> {
        RightMorphism::new(f.src().clone(), f.matrix().clone(), f.dst().clone(), tol)
    }
}

impl Functor for LeftToRight {
    type Source = LeftIdeals;
    type Target = RightIdeals;
    const NAME: &'static str = "l-to-r";
    const LINEARITY: Linearity = Linearity::ConjugateLinear;

    fn morphism(&self, f: &LeftMorphism, tol: &Tolerances) -> Result<RightMorphism> {
        RightMorphism::new(f.src().clone(), f.matrix().adjoint(), f.dst().clone(), tol)
    }
}

impl Functor for RightToLeft {
    type Source = RightIdeals;
    type Target = LeftIdeals;
    const NAME: &'static str = "r-to-l";
    const LINEARITY: Linearity = Linearity::ConjugateLinear;

    fn morphism(&self, f: &RightMorphism, tol: &Tolerances) -> Result<LeftMorphism> {
        LeftMorphism::new(f.src().clone(), f.matrix().adjoint(), f.dst().clone(), tol)
    }
}

/// `f_m(x) = ⟨x, m⟩ = Σ x_i·conj(m_i)` for row vectors `x`, `m`.
pub fn riesz_pairing(x: &Mat, m: &Mat) -> Complex64 {
    (x * &m.adjoint()).entry(0, 0)
}

impl DualMorphism {
    /// The action on Riesz vectors, `m ↦ m·A*`, as a row-acting operator.
    pub fn riesz_action(&self) -> Mat {
        self.matrix().adjoint()
    }

    /// Riesz vector of the functional `f_m ∘ A`.
    pub fn pull_back(&self, m: &Mat) -> Mat {
        m * &self.riesz_action()
    }
}
