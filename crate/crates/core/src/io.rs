//! JSON file forms for matrices, subspaces, morphisms and cones.
//!
//! Matrix: `{"field", "rows", "cols", "entries": [[re, im], ...]}` row-major.
//! Subspace: a matrix whose columns span it (canonicalized on load).
//! Morphism: `{"src", "t", "dst", "kind"}`. Cone: `{"flavor", "gen"}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cones::{Cone, Flavor};
use crate::error::{Error, Result};
use crate::ideal::{
    Category, DualMorphism, FhMorphism, LeftMorphism, Morphism, MorphismKind, RightMorphism,
};
use crate::linalg::{Mat, Tolerances};
use crate::scalar::Field;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn to_mat(&self) -> Result<Mat> {
        let entries: Vec<Complex64> = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Mat::from_row_major(self.field, self.rows, self.cols, &entries)
    }
}

impl From<&Mat> for MatrixFile {
    fn from(m: &Mat) -> Self {
        MatrixFile {
            field: m.field(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// A subspace is stored as its canonical orthonormal basis.
pub fn subspace_to_file(s: &Subspace) -> MatrixFile {
    MatrixFile::from(s.basis())
}

pub fn subspace_from_file(f: &MatrixFile, tol: &Tolerances) -> Result<Subspace> {
    Subspace::span(&f.to_mat()?, tol)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismFile {
    pub src: MatrixFile,
    pub t: MatrixFile,
    pub dst: MatrixFile,
    pub kind: MorphismKind,
}

pub fn morphism_file<C: Category>(f: &Morphism<C>) -> MorphismFile {
    MorphismFile {
        src: subspace_to_file(f.src()),
        t: MatrixFile::from(f.matrix()),
        dst: subspace_to_file(f.dst()),
        kind: f.kind(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeFile {
    pub flavor: Flavor,
    pub gen: MatrixFile,
}

/// A validated morphism of any of the four categories.
#[derive(Clone, Debug)]
pub enum AnyMorphism {
    Left(LeftMorphism),
    Right(RightMorphism),
    Fh(FhMorphism),
    Dual(DualMorphism),
}

macro_rules! dispatch {
    ($value:expr, $f:ident => $body:expr) => {
        match $value {
            AnyMorphism::Left($f) => $body,
            AnyMorphism::Right($f) => $body,
            AnyMorphism::Fh($f) => $body,
            AnyMorphism::Dual($f) => $body,
        }
    };
}

impl AnyMorphism {
    pub fn kind(&self) -> MorphismKind {
        dispatch!(self, f => f.kind())
    }

    pub fn norm(&self) -> f64 {
        dispatch!(self, f => f.norm())
    }

    pub fn to_file(&self) -> MorphismFile {
        dispatch!(self, f => morphism_file(f))
    }

    /// "`self`, then `g`"; both must be of the same kind.
    pub fn compose(&self, g: &AnyMorphism, tol: &Tolerances) -> Result<AnyMorphism> {
        Ok(match (self, g) {
            (AnyMorphism::Left(f), AnyMorphism::Left(g)) => AnyMorphism::Left(f.compose(g, tol)?),
            (AnyMorphism::Right(f), AnyMorphism::Right(g)) => {
                AnyMorphism::Right(f.compose(g, tol)?)
            }
            (AnyMorphism::Fh(f), AnyMorphism::Fh(g)) => AnyMorphism::Fh(f.compose(g, tol)?),
            (AnyMorphism::Dual(f), AnyMorphism::Dual(g)) => AnyMorphism::Dual(f.compose(g, tol)?),
            _ => {
                return Err(Error::Invalid(format!(
                    "cannot compose a {} morphism with a {} morphism",
                    self.kind(),
                    g.kind()
                )))
            }
        })
    }
}

impl MorphismFile {
    pub fn to_morphism(&self, tol: &Tolerances) -> Result<AnyMorphism> {
        let src = subspace_from_file(&self.src, tol)?;
        let t = self.t.to_mat()?;
        let dst = subspace_from_file(&self.dst, tol)?;
        Ok(match self.kind {
            MorphismKind::Left => AnyMorphism::Left(LeftMorphism::new(src, t, dst, tol)?),
            MorphismKind::Right => AnyMorphism::Right(RightMorphism::new(src, t, dst, tol)?),
            MorphismKind::Fh => AnyMorphism::Fh(FhMorphism::new(src, t, dst, tol)?),
            MorphismKind::Dual => AnyMorphism::Dual(DualMorphism::new(src, t, dst, tol)?),
        })
    }
}

impl ConeFile {
    pub fn to_cone(&self, tol: &Tolerances) -> Result<Cone> {
        Cone::new(self.flavor, self.gen.to_mat()?, tol)
    }

    pub fn from_cone(c: &Cone) -> Self {
        ConeFile {
            flavor: c.flavor(),
            gen: MatrixFile::from(c.generator()),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = fs::read_to_string(path.as_ref())?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
