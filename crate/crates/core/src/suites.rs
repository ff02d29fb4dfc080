//! Seeded verification suites and their JSON reports.
//!
//! Each suite draws `samples` independent instances. Sample `i` of suite `s`
//! uses its own RNG seeded from `(seed, s, i)`, so results do not depend on
//! scheduling. Every check yields a nonnegative residual: a relative
//! residual for numeric identities, 0 or 1 for predicates. A suite passes
//! iff its largest residual is at most `eps_eq`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cones::{boundedness_profile, strictly_increasing, BoundedCone, Component, Cone, Flavor};
use crate::error::{Error, Result};
use crate::functors::{
    DualToFh, DualToRight, FhToDual, FhToLeft, Functor, LeftToFh, LeftToRight, Linearity,
    RightToDual, RightToLeft,
};
use crate::ideal::{
    principal_left_leq, principal_right_leq, Category, FhMorphism, LeftIdeals, LeftMorphism,
    Morphism, RightIdeals, RightMorphism,
};
use crate::io::{morphism_file, subspace_to_file, ConeFile, MatrixFile};
use crate::linalg::{relative_residual, Mat, Tolerances};
use crate::sampling::{self, SampleRng};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    IdealOrder,
    HomsetNorm,
    Retraction,
    Factorization,
    LeftSubspaceIso,
    Duality,
    RightDualIso,
    LeftRightDuality,
    ConeRepresentation,
    ConeProduct,
    Regularity,
    BoundedAlgebraLeft,
    BoundedAlgebraRight,
    L2Profile,
}

impl SuiteName {
    pub const ALL: [SuiteName; 14] = [
        SuiteName::IdealOrder,
        SuiteName::HomsetNorm,
        SuiteName::Retraction,
        SuiteName::Factorization,
        SuiteName::LeftSubspaceIso,
        SuiteName::Duality,
        SuiteName::RightDualIso,
        SuiteName::LeftRightDuality,
        SuiteName::ConeRepresentation,
        SuiteName::ConeProduct,
        SuiteName::Regularity,
        SuiteName::BoundedAlgebraLeft,
        SuiteName::BoundedAlgebraRight,
        SuiteName::L2Profile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::IdealOrder => "lemma-3.1",
            SuiteName::HomsetNorm => "homset-norm",
            SuiteName::Retraction => "retraction",
            SuiteName::Factorization => "factorization",
            SuiteName::LeftSubspaceIso => "thm-4.1",
            SuiteName::Duality => "thm-duality",
            SuiteName::RightDualIso => "thm-4.3",
            SuiteName::LeftRightDuality => "thm-4.4",
            SuiteName::ConeRepresentation => "thm-5.1",
            SuiteName::ConeProduct => "cone-product",
            SuiteName::Regularity => "regularity",
            SuiteName::BoundedAlgebraLeft => "bounded-algebra-left",
            SuiteName::BoundedAlgebraRight => "bounded-algebra-right",
            SuiteName::L2Profile => "l2-profile",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SuiteName::IdealOrder => {
                "principal left ideals ordered by range inclusion, right ideals by kernel \
                 reversal; lattice laws; an idempotent is a projection iff Z(P) = R(P)⊥"
            }
            SuiteName::HomsetNorm => {
                "hom-sets of both ideal categories are normed spaces with ‖ρ(P_M,T,P_N)‖ = ‖T‖ = ‖P_M T‖"
            }
            SuiteName::Retraction => {
                "inclusions and their norm-one retractions split; isomorphism iff T|_M: M → N is bijective"
            }
            SuiteName::Factorization => {
                "normal factorization f = quj through U = Z(T)⊥ and V = R(T), both sides"
            }
            SuiteName::LeftSubspaceIso => {
                "left ideals ≅ subspaces: FG = 1, GF = 1, functorial, hom-set normed-space isomorphism"
            }
            SuiteName::Duality => {
                "subspaces ≅ dual subspaces via T ↦ (P_N T* P_M)′: conjugate-linear isometry on hom-sets"
            }
            SuiteName::RightDualIso => {
                "right ideals ≅ dual subspaces via λ(P_M,T,P_N) ↦ T′|_M′: normed-space isomorphism"
            }
            SuiteName::LeftRightDuality => {
                "left ideals ≅ right ideals via ρ(P_M,T,P_N) ↦ λ(P_M,T*,P_N): conjugate-linear isometry"
            }
            SuiteName::ConeRepresentation => {
                "cones are generated by operators: γ^T(M) = T|_M, reconstruction T(b) = γ(⟨b⟩)(b), normality"
            }
            SuiteName::ConeProduct => {
                "cone product (γ·σ)(c) = γ(c)·σ(c_γ)° agrees with the generator product T₁T₂"
            }
            SuiteName::Regularity => {
                "T = T T⁺ T and the transported cone identity: the cone semigroup is regular"
            }
            SuiteName::BoundedAlgebraLeft => {
                "bounded left cones form a normed algebra isomorphic to the operators (linear isometry)"
            }
            SuiteName::BoundedAlgebraRight => {
                "bounded right cones form a normed algebra conjugate-linearly isomorphic to the operators"
            }
            SuiteName::L2Profile => {
                "truncations of e_k ↦ k·e₁ have norms √(Σk²), strictly increasing: the cone is unbounded"
            }
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = SuiteName::ALL.iter().map(|n| n.as_str()).collect();
                Error::Invalid(format!("unknown suite '{s}' (known: {})", known.join(", ")))
            })
    }
}

impl Serialize for SuiteName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for SuiteName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub field: Field,
    pub ambient_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteName>,
    /// Truncation sizes for `l2-profile`.
    pub dims: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            field: Field::Real,
            ambient_dim: 6,
            samples: 200,
            seed: 42,
            tolerances: Tolerances::default(),
            suites: SuiteName::ALL.to_vec(),
            dims: (1..=12).collect(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ambient_dim == 0 {
            return Err(Error::Invalid("ambient dimension must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::Invalid("sample count must be at least 1".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Invalid("no suites selected".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Invalid("profile dimensions must be positive".into()));
        }
        self.tolerances.validate()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: SuiteName,
    pub description: String,
    pub passed: bool,
    pub samples: usize,
    pub max_residual: f64,
    pub worst_check: String,
    pub worst_instance: Value,
    pub wall_time_ms: f64,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub field: Field,
    pub ambient_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteReport>,
}

/// Run every configured suite (in parallel) and collect the report.
pub fn run(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let suites: Vec<SuiteReport> = cfg
        .suites
        .par_iter()
        .map(|&name| run_suite(name, cfg))
        .collect();
    Ok(VerificationReport {
        passed: suites.iter().all(|s| s.passed),
        field: cfg.field,
        ambient_dim: cfg.ambient_dim,
        samples: cfg.samples,
        seed: cfg.seed,
        tolerances: cfg.tolerances,
        suites,
    })
}

/// Residuals gathered while checking one sample.
#[derive(Default)]
pub struct Checks {
    residuals: Vec<(String, f64)>,
    observed: Vec<(String, f64)>,
}

impl Checks {
    fn value(&mut self, name: impl Into<String>, residual: f64) {
        let r = if residual.is_nan() {
            f64::MAX
        } else {
            residual.clamp(0.0, f64::MAX)
        };
        self.residuals.push((name.into(), r));
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.value(name, if ok { 0.0 } else { 1.0 });
    }

    fn mat(&mut self, name: impl Into<String>, a: &Mat, b: &Mat) {
        self.value(name, relative_residual(a, b));
    }

    fn morphism<C: Category>(&mut self, name: impl Into<String>, a: &Morphism<C>, b: &Morphism<C>, tol: &Tolerances) {
        self.value(name, a.residual(b, tol));
    }

    /// Scalar agreement, relative to `max(1, |expected|)`.
    fn scalar(&mut self, name: impl Into<String>, got: f64, expected: f64) {
        self.value(name, (got - expected).abs() / expected.abs().max(1.0));
    }

    /// `got ≤ bound`, reporting the relative excess.
    fn at_most(&mut self, name: impl Into<String>, got: f64, bound: f64) {
        self.value(name, (got - bound).max(0.0) / bound.abs().max(1.0));
    }

    /// Recorded in the report details but not held to the tolerance.
    fn observe(&mut self, name: impl Into<String>, value: f64) {
        self.observed.push((name.into(), value));
    }

    fn worst(&self) -> (f64, &str) {
        self.residuals
            .iter()
            .fold((0.0, ""), |acc, (n, r)| if *r > acc.0 { (*r, n.as_str()) } else { acc })
    }
}

struct Ctx {
    field: Field,
    n: usize,
    tol: Tolerances,
}

type Body = fn(&mut SampleRng, &Ctx, &mut Checks) -> Result<Value>;

struct Outcome {
    checks: Checks,
    instance: Value,
}

fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let ctx = Ctx {
        field: cfg.field,
        n: cfg.ambient_dim,
        tol: cfg.tolerances,
    };
    let outcomes: Vec<Outcome> = if name == SuiteName::L2Profile {
        vec![l2_profile(&ctx, &cfg.dims)]
    } else {
        let body = body_of(name);
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sampling::sample_rng(cfg.seed, name.stream(), i);
                let mut checks = Checks::default();
                let instance = match body(&mut rng, &ctx, &mut checks) {
                    Ok(v) => v,
                    Err(e) => {
                        checks.holds("no error", false);
                        json!({ "error": e.to_string() })
                    }
                };
                Outcome {
                    checks,
                    instance: json!({ "sample": i, "instance": instance }),
                }
            })
            .collect()
    };

    let mut per_check: BTreeMap<String, f64> = BTreeMap::new();
    let mut observed: BTreeMap<String, f64> = BTreeMap::new();
    let mut worst = (0.0_f64, String::new(), Value::Null);
    for (idx, o) in outcomes.iter().enumerate() {
        for (n, r) in &o.checks.residuals {
            let e = per_check.entry(n.clone()).or_insert(0.0);
            *e = e.max(*r);
        }
        for (n, v) in &o.checks.observed {
            let e = observed.entry(n.clone()).or_insert(f64::NEG_INFINITY);
            *e = e.max(*v);
        }
        let (r, n) = o.checks.worst();
        if idx == 0 || r > worst.0 {
            worst = (r, n.to_string(), o.instance.clone());
        }
    }

    let mut details = json!({ "checks": per_check });
    if !observed.is_empty() {
        details["observed_max"] = json!(observed);
    }
    if let Some(extra) = extra_details(name, &ctx, cfg) {
        details["notes"] = extra;
    }
    SuiteReport {
        name,
        description: name.description().to_string(),
        passed: worst.0 <= cfg.tolerances.eps_eq,
        samples: outcomes.len(),
        max_residual: worst.0,
        worst_check: worst.1,
        worst_instance: worst.2,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        details,
    }
}

fn extra_details(name: SuiteName, ctx: &Ctx, cfg: &SuiteConfig) -> Option<Value> {
    let vacuous = ctx.field == Field::Real;
    match name {
        SuiteName::Duality | SuiteName::LeftRightDuality | SuiteName::BoundedAlgebraRight if vacuous => {
            Some(json!("conjugate-linearity is vacuous over the real field"))
        }
        SuiteName::RightDualIso => Some(json!(
            "checked as linear; observed_max records the residual of the conjugate-linear alternative"
        )),
        SuiteName::L2Profile => {
            let norms = boundedness_profile(ctx.field, &cfg.dims);
            Some(json!({ "dims": cfg.dims, "norms": norms }))
        }
        _ => None,
    }
}

fn body_of(name: SuiteName) -> Body {
    match name {
        SuiteName::IdealOrder => ideal_order,
        SuiteName::HomsetNorm => homset_norm,
        SuiteName::Retraction => retraction,
        SuiteName::Factorization => factorization,
        SuiteName::LeftSubspaceIso => left_fh_isomorphism,
        SuiteName::Duality => fh_duality,
        SuiteName::RightDualIso => right_dual_isomorphism,
        SuiteName::LeftRightDuality => left_right_duality,
        SuiteName::ConeRepresentation => cone_representation,
        SuiteName::ConeProduct => cone_product,
        SuiteName::Regularity => regularity,
        SuiteName::BoundedAlgebraLeft => bounded_algebra_left,
        SuiteName::BoundedAlgebraRight => bounded_algebra_right,
        SuiteName::L2Profile => unreachable!("l2-profile is not sampled"),
    }
}

fn mat_json(m: &Mat) -> Value {
    json!(MatrixFile::from(m))
}

fn sub_json(s: &Subspace) -> Value {
    json!(subspace_to_file(s))
}

fn morph_json<C: Category>(f: &Morphism<C>) -> Value {
    json!(morphism_file(f))
}

fn scalar_json(k: Scalar) -> Value {
    json!([k.re(), k.im()])
}

/// Membership oracle: `a` agrees with its projection onto the candidate
/// ideal. Generic non-members miss by O(1), so a loose cutoff suffices.
fn factors_through(a: &Mat, projected: Mat, tol: &Tolerances) -> bool {
    relative_residual(a, &projected) <= tol.eps_eq.sqrt()
}

fn ideal_order(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let (field, n, tol) = (c.field, c.n, &c.tol);
    let b = sampling::operator(rng, field, n);
    let related = rng.gen_bool(0.5);
    let x = sampling::operator(rng, field, n);
    let a_left = if related { &x * &b } else { sampling::operator(rng, field, n) };
    let a_right = if related { &b * &x } else { sampling::operator(rng, field, n) };

    // Membership oracles via the pseudoinverse: a ∈ 𝒮b ⟺ a = a·b⁺·b.
    let bp = b.pseudoinverse(tol)?;
    let left_oracle = factors_through(&a_left, &(&a_left * &bp) * &b, tol);
    let right_oracle = factors_through(&a_right, &(&b * &bp) * &a_right, tol);
    k.holds("left ideal order matches range inclusion", principal_left_leq(&a_left, &b, tol)? == left_oracle);
    k.holds("right ideal order matches kernel reversal", principal_right_leq(&a_right, &b, tol)? == right_oracle);
    if related {
        k.holds("constructed left factor is contained", left_oracle);
        k.holds("constructed right factor is contained", right_oracle);
    }

    let m = sampling::subspace(rng, field, n, tol)?;
    let nn = sampling::subspace(rng, field, n, tol)?;
    k.holds(
        "equality iff mutual order",
        m.equals(&nn, tol)? == (m.leq(&nn, tol)? && nn.leq(&m, tol)?),
    );
    let comp = m.orth_complement(tol)?;
    k.mat(
        "complement projection is I - P",
        comp.projection(),
        &(&Mat::identity(field, n) - m.projection()),
    );
    let p = m.projection();
    k.mat("projection idempotent", &(p * p), p);
    k.mat("projection self-adjoint", &p.adjoint(), p);
    k.value(
        "kernel is complement of adjoint range",
        Subspace::kernel_space(&b, tol)?.distance(&Subspace::range_space(&b.adjoint(), tol)?.orth_complement(tol)?)?,
    );

    // Idempotents: orthogonal (A·A⁺) and oblique (B·(C·B)⁻¹·C).
    let rank = rng.gen_range(1..=n);
    let a = sampling::matrix_of_rank(rng, field, n, rank);
    let orth = &a * &a.pseudoinverse(tol)?;
    let bb = sampling::gaussian_matrix(rng, field, n, rank);
    let cc = sampling::gaussian_matrix(rng, field, rank, n);
    let cb = &cc * &bb;
    let oblique = &(&bb * &cb.pseudoinverse(tol)?) * &cc;
    for (label, e) in [("orthogonal", &orth), ("oblique", &oblique)] {
        k.mat(format!("{label} idempotent"), &(e * e), e);
        let self_adjoint = relative_residual(&e.adjoint(), e) <= tol.eps_eq;
        let kernel_is_complement = Subspace::kernel_space(e, tol)?
            .equals(&Subspace::range_space(e, tol)?.orth_complement(tol)?, tol)?;
        k.holds(format!("{label}: projection iff Z = R⊥"), self_adjoint == kernel_is_complement);
    }
    k.holds("orthogonal idempotent is a projection", relative_residual(&orth.adjoint(), &orth) <= tol.eps_eq);

    Ok(json!({
        "related": related,
        "a_left": mat_json(&a_left),
        "a_right": mat_json(&a_right),
        "b": mat_json(&b),
        "m": sub_json(&m),
        "n": sub_json(&nn),
    }))
}

/// Largest singular value from the Hermitian eigenproblem of `t*t`.
fn eigen_norm(t: &Mat) -> f64 {
    let gram = (&t.adjoint() * t).data().clone();
    let eig = nalgebra::SymmetricEigen::new(gram);
    eig.eigenvalues.iter().fold(0.0_f64, |m, &v| m.max(v)).sqrt()
}

fn homset_laws<C: Category>(rng: &mut SampleRng, c: &Ctx, k: &mut Checks, side: &str) -> Result<Value> {
    let tol = &c.tol;
    let m = sampling::subspace(rng, c.field, c.n, tol)?;
    let nn = sampling::subspace(rng, c.field, c.n, tol)?;
    let f: Morphism<C> = sampling::morphism_between(rng, &m, &nn, tol)?;
    let g: Morphism<C> = sampling::morphism_between(rng, &m, &nn, tol)?;
    let s = sampling::scalar(rng, c.field);

    let nf = f.norm();
    k.scalar(format!("{side}: norm equals eigen oracle"), nf, eigen_norm(f.matrix()));
    let restricted = match C::SIDE {
        crate::ideal::Side::Row => m.projection() * f.matrix(),
        crate::ideal::Side::Column => f.matrix() * m.projection(),
    };
    k.scalar(format!("{side}: norm equals restricted norm"), nf, restricted.operator_norm());
    let sum = f.add(&g, tol)?;
    k.mat(format!("{side}: addition is entrywise"), sum.matrix(), &(f.matrix() + g.matrix()));
    k.at_most(format!("{side}: triangle inequality"), sum.norm(), nf + g.norm());
    let scaled = f.scale(s);
    k.scalar(format!("{side}: homogeneity"), scaled.norm(), s.abs() * nf);
    let zero = Morphism::<C>::zero(&m, &nn);
    k.morphism(format!("{side}: additive identity"), &f.add(&zero, tol)?, &f, tol);
    Ok(json!({ "f": morph_json(&f), "g": morph_json(&g), "k": scalar_json(s) }))
}

fn homset_norm(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let left = homset_laws::<LeftIdeals>(rng, c, k, "left")?;
    let right = homset_laws::<RightIdeals>(rng, c, k, "right")?;
    Ok(json!({ "left": left, "right": right }))
}

fn splitting_laws<C: Category>(rng: &mut SampleRng, c: &Ctx, k: &mut Checks, side: &str) -> Result<Value> {
    let tol = &c.tol;
    let m = sampling::subspace(rng, c.field, c.n, tol)?;
    let nn = sampling::superspace(rng, &m, tol)?;
    let j = Morphism::<C>::inclusion(&m, &nn, tol)?;
    let q = Morphism::<C>::retraction(&m, &nn, tol)?;
    k.morphism(format!("{side}: inclusion then retraction is identity"), &j.compose(&q, tol)?, &Morphism::identity(&m), tol);
    k.holds(format!("{side}: inclusion recognized"), j.is_inclusion(tol)?);
    k.holds(format!("{side}: retraction recognized"), q.is_retraction(tol)?);
    let unit = if m.is_zero() { 0.0 } else { 1.0 };
    k.scalar(format!("{side}: inclusion has norm one"), j.norm(), unit);
    k.scalar(format!("{side}: retraction has norm one"), q.norm(), unit);

    // Isomorphism criterion against an independent rank count.
    let f: Morphism<C> = sampling::morphism(rng, c.field, c.n, tol)?;
    let rank = f.matrix().rank(tol)?;
    let expected = rank == f.src().dim() && rank == f.dst().dim();
    k.holds(format!("{side}: isomorphism iff full rank"), f.is_isomorphism(tol)? == expected);

    // A generic map between equal-dimensional subspaces is an isomorphism.
    let dim = m.dim();
    let target = sampling::subspace_of_dim(rng, c.field, c.n, dim, tol)?;
    let g = sampling::gaussian_matrix(rng, c.field, c.n, c.n);
    let t = match C::SIDE {
        crate::ideal::Side::Row => &(m.projection() * &g) * target.projection(),
        crate::ideal::Side::Column => &(target.projection() * &g) * m.projection(),
    };
    let iso = Morphism::<C>::new(m.clone(), t, target, tol)?;
    k.holds(format!("{side}: generic equal-dimension map is an isomorphism"), iso.is_isomorphism(tol)?);
    Ok(json!({ "m": sub_json(&m), "n": sub_json(&nn), "f": morph_json(&f), "iso": morph_json(&iso) }))
}

fn retraction(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let left = splitting_laws::<LeftIdeals>(rng, c, k, "left")?;
    let right = splitting_laws::<RightIdeals>(rng, c, k, "right")?;
    Ok(json!({ "left": left, "right": right }))
}

fn factorization_laws<C: Category>(rng: &mut SampleRng, c: &Ctx, k: &mut Checks, side: &str) -> Result<Value> {
    let tol = &c.tol;
    let f: Morphism<C> = sampling::morphism(rng, c.field, c.n, tol)?;
    let fac = f.normal_factorize(tol)?;
    k.morphism(format!("{side}: quj reconstructs f"), &fac.reconstruct(tol)?, &f, tol);
    k.holds(format!("{side}: q is a retraction"), fac.q.is_retraction(tol)?);
    k.holds(format!("{side}: u is an isomorphism"), fac.u.is_isomorphism(tol)?);
    k.holds(format!("{side}: j is an inclusion"), fac.j.is_inclusion(tol)?);
    let coimage = Subspace::kernel_space(f.matrix(), tol)?.orth_complement(tol)?;
    let image = Subspace::range_space(f.matrix(), tol)?;
    let (through_src, through_dst) = match C::SIDE {
        crate::ideal::Side::Row => (&coimage, &image),
        crate::ideal::Side::Column => (&image, &coimage),
    };
    k.value(format!("{side}: factors through the expected source"), fac.u.src().distance(through_src)?);
    k.value(format!("{side}: factors through the expected target"), fac.u.dst().distance(through_dst)?);
    let epi = f.epimorphic_component(tol)?;
    k.morphism(format!("{side}: epimorphic component then inclusion is f"), &epi.compose(&fac.j, tol)?, &f, tol);
    Ok(json!({ "f": morph_json(&f) }))
}

fn factorization(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let left = factorization_laws::<LeftIdeals>(rng, c, k, "left")?;
    let right = factorization_laws::<RightIdeals>(rng, c, k, "right")?;
    Ok(json!({ "left": left, "right": right }))
}

/// Functor laws for `func` with inverse `inv`, checked on random data.
fn functor_laws<F, G>(func: &F, inv: &G, rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value>
where
    F: Functor,
    G: Functor<Source = F::Target, Target = F::Source>,
{
    let tol = &c.tol;
    let name = F::NAME;
    let (f, g, _) = sampling::composable_triple::<F::Source, _>(rng, c.field, c.n, tol)?;
    let h: Morphism<F::Source> = sampling::morphism_between(rng, f.src(), f.dst(), tol)?;
    let s = sampling::scalar(rng, c.field);

    let ff = func.morphism(&f, tol)?;
    k.morphism(
        format!("{name}: preserves composition"),
        &func.morphism(&f.compose(&g, tol)?, tol)?,
        &ff.compose(&func.morphism(&g, tol)?, tol)?,
        tol,
    );
    k.morphism(
        format!("{name}: preserves identities"),
        &func.morphism(&Morphism::identity(f.src()), tol)?,
        &Morphism::identity(f.src()),
        tol,
    );
    let big = f.src().sum(f.dst(), tol)?;
    let incl = Morphism::<F::Source>::inclusion(f.src(), &big, tol)?;
    k.holds(format!("{name}: preserves inclusions"), func.morphism(&incl, tol)?.is_inclusion(tol)?);
    k.morphism(
        format!("{name}: additive"),
        &func.morphism(&f.add(&h, tol)?, tol)?,
        &ff.add(&func.morphism(&h, tol)?, tol)?,
        tol,
    );
    let factor = match F::LINEARITY {
        Linearity::Linear => s,
        Linearity::ConjugateLinear => s.conj(),
    };
    let image_of_scaled = func.morphism(&f.scale(s), tol)?;
    k.morphism(format!("{name}: homogeneous"), &image_of_scaled, &ff.scale(factor), tol);
    let other = match F::LINEARITY {
        Linearity::Linear => s.conj(),
        Linearity::ConjugateLinear => s,
    };
    k.observe(
        format!("{name}: residual of the opposite linearity"),
        image_of_scaled.residual(&ff.scale(other), tol),
    );
    k.scalar(format!("{name}: isometric"), ff.norm(), f.norm());
    k.morphism(format!("{name}: inverse after functor is identity"), &inv.morphism(&ff, tol)?, &f, tol);
    let y: Morphism<F::Target> = sampling::morphism(rng, c.field, c.n, tol)?;
    k.morphism(format!("{name}: functor after inverse is identity"), &func.morphism(&inv.morphism(&y, tol)?, tol)?, &y, tol);
    let obj = crate::ideal::Object::<F::Source>::new(f.src().clone());
    k.holds(
        format!("{name}: objects round trip"),
        inv.object(&func.object(&obj)).space().equals(f.src(), tol)?,
    );
    Ok(json!({ "f": morph_json(&f), "g": morph_json(&g), "h": morph_json(&h), "k": scalar_json(s) }))
}

fn left_fh_isomorphism(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let forward = functor_laws(&LeftToFh, &FhToLeft, rng, c, k)?;
    let backward = functor_laws(&FhToLeft, &LeftToFh, rng, c, k)?;
    Ok(json!({ "forward": forward, "backward": backward }))
}

fn fh_duality(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let laws = functor_laws(&FhToDual, &DualToFh, rng, c, k)?;
    // The dual map acts on Riesz vectors of M exactly as T does.
    let tol = &c.tol;
    let f: FhMorphism = sampling::morphism(rng, c.field, c.n, tol)?;
    let d = FhToDual.morphism(&f, tol)?;
    let m = &sampling::gaussian_matrix(rng, c.field, 1, c.n) * f.src().projection();
    k.mat("riesz transport", &d.pull_back(&m), &f.apply(&m));
    Ok(json!({ "laws": laws, "f": morph_json(&f) }))
}

fn right_dual_isomorphism(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let forward = functor_laws(&RightToDual, &DualToRight, rng, c, k)?;
    let backward = functor_laws(&DualToRight, &RightToDual, rng, c, k)?;
    Ok(json!({ "forward": forward, "backward": backward }))
}

fn left_right_duality(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let forward = functor_laws(&LeftToRight, &RightToLeft, rng, c, k)?;
    let tol = &c.tol;
    let f: LeftMorphism = sampling::morphism(rng, c.field, c.n, tol)?;
    let via_dual = DualToRight.morphism(&FhToDual.morphism(&LeftToFh.morphism(&f, tol)?, tol)?, tol)?;
    k.morphism("agrees with the composite through the dual", &LeftToRight.morphism(&f, tol)?, &via_dual, tol);
    Ok(json!({ "laws": forward, "f": morph_json(&f) }))
}

const FLAVORS: [Flavor; 3] = [Flavor::Fh, Flavor::Left, Flavor::Right];

fn identity_component(flavor: Flavor, n: &Subspace) -> Component {
    match flavor {
        Flavor::Fh => Component::Fh(FhMorphism::identity(n)),
        Flavor::Left => Component::Left(LeftMorphism::identity(n)),
        Flavor::Right => Component::Right(RightMorphism::identity(n)),
    }
}

fn perturbed(comp: &Component, tol: &Tolerances) -> Result<Component> {
    let bumped = comp.matrix() + &comp.matrix().scale(Scalar::real(1e-3));
    let (src, dst) = (comp.src().clone(), comp.dst().clone());
    Ok(match comp {
        Component::Fh(_) => Component::Fh(FhMorphism::new(src, bumped, dst, tol)?),
        Component::Left(_) => Component::Left(LeftMorphism::new(src, bumped, dst, tol)?),
        Component::Right(_) => Component::Right(RightMorphism::new(src, bumped, dst, tol)?),
    })
}

fn line_samples(cone: &Cone, basis: &Mat, tol: &Tolerances) -> Result<Vec<Component>> {
    (0..basis.cols())
        .map(|j| cone.component(&Subspace::span(&basis.column(j), tol)?, tol))
        .collect()
}

fn cone_representation(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let (field, n, tol) = (c.field, c.n, &c.tol);
    let t = sampling::nonzero_operator(rng, field, n);
    let t_norm = t.operator_norm();
    for flavor in FLAVORS {
        let tag = format!("{flavor:?}").to_lowercase();
        let cone = Cone::new(flavor, t.clone(), tol)?;

        let basis = sampling::gaussian_matrix(rng, field, n, n);
        let mut samples = line_samples(&cone, &basis, tol)?;
        let extra = sampling::subspace(rng, field, n, tol)?;
        samples.push(cone.component(&extra, tol)?);
        let rebuilt = Cone::from_assignment(flavor, &basis, &samples, tol)?;
        k.mat(format!("{tag}: reconstruction recovers the generator"), rebuilt.generator(), &t);
        let other = sampling::gaussian_matrix(rng, field, n, n);
        let again = Cone::from_assignment(flavor, &other, &line_samples(&cone, &other, tol)?, tol)?;
        k.mat(format!("{tag}: reconstruction is basis independent"), again.generator(), rebuilt.generator());

        let mut noisy = samples.clone();
        noisy[0] = perturbed(&noisy[0], tol)?;
        let dependent = Subspace::span(&(&basis.column(0) + &basis.column(1 % n)), tol)?;
        noisy.push(cone.component(&dependent, tol)?);
        let rejected = matches!(
            Cone::from_assignment(flavor, &basis, &noisy, tol),
            Err(Error::Reconstruction(_))
        );
        k.holds(format!("{tag}: perturbed assignment rejected"), n == 1 || rejected);

        let m = sampling::subspace(rng, field, n, tol)?;
        let big = sampling::superspace(rng, &m, tol)?;
        k.value(format!("{tag}: compatibility"), cone.compatibility_residual(&m, &big, tol)?);
        k.at_most(format!("{tag}: component bounded by generator"), cone.component(&m, tol)?.norm(), t_norm);

        let witness = cone.normal_witness(tol)?;
        let at_witness = cone.component(&witness, tol)?;
        k.holds(format!("{tag}: normal at the coimage"), at_witness.is_isomorphism(tol)?);
        k.scalar(format!("{tag}: bound attained at the coimage"), at_witness.norm(), t_norm);

        let vertex = sampling::subspace(rng, field, n, tol)?;
        let id_cone = Cone::identity_at(flavor, &vertex);
        k.value(
            format!("{tag}: identity cone is the identity at its vertex"),
            id_cone.component(&vertex, tol)?.residual(&identity_component(flavor, &vertex), tol),
        );
    }
    Ok(json!({ "gen": mat_json(&t) }))
}

/// The coordinate lines, the canonical subspaces of the operators, then
/// random subspaces up to `count`.
fn probe_subspaces(rng: &mut SampleRng, c: &Ctx, ops: &[&Mat], count: usize) -> Result<Vec<Subspace>> {
    let tol = &c.tol;
    let mut out: Vec<Subspace> = (0..c.n).map(|i| Subspace::coordinate(c.field, c.n, &[i])).collect();
    for t in ops {
        out.push(Subspace::range_space(t, tol)?);
        out.push(Subspace::kernel_space(t, tol)?.orth_complement(tol)?);
    }
    out.truncate(count);
    while out.len() < count {
        out.push(sampling::subspace(rng, c.field, c.n, tol)?);
    }
    Ok(out)
}

fn cone_product(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let (field, n, tol) = (c.field, c.n, &c.tol);
    let t1 = sampling::operator(rng, field, n);
    let t2 = sampling::operator(rng, field, n);
    let t3 = sampling::operator(rng, field, n);
    let probes = probe_subspaces(rng, c, &[&t1, &t2], 20)?;
    for flavor in FLAVORS {
        let tag = format!("{flavor:?}").to_lowercase();
        let c1 = Cone::new(flavor, t1.clone(), tol)?;
        let c2 = Cone::new(flavor, t2.clone(), tol)?;
        let c3 = Cone::new(flavor, t3.clone(), tol)?;
        let prod = c1.product(&c2, tol)?;
        k.mat(format!("{tag}: product generator is T1·T2"), prod.generator(), &(&t1 * &t2));
        for m in &probes {
            let pointwise = c1.pointwise_product_component(&c2, m, tol)?;
            k.value(format!("{tag}: pointwise product matches generator product"), pointwise.residual(&prod.component(m, tol)?, tol));
        }
        let left_assoc = prod.product(&c3, tol)?;
        let right_assoc = c1.product(&c2.product(&c3, tol)?, tol)?;
        k.mat(format!("{tag}: associative"), left_assoc.generator(), right_assoc.generator());
        k.value(format!("{tag}: associative vertex"), left_assoc.vertex().distance(right_assoc.vertex())?);
    }
    Ok(json!({
        "t1": json!(ConeFile { flavor: Flavor::Fh, gen: MatrixFile::from(&t1) }),
        "t2": json!(ConeFile { flavor: Flavor::Fh, gen: MatrixFile::from(&t2) }),
        "t3": mat_json(&t3),
    }))
}

fn regularity(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let (field, n, tol) = (c.field, c.n, &c.tol);
    let t = sampling::operator(rng, field, n);
    let tp = t.pseudoinverse(tol)?;
    k.mat("T T⁺ T = T", &(&(&t * &tp) * &t), &t);
    k.mat("T⁺ T T⁺ = T⁺", &(&(&tp * &t) * &tp), &tp);
    let e = &tp * &t;
    let f = &t * &tp;
    k.mat("T⁺T self-adjoint", &e.adjoint(), &e);
    k.mat("TT⁺ self-adjoint", &f.adjoint(), &f);
    // T generates the same principal ideals as the idempotents T⁺T and TT⁺.
    k.holds(
        "𝒮T = 𝒮(T⁺T)",
        principal_left_leq(&t, &e, tol)? && principal_left_leq(&e, &t, tol)?,
    );
    k.holds(
        "T𝒮 = (TT⁺)𝒮",
        principal_right_leq(&t, &f, tol)? && principal_right_leq(&f, &t, tol)?,
    );
    let probes = probe_subspaces(rng, c, &[&t], n + 4)?;
    for flavor in FLAVORS {
        let tag = format!("{flavor:?}").to_lowercase();
        let ct = Cone::new(flavor, t.clone(), tol)?;
        let cp = Cone::new(flavor, tp.clone(), tol)?;
        let back = ct.product(&cp.product(&ct, tol)?, tol)?;
        k.mat(format!("{tag}: cone identity on generators"), back.generator(), &t);
        for m in &probes {
            k.value(
                format!("{tag}: cone identity on components"),
                back.component(m, tol)?.residual(&ct.component(m, tol)?, tol),
            );
        }
    }
    Ok(json!({ "t": mat_json(&t) }))
}

fn bounded_algebra(flavor: Flavor, rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    let (field, n, tol) = (c.field, c.n, &c.tol);
    let t1 = sampling::operator(rng, field, n);
    let t2 = sampling::operator(rng, field, n);
    let s = sampling::scalar(rng, field);
    let a = BoundedCone::embed(flavor, &t1, tol)?;
    let b = BoundedCone::embed(flavor, &t2, tol)?;
    let sum = a.add(&b, tol)?;
    let scaled = a.scale(s, tol)?;
    let prod = a.multiply(&b, tol)?;
    let of_scaled = BoundedCone::embed(flavor, &t1.scale(s), tol)?;
    let of_sum = BoundedCone::embed(flavor, &(&t1 + &t2), tol)?;
    let of_prod = BoundedCone::embed(flavor, &(&t1 * &t2), tol)?;
    let homogeneity = match flavor {
        Flavor::Right => s.conj(),
        _ => s,
    };

    let probes = probe_subspaces(rng, c, &[&t1, &t2], n + 4)?;
    for m in &probes {
        let ca = a.cone().component(m, tol)?;
        let cb = b.cone().component(m, tol)?;
        k.mat("sum acts pointwise", sum.cone().component(m, tol)?.matrix(), &(ca.matrix() + cb.matrix()));
        k.mat("φ additive", of_sum.cone().component(m, tol)?.matrix(), &(ca.matrix() + cb.matrix()));
        k.mat("scaling acts pointwise", scaled.cone().component(m, tol)?.matrix(), &ca.matrix().scale(s));
        k.mat(
            "φ homogeneous (conjugate for right cones)",
            of_scaled.cone().component(m, tol)?.matrix(),
            &ca.matrix().scale(homogeneity),
        );
        let pointwise = a.cone().pointwise_product_component(b.cone(), m, tol)?;
        k.value("product acts pointwise", pointwise.residual(&prod.cone().component(m, tol)?, tol));
        k.value("φ multiplicative", pointwise.residual(&of_prod.cone().component(m, tol)?, tol));
        k.at_most("components bounded by α", ca.norm(), a.bound());
    }
    let witness = a.cone().normal_witness(tol)?;
    k.scalar("φ isometric", a.norm(), t1.operator_norm());
    k.scalar("α attained", a.cone().component(&witness, tol)?.norm(), a.bound());
    k.at_most("norm submultiplicative", prod.norm(), a.norm() * b.norm());
    k.at_most("norm subadditive", sum.norm(), a.norm() + b.norm());
    k.scalar("norm homogeneous", scaled.norm(), s.abs() * a.norm());
    Ok(json!({ "t1": mat_json(&t1), "t2": mat_json(&t2), "k": scalar_json(s) }))
}

fn bounded_algebra_left(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    bounded_algebra(Flavor::Left, rng, c, k)
}

fn bounded_algebra_right(rng: &mut SampleRng, c: &Ctx, k: &mut Checks) -> Result<Value> {
    bounded_algebra(Flavor::Right, rng, c, k)
}

fn l2_profile(c: &Ctx, dims: &[usize]) -> Outcome {
    let mut k = Checks::default();
    let norms = boundedness_profile(c.field, dims);
    for (&n, &got) in dims.iter().zip(&norms) {
        let expected = ((1..=n).map(|j| (j * j) as f64).sum::<f64>()).sqrt();
        k.value("norm matches closed form", (got - expected).abs() / expected);
    }
    let mut sorted = dims.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    k.holds("strictly increasing", strictly_increasing(&boundedness_profile(c.field, &sorted)));
    Outcome {
        checks: k,
        instance: json!({ "dims": dims, "norms": norms }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in SuiteName::ALL {
            assert_eq!(name.as_str().parse::<SuiteName>().unwrap(), name);
        }
        assert!("thm-9.9".parse::<SuiteName>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SuiteConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.ambient_dim = 0;
        assert!(cfg.validate().is_err());
        cfg.ambient_dim = 3;
        cfg.samples = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_run_of_every_suite_passes() {
        for field in [Field::Real, Field::Complex] {
            let cfg = SuiteConfig {
                field,
                ambient_dim: 4,
                samples: 8,
                ..SuiteConfig::default()
            };
            let report = run(&cfg).unwrap();
            for s in &report.suites {
                assert!(s.passed, "{} {field}: {} = {:e}", s.name, s.worst_check, s.max_residual);
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = SuiteConfig {
            samples: 5,
            ambient_dim: 3,
            suites: vec![SuiteName::Factorization, SuiteName::ConeRepresentation],
            ..SuiteConfig::default()
        };
        let strip = |r: VerificationReport| {
            let mut v = serde_json::to_value(r).unwrap();
            for s in v["suites"].as_array_mut().unwrap() {
                s["wall_time_ms"] = json!(0);
            }
            v
        };
        assert_eq!(strip(run(&cfg).unwrap()), strip(run(&cfg).unwrap()));
    }
}
