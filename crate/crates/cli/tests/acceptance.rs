//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use opcat::cones::{boundedness_profile, l2_truncation, strictly_increasing, Cone, Flavor};
use opcat::functors::{FhToDual, Functor, LeftToRight};
use opcat::ideal::{in_left_ideal, Category, LeftIdeals, LeftMorphism, Morphism, RightIdeals, Subspaces};
use opcat::sampling::{self, sample_rng, SampleRng};
use opcat::suites::{self, SuiteConfig, SuiteName};
use opcat::{relative_residual, Field, Mat, Result, Subspace, Tolerances};

const PROJECTION_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-8;
const PROFILE_TOL: f64 = 1e-10;
const FULL_RUN_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 42;
const FIELDS: [Field; 2] = [Field::Real, Field::Complex];

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Ambient dimensions cycle through 2..=8.
fn dim_for(i: usize) -> usize {
    2 + i % 7
}

fn rng(stream: u64, i: usize) -> SampleRng {
    sample_rng(SEED, 1000 + stream, i as u64)
}

fn projection_formula() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for theta in [0.0, PI / 4.0, PI / 3.0] {
        let (c, s) = (f64::cos(theta), f64::sin(theta));
        let line = Subspace::span(&Mat::from_real_rows(&[&[c], &[s]]), &tol())?;
        let expected = Mat::from_real_rows(&[&[c * c, c * s], &[c * s, s * s]]);
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((line.projection().entry(i, j) - expected.entry(i, j)).norm());
            }
        }
    }
    Ok(Outcome::new(worst <= PROJECTION_TOL, format!("max entry error {worst:.2e}")))
}

fn r3_golden_example() -> Result<Outcome> {
    let t = tol();
    let x_axis = Subspace::coordinate(Field::Real, 3, &[0]);
    let yz_plane = Subspace::coordinate(Field::Real, 3, &[1, 2]);
    let mut wrong = Vec::new();
    for i in 0..100 {
        let mut r = rng(2, i);
        let g = sampling::gaussian_matrix(&mut r, Field::Real, 1, 3);
        let (a, b, c) = (g.entry(0, 0).re, g.entry(0, 1).re, g.entry(0, 2).re);

        let member = Mat::from_real_rows(&[&[a, 0.0, 0.0], &[b, 0.0, 0.0], &[c, 0.0, 0.0]]);
        if !in_left_ideal(&member, &x_axis, &t)? {
            wrong.push(format!("ideal rejected member #{i}"));
        }
        let arrow = Mat::from_real_rows(&[&[0.0, a, b], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        if LeftMorphism::new(x_axis.clone(), arrow, yz_plane.clone(), &t).is_err() {
            wrong.push(format!("hom-set rejected member #{i}"));
        }

        // Violators: either a fully random matrix or a member with one
        // forbidden entry switched on.
        let noise = sampling::gaussian_matrix(&mut r, Field::Real, 3, 3);
        let kick = 0.5 + c.abs();
        let bad_member = if i % 2 == 0 {
            noise.clone()
        } else {
            let cell = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)][i % 6];
            Mat::from_fn(Field::Real, 3, 3, |r, s| {
                let base = member.entry(r, s);
                if (r, s) == cell { base + kick } else { base }
            })
        };
        if in_left_ideal(&bad_member, &x_axis, &t)? {
            wrong.push(format!("ideal accepted violator #{i}"));
        }
        let bad_arrow = if i % 2 == 0 {
            noise
        } else {
            let cell = [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)][i % 7];
            Mat::from_fn(Field::Real, 3, 3, |r, s| {
                let base = if r == 0 && s > 0 { [0.0, a, b][s] } else { 0.0 };
                if (r, s) == cell { (base + kick).into() } else { base.into() }
            })
        };
        if LeftMorphism::new(x_axis.clone(), bad_arrow, yz_plane.clone(), &t).is_ok() {
            wrong.push(format!("hom-set accepted violator #{i}"));
        }
    }
    let detail = match wrong.first() {
        None => "100 members accepted, 100 violators rejected, for both sets".to_string(),
        Some(first) => format!("{} misclassified, first: {first}", wrong.len()),
    };
    Ok(Outcome::new(wrong.is_empty(), detail))
}

fn factorization_one<C: Category>(f: &Morphism<C>, t: &Tolerances) -> Result<(f64, bool)> {
    let nf = f.normal_factorize(t)?;
    let residual = nf.reconstruct(t)?.residual(f, t);
    let laws = nf.q.is_retraction(t)? && nf.u.is_isomorphism(t)? && nf.j.is_inclusion(t)?;
    Ok((residual, laws))
}

fn normal_factorization() -> Result<Outcome> {
    let t = tol();
    let (mut worst, mut law_failures, mut count) = (0.0f64, 0usize, 0usize);
    for (fi, field) in FIELDS.into_iter().enumerate() {
        for i in 0..500 {
            let mut r = rng(30 + fi as u64, i);
            let n = dim_for(i);
            let outcomes = [
                factorization_one(&sampling::morphism::<LeftIdeals, _>(&mut r, field, n, &t)?, &t)?,
                factorization_one(&sampling::morphism::<RightIdeals, _>(&mut r, field, n, &t)?, &t)?,
                factorization_one(&sampling::morphism::<Subspaces, _>(&mut r, field, n, &t)?, &t)?,
            ];
            for (res, laws) in outcomes {
                worst = worst.max(res);
                law_failures += usize::from(!laws);
                count += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= RESIDUAL_TOL && law_failures == 0,
        format!("{count} morphisms, max reconstruction residual {worst:.2e}, {law_failures} law failures"),
    ))
}

/// Run the named suites over both fields; pass iff every report passes and
/// stays within the pinned residual bound.
fn suites_both_fields(names: &[SuiteName], samples: usize) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for field in FIELDS {
        for n in [4, 8] {
            let cfg = SuiteConfig {
                field,
                ambient_dim: n,
                samples,
                seed: SEED,
                suites: names.to_vec(),
                ..SuiteConfig::default()
            };
            for s in suites::run(&cfg)?.suites {
                worst = worst.max(s.max_residual);
                if !s.passed || s.max_residual > RESIDUAL_TOL || s.samples != samples {
                    failed.push(format!("{} ({}, n={n}): {}", s.name, field.as_str(), s.worst_check));
                }
            }
        }
    }
    let detail = match failed.first() {
        None => format!("{samples} samples per run, fields real+complex, n in {{4, 8}}, max residual {worst:.2e}"),
        Some(first) => format!("{} failing runs, first: {first}", failed.len()),
    };
    Ok(Outcome::new(failed.is_empty(), detail))
}

fn duality_checks<F, R>(functor: &F, make: R) -> Result<(f64, f64)>
where
    F: Functor,
    R: Fn(&mut SampleRng, usize) -> Result<Morphism<F::Source>>,
{
    let t = tol();
    let (mut homog, mut iso) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let mut r = rng(50, i);
        let f = make(&mut r, dim_for(i))?;
        let k = sampling::scalar(&mut r, Field::Complex);
        let image = functor.morphism(&f, &t)?;
        let scaled = functor.morphism(&f.scale(k), &t)?;
        homog = homog.max(scaled.residual(&image.scale(k.conj()), &t));
        iso = iso.max((image.norm() - f.norm()).abs());
    }
    Ok((homog, iso))
}

fn duality() -> Result<Outcome> {
    let (h1, i1) = duality_checks(&FhToDual, |r, n| {
        sampling::morphism::<Subspaces, _>(r, Field::Complex, n, &tol())
    })?;
    let (h2, i2) = duality_checks(&LeftToRight, |r, n| {
        sampling::morphism::<LeftIdeals, _>(r, Field::Complex, n, &tol())
    })?;
    let suites = suites_both_fields(&[SuiteName::Duality, SuiteName::LeftRightDuality], 200)?;
    let homog = h1.max(h2);
    let iso = i1.max(i2);
    Ok(Outcome::new(
        homog <= RESIDUAL_TOL && iso <= RESIDUAL_TOL && suites.passed,
        format!("conj-homogeneity {homog:.2e}, isometry {iso:.2e}; suites: {}", suites.detail),
    ))
}

fn cone_representation() -> Result<Outcome> {
    let t = tol();
    let mut worst = 0.0f64;
    for (fi, field) in FIELDS.into_iter().enumerate() {
        for i in 0..200 {
            let mut r = rng(60 + fi as u64, i);
            let n = dim_for(i);
            let gen = sampling::nonzero_operator(&mut r, field, n);
            let basis = sampling::gaussian_matrix(&mut r, field, n, n);
            for flavor in [Flavor::Fh, Flavor::Left, Flavor::Right] {
                let cone = Cone::new(flavor, gen.clone(), &t)?;
                let samples = (0..n)
                    .map(|j| cone.component(&Subspace::span(&basis.column(j), &t)?, &t))
                    .collect::<Result<Vec<_>>>()?;
                let rebuilt = Cone::from_assignment(flavor, &basis, &samples, &t)?;
                worst = worst.max(relative_residual(rebuilt.generator(), &gen));
            }
        }
    }
    let suites = suites_both_fields(&[SuiteName::ConeRepresentation, SuiteName::ConeProduct], 200)?;
    Ok(Outcome::new(
        worst <= RESIDUAL_TOL && suites.passed,
        format!("round-trip residual {worst:.2e}; 20 subspaces x 200 pairs: {}", suites.detail),
    ))
}

fn regularity() -> Result<Outcome> {
    let t = tol();
    let mut worst = 0.0f64;
    for (fi, field) in FIELDS.into_iter().enumerate() {
        for i in 0..500 {
            let mut r = rng(70 + fi as u64, i);
            let a = sampling::operator(&mut r, field, dim_for(i));
            let ap = a.pseudoinverse(&t)?;
            worst = worst.max(relative_residual(&(&(&a * &ap) * &a), &a));
        }
    }
    let suites = suites_both_fields(&[SuiteName::Regularity], 500)?;
    Ok(Outcome::new(
        worst <= RESIDUAL_TOL && suites.passed,
        format!("T T+ T residual {worst:.2e}; cone identity: {}", suites.detail),
    ))
}

fn bounded_algebra() -> Result<Outcome> {
    suites_both_fields(&[SuiteName::BoundedAlgebraLeft, SuiteName::BoundedAlgebraRight], 200)
}

fn l2_profile() -> Result<Outcome> {
    let dims: Vec<usize> = (1..=12).collect();
    let norms = boundedness_profile(Field::Real, &dims);
    let worst = dims
        .iter()
        .zip(&norms)
        .map(|(&n, &norm)| {
            let closed_form = ((1..=n).map(|k| (k * k) as f64).sum::<f64>()).sqrt();
            (norm - closed_form).abs()
        })
        .fold(0.0f64, f64::max);
    let shape_ok = l2_truncation(Field::Real, 3).entry(2, 0).re == 3.0;
    Ok(Outcome::new(
        worst <= PROFILE_TOL && strictly_increasing(&norms) && shape_ok,
        format!("max error {worst:.2e}, strictly increasing: {}", strictly_increasing(&norms)),
    ))
}

fn full_cli_run() -> Result<Outcome> {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_opcat"))
        .args(["run_suite", "--all"])
        .output()
        .map_err(|e| opcat::Error::Invalid(format!("could not launch opcat: {e}")))?;
    let elapsed = started.elapsed();
    let code = out.status.code();
    Ok(Outcome::new(
        code == Some(0) && elapsed < FULL_RUN_LIMIT,
        format!("exit {code:?} in {:.1} s (limit {} s)", elapsed.as_secs_f64(), FULL_RUN_LIMIT.as_secs()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("projection formula", projection_formula),
        ("R^3 golden example", r3_golden_example),
        ("normal factorization", normal_factorization),
        ("subspaces <-> left ideals", || suites_both_fields(&[SuiteName::LeftSubspaceIso], 500)),
        ("duality", duality),
        ("cone representation and product", cone_representation),
        ("regularity", regularity),
        ("bounded-cone algebra", bounded_algebra),
        ("l2 truncation profile", l2_profile),
        ("full run_suite --all", full_cli_run),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        all &= outcome.passed;
        println!(
            "{} criterion {}: {name} ({}) [{:.1} s]",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
