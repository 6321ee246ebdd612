//! One function per subcommand; each returns a [`ResultBundle`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use specbox_core::certificate::{certify_with, grid_certify_with, TOL_CERT};
use specbox_core::enclosure::{
    gershgorin_enclosure_with, inverse_abs_corollary, qnr_enclosure, range_constants, tretter_strip,
    BlockSide, WeightFunction,
};
use specbox_core::jframe::{
    assemble_jframe, frame_bounds, jframe_inverse, lemmens_enclosure, prior_bound_region, sector_slope,
    JFrameVariant,
};
use specbox_core::linalg::{dense_inverse, eigenvalues_general, operator_norm, TOL_HERM, TOL_SUPPORT};
use specbox_core::qnr::{eigen_witness_check, qnr_sample, QnrStrategy, WitnessStatus};
use specbox_core::sharpness::{construct, density_report, reference_samples, SharpConstruction, SharpnessSpec};
use specbox_core::{BlockOperator, Complex64, Error, Execution, Rect, Region, Side};

use crate::bundle::{classify, Cloud, GridLayers, Membership, MembershipRow, ResultBundle, Scope};
use crate::error::{CliError, CliResult};
use crate::problem::Parsed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative Hermitian-symmetry tolerance on input blocks.
    pub herm: f64,
    /// Half-width of the boundary band around 1 for certificate norms.
    pub cert: f64,
    /// Relative threshold for the coupled part of a spectrum.
    pub support: f64,
    /// Distance below which an eigenvalue counts as on a region boundary.
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: TOL_HERM,
            cert: TOL_CERT,
            support: TOL_SUPPORT,
            boundary: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    One,
    InvAbs,
}

impl Weight {
    fn function(self) -> WeightFunction {
        match self {
            Weight::One => WeightFunction::ConstantOne,
            Weight::InvAbs => WeightFunction::InverseAbs,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Weight::One => "one",
            Weight::InvAbs => "invabs",
        }
    }
}

fn is_real(z: Complex64, scale: f64) -> bool {
    z.im.abs() <= 1e-8 * scale.max(1.0)
}

fn membership_table(bundle: &mut ResultBundle, scale: f64, tol: f64) {
    bundle.membership = bundle
        .eigenvalues
        .iter()
        .map(|&z| MembershipRow {
            eigenvalue: z,
            regions: bundle
                .regions
                .iter()
                .filter(|r| r.scope == Scope::All || !is_real(z, scale))
                .map(|r| (r.tag.clone(), classify(&r.region, z, tol)))
                .collect(),
        })
        .collect();
}

fn record_tolerances(bundle: &mut ResultBundle, tol: &Tolerances) {
    bundle.meta("tolerances", tol);
}

/// Regions that may legitimately be unavailable (weight undefined on the
/// spectrum) become warnings; anything else is an error.
fn optional<T>(bundle: &mut ResultBundle, what: &str, r: specbox_core::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::ZeroInSpectrum(_) | Error::NonPositiveWeight { .. })) => {
            bundle.warnings.push(format!("{what} skipped: {e}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_enclose(problem: &Parsed, weights: &[Weight], tol: &Tolerances) -> CliResult<ResultBundle> {
    let s = problem.operator(tol.herm)?;
    let sp = s.spectra()?;
    let full = s.assemble();
    let s_norm = operator_norm(&full);
    let mut bundle = ResultBundle::new("enclose", None);

    bundle.push_region(
        "qnr_enclosure",
        "enclosure of the quadratic numerical range from the ranges of A, D and ||B||",
        Scope::All,
        qnr_enclosure(&sp),
    );
    bundle.push_region(
        "tretter_strip",
        "band |Im z| <= sqrt(||B||^2 - ell^2) over the strip [m_lo, m_hi]",
        Scope::NonReal,
        tretter_strip(&sp),
    );
    for &w in weights {
        for refined in [false, true] {
            let tag = format!("gershgorin_{}{}", w.tag(), if refined { "_refined" } else { "" });
            let f = w.function();
            let r = gershgorin_enclosure_with(&sp, &f, &f, refined, tol.support);
            if let Some(region) = optional(&mut bundle, &tag, r)? {
                let desc = format!(
                    "weighted ball unions, weight {}, centres over {}",
                    f.label(),
                    if refined { "the coupled spectrum" } else { "the full spectrum" }
                );
                bundle.push_region(&tag, &desc, Scope::NonReal, region);
            }
        }
    }
    for (side, tag) in [(BlockSide::A, "corollary_a"), (BlockSide::D, "corollary_d")] {
        if let Some(cor) = optional(&mut bundle, tag, inverse_abs_corollary(&sp, side))? {
            bundle.meta(&format!("{tag}_k"), cor.k);
            let desc = "discs B_{|t|k}(t) with the sector and half-plane cutoffs when k < 1";
            bundle.push_region(tag, desc, Scope::NonReal, cor.combined());
        }
    }

    bundle.eigenvalues = eigenvalues_general(&full)?;
    membership_table(&mut bundle, s_norm, tol.boundary);
    let rc = range_constants(&sp);
    bundle.meta("range_constants", rc);
    bundle.meta("b_norm", sp.b_norm);
    bundle.meta("s_norm", s_norm);
    if let Some(r) = rc.gap_radius(sp.b_norm) {
        bundle.meta("forbidden_interval", [rc.c - r, rc.c + r]);
    }
    record_tolerances(&mut bundle, tol);
    Ok(bundle)
}

pub fn validate_grid(rect: &Rect, nx: usize, ny: usize) -> CliResult<()> {
    if !rect.is_finite() || rect.width() <= 0.0 || rect.height() <= 0.0 {
        return Err(CliError::Validation(format!(
            "grid box must be finite with xmin < xmax and ymin < ymax (got {rect:?})"
        )));
    }
    if nx < 2 || ny < 2 {
        return Err(CliError::Validation(format!("grid needs at least 2x2 nodes (got {nx}x{ny})")));
    }
    Ok(())
}

pub fn cmd_certify(
    problem: &Parsed,
    rect: Rect,
    nx: usize,
    ny: usize,
    tol: &Tolerances,
    exec: Execution,
) -> CliResult<ResultBundle> {
    validate_grid(&rect, nx, ny)?;
    let s = problem.operator(tol.herm)?;
    let sp = s.spectra()?;
    let full = s.assemble();
    let s_norm = operator_norm(&full);
    let grid = grid_certify_with(&sp, rect, nx, ny, tol.cert, exec)?;
    let mut bundle = ResultBundle::new("certify", None);
    let layers = GridLayers::from(&grid);
    let count = |m: &[Option<bool>]| m.iter().filter(|v| **v == Some(true)).count();
    bundle.meta("in_best_count", count(&layers.in_best));
    bundle.meta("in_neumann_count", count(&layers.in_neumann));
    bundle.grid = Some(layers);

    bundle.eigenvalues = eigenvalues_general(&full)?;
    // certificate verdicts at the eigenvalues themselves
    let mut rows = Vec::new();
    for &z in &bundle.eigenvalues {
        if is_real(z, s_norm) {
            continue;
        }
        let c = certify_with(&sp, z, tol.cert)?;
        let v = |admit: bool, strict: bool| match (admit, strict) {
            (false, _) => Membership::Outside,
            (true, true) => Membership::Inside,
            (true, false) => Membership::Boundary,
        };
        use specbox_core::certificate::Verdict;
        rows.push(MembershipRow {
            eigenvalue: z,
            regions: [
                ("certificate_best".to_string(), v(c.in_best, c.best == Verdict::Inside)),
                ("certificate_neumann".to_string(), v(c.in_neumann, c.neumann == Verdict::Inside)),
            ]
            .into_iter()
            .collect(),
        });
    }
    bundle.membership = rows;
    bundle.meta("s_norm", s_norm);
    record_tolerances(&mut bundle, tol);
    Ok(bundle)
}

pub fn cmd_qnr(
    problem: &Parsed,
    count: usize,
    strategy: QnrStrategy,
    seed: u64,
    tol: &Tolerances,
    exec: Execution,
) -> CliResult<ResultBundle> {
    let s = problem.operator(tol.herm)?;
    let sp = s.spectra()?;
    let full = s.assemble();
    let s_norm = operator_norm(&full);
    let sample = qnr_sample(&s, count, strategy, seed, exec)?;
    let region = qnr_enclosure(&sp);
    let outside = sample
        .points
        .iter()
        .filter(|z| !region.contains_within(**z, tol.boundary * s_norm.max(1.0)))
        .count();

    let mut bundle = ResultBundle::new("qnr", Some(seed));
    bundle.push_region("qnr_enclosure", "enclosure of the quadratic numerical range", Scope::All, region);
    bundle.clouds.push(Cloud {
        tag: "qnr".into(),
        points: sample.points,
    });
    bundle.eigenvalues = eigenvalues_general(&full)?;
    membership_table(&mut bundle, s_norm, tol.boundary);

    let witnesses = eigen_witness_check(&s)?;
    let failed = witnesses
        .iter()
        .filter(|w| matches!(w.status, WitnessStatus::Failed { .. }))
        .count();
    bundle.meta("strategy", strategy);
    bundle.meta("pairs", sample.count);
    bundle.meta("points_outside_enclosure", outside);
    bundle.meta("witnesses", &witnesses);
    bundle.meta("witness_failures", failed);
    if failed > 0 {
        bundle.warnings.push(format!("{failed} eigenvalue(s) not witnessed by their block compression"));
    }
    record_tolerances(&mut bundle, tol);
    Ok(bundle)
}

#[derive(Serialize)]
struct Diagonals<'a> {
    a: Vec<f64>,
    beta: Vec<f64>,
    d: Vec<f64>,
    targets: Vec<&'a Complex64>,
}

pub fn cmd_sharpness(
    spec: &SharpnessSpec,
    samples: usize,
    exec: Execution,
) -> CliResult<(ResultBundle, SharpConstruction)> {
    let cons = construct(spec, exec)?;
    let reference = reference_samples(spec, samples)?;
    let report = density_report(&cons, &reference, exec)?;
    let rc = spec.constants();

    let mut bundle = ResultBundle::new("sharpness", Some(spec.seed));
    bundle.push_region(
        "sharp_target",
        "enclosure attained by the diagonal construction",
        Scope::All,
        specbox_core::sharpness::target_region(spec),
    );
    bundle.eigenvalues = cons.eigenvalues();
    bundle.meta("spec", spec);
    bundle.meta("range_constants", rc);
    bundle.meta("gap_radius_formula", "sqrt(ell^2 - b^2)");
    bundle.meta("density", report);
    bundle.meta("hausdorff_ratio", report.ratio());
    bundle.meta("reference_samples", reference.len());
    bundle.meta("coupling_norm", cons.coupling_norm);
    bundle.meta("b_attained", cons.b_attained);
    bundle.meta(
        "diagonals",
        Diagonals {
            a: cons.triples.iter().map(|t| t.a).collect(),
            beta: cons.triples.iter().map(|t| t.beta).collect(),
            d: cons.triples.iter().map(|t| t.d).collect(),
            targets: cons.triples.iter().map(|t| &t.target).collect(),
        },
    );
    if !cons.b_attained {
        bundle.warnings.push(format!("max beta = {} < b = {}", cons.coupling_norm, spec.b));
    }
    Ok((bundle, cons))
}

pub fn cmd_jframe(
    problem: &Parsed,
    corky_bounds: Option<(f64, f64)>,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> CliResult<ResultBundle> {
    let data = problem.jframe()?;
    let report = data.validate();
    let mut bundle = ResultBundle::new("jframe", Some(seed));
    bundle.meta("variant", data.variant);
    bundle.meta("validity", report);
    if !report.valid {
        bundle.warnings.push("J-frame data fails a positivity condition; no enclosures computed".into());
        return Ok(bundle);
    }
    let s: BlockOperator = assemble_jframe(&data)?;
    let full = s.assemble();
    let s_norm = operator_norm(&full);
    let fb = frame_bounds(&data)?;
    let inv = jframe_inverse(&data)?;
    let dense = dense_inverse(&full)?;
    bundle.meta("frame_bounds", fb);
    bundle.meta("coupling_norm", data.coupling_norm());
    bundle.meta("inverse_difference", operator_norm(&(&inv - &dense)));

    let lem = lemmens_enclosure(&data)?;
    bundle.push_region(
        "lemmens_enclosure",
        "intersection of the two cone ball unions built from the frame bounds",
        Scope::NonReal,
        lem.clone(),
    );
    let slope = sector_slope(&data);
    bundle.meta("sector_slope", slope);
    bundle.push_region(
        "jframe_sector",
        "sector |Im z| <= (||K|| / sqrt(1 - ||K||^2)) Re z",
        Scope::NonReal,
        Region::intersection(vec![Region::sector(slope), Region::half_plane(0.0, Side::Right)]),
    );

    if let Some((gamma_m, alpha_p)) = corky_bounds {
        if data.variant != JFrameVariant::Cork {
            return Err(CliError::Validation("--corky-bounds applies to cork data only".into()));
        }
        let prior = prior_bound_region(&fb, gamma_m, alpha_p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = lem.sample_points(samples, None, &mut rng)?;
        let outside = pts.iter().filter(|z| !prior.contains(**z)).count();
        bundle.meta("prior_bound_samples", pts.len());
        bundle.meta("prior_bound_outside", outside);
        bundle.push_region(
            "prior_bound",
            "open disc B(r, r), r = min(1/gamma), cut by Re z >= max(alpha)/2",
            Scope::NonReal,
            prior,
        );
    }

    bundle.eigenvalues = eigenvalues_general(&full)?;
    membership_table(&mut bundle, s_norm, tol.boundary);
    record_tolerances(&mut bundle, tol);
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemFile;
    use specbox_core::fixtures;

    fn parsed(s: &BlockOperator) -> Parsed {
        ProblemFile::parse(&ProblemFile::from_operator(s).to_json()).unwrap()
    }

    #[test]
    fn enclose_diagonal_fixture_marks_boundary() {
        let p = parsed(&fixtures::diagonal_boundary());
        let b = cmd_enclose(&p, &[Weight::One, Weight::InvAbs], &Tolerances::default()).unwrap();
        assert_eq!(b.eigenvalues.len(), 4);
        for row in &b.membership {
            assert_eq!(row.regions["gershgorin_invabs"], Membership::Boundary, "{:?}", row.eigenvalue);
            assert_ne!(row.regions["qnr_enclosure"], Membership::Outside);
        }
        assert!(b.region("corollary_a").is_some());
    }

    #[test]
    fn enclose_skips_undefined_weight() {
        let s = BlockOperator::from_matrices(
            specbox_core::linalg::real_diagonal(&[0.0, 1.0]),
            specbox_core::linalg::real_diagonal(&[0.5, 0.5]),
            specbox_core::linalg::real_diagonal(&[2.0, 3.0]),
        )
        .unwrap();
        let b = cmd_enclose(&parsed(&s), &[Weight::InvAbs], &Tolerances::default()).unwrap();
        assert!(b.region("gershgorin_invabs").is_none());
        assert!(b.region("corollary_a").is_none() && b.region("corollary_d").is_some());
        assert!(!b.warnings.is_empty());
    }

    #[test]
    fn certify_zero_coupling_is_all_false() {
        let s = BlockOperator::from_matrices(
            specbox_core::linalg::real_diagonal(&[1.0, 2.0]),
            specbox_core::CMatrix::zeros(2, 2),
            specbox_core::linalg::real_diagonal(&[0.0, 3.0]),
        )
        .unwrap();
        let rect = Rect::new(0.0, 3.0, 0.1, 1.0);
        let b = cmd_certify(&parsed(&s), rect, 20, 10, &Tolerances::default(), Execution::default()).unwrap();
        let g = b.grid.unwrap();
        assert!(g.in_best.iter().all(|v| *v == Some(false)));
        assert!(g.in_neumann.iter().all(|v| *v == Some(false)));
        assert!(b.eigenvalues.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn certify_rejects_degenerate_grid() {
        let p = parsed(&fixtures::rotation());
        let r = cmd_certify(&p, Rect::new(0.0, 0.0, 0.1, 1.0), 10, 10, &Tolerances::default(), Execution::default());
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn qnr_bundle() {
        let p = parsed(&fixtures::complex_coupled());
        let b = cmd_qnr(&p, 500, QnrStrategy::Mixed, 5, &Tolerances::default(), Execution::default()).unwrap();
        assert_eq!(b.metadata["points_outside_enclosure"], 0);
        assert_eq!(b.metadata["witness_failures"], 0);
        assert!(b.clouds[0].points.len() >= 1000);
    }

    #[test]
    fn jframe_bundle() {
        let s = fixtures::jframe_diagonal();
        let file = ProblemFile {
            a: None,
            b: None,
            d: None,
            jframe: Some(crate::problem::JFrameFile {
                variant: s.variant,
                p: crate::problem::to_rows(s.p.matrix()),
                coupling: crate::problem::to_rows(&s.coupling),
                q: crate::problem::to_rows(s.q.matrix()),
            }),
            meta: None,
        };
        let p = ProblemFile::parse(&file.to_json()).unwrap();
        let b = cmd_jframe(&p, Some((0.5, 1.25)), 2000, 1, &Tolerances::default()).unwrap();
        assert_eq!(b.metadata["prior_bound_outside"], 0);
        for row in &b.membership {
            if row.eigenvalue.im.abs() > 1e-8 {
                assert_ne!(row.regions["lemmens_enclosure"], Membership::Outside);
                assert_ne!(row.regions["jframe_sector"], Membership::Outside);
            }
        }
    }
}
